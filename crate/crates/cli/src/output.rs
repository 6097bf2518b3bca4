use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::failure::{Failure, Outcome};

/// Version of the JSON and CSV layouts described by the files in `schemas/`.
pub const SCHEMA_VERSION: &str = "1.0.0";

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: &'static str,
    command: &'a str,
    #[serde(flatten)]
    body: &'a T,
}

fn render<T: Serialize>(command: &str, body: &T) -> Outcome<String> {
    let env = Envelope {
        schema_version: SCHEMA_VERSION,
        command,
        body,
    };
    let mut text = serde_json::to_string_pretty(&env)
        .map_err(|e| Failure::new(crate::failure::IO, format!("cannot encode JSON: {e}")))?;
    text.push('\n');
    Ok(text)
}

/// Print a versioned JSON document to standard output.
pub fn print_json<T: Serialize>(command: &str, body: &T) -> Outcome<()> {
    let text = render(command, body)?;
    io::stdout()
        .write_all(text.as_bytes())
        .map_err(|e| Failure::new(crate::failure::IO, format!("cannot write output: {e}")))
}

/// Write a versioned JSON document to `path`.
pub fn write_json<T: Serialize>(path: &Path, command: &str, body: &T) -> Outcome<()> {
    let text = render(command, body)?;
    std::fs::write(path, text).map_err(|e| Failure::unwritable(path, e))
}

/// A CSV writer on `path`, or on standard output when absent.
pub fn csv_writer(path: Option<&Path>) -> Outcome<csv::Writer<Box<dyn Write>>> {
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure::unwritable(p, e))?,
        )),
        None => Box::new(io::stdout()),
    };
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(sink))
}

/// Write all `rows` after `header` and flush.
pub fn write_csv(path: Option<&Path>, header: &[&str], rows: &[Vec<String>]) -> Outcome<()> {
    let label = path.map_or_else(
        || "standard output".to_string(),
        |p| p.display().to_string(),
    );
    let fail = |e: &dyn std::fmt::Display| {
        Failure::new(crate::failure::IO, format!("cannot write {label}: {e}"))
    };
    let mut w = csv_writer(path)?;
    w.write_record(header).map_err(|e| fail(&e))?;
    for row in rows {
        w.write_record(row).map_err(|e| fail(&e))?;
    }
    w.flush().map_err(|e| fail(&e))
}

/// Empty cell for missing values.
pub fn cell<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}
