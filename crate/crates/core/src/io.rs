//! Dataset CSV format: header `x1,...,xp,y`, one instance per row. The
//! response kind is supplied by the caller.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::model::{Dataset, ResponseKind};

/// Parse a dataset. Continuous samples with repeated responses are
/// accepted through the relaxed constructor only when `strict` is false.
pub fn read_dataset<R: Read>(reader: R, kind: ResponseKind, strict: bool) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr.headers()?.clone();
    let cols: Vec<&str> = header.iter().collect();
    let p = cols.len().saturating_sub(1);
    let expected: Vec<String> = (1..=p)
        .map(|j| format!("x{j}"))
        .chain(["y".into()])
        .collect();
    if p == 0 || cols != expected {
        return Err(Error::Csv(format!(
            "header must be {}, got {}",
            expected.join(","),
            cols.join(",")
        )));
    }
    let mut rows = Vec::new();
    let mut y = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let values: Vec<f64> = rec
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| Error::Csv(format!("row {}: '{f}' is not a number", line + 1)))
            })
            .collect::<Result<_>>()?;
        if values.len() != p + 1 {
            return Err(Error::Csv(format!(
                "row {} has {} fields",
                line + 1,
                values.len()
            )));
        }
        y.push(values[p]);
        rows.push(values[..p].to_vec());
    }
    if strict {
        Dataset::new(rows, y, kind)
    } else {
        Dataset::relaxed(rows, y, kind)
    }
}

/// Write a dataset with the standard header, shortest round-trip floats.
pub fn write_dataset<W: Write>(writer: W, data: &Dataset) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let header: Vec<String> = (1..=data.p())
        .map(|j| format!("x{j}"))
        .chain(["y".into()])
        .collect();
    w.write_record(&header)?;
    for (i, row) in data.rows().enumerate() {
        let rec: Vec<String> = row
            .iter()
            .chain(std::iter::once(&data.y()[i]))
            .map(|v| v.to_string())
            .collect();
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| Error::Csv(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "x1,x2,y\n1,1,1\n0,3,2\n3,2,3\n";
        let d = read_dataset(text.as_bytes(), ResponseKind::Continuous, true).unwrap();
        assert_eq!((d.n(), d.p()), (3, 2));
        let mut out = Vec::new();
        write_dataset(&mut out, &d).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), text);
    }

    #[test]
    fn rejects_bad_input() {
        let bad_header = "a,b\n1,2\n";
        assert!(read_dataset(bad_header.as_bytes(), ResponseKind::Continuous, true).is_err());
        let bad_value = "x1,y\n1,oops\n2,3\n";
        assert!(read_dataset(bad_value.as_bytes(), ResponseKind::Continuous, true).is_err());
        let ties = "x1,y\n1,1\n2,1\n";
        assert!(read_dataset(ties.as_bytes(), ResponseKind::Continuous, true).is_err());
        assert!(read_dataset(ties.as_bytes(), ResponseKind::Continuous, false).is_ok());
    }
}
