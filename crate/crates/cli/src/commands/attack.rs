use std::fs::File;
use std::path::PathBuf;

use oibdp::io::write_dataset;
use oibdp::schemes::{AttackConfig, Scheme};
use oibdp::{Outlier, ResponseKind};
use serde::Serialize;

use super::{read_input, reference};
use crate::args::{AttackArgs, KindArg, SchemeArg};
use crate::failure::{Failure, Outcome};
use crate::output::write_json;

#[derive(Serialize)]
struct Settings<'a> {
    input: &'a PathBuf,
    output: &'a PathBuf,
    kind: ResponseKind,
    reference: Vec<f64>,
    gap: f64,
    magnitude: f64,
}

#[derive(Serialize)]
struct Manifest<'a> {
    scheme: &'static str,
    m: usize,
    k: Option<usize>,
    n: usize,
    p: usize,
    replaced: &'a [usize],
    outliers: &'a [Outlier],
    config: Settings<'a>,
}

fn scheme_of(args: &AttackArgs, kind: ResponseKind, p: usize) -> Outcome<Scheme> {
    let categorical = kind != ResponseKind::Continuous;
    let scheme = match args.scheme {
        SchemeArg::Univariate if p != 1 => {
            return Err(Failure::usage("the univariate scheme needs p = 1"))
        }
        SchemeArg::Univariate => Scheme::UnivariateHard,
        SchemeArg::Axiswise => Scheme::Axiswise,
        SchemeArg::AxiswiseUnbounded => Scheme::AxiswiseUnbounded,
        SchemeArg::Binary if !categorical => {
            return Err(Failure::usage(
                "the binary scheme needs --kind binary or dpartite",
            ))
        }
        SchemeArg::Binary => Scheme::Binary,
        SchemeArg::Localized => Scheme::Localized {
            k: args
                .k
                .ok_or_else(|| Failure::usage("--K is required for the localized scheme"))?,
        },
    };
    if categorical && args.scheme != SchemeArg::Binary {
        return Err(Failure::usage(
            "categorical data only supports the binary scheme",
        ));
    }
    if args.k.is_some() && args.scheme != SchemeArg::Localized {
        return Err(Failure::usage("--K only applies to the localized scheme"));
    }
    Ok(scheme)
}

pub fn run(args: &AttackArgs) -> Outcome<u8> {
    let kind = match (args.kind, args.d_classes) {
        (KindArg::Continuous, None) => ResponseKind::Continuous,
        (KindArg::Binary, None) => ResponseKind::Binary,
        (KindArg::Dpartite, Some(d)) => ResponseKind::DPartite(d),
        (KindArg::Dpartite, None) => {
            return Err(Failure::usage(
                "--d-classes is required for --kind dpartite",
            ))
        }
        (_, Some(_)) => {
            return Err(Failure::usage(
                "--d-classes only applies to --kind dpartite",
            ))
        }
    };
    let data = read_input(&args.input, kind)?;
    let scheme = scheme_of(args, kind, data.p())?;
    let signs = reference(args.reference.as_deref(), data.p())?;
    let cfg = AttackConfig {
        magnitude: args.placement.magnitude,
        gap: args.placement.gap,
        ..AttackConfig::default()
    };
    if args.m == 0 || args.m > scheme.max_m(data.n()) {
        return Err(Failure::usage(format!(
            "--m must be in 1..={} for this scheme",
            scheme.max_m(data.n())
        )));
    }
    let cs = scheme.build(&data, args.m, &cfg, &signs)?;
    let file = File::create(&args.output).map_err(|e| Failure::unwritable(&args.output, e))?;
    write_dataset(file, &cs.merged()).map_err(|e| Failure::unwritable(&args.output, e))?;
    let manifest = Manifest {
        scheme: scheme.label(),
        m: cs.m(),
        k: args.k,
        n: data.n(),
        p: data.p(),
        replaced: cs.outlier_indices(),
        outliers: cs.outliers(),
        config: Settings {
            input: &args.input,
            output: &args.output,
            kind,
            reference: signs,
            gap: cfg.gap,
            magnitude: cfg.magnitude,
        },
    };
    write_json(&args.manifest, "attack", &manifest)?;
    Ok(0)
}
