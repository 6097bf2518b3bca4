use oibdp::estimators::{FitConfig, RankingTask};
use oibdp::formulas::{bdp, ProblemClass};
use oibdp::losses::LossSpec;
use oibdp::schemes::{AttackConfig, Scheme};
use oibdp::verify::{expected_oibdp, MonteCarlo, Noise};
use oibdp::BreakdownReport;
use serde::Serialize;

use crate::args::{ExpectedArgs, NoiseArg};
use crate::design::default_design;
use crate::failure::{Failure, Outcome};
use crate::output::{print_json, write_csv};

pub const SUMMARY_HEADER: [&str; 11] = [
    "n",
    "p",
    "trials",
    "noise",
    "scale",
    "seed",
    "mean",
    "stderr",
    "nonexistent",
    "pre_broken",
    "formula_bdp",
];

#[derive(Serialize)]
struct ExpectedBody<'a> {
    n: usize,
    p: usize,
    trials: usize,
    noise: NoiseArg,
    scale: f64,
    seed: u64,
    formula: &'a BreakdownReport,
    mean: f64,
    stderr: f64,
    nonexistent: usize,
    pre_broken: usize,
    ratios: &'a [f64],
}

pub fn run(args: &ExpectedArgs) -> Outcome<u8> {
    if args.p == 0 {
        return Err(Failure::usage("--p must be >= 1"));
    }
    let noise = match args.noise {
        NoiseArg::Zero => Noise::Zero,
        NoiseArg::Gaussian => Noise::Gaussian { sigma: args.scale },
        NoiseArg::Uniform => Noise::Uniform {
            half_width: args.scale,
        },
    };
    let formula = bdp(&ProblemClass::hard(args.n, args.p))?;
    let design = default_design(args.n, args.p, args.seed);
    let beta = vec![1.0; args.p];
    let mc = MonteCarlo {
        noise,
        trials: args.trials,
        seed: args.seed,
        scheme: if args.p == 1 {
            Scheme::UnivariateHard
        } else {
            Scheme::Axiswise
        },
        task: RankingTask::Hard(LossSpec::Indicator),
        fit: FitConfig::default(),
        attack: AttackConfig::default(),
    };
    let report = expected_oibdp(&design, &beta, 0.0, &mc)?;
    if let Some(path) = &args.summary_csv {
        let noise_name = serde_json::to_value(args.noise)
            .ok()
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_default();
        let row = vec![
            args.n.to_string(),
            args.p.to_string(),
            args.trials.to_string(),
            noise_name,
            args.scale.to_string(),
            args.seed.to_string(),
            report.mean.to_string(),
            report.stderr.to_string(),
            report.nonexistent.to_string(),
            report.pre_broken.to_string(),
            crate::output::cell(formula.bdp),
        ];
        write_csv(Some(path), &SUMMARY_HEADER, &[row])?;
    }
    print_json(
        "expected",
        &ExpectedBody {
            n: args.n,
            p: args.p,
            trials: args.trials,
            noise: args.noise,
            scale: args.scale,
            seed: args.seed,
            formula: &formula,
            mean: report.mean,
            stderr: report.stderr,
            nonexistent: report.nonexistent,
            pre_broken: report.pre_broken,
            ratios: &report.ratios,
        },
    )?;
    Ok(0)
}
