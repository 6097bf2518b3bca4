use oibdp::formulas::{bdp, sparse_effective_bdp};

use super::problem_class;
use crate::args::BdpArgs;
use crate::failure::{Failure, Outcome, NONEXISTENT};
use crate::output::print_json;

pub fn run(args: &BdpArgs) -> Outcome<u8> {
    let n = args
        .problem
        .n
        .ok_or_else(|| Failure::usage("--n is required"))?;
    let class = problem_class(&args.problem, n, args.problem.p)?;
    let report = match args.q {
        Some(q) => sparse_effective_bdp(&class, q)?,
        None => bdp(&class)?,
    };
    print_json("bdp", &report)?;
    Ok(if report.exists { 0 } else { NONEXISTENT })
}
