use oibdp::estimators::{gram_matrix, svr_swap_check, Kernel, SvrConfig, MAX_SVR_N};
use oibdp::{Dataset, ResponseKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::args::{KernelArg, SvrCheckArgs};
use crate::design::{linear_responses, seeded_design};
use crate::failure::{Failure, Outcome, CHECK_FAILED};
use crate::output::print_json;

#[derive(Serialize)]
struct SvrBody {
    n: usize,
    p: usize,
    seed: u64,
    c: f64,
    eps: f64,
    kernel: Kernel,
    tol: f64,
    holds: bool,
    alpha_gap: f64,
    objective_gap: f64,
}

/// Seeded design with responses `sum_j x_j` plus uniform noise in
/// `[-0.5, 0.5]`.
fn sample(n: usize, p: usize, seed: u64) -> Outcome<Dataset> {
    let rows = seeded_design(n, p, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let y = linear_responses(&rows, &vec![1.0; p])
        .into_iter()
        .map(|s| s + rng.random_range(-0.5..=0.5))
        .collect();
    Ok(Dataset::relaxed(rows, y, ResponseKind::Continuous)?)
}

pub fn run(args: &SvrCheckArgs) -> Outcome<u8> {
    if args.n < 2 || args.n > MAX_SVR_N || args.p == 0 {
        return Err(Failure::usage(format!(
            "svr-check needs 2 <= n <= {MAX_SVR_N} and p >= 1"
        )));
    }
    if !(args.c > 0.0 && args.c.is_finite()) || !(args.eps >= 0.0 && args.eps.is_finite()) {
        return Err(Failure::usage("--c must be > 0 and --eps >= 0"));
    }
    if !(args.tol > 0.0) {
        return Err(Failure::usage("--tol must be > 0"));
    }
    let kernel = match args.kernel {
        KernelArg::Linear => Kernel::Linear,
        KernelArg::Polynomial => Kernel::Polynomial {
            degree: args.degree,
            coef0: args.coef0,
        },
    };
    let data = sample(args.n, args.p, args.seed)?;
    let gram = gram_matrix(&data, &kernel);
    let check = svr_swap_check(&gram, data.y(), &SvrConfig::new(args.c, args.eps), args.tol)?;
    print_json(
        "svr-check",
        &SvrBody {
            n: args.n,
            p: args.p,
            seed: args.seed,
            c: args.c,
            eps: args.eps,
            kernel,
            tol: args.tol,
            holds: check.holds,
            alpha_gap: check.alpha_gap,
            objective_gap: check.objective_gap,
        },
    )?;
    Ok(if check.holds { 0 } else { CHECK_FAILED })
}
