use oibdp::formulas::{bdp, ProblemClass};
use oibdp::BreakdownReport;
use rayon::prelude::*;

use super::{check_task_flags, task_of};
use crate::args::{LossArg, SweepArgs};
use crate::failure::{Failure, Outcome};
use crate::output::{cell, write_csv};

pub const HEADER: [&str; 5] = ["n", "p", "m_min", "bdp", "k"];

/// Parse an inclusive range `a:b` with `a <= b`.
pub fn parse_range(text: &str) -> Outcome<(usize, usize)> {
    let bad = || Failure::usage(format!("--n-range must look like a:b, got '{text}'"));
    let (a, b) = text.split_once(':').ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(Failure::usage(format!("--n-range {text} is empty")));
    }
    Ok((a, b))
}

fn k_for(n: usize, fraction: f64) -> usize {
    ((fraction * n as f64).ceil() as usize).clamp(1, n.max(1))
}

pub fn run(args: &SweepArgs) -> Outcome<u8> {
    let (lo, hi) = parse_range(&args.n_range)?;
    if args.p.is_empty() || args.p.contains(&0) {
        return Err(Failure::usage("--p must list dimensions >= 1"));
    }
    if let Some(f) = args.k_fraction.iter().find(|f| !(**f > 0.0 && **f <= 1.0)) {
        return Err(Failure::usage(format!(
            "--k-fraction values must be in (0, 1], got {f}"
        )));
    }
    let fractions: Vec<Option<f64>> = if args.k_fraction.is_empty() {
        vec![None]
    } else {
        args.k_fraction.iter().copied().map(Some).collect()
    };
    let has_k = args.k.is_some() || !args.k_fraction.is_empty();
    check_task_flags(args.task, has_k.then_some(1), args.d_classes)?;

    let mut cells = Vec::new();
    for n in lo..=hi {
        for &p in &args.p {
            for &f in &fractions {
                cells.push((n, p, f.map(|f| k_for(n, f)).or(args.k)));
            }
        }
    }
    let task = task_of(args.task, args.variant);
    let reports: Vec<BreakdownReport> = cells
        .par_iter()
        .map(|&(n, p, k)| {
            let mut class = ProblemClass::new(task, n, p);
            if let Some(k) = k {
                class = class.with_k(k);
            }
            if let Some(d) = args.d_classes {
                class = class.with_classes(d);
            }
            if args.loss == LossArg::Unbounded {
                class = class.unbounded();
            }
            bdp(&class).map_err(|e| {
                let f = Failure::from(e);
                Failure::new(f.code, format!("n={n} p={p}: {}", f.message))
            })
        })
        .collect::<Outcome<_>>()?;
    let rows: Vec<Vec<String>> = cells
        .iter()
        .zip(&reports)
        .map(|(&(n, p, k), r)| {
            vec![
                n.to_string(),
                p.to_string(),
                cell(r.m_min),
                cell(r.bdp),
                cell(k),
            ]
        })
        .collect();
    write_csv(args.out.as_deref(), &HEADER, &rows)?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("4:500").unwrap(), (4, 500));
        assert_eq!(parse_range("7:7").unwrap(), (7, 7));
        assert_eq!(parse_range("9:4").unwrap_err().code, 64);
        assert_eq!(parse_range("4-9").unwrap_err().code, 64);
    }

    #[test]
    fn fractional_k_rounds_up() {
        assert_eq!(k_for(10, 0.25), 3);
        assert_eq!(k_for(10, 1.0), 10);
        assert_eq!(k_for(10, 0.01), 1);
    }
}
