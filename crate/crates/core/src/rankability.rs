//! Linear rankability: does some `beta` order every pair of instances
//! strictly like their responses?

use crate::directions::{angular_sweep, normalize, orthant_grid};
use crate::error::{Error, Result};
use crate::losses::{hard_loss, LossSpec};
use crate::model::{Dataset, LinearScorer, ResponseKind};

/// Perceptron update cap.
pub const PERCEPTRON_CAP: usize = 1_000_000;

/// How firmly a negative answer is established.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certainty {
    /// Exact (p = 1, 2), or grid plus local refinement found nothing (p = 3).
    Certified,
    /// Perceptron cap reached for p > 3 without a witness.
    Presumed,
}

/// Answer of [`is_linearly_rankable`].
#[derive(Debug, Clone, PartialEq)]
pub struct Rankability {
    pub rankable: bool,
    /// Witness scaled so that `sign(y_i - y_j) (x_i - x_j) . beta >= 1` for
    /// every pair with distinct responses.
    pub witness: Option<LinearScorer>,
    pub certainty: Certainty,
    /// Reason for a negative answer, when one is known.
    pub cause: Option<String>,
}

impl Rankability {
    fn yes(beta: Vec<f64>) -> Self {
        Rankability {
            rankable: true,
            witness: Some(LinearScorer::new(beta, 0.0)),
            certainty: Certainty::Certified,
            cause: None,
        }
    }

    fn no(certainty: Certainty, cause: impl Into<String>) -> Self {
        Rankability {
            rankable: false,
            witness: None,
            certainty,
            cause: Some(cause.into()),
        }
    }
}

fn signed_differences(data: &Dataset) -> Result<Vec<Vec<f64>>> {
    let y = data.y();
    let mut diffs = Vec::new();
    for i in 0..data.n() {
        for j in i + 1..data.n() {
            if y[i] == y[j] {
                continue;
            }
            let s = (y[i] - y[j]).signum();
            let d: Vec<f64> = data
                .row(i)
                .iter()
                .zip(data.row(j))
                .map(|(a, b)| s * (a - b))
                .collect();
            if d.iter().all(|&v| v == 0.0) {
                return Err(Error::DegenerateData(format!(
                    "instances {i} and {j} share regressors but differ in response"
                )));
            }
            diffs.push(d);
        }
    }
    Ok(diffs)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Smallest margin of `beta` over the difference vectors.
fn min_margin(diffs: &[Vec<f64>], beta: &[f64]) -> f64 {
    diffs
        .iter()
        .map(|d| dot(d, beta))
        .fold(f64::INFINITY, f64::min)
}

/// Rescale a strictly separating direction to margin 1.
fn to_margin_one(diffs: &[Vec<f64>], beta: Vec<f64>) -> Vec<f64> {
    let m = min_margin(diffs, &beta);
    if diffs.is_empty() || !m.is_finite() {
        return beta;
    }
    beta.into_iter().map(|v| v / m).collect()
}

fn perceptron(diffs: &[Vec<f64>], p: usize, cap: usize) -> Option<Vec<f64>> {
    let mut beta = vec![0.0; p];
    let mut updates = 0;
    loop {
        let mut clean = true;
        for d in diffs {
            if dot(d, &beta) <= 0.0 {
                let scale = dot(d, d).sqrt();
                beta.iter_mut().zip(d).for_each(|(b, v)| *b += v / scale);
                updates += 1;
                clean = false;
                if updates >= cap {
                    return None;
                }
            }
        }
        if clean {
            return Some(beta);
        }
    }
}

fn refine(diffs: &[Vec<f64>], start: Vec<f64>) -> Vec<f64> {
    let p = start.len();
    let mut best = normalize(start);
    let mut score = min_margin(diffs, &best);
    let mut step = 0.25;
    while step > 1e-9 {
        let mut improved = false;
        for j in 0..p {
            for s in [step, -step] {
                let mut cand = best.clone();
                cand[j] += s;
                let cand = normalize(cand);
                let v = min_margin(diffs, &cand);
                if v > score {
                    best = cand;
                    score = v;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    best
}

/// Decide whether a continuous-response sample is linearly rankable and
/// return a margin-1 witness when it is.
pub fn is_linearly_rankable(data: &Dataset) -> Result<Rankability> {
    if data.kind() != ResponseKind::Continuous {
        return Err(Error::InvalidParameter(
            "rankability is defined for continuous responses only".into(),
        ));
    }
    let diffs = match signed_differences(data) {
        Ok(d) => d,
        Err(Error::DegenerateData(cause)) => {
            return Ok(Rankability::no(Certainty::Certified, cause))
        }
        Err(e) => return Err(e),
    };
    let p = data.p();
    let candidates: Vec<Vec<f64>> = match p {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => {
            let d2: Vec<[f64; 2]> = diffs.iter().map(|d| [d[0], d[1]]).collect();
            angular_sweep(&d2)
        }
        _ => {
            if let Some(beta) = perceptron(&diffs, p, PERCEPTRON_CAP) {
                return Ok(Rankability::yes(to_margin_one(&diffs, beta)));
            }
            if p > 3 {
                return Ok(Rankability::no(
                    Certainty::Presumed,
                    "no separating direction found within the perceptron cap",
                ));
            }
            let grid = orthant_grid(p, 12);
            let start = grid
                .into_iter()
                .max_by(|a, b| min_margin(&diffs, a).total_cmp(&min_margin(&diffs, b)))
                .ok_or(Error::EmptySearch)?;
            vec![refine(&diffs, start)]
        }
    };
    for beta in candidates {
        if diffs.is_empty() || min_margin(&diffs, &beta) > 0.0 {
            return Ok(Rankability::yes(to_margin_one(&diffs, beta)));
        }
    }
    Ok(Rankability::no(
        Certainty::Certified,
        "no direction orders every pair strictly",
    ))
}

/// True iff `scorer` has zero indicator hard loss on `data` (ties allowed).
pub fn rankable_by(data: &Dataset, scorer: &LinearScorer) -> Result<bool> {
    Ok(hard_loss(data, scorer, &LossSpec::Indicator)? == 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triple() -> Dataset {
        Dataset::new(
            vec![vec![1.0, 1.0], vec![0.0, 3.0], vec![3.0, 2.0]],
            vec![1.0, 2.0, 3.0],
            ResponseKind::Continuous,
        )
        .unwrap()
    }

    fn uni(x: &[f64], y: &[f64]) -> Dataset {
        Dataset::univariate(x, y, ResponseKind::Continuous).unwrap()
    }

    #[test]
    fn examples() {
        let t = triple();
        let r = is_linearly_rankable(&t).unwrap();
        assert!(r.rankable);
        assert!(rankable_by(&t, r.witness.as_ref().unwrap()).unwrap());
        assert!(rankable_by(&t, &LinearScorer::new(vec![1.0, 1.0], 0.0)).unwrap());
        assert!(!rankable_by(&t, &LinearScorer::new(vec![-1.0, -1.0], 0.0)).unwrap());
        assert!(rankable_by(&t, &LinearScorer::zeros(2)).unwrap());

        let pair = is_linearly_rankable(&uni(&[1.0, 2.0], &[1.0, 2.0])).unwrap();
        assert!(pair.rankable);
        assert!(pair.witness.unwrap().beta[0] > 0.0);

        let bad = is_linearly_rankable(&uni(&[1.0, 2.0, 3.0], &[2.0, 1.0, 3.0])).unwrap();
        assert!(!bad.rankable);
        assert_eq!(bad.certainty, Certainty::Certified);
    }

    #[test]
    fn witness_has_unit_margin() {
        let t = triple();
        let w = is_linearly_rankable(&t).unwrap().witness.unwrap();
        let diffs = signed_differences(&t).unwrap();
        assert!((min_margin(&diffs, &w.beta) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn duplicate_rows_are_inrankable() {
        let d = Dataset::new(
            vec![vec![1.0, 2.0], vec![1.0, 2.0], vec![0.0, 0.0]],
            vec![1.0, 2.0, 3.0],
            ResponseKind::Continuous,
        )
        .unwrap();
        let r = is_linearly_rankable(&d).unwrap();
        assert!(!r.rankable);
        assert!(r.cause.unwrap().contains("share regressors"));
    }

    #[test]
    fn higher_dimensions() {
        let rows = vec![
            vec![1.0, 0.0, 0.5],
            vec![0.0, 1.0, 0.2],
            vec![2.0, 1.0, -1.0],
            vec![0.5, 3.0, 1.0],
        ];
        let y: Vec<f64> = rows.iter().map(|r| r[0] + 2.0 * r[1] - r[2]).collect();
        let d = Dataset::new(rows, y, ResponseKind::Continuous).unwrap();
        let r = is_linearly_rankable(&d).unwrap();
        assert!(r.rankable);
        assert!(rankable_by(&d, r.witness.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn rejects_categorical() {
        let d = Dataset::univariate(&[1.0, 2.0], &[-1.0, 1.0], ResponseKind::Binary).unwrap();
        assert!(is_linearly_rankable(&d).is_err());
    }
}
