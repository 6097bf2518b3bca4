//! Epsilon-insensitive support vector regression dual, solved in the
//! difference variable `theta = alpha* - alpha`:
//!
//! minimize `eps |theta|_1 - y . theta + theta' K theta / 2`
//! subject to `|theta_i| <= C` and `sum theta = 0`.
//!
//! Every step moves a working pair (maximal violator plus second-order
//! partner) exactly to the minimum of the one-dimensional piecewise
//! quadratic along `e_a - e_b`. A periodic Newton step on the coordinates
//! off every kink and bound handles nearly flat directions.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Dataset;

/// Largest sample the solver accepts.
pub const MAX_SVR_N: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Kernel {
    Linear,
    /// `(<x, z> + coef0)^degree`
    Polynomial {
        degree: u32,
        coef0: f64,
    },
}

impl Kernel {
    pub fn eval(&self, a: &[f64], b: &[f64]) -> f64 {
        let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
        match *self {
            Kernel::Linear => dot,
            Kernel::Polynomial { degree, coef0 } => (dot + coef0).powi(degree as i32),
        }
    }
}

/// Kernel matrix of the regressors.
pub fn gram_matrix(data: &Dataset, kernel: &Kernel) -> Vec<Vec<f64>> {
    data.rows()
        .map(|a| data.rows().map(|b| kernel.eval(a, b)).collect())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvrConfig {
    pub c: f64,
    pub eps_tube: f64,
    /// Stop when the maximal KKT violation is at most this times
    /// `max(1, largest diagonal kernel entry)`.
    pub tol: f64,
    pub max_iter: usize,
}

impl SvrConfig {
    pub fn new(c: f64, eps_tube: f64) -> Self {
        SvrConfig {
            c,
            eps_tube,
            tol: 1e-8,
            max_iter: 200_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvrSolution {
    pub alpha: Vec<f64>,
    pub alpha_star: Vec<f64>,
    pub b: f64,
    pub objective: f64,
    pub iterations: usize,
    pub kkt_residual: f64,
    pub converged: bool,
}

impl SvrSolution {
    /// `alpha* - alpha`.
    pub fn theta(&self) -> Vec<f64> {
        self.alpha_star
            .iter()
            .zip(&self.alpha)
            .map(|(s, a)| s - a)
            .collect()
    }
}

fn dual_objective(gram: &[Vec<f64>], y: &[f64], theta: &[f64], eps: f64) -> f64 {
    let n = theta.len();
    let mut quad = 0.0;
    for i in 0..n {
        let row: f64 = (0..n).map(|j| gram[i][j] * theta[j]).sum();
        quad += theta[i] * row;
    }
    let l1: f64 = theta.iter().map(|t| t.abs()).sum();
    let lin: f64 = y.iter().zip(theta).map(|(a, b)| a * b).sum();
    eps * l1 - lin + 0.5 * quad
}

/// Right derivative of the objective when `theta_i` increases.
fn up(h: f64, theta: f64, eps: f64) -> f64 {
    h + if theta >= 0.0 { eps } else { -eps }
}

/// Left derivative of the objective when `theta_i` decreases, negated.
fn down(h: f64, theta: f64, eps: f64) -> f64 {
    h + if theta > 0.0 { eps } else { -eps }
}

/// Maximal KKT violation: the smallest `up` among coordinates that can grow
/// against the largest `down` among those that can shrink, with indices.
fn violation(h: &[f64], theta: &[f64], c: f64, eps: f64) -> Option<(usize, usize, f64)> {
    let mut i = None;
    let mut j = None;
    for k in 0..theta.len() {
        if theta[k] < c {
            let v = up(h[k], theta[k], eps);
            if i.is_none_or(|(_, best)| v < best) {
                i = Some((k, v));
            }
        }
        if theta[k] > -c {
            let v = down(h[k], theta[k], eps);
            if j.is_none_or(|(_, best)| v > best) {
                j = Some((k, v));
            }
        }
    }
    let ((i, vi), (j, vj)) = (i?, j?);
    Some((i, j, vj - vi))
}

/// Working pair: `i` grows with the smallest `up`; `j` shrinks and maximizes
/// the second-order gain `b^2 / a` over violating partners; ties by index.
fn select(gram: &[Vec<f64>], h: &[f64], theta: &[f64], c: f64, eps: f64) -> Option<(usize, usize)> {
    let (i, _, _) = violation(h, theta, c, eps)?;
    let ui = up(h[i], theta[i], eps);
    let mut best: Option<(usize, f64)> = None;
    for k in 0..theta.len() {
        if k == i || theta[k] <= -c {
            continue;
        }
        let b = down(h[k], theta[k], eps) - ui;
        if b <= 0.0 {
            continue;
        }
        let a = (gram[i][i] + gram[k][k] - 2.0 * gram[i][k]).max(CURVATURE_FLOOR);
        let gain = b * b / a;
        if best.is_none_or(|(_, g)| gain > g) {
            best = Some((k, gain));
        }
    }
    best.map(|(j, _)| (i, j))
}

const CURVATURE_FLOOR: f64 = 1e-12;

/// Newton step on the coordinates strictly between a kink and a bound:
/// minimize the smooth restricted quadratic under `sum(delta) = 0`, then
/// move exactly along that direction up to the first kink or bound.
/// Returns false when no descent was possible.
fn subspace_step(gram: &[Vec<f64>], h: &mut [f64], theta: &mut [f64], c: f64, eps: f64) -> bool {
    let free: Vec<usize> = (0..theta.len())
        .filter(|&k| theta[k] != 0.0 && theta[k].abs() < c)
        .collect();
    let f = free.len();
    if f < 2 {
        return false;
    }
    let grad: Vec<f64> = free
        .iter()
        .map(|&k| h[k] + eps * theta[k].signum())
        .collect();
    let ridge = 1e-10 * free.iter().map(|&k| gram[k][k].abs()).fold(1.0, f64::max);
    let mut kkt = DMatrix::<f64>::zeros(f + 1, f + 1);
    for (r, &kr) in free.iter().enumerate() {
        for (q, &kq) in free.iter().enumerate() {
            kkt[(r, q)] = gram[kr][kq];
        }
        kkt[(r, r)] += ridge;
        kkt[(r, f)] = 1.0;
        kkt[(f, r)] = 1.0;
    }
    let rhs = DVector::from_iterator(f + 1, grad.iter().map(|g| -g).chain([0.0]));
    let Some(sol) = kkt.lu().solve(&rhs) else {
        return false;
    };
    let mean = sol.iter().take(f).sum::<f64>() / f as f64;
    let delta: Vec<f64> = sol.iter().take(f).map(|d| d - mean).collect();
    let slope: f64 = grad.iter().zip(&delta).map(|(g, d)| g * d).sum();
    if !(slope < 0.0) {
        return false;
    }
    let mut curvature = 0.0;
    for (r, &kr) in free.iter().enumerate() {
        for (q, &kq) in free.iter().enumerate() {
            curvature += delta[r] * gram[kr][kq] * delta[q];
        }
    }
    // The full Newton step is the restricted minimizer; never go beyond it,
    // or roundoff directions at an optimum get amplified.
    let mut t = if curvature > 0.0 {
        (-slope / curvature).min(1.0)
    } else {
        f64::INFINITY
    };
    for (r, &k) in free.iter().enumerate() {
        let (tk, dk) = (theta[k], delta[r]);
        let limit = if dk > 0.0 {
            if tk < 0.0 {
                -tk / dk
            } else {
                (c - tk) / dk
            }
        } else if dk < 0.0 {
            if tk > 0.0 {
                tk / -dk
            } else {
                (c + tk) / -dk
            }
        } else {
            f64::INFINITY
        };
        t = t.min(limit);
    }
    if !(t.is_finite() && t > 0.0) {
        return false;
    }
    for (r, &k) in free.iter().enumerate() {
        let step = t * delta[r];
        theta[k] = snap(theta[k] + step, c);
        for (m, hm) in h.iter_mut().enumerate() {
            *hm += step * gram[m][k];
        }
    }
    true
}

/// One Newton step on the free coordinates of a converged iterate, kept
/// only if it does not increase the KKT gap.
fn polish(gram: &[Vec<f64>], h: &mut [f64], theta: &mut [f64], c: f64, eps: f64, gap: f64) {
    let (h0, t0) = (h.to_vec(), theta.to_vec());
    if subspace_step(gram, h, theta, c, eps)
        && violation(h, theta, c, eps).is_some_and(|(_, _, g)| g > gap)
    {
        h.copy_from_slice(&h0);
        theta.copy_from_slice(&t0);
    }
}

/// Exact minimizer over `[lo, hi]` of
/// `a d^2 / 2 + g d + eps (|ta + d| + |tb - d|)`, compared through the
/// increment over `d = 0` so that tiny steps stay distinguishable.
fn line_minimum(a: f64, g: f64, eps: f64, ta: f64, tb: f64, lo: f64, hi: f64) -> f64 {
    let phi = |d: f64| {
        0.5 * a * d * d + g * d + eps * (((ta + d).abs() - ta.abs()) + ((tb - d).abs() - tb.abs()))
    };
    let mut candidates = vec![lo, hi, -ta, tb];
    if a > 0.0 {
        candidates.push(-g / a);
        candidates.push(-(g + 2.0 * eps) / a);
        candidates.push(-(g - 2.0 * eps) / a);
    }
    let mut best: (f64, f64) = (0.0, phi(0.0));
    for d in candidates {
        let d = d.clamp(lo, hi);
        let v = phi(d);
        if v < best.1 || (v == best.1 && d.abs() < best.0.abs()) {
            best = (d, v);
        }
    }
    best.0
}

/// Round values within roundoff of a kink (`0`) or a bound (`+-c`) onto it,
/// so that the one-sided derivatives see the intended side.
fn snap(t: f64, c: f64) -> f64 {
    let tiny = 1e-13 * c.max(1.0);
    if t.abs() <= tiny {
        0.0
    } else if (t.abs() - c).abs() <= tiny {
        c.copysign(t)
    } else {
        t
    }
}

/// Solve the dual on a precomputed kernel matrix.
pub fn svr_dual_solve_gram(gram: &[Vec<f64>], y: &[f64], cfg: &SvrConfig) -> Result<SvrSolution> {
    let n = y.len();
    if gram.len() != n || gram.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: gram.len(),
        });
    }
    if n > MAX_SVR_N {
        return Err(Error::InvalidParameter(format!(
            "the SVR solver handles n <= {MAX_SVR_N}, got {n}"
        )));
    }
    if !(cfg.c > 0.0 && cfg.c.is_finite()) || !(cfg.eps_tube >= 0.0 && cfg.eps_tube.is_finite()) {
        return Err(Error::InvalidParameter("need C > 0 and eps >= 0".into()));
    }
    let (c, eps) = (cfg.c, cfg.eps_tube);
    let scale = (0..n).map(|k| gram[k][k].abs()).fold(1.0, f64::max);
    let tol = cfg.tol * scale;
    let mut theta = vec![0.0; n];
    let mut h: Vec<f64> = y.iter().map(|v| -v).collect();
    let mut iterations = 0;
    let mut residual = 0.0;
    let mut converged = false;
    while iterations < cfg.max_iter {
        let Some((_, _, gap)) = violation(&h, &theta, c, eps) else {
            converged = true;
            break;
        };
        residual = gap.max(0.0);
        if gap <= tol {
            converged = true;
            polish(gram, &mut h, &mut theta, c, eps, residual);
            residual = violation(&h, &theta, c, eps).map_or(0.0, |(_, _, g)| g.max(0.0));
            break;
        }
        let Some((i, j)) = select(gram, &h, &theta, c, eps) else {
            break;
        };
        let (a, b) = (i.min(j), i.max(j));
        let curvature = gram[a][a] + gram[b][b] - 2.0 * gram[a][b];
        let lo = (-c - theta[a]).max(theta[b] - c);
        let hi = (c - theta[a]).min(theta[b] + c);
        let d = line_minimum(curvature, h[a] - h[b], eps, theta[a], theta[b], lo, hi);
        if d == 0.0 {
            // no progress possible along the chosen pair
            break;
        }
        theta[a] = snap(theta[a] + d, c);
        theta[b] = snap(theta[b] - d, c);
        for (k, hk) in h.iter_mut().enumerate() {
            *hk += d * (gram[k][a] - gram[k][b]);
        }
        iterations += 1;
        if iterations % n.max(10) == 0 {
            subspace_step(gram, &mut h, &mut theta, c, eps);
        }
    }
    if !converged {
        residual = violation(&h, &theta, c, eps).map_or(0.0, |(_, _, g)| g.max(0.0));
        converged = residual <= tol;
    }
    let free: Vec<f64> = (0..n)
        .filter(|&k| theta[k] != 0.0 && theta[k].abs() < c)
        .map(|k| -h[k] - eps * theta[k].signum())
        .collect();
    let b = if free.is_empty() {
        match violation(&h, &theta, c, eps) {
            Some((i, j, _)) => -(down(h[j], theta[j], eps) + up(h[i], theta[i], eps)) / 2.0,
            None => 0.0,
        }
    } else {
        free.iter().sum::<f64>() / free.len() as f64
    };
    Ok(SvrSolution {
        alpha: theta.iter().map(|t| (-t).max(0.0)).collect(),
        alpha_star: theta.iter().map(|t| t.max(0.0)).collect(),
        b,
        objective: dual_objective(gram, y, &theta, eps),
        iterations,
        kkt_residual: residual,
        converged,
    })
}

/// Solve the linear-kernel dual on `data`.
pub fn svr_dual_solve(data: &Dataset, c: f64, eps_tube: f64) -> Result<SvrSolution> {
    let gram = gram_matrix(data, &Kernel::Linear);
    svr_dual_solve_gram(&gram, data.y(), &SvrConfig::new(c, eps_tube))
}

/// Outcome of [`svr_swap_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwapCheck {
    pub holds: bool,
    /// Sup-norm distance between swapped multiplier vectors.
    pub alpha_gap: f64,
    pub objective_gap: f64,
}

/// Solve on `y` and on `-y` and compare `(alpha, alpha*)` with the swapped
/// pair of the negated problem.
pub fn svr_swap_check(
    gram: &[Vec<f64>],
    y: &[f64],
    cfg: &SvrConfig,
    tol: f64,
) -> Result<SwapCheck> {
    let plain = svr_dual_solve_gram(gram, y, cfg)?;
    let neg: Vec<f64> = y.iter().map(|v| -v).collect();
    let flipped = svr_dual_solve_gram(gram, &neg, cfg)?;
    for s in [&plain, &flipped] {
        if !s.converged {
            return Err(Error::NotConverged {
                iterations: s.iterations,
                residual: s.kkt_residual,
            });
        }
    }
    let sup = |a: &[f64], b: &[f64]| {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    };
    let alpha_gap =
        sup(&flipped.alpha, &plain.alpha_star).max(sup(&flipped.alpha_star, &plain.alpha));
    let objective_gap = (flipped.objective - plain.objective).abs();
    Ok(SwapCheck {
        holds: alpha_gap <= tol && objective_gap <= tol,
        alpha_gap,
        objective_gap,
    })
}
