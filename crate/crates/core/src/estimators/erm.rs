use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::directions::{angular_sweep, normalize, orthant_grid};
use crate::error::{Error, Result};
use crate::losses::{
    hard_loss, localized_parts, weak_loss, LocalizedVariant, LossSpec, Penalty, PenaltyFamily,
    RankingWeight,
};
use crate::model::{Dataset, LinearScorer, BIG};

/// Smallest nonzero scale tried for surrogate losses.
pub(crate) const LADDER_FLOOR: f64 = 1e-3;

/// Search strategy of [`erm_fit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FitMethod {
    /// Exhaustive search over generic unit directions (times a scale ladder
    /// for surrogate losses).
    OrthantGrid,
    /// Projected normalized subgradient steps for hard surrogate losses.
    SubgradientDescent,
}

#[derive(Debug, Clone, Copy)]
pub struct FitConfig {
    pub method: FitMethod,
    /// Levels per half-axis of the direction grid used for `p >= 3`.
    pub directions: usize,
    /// Scale levels per direction for surrogate losses.
    pub scales: usize,
    pub restarts: usize,
    pub max_iter: usize,
    pub step_size: f64,
    pub penalty: Penalty,
    pub seed: u64,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            method: FitMethod::OrthantGrid,
            directions: 6,
            scales: 40,
            restarts: 4,
            max_iter: 2000,
            step_size: 1.0,
            penalty: Penalty::none(),
            seed: 0,
        }
    }
}

impl FitConfig {
    pub fn subgradient(penalty: Penalty, seed: u64) -> Self {
        FitConfig {
            method: FitMethod::SubgradientDescent,
            penalty,
            seed,
            ..FitConfig::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.max_iter == 0 || self.directions == 0 || self.scales == 0 || self.restarts == 0 {
            return Err(Error::InvalidParameter(
                "max_iter, directions, scales and restarts must be >= 1".into(),
            ));
        }
        if !(self.step_size > 0.0 && self.step_size.is_finite()) {
            return Err(Error::InvalidParameter("step size must be > 0".into()));
        }
        Ok(())
    }
}

/// Ranking problem whose empirical risk is minimized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RankingTask {
    Hard(LossSpec),
    Weak {
        k: usize,
    },
    Localized {
        k: usize,
        variant: LocalizedVariant,
        weight: RankingWeight,
    },
}

impl RankingTask {
    /// Losses that only depend on the score ordering.
    fn scale_free(&self) -> bool {
        match self {
            RankingTask::Hard(spec) => spec.is_indicator(),
            _ => true,
        }
    }
}

/// Empirical risk of `scorer`. Ordering-only losses ignore the penalty.
pub fn task_objective(
    data: &Dataset,
    scorer: &LinearScorer,
    task: &RankingTask,
    penalty: &Penalty,
) -> Result<f64> {
    match *task {
        RankingTask::Hard(spec) => {
            let loss = hard_loss(data, scorer, &spec)?;
            Ok(if spec.is_indicator() {
                loss
            } else {
                loss + penalty.value(&scorer.beta)
            })
        }
        RankingTask::Weak { k } => weak_loss(data, scorer, k),
        RankingTask::Localized { k, variant, weight } => {
            Ok(localized_parts(data, scorer, k, variant, weight)?.total())
        }
    }
}

/// Result of [`erm_fit`].
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFit {
    pub scorer: LinearScorer,
    pub objective: f64,
    /// False when subgradient descent hit its iteration cap; the scorer is
    /// then the best iterate.
    pub converged: bool,
    pub iterations: usize,
}

/// Where the minimizers of a penalized objective lie.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NormBound {
    /// Every minimizer has norm at most this radius.
    Radius(f64),
    /// `lambda = 0`: no finite bound is guaranteed.
    Unbounded,
    /// The objective vanishes at zero; searches fall back to the
    /// unpenalized problem.
    Degenerate,
}

impl NormBound {
    pub fn radius(self) -> Option<f64> {
        match self {
            NormBound::Radius(r) => Some(r),
            _ => None,
        }
    }
}

/// Radius of a ball containing every minimizer, from `lambda J(beta) <=
/// objective(0)`.
pub fn regularized_norm_bound(
    data: &Dataset,
    task: &RankingTask,
    penalty: &Penalty,
) -> Result<NormBound> {
    if let PenaltyFamily::Custom(_) = penalty.family {
        return Err(Error::NonCoercivePenalty);
    }
    if penalty.lambda == 0.0 {
        return Ok(NormBound::Unbounded);
    }
    let at_zero = task_objective(data, &LinearScorer::zeros(data.p()), task, &Penalty::none())?;
    if at_zero == 0.0 {
        return Ok(NormBound::Degenerate);
    }
    let ratio = at_zero / penalty.lambda;
    Ok(NormBound::Radius(match penalty.family {
        PenaltyFamily::L2 => ratio.sqrt(),
        PenaltyFamily::L1 => ratio,
        PenaltyFamily::Custom(_) => unreachable!("rejected above"),
    }))
}

fn search_radius(data: &Dataset, task: &RankingTask, penalty: &Penalty) -> Result<f64> {
    Ok(regularized_norm_bound(data, task, penalty)?
        .radius()
        .unwrap_or(BIG)
        .min(BIG))
}

/// Unit directions in the interior of the cells cut out by the pairwise
/// difference hyperplanes (exact for `p <= 2`, a grid for `p >= 3`).
pub(crate) fn generic_directions(data: &Dataset, resolution: usize) -> Result<Vec<Vec<f64>>> {
    match data.p() {
        1 => Ok(vec![vec![1.0], vec![-1.0]]),
        2 => {
            // Unit axes split every cell along the orthant boundaries.
            let mut diffs = vec![[1.0, 0.0], [0.0, 1.0]];
            for i in 0..data.n() {
                for j in i + 1..data.n() {
                    let (a, b) = (data.row(i), data.row(j));
                    diffs.push([a[0] - b[0], a[1] - b[1]]);
                }
            }
            let sweep = angular_sweep(&diffs);
            Ok(sweep.into_iter().skip(1).step_by(2).collect())
        }
        3 | 4 => Ok(orthant_grid(data.p(), resolution)),
        p => Err(Error::InvalidParameter(format!(
            "the direction grid supports p <= 4, got {p}"
        ))),
    }
}

pub(crate) fn geometric_ladder(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 || hi <= lo {
        return vec![hi];
    }
    let ratio = (hi / lo).ln() / (count - 1) as f64;
    (0..count)
        .map(|i| {
            if i + 1 == count {
                hi
            } else {
                lo * (ratio * i as f64).exp()
            }
        })
        .collect()
}

fn evaluate_all(
    data: &Dataset,
    task: &RankingTask,
    penalty: &Penalty,
    candidates: &[Vec<f64>],
) -> Result<Vec<f64>> {
    let eval = |beta: &Vec<f64>| {
        task_objective(data, &LinearScorer::new(beta.clone(), 0.0), task, penalty)
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        candidates.par_iter().map(eval).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        candidates.iter().map(eval).collect()
    }
}

/// Objective values within this distance of `best` count as minimizers.
pub(crate) fn tie_tolerance(best: f64) -> f64 {
    1e-12 * best.abs().max(1.0)
}

/// Among minimizers prefer candidates outside the sign-reverted orthant of
/// the reference, then those agreeing with it on more components, then
/// enumeration order.
fn pick_minimizer(candidates: &[Vec<f64>], values: &[f64], reference: Option<&[f64]>) -> usize {
    let best = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let tol = tie_tolerance(best);
    let key = |c: &[f64]| -> (bool, usize) {
        match reference {
            None => (false, 0),
            Some(r) => {
                let support = r.iter().filter(|v| **v != 0.0).count();
                let reverted = c.iter().zip(r).filter(|(a, b)| **a * **b < 0.0).count();
                let agree = c.iter().zip(r).filter(|(a, b)| **a * **b > 0.0).count();
                (support > 0 && reverted == support, agree)
            }
        }
    };
    let mut chosen: Option<(usize, (bool, usize))> = None;
    for (i, (c, v)) in candidates.iter().zip(values).enumerate() {
        if *v > best + tol {
            continue;
        }
        let k = key(c);
        let better = match chosen {
            None => true,
            Some((_, (broken, agree))) => (!k.0 && broken) || (k.0 == broken && k.1 > agree),
        };
        if better {
            chosen = Some((i, k));
        }
    }
    chosen.map(|(i, _)| i).unwrap_or(0)
}

/// Minimize the task's empirical risk over linear scorers. `reference`
/// only breaks ties between minimizers.
pub fn erm_fit(
    data: &Dataset,
    task: &RankingTask,
    cfg: &FitConfig,
    reference: Option<&[f64]>,
) -> Result<LinearFit> {
    cfg.validate()?;
    if let Some(r) = reference {
        if r.len() != data.p() {
            return Err(Error::DimensionMismatch {
                expected: data.p(),
                got: r.len(),
            });
        }
    }
    match cfg.method {
        FitMethod::OrthantGrid => grid_fit(data, task, cfg, reference),
        FitMethod::SubgradientDescent => match task {
            RankingTask::Hard(spec) if !spec.is_indicator() => descent_fit(data, spec, cfg),
            _ => Err(Error::InvalidParameter(
                "subgradient descent needs a hard surrogate loss".into(),
            )),
        },
    }
}

fn grid_fit(
    data: &Dataset,
    task: &RankingTask,
    cfg: &FitConfig,
    reference: Option<&[f64]>,
) -> Result<LinearFit> {
    let directions = generic_directions(data, cfg.directions)?;
    let candidates: Vec<Vec<f64>> = if task.scale_free() {
        directions
    } else {
        let radius = search_radius(data, task, &cfg.penalty)?;
        let ladder = geometric_ladder(LADDER_FLOOR.min(radius), radius, cfg.scales);
        let mut all = vec![vec![0.0; data.p()]];
        for d in &directions {
            all.extend(ladder.iter().map(|s| d.iter().map(|v| v * s).collect()));
        }
        all
    };
    if candidates.is_empty() {
        return Err(Error::EmptySearch);
    }
    let values = evaluate_all(data, task, &cfg.penalty, &candidates)?;
    let i = pick_minimizer(&candidates, &values, reference);
    Ok(LinearFit {
        scorer: LinearScorer::new(candidates[i].clone(), 0.0),
        objective: values[i],
        converged: true,
        iterations: candidates.len(),
    })
}

fn hard_subgradient(data: &Dataset, beta: &[f64], spec: &LossSpec, penalty: &Penalty) -> Vec<f64> {
    let n = data.n();
    let p = data.p();
    let y = data.y();
    let s: Vec<f64> = data
        .rows()
        .map(|r| r.iter().zip(beta).map(|(a, b)| a * b).sum())
        .collect();
    let mut g = penalty.slope(beta);
    let scale = 2.0 / (n * (n - 1)) as f64;
    for i in 0..n {
        for j in i + 1..n {
            let dy = y[i] - y[j];
            if dy == 0.0 {
                continue;
            }
            let w = scale * spec.slope(dy * (s[i] - s[j])) * dy;
            if w == 0.0 {
                continue;
            }
            let (a, b) = (data.row(i), data.row(j));
            for k in 0..p {
                g[k] += w * (a[k] - b[k]);
            }
        }
    }
    g
}

fn project(beta: &mut [f64], radius: f64) {
    let norm = beta.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > radius {
        beta.iter_mut().for_each(|v| *v *= radius / norm);
    }
}

fn descent_fit(data: &Dataset, spec: &LossSpec, cfg: &FitConfig) -> Result<LinearFit> {
    let task = RankingTask::Hard(*spec);
    let radius = search_radius(data, &task, &cfg.penalty)?;
    let p = data.p();
    let run = |restart: usize| -> Result<LinearFit> {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(restart as u64));
        let start: Vec<f64> = (0..p).map(|_| StandardNormal.sample(&mut rng)).collect();
        let mut beta = normalize(start);
        project(&mut beta, radius);
        let objective = |b: &[f64]| {
            task_objective(
                data,
                &LinearScorer::new(b.to_vec(), 0.0),
                &task,
                &cfg.penalty,
            )
        };
        let mut best = (beta.clone(), objective(&beta)?);
        let mut converged = false;
        let mut iterations = 0;
        for t in 1..=cfg.max_iter {
            iterations = t;
            let g = hard_subgradient(data, &beta, spec, &cfg.penalty);
            let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm <= 1e-12 {
                converged = true;
                break;
            }
            let step = cfg.step_size / (t as f64).sqrt() / norm;
            beta.iter_mut().zip(&g).for_each(|(b, gk)| *b -= step * gk);
            project(&mut beta, radius);
            let value = objective(&beta)?;
            if value < best.1 {
                best = (beta.clone(), value);
            }
        }
        Ok(LinearFit {
            scorer: LinearScorer::new(best.0, 0.0),
            objective: best.1,
            converged,
            iterations,
        })
    };
    #[cfg(feature = "parallel")]
    let runs: Vec<LinearFit> = {
        use rayon::prelude::*;
        (0..cfg.restarts)
            .into_par_iter()
            .map(run)
            .collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let runs: Vec<LinearFit> = (0..cfg.restarts).map(run).collect::<Result<_>>()?;
    let iterations = runs.iter().map(|r| r.iterations).sum();
    let mut best = runs
        .into_iter()
        .reduce(|a, b| if b.objective < a.objective { b } else { a })
        .ok_or(Error::EmptySearch)?;
    best.iterations = iterations;
    Ok(best)
}
