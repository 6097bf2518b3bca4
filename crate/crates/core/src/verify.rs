//! Empirical breakdown measurement: scheme scans, an exhaustive adversary
//! search, Monte Carlo over noise draws, and the clean-part inequality that
//! characterizes breakdown for bounded losses.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{
    erm_fit, generic_directions, geometric_ladder, tie_tolerance, FitConfig, RankingTask,
    LADDER_FLOOR,
};
use crate::losses::{contaminated_pair_fraction, LossSpec, Penalty, PenaltyFamily};
use crate::model::{
    effective_scores, BreakdownReport, BreakdownSet, ContaminatedSample, Dataset, LinearScorer,
    Outlier, ReferenceVariant, ResponseKind, BIG,
};
use crate::schemes::{AttackConfig, Scheme};

/// One step of a scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanStep {
    pub m: usize,
    pub beta: Vec<f64>,
    pub objective: f64,
    pub broken: bool,
    /// Support components not yet sign-reverted.
    pub deficit: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalReport {
    pub report: BreakdownReport,
    /// The fit on the uncontaminated sample is already in the breakdown set.
    pub pre_broken: bool,
    pub smallest_deficit: Option<usize>,
    pub trace: Vec<ScanStep>,
}

fn attack_signs(set: &BreakdownSet) -> Vec<f64> {
    set.reference_signs()
        .into_iter()
        .map(|s| if s == 0.0 { 1.0 } else { s })
        .collect()
}

fn fit_step(
    data: &Dataset,
    m: usize,
    task: &RankingTask,
    fit: &FitConfig,
    set: &BreakdownSet,
) -> Result<ScanStep> {
    let f = erm_fit(data, task, fit, Some(set.reference()))?;
    Ok(ScanStep {
        m,
        broken: set.contains(&f.scorer.beta),
        deficit: set.deficit(&f.scorer.beta),
        beta: f.scorer.beta,
        objective: f.objective,
    })
}

/// Contaminate with `m = 1, 2, ...` outliers of `scheme`, refit, and report
/// the first `m` whose fit lies in the breakdown set.
pub fn empirical_oibdp(
    data: &Dataset,
    scheme: Scheme,
    task: &RankingTask,
    fit: &FitConfig,
    attack: &AttackConfig,
    set: &BreakdownSet,
) -> Result<EmpiricalReport> {
    let n = data.n();
    let signs = attack_signs(set);
    let clean = fit_step(data, 0, task, fit, set)?;
    let mut smallest = clean.deficit;
    let mut trace = vec![clean];
    if trace[0].broken {
        return Ok(EmpiricalReport {
            report: BreakdownReport::found(0, n, "pre-broken", scheme.label()),
            pre_broken: true,
            smallest_deficit: Some(0),
            trace,
        });
    }
    for m in 1..=scheme.max_m(n) {
        let cs = scheme.build(data, m, attack, &signs)?;
        let step = fit_step(&cs.merged(), m, task, fit, set)?;
        smallest = smallest.min(step.deficit);
        let broken = step.broken;
        trace.push(step);
        if broken {
            return Ok(EmpiricalReport {
                report: BreakdownReport::found(m, n, "empirical", scheme.label()),
                pre_broken: false,
                smallest_deficit: Some(0),
                trace,
            });
        }
    }
    Ok(EmpiricalReport {
        report: BreakdownReport::nonexistent(n, "empirical", scheme.label()),
        pre_broken: false,
        smallest_deficit: Some(smallest),
        trace,
    })
}

/// Finite set of outlier placements searched by [`brute_force_oibdp`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdversaryGrid {
    pub magnitude: f64,
    pub gap: f64,
    /// Ladder points per side.
    pub steps: usize,
    /// Maximal number of fits before giving up with a bound.
    pub budget: usize,
}

impl Default for AdversaryGrid {
    fn default() -> Self {
        AdversaryGrid {
            magnitude: 1e6,
            gap: 1.0,
            steps: 3,
            budget: 20_000_000,
        }
    }
}

impl AdversaryGrid {
    /// Candidate coordinates per axis: ladders just beyond the data on both
    /// sides, then `+-magnitude`.
    fn axis_values(&self, data: &Dataset) -> Vec<f64> {
        let edge = data.max_abs_x();
        let mut v = Vec::new();
        for j in 1..=self.steps {
            let t = edge + self.gap * j as f64;
            v.extend([t, -t]);
        }
        v.extend([self.magnitude, -self.magnitude]);
        v
    }

    fn responses(&self, data: &Dataset) -> Vec<f64> {
        match data.kind() {
            ResponseKind::Binary => vec![-1.0, 1.0],
            ResponseKind::DPartite(d) => (1..=d).map(f64::from).collect(),
            ResponseKind::Continuous => {
                let lo = data.y_min().unwrap_or(0.0);
                let hi = data.y_max().unwrap_or(0.0);
                let mut v = Vec::new();
                for j in 1..=self.steps {
                    v.extend([lo - self.gap * j as f64, hi + self.gap * j as f64]);
                }
                v.extend([-self.magnitude, self.magnitude]);
                v
            }
        }
    }

    /// Every outlier the search may place.
    pub fn pool(&self, data: &Dataset) -> Vec<Outlier> {
        let axis = self.axis_values(data);
        let mut points: Vec<Vec<f64>> = vec![Vec::new()];
        for _ in 0..data.p() {
            points = points
                .into_iter()
                .flat_map(|pt| {
                    axis.iter().map(move |&v| {
                        let mut q = pt.clone();
                        q.push(v);
                        q
                    })
                })
                .collect();
        }
        let ys = self.responses(data);
        points
            .iter()
            .flat_map(|x| ys.iter().map(|&y| Outlier { x: x.clone(), y }))
            .collect()
    }
}

/// Lexicographic `m`-subsets of `0..n`.
fn combinations(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..m).collect();
    if m > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = m;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - m + i {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for k in i + 1..m {
            cur[k] = cur[k - 1] + 1;
        }
    }
}

/// Non-decreasing length-`m` sequences over `0..len`.
fn multisets(len: usize, m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![Vec::new()];
    }
    if len == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![0usize; m];
    loop {
        out.push(cur.clone());
        let mut i = m;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] + 1 < len {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        let v = cur[i] + 1;
        for slot in cur.iter_mut().skip(i) {
            *slot = v;
        }
    }
}

fn choose(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// A contamination found by the exhaustive search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub indices: Vec<usize>,
    pub outliers: Vec<Outlier>,
    pub beta: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BruteForceReport {
    pub report: BreakdownReport,
    /// False when the budget ran out; the report then only bounds `m`.
    pub exhaustive: bool,
    pub fits: usize,
    pub pre_broken: bool,
    pub witness: Option<Witness>,
}

/// Smallest `m` for which some choice of replaced indices and grid
/// placements drives the fit into the breakdown set.
pub fn brute_force_oibdp(
    data: &Dataset,
    task: &RankingTask,
    fit: &FitConfig,
    grid: &AdversaryGrid,
    set: &BreakdownSet,
) -> Result<BruteForceReport> {
    let n = data.n();
    if n > 10 || data.p() > 2 {
        return Err(Error::InvalidParameter(
            "exhaustive search is limited to n <= 10 and p <= 2".into(),
        ));
    }
    let label = "brute-force";
    let clean = erm_fit(data, task, fit, Some(set.reference()))?;
    if set.contains(&clean.scorer.beta) {
        return Ok(BruteForceReport {
            report: BreakdownReport::found(0, n, "pre-broken", label),
            exhaustive: true,
            fits: 1,
            pre_broken: true,
            witness: None,
        });
    }
    let pool = grid.pool(data);
    let mut fits = 1usize;
    for m in 1..=n {
        let planned = choose(n, m) * choose(pool.len() + m - 1, m);
        if fits as f64 + planned > grid.budget as f64 {
            return Ok(BruteForceReport {
                report: BreakdownReport::nonexistent(n, "budget exhausted", label)
                    .with_interval(m, n),
                exhaustive: false,
                fits,
                pre_broken: false,
                witness: None,
            });
        }
        let placements = multisets(pool.len(), m);
        for subset in combinations(n, m) {
            let attempt = |choice: &Vec<usize>| -> Option<Result<Witness>> {
                let outliers: Vec<Outlier> = choice.iter().map(|&c| pool[c].clone()).collect();
                let run = || -> Result<Option<Witness>> {
                    let cs = ContaminatedSample::replace(data, subset.clone(), outliers.clone())?;
                    let f = erm_fit(&cs.merged(), task, fit, Some(set.reference()))?;
                    Ok(set.contains(&f.scorer.beta).then(|| Witness {
                        indices: subset.clone(),
                        outliers: outliers.clone(),
                        beta: f.scorer.beta,
                    }))
                };
                run().transpose()
            };
            #[cfg(feature = "parallel")]
            let hit = {
                use rayon::prelude::*;
                placements.par_iter().find_map_first(attempt)
            };
            #[cfg(not(feature = "parallel"))]
            let hit = placements.iter().find_map(attempt);
            fits += placements.len();
            if let Some(w) = hit {
                return Ok(BruteForceReport {
                    report: BreakdownReport::found(m, n, "exhaustive", label),
                    exhaustive: true,
                    fits,
                    pre_broken: false,
                    witness: Some(w?),
                });
            }
        }
    }
    Ok(BruteForceReport {
        report: BreakdownReport::nonexistent(n, "exhaustive", label),
        exhaustive: true,
        fits,
        pre_broken: false,
        witness: None,
    })
}

/// Centered error distribution for [`expected_oibdp`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Noise {
    Zero,
    Gaussian { sigma: f64 },
    Uniform { half_width: f64 },
}

impl Noise {
    fn draw(&self, rng: &mut ChaCha8Rng, n: usize) -> Result<Vec<f64>> {
        Ok(match *self {
            Noise::Zero => vec![0.0; n],
            Noise::Gaussian { sigma } => {
                if !(sigma >= 0.0 && sigma.is_finite()) {
                    return Err(Error::InvalidParameter("sigma must be >= 0".into()));
                }
                (0..n)
                    .map(|_| {
                        sigma * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, rng)
                    })
                    .collect()
            }
            Noise::Uniform { half_width } => {
                if !(half_width > 0.0 && half_width.is_finite()) {
                    return Err(Error::InvalidParameter("half width must be > 0".into()));
                }
                let u = Uniform::new(-half_width, half_width)
                    .map_err(|e| Error::InvalidParameter(e.to_string()))?;
                (0..n).map(|_| u.sample(rng)).collect()
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpectedReport {
    pub mean: f64,
    pub stderr: f64,
    /// Ratios `m/n` of the trials that broke down.
    pub ratios: Vec<f64>,
    pub nonexistent: usize,
    pub pre_broken: usize,
}

/// Everything [`expected_oibdp`] needs besides the design.
#[derive(Debug, Clone, Copy)]
pub struct MonteCarlo {
    pub noise: Noise,
    pub trials: usize,
    pub seed: u64,
    pub scheme: Scheme,
    pub task: RankingTask,
    pub fit: FitConfig,
    pub attack: AttackConfig,
}

/// Mean empirical breakdown ratio over responses `X beta + b + noise`
/// with the population breakdown set of `beta`.
pub fn expected_oibdp(
    design: &[Vec<f64>],
    beta: &[f64],
    b: f64,
    mc: &MonteCarlo,
) -> Result<ExpectedReport> {
    if mc.trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    let set = BreakdownSet::new(beta.to_vec(), ReferenceVariant::Population)?;
    let signal: Vec<f64> = design
        .iter()
        .map(|r| {
            if r.len() != beta.len() {
                return Err(Error::DimensionMismatch {
                    expected: beta.len(),
                    got: r.len(),
                });
            }
            Ok(r.iter().zip(beta).map(|(a, c)| a * c).sum::<f64>() + b)
        })
        .collect::<Result<_>>()?;
    let trial = |t: usize| -> Result<EmpiricalReport> {
        let mut rng = ChaCha8Rng::seed_from_u64(mc.seed.wrapping_add(t as u64));
        let eps = mc.noise.draw(&mut rng, design.len())?;
        let y = signal.iter().zip(&eps).map(|(s, e)| s + e).collect();
        let data = Dataset::new(design.to_vec(), y, ResponseKind::Continuous)?;
        empirical_oibdp(&data, mc.scheme, &mc.task, &mc.fit, &mc.attack, &set)
    };
    #[cfg(feature = "parallel")]
    let runs: Vec<EmpiricalReport> = {
        use rayon::prelude::*;
        (0..mc.trials)
            .into_par_iter()
            .map(trial)
            .collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let runs: Vec<EmpiricalReport> = (0..mc.trials).map(trial).collect::<Result<_>>()?;
    let mut counts = Vec::new();
    let (mut nonexistent, mut pre_broken) = (0, 0);
    for r in &runs {
        if r.pre_broken {
            pre_broken += 1;
        } else if let Some(m) = r.report.m_min {
            counts.push(m);
        } else {
            nonexistent += 1;
        }
    }
    if counts.is_empty() {
        return Err(Error::AllTrialsNonexistent);
    }
    let n = design.len();
    let ratios: Vec<f64> = counts.iter().map(|&m| m as f64 / n as f64).collect();
    let k = ratios.len() as f64;
    // Exact integer total keeps identical trials bit-identical to one trial.
    let mean = counts.iter().sum::<usize>() as f64 / (counts.len() * n) as f64;
    let stderr = if ratios.len() > 1 {
        let var = ratios.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (k - 1.0);
        (var / k).sqrt()
    } else {
        0.0
    };
    Ok(ExpectedReport {
        mean,
        stderr,
        ratios,
        nonexistent,
        pre_broken,
    })
}

/// Both sides of the breakdown characterization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Characterization {
    /// Smallest clean-part objective plus the worst contaminated-pair loss
    /// outside the breakdown set.
    pub lhs: f64,
    /// Smallest clean-part objective inside the breakdown set.
    pub rhs: f64,
    pub no_breakdown: bool,
}

/// Evaluate the characterization on the same direction and scale grid that
/// [`erm_fit`] searches for a sample of `clean.n() + m` instances with
/// distinct responses.
pub fn characterization_check(
    clean: &Dataset,
    m: usize,
    spec: &LossSpec,
    penalty: &Penalty,
    reference: &[f64],
    fit: &FitConfig,
) -> Result<Characterization> {
    let bound = spec.bound().ok_or(Error::UnboundedLoss)?;
    let set = BreakdownSet::new(reference.to_vec(), ReferenceVariant::Population)?;
    if reference.len() != clean.p() {
        return Err(Error::DimensionMismatch {
            expected: clean.p(),
            got: reference.len(),
        });
    }
    let n = clean.n() + m;
    if n < 2 {
        return Err(Error::InvalidParameter(
            "need at least two instances".into(),
        ));
    }
    let directions = generic_directions(clean, fit.directions)?;
    let mut candidates = Vec::new();
    if spec.is_indicator() {
        candidates.extend(directions);
    } else {
        let at_zero = spec.eval(0.0);
        let radius = match penalty.family {
            _ if penalty.lambda == 0.0 => BIG,
            PenaltyFamily::L2 => (at_zero / penalty.lambda).sqrt().min(BIG),
            PenaltyFamily::L1 => (at_zero / penalty.lambda).min(BIG),
            PenaltyFamily::Custom(_) => return Err(Error::NonCoercivePenalty),
        };
        let ladder = geometric_ladder(LADDER_FLOOR.min(radius), radius, fit.scales);
        candidates.push(vec![0.0; clean.p()]);
        for d in &directions {
            candidates.extend(ladder.iter().map(|s| d.iter().map(|v| v * s).collect()));
        }
    }
    let norm = (n * (n - 1)) as f64;
    let y = clean.y();
    let clean_objective = |beta: &[f64]| -> Result<f64> {
        let s = effective_scores(&LinearScorer::new(beta.to_vec(), 0.0), clean)?;
        let mut total = 0.0;
        for i in 0..y.len() {
            for j in i + 1..y.len() {
                total += spec.eval((y[i] - y[j]) * (s[i] - s[j]));
            }
        }
        let pen = if spec.is_indicator() {
            0.0
        } else {
            penalty.value(beta)
        };
        Ok(2.0 * total / norm + pen)
    };
    let correction = contaminated_pair_fraction(n, m) * bound;
    let (mut lhs, mut rhs) = (f64::INFINITY, f64::INFINITY);
    for c in &candidates {
        let g = clean_objective(c)?;
        if set.contains(c) {
            rhs = rhs.min(g);
        } else {
            lhs = lhs.min(g + correction);
        }
    }
    if !lhs.is_finite() || !rhs.is_finite() {
        return Err(Error::EmptySearch);
    }
    Ok(Characterization {
        lhs,
        rhs,
        // Ties resolve outside the breakdown set, as in the fitter.
        no_breakdown: lhs <= rhs + tie_tolerance(rhs.min(lhs)),
    })
}
