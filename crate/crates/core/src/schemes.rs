//! Constructive outlier schemes. Each builds a [`ContaminatedSample`] that
//! pushes a fitted scorer towards the sign-reverted orthant of a reference
//! whose signs are given per axis (`+1` or `-1`).
//!
//! Hard schemes replace the `m` largest indices; the binary univariate,
//! localized and compact schemes replace instances chosen by their score
//! under the reference signs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ContaminatedSample, Dataset, Outlier, ResponseKind, BIG};

/// Placement parameters shared by all schemes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttackConfig {
    /// Stand-in for an infinitely remote position or response.
    pub magnitude: f64,
    /// Spacing between successive outliers.
    pub gap: f64,
    pub seed: u64,
}

impl Default for AttackConfig {
    fn default() -> Self {
        AttackConfig {
            magnitude: 1e9,
            gap: 1.0,
            seed: 0,
        }
    }
}

impl AttackConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.magnitude > 0.0 && self.magnitude <= BIG) {
            return Err(Error::InvalidParameter(format!(
                "magnitude must be in (0, {BIG}], got {}",
                self.magnitude
            )));
        }
        if !(self.gap > 0.0 && self.gap.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "gap must be > 0, got {}",
                self.gap
            )));
        }
        Ok(())
    }
}

fn check_signs(signs: &[f64], p: usize) -> Result<Vec<f64>> {
    if signs.len() != p {
        return Err(Error::DimensionMismatch {
            expected: p,
            got: signs.len(),
        });
    }
    if signs.iter().any(|s| *s == 0.0 || !s.is_finite()) {
        return Err(Error::InvalidParameter(
            "reference signs must be nonzero".into(),
        ));
    }
    Ok(signs.iter().map(|s| s.signum()).collect())
}

fn check_continuous(data: &Dataset) -> Result<()> {
    if data.kind() != ResponseKind::Continuous {
        return Err(Error::InvalidParameter(
            "this scheme needs continuous responses".into(),
        ));
    }
    Ok(())
}

fn too_many(m: usize, n: usize) -> Error {
    Error::InsufficientInstances(format!("{m} outliers requested but n = {n}"))
}

/// Indices `n-m..n`.
fn last_indices(n: usize, m: usize) -> Vec<usize> {
    (n - m..n).collect()
}

/// Scores `x . signs`.
fn signed_scores(data: &Dataset, signs: &[f64]) -> Vec<f64> {
    data.rows()
        .map(|r| r.iter().zip(signs).map(|(a, s)| a * s).sum())
        .collect()
}

/// Indices sorted by ascending signed score, ties by index.
fn ascending_by_score(data: &Dataset, signs: &[f64]) -> Vec<usize> {
    let s = signed_scores(data, signs);
    let mut idx: Vec<usize> = (0..data.n()).collect();
    idx.sort_by(|&a, &b| s[a].total_cmp(&s[b]).then(a.cmp(&b)));
    idx
}

/// Componentwise extremum in the increasing-score direction.
fn extreme_corner(data: &Dataset, signs: &[f64]) -> Vec<f64> {
    signs
        .iter()
        .enumerate()
        .map(|(j, &s)| {
            if s > 0.0 {
                data.column_max(j).unwrap_or(0.0)
            } else {
                data.column_min(j).unwrap_or(0.0)
            }
        })
        .collect()
}

/// Univariate hard scheme: `m` outliers beyond the data in the
/// increasing-score direction with strictly descending responses below every
/// clean response.
pub fn univariate_hard_attack(
    data: &Dataset,
    m: usize,
    cfg: &AttackConfig,
    sign: f64,
) -> Result<ContaminatedSample> {
    cfg.validate()?;
    check_continuous(data)?;
    let signs = check_signs(&[sign], data.p())?;
    let n = data.n();
    if m > n {
        return Err(too_many(m, n));
    }
    let edge = extreme_corner(data, &signs)[0];
    let y0 = data.y_min().unwrap_or(0.0);
    let outliers = (1..=m)
        .map(|s| Outlier {
            x: vec![edge + signs[0] * cfg.gap * s as f64],
            y: y0 - cfg.gap * s as f64,
        })
        .collect();
    ContaminatedSample::replace(data, last_indices(n, m), outliers)
}

/// Axis ladder positions in round-robin order: step 1 on every axis, then
/// step 2, and so on.
fn ladder(p: usize, count: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..count).map(move |i| (i % p, i / p + 1))
}

fn axis_point(start: &[f64], signs: &[f64], axis: usize, offset: f64) -> Vec<f64> {
    let mut x = start.to_vec();
    x[axis] += signs[axis] * offset;
    x
}

fn axiswise_layout(
    data: &Dataset,
    m: usize,
    cfg: &AttackConfig,
    signs: &[f64],
    top_response: f64,
) -> Result<ContaminatedSample> {
    let n = data.n();
    let p = data.p();
    if m > n {
        return Err(too_many(m, n));
    }
    if m == 0 {
        return Ok(ContaminatedSample::untouched(data));
    }
    if m + 1 == n && n > 1 {
        // The one remaining clean instance serves as the starting point.
        let start = data.row(0).to_vec();
        let y0 = data.y()[0];
        let outliers = ladder(p, m)
            .map(|(axis, s)| Outlier {
                x: axis_point(&start, signs, axis, cfg.gap * s as f64),
                y: y0 - cfg.gap * s as f64,
            })
            .collect();
        return ContaminatedSample::replace(data, last_indices(n, m), outliers);
    }
    let start = extreme_corner(data, signs);
    let mut outliers = vec![Outlier {
        x: start.clone(),
        y: top_response,
    }];
    outliers.extend(ladder(p, m - 1).map(|(axis, s)| Outlier {
        x: axis_point(&start, signs, axis, cfg.gap * s as f64),
        y: top_response - cfg.gap * s as f64,
    }));
    ContaminatedSample::replace(data, last_indices(n, m), outliers)
}

/// Axiswise hard scheme with `k` full steps per axis: a starting point at
/// the extreme corner followed by `k` outliers along every axis, `1 + p k`
/// in total. With `unbounded` the configuration has a single step and its
/// responses sit at `-magnitude`; `k` is then ignored.
pub fn axiswise_hard_attack(
    data: &Dataset,
    k: usize,
    cfg: &AttackConfig,
    signs: &[f64],
    unbounded: bool,
) -> Result<ContaminatedSample> {
    cfg.validate()?;
    check_continuous(data)?;
    let signs = check_signs(signs, data.p())?;
    let p = data.p();
    let k = if unbounded { 1 } else { k };
    let m = 1 + p * k;
    if m > data.n() {
        return Err(too_many(m, data.n()));
    }
    let top = if unbounded {
        -cfg.magnitude
    } else {
        data.y_min().unwrap_or(0.0) - cfg.gap
    };
    let n = data.n();
    let start = extreme_corner(data, &signs);
    let mut outliers = vec![Outlier {
        x: start.clone(),
        y: top,
    }];
    outliers.extend(ladder(p, p * k).map(|(axis, s)| Outlier {
        x: axis_point(&start, &signs, axis, cfg.gap * s as f64),
        y: top - cfg.gap * s as f64,
    }));
    ContaminatedSample::replace(data, last_indices(n, m), outliers)
}

/// Axiswise hard scheme for an arbitrary count `m`: the starting point,
/// then axis steps in round-robin order. For `m = n - 1` the remaining
/// clean instance is the starting point and all `m` outliers are steps.
pub fn axiswise_partial_attack(
    data: &Dataset,
    m: usize,
    cfg: &AttackConfig,
    signs: &[f64],
) -> Result<ContaminatedSample> {
    cfg.validate()?;
    check_continuous(data)?;
    let signs = check_signs(signs, data.p())?;
    let top = data.y_min().unwrap_or(0.0) - cfg.gap;
    axiswise_layout(data, m, cfg, &signs, top)
}

/// Same layout as [`axiswise_partial_attack`] with responses at
/// `-magnitude`.
pub fn axiswise_unbounded_attack(
    data: &Dataset,
    m: usize,
    cfg: &AttackConfig,
    signs: &[f64],
) -> Result<ContaminatedSample> {
    cfg.validate()?;
    check_continuous(data)?;
    let signs = check_signs(signs, data.p())?;
    let n = data.n();
    if m > n {
        return Err(too_many(m, n));
    }
    if m == 0 {
        return Ok(ContaminatedSample::untouched(data));
    }
    let start = extreme_corner(data, &signs);
    let top = -cfg.magnitude;
    let mut outliers = vec![Outlier {
        x: start.clone(),
        y: top,
    }];
    outliers.extend(ladder(data.p(), m - 1).map(|(axis, s)| Outlier {
        x: axis_point(&start, &signs, axis, cfg.gap * s as f64),
        y: top - cfg.gap * s as f64,
    }));
    ContaminatedSample::replace(data, last_indices(n, m), outliers)
}

fn categorical_labels(data: &Dataset) -> Result<(f64, f64)> {
    data.kind().extreme_labels().ok_or_else(|| {
        Error::InvalidParameter("this scheme needs binary or d-partite responses".into())
    })
}

/// Univariate label flips: the `ceil(m/2)` lowest-scoring instances get the
/// high label and the `floor(m/2)` highest-scoring ones the low label.
fn binary_flips(data: &Dataset, m: usize, signs: &[f64]) -> Result<ContaminatedSample> {
    let n = data.n();
    if m > n {
        return Err(too_many(m, n));
    }
    let (low, high) = categorical_labels(data)?;
    let order = ascending_by_score(data, signs);
    let lifted = m.div_ceil(2);
    let dropped = m / 2;
    let mut indices = Vec::with_capacity(m);
    let mut outliers = Vec::with_capacity(m);
    for &i in &order[..lifted] {
        indices.push(i);
        outliers.push(Outlier {
            x: data.row(i).to_vec(),
            y: high,
        });
    }
    for &i in order[n - dropped..].iter().rev() {
        indices.push(i);
        outliers.push(Outlier {
            x: data.row(i).to_vec(),
            y: low,
        });
    }
    ContaminatedSample::replace(data, indices, outliers)
}

/// Multivariate two-sided layout: a starting point with the high label at
/// the extreme corner, then per axis and step an outlier beyond the corner
/// with the low label and one below the data with the high label.
fn binary_axiswise(
    data: &Dataset,
    m: usize,
    cfg: &AttackConfig,
    signs: &[f64],
) -> Result<ContaminatedSample> {
    let n = data.n();
    let p = data.p();
    if m > n {
        return Err(too_many(m, n));
    }
    if m == 0 {
        return Ok(ContaminatedSample::untouched(data));
    }
    let (low, high) = categorical_labels(data)?;
    let start = extreme_corner(data, signs);
    let floor: Vec<f64> = extreme_corner(data, &signs.iter().map(|s| -s).collect::<Vec<_>>());
    let mut outliers = vec![Outlier {
        x: start.clone(),
        y: high,
    }];
    for i in 0..m - 1 {
        let (slot, upper) = (i / 2, i % 2 == 0);
        let (axis, s) = (slot % p, slot / p + 1);
        let offset = cfg.gap * s as f64;
        let x = if upper {
            axis_point(&start, signs, axis, offset)
        } else {
            let mut x = start.clone();
            x[axis] = floor[axis] - signs[axis] * offset;
            x
        };
        outliers.push(Outlier {
            x,
            y: if upper { low } else { high },
        });
    }
    ContaminatedSample::replace(data, last_indices(n, m), outliers)
}

/// Bipartite or d-partite scheme with `k` steps: `2k` label flips of the
/// extreme instances for `p = 1`, `1 + 2pk` outliers otherwise.
pub fn binary_attack(
    data: &Dataset,
    k: usize,
    cfg: &AttackConfig,
    signs: &[f64],
) -> Result<ContaminatedSample> {
    cfg.validate()?;
    let signs = check_signs(signs, data.p())?;
    let m = if data.p() == 1 {
        2 * k
    } else {
        1 + 2 * data.p() * k
    };
    if m > data.n() {
        return Err(too_many(m, data.n()));
    }
    binary_partial_attack(data, m, cfg, &signs)
}

/// Bipartite or d-partite scheme for an arbitrary count `m`.
pub fn binary_partial_attack(
    data: &Dataset,
    m: usize,
    cfg: &AttackConfig,
    signs: &[f64],
) -> Result<ContaminatedSample> {
    cfg.validate()?;
    let signs = check_signs(signs, data.p())?;
    if data.p() == 1 {
        binary_flips(data, m, &signs)
    } else {
        binary_axiswise(data, m, cfg, &signs)
    }
}

/// Localized (and weak) scheme for `p = 1`: the `m` lowest-scoring
/// instances get responses above every other one, the lowest score the
/// highest response. Regressors are kept.
pub fn localized_attack(
    data: &Dataset,
    k: usize,
    m: usize,
    cfg: &AttackConfig,
    sign: f64,
) -> Result<ContaminatedSample> {
    cfg.validate()?;
    check_continuous(data)?;
    let signs = check_signs(&[sign], data.p())?;
    let n = data.n();
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    if m > k {
        return Err(Error::InvalidParameter(format!(
            "m = {m} exceeds K = {k}; the scheme saturates at K"
        )));
    }
    let top = data.y_max().unwrap_or(0.0);
    let order = ascending_by_score(data, &signs);
    let indices: Vec<usize> = order[..m].to_vec();
    let outliers = indices
        .iter()
        .enumerate()
        .map(|(r, &i)| Outlier {
            x: data.row(i).to_vec(),
            y: top + cfg.gap * (m - r) as f64,
        })
        .collect();
    ContaminatedSample::replace(data, indices, outliers)
}

/// A hypercube grid of outliers.
#[derive(Debug, Clone, PartialEq)]
pub struct HypercubeAttack {
    pub sample: ContaminatedSample,
    /// Same-axis outlier pairs with distinct responses, per axis.
    pub comparisons_per_axis: usize,
}

/// `k^p` outliers on a grid stepping away from the extreme corner, response
/// decreasing with the total step count.
pub fn hypercube_attack(
    data: &Dataset,
    k: usize,
    cfg: &AttackConfig,
    signs: &[f64],
) -> Result<HypercubeAttack> {
    cfg.validate()?;
    check_continuous(data)?;
    let signs = check_signs(signs, data.p())?;
    let p = data.p();
    let n = data.n();
    let m = k
        .checked_pow(p as u32)
        .filter(|&m| m <= n)
        .ok_or_else(|| Error::InsufficientInstances(format!("{k}^{p} grid exceeds n = {n}")))?;
    let start = extreme_corner(data, &signs);
    let top = data.y_min().unwrap_or(0.0) - cfg.gap;
    let mut outliers = Vec::with_capacity(m);
    let mut idx = vec![0usize; p];
    for _ in 0..m {
        let x = start
            .iter()
            .zip(&signs)
            .zip(&idx)
            .map(|((a, s), &i)| a + s * cfg.gap * i as f64)
            .collect();
        let steps: usize = idx.iter().sum();
        outliers.push(Outlier {
            x,
            y: top - cfg.gap * steps as f64,
        });
        for slot in idx.iter_mut() {
            *slot += 1;
            if *slot < k {
                break;
            }
            *slot = 0;
        }
    }
    let comparisons_per_axis = m * k.saturating_sub(1) / 2;
    Ok(HypercubeAttack {
        sample: ContaminatedSample::replace(data, last_indices(n, m), outliers)?,
        comparisons_per_axis,
    })
}

/// Same-axis outlier comparisons per axis achieved by the axiswise scheme
/// with `m` outliers: `k(k+1)/2` with `k = (m-1)/p`.
pub fn axiswise_comparisons_per_axis(m: usize, p: usize) -> usize {
    if m == 0 || p == 0 {
        return 0;
    }
    let k = (m - 1) / p;
    k * (k + 1) / 2
}

/// Compact-space scheme: the `m` highest-scoring instances are moved to
/// `(upper - eps_i, y_low + eps_i)` with `eps_1 > ... > eps_m > 0` inside
/// the bounds.
pub fn compact_attack(
    data: &Dataset,
    x_bounds: &[(f64, f64)],
    y_bounds: (f64, f64),
    m: usize,
    cfg: &AttackConfig,
) -> Result<ContaminatedSample> {
    cfg.validate()?;
    check_continuous(data)?;
    let p = data.p();
    let n = data.n();
    if x_bounds.len() != p {
        return Err(Error::DimensionMismatch {
            expected: p,
            got: x_bounds.len(),
        });
    }
    if m > n {
        return Err(too_many(m, n));
    }
    let inside = |v: f64, (lo, hi): (f64, f64)| lo <= v && v <= hi;
    let mut widths = vec![y_bounds.1 - y_bounds.0];
    widths.extend(x_bounds.iter().map(|(lo, hi)| hi - lo));
    if widths.iter().any(|w| !(*w > 0.0)) {
        return Err(Error::BoundsViolated(
            "every interval needs positive width".into(),
        ));
    }
    for (i, row) in data.rows().enumerate() {
        if !inside(data.y()[i], y_bounds) || row.iter().zip(x_bounds).any(|(v, b)| !inside(*v, *b))
        {
            return Err(Error::BoundsViolated(format!(
                "instance {i} lies outside the bounds"
            )));
        }
    }
    let width = widths.iter().cloned().fold(f64::INFINITY, f64::min);
    let step = (0.5 * width / (m.max(1) as f64)).min(cfg.gap);
    let order = ascending_by_score(data, &vec![1.0; p]);
    let indices: Vec<usize> = order[n - m..].iter().rev().copied().collect();
    let outliers = (0..m)
        .map(|i| {
            let eps = step * (m - i) as f64;
            Outlier {
                x: x_bounds.iter().map(|(_, hi)| hi - eps).collect(),
                y: y_bounds.0 + eps,
            }
        })
        .collect();
    ContaminatedSample::replace(data, indices, outliers)
}

/// Scheme selector used by the empirical verifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    UnivariateHard,
    Axiswise,
    AxiswiseUnbounded,
    Binary,
    /// Localized or weak ranking with top-K size `k`.
    Localized {
        k: usize,
    },
}

impl Scheme {
    pub fn label(self) -> &'static str {
        match self {
            Scheme::UnivariateHard => "univariate-hard",
            Scheme::Axiswise => "axiswise",
            Scheme::AxiswiseUnbounded => "axiswise-unbounded",
            Scheme::Binary => "binary-flip",
            Scheme::Localized { .. } => "localized-lift",
        }
    }

    /// Largest `m` the scheme accepts on `n` instances.
    pub fn max_m(self, n: usize) -> usize {
        match self {
            Scheme::Localized { k } => k.min(n),
            _ => n,
        }
    }

    /// Contaminate `data` with `m` outliers.
    pub fn build(
        self,
        data: &Dataset,
        m: usize,
        cfg: &AttackConfig,
        signs: &[f64],
    ) -> Result<ContaminatedSample> {
        match self {
            Scheme::UnivariateHard if data.p() == 1 => {
                univariate_hard_attack(data, m, cfg, first_sign(signs)?)
            }
            Scheme::UnivariateHard | Scheme::Axiswise => {
                if data.p() == 1 {
                    univariate_hard_attack(data, m, cfg, first_sign(signs)?)
                } else {
                    axiswise_partial_attack(data, m, cfg, signs)
                }
            }
            Scheme::AxiswiseUnbounded => axiswise_unbounded_attack(data, m, cfg, signs),
            Scheme::Binary => binary_partial_attack(data, m, cfg, signs),
            Scheme::Localized { k } => {
                if data.p() == 1 {
                    localized_attack(data, k, m, cfg, first_sign(signs)?)
                } else {
                    axiswise_partial_attack(data, m, cfg, signs)
                }
            }
        }
    }
}

fn first_sign(signs: &[f64]) -> Result<f64> {
    signs.first().copied().ok_or(Error::DimensionMismatch {
        expected: 1,
        got: 0,
    })
}
