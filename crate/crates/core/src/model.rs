//! Shared domain types: datasets, linear scorers, contaminated samples and
//! the breakdown-set membership tests.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Magnitude cap standing in for infinity. Coefficients at or beyond this
/// size are treated as diverging.
pub const BIG: f64 = 1e12;

/// Response type of a dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ResponseKind {
    Continuous,
    /// Labels in {-1, +1}.
    Binary,
    /// Ordered labels in {1, ..., d}.
    DPartite(u32),
}

impl ResponseKind {
    /// Lowest and highest admissible label for categorical kinds.
    pub fn extreme_labels(self) -> Option<(f64, f64)> {
        match self {
            ResponseKind::Continuous => None,
            ResponseKind::Binary => Some((-1.0, 1.0)),
            ResponseKind::DPartite(d) => Some((1.0, d as f64)),
        }
    }

    fn check_label(self, y: f64) -> Result<()> {
        match self {
            ResponseKind::Continuous => Ok(()),
            ResponseKind::Binary if y == 1.0 || y == -1.0 => Ok(()),
            ResponseKind::Binary => Err(Error::InvalidDataset(format!(
                "binary label must be -1 or +1, got {y}"
            ))),
            ResponseKind::DPartite(d) => {
                if d < 2 {
                    return Err(Error::InvalidDataset(format!(
                        "d-partite data needs d >= 2, got {d}"
                    )));
                }
                if y.fract() == 0.0 && y >= 1.0 && y <= d as f64 {
                    Ok(())
                } else {
                    Err(Error::InvalidDataset(format!(
                        "d-partite label must be an integer in 1..={d}, got {y}"
                    )))
                }
            }
        }
    }
}

/// Regressor matrix (row-major) with responses.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    x: Vec<f64>,
    y: Vec<f64>,
    p: usize,
    kind: ResponseKind,
}

impl Dataset {
    /// Build a dataset and enforce all invariants: `n >= 2`, finite entries,
    /// pairwise distinct continuous responses, labels in range and not all
    /// equal for categorical kinds.
    pub fn new(rows: Vec<Vec<f64>>, y: Vec<f64>, kind: ResponseKind) -> Result<Self> {
        let data = Self::relaxed(rows, y, kind)?;
        if data.n() < 2 {
            return Err(Error::InvalidDataset(format!(
                "need at least 2 instances, got {}",
                data.n()
            )));
        }
        match kind {
            ResponseKind::Continuous => {
                let mut sorted = data.y.clone();
                sorted.sort_by(f64::total_cmp);
                if sorted.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::InvalidDataset(
                        "continuous responses must be pairwise distinct".into(),
                    ));
                }
            }
            _ => {
                if data.y.iter().all(|&v| v == data.y[0]) {
                    return Err(Error::InvalidDataset("all labels are equal".into()));
                }
            }
        }
        Ok(data)
    }

    /// Build a dataset checking only shape, finiteness and label domain.
    /// Used for contaminated samples, which may contain tied responses.
    pub fn relaxed(rows: Vec<Vec<f64>>, y: Vec<f64>, kind: ResponseKind) -> Result<Self> {
        if rows.len() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: rows.len(),
                got: y.len(),
            });
        }
        let p = rows.first().map_or(0, Vec::len);
        if !rows.is_empty() && p == 0 {
            return Err(Error::InvalidDataset("need at least one regressor".into()));
        }
        let mut x = Vec::with_capacity(rows.len() * p);
        for row in &rows {
            if row.len() != p {
                return Err(Error::DimensionMismatch {
                    expected: p,
                    got: row.len(),
                });
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidDataset("non-finite regressor".into()));
            }
            x.extend_from_slice(row);
        }
        for &v in &y {
            if !v.is_finite() {
                return Err(Error::InvalidDataset("non-finite response".into()));
            }
            kind.check_label(v)?;
        }
        Ok(Dataset { x, y, p, kind })
    }

    /// Empty dataset with `p` columns.
    pub fn empty(p: usize, kind: ResponseKind) -> Self {
        Dataset {
            x: Vec::new(),
            y: Vec::new(),
            p,
            kind,
        }
    }

    /// Univariate convenience constructor.
    pub fn univariate(xs: &[f64], ys: &[f64], kind: ResponseKind) -> Result<Self> {
        Self::new(xs.iter().map(|&v| vec![v]).collect(), ys.to_vec(), kind)
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn kind(&self) -> ResponseKind {
        self.kind
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.x[i * self.p..(i + 1) * self.p]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.x.chunks(self.p.max(1)).take(self.n())
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn column_max(&self, j: usize) -> Option<f64> {
        self.rows().map(|r| r[j]).reduce(f64::max)
    }

    pub fn column_min(&self, j: usize) -> Option<f64> {
        self.rows().map(|r| r[j]).reduce(f64::min)
    }

    pub fn y_min(&self) -> Option<f64> {
        self.y.iter().copied().reduce(f64::min)
    }

    pub fn y_max(&self) -> Option<f64> {
        self.y.iter().copied().reduce(f64::max)
    }

    /// Largest absolute regressor value.
    pub fn max_abs_x(&self) -> f64 {
        self.x.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// Rows as owned vectors.
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(<[f64]>::to_vec).collect()
    }

    /// Sub-sample in the order given by `indices`.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        let mut x = Vec::with_capacity(indices.len() * self.p);
        let mut y = Vec::with_capacity(indices.len());
        for &i in indices {
            x.extend_from_slice(self.row(i));
            y.push(self.y[i]);
        }
        Dataset {
            x,
            y,
            p: self.p,
            kind: self.kind,
        }
    }

    /// Same regressors with new responses (label domain is checked).
    pub fn with_responses(&self, y: Vec<f64>) -> Result<Dataset> {
        Dataset::relaxed(self.to_rows(), y, self.kind)
    }
}

/// Linear scoring function `x -> x.beta + b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearScorer {
    pub beta: Vec<f64>,
    pub b: f64,
}

impl LinearScorer {
    pub fn new(beta: Vec<f64>, b: f64) -> Self {
        LinearScorer { beta, b }
    }

    pub fn zeros(p: usize) -> Self {
        LinearScorer {
            beta: vec![0.0; p],
            b: 0.0,
        }
    }

    pub fn p(&self) -> usize {
        self.beta.len()
    }

    pub fn norm(&self) -> f64 {
        self.beta.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Result of scoring a sample.
#[derive(Debug, Clone, PartialEq)]
pub enum ScoreOutcome {
    /// Scores per row. `diverging` is set when a capped coefficient entered
    /// a score, in which case that score is reported as `±BIG`.
    Scores { values: Vec<f64>, diverging: bool },
    /// An undefined form (infinity times zero, or infinity minus infinity)
    /// occurred; the model is treated as random guessing with `beta = 0`.
    RandomGuess,
}

/// Score every row of `data`.
pub fn score_all(scorer: &LinearScorer, data: &Dataset) -> Result<ScoreOutcome> {
    if scorer.p() != data.p() {
        return Err(Error::DimensionMismatch {
            expected: data.p(),
            got: scorer.p(),
        });
    }
    let mut values = Vec::with_capacity(data.n());
    let mut diverging = false;
    for row in data.rows() {
        let mut sum = scorer.b;
        let (mut up, mut down) = (false, false);
        for (&beta, &x) in scorer.beta.iter().zip(row) {
            if beta.abs() >= BIG || !beta.is_finite() {
                if x == 0.0 || beta.is_nan() {
                    return Ok(ScoreOutcome::RandomGuess);
                }
                if (beta > 0.0) == (x > 0.0) {
                    up = true;
                } else {
                    down = true;
                }
            } else {
                sum += beta * x;
            }
        }
        let score = match (up, down) {
            (true, true) => return Ok(ScoreOutcome::RandomGuess),
            (true, false) => BIG,
            (false, true) => -BIG,
            (false, false) => sum.clamp(-BIG, BIG),
        };
        diverging |= up || down;
        values.push(score);
    }
    Ok(ScoreOutcome::Scores { values, diverging })
}

/// Scores with the random-guessing rule applied: an undefined form yields
/// the constant scores of `beta = 0`.
pub fn effective_scores(scorer: &LinearScorer, data: &Dataset) -> Result<Vec<f64>> {
    Ok(match score_all(scorer, data)? {
        ScoreOutcome::Scores { values, .. } => values,
        ScoreOutcome::RandomGuess => vec![scorer.b; data.n()],
    })
}

/// Whether the breakdown set is anchored at the population coefficient or
/// at the fit on the clean sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReferenceVariant {
    Population,
    Sample,
}

/// Candidates whose every component on the reference support has flipped
/// sign.
#[derive(Debug, Clone, PartialEq)]
pub struct BreakdownSet {
    reference: Vec<f64>,
    variant: ReferenceVariant,
    dead_band: f64,
}

impl BreakdownSet {
    pub fn new(reference: Vec<f64>, variant: ReferenceVariant) -> Result<Self> {
        if reference.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("reference must be finite".into()));
        }
        if reference.iter().all(|&v| v == 0.0) {
            return Err(Error::InvalidParameter("reference must be nonzero".into()));
        }
        Ok(BreakdownSet {
            reference,
            variant,
            dead_band: 0.0,
        })
    }

    /// Demand `candidate_j * reference_j < -tau` instead of `< 0`.
    pub fn with_dead_band(mut self, tau: f64) -> Result<Self> {
        if !(tau >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "dead band must be >= 0, got {tau}"
            )));
        }
        self.dead_band = tau;
        Ok(self)
    }

    pub fn reference(&self) -> &[f64] {
        &self.reference
    }

    pub fn variant(&self) -> ReferenceVariant {
        self.variant
    }

    pub fn dead_band(&self) -> f64 {
        self.dead_band
    }

    /// Signs of the reference components (0 off the support).
    pub fn reference_signs(&self) -> Vec<f64> {
        self.reference
            .iter()
            .map(|&v| if v == 0.0 { 0.0 } else { v.signum() })
            .collect()
    }

    pub fn contains(&self, candidate: &[f64]) -> bool {
        self.deficit(candidate) == 0
    }

    /// Number of support components that are not (yet) sign-reverted.
    pub fn deficit(&self, candidate: &[f64]) -> usize {
        self.reference
            .iter()
            .zip(candidate)
            .filter(|(&r, &c)| r != 0.0 && !(c * r < -self.dead_band))
            .count()
    }
}

/// Free-function form of [`BreakdownSet::contains`].
pub fn in_breakdown_set(candidate: &[f64], set: &BreakdownSet) -> bool {
    set.contains(candidate)
}

/// Angular breakdown: `candidate . reference <= 0`.
pub fn angular_breakdown(candidate: &[f64], reference: &[f64]) -> bool {
    candidate
        .iter()
        .zip(reference)
        .map(|(a, b)| a * b)
        .sum::<f64>()
        <= 0.0
}

/// Norm-divergence breakdown against `threshold` (use [`BIG`] by default).
pub fn classical_norm_breakdown(candidate: &[f64], threshold: f64) -> bool {
    candidate.iter().map(|v| v * v).sum::<f64>().sqrt() > threshold
}

/// An outlying instance placed by an attack.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outlier {
    pub x: Vec<f64>,
    pub y: f64,
}

/// A sample split into clean instances and replaced positions.
#[derive(Debug, Clone, PartialEq)]
pub struct ContaminatedSample {
    clean: Dataset,
    clean_indices: Vec<usize>,
    outlier_indices: Vec<usize>,
    outliers: Vec<Outlier>,
}

impl ContaminatedSample {
    /// Replace the instances at `indices` of `data` by `outliers`
    /// (matched position by position).
    pub fn replace(data: &Dataset, indices: Vec<usize>, outliers: Vec<Outlier>) -> Result<Self> {
        let n = data.n();
        if indices.len() != outliers.len() {
            return Err(Error::DimensionMismatch {
                expected: indices.len(),
                got: outliers.len(),
            });
        }
        let mut taken = vec![false; n];
        for &i in &indices {
            if i >= n || taken[i] {
                return Err(Error::InvalidParameter(format!(
                    "replaced index {i} is out of range or repeated"
                )));
            }
            taken[i] = true;
        }
        for o in &outliers {
            if o.x.len() != data.p() {
                return Err(Error::DimensionMismatch {
                    expected: data.p(),
                    got: o.x.len(),
                });
            }
            if o.x.iter().any(|v| !v.is_finite()) || !o.y.is_finite() {
                return Err(Error::InvalidParameter("outlier must be finite".into()));
            }
            data.kind().check_label(o.y)?;
        }
        let clean_indices: Vec<usize> = (0..n).filter(|&i| !taken[i]).collect();
        Ok(ContaminatedSample {
            clean: data.subset(&clean_indices),
            clean_indices,
            outlier_indices: indices,
            outliers,
        })
    }

    /// The uncontaminated sample itself.
    pub fn untouched(data: &Dataset) -> Self {
        ContaminatedSample {
            clean: data.clone(),
            clean_indices: (0..data.n()).collect(),
            outlier_indices: Vec::new(),
            outliers: Vec::new(),
        }
    }

    pub fn clean(&self) -> &Dataset {
        &self.clean
    }

    pub fn clean_indices(&self) -> &[usize] {
        &self.clean_indices
    }

    pub fn outlier_indices(&self) -> &[usize] {
        &self.outlier_indices
    }

    pub fn outliers(&self) -> &[Outlier] {
        &self.outliers
    }

    pub fn n(&self) -> usize {
        self.clean_indices.len() + self.outlier_indices.len()
    }

    pub fn m(&self) -> usize {
        self.outlier_indices.len()
    }

    /// Whether position `i` of the merged sample holds an outlier.
    pub fn outlier_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.n()];
        for &i in &self.outlier_indices {
            mask[i] = true;
        }
        mask
    }

    /// The full sample with outliers at their positions.
    pub fn merged(&self) -> Dataset {
        let n = self.n();
        let mut rows = vec![Vec::new(); n];
        let mut y = vec![0.0; n];
        for (k, &i) in self.clean_indices.iter().enumerate() {
            rows[i] = self.clean.row(k).to_vec();
            y[i] = self.clean.y()[k];
        }
        for (o, &i) in self.outliers.iter().zip(&self.outlier_indices) {
            rows[i] = o.x.clone();
            y[i] = o.y;
        }
        let p = self.clean.p();
        if n == 0 {
            return Dataset::empty(p, self.clean.kind());
        }
        Dataset::relaxed(rows, y, self.clean.kind()).expect("parts were validated on construction")
    }
}

/// Outcome of a breakdown-point computation or measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BreakdownReport {
    pub m_min: Option<usize>,
    pub n: usize,
    pub bdp: Option<f64>,
    pub regime: String,
    pub interval: Option<[usize; 2]>,
    pub exists: bool,
    pub scheme: String,
}

impl BreakdownReport {
    pub fn found(m: usize, n: usize, regime: impl Into<String>, scheme: impl Into<String>) -> Self {
        BreakdownReport {
            m_min: Some(m),
            n,
            bdp: Some(m as f64 / n as f64),
            regime: regime.into(),
            interval: None,
            exists: true,
            scheme: scheme.into(),
        }
    }

    pub fn nonexistent(n: usize, regime: impl Into<String>, scheme: impl Into<String>) -> Self {
        BreakdownReport {
            m_min: None,
            n,
            bdp: None,
            regime: regime.into(),
            interval: None,
            exists: false,
            scheme: scheme.into(),
        }
    }

    pub fn with_interval(mut self, lo: usize, hi: usize) -> Self {
        self.interval = Some([lo, hi]);
        self
    }

    /// Check the report invariants.
    pub fn is_consistent(&self) -> bool {
        let presence = self.exists == self.m_min.is_some() && self.exists == self.bdp.is_some();
        let bracket = match (self.interval, self.m_min) {
            (Some([lo, hi]), Some(m)) => lo <= m && m <= hi,
            (Some([lo, hi]), None) => lo <= hi,
            _ => true,
        };
        presence && bracket
    }
}
