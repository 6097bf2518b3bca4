//! Pairwise ranking losses, surrogate families, penalties and the split of a
//! contaminated objective into clean, outlier and mixed pair sums.
//!
//! | family              | `L(u)`              | limit `u -> -inf` |
//! |---------------------|---------------------|-------------------|
//! | `Indicator`         | `1{u < 0}`          | 1                 |
//! | `Bounded(Sigmoid)`  | `C / (1 + e^u)`     | `C`               |
//! | `Unbounded(Exp)`    | `e^{-u}`            | infinity          |
//! | `Unbounded(Hinge)`  | `max(0, 1 - u)`     | infinity          |
//!
//! `u = (y_i - y_j)(s_i - s_j)`; tied scores give `u = 0`, which the
//! indicator counts as no loss.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{effective_scores, ContaminatedSample, Dataset, LinearScorer, BIG};

/// Shapes whose loss diverges for badly misranked pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UnboundedShape {
    Exponential,
    Hinge,
}

/// Shapes saturating at a finite bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundedShape {
    Sigmoid,
}

/// Pairwise loss applied to `u = (y_i - y_j)(s_i - s_j)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LossSpec {
    Indicator,
    Bounded { bound: f64, shape: BoundedShape },
    Unbounded(UnboundedShape),
}

impl LossSpec {
    pub fn sigmoid(bound: f64) -> Result<Self> {
        if !(bound > 0.0 && bound.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "loss bound must be positive and finite, got {bound}"
            )));
        }
        Ok(LossSpec::Bounded {
            bound,
            shape: BoundedShape::Sigmoid,
        })
    }

    pub fn eval(&self, u: f64) -> f64 {
        match *self {
            LossSpec::Indicator => {
                if u < 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            LossSpec::Bounded { bound, .. } => {
                if u > 0.0 {
                    let e = (-u).exp();
                    bound * e / (1.0 + e)
                } else {
                    bound / (1.0 + u.exp())
                }
            }
            LossSpec::Unbounded(UnboundedShape::Exponential) => (-u).exp().min(BIG),
            LossSpec::Unbounded(UnboundedShape::Hinge) => (1.0 - u).clamp(0.0, BIG),
        }
    }

    /// A subgradient of `L` at `u` (zero for the indicator).
    pub fn slope(&self, u: f64) -> f64 {
        match *self {
            LossSpec::Indicator => 0.0,
            LossSpec::Bounded { bound, .. } => {
                let s = if u > 0.0 {
                    let e = (-u).exp();
                    e / ((1.0 + e) * (1.0 + e))
                } else {
                    let e = u.exp();
                    e / ((1.0 + e) * (1.0 + e))
                };
                -bound * s
            }
            LossSpec::Unbounded(UnboundedShape::Exponential) => -(-u).exp().min(BIG),
            LossSpec::Unbounded(UnboundedShape::Hinge) => {
                if u < 1.0 {
                    -1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// The supremum `C_l` for bounded families.
    pub fn bound(&self) -> Option<f64> {
        match *self {
            LossSpec::Indicator => Some(1.0),
            LossSpec::Bounded { bound, .. } => Some(bound),
            LossSpec::Unbounded(_) => None,
        }
    }

    pub fn is_indicator(&self) -> bool {
        matches!(self, LossSpec::Indicator)
    }
}

/// Regularizer family.
#[derive(Debug, Clone, Copy)]
pub enum PenaltyFamily {
    /// `sum |beta_j|`
    L1,
    /// `sum beta_j^2`
    L2,
    /// User supplied; must be even, nonnegative, zero only at zero and
    /// coercive.
    Custom(fn(&[f64]) -> f64),
}

/// `lambda * J(beta)`.
#[derive(Debug, Clone, Copy)]
pub struct Penalty {
    pub family: PenaltyFamily,
    pub lambda: f64,
}

impl Penalty {
    pub fn new(family: PenaltyFamily, lambda: f64) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "lambda must be finite and >= 0, got {lambda}"
            )));
        }
        Ok(Penalty { family, lambda })
    }

    pub fn none() -> Self {
        Penalty {
            family: PenaltyFamily::L2,
            lambda: 0.0,
        }
    }

    pub fn l1(lambda: f64) -> Result<Self> {
        Self::new(PenaltyFamily::L1, lambda)
    }

    pub fn l2(lambda: f64) -> Result<Self> {
        Self::new(PenaltyFamily::L2, lambda)
    }

    /// Unscaled `J(beta)`.
    pub fn raw(&self, beta: &[f64]) -> f64 {
        match self.family {
            PenaltyFamily::L1 => beta.iter().map(|v| v.abs()).sum(),
            PenaltyFamily::L2 => beta.iter().map(|v| v * v).sum(),
            PenaltyFamily::Custom(f) => f(beta),
        }
    }

    pub fn value(&self, beta: &[f64]) -> f64 {
        if self.lambda == 0.0 {
            0.0
        } else {
            self.lambda * self.raw(beta)
        }
    }

    /// A subgradient of `lambda * J`. Custom families use central
    /// differences.
    pub fn slope(&self, beta: &[f64]) -> Vec<f64> {
        match self.family {
            PenaltyFamily::L1 => beta.iter().map(|v| self.lambda * sign(*v)).collect(),
            PenaltyFamily::L2 => beta.iter().map(|v| 2.0 * self.lambda * v).collect(),
            PenaltyFamily::Custom(f) => {
                let h = 1e-6;
                let mut probe = beta.to_vec();
                (0..beta.len())
                    .map(|j| {
                        probe[j] = beta[j] + h;
                        let up = f(&probe);
                        probe[j] = beta[j] - h;
                        let down = f(&probe);
                        probe[j] = beta[j];
                        self.lambda * (up - down) / (2.0 * h)
                    })
                    .collect()
            }
        }
    }
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Number of unordered pairs ordered against their responses.
pub fn misranked_pairs(y: &[f64], scores: &[f64]) -> usize {
    let mut count = 0;
    for i in 0..y.len() {
        for j in i + 1..y.len() {
            if (y[i] - y[j]) * (scores[i] - scores[j]) < 0.0 {
                count += 1;
            }
        }
    }
    count
}

fn pair_sum(y: &[f64], s: &[f64], spec: &LossSpec, pick: impl Fn(usize, usize) -> bool) -> f64 {
    let mut total = 0.0;
    for i in 0..y.len() {
        for j in i + 1..y.len() {
            if pick(i, j) {
                total += spec.eval((y[i] - y[j]) * (s[i] - s[j]));
            }
        }
    }
    // each unordered pair appears twice in the ordered double sum
    2.0 * total
}

fn pair_normalizer(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "pairwise losses need n >= 2, got {n}"
        )));
    }
    Ok((n * (n - 1)) as f64)
}

/// Averaged pairwise loss over all ordered pairs `i != j`.
pub fn hard_loss(data: &Dataset, scorer: &LinearScorer, spec: &LossSpec) -> Result<f64> {
    let s = effective_scores(scorer, data)?;
    hard_loss_from_scores(data.y(), &s, spec)
}

/// [`hard_loss`] on precomputed scores.
pub fn hard_loss_from_scores(y: &[f64], scores: &[f64], spec: &LossSpec) -> Result<f64> {
    let norm = pair_normalizer(y.len())?;
    Ok(pair_sum(y, scores, spec, |_, _| true) / norm)
}

/// Hard loss plus penalty.
pub fn objective(
    data: &Dataset,
    scorer: &LinearScorer,
    spec: &LossSpec,
    penalty: &Penalty,
) -> Result<f64> {
    Ok(hard_loss(data, scorer, spec)? + penalty.value(&scorer.beta))
}

/// Indices of the `k` largest values, ties broken by smallest index.
pub fn top_k(values: &[f64], k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    idx.truncate(k);
    idx
}

/// 1-based descending ranks, ties broken by smallest index.
pub fn descending_ranks(values: &[f64]) -> Vec<usize> {
    let order = top_k(values, values.len());
    let mut ranks = vec![0; values.len()];
    for (r, i) in order.into_iter().enumerate() {
        ranks[i] = r + 1;
    }
    ranks
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k == 0 || k > n {
        Err(Error::KOutOfRange { k, n })
    } else {
        Ok(())
    }
}

/// Fraction-of-top-K misclassification: `(2/n) * #{i in Best_K : rank_i > K}`.
pub fn weak_loss(data: &Dataset, scorer: &LinearScorer, k: usize) -> Result<f64> {
    check_k(k, data.n())?;
    let s = effective_scores(scorer, data)?;
    Ok(weak_loss_from_scores(data.y(), &s, k))
}

fn weak_loss_from_scores(y: &[f64], s: &[f64], k: usize) -> f64 {
    let ranks = descending_ranks(s);
    let missed = top_k(y, k).into_iter().filter(|&i| ranks[i] > k).count();
    2.0 * missed as f64 / y.len() as f64
}

/// Which top-K set the ranking part of the localized loss is computed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LocalizedVariant {
    /// The K instances with the largest responses.
    OnTrueBestK,
    /// The K instances with the largest predicted scores.
    OnPredictedBestK,
}

/// Weight of a misranked unordered pair in the localized ranking part.
///
/// `Full` is `2/(n(n-1))`; `Half` is `1/(n(n-1))`, the weight under which the
/// localized closed-form breakdown conditions are exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RankingWeight {
    Full,
    Half,
}

impl RankingWeight {
    fn per_pair(self, n: usize) -> f64 {
        let base = 1.0 / (n * (n - 1)) as f64;
        match self {
            RankingWeight::Full => 2.0 * base,
            RankingWeight::Half => base,
        }
    }
}

/// Classification and ranking parts of the localized loss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalizedParts {
    pub classification: f64,
    pub ranking: f64,
}

impl LocalizedParts {
    pub fn total(&self) -> f64 {
        self.classification + self.ranking
    }
}

/// `((n-K)/n) * weak + ranking part` with the `Full` pair weight.
pub fn localized_loss(
    data: &Dataset,
    scorer: &LinearScorer,
    k: usize,
    variant: LocalizedVariant,
) -> Result<f64> {
    Ok(localized_parts(data, scorer, k, variant, RankingWeight::Full)?.total())
}

/// Both parts of the localized loss for a chosen pair weight.
pub fn localized_parts(
    data: &Dataset,
    scorer: &LinearScorer,
    k: usize,
    variant: LocalizedVariant,
    weight: RankingWeight,
) -> Result<LocalizedParts> {
    let n = data.n();
    check_k(k, n)?;
    pair_normalizer(n)?;
    let s = effective_scores(scorer, data)?;
    Ok(localized_parts_from_scores(
        data.y(),
        &s,
        k,
        variant,
        weight,
    ))
}

pub(crate) fn localized_parts_from_scores(
    y: &[f64],
    s: &[f64],
    k: usize,
    variant: LocalizedVariant,
    weight: RankingWeight,
) -> LocalizedParts {
    let n = y.len();
    let classification = (n - k) as f64 / n as f64 * weak_loss_from_scores(y, s, k);
    let set = match variant {
        LocalizedVariant::OnTrueBestK => top_k(y, k),
        LocalizedVariant::OnPredictedBestK => top_k(s, k),
    };
    let ys: Vec<f64> = set.iter().map(|&i| y[i]).collect();
    let ss: Vec<f64> = set.iter().map(|&i| s[i]).collect();
    let ranking = weight.per_pair(n) * misranked_pairs(&ys, &ss) as f64;
    LocalizedParts {
        classification,
        ranking,
    }
}

/// Clean, outlier and mixed parts of a contaminated objective. The penalty
/// is carried by `g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decomposition {
    pub g: f64,
    pub f: f64,
    pub h: f64,
}

impl Decomposition {
    pub fn total(&self) -> f64 {
        self.g + self.f + self.h
    }
}

/// Split the objective on the merged sample into clean-pair (`g`, with the
/// penalty), outlier-pair (`f`) and mixed-pair (`h`) sums, all over ordered
/// pairs and normalized by `n(n-1)`.
pub fn decompose_objective(
    cs: &ContaminatedSample,
    scorer: &LinearScorer,
    spec: &LossSpec,
    penalty: &Penalty,
) -> Result<Decomposition> {
    let merged = cs.merged();
    let norm = pair_normalizer(merged.n())?;
    let s = effective_scores(scorer, &merged)?;
    let mask = cs.outlier_mask();
    let y = merged.y();
    let clean = pair_sum(y, &s, spec, |i, j| !mask[i] && !mask[j]);
    let outer = pair_sum(y, &s, spec, |i, j| mask[i] && mask[j]);
    let mixed = pair_sum(y, &s, spec, |i, j| mask[i] != mask[j]);
    Ok(Decomposition {
        g: clean / norm + penalty.value(&scorer.beta),
        f: outer / norm,
        h: mixed / norm,
    })
}

/// Ordered pairs touching at least one outlier, as a fraction of `n(n-1)`.
pub fn contaminated_pair_fraction(n: usize, m: usize) -> f64 {
    let all = (n * (n - 1)) as f64;
    let clean = ((n - m) * (n - m).saturating_sub(1)) as f64;
    (all - clean) / all
}

/// Clean-part objective plus the largest possible loss on every pair
/// involving an outlier.
pub fn upper_envelope_g(
    cs: &ContaminatedSample,
    scorer: &LinearScorer,
    spec: &LossSpec,
    penalty: &Penalty,
) -> Result<f64> {
    let bound = spec.bound().ok_or(Error::UnboundedLoss)?;
    let parts = decompose_objective(cs, scorer, spec, penalty)?;
    Ok(parts.g + contaminated_pair_fraction(cs.n(), cs.m()) * bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Outlier, ResponseKind};

    fn increasing(n: usize) -> Dataset {
        let v: Vec<f64> = (1..=n).map(|i| i as f64).collect();
        Dataset::univariate(&v, &v, ResponseKind::Continuous).unwrap()
    }

    fn triple() -> Dataset {
        Dataset::new(
            vec![vec![1.0, 1.0], vec![0.0, 3.0], vec![3.0, 2.0]],
            vec![1.0, 2.0, 3.0],
            ResponseKind::Continuous,
        )
        .unwrap()
    }

    #[test]
    fn hard_loss_examples() {
        let ind = LossSpec::Indicator;
        let t = triple();
        assert_eq!(
            hard_loss(&t, &LinearScorer::new(vec![1.0, 1.0], 0.0), &ind).unwrap(),
            0.0
        );
        assert_eq!(hard_loss(&t, &LinearScorer::zeros(2), &ind).unwrap(), 0.0);
        let d = increasing(3);
        assert_eq!(
            hard_loss(&d, &LinearScorer::new(vec![-1.0], 0.0), &ind).unwrap(),
            1.0
        );
    }

    #[test]
    fn surrogate_shapes() {
        let e = LossSpec::Unbounded(UnboundedShape::Exponential);
        assert_eq!(e.eval(0.0), 1.0);
        assert!(e.eval(50.0) < 1e-20);
        let h = LossSpec::Unbounded(UnboundedShape::Hinge);
        assert_eq!(h.eval(2.0), 0.0);
        assert_eq!(h.eval(-1.0), 2.0);
        let s = LossSpec::sigmoid(3.0).unwrap();
        assert!((s.eval(0.0) - 1.5).abs() < 1e-15);
        assert!((s.eval(-800.0) - 3.0).abs() < 1e-12);
        assert!(s.eval(800.0) < 1e-300);
        assert_eq!(s.bound(), Some(3.0));
        assert_eq!(e.bound(), None);
        assert!(LossSpec::sigmoid(0.0).is_err());
    }

    #[test]
    fn slopes_match_finite_differences() {
        let specs = [
            LossSpec::Unbounded(UnboundedShape::Exponential),
            LossSpec::sigmoid(2.0).unwrap(),
        ];
        for spec in specs {
            for u in [-2.0, -0.3, 0.4, 3.0] {
                let fd = (spec.eval(u + 1e-6) - spec.eval(u - 1e-6)) / 2e-6;
                assert!((fd - spec.slope(u)).abs() < 1e-6, "{spec:?} at {u}");
            }
        }
    }

    #[test]
    fn weak_loss_examples() {
        let d = increasing(4);
        let rev = LinearScorer::new(vec![-1.0], 0.0);
        let fwd = LinearScorer::new(vec![1.0], 0.0);
        assert_eq!(weak_loss(&d, &fwd, 2).unwrap(), 0.0);
        assert_eq!(weak_loss(&d, &rev, 2).unwrap(), 1.0);
        assert_eq!(weak_loss(&d, &rev, 4).unwrap(), 0.0);
        assert_eq!(
            weak_loss(&d, &rev, 0).unwrap_err(),
            Error::KOutOfRange { k: 0, n: 4 }
        );
        assert!(weak_loss(&d, &rev, 5).is_err());
    }

    #[test]
    fn localized_loss_examples() {
        let d = increasing(6);
        let fwd = LinearScorer::new(vec![1.0], 0.0);
        for v in [
            LocalizedVariant::OnTrueBestK,
            LocalizedVariant::OnPredictedBestK,
        ] {
            assert_eq!(localized_loss(&d, &fwd, 3, v).unwrap(), 0.0);
        }
        let rev = LinearScorer::new(vec![-1.0], 0.0);
        let parts = localized_parts(
            &d,
            &rev,
            3,
            LocalizedVariant::OnTrueBestK,
            RankingWeight::Full,
        )
        .unwrap();
        // all 3 of Best_3 missed, all 3 pairs inside misranked
        assert!((parts.classification - 0.5 * 1.0).abs() < 1e-15);
        assert!((parts.ranking - 2.0 * 3.0 / 30.0).abs() < 1e-15);
        let half = localized_parts(
            &d,
            &rev,
            3,
            LocalizedVariant::OnTrueBestK,
            RankingWeight::Half,
        )
        .unwrap();
        assert!((half.ranking * 2.0 - parts.ranking).abs() < 1e-15);
    }

    #[test]
    fn ranks_break_ties_by_index() {
        assert_eq!(descending_ranks(&[1.0, 1.0, 2.0]), vec![2, 3, 1]);
        assert_eq!(top_k(&[0.0, 0.0, 0.0], 2), vec![0, 1]);
    }

    fn sample() -> ContaminatedSample {
        let d = increasing(4);
        ContaminatedSample::replace(
            &d,
            vec![2, 3],
            vec![
                Outlier {
                    x: vec![5.0],
                    y: -1.0,
                },
                Outlier {
                    x: vec![6.0],
                    y: -2.0,
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn decomposition_adds_up() {
        let cs = sample();
        let spec = LossSpec::sigmoid(1.0).unwrap();
        let pen = Penalty::l2(0.3).unwrap();
        for beta in [-2.0, -0.5, 0.0, 0.7, 3.0] {
            let sc = LinearScorer::new(vec![beta], 0.0);
            let parts = decompose_objective(&cs, &sc, &spec, &pen).unwrap();
            let full = objective(&cs.merged(), &sc, &spec, &pen).unwrap();
            assert!((parts.total() - full).abs() < 1e-12);
        }
    }

    #[test]
    fn decomposition_edges() {
        let d = increasing(4);
        let sc = LinearScorer::new(vec![0.4], 0.0);
        let spec = LossSpec::Indicator;
        let pen = Penalty::l1(2.0).unwrap();
        let none =
            decompose_objective(&ContaminatedSample::untouched(&d), &sc, &spec, &pen).unwrap();
        assert_eq!((none.f, none.h), (0.0, 0.0));
        assert!((none.g - objective(&d, &sc, &spec, &pen).unwrap()).abs() < 1e-15);
        let all = ContaminatedSample::replace(
            &d,
            (0..4).collect(),
            (0..4)
                .map(|i| Outlier {
                    x: vec![i as f64],
                    y: -(i as f64),
                })
                .collect(),
        )
        .unwrap();
        let parts = decompose_objective(&all, &sc, &spec, &pen).unwrap();
        assert!((parts.g - pen.value(&sc.beta)).abs() < 1e-15);
        assert_eq!(parts.h, 0.0);
        let env = upper_envelope_g(&all, &sc, &spec, &pen).unwrap();
        assert!((env - (pen.value(&sc.beta) + 1.0)).abs() < 1e-15);
    }

    #[test]
    fn envelope_correction() {
        assert!((contaminated_pair_fraction(4, 2) - 5.0 / 6.0).abs() < 1e-15);
        assert_eq!(contaminated_pair_fraction(4, 0), 0.0);
        let cs = sample();
        let sc = LinearScorer::new(vec![1.0], 0.0);
        let spec = LossSpec::Indicator;
        let pen = Penalty::none();
        let g = decompose_objective(&cs, &sc, &spec, &pen).unwrap().g;
        let env = upper_envelope_g(&cs, &sc, &spec, &pen).unwrap();
        assert!((env - g - 5.0 / 6.0).abs() < 1e-15);
        let unb = LossSpec::Unbounded(UnboundedShape::Hinge);
        assert_eq!(
            upper_envelope_g(&cs, &sc, &unb, &pen).unwrap_err(),
            Error::UnboundedLoss
        );
    }

    #[test]
    fn penalty_values() {
        let l1 = Penalty::l1(2.0).unwrap();
        let l2 = Penalty::l2(0.5).unwrap();
        assert_eq!(l1.value(&[1.0, -2.0]), 6.0);
        assert_eq!(l2.value(&[1.0, -2.0]), 2.5);
        assert!(Penalty::l1(-1.0).is_err());
        fn quartic(b: &[f64]) -> f64 {
            b.iter().map(|v| v.powi(4)).sum()
        }
        let c = Penalty::new(PenaltyFamily::Custom(quartic), 1.0).unwrap();
        let g = c.slope(&[1.0]);
        assert!((g[0] - 4.0).abs() < 1e-5);
    }
}
