//! Finite-sample breakdown points in closed form or as minimal-m scans.
//!
//! Every threshold condition is evaluated in exact integer arithmetic: the
//! rational terms are multiplied through by a common positive denominator
//! so strict inequalities are never decided by rounding.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::losses::LocalizedVariant;
use crate::model::BreakdownReport;

/// Ranking problem family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Task {
    HardContinuous,
    HardBinary,
    HardDPartite,
    LocalizedOnTrueBestK,
    LocalizedOnPredictedBestK,
    Weak,
}

impl Task {
    pub fn localized_variant(self) -> Option<LocalizedVariant> {
        match self {
            Task::LocalizedOnTrueBestK => Some(LocalizedVariant::OnTrueBestK),
            Task::LocalizedOnPredictedBestK => Some(LocalizedVariant::OnPredictedBestK),
            _ => None,
        }
    }

    pub fn is_localized(self) -> bool {
        self.localized_variant().is_some()
    }

    pub fn is_categorical(self) -> bool {
        matches!(self, Task::HardBinary | Task::HardDPartite)
    }
}

/// Whether the pairwise loss is bounded (indicator-like) or unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LossRegime {
    IndicatorBounded,
    Unbounded,
}

/// Which part of a localized loss carries the unbounded surrogate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LocalizedPart {
    Ranking,
    Classification,
}

/// Parameters identifying a problem class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemClass {
    pub task: Task,
    pub loss_regime: LossRegime,
    pub n: usize,
    pub p: usize,
    pub k: Option<usize>,
    pub classes: Option<u32>,
    pub unbounded_part: LocalizedPart,
}

impl ProblemClass {
    pub fn new(task: Task, n: usize, p: usize) -> Self {
        ProblemClass {
            task,
            loss_regime: LossRegime::IndicatorBounded,
            n,
            p,
            k: None,
            classes: None,
            unbounded_part: LocalizedPart::Ranking,
        }
    }

    pub fn hard(n: usize, p: usize) -> Self {
        Self::new(Task::HardContinuous, n, p)
    }

    pub fn localized(n: usize, k: usize, p: usize, variant: LocalizedVariant) -> Self {
        let task = match variant {
            LocalizedVariant::OnTrueBestK => Task::LocalizedOnTrueBestK,
            LocalizedVariant::OnPredictedBestK => Task::LocalizedOnPredictedBestK,
        };
        Self::new(task, n, p).with_k(k)
    }

    pub fn weak(n: usize, k: usize, p: usize) -> Self {
        Self::new(Task::Weak, n, p).with_k(k)
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }

    pub fn with_classes(mut self, d: u32) -> Self {
        self.classes = Some(d);
        self
    }

    pub fn unbounded(mut self) -> Self {
        self.loss_regime = LossRegime::Unbounded;
        self
    }

    pub fn with_part(mut self, part: LocalizedPart) -> Self {
        self.unbounded_part = part;
        self
    }

    fn require_k(&self) -> Result<usize> {
        let k = self
            .k
            .ok_or_else(|| Error::InvalidParameter("this task needs K".into()))?;
        if k == 0 || k > self.n {
            return Err(Error::KOutOfRange { k, n: self.n });
        }
        Ok(k)
    }
}

fn need_p(p: usize) -> Result<()> {
    if p == 0 {
        Err(Error::InvalidParameter("p must be >= 1".into()))
    } else {
        Ok(())
    }
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        Err(Error::KOutOfRange { k, n })
    } else {
        Ok(())
    }
}

fn pos(v: i128) -> i128 {
    v.max(0)
}

/// `m(n-m) + m(m-1)/2 > (n-m)(n-m-1)/2`: the outliers' misrankings under
/// the original sign exceed the clean pairs a reverted sign misranks.
pub fn hard_univariate_holds(n: usize, m: usize) -> bool {
    let (n, m) = (n as i128, m as i128);
    let r = pos(n - m);
    2 * m * r + m * (m - 1) > r * pos(r - 1)
}

/// Least `m` breaking a univariate hard ranking of `n` instances.
pub fn hard_univariate(n: usize) -> Result<BreakdownReport> {
    if n < 4 {
        return Err(Error::SampleTooSmall(n));
    }
    let m = (1..=n).find(|&m| hard_univariate_holds(n, m)).unwrap_or(n);
    Ok(BreakdownReport::found(m, n, "p=1", "univariate-hard"))
}

/// `k(k+1)/2 > c(c-1)/2` with `c = max(n - pk - 1, 0)` clean points left.
pub fn hard_multivariate_holds(n: usize, p: usize, k: usize) -> bool {
    let c = pos(n as i128 - (p * k) as i128 - 1);
    let k = k as i128;
    k * (k + 1) > c * pos(c - 1)
}

fn early_stop_interval(m_star: usize, chunk: usize, k: usize) -> (usize, usize) {
    let lo = (chunk * (k - 1) + 2).min(m_star);
    (lo, m_star)
}

/// Axiswise outlier count for `2 <= p <= n-1`; nonexistent for `p >= n`.
pub fn hard_multivariate(n: usize, p: usize) -> Result<BreakdownReport> {
    if p < 2 {
        return Err(Error::InvalidParameter(
            "multivariate formula needs p >= 2 (use hard_univariate)".into(),
        ));
    }
    if p >= n {
        return Ok(BreakdownReport::nonexistent(n, "p>=n", "axiswise"));
    }
    let k = (1..=n)
        .find(|&k| hard_multivariate_holds(n, p, k))
        .unwrap_or(n);
    let m_star = (1 + p * k).min(n - 1);
    let regime = if p == n - 1 {
        "p=n-1: p outliers suffice, last clean point as start".to_string()
    } else if 1 + p * k > n - 1 {
        format!("k*={k}, early stop")
    } else {
        format!("k*={k}")
    };
    let (lo, hi) = early_stop_interval(m_star, p, k);
    Ok(BreakdownReport::found(m_star, n, regime, "axiswise").with_interval(lo, hi))
}

/// `k*floor(n/2) + k(ceil(n/2) - k) > (ceil(n/2) - k)(floor(n/2) - k)`.
pub fn binary_univariate_holds(n: usize, k: usize) -> bool {
    let lo = (n / 2) as i128;
    let hi = n as i128 - lo;
    let k = k as i128;
    k * lo + k * pos(hi - k) > pos(hi - k) * pos(lo - k)
}

/// Label flips on both ends of a univariate bipartite (or d-partite) sample.
pub fn binary_univariate(n: usize) -> Result<BreakdownReport> {
    if n < 4 {
        return Err(Error::SampleTooSmall(n));
    }
    let k = (1..=n.div_ceil(2))
        .find(|&k| binary_univariate_holds(n, k))
        .unwrap_or(n.div_ceil(2));
    Ok(BreakdownReport::found(
        (2 * k).min(n),
        n,
        "p=1",
        "binary-flip",
    ))
}

/// `k(k+1) > c(c-1)/2` with `c = max(n - 2pk - 1, 0)`.
pub fn binary_multivariate_holds(n: usize, p: usize, k: usize) -> bool {
    let c = pos(n as i128 - (2 * p * k) as i128 - 1);
    let k = k as i128;
    2 * k * (k + 1) > c * pos(c - 1)
}

/// Two-sided axiswise scheme for bipartite data, `2 <= p <= n-1`.
pub fn binary_multivariate(n: usize, p: usize) -> Result<BreakdownReport> {
    if p < 2 {
        return Err(Error::InvalidParameter(
            "multivariate formula needs p >= 2 (use binary_univariate)".into(),
        ));
    }
    if p >= n {
        return Ok(BreakdownReport::nonexistent(n, "p>=n", "binary-axiswise"));
    }
    let k = (1..=n)
        .find(|&k| binary_multivariate_holds(n, p, k))
        .unwrap_or(n);
    let m_star = (1 + 2 * p * k).min(n);
    let regime = if 2 * p * k + 1 >= n {
        format!("k*={k}, early stop: starting point with the high label")
    } else {
        format!("k*={k}")
    };
    let (lo, hi) = early_stop_interval(m_star, 2 * p, k);
    Ok(BreakdownReport::found(m_star, n, regime, "binary-axiswise").with_interval(lo, hi))
}

/// Upper bounds under unbounded surrogate losses.
pub fn unbounded_bdp(problem: &ProblemClass) -> Result<BreakdownReport> {
    if problem.loss_regime != LossRegime::Unbounded {
        return Err(Error::InvalidParameter(
            "unbounded_bdp needs the unbounded loss regime".into(),
        ));
    }
    let (n, p) = (problem.n, problem.p);
    need_p(p)?;
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n must be >= 2, got {n}")));
    }
    let scheme = "axiswise-unbounded";
    let found = |m: usize, regime: &str| Ok(BreakdownReport::found(m, n, regime, scheme));
    match problem.task {
        Task::HardContinuous | Task::HardBinary | Task::HardDPartite => {
            if p >= n {
                Ok(BreakdownReport::nonexistent(n, "p>=n", scheme))
            } else if p == 1 {
                found(1, "p=1")
            } else if p == n - 1 {
                found(p, "p=n-1")
            } else {
                found(p + 1, "1<p<n-1")
            }
        }
        Task::LocalizedOnTrueBestK | Task::LocalizedOnPredictedBestK => {
            let k = problem.require_k()?;
            match problem.unbounded_part {
                LocalizedPart::Ranking => {
                    if p >= k {
                        Ok(BreakdownReport::nonexistent(
                            n,
                            "ranking part, p>=K",
                            scheme,
                        ))
                    } else if p == 1 {
                        found(1, "ranking part, p=1")
                    } else if p == k - 1 {
                        found(p, "ranking part, p=K-1")
                    } else {
                        found(p + 1, "ranking part, p<=K-2")
                    }
                }
                LocalizedPart::Classification => {
                    if p > k {
                        Ok(BreakdownReport::nonexistent(
                            n,
                            "classification part, p>K",
                            scheme,
                        ))
                    } else if p == k {
                        found(p, "classification part, p=K")
                    } else {
                        found(p + 1, "classification part, p<=K-1")
                    }
                }
            }
        }
        Task::Weak => {
            let k = problem.require_k()?;
            if p >= k {
                Ok(BreakdownReport::nonexistent(n, "p>=K", scheme))
            } else {
                found(p, "p<=K-1")
            }
        }
    }
}

/// Which of the three localized regimes applies for a candidate `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalizedRegime {
    /// `K <= (n+m)/2`
    Lower,
    /// `(n+m)/2 < K <= n-m`
    Middle,
    /// `K >= n-m`: only ranking inside the top K matters.
    Upper,
}

impl LocalizedRegime {
    pub fn label(self) -> &'static str {
        match self {
            LocalizedRegime::Lower => "K<=(n+m)/2",
            LocalizedRegime::Middle => "(n+m)/2<K<=n-m",
            LocalizedRegime::Upper => "K>=n-m",
        }
    }
}

/// Regime, and whether the middle-regime side condition failed so the lower
/// regime was used instead.
pub fn localized_regime(n: usize, k: usize, m: usize) -> (LocalizedRegime, bool) {
    let (n, k, m) = (n as i128, k as i128, m as i128);
    if k >= n - m {
        (LocalizedRegime::Upper, false)
    } else if 2 * k <= n + m {
        (LocalizedRegime::Lower, false)
    } else if 2 * (n - m) >= n + m {
        (LocalizedRegime::Middle, false)
    } else {
        (LocalizedRegime::Lower, true)
    }
}

/// Univariate localized condition at `m`, scaled by `2n^2(n-1)`.
pub fn localized_univariate_holds(
    n: usize,
    k: usize,
    m: usize,
    variant: LocalizedVariant,
) -> (bool, LocalizedRegime, bool) {
    let (regime, flagged) = localized_regime(n, k, m);
    if regime == LocalizedRegime::Upper {
        return (hard_univariate_holds(k, m), regime, flagged);
    }
    let (ni, ki, mi) = (n as i128, k as i128, m as i128);
    let rest = pos(ki - mi);
    let top_pairs = rest * pos(rest - 1) * ni;
    let class_scale = 4 * (ni - ki) * (ni - 1);
    let lhs_class = match regime {
        LocalizedRegime::Lower => class_scale * rest,
        _ => class_scale * (ni - ki),
    };
    let rhs_rank = (mi * (mi - 1) + 2 * mi * rest) * ni;
    let lhs = lhs_class + top_pairs;
    let rhs = class_scale * mi
        + match (variant, regime) {
            (LocalizedVariant::OnPredictedBestK, LocalizedRegime::Lower) => 0,
            _ => rhs_rank,
        };
    (lhs < rhs, regime, flagged)
}

/// Univariate localized breakdown point, capped at K.
pub fn localized_univariate(
    n: usize,
    k: usize,
    variant: LocalizedVariant,
) -> Result<BreakdownReport> {
    check_k(n, k)?;
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n must be >= 2, got {n}")));
    }
    let mut hit = None;
    for m in 1..=k {
        let (holds, regime, flagged) = localized_univariate_holds(n, k, m, variant);
        if holds {
            hit = Some((m, regime, flagged));
            break;
        }
    }
    let (m, regime, flagged) = hit.unwrap_or_else(|| {
        let (r, f) = localized_regime(n, k, k);
        (k, r, f)
    });
    let mut label = regime.label().to_string();
    if flagged {
        label.push_str(" [flagged]");
    }
    let scheme = match (regime, variant) {
        (LocalizedRegime::Upper, _) => "univariate-hard",
        (LocalizedRegime::Middle, LocalizedVariant::OnPredictedBestK) => "univariate-hard",
        _ => "localized-lift",
    };
    Ok(BreakdownReport::found(m, n, label, scheme))
}

/// Multivariate localized condition at chunk count `k_chunks`.
pub fn localized_multivariate_holds(
    n: usize,
    k: usize,
    p: usize,
    k_chunks: usize,
    variant: LocalizedVariant,
) -> (bool, LocalizedRegime) {
    let m = 1 + p * k_chunks;
    if k + m > n {
        return (
            hard_multivariate_holds(k, p, k_chunks),
            LocalizedRegime::Upper,
        );
    }
    let (ni, ki) = (n as i128, k as i128);
    let kc = k_chunks as i128;
    let mi = m as i128;
    let c = pos(ki - mi);
    let top_pairs = c * pos(c - 1) * ni;
    let class_scale = 4 * (ni - ki) * (ni - 1);
    let chunk_pairs = kc * (kc + 1) * ni;
    match variant {
        LocalizedVariant::OnTrueBestK => {
            let regime = if c <= ni - ki {
                LocalizedRegime::Lower
            } else {
                LocalizedRegime::Middle
            };
            let lhs = class_scale * c.min(ni - ki) + top_pairs;
            let rhs = class_scale * mi + chunk_pairs;
            (lhs < rhs, regime)
        }
        LocalizedVariant::OnPredictedBestK => {
            if 2 * ki <= ni + mi {
                let lhs = class_scale * c + top_pairs;
                (lhs < class_scale * mi, LocalizedRegime::Lower)
            } else {
                let lhs = class_scale * (ni - ki) + top_pairs;
                (
                    lhs < class_scale * mi + chunk_pairs,
                    LocalizedRegime::Middle,
                )
            }
        }
    }
}

/// Multivariate localized breakdown point `min(1 + pk*, K)`; nonexistent for
/// `p >= K`.
pub fn localized_multivariate(
    n: usize,
    k: usize,
    p: usize,
    variant: LocalizedVariant,
) -> Result<BreakdownReport> {
    check_k(n, k)?;
    if p < 2 {
        return Err(Error::InvalidParameter(
            "multivariate formula needs p >= 2 (use localized_univariate)".into(),
        ));
    }
    if p >= k {
        return Ok(BreakdownReport::nonexistent(n, "p>=K", "axiswise"));
    }
    let mut chunks = 1;
    let regime = loop {
        let (holds, regime) = localized_multivariate_holds(n, k, p, chunks, variant);
        if holds || 1 + p * chunks >= k {
            break regime;
        }
        chunks += 1;
    };
    let m_star = (1 + p * chunks).min(k);
    let label = format!("k*={chunks}, {}", regime.label());
    let (lo, hi) = early_stop_interval(m_star, p, chunks);
    Ok(BreakdownReport::found(m_star, n, label, "axiswise").with_interval(lo, hi))
}

/// Weak ranking: exact for `p = 1`, coarse bound `K` for `1 < p < K`,
/// nonexistent for `p >= K`.
pub fn weak_bdp(n: usize, k: usize, p: usize) -> Result<BreakdownReport> {
    check_k(n, k)?;
    need_p(p)?;
    if p >= k {
        return Ok(BreakdownReport::nonexistent(n, "p>=K", "weak-flip"));
    }
    if p == 1 {
        let m = (k / 2 + 1).min(n);
        return Ok(BreakdownReport::found(m, n, "p=1", "weak-flip"));
    }
    Ok(BreakdownReport::found(k, n, "coarse bound", "axiswise"))
}

/// Formula for the class with `p` replaced by the support size `q`
/// (outliers only on the support axes).
pub fn sparse_effective_bdp(problem: &ProblemClass, q: usize) -> Result<BreakdownReport> {
    if q == 0 || q > problem.p {
        return Err(Error::InvalidParameter(format!(
            "support size must be in 1..={}, got {q}",
            problem.p
        )));
    }
    let mut reduced = *problem;
    reduced.p = q;
    bdp(&reduced)
}

/// Dispatch a problem class to its formula.
pub fn bdp(problem: &ProblemClass) -> Result<BreakdownReport> {
    need_p(problem.p)?;
    if problem.loss_regime == LossRegime::Unbounded {
        return unbounded_bdp(problem);
    }
    let (n, p) = (problem.n, problem.p);
    match problem.task {
        Task::HardContinuous if p == 1 => hard_univariate(n),
        Task::HardContinuous => hard_multivariate(n, p),
        Task::HardBinary | Task::HardDPartite => {
            if let (Task::HardDPartite, Some(d)) = (problem.task, problem.classes) {
                if d < 2 {
                    return Err(Error::InvalidParameter(format!(
                        "d-partite needs d >= 2, got {d}"
                    )));
                }
            }
            if p == 1 {
                binary_univariate(n)
            } else {
                binary_multivariate(n, p)
            }
        }
        Task::LocalizedOnTrueBestK | Task::LocalizedOnPredictedBestK => {
            let k = problem.require_k()?;
            let variant = problem.task.localized_variant().expect("localized task");
            if p == 1 {
                localized_univariate(n, k, variant)
            } else {
                localized_multivariate(n, k, p, variant)
            }
        }
        Task::Weak => weak_bdp(n, problem.require_k()?, p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use LocalizedVariant::{OnPredictedBestK, OnTrueBestK};

    fn m(r: Result<BreakdownReport>) -> usize {
        r.unwrap().m_min.unwrap()
    }

    #[test]
    fn hard_univariate_examples() {
        assert_eq!(m(hard_univariate(4)), 2);
        assert_eq!(m(hard_univariate(5)), 2);
        assert_eq!(m(hard_univariate(7)), 2);
        assert_eq!(m(hard_univariate(14)), 4);
        assert_eq!(hard_univariate(3).unwrap_err(), Error::SampleTooSmall(3));
    }

    #[test]
    fn hard_multivariate_examples() {
        let r = hard_multivariate(8, 2).unwrap();
        assert_eq!(r.m_min, Some(7));
        assert_eq!(r.interval, Some([6, 7]));
        assert_eq!(r.regime, "k*=3");
        assert_eq!(m(hard_multivariate(20, 2)), 15);
        let last = hard_multivariate(6, 5).unwrap();
        assert_eq!(last.m_min, Some(5));
        assert!(last.regime.contains("p outliers suffice"));
        assert!(!hard_multivariate(10, 12).unwrap().exists);
        assert!(!hard_multivariate(5, 5).unwrap().exists);
        let wide = hard_multivariate(400, 80).unwrap();
        assert_eq!(wide.m_min, Some(399));
    }

    #[test]
    fn binary_examples() {
        assert_eq!(m(binary_univariate(4)), 2);
        assert_eq!(m(binary_univariate(8)), 4);
        assert_eq!(m(binary_univariate(100)), 30);
        assert_eq!(m(binary_multivariate(20, 2)), 17);
        assert_eq!(m(binary_multivariate(12, 2)), 9);
        assert!(!binary_multivariate(3, 3).unwrap().exists);
    }

    #[test]
    fn unbounded_table() {
        let r = unbounded_bdp(&ProblemClass::hard(10, 3).unbounded()).unwrap();
        assert_eq!(r.m_min, Some(4));
        assert_eq!(r.bdp, Some(0.4));
        assert_eq!(m(unbounded_bdp(&ProblemClass::hard(10, 1).unbounded())), 1);
        assert_eq!(m(unbounded_bdp(&ProblemClass::hard(10, 9).unbounded())), 9);
        assert!(
            !unbounded_bdp(&ProblemClass::hard(10, 10).unbounded())
                .unwrap()
                .exists
        );
        assert!(
            !unbounded_bdp(&ProblemClass::weak(20, 5, 5).unbounded())
                .unwrap()
                .exists
        );
        assert_eq!(
            m(unbounded_bdp(&ProblemClass::weak(20, 5, 4).unbounded())),
            4
        );
        let loc = ProblemClass::localized(20, 6, 4, OnTrueBestK).unbounded();
        assert_eq!(m(unbounded_bdp(&loc)), 5);
        assert_eq!(m(unbounded_bdp(&loc.with_k(5))), 4);
        assert!(!unbounded_bdp(&loc.with_k(4)).unwrap().exists);
        let cls = loc.with_part(LocalizedPart::Classification);
        assert_eq!(m(unbounded_bdp(&cls.with_k(4))), 4);
        assert_eq!(m(unbounded_bdp(&cls.with_k(5))), 5);
        assert!(unbounded_bdp(&ProblemClass::hard(10, 3)).is_err());
    }

    #[test]
    fn localized_univariate_examples() {
        let r = localized_univariate(10, 4, OnTrueBestK).unwrap();
        assert_eq!(r.m_min, Some(2));
        assert_eq!(r.regime, "K<=(n+m)/2");
        assert_eq!(m(localized_univariate(6, 3, OnTrueBestK)), 2);
        assert_eq!(m(localized_univariate(8, 4, OnTrueBestK)), 2);
        assert_eq!(m(localized_univariate(14, 14, OnTrueBestK)), 4);
        assert!(localized_univariate(10, 11, OnTrueBestK).is_err());
        assert!(localized_univariate(10, 0, OnTrueBestK).is_err());
    }

    #[test]
    fn localized_terms_match_worked_example() {
        // m=1: 0.3933 vs 0.1533, m=2: 0.2511 vs 0.2956 (scaled by 2n^2(n-1))
        let scale = 2.0 * 100.0 * 9.0;
        let eval = |m: i128| {
            let (n, k) = (10i128, 4i128);
            let lhs = 4 * (n - k) * (k - m) * (n - 1) + (k - m) * (k - m - 1) * n;
            let rhs = 4 * (n - k) * m * (n - 1) + (m * (m - 1) + 2 * m * (k - m)) * n;
            (lhs as f64 / scale, rhs as f64 / scale)
        };
        let (l1, r1) = eval(1);
        let (l2, r2) = eval(2);
        assert!((l1 - 0.3933).abs() < 1e-4 && (r1 - 0.1533).abs() < 1e-4);
        assert!((l2 - 0.2511).abs() < 1e-4 && (r2 - 0.2956).abs() < 1e-4);
        assert!(!localized_univariate_holds(10, 4, 1, OnTrueBestK).0);
        assert!(localized_univariate_holds(10, 4, 2, OnTrueBestK).0);
    }

    #[test]
    fn localized_full_k_is_hard() {
        for n in 4..=100 {
            assert_eq!(
                localized_univariate(n, n, OnTrueBestK).unwrap().m_min,
                hard_univariate(n).unwrap().m_min,
                "n={n}"
            );
        }
    }

    #[test]
    fn localized_multivariate_examples() {
        assert!(
            !localized_multivariate(20, 3, 3, OnTrueBestK)
                .unwrap()
                .exists
        );
        assert_eq!(m(localized_multivariate(20, 10, 2, OnTrueBestK)), 7);
        assert_eq!(m(localized_multivariate(20, 10, 2, OnPredictedBestK)), 7);
        for n in 6..40 {
            for k in 3..=n {
                for p in 2..k {
                    for v in [OnTrueBestK, OnPredictedBestK] {
                        let r = localized_multivariate(n, k, p, v).unwrap();
                        assert!(r.m_min.unwrap() <= k);
                        assert!(r.is_consistent());
                    }
                }
            }
        }
    }

    #[test]
    fn weak_examples() {
        assert_eq!(m(weak_bdp(20, 5, 1)), 3);
        assert_eq!(m(weak_bdp(20, 4, 1)), 3);
        assert!(!weak_bdp(20, 3, 3).unwrap().exists);
        let coarse = weak_bdp(20, 6, 2).unwrap();
        assert_eq!(coarse.regime, "coarse bound");
        assert_eq!(coarse.m_min, Some(6));
    }

    #[test]
    fn sparse_examples() {
        let dense = ProblemClass::hard(10, 50);
        let r = sparse_effective_bdp(&dense, 2).unwrap();
        assert_eq!(r, hard_multivariate(10, 2).unwrap());
        assert!(r.exists);
        let same = ProblemClass::hard(20, 3);
        assert_eq!(sparse_effective_bdp(&same, 3).unwrap(), bdp(&same).unwrap());
        let loc = ProblemClass::localized(20, 5, 8, OnTrueBestK);
        assert!(!sparse_effective_bdp(&loc, 5).unwrap().exists);
        assert!(sparse_effective_bdp(&same, 4).is_err());
    }

    #[test]
    fn thresholds_are_monotone() {
        for n in 4..=120 {
            let first = (1..=n).position(|m| hard_univariate_holds(n, m)).unwrap() + 1;
            assert!((first..=n).all(|m| hard_univariate_holds(n, m)), "n={n}");
            let kb = (1..=n).find(|&k| binary_univariate_holds(n, k)).unwrap();
            assert!((kb..=n.div_ceil(2)).all(|k| binary_univariate_holds(n, k)));
            for p in 2..6.min(n) {
                let k = (1..=n).find(|&k| hard_multivariate_holds(n, p, k)).unwrap();
                assert!((k..=n).all(|k| hard_multivariate_holds(n, p, k)));
            }
        }
    }

    #[test]
    fn dispatch() {
        assert_eq!(bdp(&ProblemClass::hard(7, 1)).unwrap().m_min, Some(2));
        let bin = ProblemClass::new(Task::HardBinary, 8, 1);
        assert_eq!(bdp(&bin).unwrap().m_min, Some(4));
        let dp = ProblemClass::new(Task::HardDPartite, 8, 1).with_classes(3);
        assert_eq!(bdp(&dp).unwrap().m_min, Some(4));
        assert!(bdp(&ProblemClass::new(Task::Weak, 8, 1)).is_err());
        assert!(bdp(&ProblemClass::hard(7, 0)).is_err());
    }
}
