//! Limits of `m*/n` as `n` grows, localized curves in `d = lim K/n`, and
//! their break-even points.
//!
//! A localized curve is evaluated as the smallest outlier fraction `c` that
//! satisfies the breakdown condition of whichever regime `c` falls in:
//!
//! | `c` range            | regime                                |
//! |----------------------|---------------------------------------|
//! | `c < 2d - 1`         | middle: `K > (n+m)/2`                 |
//! | `2d - 1 <= c < 1-d`  | lower: `K <= (n+m)/2`                 |
//! | `c >= 1 - d`         | upper: only the top K is ranked       |
//!
//! This is the limit of the finite-sample scan and, for `p = 1`, coincides
//! with the three-piece curve with break-evens `d0` and `d1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formulas::{LossRegime, Task};
use crate::losses::LocalizedVariant;

/// `1 - sqrt(1/2)`, the univariate hard-ranking limit.
pub fn univariate_limit() -> f64 {
    1.0 - 0.5f64.sqrt()
}

/// How the dimension behaves as `n` grows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DimensionMode {
    Fixed(usize),
    /// `p(n)/n -> b`.
    Proportional(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticQuery {
    pub task: Task,
    pub loss_regime: LossRegime,
    pub dimension: DimensionMode,
    /// `lim K/n` for localized tasks; `None` means K stays fixed.
    pub d: Option<f64>,
}

impl AsymptoticQuery {
    pub fn new(task: Task, dimension: DimensionMode) -> Self {
        AsymptoticQuery {
            task,
            loss_regime: LossRegime::IndicatorBounded,
            dimension,
            d: None,
        }
    }

    pub fn with_d(mut self, d: f64) -> Self {
        self.d = Some(d);
        self
    }

    pub fn unbounded(mut self) -> Self {
        self.loss_regime = LossRegime::Unbounded;
        self
    }
}

/// Asymptotic breakdown point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum AsymptoticValue {
    Value(f64),
    One,
    Nonexistent,
    Zero,
}

impl AsymptoticValue {
    pub fn as_f64(self) -> Option<f64> {
        match self {
            AsymptoticValue::Value(v) => Some(v),
            AsymptoticValue::One => Some(1.0),
            AsymptoticValue::Zero => Some(0.0),
            AsymptoticValue::Nonexistent => None,
        }
    }
}

fn outside(msg: impl Into<String>) -> Error {
    Error::OutsideRegime(msg.into())
}

/// Limit for the query's problem class.
pub fn asymptotic_bdp(q: &AsymptoticQuery) -> Result<AsymptoticValue> {
    if let Some(d) = q.d {
        if !(d > 0.0 && d <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "d must be in (0, 1], got {d}"
            )));
        }
    }
    if let DimensionMode::Proportional(b) = q.dimension {
        if !(b >= 0.0 && b.is_finite()) {
            return Err(Error::InvalidParameter(format!("b must be >= 0, got {b}")));
        }
    }
    if let DimensionMode::Fixed(0) = q.dimension {
        return Err(Error::InvalidParameter("p must be >= 1".into()));
    }
    if q.task == Task::Weak {
        return Err(outside("no limit is available for weak ranking"));
    }
    let localized = q.task.localized_variant();
    if localized.is_some() && q.d.is_none() {
        return Ok(AsymptoticValue::Zero);
    }
    let ceiling = localized.map(|_| q.d.unwrap_or(1.0)).unwrap_or(1.0);
    match (q.loss_regime, q.dimension) {
        (LossRegime::Unbounded, DimensionMode::Fixed(_)) => Ok(AsymptoticValue::Zero),
        (LossRegime::Unbounded, DimensionMode::Proportional(b)) => Ok(if b >= ceiling {
            AsymptoticValue::Nonexistent
        } else {
            AsymptoticValue::Value(b)
        }),
        (LossRegime::IndicatorBounded, DimensionMode::Proportional(b)) => {
            if b >= ceiling {
                Ok(AsymptoticValue::Nonexistent)
            } else if b > 0.0 && localized.is_none() {
                Ok(AsymptoticValue::One)
            } else {
                Err(outside(format!("proportional dimension b = {b}")))
            }
        }
        (LossRegime::IndicatorBounded, DimensionMode::Fixed(p)) => {
            if let Some(variant) = localized {
                return localized_asymptote(variant, p, q.d.expect("checked above"))
                    .map(AsymptoticValue::Value);
            }
            Ok(AsymptoticValue::Value(match (q.task, p) {
                (_, 1) => univariate_limit(),
                (Task::HardContinuous, p) => p as f64 / (p as f64 + 1.0),
                (_, p) => binary_fixed_limit(p),
            }))
        }
    }
}

/// Fixed-`p` bipartite limit `2p / (2p + sqrt 2)`.
pub fn binary_fixed_limit(p: usize) -> f64 {
    let p = p as f64;
    2.0 * p / (2.0 * p + 2f64.sqrt())
}

/// Limit of the hard-ranking breakdown fraction restricted to the top K.
fn top_k_hard_limit(p: usize) -> f64 {
    if p == 1 {
        univariate_limit()
    } else {
        p as f64 / (p as f64 + 1.0)
    }
}

fn sqrt_or_nan(v: f64) -> f64 {
    if v >= 0.0 {
        v.sqrt()
    } else {
        f64::NAN
    }
}

/// Lower-regime curve (`K <= (n+m)/2`) of the localized problem.
pub fn lower_curve(variant: LocalizedVariant, p: usize, d: f64) -> f64 {
    match (variant, p) {
        (LocalizedVariant::OnTrueBestK, 1) => 2.0 - d - sqrt_or_nan(4.0 - 6.0 * d + 2.5 * d * d),
        (LocalizedVariant::OnTrueBestK, p) => {
            let p = p as f64;
            let p2 = p * p;
            let disc = 16.0 * p2 - 28.0 * p2 * d + 12.0 * p2 * d * d + 4.0 * d - 3.0 * d * d;
            p * ((4.0 * p - 3.0 * p * d) - sqrt_or_nan(disc)) / (p2 - 1.0)
        }
        (LocalizedVariant::OnPredictedBestK, _) => {
            4.0 - 3.0 * d - sqrt_or_nan(16.0 - 28.0 * d + 12.0 * d * d)
        }
    }
}

/// Middle-regime curve (`K > (n+m)/2`), shared by both variants.
pub fn middle_curve(p: usize, d: f64) -> f64 {
    if p == 1 {
        return 1.0 - sqrt_or_nan(-1.0 + 4.0 * d - 2.5 * d * d);
    }
    let p = p as f64;
    let p2 = p * p;
    let disc = 4.0 * p2 * d - 4.0 * p2 * d * d - 8.0 * d + 5.0 * d * d + 4.0;
    p * ((2.0 * p - p * d) - sqrt_or_nan(disc)) / (p2 - 1.0)
}

/// Curve value before the hand-over to the top-K regime.
fn pre_switch_value(variant: LocalizedVariant, p: usize, d: f64) -> f64 {
    let split = 2.0 * d - 1.0;
    let mid = middle_curve(p, d);
    if mid.is_finite() && mid >= 0.0 && mid < split {
        return mid;
    }
    let low = lower_curve(variant, p, d);
    if low.is_finite() {
        low.max(split)
    } else {
        f64::INFINITY
    }
}

/// Localized limit at `d = lim K/n` for fixed `p`.
pub fn localized_asymptote(variant: LocalizedVariant, p: usize, d: f64) -> Result<f64> {
    if p == 0 {
        return Err(Error::InvalidParameter("p must be >= 1".into()));
    }
    if !(d > 0.0 && d <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "d must be in (0, 1], got {d}"
        )));
    }
    let c = pre_switch_value(variant, p, d);
    if c < 1.0 - d {
        Ok(c)
    } else {
        Ok((1.0 - d).max(d * top_k_hard_limit(p)))
    }
}

/// Which localized curve family to locate break-even points for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BreakevenFamily {
    TrueBestKUnivariate,
    PredictedBestKUnivariate,
    TrueBestKFixed(usize),
    PredictedBestKFixed(usize),
}

impl BreakevenFamily {
    fn parts(self) -> (LocalizedVariant, usize) {
        match self {
            BreakevenFamily::TrueBestKUnivariate => (LocalizedVariant::OnTrueBestK, 1),
            BreakevenFamily::PredictedBestKUnivariate => (LocalizedVariant::OnPredictedBestK, 1),
            BreakevenFamily::TrueBestKFixed(p) => (LocalizedVariant::OnTrueBestK, p),
            BreakevenFamily::PredictedBestKFixed(p) => (LocalizedVariant::OnPredictedBestK, p),
        }
    }
}

/// Break-even points of a localized curve family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Breakevens {
    /// Where the lower and middle curves cross.
    pub d0: f64,
    /// Where the curve hands over to the top-K regime, if that happens
    /// inside `(0, 1)`.
    pub d1: Option<f64>,
}

/// Bisection tolerance on `d`.
pub const BISECTION_TOL: f64 = 1e-10;

/// Root of `f` on `[lo, hi]` given a sign change.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let (a, b) = (lo, hi);
    let mut flo = f(lo);
    let fhi = f(hi);
    if !(flo.is_finite() && fhi.is_finite()) || flo.signum() == fhi.signum() {
        return Err(Error::NoSignChange { lo: a, hi: b });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// First sign change of `f` on a uniform scan of `(lo, hi)`, refined by
/// bisection. Points where `f` is undefined are skipped.
fn first_root(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Result<f64> {
    const STEPS: usize = 4000;
    let mut prev: Option<(f64, f64)> = None;
    for i in 1..STEPS {
        let d = lo + (hi - lo) * i as f64 / STEPS as f64;
        let v = f(d);
        if !v.is_finite() {
            prev = None;
            continue;
        }
        if let Some((pd, pv)) = prev {
            if pv.signum() != v.signum() || v == 0.0 {
                return bisect(&f, pd, d, BISECTION_TOL);
            }
        }
        prev = Some((d, v));
    }
    Err(Error::NoSignChange { lo, hi })
}

/// Recompute the break-even points numerically.
pub fn breakeven_points(family: BreakevenFamily) -> Result<Breakevens> {
    let (variant, p) = family.parts();
    if p == 0 {
        return Err(Error::InvalidParameter("p must be >= 1".into()));
    }
    let d0 = first_root(
        |d| lower_curve(variant, p, d) - middle_curve(p, d),
        0.0,
        1.0,
    )?;
    let d1 = first_root(
        |d| {
            let c = pre_switch_value(variant, p, d);
            if c.is_finite() {
                c - (1.0 - d)
            } else {
                f64::NAN
            }
        },
        0.0,
        1.0,
    )
    .ok();
    if p == 1 && d1.is_none() {
        return Err(Error::NoSignChange { lo: 0.0, hi: 1.0 });
    }
    Ok(Breakevens { d0, d1 })
}

/// Limit for the compact-space scheme, `p^2 / (p^2 + 1/2)`.
pub fn compact_space_asymptote(p: usize) -> f64 {
    let p2 = (p * p) as f64;
    p2 / (p2 + 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use LocalizedVariant::{OnPredictedBestK, OnTrueBestK};

    fn value(q: AsymptoticQuery) -> f64 {
        asymptotic_bdp(&q).unwrap().as_f64().unwrap()
    }

    #[test]
    fn hard_and_binary_limits() {
        let q = AsymptoticQuery::new(Task::HardContinuous, DimensionMode::Fixed(1));
        assert!((value(q) - 0.292_893_218_8).abs() < 1e-9);
        let q = AsymptoticQuery::new(Task::HardContinuous, DimensionMode::Fixed(3));
        assert_eq!(value(q), 0.75);
        let q = AsymptoticQuery::new(Task::HardBinary, DimensionMode::Fixed(2));
        assert!((value(q) - 4.0 / (4.0 + 2f64.sqrt())).abs() < 1e-15);
        let prop = AsymptoticQuery::new(Task::HardContinuous, DimensionMode::Proportional(0.2));
        assert_eq!(asymptotic_bdp(&prop).unwrap(), AsymptoticValue::One);
        assert_eq!(
            asymptotic_bdp(&prop.unbounded()).unwrap(),
            AsymptoticValue::Value(0.2)
        );
        let wide = AsymptoticQuery::new(Task::HardContinuous, DimensionMode::Proportional(1.5));
        assert_eq!(asymptotic_bdp(&wide).unwrap(), AsymptoticValue::Nonexistent);
        let fixed = AsymptoticQuery::new(Task::HardContinuous, DimensionMode::Fixed(4));
        assert_eq!(
            asymptotic_bdp(&fixed.unbounded()).unwrap(),
            AsymptoticValue::Zero
        );
        let weak = AsymptoticQuery::new(Task::Weak, DimensionMode::Fixed(1));
        assert!(asymptotic_bdp(&weak).is_err());
    }

    #[test]
    fn localized_edges() {
        let base = AsymptoticQuery::new(Task::LocalizedOnTrueBestK, DimensionMode::Fixed(1));
        assert!((value(base.with_d(1.0)) - univariate_limit()).abs() < 1e-12);
        assert!(value(base.with_d(1e-9)) < 1e-8);
        assert_eq!(asymptotic_bdp(&base).unwrap(), AsymptoticValue::Zero);
        assert!(asymptotic_bdp(&base.with_d(0.0)).is_err());
        assert!(asymptotic_bdp(&base.with_d(1.2)).is_err());
    }

    #[test]
    fn univariate_curve_is_the_three_pieces() {
        let be = breakeven_points(BreakevenFamily::TrueBestKUnivariate).unwrap();
        let d1 = be.d1.unwrap();
        for i in 1..=200 {
            let d = i as f64 / 200.0;
            let piece = if d <= be.d0 {
                2.0 - d - (4.0 - 6.0 * d + 2.5 * d * d).sqrt()
            } else if d <= d1 {
                1.0 - (-1.0 + 4.0 * d - 2.5 * d * d).sqrt()
            } else {
                d * univariate_limit()
            };
            let v = localized_asymptote(OnTrueBestK, 1, d).unwrap();
            assert!((v - piece).abs() < 1e-6, "d={d}: {v} vs {piece}");
        }
    }

    #[test]
    fn breakevens_match_constants() {
        let t = breakeven_points(BreakevenFamily::TrueBestKUnivariate).unwrap();
        assert!((t.d0 - 0.635_257_8).abs() < 1e-4);
        assert!((t.d1.unwrap() - 0.773_455).abs() < 1e-4);
        let p = breakeven_points(BreakevenFamily::PredictedBestKUnivariate).unwrap();
        assert!((p.d0 - 0.577_465_9).abs() < 1e-4);
        let big = breakeven_points(BreakevenFamily::TrueBestKFixed(10_000)).unwrap();
        assert!((big.d0 - 18.0 / 26.0).abs() < 1e-4);
    }

    #[test]
    fn curve_endpoints_and_monotonicity() {
        let t = breakeven_points(BreakevenFamily::TrueBestKUnivariate).unwrap();
        assert!((lower_curve(OnTrueBestK, 1, t.d0) - 0.270_514).abs() < 1e-4);
        assert!((middle_curve(1, t.d1.unwrap()) - 0.226_541_3).abs() < 1e-4);
        let p = breakeven_points(BreakevenFamily::PredictedBestKUnivariate).unwrap();
        assert!((lower_curve(OnPredictedBestK, 1, p.d0) - 0.309_93).abs() < 1e-4);
        let mut prev = 0.0;
        for i in 1..=600 {
            let d = t.d0 * i as f64 / 600.0;
            let v = lower_curve(OnTrueBestK, 1, d);
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn compact_limit() {
        assert!((compact_space_asymptote(1) - 2.0 / 3.0).abs() < 1e-15);
        assert!((compact_space_asymptote(2) - 8.0 / 9.0).abs() < 1e-15);
        assert!(compact_space_asymptote(100) > 0.999);
    }

    #[test]
    fn bisect_requires_sign_change() {
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-9).is_err());
        let r = bisect(|x| x - 0.3, 0.0, 1.0, 1e-12).unwrap();
        assert!((r - 0.3).abs() < 1e-11);
    }
}
