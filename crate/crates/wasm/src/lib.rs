//! Browser bindings for three interactive views: a breakdown-point sweep
//! over sample sizes, the localized limit curve with its break-even points,
//! and a univariate attack with the fitted slope before and after.
//!
//! The plain functions return serializable values and are tested natively;
//! the exported wrappers hand JSON strings to JavaScript.

use oibdp::asymptotics::{breakeven_points, localized_asymptote, BreakevenFamily};
use oibdp::estimators::{erm_fit, FitConfig, RankingTask};
use oibdp::formulas::{bdp, ProblemClass, Task};
use oibdp::losses::{LocalizedVariant, LossSpec};
use oibdp::schemes::{univariate_hard_attack, AttackConfig};
use oibdp::{Dataset, ResponseKind};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest sample size accepted by the sweep view.
pub const MAX_SWEEP_N: usize = 5000;
/// Largest sample size accepted by the attack view.
pub const MAX_ATTACK_N: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub n: usize,
    pub m_min: Option<usize>,
    pub bdp: Option<f64>,
}

fn task_named(name: &str) -> Result<Task, String> {
    Ok(match name {
        "hard" => Task::HardContinuous,
        "binary" => Task::HardBinary,
        "localized" => Task::LocalizedOnTrueBestK,
        "localized-predicted" => Task::LocalizedOnPredictedBestK,
        "weak" => Task::Weak,
        other => return Err(format!("unknown task '{other}'")),
    })
}

fn variant_named(name: &str) -> Result<LocalizedVariant, String> {
    match name {
        "true-bestk" => Ok(LocalizedVariant::OnTrueBestK),
        "predicted-bestk" => Ok(LocalizedVariant::OnPredictedBestK),
        other => Err(format!("unknown variant '{other}'")),
    }
}

/// Finite-sample breakdown points for `n = lo..=hi`. Top-K tasks use
/// `K = ceil(k_fraction n)`.
pub fn sweep(
    task: &str,
    lo: usize,
    hi: usize,
    p: usize,
    k_fraction: f64,
) -> Result<Vec<SweepPoint>, String> {
    let task = task_named(task)?;
    if lo < 4 || lo > hi || hi > MAX_SWEEP_N {
        return Err(format!("need 4 <= lo <= hi <= {MAX_SWEEP_N}"));
    }
    if !(k_fraction > 0.0 && k_fraction <= 1.0) {
        return Err("K fraction must be in (0, 1]".into());
    }
    (lo..=hi)
        .map(|n| {
            let mut class = ProblemClass::new(task, n, p);
            if task.is_localized() || task == Task::Weak {
                class = class.with_k(((k_fraction * n as f64).ceil() as usize).clamp(1, n));
            }
            let r = bdp(&class).map_err(|e| e.to_string())?;
            Ok(SweepPoint {
                n,
                m_min: r.m_min,
                bdp: r.bdp,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Curve {
    /// `(d, limit)` pairs; the limit is absent where it does not exist.
    pub points: Vec<(f64, Option<f64>)>,
    pub d0: f64,
    pub d1: Option<f64>,
}

/// Localized limit over `d = i / steps` with its break-even points.
pub fn localized_curve(variant: &str, p: usize, steps: usize) -> Result<Curve, String> {
    let variant = variant_named(variant)?;
    if p == 0 || !(1..=2000).contains(&steps) {
        return Err("need p >= 1 and 1 <= steps <= 2000".into());
    }
    let family = match (variant, p) {
        (LocalizedVariant::OnTrueBestK, 1) => BreakevenFamily::TrueBestKUnivariate,
        (LocalizedVariant::OnPredictedBestK, 1) => BreakevenFamily::PredictedBestKUnivariate,
        (LocalizedVariant::OnTrueBestK, p) => BreakevenFamily::TrueBestKFixed(p),
        (LocalizedVariant::OnPredictedBestK, p) => BreakevenFamily::PredictedBestKFixed(p),
    };
    let b = breakeven_points(family).map_err(|e| e.to_string())?;
    let points = (1..=steps)
        .map(|i| {
            let d = i as f64 / steps as f64;
            (
                d,
                localized_asymptote(variant, p, d)
                    .ok()
                    .filter(|v| v.is_finite()),
            )
        })
        .collect();
    Ok(Curve {
        points,
        d0: b.d0,
        d1: b.d1,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttackView {
    pub clean: Vec<(f64, f64)>,
    pub outliers: Vec<(f64, f64)>,
    /// Sign of the fitted slope on the clean sample.
    pub clean_slope: f64,
    /// Sign of the fitted slope after contamination.
    pub attacked_slope: f64,
    pub broken: bool,
    /// Smallest number of outliers that breaks the fit.
    pub m_min: Option<usize>,
}

fn slope_sign(data: &Dataset) -> Result<f64, String> {
    let fit = erm_fit(
        data,
        &RankingTask::Hard(LossSpec::Indicator),
        &FitConfig::default(),
        Some(&[1.0]),
    )
    .map_err(|e| e.to_string())?;
    Ok(fit.scorer.beta[0].signum())
}

/// Replace the `m` largest of `x_i = y_i = i` by outliers spaced `gap`
/// apart and refit the hard-ranking scorer.
pub fn univariate_attack(n: usize, m: usize, gap: f64) -> Result<AttackView, String> {
    if !(4..=MAX_ATTACK_N).contains(&n) || m == 0 || m >= n {
        return Err(format!("need 4 <= n <= {MAX_ATTACK_N} and 1 <= m < n"));
    }
    let v: Vec<f64> = (1..=n).map(|i| i as f64).collect();
    let data = Dataset::univariate(&v, &v, ResponseKind::Continuous).map_err(|e| e.to_string())?;
    let cfg = AttackConfig {
        gap,
        ..AttackConfig::default()
    };
    let cs = univariate_hard_attack(&data, m, &cfg, 1.0).map_err(|e| e.to_string())?;
    let clean = cs.clean();
    let attacked_slope = slope_sign(&cs.merged())?;
    Ok(AttackView {
        clean: clean
            .rows()
            .map(|r| r[0])
            .zip(clean.y().iter().copied())
            .collect(),
        outliers: cs.outliers().iter().map(|o| (o.x[0], o.y)).collect(),
        clean_slope: slope_sign(&data)?,
        attacked_slope,
        broken: attacked_slope < 0.0,
        m_min: bdp(&ProblemClass::hard(n, 1))
            .map_err(|e| e.to_string())?
            .m_min,
    })
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsValue> {
    r.and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string()))
        .map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = sweep)]
pub fn sweep_js(
    task: &str,
    lo: usize,
    hi: usize,
    p: usize,
    k_fraction: f64,
) -> Result<String, JsValue> {
    to_js(sweep(task, lo, hi, p, k_fraction))
}

#[wasm_bindgen(js_name = localizedCurve)]
pub fn localized_curve_js(variant: &str, p: usize, steps: usize) -> Result<String, JsValue> {
    to_js(localized_curve(variant, p, steps))
}

#[wasm_bindgen(js_name = univariateAttack)]
pub fn univariate_attack_js(n: usize, m: usize, gap: f64) -> Result<String, JsValue> {
    to_js(univariate_attack(n, m, gap))
}
