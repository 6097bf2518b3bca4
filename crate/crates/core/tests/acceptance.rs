//! Acceptance suite: one PASS/FAIL line per criterion plus the trend check.
//!
//! Criteria listed in `KNOWN_FAILURES` are expected to fail; the binary exits
//! non-zero only when an unlisted criterion fails or a listed one passes.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use oibdp::asymptotics::{breakeven_points, lower_curve, middle_curve, BreakevenFamily};
use oibdp::estimators::{
    erm_fit, gram_matrix, regularized_norm_bound, svr_swap_check, FitConfig, Kernel, NormBound,
    RankingTask, SvrConfig,
};
use oibdp::formulas::{bdp, binary_univariate, hard_multivariate, hard_univariate, ProblemClass};
use oibdp::losses::{hard_loss, LocalizedVariant, LossSpec, Penalty, PenaltyFamily, RankingWeight};
use oibdp::schemes::{axiswise_partial_attack, univariate_hard_attack, AttackConfig, Scheme};
use oibdp::verify::{
    brute_force_oibdp, characterization_check, empirical_oibdp, expected_oibdp, AdversaryGrid,
    MonteCarlo, Noise,
};
use oibdp::{BreakdownSet, Dataset, LinearScorer, ReferenceVariant, ResponseKind, BIG};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria whose failure is analysed and expected.
const KNOWN_FAILURES: &[&str] = &["5", "6"];

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

type Check = fn() -> Result<Outcome, String>;

fn within(actual: f64, expected: f64, tol: f64) -> bool {
    (actual - expected).abs() <= tol
}

fn increasing(n: usize) -> Dataset {
    let v: Vec<f64> = (1..=n).map(|i| i as f64).collect();
    Dataset::univariate(&v, &v, ResponseKind::Continuous).expect("distinct responses")
}

fn positive() -> BreakdownSet {
    BreakdownSet::new(vec![1.0], ReferenceVariant::Population).expect("valid reference")
}

fn m_of(r: &oibdp::BreakdownReport) -> Result<usize, String> {
    r.m_min
        .ok_or_else(|| format!("no breakdown reported ({})", r.regime))
}

fn golden_values() -> Result<Outcome, String> {
    let m = |n| {
        hard_univariate(n)
            .map_err(|e| e.to_string())
            .and_then(|r| m_of(&r))
    };
    let golden = [(4, m(4)?), (7, m(7)?), (14, m(14)?)];
    let mut ok = golden == [(4, 2), (7, 2), (14, 4)];
    let mut ratios = Vec::new();
    for n in 4..=500 {
        ratios.push((n, m(n)?));
    }
    // Compare m/n as rationals.
    let max = ratios
        .iter()
        .max_by(|a, b| (a.1 * b.0).cmp(&(b.1 * a.0)))
        .copied()
        .unwrap();
    let min = ratios
        .iter()
        .min_by(|a, b| (a.1 * b.0).cmp(&(b.1 * a.0)))
        .copied()
        .unwrap();
    let max_at: Vec<usize> = ratios
        .iter()
        .filter(|r| r.1 * max.0 == max.1 * r.0)
        .map(|r| r.0)
        .collect();
    let min_at: Vec<usize> = ratios
        .iter()
        .filter(|r| r.1 * min.0 == min.1 * r.0)
        .map(|r| r.0)
        .collect();
    ok &= 2 * max.1 == max.0 && max_at == [4];
    ok &= 7 * min.1 == 2 * min.0 && min_at.contains(&7) && min_at.contains(&14);
    Ok(Outcome::new(
        ok,
        format!(
            "m(4,7,14)=({},{},{}); max {}/{} at n={max_at:?}; min {}/{} at n={min_at:?}",
            golden[0].1, golden[1].1, golden[2].1, max.1, max.0, min.1, min.0
        ),
    ))
}

fn asymptotic_convergence() -> Result<Outcome, String> {
    let limit = 1.0 - 0.5f64.sqrt();
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, f) in [
        (
            "hard",
            hard_univariate as fn(usize) -> oibdp::Result<oibdp::BreakdownReport>,
        ),
        ("binary", binary_univariate),
    ] {
        for (n, tol) in [(500, 0.01), (5000, 0.002)] {
            let r = f(n).map_err(|e| e.to_string())?;
            let gap = (m_of(&r)? as f64 / n as f64 - limit).abs();
            ok &= gap <= tol;
            parts.push(format!("{name} n={n} gap={gap:.5}"));
        }
    }
    Ok(Outcome::new(ok, parts.join("; ")))
}

fn breakeven_roots() -> Result<Outcome, String> {
    let e = |x: oibdp::Error| x.to_string();
    let uni = breakeven_points(BreakevenFamily::TrueBestKUnivariate).map_err(e)?;
    let pred = breakeven_points(BreakevenFamily::PredictedBestKUnivariate).map_err(e)?;
    let wide = breakeven_points(BreakevenFamily::TrueBestKFixed(10_000)).map_err(e)?;
    let d1 = uni
        .d1
        .ok_or("no second break-even in the univariate family")?;
    let at_d0 = lower_curve(LocalizedVariant::OnTrueBestK, 1, uni.d0);
    let at_d1 = middle_curve(1, d1);
    let at_pred = lower_curve(LocalizedVariant::OnPredictedBestK, 1, pred.d0);
    let ok = within(uni.d0, 0.6352578, 1e-4)
        && within(d1, 0.773455, 1e-4)
        && within(pred.d0, 0.5774659, 1e-4)
        && within(wide.d0, 0.6923, 1e-3)
        && within(at_d0, 0.270514, 1e-4)
        && within(at_d1, 0.2265413, 1e-4)
        && within(at_pred, 0.30993, 1e-4);
    Ok(Outcome::new(
        ok,
        format!(
            "d0={:.7} d1={d1:.7} predicted d0={:.7} p=1e4 d0={:.5}; endpoints {at_d0:.7}, {at_d1:.7}, {at_pred:.6}",
            uni.d0, pred.d0, wide.d0
        ),
    ))
}

fn worked_example() -> Result<Outcome, String> {
    let e = |x: oibdp::Error| x.to_string();
    let r = hard_multivariate(8, 2).map_err(e)?;
    let formula_ok = r.m_min == Some(7) && r.interval == Some([6, 7]);
    let rows: Vec<Vec<f64>> = (0..8)
        .map(|i| vec![i as f64, 0.5 * i as f64 + ((i * 5) % 3) as f64])
        .collect();
    let y: Vec<f64> = rows.iter().map(|r| r[0] + r[1]).collect();
    let data = Dataset::new(rows, y, ResponseKind::Continuous).map_err(e)?;
    let set = BreakdownSet::new(vec![1.0, 1.0], ReferenceVariant::Population).map_err(e)?;
    let task = RankingTask::Hard(LossSpec::Indicator);
    let fit = FitConfig::default();
    // Starting point plus three outliers on one axis and two on the other.
    let cs = axiswise_partial_attack(&data, 6, &AttackConfig::default(), &[1.0, 1.0]).map_err(e)?;
    let clean_fit = erm_fit(&data, &task, &fit, Some(set.reference())).map_err(e)?;
    let attacked = erm_fit(&cs.merged(), &task, &fit, Some(set.reference())).map_err(e)?;
    let ok = formula_ok
        && !set.contains(&clean_fit.scorer.beta)
        && set.contains(&attacked.scorer.beta)
        && cs.clean().n() == 2;
    Ok(Outcome::new(
        ok,
        format!(
            "formula m*={:?} interval={:?}; fit at m=6 beta=[{:.3}, {:.3}] broken={}",
            r.m_min,
            r.interval,
            attacked.scorer.beta[0],
            attacked.scorer.beta[1],
            set.contains(&attacked.scorer.beta)
        ),
    ))
}

fn oracle_equivalence() -> Result<Outcome, String> {
    let e = |x: oibdp::Error| x.to_string();
    let hard = RankingTask::Hard(LossSpec::Indicator);
    let fit = FitConfig::default();
    let grid = AdversaryGrid::default();
    let mut mismatches = Vec::new();
    let mut cases = 0;
    let mut compare = |label: String,
                       data: &Dataset,
                       task: &RankingTask,
                       expected: &oibdp::BreakdownReport|
     -> Result<(), String> {
        let b = brute_force_oibdp(data, task, &fit, &grid, &positive()).map_err(e)?;
        cases += 1;
        if !b.exhaustive || b.report.m_min != expected.m_min {
            mismatches.push(format!(
                "{label}: brute {:?} vs formula {:?}",
                b.report.m_min, expected.m_min
            ));
        }
        Ok(())
    };
    for n in 4..=8 {
        compare(
            format!("hard n={n}"),
            &increasing(n),
            &hard,
            &hard_univariate(n).map_err(e)?,
        )?;
        let x: Vec<f64> = (1..=n).map(|i| i as f64).collect();
        let y: Vec<f64> = (0..n).map(|i| if i < n / 2 { -1.0 } else { 1.0 }).collect();
        let data = Dataset::univariate(&x, &y, ResponseKind::Binary).map_err(e)?;
        compare(
            format!("binary n={n}"),
            &data,
            &hard,
            &binary_univariate(n).map_err(e)?,
        )?;
    }
    for (n, k) in [(6, 3), (8, 4), (10, 4)] {
        let task = RankingTask::Localized {
            k,
            variant: LocalizedVariant::OnTrueBestK,
            weight: RankingWeight::Half,
        };
        let expected = bdp(&ProblemClass::localized(
            n,
            k,
            1,
            LocalizedVariant::OnTrueBestK,
        ))
        .map_err(e)?;
        compare(
            format!("localized n={n} K={k}"),
            &increasing(n),
            &task,
            &expected,
        )?;
    }
    let detail = if mismatches.is_empty() {
        format!("{cases} cases agree")
    } else {
        format!(
            "{} of {cases} cases disagree: {}",
            mismatches.len(),
            mismatches.join("; ")
        )
    };
    Ok(Outcome::new(mismatches.is_empty(), detail))
}

#[derive(Debug, Clone)]
struct Instance {
    rows: Vec<Vec<f64>>,
    beta: Vec<f64>,
    k: usize,
}

fn instance() -> impl Strategy<Value = Instance> {
    (2usize..=6, 2usize..=4)
        .prop_flat_map(|(n, p)| {
            (
                prop::collection::vec(prop::collection::vec(-3.0f64..3.0, p), n),
                prop::collection::vec((0.5f64..2.0, any::<bool>()), p),
                1..=p,
            )
        })
        .prop_map(|(rows, coef, k)| Instance {
            rows,
            beta: coef
                .into_iter()
                .map(|(v, s)| if s { v } else { -v })
                .collect(),
            k,
        })
}

fn scan_nonexistent(inst: &Instance, task: &RankingTask) -> Result<Option<usize>, TestCaseError> {
    let y: Vec<f64> = inst
        .rows
        .iter()
        .map(|r| r.iter().zip(&inst.beta).map(|(a, b)| a * b).sum())
        .collect();
    let data = Dataset::new(inst.rows.clone(), y, ResponseKind::Continuous)
        .map_err(|e| TestCaseError::reject(e.to_string()))?;
    let set = BreakdownSet::new(inst.beta.clone(), ReferenceVariant::Population)
        .map_err(|e| TestCaseError::fail(e.to_string()))?;
    let r = empirical_oibdp(
        &data,
        Scheme::Axiswise,
        task,
        &FitConfig::default(),
        &AttackConfig::default(),
        &set,
    )
    .map_err(|e| TestCaseError::fail(e.to_string()))?;
    Ok(r.report.m_min)
}

fn nonexistence() -> Result<Outcome, String> {
    let config = Config {
        cases: 48,
        failure_persistence: None,
        max_shrink_iters: 256,
        rng_algorithm: proptest::test_runner::RngAlgorithm::ChaCha,
        ..Config::default()
    };
    let mut runner = TestRunner::new_with_rng(
        config.clone(),
        proptest::test_runner::TestRng::deterministic_rng(config.rng_algorithm),
    );
    let hard = runner.run(
        &instance().prop_filter("p >= n", |i| i.beta.len() >= i.rows.len()),
        |inst| {
            let (n, p) = (inst.rows.len(), inst.beta.len());
            let formula =
                bdp(&ProblemClass::hard(n, p)).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert!(!formula.exists);
            let m = scan_nonexistent(&inst, &RankingTask::Hard(LossSpec::Indicator))?;
            prop_assert_eq!(m, None, "hard n={} p={} broke", n, p);
            Ok(())
        },
    );
    let mut runner = TestRunner::new_with_rng(
        config.clone(),
        proptest::test_runner::TestRng::deterministic_rng(config.rng_algorithm),
    );
    let top_k = runner.run(&instance(), |inst| {
        let (n, p, k) = (inst.rows.len(), inst.beta.len(), inst.k);
        let localized = RankingTask::Localized {
            k,
            variant: LocalizedVariant::OnTrueBestK,
            weight: RankingWeight::Half,
        };
        for (name, class, task) in [
            (
                "localized",
                ProblemClass::localized(n, k, p, LocalizedVariant::OnTrueBestK),
                localized,
            ),
            ("weak", ProblemClass::weak(n, k, p), RankingTask::Weak { k }),
        ] {
            let formula = bdp(&class).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert!(
                !formula.exists,
                "{} formula exists for n={} p={} K={}",
                name,
                n,
                p,
                k
            );
            let m = scan_nonexistent(&inst, &task)?;
            prop_assert_eq!(m, None, "{} n={} p={} K={} broke", name, n, p, k);
        }
        Ok(())
    });
    let describe = |r: Result<(), proptest::test_runner::TestError<Instance>>| match r {
        Ok(()) => "holds".to_string(),
        Err(proptest::test_runner::TestError::Fail(why, inst)) => {
            let why = why
                .to_string()
                .split_whitespace()
                .collect::<Vec<_>>()
                .join(" ");
            format!(
                "counterexample {why} (x={:?}, beta={:?})",
                inst.rows, inst.beta
            )
        }
        Err(other) => other.to_string(),
    };
    let ok = hard.is_ok() && top_k.is_ok();
    Ok(Outcome::new(
        ok,
        format!(
            "hard p>=n: {}; localized/weak p>=K: {}",
            describe(hard),
            describe(top_k)
        ),
    ))
}

fn svr_swap() -> Result<Outcome, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut worst_alpha, mut worst_obj) = (0.0f64, 0.0f64);
    for t in 0..25 {
        let n = rng.random_range(2..=50);
        let p = rng.random_range(1..=5);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..p).map(|_| rng.random_range(-2.0..2.0)).collect())
            .collect();
        let y: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
        let data = Dataset::relaxed(rows, y.clone(), ResponseKind::Continuous)
            .map_err(|e| e.to_string())?;
        let kernel = if t % 2 == 0 {
            Kernel::Linear
        } else {
            Kernel::Polynomial {
                degree: 2 + t % 3,
                coef0: 1.0,
            }
        };
        let gram = gram_matrix(&data, &kernel);
        let cfg = SvrConfig::new(rng.random_range(0.1..10.0), rng.random_range(0.0..0.5));
        let s = svr_swap_check(&gram, &y, &cfg, 1e-6).map_err(|e| e.to_string())?;
        worst_alpha = worst_alpha.max(s.alpha_gap);
        worst_obj = worst_obj.max(s.objective_gap);
    }
    Ok(Outcome::new(
        worst_alpha <= 1e-5 && worst_obj <= 1e-6,
        format!("25 instances; max alpha gap {worst_alpha:.2e}, max objective gap {worst_obj:.2e}"),
    ))
}

fn coercivity() -> Result<Outcome, String> {
    let e = |x: oibdp::Error| x.to_string();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let rows: Vec<Vec<f64>> = (0..12)
        .map(|_| vec![rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)])
        .collect();
    let y: Vec<f64> = rows
        .iter()
        .map(|r| r[0] - 0.5 * r[1] + rng.random_range(-0.5..0.5))
        .collect();
    let data = Dataset::new(rows, y, ResponseKind::Continuous).map_err(e)?;
    let task = RankingTask::Hard(LossSpec::sigmoid(1.0).map_err(e)?);
    let mut ok = true;
    let mut worst = 0.0f64;
    for lambda in [0.1, 1.0, 10.0] {
        for family in [PenaltyFamily::L1, PenaltyFamily::L2] {
            let penalty = Penalty::new(family, lambda).map_err(e)?;
            let NormBound::Radius(radius) =
                regularized_norm_bound(&data, &task, &penalty).map_err(e)?
            else {
                return Ok(Outcome::new(
                    false,
                    "no finite radius for a positive lambda",
                ));
            };
            for cfg in [
                FitConfig {
                    penalty,
                    ..FitConfig::default()
                },
                FitConfig::subgradient(penalty, 3),
            ] {
                let beta = erm_fit(&data, &task, &cfg, None).map_err(e)?.scorer.beta;
                let norm = penalty.raw(&beta);
                let norm = if matches!(family, PenaltyFamily::L2) {
                    norm.sqrt()
                } else {
                    norm
                };
                worst = worst.max(norm / radius);
                ok &= norm <= radius * (1.0 + 1e-12);
            }
        }
    }
    // Two perfectly ordered points: the sigmoid loss decreases along the ray.
    let pair =
        Dataset::univariate(&[-1.0, 1.0], &[-1.0, 1.0], ResponseKind::Continuous).map_err(e)?;
    let spec = LossSpec::sigmoid(1.0).map_err(e)?;
    let fit = erm_fit(&pair, &RankingTask::Hard(spec), &FitConfig::default(), None).map_err(e)?;
    let at_cap = hard_loss(&pair, &LinearScorer::new(vec![BIG], 0.0), &spec).map_err(e)?;
    let best_finite = [1.0, 10.0, 100.0, 1e3]
        .iter()
        .map(|&b| hard_loss(&pair, &LinearScorer::new(vec![b], 0.0), &spec))
        .collect::<oibdp::Result<Vec<f64>>>()
        .map_err(e)?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let unbounded = matches!(
        regularized_norm_bound(&pair, &RankingTask::Hard(spec), &Penalty::none()).map_err(e)?,
        NormBound::Unbounded
    );
    ok &= unbounded
        && fit.scorer.norm() < BIG
        && (fit.objective - at_cap).abs() <= 1e-12
        && at_cap == best_finite;
    Ok(Outcome::new(
        ok,
        format!(
            "max norm/radius {worst:.4}; lambda=0: fitted |beta|={:.1e}, loss at cap {at_cap:e} = best finite {best_finite:e}",
            fit.scorer.norm()
        ),
    ))
}

fn characterization() -> Result<Outcome, String> {
    let e = |x: oibdp::Error| x.to_string();
    let spec = LossSpec::sigmoid(1.0).map_err(e)?;
    let task = RankingTask::Hard(spec);
    let fit = FitConfig::default();
    let attack = AttackConfig {
        gap: 1e6,
        ..AttackConfig::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut agree, mut broken_cases) = (0, 0);
    let mut disagreements = Vec::new();
    for case in 0..20 {
        let clean_n = rng.random_range(3..=8);
        let m = rng.random_range(1..=clean_n / 2 + 1);
        let xs: Vec<f64> = (0..clean_n)
            .map(|i| i as f64 + rng.random_range(0.0..0.5))
            .collect();
        let ys: Vec<f64> = xs.iter().map(|x| x + rng.random_range(-0.8..0.8)).collect();
        let clean = Dataset::univariate(&xs, &ys, ResponseKind::Continuous).map_err(e)?;
        let c =
            characterization_check(&clean, m, &spec, &Penalty::none(), &[1.0], &fit).map_err(e)?;
        // Placeholders at the end are the instances the scheme replaces.
        let pad_x: Vec<f64> = xs
            .iter()
            .copied()
            .chain((0..m).map(|i| -100.0 - i as f64))
            .collect();
        let pad_y: Vec<f64> = ys
            .iter()
            .copied()
            .chain((0..m).map(|i| 100.0 + i as f64))
            .collect();
        let padded = Dataset::univariate(&pad_x, &pad_y, ResponseKind::Continuous).map_err(e)?;
        let cs = univariate_hard_attack(&padded, m, &attack, 1.0).map_err(e)?;
        let beta = erm_fit(&cs.merged(), &task, &fit, Some(&[1.0]))
            .map_err(e)?
            .scorer
            .beta;
        let broken = positive().contains(&beta);
        broken_cases += usize::from(broken);
        if c.no_breakdown != broken {
            agree += 1;
        } else {
            disagreements.push(format!(
                "case {case} (n={clean_n}, m={m}, lhs={:.6}, rhs={:.6}, beta={:.3e})",
                c.lhs, c.rhs, beta[0]
            ));
        }
    }
    Ok(Outcome::new(
        agree == 20,
        format!(
            "{agree}/20 agree, {broken_cases} broken{}",
            if disagreements.is_empty() {
                String::new()
            } else {
                format!("; {}", disagreements.join(", "))
            }
        ),
    ))
}

fn expected_bdp() -> Result<Outcome, String> {
    let e = |x: oibdp::Error| x.to_string();
    let design: Vec<Vec<f64>> = (1..=10).map(|i| vec![i as f64]).collect();
    let base = MonteCarlo {
        noise: Noise::Zero,
        trials: 20,
        seed: 1,
        scheme: Scheme::UnivariateHard,
        task: RankingTask::Hard(LossSpec::Indicator),
        fit: FitConfig::default(),
        attack: AttackConfig::default(),
    };
    let zero = expected_oibdp(&design, &[1.0], 0.0, &base).map_err(e)?;
    let deterministic = empirical_oibdp(
        &increasing(10),
        Scheme::UnivariateHard,
        &base.task,
        &base.fit,
        &base.attack,
        &positive(),
    )
    .map_err(e)?
    .report
    .bdp
    .ok_or("deterministic scan found no breakdown")?;
    let batches = 20;
    let mut below = 0;
    for batch in 0..batches {
        let mc = MonteCarlo {
            noise: Noise::Gaussian { sigma: 1.0 },
            trials: 200,
            seed: 1000 * (batch as u64 + 1),
            ..base
        };
        if expected_oibdp(&design, &[1.0], 0.0, &mc).map_err(e)?.mean <= zero.mean {
            below += 1;
        }
    }
    let ok = zero.mean == deterministic && zero.stderr == 0.0 && below * 100 >= 95 * batches;
    Ok(Outcome::new(
        ok,
        format!(
            "zero noise mean {} (deterministic {deterministic}), stderr {}; Gaussian mean <= zero-noise in {below}/{batches} batches of 200",
            zero.mean, zero.stderr
        ),
    ))
}

fn trend() -> Result<Outcome, String> {
    let r = bdp(&ProblemClass::hard(400, 80)).map_err(|e| e.to_string())?;
    let v = r.bdp.ok_or("no breakdown")?;
    Ok(Outcome::new(v >= 0.9, format!("n=400 p=80 m*/n={v:.4}")))
}

fn main() -> ExitCode {
    let checks: [(&str, Check, Option<Duration>); 11] = [
        ("1", golden_values, Some(Duration::from_secs(1))),
        ("2", asymptotic_convergence, Some(Duration::from_secs(5))),
        ("3", breakeven_roots, None),
        ("4", worked_example, Some(Duration::from_secs(10))),
        ("5", oracle_equivalence, Some(Duration::from_secs(300))),
        ("6", nonexistence, None),
        ("7", svr_swap, Some(Duration::from_secs(30))),
        ("8", coercivity, None),
        ("9", characterization, None),
        ("10", expected_bdp, None),
        ("trend", trend, None),
    ];
    let mut unexpected = Vec::new();
    for (id, check, budget) in checks {
        let start = Instant::now();
        let outcome = check().unwrap_or_else(|err| Outcome::new(false, format!("error: {err}")));
        let elapsed = start.elapsed();
        let in_time = budget.is_none_or(|b| elapsed <= b);
        let pass = outcome.pass && in_time;
        let known = KNOWN_FAILURES.contains(&id);
        let tag = match (pass, known) {
            (true, false) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
            (true, true) => "PASS (expected failure)",
        };
        let timing = match budget {
            Some(b) => format!("{:.2?} of {:.0?}", elapsed, b),
            None => format!("{elapsed:.2?}"),
        };
        println!("{tag} criterion {id}: {} [{timing}]", outcome.detail);
        if pass == known {
            unexpected.push(id);
        }
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected outcomes: {}", unexpected.join(", "));
        ExitCode::FAILURE
    }
}
