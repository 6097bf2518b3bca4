use oibdp::estimators::{FitConfig, RankingTask};
use oibdp::formulas::{bdp, binary_univariate, hard_univariate, ProblemClass};
use oibdp::losses::{LocalizedVariant, LossSpec, RankingWeight};
use oibdp::schemes::{AttackConfig, Scheme};
use oibdp::verify::{brute_force_oibdp, empirical_oibdp, AdversaryGrid};
use oibdp::{BreakdownSet, Dataset, ReferenceVariant, ResponseKind};

fn increasing(n: usize) -> Dataset {
    let v: Vec<f64> = (1..=n).map(|i| i as f64).collect();
    Dataset::univariate(&v, &v, ResponseKind::Continuous).unwrap()
}

fn bipartite(n: usize) -> Dataset {
    let x: Vec<f64> = (1..=n).map(|i| i as f64).collect();
    let y: Vec<f64> = (0..n).map(|i| if i < n / 2 { -1.0 } else { 1.0 }).collect();
    Dataset::univariate(&x, &y, ResponseKind::Binary).unwrap()
}

fn positive() -> BreakdownSet {
    BreakdownSet::new(vec![1.0], ReferenceVariant::Population).unwrap()
}

fn brute(data: &Dataset, task: &RankingTask) -> Option<usize> {
    let r = brute_force_oibdp(
        data,
        task,
        &FitConfig::default(),
        &AdversaryGrid::default(),
        &positive(),
    )
    .unwrap();
    assert!(r.exhaustive);
    r.report.m_min
}

#[test]
fn exhaustive_search_matches_hard_formula() {
    let task = RankingTask::Hard(LossSpec::Indicator);
    for n in 4..=8 {
        assert_eq!(
            brute(&increasing(n), &task),
            hard_univariate(n).unwrap().m_min,
            "n={n}"
        );
    }
}

#[test]
fn exhaustive_search_matches_binary_formula_on_small_samples() {
    let task = RankingTask::Hard(LossSpec::Indicator);
    for n in 4..=6 {
        assert_eq!(
            brute(&bipartite(n), &task),
            binary_univariate(n).unwrap().m_min,
            "n={n}"
        );
    }
}

#[test]
fn exhaustive_search_undercuts_binary_formula_beyond_six() {
    let task = RankingTask::Hard(LossSpec::Indicator);
    for n in [7, 8] {
        let found = brute(&bipartite(n), &task).unwrap();
        assert!(
            found < binary_univariate(n).unwrap().m_min.unwrap(),
            "n={n}"
        );
    }
}

#[test]
fn exhaustive_search_matches_localized_formula() {
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
        .unwrap()
        .m_min;
        assert_eq!(brute(&increasing(n), &task), expected, "n={n} K={k}");
    }
}

#[test]
fn univariate_scheme_scan_reproduces_formula() {
    let task = RankingTask::Hard(LossSpec::Indicator);
    for n in 4..=30 {
        let r = empirical_oibdp(
            &increasing(n),
            Scheme::UnivariateHard,
            &task,
            &FitConfig::default(),
            &AttackConfig::default(),
            &positive(),
        )
        .unwrap();
        assert_eq!(r.report.m_min, hard_univariate(n).unwrap().m_min, "n={n}");
    }
}

#[test]
fn binary_scheme_scan_is_bounded_by_formula() {
    let task = RankingTask::Hard(LossSpec::Indicator);
    for n in 4..=20 {
        let r = empirical_oibdp(
            &bipartite(n),
            Scheme::Binary,
            &task,
            &FitConfig::default(),
            &AttackConfig::default(),
            &positive(),
        )
        .unwrap();
        let m = r.report.m_min.expect("binary scheme breaks down");
        assert!(m <= binary_univariate(n).unwrap().m_min.unwrap(), "n={n}");
    }
}
