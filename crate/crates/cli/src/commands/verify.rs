use oibdp::estimators::{FitConfig, RankingTask};
use oibdp::formulas::bdp;
use oibdp::losses::{LossSpec, RankingWeight};
use oibdp::schemes::{AttackConfig, Scheme};
use oibdp::verify::{
    brute_force_oibdp, empirical_oibdp, AdversaryGrid, BruteForceReport, EmpiricalReport,
};
use oibdp::{BreakdownReport, BreakdownSet, ReferenceVariant};
use serde::Serialize;

use super::{localized_variant, problem_class, read_input, reference, response_kind};
use crate::args::{FitLossArg, LossArg, TaskArg, VerifyArgs};
use crate::design::synthetic;
use crate::failure::{Failure, Outcome, CHECK_FAILED};
use crate::output::{print_json, write_csv};

/// How the scheme's breakdown compares with the closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Agreement {
    Equal,
    /// The scheme broke the fit with fewer outliers than the formula.
    BelowFormula,
    /// The scheme needed more outliers than the formula guarantees.
    AboveFormula,
    /// The formula predicts breakdown but the scheme never achieved it.
    NotReached,
    /// Neither the formula nor the scheme finds a breakdown.
    BothNonexistent,
    /// The scheme breaks although the formula says breakdown is impossible.
    UnexpectedBreakdown,
    /// The clean-sample fit is already in the breakdown set.
    PreBroken,
}

impl Agreement {
    pub fn of(formula: &BreakdownReport, empirical: &EmpiricalReport) -> Self {
        if empirical.pre_broken {
            return Agreement::PreBroken;
        }
        match (formula.m_min, empirical.report.m_min) {
            (Some(a), Some(b)) if a == b => Agreement::Equal,
            (Some(a), Some(b)) if b < a => Agreement::BelowFormula,
            (Some(_), Some(_)) => Agreement::AboveFormula,
            (Some(_), None) => Agreement::NotReached,
            (None, None) => Agreement::BothNonexistent,
            (None, Some(_)) => Agreement::UnexpectedBreakdown,
        }
    }

    pub fn is_violation(self) -> bool {
        matches!(self, Agreement::AboveFormula | Agreement::NotReached)
    }
}

#[derive(Serialize)]
struct VerifyBody<'a> {
    task: TaskArg,
    n: usize,
    p: usize,
    reference: &'a [f64],
    scheme: &'static str,
    formula: &'a BreakdownReport,
    empirical: &'a EmpiricalReport,
    brute_force: Option<&'a BruteForceReport>,
    agreement: Agreement,
}

fn ranking_task(args: &VerifyArgs) -> Outcome<RankingTask> {
    let problem = &args.problem;
    let hard_spec = match args.fit_loss {
        FitLossArg::Indicator => LossSpec::Indicator,
        FitLossArg::Sigmoid => LossSpec::sigmoid(1.0)?,
    };
    let k = problem.k.unwrap_or(0);
    Ok(match problem.task {
        TaskArg::Hard | TaskArg::Binary | TaskArg::Dpartite => RankingTask::Hard(hard_spec),
        _ if args.fit_loss != FitLossArg::Indicator => {
            return Err(Failure::usage("--fit-loss only applies to hard tasks"))
        }
        TaskArg::Weak => RankingTask::Weak { k },
        TaskArg::Localized => RankingTask::Localized {
            k,
            variant: localized_variant(problem.variant),
            weight: RankingWeight::Half,
        },
    })
}

fn scheme_for(task: TaskArg, k: Option<usize>, p: usize) -> Scheme {
    match task {
        TaskArg::Hard if p == 1 => Scheme::UnivariateHard,
        TaskArg::Hard => Scheme::Axiswise,
        TaskArg::Binary | TaskArg::Dpartite => Scheme::Binary,
        TaskArg::Localized | TaskArg::Weak => Scheme::Localized { k: k.unwrap_or(1) },
    }
}

pub fn run(args: &VerifyArgs) -> Outcome<u8> {
    let problem = &args.problem;
    if problem.loss == LossArg::Unbounded {
        return Err(Failure::usage("verify supports the indicator loss only"));
    }
    let kind = response_kind(problem.task, problem.d_classes)?;
    let data = match (&args.input, problem.n) {
        (Some(_), Some(_)) => return Err(Failure::usage("--n cannot be combined with --input")),
        (Some(path), None) => read_input(path, kind)?,
        (None, Some(n)) => {
            let beta = reference(args.reference.as_deref(), problem.p)?;
            synthetic(n, problem.p, args.seed, &beta, kind)?
        }
        (None, None) => return Err(Failure::usage("either --input or --n is required")),
    };
    let (n, p) = (data.n(), data.p());
    let beta = reference(args.reference.as_deref(), p)?;
    let class = problem_class(problem, n, p)?;
    let formula = bdp(&class)?;
    let task = ranking_task(args)?;
    let scheme = scheme_for(problem.task, problem.k, p);
    let set = BreakdownSet::new(beta.clone(), ReferenceVariant::Population)?;
    let fit = FitConfig::default();
    let attack = AttackConfig {
        magnitude: args.placement.magnitude,
        gap: args.placement.gap,
        ..AttackConfig::default()
    };
    let empirical = empirical_oibdp(&data, scheme, &task, &fit, &attack, &set)?;
    let brute = if args.brute_force {
        Some(brute_force_oibdp(
            &data,
            &task,
            &fit,
            &AdversaryGrid::default(),
            &set,
        )?)
    } else {
        None
    };
    if let Some(path) = &args.trace_csv {
        let rows: Vec<Vec<String>> = empirical
            .trace
            .iter()
            .map(|s| {
                let beta: Vec<String> = s.beta.iter().map(f64::to_string).collect();
                vec![
                    s.m.to_string(),
                    s.objective.to_string(),
                    s.broken.to_string(),
                    s.deficit.to_string(),
                    beta.join(";"),
                ]
            })
            .collect();
        write_csv(Some(path), &TRACE_HEADER, &rows)?;
    }
    let agreement = Agreement::of(&formula, &empirical);
    print_json(
        "verify",
        &VerifyBody {
            task: problem.task,
            n,
            p,
            reference: &beta,
            scheme: scheme.label(),
            formula: &formula,
            empirical: &empirical,
            brute_force: brute.as_ref(),
            agreement,
        },
    )?;
    Ok(if agreement.is_violation() {
        CHECK_FAILED
    } else {
        0
    })
}

pub const TRACE_HEADER: [&str; 5] = ["m", "objective", "broken", "deficit", "beta"];
