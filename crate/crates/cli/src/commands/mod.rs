//! Subcommand implementations. Each returns the process exit code on
//! success.

pub mod asymptote;
pub mod attack;
pub mod bdp;
pub mod expected;
pub mod svr_check;
pub mod sweep;
pub mod verify;

use std::fs::File;
use std::path::Path;

use oibdp::formulas::{LocalizedPart, ProblemClass, Task};
use oibdp::io::read_dataset;
use oibdp::losses::LocalizedVariant;
use oibdp::{Dataset, ResponseKind};

use crate::args::{LossArg, PartArg, ProblemArgs, TaskArg, VariantArg};
use crate::failure::{Failure, Outcome};

pub fn localized_variant(v: VariantArg) -> LocalizedVariant {
    match v {
        VariantArg::TrueBestk => LocalizedVariant::OnTrueBestK,
        VariantArg::PredictedBestk => LocalizedVariant::OnPredictedBestK,
    }
}

pub fn task_of(task: TaskArg, variant: VariantArg) -> Task {
    match (task, localized_variant(variant)) {
        (TaskArg::Hard, _) => Task::HardContinuous,
        (TaskArg::Binary, _) => Task::HardBinary,
        (TaskArg::Dpartite, _) => Task::HardDPartite,
        (TaskArg::Weak, _) => Task::Weak,
        (TaskArg::Localized, LocalizedVariant::OnTrueBestK) => Task::LocalizedOnTrueBestK,
        (TaskArg::Localized, LocalizedVariant::OnPredictedBestK) => Task::LocalizedOnPredictedBestK,
    }
}

fn uses_k(task: TaskArg) -> bool {
    matches!(task, TaskArg::Localized | TaskArg::Weak)
}

/// Reject flags that do not apply to `task` and demand the ones it needs.
pub fn check_task_flags(task: TaskArg, k: Option<usize>, d_classes: Option<u32>) -> Outcome<()> {
    match (uses_k(task), k) {
        (true, None) => {
            return Err(Failure::usage(
                "--K is required for localized and weak tasks",
            ))
        }
        (false, Some(_)) => {
            return Err(Failure::usage(
                "--K only applies to localized and weak tasks",
            ))
        }
        _ => {}
    }
    match (task == TaskArg::Dpartite, d_classes) {
        (true, None) => Err(Failure::usage(
            "--d-classes is required for the dpartite task",
        )),
        (false, Some(_)) => Err(Failure::usage(
            "--d-classes only applies to the dpartite task",
        )),
        _ => Ok(()),
    }
}

/// Problem class described by the shared flags with sample size `n`.
pub fn problem_class(args: &ProblemArgs, n: usize, p: usize) -> Outcome<ProblemClass> {
    check_task_flags(args.task, args.k, args.d_classes)?;
    let mut class = ProblemClass::new(task_of(args.task, args.variant), n, p);
    if let Some(k) = args.k {
        class = class.with_k(k);
    }
    if let Some(d) = args.d_classes {
        class = class.with_classes(d);
    }
    if args.loss == LossArg::Unbounded {
        class = class.unbounded();
    }
    Ok(class.with_part(match args.part {
        PartArg::Ranking => LocalizedPart::Ranking,
        PartArg::Classification => LocalizedPart::Classification,
    }))
}

/// Response kind implied by a task.
pub fn response_kind(task: TaskArg, d_classes: Option<u32>) -> Outcome<ResponseKind> {
    Ok(match task {
        TaskArg::Binary => ResponseKind::Binary,
        TaskArg::Dpartite => ResponseKind::DPartite(
            d_classes.ok_or_else(|| Failure::usage("--d-classes is required for dpartite data"))?,
        ),
        _ => ResponseKind::Continuous,
    })
}

/// The reference coefficient, all ones when absent.
pub fn reference(given: Option<&[f64]>, p: usize) -> Outcome<Vec<f64>> {
    match given {
        None => Ok(vec![1.0; p]),
        Some(r) if r.len() != p => Err(Failure::usage(format!(
            "--reference has {} components but the data has p = {p}",
            r.len()
        ))),
        Some(r) if r.iter().any(|v| *v == 0.0 || !v.is_finite()) => Err(Failure::usage(
            "--reference components must be finite and nonzero",
        )),
        Some(r) => Ok(r.to_vec()),
    }
}

/// Read a dataset CSV; repeated responses are accepted.
pub fn read_input(path: &Path, kind: ResponseKind) -> Outcome<Dataset> {
    let file = File::open(path).map_err(|e| Failure::unreadable(path, e))?;
    read_dataset(file, kind, false).map_err(|e| {
        let f = Failure::from(e);
        Failure::new(f.code, format!("{}: {}", path.display(), f.message))
    })
}
