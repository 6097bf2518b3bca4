use oibdp::asymptotics::{
    asymptotic_bdp, breakeven_points, AsymptoticQuery, AsymptoticValue, BreakevenFamily,
    DimensionMode,
};
use oibdp::formulas::Task;
use oibdp::losses::LocalizedVariant;
use serde::Serialize;

use super::{localized_variant, task_of};
use crate::args::{AsymptoteArgs, LossArg, TaskArg, VariantArg};
use crate::failure::{Failure, Outcome, NONEXISTENT};
use crate::output::{print_json, write_csv};

pub const CURVE_HEADER: [&str; 2] = ["d", "bdp"];

#[derive(Serialize)]
struct LimitBody {
    task: TaskArg,
    variant: Option<VariantArg>,
    loss: LossArg,
    p: Option<usize>,
    b: Option<f64>,
    d: Option<f64>,
    kind: &'static str,
    value: Option<f64>,
}

#[derive(Serialize)]
struct BreakevenBody {
    variant: VariantArg,
    p: usize,
    d0: f64,
    d1: Option<f64>,
}

fn kind_label(v: AsymptoticValue) -> &'static str {
    match v {
        AsymptoticValue::Value(_) => "value",
        AsymptoticValue::One => "one",
        AsymptoticValue::Zero => "zero",
        AsymptoticValue::Nonexistent => "nonexistent",
    }
}

fn query(args: &AsymptoteArgs) -> AsymptoticQuery {
    let dimension = match args.b {
        Some(b) => DimensionMode::Proportional(b),
        None => DimensionMode::Fixed(args.p),
    };
    let mut q = AsymptoticQuery::new(task_of(args.task, args.variant), dimension);
    if args.loss == LossArg::Unbounded {
        q = q.unbounded();
    }
    q
}

/// Limit on the grid `d = i / steps`, `i = 1..=steps`; empty where the
/// limit does not exist.
fn curve(args: &AsymptoteArgs) -> Outcome<Vec<Vec<String>>> {
    if args.steps == 0 {
        return Err(Failure::usage("--steps must be >= 1"));
    }
    let base = query(args);
    (1..=args.steps)
        .map(|i| {
            let d = i as f64 / args.steps as f64;
            let v = asymptotic_bdp(&base.with_d(d))?;
            Ok(vec![
                d.to_string(),
                v.as_f64().map(|x| x.to_string()).unwrap_or_default(),
            ])
        })
        .collect()
}

fn family(variant: LocalizedVariant, p: usize) -> BreakevenFamily {
    match (variant, p) {
        (LocalizedVariant::OnTrueBestK, 1) => BreakevenFamily::TrueBestKUnivariate,
        (LocalizedVariant::OnPredictedBestK, 1) => BreakevenFamily::PredictedBestKUnivariate,
        (LocalizedVariant::OnTrueBestK, p) => BreakevenFamily::TrueBestKFixed(p),
        (LocalizedVariant::OnPredictedBestK, p) => BreakevenFamily::PredictedBestKFixed(p),
    }
}

pub fn run(args: &AsymptoteArgs) -> Outcome<u8> {
    let localized = args.task == TaskArg::Localized;
    if args.emit_breakevens {
        if !localized || args.b.is_some() || args.loss == LossArg::Unbounded {
            return Err(Failure::usage(
                "--emit-breakevens needs a localized task with fixed p and the indicator loss",
            ));
        }
        if args.out.is_some() {
            write_csv(args.out.as_deref(), &CURVE_HEADER, &curve(args)?)?;
        }
        let b = breakeven_points(family(localized_variant(args.variant), args.p))?;
        print_json(
            "asymptote",
            &BreakevenBody {
                variant: args.variant,
                p: args.p,
                d0: b.d0,
                d1: b.d1,
            },
        )?;
        return Ok(0);
    }
    if localized && args.d.is_none() {
        write_csv(args.out.as_deref(), &CURVE_HEADER, &curve(args)?)?;
        return Ok(0);
    }
    if args.out.is_some() {
        return Err(Failure::usage("--out only applies to localized curves"));
    }
    let mut q = query(args);
    if let Some(d) = args.d {
        if !localized {
            return Err(Failure::usage("--d only applies to the localized task"));
        }
        q = q.with_d(d);
    }
    if q.task == Task::Weak {
        return Err(Failure::usage("no limit is available for weak ranking"));
    }
    let v = asymptotic_bdp(&q)?;
    print_json(
        "asymptote",
        &LimitBody {
            task: args.task,
            variant: localized.then_some(args.variant),
            loss: args.loss,
            p: args.b.is_none().then_some(args.p),
            b: args.b,
            d: args.d,
            kind: kind_label(v),
            value: v.as_f64(),
        },
    )?;
    Ok(if v == AsymptoticValue::Nonexistent {
        NONEXISTENT
    } else {
        0
    })
}
