//! Order-inversal breakdown points of linear ranking estimators.
//!
//! A ranking estimator breaks down when outliers push every coefficient to
//! the wrong side of a reference scorer, so that the induced ordering of
//! clean instances is inverted. This crate provides the data model, ranking
//! losses, closed-form breakdown points and their limits, explicit outlier
//! schemes, ERM and SVR solvers, and empirical verifiers.

// Negated comparisons are used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod directions;
pub mod error;
pub mod estimators;
pub mod formulas;
pub mod io;
pub mod losses;
pub mod model;
pub mod rankability;
pub mod schemes;
pub mod verify;

pub use error::{Error, Result};
pub use model::{
    BreakdownReport, BreakdownSet, ContaminatedSample, Dataset, LinearScorer, Outlier,
    ReferenceVariant, ResponseKind, BIG,
};
