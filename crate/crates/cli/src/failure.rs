use std::fmt;
use std::path::Path;

/// A command failure carrying its process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

pub const CHECK_FAILED: u8 = 1;
pub const NONEXISTENT: u8 = 2;
pub const NOT_CONVERGED: u8 = 3;
pub const USAGE: u8 = 64;
pub const DATA: u8 = 65;
pub const UNREADABLE: u8 = 66;
pub const IO: u8 = 74;

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(USAGE, message)
    }

    pub fn unreadable(path: &Path, err: impl fmt::Display) -> Self {
        Self::new(UNREADABLE, format!("cannot read {}: {err}", path.display()))
    }

    pub fn unwritable(path: &Path, err: impl fmt::Display) -> Self {
        Self::new(IO, format!("cannot write {}: {err}", path.display()))
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<oibdp::Error> for Failure {
    fn from(e: oibdp::Error) -> Self {
        use oibdp::Error::*;
        let code = match &e {
            Csv(_) | InvalidDataset(_) | DegenerateData(_) => DATA,
            NotConverged { .. } => NOT_CONVERGED,
            AllTrialsNonexistent => NONEXISTENT,
            DimensionMismatch { .. }
            | InvalidParameter(_)
            | KOutOfRange { .. }
            | SampleTooSmall(_)
            | UnboundedLoss
            | NonCoercivePenalty
            | InsufficientInstances(_)
            | BoundsViolated(_)
            | OutsideRegime(_) => USAGE,
            NoSignChange { .. } | EmptySearch => CHECK_FAILED,
        };
        Failure::new(code, e.to_string())
    }
}

pub type Outcome<T> = Result<T, Failure>;
