use thiserror::Error;

/// Every failure the engines report. [`Error::exit_code`] maps each variant
/// onto the command-line taxonomy: 1 parse/config, 2 hypothesis violation,
/// 3 degenerate mathematical case.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("configuration error: {0}")]
    Config(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("e = (bc - 1)/a is not an integer: a = {a}, bc - 1 = {numerator}")]
    NonIntegralE { a: i64, numerator: i64 },
    #[error("space tag mismatch: expected `{expected}`, found `{found}`")]
    TagMismatch { expected: String, found: String },
    #[error("invalid fiber class ({r}, {d}): {reason}")]
    InvalidClass { r: i64, d: i64, reason: &'static str },
    #[error("invalid bundle: {0}")]
    InvalidBundle(String),
    #[error("invalid rank {0}: must be positive")]
    InvalidRank(i64),
    #[error("determinant is neither ample nor anti-ample (multidegree {0:?})")]
    NotDefinite(Vec<i64>),
    #[error("grading error: {0}")]
    Grading(String),
    #[error("ring has no pushforward table")]
    MissingPushforwardTable,
    #[error("missing Chern character template: {0}")]
    MissingTemplate(String),

    #[error("transform has rank zero: ({r}, {d}) lands on a torsion class")]
    TorsionTransform { r: i64, d: i64 },
    #[error("periodicity reduction undefined for P({r}, {d})")]
    UndefinedReduction { r: i64, d: i64 },
    #[error("slope undefined: the polarization misses the support")]
    ZeroDenominator,
    #[error("linear system is inconsistent (rank {rank})")]
    InconsistentSystem { rank: usize },
    #[error("integer overflow in lattice arithmetic")]
    Overflow,
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        use Error::*;
        match self {
            Parse(_) | Config(_) | MissingPushforwardTable | MissingTemplate(_) => 1,
            HypothesisViolation(_)
            | NonIntegralE { .. }
            | TagMismatch { .. }
            | InvalidClass { .. }
            | InvalidBundle(_)
            | InvalidRank(_)
            | NotDefinite(_)
            | Grading(_) => 2,
            TorsionTransform { .. }
            | UndefinedReduction { .. }
            | ZeroDenominator
            | InconsistentSystem { .. }
            | Overflow => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
