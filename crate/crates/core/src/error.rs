use num_complex::Complex64;
use thiserror::Error;

/// Errors raised across the library.
///
/// Variants split into three families: invalid input (shape, range, parse),
/// mathematical negatives (the object provably lacks the requested
/// structure), and undecidable numerics (`Indeterminate`).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum FradecoError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("input point {index} is the zero vector")]
    ZeroColumn { index: usize },

    #[error("sampling failed after {attempts} attempts")]
    SamplingFailed { attempts: usize },

    #[error("quaternion has norm {norm}, expected 1")]
    NotUnitQuaternion { norm: f64 },

    #[error("no determinantal template for r = {0} (supported: 3..=9)")]
    UnsupportedR(usize),

    #[error("order d = {d} too small for r = {r} (need d >= {})", 2 * r - 2)]
    OrderTooSmall { d: usize, r: usize },

    #[error("M_{r} has full rank: no funtf of rank {r}")]
    NotRankDeficient { r: usize },

    #[error("no M_r with 3 <= r <= {max_r} drops rank: no funtf decomposition at a testable rank")]
    NoDeficientTemplate { max_r: usize },

    #[error("M_{r} has a {kernel_dim}-dimensional left kernel: tensor is a singular point")]
    SingularPoint { r: usize, kernel_dim: usize },

    #[error("frame polynomial has a repeated root")]
    RepeatedRoots,

    #[error("frame polynomial has non-real roots")]
    ComplexRoots { roots: Vec<Complex64> },

    #[error("numerical rank undecidable: gap ratio {gap_ratio:.3e} below {required:.1e}")]
    Indeterminate { gap_ratio: f64, required: f64 },

    #[error("gradient vanishes at the current iterate")]
    ZeroGradient,

    #[error("no convergence after {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("{columns} monomial columns exceed the budget of {budget}")]
    BudgetExceeded { columns: usize, budget: usize },

    #[error("unknown equation '{0}'")]
    UnknownEquation(String),

    #[error("catalecticant has full rank: tensor rank exceeds 5")]
    FullRank,

    #[error("catalecticant rank {rank} is below 5")]
    RankTooLow { rank: usize },

    #[error("kernel conic has no real points: no real rank 5 decomposition")]
    EmptyConic,

    #[error("no frame decomposition found after {restarts} restarts")]
    NotFound { restarts: usize },
}

impl FradecoError {
    /// Process exit status: 1 when the computation says no, 2 for bad input,
    /// 3 when it could not decide.
    pub fn exit_code(&self) -> u8 {
        use FradecoError::*;
        match self {
            NotRankDeficient { .. } | NoDeficientTemplate { .. } | ComplexRoots { .. } | FullRank | RankTooLow { .. } | EmptyConic => 1,
            InvalidArgument(_)
            | ShapeMismatch(_)
            | Parse { .. }
            | Io(_)
            | ZeroColumn { .. }
            | NotUnitQuaternion { .. }
            | UnsupportedR(_)
            | OrderTooSmall { .. }
            | UnknownEquation(_) => 2,
            SingularPoint { .. }
            | RepeatedRoots
            | Indeterminate { .. }
            | ZeroGradient
            | NonConvergence { .. }
            | SamplingFailed { .. }
            | BudgetExceeded { .. }
            | NotFound { .. } => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, FradecoError>;

impl From<std::io::Error> for FradecoError {
    fn from(e: std::io::Error) -> Self {
        FradecoError::Io(e.to_string())
    }
}
