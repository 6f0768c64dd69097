use std::path::PathBuf;

use crate::estimators::TylerReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A Gaussian draw kept landing (numerically) on the origin.
    #[error("degenerate-draw: normal vector norm stayed below 1e-300 after {attempts} attempts")]
    DegenerateDraw { attempts: usize },

    #[error("dimension-exceeds-sample: Tyler's estimator needs n >= d (d = {d}, n = {n})")]
    DimensionExceedsSample { d: usize, n: usize },

    #[error("zero-column: observation {index} is the zero vector")]
    ZeroColumn { index: usize },

    /// Carries the partial report so callers can still inspect the iterate.
    #[error("no-convergence: stopped after {} iterations (residual {:e})", .0.iterations, .0.residual)]
    NoConvergence(Box<TylerReport>),

    #[error(
        "singular-shape: shape matrix is numerically singular (condition estimate {condition:e})"
    )]
    SingularShape { condition: f64 },

    #[error("non-finite-entry: matrix contains NaN or infinite values")]
    NonFiniteEntry,

    #[error("moment-overflow: ESD moment of order {order} is not finite")]
    MomentOverflow { order: u32 },

    #[error("invalid-argument: {0}")]
    InvalidArgument(String),

    #[error("config-error: {0}")]
    Config(String),

    #[error("parse-error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("io-error: {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
