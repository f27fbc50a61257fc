use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The max-order-statistic table only covers 1..=20 teams.
    #[error("unsupported league size: maximum of {0} normals is outside the supported range 1..=20")]
    UnsupportedLeagueSize(usize),

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The win-probability differential has zero variance, so no gradient exists.
    #[error("degenerate differential: sigma_D is zero")]
    DegenerateDifferential,

    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("run `{0}` already exists in the store")]
    RunExists(String),

    #[error("unsupported schema version {found} (expected {expected})")]
    SchemaVersion { found: u32, expected: u32 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for errors caused by bad caller input rather than runtime failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::UnsupportedLeagueSize(_)
                | Error::Validation(_)
                | Error::DimensionMismatch(_)
                | Error::Precondition(_)
                | Error::Parse { .. }
                | Error::SchemaVersion { .. }
        )
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}
