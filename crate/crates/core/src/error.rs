use std::path::PathBuf;

use thiserror::Error;

use crate::clockcore::ClockError;
use crate::grouping::GroupingError;
use crate::ingest::{ConfigError, IngestError};
use crate::intergroup::IntergroupError;

/// Exit code for unreadable or invalid input.
pub const EXIT_INPUT: i32 = 2;
/// Exit code for failures while computing clocks.
pub const EXIT_COMPUTE: i32 = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Grouping(#[from] GroupingError),
    #[error(transparent)]
    Clock(#[from] ClockError),
    #[error(transparent)]
    Intergroup(#[from] IntergroupError),
    #[error("no grouping source: pass --labels or --cluster")]
    NoGroupingSource,
    #[error("cannot write '{path}': {message}")]
    Output { path: PathBuf, message: String },
}

impl Error {
    /// Process exit code: 2 for input problems, 3 for computation failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Ingest(_) | Error::Config(_) | Error::NoGroupingSource | Error::Output { .. } => {
                EXIT_INPUT
            }
            Error::Grouping(GroupingError::BadSpec(_) | GroupingError::LabelCount { .. }) => EXIT_INPUT,
            Error::Grouping(
                GroupingError::ZeroClusters | GroupingError::InvalidEps(_) | GroupingError::ZeroMinPts,
            ) => EXIT_INPUT,
            Error::Clock(ClockError::InvalidOption(_)) => EXIT_INPUT,
            Error::Intergroup(IntergroupError::InvalidOption(_)) => EXIT_INPUT,
            Error::Grouping(_) | Error::Clock(_) | Error::Intergroup(_) => EXIT_COMPUTE,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
