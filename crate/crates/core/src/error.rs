use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("placement failed after placing {placed} of {requested} clumps")]
    Placement { placed: usize, requested: usize },

    #[error("singular inertia tensor")]
    SingularInertia,

    #[error("coincident pebble centers for pebbles {0} and {1}")]
    CoincidentCenters(usize, usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
