use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] noisy_eda_core::Error),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("environment variable {name}: {reason}")]
    Environment { name: &'static str, reason: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {message}", path.display())]
    ConfigFile { path: PathBuf, message: String },

    #[error("{}:{line}: {message}", path.display())]
    CsvParse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("nothing to plot: {0}")]
    EmptyPlot(String),
}
