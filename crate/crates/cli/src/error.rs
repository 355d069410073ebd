use thiserror::Error;

use crate::config::ConfigError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),

    #[error("{context}: {source}")]
    Numerical {
        context: String,
        #[source]
        source: anisogreen::Error,
    },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn numerical(context: impl Into<String>, source: anisogreen::Error) -> Self {
        CliError::Numerical { context: context.into(), source }
    }

    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }

    /// Process exit code: 2 config, 3 numerical regime, 4 accuracy, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use anisogreen::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical { source, .. } => match source {
                E::OutOfRegime { .. } | E::BandOutOfRegime { .. } | E::Singular { .. } | E::AxisDegenerate { .. } => 3,
                E::Accuracy { .. } => 4,
                E::InvalidMedium(_) | E::Domain(_) => 2,
                _ => 1,
            },
            CliError::Validation(_) => 4,
            CliError::Io { .. } => 1,
        }
    }
}
