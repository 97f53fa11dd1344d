use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Clap(#[from] clap::Error),
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },
    #[error("invalid {field}: {msg}")]
    Invalid { field: String, msg: String },
    #[error("{} check(s) failed", .0.len())]
    Checks(Vec<String>),
    #[error(transparent)]
    Compute(#[from] thetaflow::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn invalid(field: &str, msg: impl Into<String>) -> Self {
        Self::Invalid {
            field: field.into(),
            msg: msg.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Clap(e) => e.exit_code(),
            Self::Parse { .. } | Self::Invalid { .. } => 2,
            Self::Checks(_) | Self::Compute(_) | Self::Io(_) => 1,
        }
    }
}
