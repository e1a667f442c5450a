use thiserror::Error;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical error: {0}")]
    Numeric(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl SweepError {
    /// Process exit code: 1 config, 2 numerics, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 1,
            Self::Numeric(_) => 2,
            Self::Io(_) => 3,
        }
    }
}

pub(crate) fn config(msg: impl Into<String>) -> SweepError {
    SweepError::Config(msg.into())
}
