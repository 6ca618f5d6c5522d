use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Core(#[from] pcm_bem::Error),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("ordering error: {0}")]
    Ordering(String),
    #[error("invalid data: {0}")]
    Data(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl BenchError {
    /// Short stable tag for machine-readable error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            BenchError::Core(e) => match e {
                pcm_bem::Error::Io(_) => "io",
                pcm_bem::Error::Parse { .. } | pcm_bem::Error::MalformedFace { .. } => "parse",
                _ => "numerics",
            },
            BenchError::Config(_) => "config",
            BenchError::Ordering(_) => "ordering",
            BenchError::Data(_) => "data",
            BenchError::Io(_) => "io",
        }
    }
}

pub type Result<T, E = BenchError> = std::result::Result<T, E>;
