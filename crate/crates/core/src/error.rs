/// Errors surfaced by the library. The CLI maps `Input`/`Parse` to exit code 1
/// and everything else to exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("infeasible specification: {0}")]
    Infeasible(String),
    #[error("row {row}: {msg}")]
    Parse { row: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    /// True for errors caused by the caller's data or parameters.
    pub fn is_input(&self) -> bool {
        matches!(self, Error::Input(_) | Error::Parse { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
