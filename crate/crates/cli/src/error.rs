use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or an unreadable or malformed symbol.
    #[error("{0}")]
    Input(String),
    /// The analysis ran but some section failed; the report lists why.
    #[error("{0}")]
    Analysis(String),
    #[error("writing {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Analysis(_) | CliError::Io { .. } => 1,
        }
    }
}
