use lrb::LrbError;

/// Errors surfaced by the command line, each with its exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{message}")]
    Falsified {
        message: String,
        report: Option<String>,
    },
    #[error("{0}")]
    Guard(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn parse(msg: impl Into<String>) -> Self {
        CliError::Parse(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Falsified { .. } => 3,
            CliError::Guard(_) => 4,
            CliError::Io(_) | CliError::Other(_) => 1,
        }
    }
}

impl From<LrbError> for CliError {
    fn from(e: LrbError) -> Self {
        let msg = e.to_string();
        match e {
            LrbError::Malformed(_)
            | LrbError::UnknownKey(_)
            | LrbError::Invalid(_)
            | LrbError::Domain(_)
            | LrbError::Precondition(_) => CliError::Parse(msg),
            LrbError::AxiomViolation { .. } | LrbError::Falsified(_) => CliError::Falsified {
                message: msg,
                report: None,
            },
            LrbError::SizeGuard { .. } => CliError::Guard(msg),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Parse(format!(
            "JSON at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        let at = e
            .position()
            .map(|p| format!(" at line {}", p.line()))
            .unwrap_or_default();
        CliError::Parse(format!("CSV{at}: {e}"))
    }
}
