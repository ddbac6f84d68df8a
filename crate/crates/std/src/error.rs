use renyi_converse_core::Error;

/// Every failure the CLI reports, grouped by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags, unreadable or malformed input files.
    #[error("{0}")]
    Usage(String),
    /// A check failed or a bound was violated.
    #[error("{0}")]
    Failed(String),
    /// A state or computation failed numerical validation.
    #[error(transparent)]
    Numerical(Error),
    #[error("output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Failed(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 3,
        }
    }
}

impl CliError {
    /// A usage error naming the flag at fault and how to fix it.
    pub fn usage(flag: &str, problem: impl std::fmt::Display, fix: &str) -> Self {
        CliError::Usage(format!("{flag}: {problem}\n  fix: {fix}"))
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidPreset(_) => {
                CliError::usage("--preset", &e, "use bell, phi(K), ghz(n), werner(p) or schmidt(p1,...,pk)")
            }
            Error::UnknownLabel(_) | Error::InvalidSplit(_) | Error::MissingRegister(_) => {
                CliError::usage("--register/--split", &e, "name registers that the state has, e.g. A")
            }
            Error::InvalidDims(_) => CliError::usage("--dims", &e, "give positive sizes joined by x, e.g. 2x3"),
            Error::InvalidRank { .. } => CliError::usage("--rank", &e, "pick a rank between 1 and the total dimension"),
            Error::AlphaOutOfRange { range, .. } => {
                CliError::usage("--alpha", &e, &format!("choose orders inside {range}, or pass --optimize-alpha"))
            }
            Error::RateOutOfRange { .. } => CliError::usage("--rate", &e, "lower the rate to the range shown"),
            Error::TooLarge(_) => CliError::usage("--n", &e, "lower --n or drop --exact"),
            Error::InvalidArgument(_) => CliError::Usage(e.to_string()),
            Error::BoundViolation(m) => CliError::Failed(format!("bound violation: {m}")),
            other => CliError::Numerical(other),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(std::io::Error::other(e))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(std::io::Error::other(e))
    }
}
