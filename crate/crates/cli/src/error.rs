use std::fmt;
use std::path::PathBuf;

/// CLI failure. `Display` renders one line starting with a bracketed class:
/// `error[usage]`, `error[parse]`, `error[domain]` or `error[io]`.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse { line: usize, column: usize, message: String },
    Scene(String),
    Domain(conicray::Error),
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn class(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Parse { .. } | CliError::Scene(_) => "parse",
            CliError::Domain(_) => "domain",
            CliError::Io { .. } => "io",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Parse { .. } | CliError::Scene(_) => 3,
            CliError::Domain(_) => 4,
            CliError::Io { .. } => 5,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = match self {
            CliError::Usage(m) | CliError::Scene(m) => m.clone(),
            CliError::Parse { line, column, message } => format!("line {line}, column {column}: {message}"),
            CliError::Domain(e) => e.to_string(),
            CliError::Io { path, source } => format!("{}: {source}", path.display()),
        };
        write!(f, "error[{}]: {}", self.class(), one_line(&body))
    }
}

impl std::error::Error for CliError {}

impl From<conicray::Error> for CliError {
    fn from(e: conicray::Error) -> Self {
        CliError::Domain(e)
    }
}
