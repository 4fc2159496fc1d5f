use thiserror::Error;

/// Configuration problems, each located as precisely as the input allows.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid {field}: {message}")]
    Validation { field: String, message: String },

    #[error("unknown {what} '{name}'{}", suggestion_text(.suggestion))]
    Unknown {
        what: String,
        name: String,
        suggestion: Option<String>,
    },
}

fn suggestion_text(s: &Option<String>) -> String {
    match s {
        Some(s) => format!(", did you mean '{s}'?"),
        None => String::new(),
    }
}

impl ConfigError {
    pub fn validation(field: &str, message: impl Into<String>) -> Self {
        ConfigError::Validation {
            field: field.to_string(),
            message: message.into(),
        }
    }

    /// Unknown name with the closest candidate attached when one is near.
    pub fn unknown<'a>(what: &str, name: &str, candidates: impl IntoIterator<Item = &'a str>) -> Self {
        let suggestion = candidates
            .into_iter()
            .map(|c| (strsim::jaro_winkler(name, c), c))
            .filter(|(score, _)| *score > 0.7)
            .max_by(|a, b| a.0.total_cmp(&b.0))
            .map(|(_, c)| c.to_string());
        ConfigError::Unknown {
            what: what.to_string(),
            name: name.to_string(),
            suggestion,
        }
    }

    pub fn syntax(text: &str, e: &toml::de::Error) -> Self {
        let (line, column) = match e.span() {
            Some(span) => {
                let before = &text[..span.start.min(text.len())];
                let line = before.matches('\n').count() + 1;
                let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
                (line, column)
            }
            None => (0, 0),
        };
        ConfigError::Syntax {
            line,
            column,
            message: e.message().to_string(),
        }
    }
}

/// Failure of a CLI command, categorized for the exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(#[from] ConfigError),

    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Io(String),

    #[error("{0}")]
    Compute(#[from] robustaf::Error),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Config(_) => 3,
            CliError::Io(_) | CliError::Compute(robustaf::Error::Io(_)) => 4,
            CliError::Compute(_) => 5,
        }
    }

    pub fn category(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage error",
            CliError::Config(_) => "config error",
            CliError::Io(_) | CliError::Compute(robustaf::Error::Io(_)) => "io error",
            CliError::Compute(_) => "computation error",
        }
    }
}
