use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    /// Invalid configuration; `field` is the JSON path of the offending value.
    #[error("{source_name}: {field}: {message}")]
    Config {
        source_name: String,
        field: String,
        message: String,
    },

    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: dgbo_core::Error,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Format { path: String, message: String },

    #[error("unknown suite `{0}` (expected operators, weights, commutators, groundstate, evolution, functionals or all)")]
    UnknownSuite(String),
}

impl LabError {
    pub fn config(source_name: &str, field: &str, message: impl Into<String>) -> Self {
        LabError::Config {
            source_name: source_name.to_string(),
            field: field.to_string(),
            message: message.into(),
        }
    }

    pub fn core(context: impl Into<String>, source: dgbo_core::Error) -> Self {
        LabError::Core {
            context: context.into(),
            source,
        }
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        LabError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    /// 2 for configuration problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Config { .. } | LabError::UnknownSuite(_) => 2,
            _ => 1,
        }
    }
}
