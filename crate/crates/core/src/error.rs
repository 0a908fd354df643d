use std::path::PathBuf;

use thiserror::Error;

use crate::timeline::Stage;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter fell outside its permitted range.
    #[error("{field} must {requirement} (got {value})")]
    Validation {
        field: String,
        value: String,
        requirement: String,
    },

    #[error("odd dimension weights must sum to 1 (residual {residual:e})")]
    WeightSum { residual: f64 },

    #[error("{quantity} is not representable as a finite number")]
    NonFinite { quantity: &'static str },

    #[error(
        "{0} timelines are not modeled; only stage 2 (revenue service) and stage 3 \
         (broad commercialization) are projected, stage 1 thresholds are metadata only"
    )]
    UnsupportedStage(Stage),

    #[error("unknown parameter path `{path}`; valid paths: {}", valid.join(", "))]
    UnknownParameter { path: String, valid: Vec<String> },

    #[error("unknown category `{name}`; valid categories: {}", valid.join(", "))]
    UnknownCategory { name: String, valid: Vec<String> },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("schema violation at `{pointer}`: {message}")]
    Schema { pointer: String, message: String },

    #[error("scenario `{name}`: {source}")]
    InScenario {
        name: String,
        #[source]
        source: Box<Error>,
    },

    #[error("nothing to render: result list is empty")]
    EmptyInput,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Serialize(String),
}

impl Error {
    pub(crate) fn validation(
        field: impl Into<String>,
        value: impl ToString,
        requirement: impl Into<String>,
    ) -> Self {
        Error::Validation {
            field: field.into(),
            value: value.to_string(),
            requirement: requirement.into(),
        }
    }

    /// Prefixes the field name of a validation error with `prefix.`.
    pub(crate) fn under(self, prefix: &str) -> Self {
        match self {
            Error::Validation {
                field,
                value,
                requirement,
            } => Error::Validation {
                field: format!("{prefix}.{field}"),
                value,
                requirement,
            },
            other => other,
        }
    }

    pub(crate) fn in_scenario(self, name: &str) -> Self {
        Error::InScenario {
            name: name.to_string(),
            source: Box::new(self),
        }
    }
}

/// Checks `low < value < high`.
pub(crate) fn check_open(field: &str, value: f64, low: f64, high: f64) -> Result<()> {
    if value > low && value < high {
        Ok(())
    } else {
        Err(Error::validation(
            field,
            value,
            format!("lie in ({low},{high})"),
        ))
    }
}

/// Checks `low < value <= high`.
pub(crate) fn check_half_open(field: &str, value: f64, low: f64, high: f64) -> Result<()> {
    if value > low && value <= high {
        Ok(())
    } else {
        Err(Error::validation(
            field,
            value,
            format!("lie in ({low},{high}]"),
        ))
    }
}

/// Checks `low <= value <= high`.
pub(crate) fn check_closed(field: &str, value: f64, low: f64, high: f64) -> Result<()> {
    if value >= low && value <= high {
        Ok(())
    } else {
        Err(Error::validation(
            field,
            value,
            format!("lie in [{low},{high}]"),
        ))
    }
}

pub(crate) fn check_positive(field: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::validation(field, value, "be positive and finite"))
    }
}

pub(crate) fn check_at_least(field: &str, value: f64, low: f64) -> Result<()> {
    if value >= low && value.is_finite() {
        Ok(())
    } else {
        Err(Error::validation(
            field,
            value,
            format!("be finite and at least {low}"),
        ))
    }
}
