use std::fmt;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse classification used to pick CLI exit codes and HTTP status codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Caller-supplied parameters or data failed validation.
    Validation,
    /// Reading, writing or decoding external data failed.
    Io,
    /// A bug or an unexpected internal condition.
    Internal,
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid value for `{field}`: {message}")]
    InvalidParameter { field: String, message: String },

    #[error("unknown deficiency kind `{0}`")]
    UnknownDeficiency(String),

    #[error("unknown operator `{0}`")]
    UnknownOperator(String),

    #[error("unknown parameter `{param}` for operator `{op}`")]
    UnknownParameter { op: String, param: String },

    #[error("unknown layout `{0}`")]
    UnknownLayout(String),

    #[error("{what}: expected {expected_w}x{expected_h}, got {actual_w}x{actual_h}")]
    DimensionMismatch {
        what: &'static str,
        expected_w: u32,
        expected_h: u32,
        actual_w: u32,
        actual_h: u32,
    },

    #[error("`{0}` requires a deficiency profile")]
    MissingProfile(String),

    #[error("nothing to compose")]
    EmptyInput,

    #[error(
        "plate radii {min}..{max} px reached only {achieved:.1}% coverage (need {required:.0}%)"
    )]
    Coverage {
        min: f64,
        max: f64,
        achieved: f64,
        required: f64,
    },

    #[error("recipe step {index}: {source}")]
    Step {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("PNG decode failed: {0}")]
    Decode(String),

    #[error("PNG encode failed: {0}")]
    Encode(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(field: impl Into<String>, message: impl fmt::Display) -> Self {
        Error::InvalidParameter {
            field: field.into(),
            message: message.to_string(),
        }
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Step { source, .. } => source.kind(),
            Error::Decode(_) | Error::Io(_) => ErrorKind::Io,
            Error::Encode(_) => ErrorKind::Internal,
            _ => ErrorKind::Validation,
        }
    }

    /// Stable machine-readable reason code. The CLI and the service report
    /// the same code for the same failure.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::UnknownDeficiency(_) => "unknown_deficiency",
            Error::UnknownOperator(_) => "unknown_operator",
            Error::UnknownParameter { .. } => "unknown_parameter",
            Error::UnknownLayout(_) => "unknown_layout",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::MissingProfile(_) => "missing_profile",
            Error::EmptyInput => "empty_input",
            Error::Coverage { .. } => "insufficient_coverage",
            Error::Step { source, .. } => source.code(),
            Error::Decode(_) => "decode_failed",
            Error::Encode(_) => "encode_failed",
            Error::Io(_) => "io",
        }
    }

    /// Name of the offending input field, when there is one.
    pub fn field(&self) -> Option<String> {
        match self {
            Error::InvalidParameter { field, .. } => Some(field.clone()),
            Error::UnknownDeficiency(_) => Some("profile.kind".into()),
            Error::UnknownOperator(_) => Some("recipe.op".into()),
            Error::UnknownParameter { param, .. } => Some(format!("recipe.params.{param}")),
            Error::UnknownLayout(_) => Some("layout".into()),
            Error::MissingProfile(_) => Some("profile".into()),
            Error::Step { index, source } => Some(match source.field() {
                Some(f) => format!("recipe[{index}].{f}"),
                None => format!("recipe[{index}]"),
            }),
            Error::Decode(_) => Some("image".into()),
            _ => None,
        }
    }
}
