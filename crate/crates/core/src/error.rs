use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("undeclared generator `{0}`")]
    UndeclaredGenerator(String),

    #[error("relator {0} reduces to the empty word")]
    EmptyRelator(usize),

    #[error("zero image for generator `{0}`")]
    ZeroImage(String),

    #[error("not a character: relator {relator} evaluates to {value}")]
    InvalidCharacter { relator: usize, value: String },

    #[error("not a cocycle: relator {relator} evaluates to {value}")]
    InvalidCocycle { relator: usize, value: String },

    #[error("singular matrix")]
    SingularMatrix,

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    /// Stable machine-readable name.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::FieldMismatch(..) => "field-mismatch",
            Error::DivisionByZero => "division-by-zero",
            Error::InvalidField(_) => "invalid-field",
            Error::Unsupported(_) => "unsupported",
            Error::Parse { .. } => "parse",
            Error::UndeclaredGenerator(_) => "undeclared-generator",
            Error::EmptyRelator(_) => "empty-relator",
            Error::ZeroImage(_) => "zero-image",
            Error::InvalidCharacter { .. } => "invalid-character",
            Error::InvalidCocycle { .. } => "invalid-cocycle",
            Error::SingularMatrix => "singular-matrix",
            Error::BudgetExceeded(_) => "budget-exceeded",
            Error::Precondition(_) => "precondition",
            Error::InvalidInput(_) => "invalid-input",
        }
    }

    /// Errors that reject well-formed input on mathematical grounds, as
    /// opposed to malformed requests.
    pub fn is_mathematical(&self) -> bool {
        matches!(
            self,
            Error::DivisionByZero
                | Error::ZeroImage(_)
                | Error::InvalidCharacter { .. }
                | Error::InvalidCocycle { .. }
                | Error::SingularMatrix
                | Error::Precondition(_)
                | Error::BudgetExceeded(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
