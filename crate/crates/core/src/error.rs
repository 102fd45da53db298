use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A named input field violates its constraint.
    #[error("invalid `{field}`: {reason}")]
    InvalidField { field: String, reason: String },

    #[error("length mismatch: `{field}` has {got} entries, expected {expected}")]
    LengthMismatch {
        field: &'static str,
        got: usize,
        expected: usize,
    },

    #[error("user count {0} exceeds the supported maximum of {max}", max = crate::MAX_USERS)]
    TooManyUsers(usize),

    #[error("at least one user is required")]
    NoUsers,

    #[error("subset must be nonempty and reference users 0..{users}")]
    InvalidSubset { users: usize },

    #[error("operation requires exactly {expected} users, got {got}")]
    UserCount { expected: usize, got: usize },

    #[error("grid of {points} points exceeds the limit of {limit}")]
    GridTooLarge { points: f64, limit: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    pub(crate) fn field(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidField {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
