use secav_core::derivation::ErrorCode;
use secav_core::natded::NdError;
use secav_core::script::ScriptError;
use secav_core::sequent::RuleError;
use secav_core::syntax::{Name, ParseError};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum SessionError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("malformed rule: {0}")]
    RuleText(#[from] ScriptError),
    #[error(transparent)]
    Sequent(#[from] RuleError),
    #[error(transparent)]
    NaturalDeduction(#[from] NdError),
    #[error("no such {what}: {index}")]
    BadIndex { what: &'static str, index: usize },
    #[error("a {expected} rule cannot be applied in a {found} session")]
    WrongSystem { expected: &'static str, found: &'static str },
    #[error("`{0}` is reserved for generated constants")]
    ReservedName(Name),
    #[error("invalid session file: {0}")]
    Format(String),
    #[error("unknown assignment `{0}`")]
    UnknownAssignment(String),
    #[error("assignment `{0}` already exists")]
    DuplicateAssignment(String),
    #[error("the session does not match assignment `{0}`")]
    AssignmentMismatch(String),
}

impl SessionError {
    /// Stable name of the error; kernel errors report the kernel's own code.
    pub fn code(&self) -> &'static str {
        match self {
            SessionError::Parse(_) | SessionError::RuleText(_) => "ParseError",
            SessionError::Sequent(e) => e.code(),
            SessionError::NaturalDeduction(e) => e.code(),
            SessionError::BadIndex { .. } => "BadIndex",
            SessionError::WrongSystem { .. } => "WrongSystem",
            SessionError::ReservedName(_) => "ReservedName",
            SessionError::Format(_) => "FormatError",
            SessionError::UnknownAssignment(_) => "UnknownAssignment",
            SessionError::DuplicateAssignment(_) => "DuplicateAssignment",
            SessionError::AssignmentMismatch(_) => "AssignmentMismatch",
        }
    }

    /// True for errors raised by a kernel refusing a rule.
    pub fn is_kernel(&self) -> bool {
        matches!(self, SessionError::Sequent(_) | SessionError::NaturalDeduction(_))
    }
}
