use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input: bad structure, bad instance, out-of-range element.
    #[error("input error: {0}")]
    Input(String),

    #[error("budget exceeded: {what} needs more than {limit}")]
    Budget { what: String, limit: u64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A KAI rule was applied where it is blocked; carries T_r(p) (1-based pebbles).
    #[error("rule not applicable, blocking set {blocking:?}")]
    NotApplicable { blocking: Vec<usize> },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
