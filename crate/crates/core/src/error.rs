use thiserror::Error;

use crate::syntax::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Ill-formed input: unknown names, duplicate declarations, bad models.
    #[error("structural error: {0}")]
    Structural(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    /// A configured guard was exceeded.
    #[error("resource limit exceeded: {what} ({actual} > {limit})")]
    Resource {
        what: &'static str,
        limit: usize,
        actual: usize,
    },
    /// An operation was called outside its contract.
    #[error("contract violation: {0}")]
    Contract(String),
}

impl Error {
    pub fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub(crate) fn guard(what: &'static str, limit: usize, actual: usize) -> Result<()> {
        if actual > limit {
            Err(Error::Resource {
                what,
                limit,
                actual,
            })
        } else {
            Ok(())
        }
    }
}
