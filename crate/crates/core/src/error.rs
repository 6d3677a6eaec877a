use alloc::string::String;
use alloc::vec::Vec;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LrbError {
    #[error("malformed semigroup: {0}")]
    Malformed(String),
    #[error("LRB axiom `{axiom}` fails at {witness:?}")]
    AxiomViolation {
        axiom: &'static str,
        witness: Vec<usize>,
    },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unknown element key `{0}`")]
    UnknownKey(String),
    #[error("size guard exceeded: {what} needs {needed}, limit is {limit}")]
    SizeGuard {
        what: &'static str,
        needed: usize,
        limit: usize,
    },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("check falsified: {0}")]
    Falsified(String),
}
