use thiserror::Error;

use crate::atoms::WorldSet;
use crate::measures::Violation;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown proposition `{0}`")]
    UnknownProposition(String),

    #[error("values live on different world spaces")]
    SpaceMismatch,

    #[error("world {index} is outside a space of {len} worlds")]
    ForeignWorld { index: usize, len: usize },

    #[error("{0} worlds requested; at most {max} are supported", max = crate::atoms::MAX_WORLDS)]
    TooManyWorlds(usize),

    #[error("invalid atom space: {0}")]
    InvalidSpace(String),

    #[error("expected {expected} values, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid model: {}", render_violations(.0))]
    InvalidModel(Vec<Violation>),

    #[error("not a belief function: Möbius mass of {set} is {mass}")]
    NegativeMass { set: WorldSet, mass: Rational },

    #[error("set function must be 0 on the empty set and 1 on the whole space")]
    NotNormalized,

    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },

    #[error("construct not allowed in this language at byte {pos}: {message}")]
    WrongLanguage { pos: usize, message: String },

    #[error("normal form exceeds the cap of {0} clauses")]
    ClauseCap(usize),

    #[error("formula mentions {found} propositions; the cap is {cap}")]
    PropCap { found: usize, cap: usize },

    #[error("strict constraints cannot be optimized directly")]
    StrictInOptimize,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("assessment is incoherent (distinguished gamble {index})")]
    Incoherent { index: usize },

    #[error("document error: {0}")]
    Document(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// True for failures that indicate a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}

fn render_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
