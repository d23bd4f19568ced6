use crate::diagram::Violation;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid diagram: {}", describe(.0))]
    Invalid(Vec<Violation>),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("unknown edge index {0}")]
    UnknownEdge(usize),
    #[error("unknown arrow index {0}")]
    UnknownArrow(usize),
    #[error("vertex {0:?} is not a rupture vertex")]
    NotRupture(String),
    #[error("diagram has no rupture vertex")]
    NoRupture,
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("invalid brick: {0}")]
    InvalidBrick(String),
    #[error("diagram is not in normal form: {0}")]
    NotNormalForm(String),
    #[error("empty spectrum")]
    EmptySpectrum,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("edge {0} needs an exchange move before a direction can be chosen")]
    ExchangeRequired(String),
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

impl Error {
    /// True when the error signals a violated identity rather than bad input.
    pub fn is_inconsistency(&self) -> bool {
        matches!(self, Error::Inconsistency(_))
    }
}

fn describe(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
