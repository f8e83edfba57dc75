use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("band gluing is non-orientable")]
    NonOrientable,
    #[error("unknown edge {0}")]
    UnknownEdge(usize),
    #[error("invalid rotation system: {0}")]
    InvalidRotation(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("invalid basepoint: vertex {0}, gap {1}")]
    InvalidBasepoint(usize, usize),
    #[error("{0} edges exceeds the cap of {1}")]
    TooManyEdges(usize, usize),
    #[error("d∘d is nonzero at ({0},{1})")]
    NotAComplex(i32, i32),
    #[error("homology group is trivial")]
    TrivialGroup,
    #[error("mixed parity in polynomial grading")]
    MixedParity,
    #[error("not a quasi-tree")]
    NotAQuasiTree,
    #[error("invalid PD code: {0}")]
    InvalidPd(String),
    #[error("move not applicable: {0}")]
    InapplicableMove(String),
    #[error("invalid edge order: {0}")]
    InvalidOrder(String),
}

pub type Result<T> = std::result::Result<T, Error>;
