use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("self-loop at vertex {0} is not allowed in a simple graph")]
    LoopRejected(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
    #[error("a graph needs at least one vertex")]
    NoVertices,
    #[error("vertex counts differ: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("{n} vertices exceeds the brute-force bound of {max}")]
    TooLarge { n: usize, max: usize },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("u^{k} differs from the identity by {residual:e}")]
    NotOrderK { k: usize, residual: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("|z| = {modulus}, expected 1")]
    NotUnitModulus { modulus: f64 },
    #[error("{what} is not unitary (residual {residual:e})")]
    NotUnitary { what: String, residual: f64 },
    #[error("not a magic unitary: {0}")]
    NotMagicUnitary(String),
    #[error("generator relation violated for (b, a, x) = ({b}, {a}, {x}), residual {residual:e}")]
    RelationViolated { b: usize, a: usize, x: usize, residual: f64 },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("matrix is not flat: entry ({row},{col}) has modulus {modulus}, expected {expected}")]
    NotFlat { row: usize, col: usize, modulus: f64, expected: f64 },
    #[error("index {index} out of range for {n} vertices")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("permutation is not an automorphism of the graph")]
    NotAutomorphism,
    #[error(
        "a graph on {n} vertices is out of scope, at least 3 are needed: the game algebra \
         of K2 is commutative (isomorphic to C(T) + C(T)), and the two-vertex empty graph is \
         not covered"
    )]
    TooSmall { n: usize },
    #[error("tolerances must be positive (eps_eq = {eps_eq}, eps_psd = {eps_psd})")]
    BadTolerance { eps_eq: f64, eps_psd: f64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
