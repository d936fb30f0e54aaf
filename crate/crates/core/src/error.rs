use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("every amplitude is below 1e-15")]
    AllZero,
    #[error("bad qubit set {0:?}: expected a nonempty subset of {{1,2,3}} with at most two qubits")]
    BadQubitSet(Vec<usize>),
    #[error("bad qubit pair ({0}, {1}): expected two distinct qubits in 1..=3")]
    BadPair(usize, usize),
    #[error("operator is singular or annihilates the state (norm {0:e})")]
    SingularOp(f64),
    #[error("operator of kind {kind} fails its check (deviation {deviation:e})")]
    BadOperator { kind: &'static str, deviation: f64 },
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("invalid parameter: {0}")]
    BadParam(String),
    #[error("parameters outside the admissible domain: {0}")]
    BoundaryParams(String),
    #[error("canonical-form reduction failed: {0}")]
    DegenerateState(String),
    #[error("lambda4 = {lambda4} violates {constraint}")]
    OutOfInterval { lambda4: f64, constraint: &'static str },
    #[error("lambda0^2 = {0:e} is negative: inconsistent tangle target")]
    NegativeRadicand(f64),
    #[error("no admissible lambda4 for the requested tangles")]
    EmptyInterval,
    #[error("|t| = {t} lies outside the admissible side of the bound {bound}")]
    OutOfBound { t: f64, bound: f64 },
    #[error("negative discriminant {0:e} in the normalization constraint")]
    NegativeDiscriminant(f64),
    #[error("Kraus operators are not complete (deviation {0:e})")]
    IncompleteChannel(f64),
    #[error("parse error: {0}")]
    Parse(String),
}
