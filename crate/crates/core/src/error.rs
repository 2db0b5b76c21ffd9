use thiserror::Error;

use crate::outside::QBlockKey;
use crate::structure::Label;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("label table has wrong dimensions: {0}")]
    DimensionMismatch(String),
    #[error("label {label} at ({row},{col}) is not below k={k}")]
    LabelOutOfRange { row: usize, col: usize, label: Label, k: usize },
    #[error("diagonal entry ({0},{0}) carries a label")]
    DiagonalLabeled(usize),
    #[error("off-diagonal entry ({0},{1}) has no label")]
    MissingLabel(usize, usize),
    #[error("invalid edge ({0},{1})")]
    InvalidEdge(usize, usize),
    #[error("arc list is not a tournament: {0}")]
    NotATournament(String),
    #[error("pair ({0},{0}) is not a pair of distinct vertices")]
    SameVertex(usize),
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("{what}: size {size} exceeds limit {limit}")]
    SizeLimitExceeded { what: &'static str, size: usize, limit: usize },
    #[error("structure is not prime")]
    NotPrime,
    #[error("the induced structure on X is not prime")]
    BaseNotPrime,
    #[error("Statement (S{0}) is only defined for odd k")]
    EvenK(usize),
    #[error("component {component} is not split between two q-blocks: {detail}")]
    NotQBipartite { component: usize, detail: String },
    #[error("edges of component {component} carry different pair classes")]
    InconsistentSC { component: usize },
    #[error("unknown block {0}")]
    UnknownBlock(String),
    #[error("hypotheses not satisfied: {0}")]
    HypothesesFailed(String),
    #[error("no partner found for outside vertex {0}")]
    NoPartner(usize),
    #[error("no non-critical pair in the outside set")]
    NoPair,
    #[error("inconsistent description bundle: {0}")]
    InconsistentBundle(String),
    #[error("pair ({0},{1}) is not determined by the description")]
    UnresolvedCase(usize, usize),
    #[error("invalid synthesis spec: {0}")]
    SpecInvalid(String),
    #[error("synthesized structure failed post-verification: {0}")]
    PostVerificationFailed(String),
    #[error("no prime structure found after {0} tries")]
    GiveUp(usize),
    #[error("block key {0:?} is not valid here")]
    BadKey(QBlockKey),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
