use thiserror::Error;

use crate::network::{NodeId, StepTrace};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("layer count must be at least 1 (got {0})")]
    InvalidLayerCount(usize),

    #[error("layer count {m} is too large (at most {max} supported here)")]
    TooLarge { m: usize, max: usize },

    #[error("unit training time must be at least 1 (got {0})")]
    InvalidUnitTime(u32),

    #[error("dimension mismatch: expected {expected} {what}, found {found}")]
    Dimension {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("state vector of length {0} does not describe a full binary tree (expected 2^m - 1)")]
    NotATree(usize),

    #[error("node {node} does not exist in a {m}-layer network")]
    NodeOutOfRange { node: NodeId, m: usize },

    #[error("leaf index {index} is out of range 1..={leaves}")]
    IndexOutOfRange { index: usize, leaves: usize },

    #[error("input {index}: {source}")]
    AtInput {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("plan was built for m={plan_m}, s={plan_s} but the network has m={m}, s={s}")]
    PlanMismatch {
        plan_m: usize,
        plan_s: u32,
        m: usize,
        s: u32,
    },

    #[error("directive {directive}: node {node} is {found}, plan expected {expected}")]
    UnexpectedState {
        directive: usize,
        node: NodeId,
        expected: crate::gate::GateState,
        found: crate::gate::GateState,
    },

    #[error("directive {directive}: node {node} changed state {flips} times during its block (expected exactly once, on its last step)")]
    FlipFailed {
        directive: usize,
        node: NodeId,
        flips: usize,
        traces: Box<Vec<StepTrace>>,
    },

    #[error("cannot parse {what}: {detail}")]
    Parse { what: &'static str, detail: String },
}
