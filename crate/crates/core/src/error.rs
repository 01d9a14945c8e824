use thiserror::Error;

use crate::graph::Vertex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex ({level},{column}) is not in the Euler graph")]
    InvalidVertex { level: u32, column: u32 },

    #[error("edge copy {copy} out of range for a bundle of size {bundle} at {at}")]
    InvalidCopy { at: Vertex, copy: u32, bundle: u32 },

    #[error("in-rank {rank} out of range for {target} (in-degree {degree})")]
    InvalidRank {
        target: Vertex,
        rank: u32,
        degree: u32,
    },

    #[error("the root vertex has no incoming edges")]
    RootHasNoInEdges,

    #[error("edge {index} starts at {found} but the path is at {expected}")]
    BrokenChain {
        index: usize,
        expected: Vertex,
        found: Vertex,
    },

    #[error("level {index} is beyond a path of length {len}")]
    IndexBeyondPath { index: usize, len: usize },

    #[error("paths have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("{what} needs {count} items, above the cap of {cap}")]
    TooLarge {
        what: &'static str,
        count: String,
        cap: u64,
    },

    #[error("path is maximal; the adic successor is undefined")]
    MaximalPath,

    #[error("path is minimal; the adic predecessor is undefined")]
    MinimalPath,

    #[error("orbit position {target} is outside 0..{size}")]
    OrbitOverflow { target: String, size: String },

    #[error("point {0} is outside [0,1)")]
    PointOutOfRange(String),

    #[error("non-positive weight {weight} on edge at {at}")]
    InvalidWeight { at: Vertex, weight: String },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}
