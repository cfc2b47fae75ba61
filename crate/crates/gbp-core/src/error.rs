//! Error type shared across the toolkit.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A line of an input file could not be parsed.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// The input describes a graph with no vertices.
    #[error("empty graph: input has no vertices")]
    EmptyGraph,

    /// A search or table exceeded its configured budget.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// An operation was called with an unusable parameter.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A solver assignment could not be decoded into a burning sequence.
    #[error("decode error: {0}")]
    Decode(String),

    /// COV-ILP objective below n-1: no burning sequence of the probed length.
    #[error("no burning sequence of the requested length")]
    NoBurningSequence,

    /// A satisfaction model has no feasible assignment.
    #[error("model is infeasible")]
    Infeasible,

    /// An external solver invocation failed.
    #[error("backend failure: {msg}")]
    Backend { msg: String },

    /// A solver output file did not follow the expected `name value` format.
    #[error("solution format error: {0}")]
    Format(String),

    /// A vertex label was not found in the graph.
    #[error("unknown data: {0}")]
    Data(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
