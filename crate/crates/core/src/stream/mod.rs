//! Edge streams: the event type, the text format, strict-turnstile
//! validation and synthetic generators.

mod format;
mod generate;
mod validate;

pub use format::{parse_stream, serialize_stream, Stream};
pub use generate::{generate_stream, Generated, StreamSpec};
pub use validate::{replay, validate_strict_turnstile, Violation, ViolationKind};

use crate::graph::{Edge, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Op {
    Insert,
    Delete,
}

impl Op {
    pub fn delta(self) -> i64 {
        match self {
            Op::Insert => 1,
            Op::Delete => -1,
        }
    }
}

/// Insertion or deletion of one edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StreamEvent {
    pub op: Op,
    pub u: VertexId,
    pub v: VertexId,
}

impl StreamEvent {
    pub fn insert(u: VertexId, v: VertexId) -> Self {
        StreamEvent {
            op: Op::Insert,
            u,
            v,
        }
    }

    pub fn delete(u: VertexId, v: VertexId) -> Self {
        StreamEvent {
            op: Op::Delete,
            u,
            v,
        }
    }

    pub fn edge(&self, directed: bool) -> Edge {
        Edge::new(self.u, self.v, directed)
    }
}
