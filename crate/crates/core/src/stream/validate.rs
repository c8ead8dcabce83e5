use std::collections::HashSet;
use std::fmt;

use super::{Op, StreamEvent};
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    DeleteAbsent,
    DuplicateInsert,
}

/// First event that breaks the strict-turnstile discipline.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Violation {
    pub index: usize,
    pub kind: ViolationKind,
    pub event: StreamEvent,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ViolationKind::DeleteAbsent => "deletes an absent edge",
            ViolationKind::DuplicateInsert => "inserts an edge that is already present",
        };
        write!(
            f,
            "event {} ({} {}) {what}",
            self.index, self.event.u, self.event.v
        )
    }
}

impl std::error::Error for Violation {}

/// Simulates the live edge set and reports the first delete of an absent
/// edge or insert of a present one.
pub fn validate_strict_turnstile(
    events: &[StreamEvent],
    directed: bool,
) -> std::result::Result<(), Violation> {
    let mut live = HashSet::new();
    for (index, ev) in events.iter().enumerate() {
        let e = ev.edge(directed);
        let ok = match ev.op {
            Op::Insert => live.insert(e),
            Op::Delete => live.remove(&e),
        };
        if !ok {
            let kind = match ev.op {
                Op::Insert => ViolationKind::DuplicateInsert,
                Op::Delete => ViolationKind::DeleteAbsent,
            };
            return Err(Violation {
                index,
                kind,
                event: *ev,
            });
        }
    }
    Ok(())
}

/// The graph of edges live at the end of a valid stream.
pub fn replay(n: usize, directed: bool, events: &[StreamEvent]) -> Result<Graph> {
    validate_strict_turnstile(events, directed).map_err(|v| Error::Format(v.to_string()))?;
    let mut live = HashSet::new();
    for ev in events {
        match ev.op {
            Op::Insert => live.insert(ev.edge(directed)),
            Op::Delete => live.remove(&ev.edge(directed)),
        };
    }
    Graph::from_edges(n, directed, live.into_iter().map(|e| (e.u, e.v)))
}
