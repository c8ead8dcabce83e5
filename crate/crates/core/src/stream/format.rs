//! Plain-text event streams.
//!
//! ```text
//! # comments start with '#'
//! n <count> [directed]
//! + <u> <v>
//! - <u> <v>
//! ```
//!
//! The header must be the first non-comment line. Vertex ids are decimal and
//! lie in `[0, count)`; undirected events are stored with `u < v`.

use std::fmt::Write as _;
use std::io::BufRead;

use super::{Op, StreamEvent};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stream {
    pub n: usize,
    pub directed: bool,
    pub events: Vec<StreamEvent>,
}

fn parse_err<T>(line: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        message: message.into(),
    })
}

fn parse_header(line_no: usize, fields: &[&str]) -> Result<(usize, bool)> {
    match fields {
        ["n", count] | ["n", count, "directed"] => {
            let n = count
                .parse::<usize>()
                .or_else(|_| parse_err(line_no, format!("bad vertex count '{count}'")))?;
            Ok((n, fields.len() == 3))
        }
        _ => Err(Error::Format(format!(
            "line {line_no}: expected header 'n <count> [directed]' before any event"
        ))),
    }
}

fn parse_vertex(line_no: usize, token: &str, n: usize) -> Result<usize> {
    let v = token
        .parse::<usize>()
        .or_else(|_| parse_err(line_no, format!("bad vertex id '{token}'")))?;
    if v >= n {
        return parse_err(line_no, format!("vertex {v} out of range for n = {n}"));
    }
    Ok(v)
}

pub fn parse_stream<R: BufRead>(source: R) -> Result<Stream> {
    let mut header: Option<(usize, bool)> = None;
    let mut events = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let line = line?;
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        let Some((n, directed)) = header else {
            header = Some(parse_header(line_no, &fields)?);
            continue;
        };
        let op = match fields[0] {
            "+" => Op::Insert,
            "-" => Op::Delete,
            other => return parse_err(line_no, format!("expected '+' or '-', found '{other}'")),
        };
        if fields.len() != 3 {
            return parse_err(line_no, "expected '<op> <u> <v>'");
        }
        let u = parse_vertex(line_no, fields[1], n)?;
        let v = parse_vertex(line_no, fields[2], n)?;
        if u == v {
            return parse_err(line_no, format!("self-loop on vertex {u}"));
        }
        let e = crate::graph::Edge::new(u, v, directed);
        events.push(StreamEvent { op, u: e.u, v: e.v });
    }
    let (n, directed) = header.ok_or_else(|| Error::Format("missing 'n <count>' header".into()))?;
    Ok(Stream {
        n,
        directed,
        events,
    })
}

pub fn serialize_stream(stream: &Stream) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "n {}{}",
        stream.n,
        if stream.directed { " directed" } else { "" }
    );
    for ev in &stream.events {
        let op = match ev.op {
            Op::Insert => '+',
            Op::Delete => '-',
        };
        let _ = writeln!(out, "{op} {} {}", ev.u, ev.v);
    }
    out
}
