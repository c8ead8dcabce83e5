//! Seeded synthetic streams. Every generated stream is strict turnstile and
//! replays to the graph returned alongside it.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::{index, SliceRandom};
use rand::Rng;

use super::StreamEvent;
use crate::error::{invalid, Error, Result};
use crate::graph::{Edge, Graph};
use crate::seed;

#[derive(Clone, Debug, PartialEq)]
pub enum StreamSpec {
    /// `G(n, prob)`, inserted in random order.
    ErdosRenyi { n: usize, prob: f64, directed: bool },
    /// `G(n, prob)` united with a clique on `clique` random vertices.
    PlantedDense { n: usize, prob: f64, clique: usize },
    /// Random inserts and deletes hovering around `live` live edges.
    Churn {
        n: usize,
        events: usize,
        live: usize,
    },
}

#[derive(Clone, Debug)]
pub struct Generated {
    pub n: usize,
    pub directed: bool,
    pub events: Vec<StreamEvent>,
    /// The live edge set after the last event.
    pub graph: Graph,
    /// Planted clique members, ascending; empty for other kinds.
    pub planted: Vec<usize>,
}

impl StreamSpec {
    pub fn n(&self) -> usize {
        match *self {
            StreamSpec::ErdosRenyi { n, .. }
            | StreamSpec::PlantedDense { n, .. }
            | StreamSpec::Churn { n, .. } => n,
        }
    }

    pub fn directed(&self) -> bool {
        matches!(self, StreamSpec::ErdosRenyi { directed: true, .. })
    }

    fn validate(&self) -> Result<()> {
        let n = self.n();
        if n < 2 {
            return invalid(format!("generators need at least 2 vertices, got {n}"));
        }
        match *self {
            StreamSpec::ErdosRenyi { prob, .. } | StreamSpec::PlantedDense { prob, .. }
                if !(0.0..=1.0).contains(&prob) =>
            {
                invalid(format!("edge probability {prob} outside [0, 1]"))
            }
            StreamSpec::PlantedDense { clique, .. } if clique > n => invalid(format!(
                "clique of size {clique} does not fit in {n} vertices"
            )),
            StreamSpec::Churn { live, .. } if live > n * (n - 1) / 2 => invalid(format!(
                "{live} live edges exceed the {} possible edges",
                n * (n - 1) / 2
            )),
            _ => Ok(()),
        }
    }
}

fn er_edges(n: usize, prob: f64, directed: bool, rng: &mut impl Rng) -> Vec<Edge> {
    let mut edges = Vec::new();
    for u in 0..n {
        let start = if directed { 0 } else { u + 1 };
        for v in start..n {
            if v != u && rng.random_bool(prob) {
                edges.push(Edge { u, v });
            }
        }
    }
    edges
}

pub fn generate_stream(spec: &StreamSpec, seed: u64) -> Result<Generated> {
    spec.validate()?;
    let mut rng = seed::rng(seed, seed::TAG_GENERATOR);
    let n = spec.n();
    let directed = spec.directed();
    let mut planted = Vec::new();
    let events = match *spec {
        StreamSpec::ErdosRenyi { prob, .. } => {
            let mut edges = er_edges(n, prob, directed, &mut rng);
            edges.shuffle(&mut rng);
            edges
                .into_iter()
                .map(|e| StreamEvent::insert(e.u, e.v))
                .collect()
        }
        StreamSpec::PlantedDense { prob, clique, .. } => {
            let mut edges = er_edges(n, prob, false, &mut rng);
            planted = index::sample(&mut rng, n, clique).into_vec();
            planted.sort_unstable();
            for (i, &u) in planted.iter().enumerate() {
                for &v in &planted[i + 1..] {
                    edges.push(Edge { u, v });
                }
            }
            edges.sort_unstable();
            edges.dedup();
            edges.shuffle(&mut rng);
            edges
                .into_iter()
                .map(|e| StreamEvent::insert(e.u, e.v))
                .collect()
        }
        StreamSpec::Churn { events, live, .. } => churn(n, events, live, &mut rng),
    };
    let graph = super::replay(n, directed, &events)?;
    Ok(Generated {
        n,
        directed,
        events,
        graph,
        planted,
    })
}

fn churn(n: usize, count: usize, target: usize, rng: &mut impl Rng) -> Vec<StreamEvent> {
    // Live edges in a vector with an index map for O(1) random deletion.
    let mut live: Vec<Edge> = Vec::new();
    let mut position: HashMap<Edge, usize> = HashMap::new();
    let mut events = Vec::with_capacity(count);
    let total = n * (n - 1) / 2;
    for _ in 0..count {
        let insert_prob = if live.len() < target { 0.7 } else { 0.3 };
        let insert = live.is_empty() || (live.len() < total && rng.random_bool(insert_prob));
        if insert {
            let e = loop {
                let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
                if u != v {
                    let e = Edge::new(u, v, false);
                    if !position.contains_key(&e) {
                        break e;
                    }
                }
            };
            position.insert(e, live.len());
            live.push(e);
            events.push(StreamEvent::insert(e.u, e.v));
        } else {
            let i = rng.random_range(0..live.len());
            let e = live.swap_remove(i);
            position.remove(&e);
            if i < live.len() {
                position.insert(live[i], i);
            }
            events.push(StreamEvent::delete(e.u, e.v));
        }
    }
    events
}

impl FromStr for StreamSpec {
    type Err = Error;

    /// `er:n=100,p=0.1[,directed]`, `planted:n=500,p=0.05,clique=30`,
    /// `churn:n=50,events=10000,live=200`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::InvalidArgument(format!("generator '{s}': {msg}"));
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut fields: HashMap<&str, &str> = HashMap::new();
        for part in rest.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = part.split_once('=').unwrap_or((part, "1"));
            fields.insert(k.trim(), v.trim());
        }
        let mut take = |key: &str| {
            fields
                .remove(key)
                .ok_or_else(|| bad(format!("missing '{key}'")))
        };
        fn num<T: FromStr>(key: &str, v: &str) -> std::result::Result<T, String> {
            v.parse()
                .map_err(|_| format!("bad value '{v}' for '{key}'"))
        }
        let spec = match kind {
            "er" => StreamSpec::ErdosRenyi {
                n: num("n", take("n")?).map_err(bad)?,
                prob: num("p", take("p")?).map_err(bad)?,
                directed: take("directed").map(|v| v != "0").unwrap_or(false),
            },
            "planted" => StreamSpec::PlantedDense {
                n: num("n", take("n")?).map_err(bad)?,
                prob: num("p", take("p")?).map_err(bad)?,
                clique: num("clique", take("clique")?).map_err(bad)?,
            },
            "churn" => {
                let n: usize = num("n", take("n")?).map_err(bad)?;
                StreamSpec::Churn {
                    n,
                    events: num("events", take("events")?).map_err(bad)?,
                    live: match take("live") {
                        Ok(v) => num("live", v).map_err(bad)?,
                        Err(_) => 2 * n,
                    },
                }
            }
            other => return Err(bad(format!("unknown kind '{other}'"))),
        };
        if let Some(k) = fields.keys().next() {
            return Err(bad(format!("unknown parameter '{k}'")));
        }
        Ok(spec)
    }
}

impl fmt::Display for StreamSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StreamSpec::ErdosRenyi { n, prob, directed } => {
                write!(
                    f,
                    "er:n={n},p={prob}{}",
                    if *directed { ",directed" } else { "" }
                )
            }
            StreamSpec::PlantedDense { n, prob, clique } => {
                write!(f, "planted:n={n},p={prob},clique={clique}")
            }
            StreamSpec::Churn { n, events, live } => {
                write!(f, "churn:n={n},events={events},live={live}")
            }
        }
    }
}
