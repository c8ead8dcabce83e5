//! Simple graphs on dense vertex ids `0..n`, edge identifiers and densities.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use num_rational::Ratio;
use num_traits::ToPrimitive;

use crate::error::{invalid, Result};

pub type VertexId = usize;

/// Exact density `|E| / |V|`.
pub type Density = Ratio<u64>;

pub fn density_f64(d: &Density) -> f64 {
    d.to_f64().unwrap_or(f64::NAN)
}

/// An edge. Undirected edges are stored with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
}

impl Edge {
    /// Builds an edge, canonicalizing the endpoint order when `directed` is false.
    pub fn new(u: VertexId, v: VertexId, directed: bool) -> Self {
        if directed || u < v {
            Edge { u, v }
        } else {
            Edge { u: v, v: u }
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.u, self.v)
    }
}

/// Label of a potential edge in `[0, n^2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u64);

fn check_pair(u: VertexId, v: VertexId, n: usize) -> Result<()> {
    if u == v {
        return invalid(format!("self-loop on vertex {u}"));
    }
    if u >= n || v >= n {
        return invalid(format!("edge ({u}, {v}) out of range for n = {n}"));
    }
    Ok(())
}

/// `min(u,v)*n + max(u,v)` for undirected pairs, `u*n + v` for directed ones.
pub fn encode_edge(u: VertexId, v: VertexId, n: usize, directed: bool) -> Result<EdgeId> {
    check_pair(u, v, n)?;
    let e = Edge::new(u, v, directed);
    Ok(EdgeId(e.u as u64 * n as u64 + e.v as u64))
}

pub fn decode_edge(id: EdgeId, n: usize, directed: bool) -> Result<Edge> {
    let n64 = n as u64;
    if n == 0 || id.0 >= n64 * n64 {
        return invalid(format!("edge id {} out of range for n = {n}", id.0));
    }
    let (u, v) = ((id.0 / n64) as usize, (id.0 % n64) as usize);
    if u == v || (!directed && u > v) {
        return invalid(format!("edge id {} is not a canonical edge label", id.0));
    }
    Ok(Edge { u, v })
}

/// A simple graph with vertex set `0..n`. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    directed: bool,
    /// Sorted, without duplicates.
    edges: Vec<Edge>,
}

impl Graph {
    pub fn empty(n: usize, directed: bool) -> Self {
        Graph {
            n,
            directed,
            edges: Vec::new(),
        }
    }

    /// Builds a graph from endpoint pairs. Self-loops, out-of-range endpoints
    /// and repeated edges are rejected.
    pub fn from_edges<I>(n: usize, directed: bool, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut edges = Vec::new();
        for (u, v) in pairs {
            check_pair(u, v, n)?;
            edges.push(Edge::new(u, v, directed));
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return invalid(format!(
                "edge ({}, {}) appears more than once",
                w[0].u, w[0].v
            ));
        }
        Ok(Graph { n, directed, edges })
    }

    /// Builds a graph from edges already known to be canonical and distinct.
    pub(crate) fn from_canonical(n: usize, directed: bool, mut edges: Vec<Edge>) -> Self {
        edges.sort_unstable();
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        Graph { n, directed, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn contains(&self, u: VertexId, v: VertexId) -> bool {
        u != v
            && self
                .edges
                .binary_search(&Edge::new(u, v, self.directed))
                .is_ok()
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        let n = self.n as u64;
        self.edges
            .iter()
            .map(move |e| EdgeId(e.u as u64 * n + e.v as u64))
    }

    /// Total degree (in + out for directed graphs).
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
        deg
    }

    /// Neighbor lists, ignoring direction.
    pub fn adjacency(&self) -> Vec<Vec<VertexId>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        adj
    }

    /// Out-neighbor lists; equals `adjacency` for undirected graphs.
    pub fn out_adjacency(&self) -> Vec<Vec<VertexId>> {
        if !self.directed {
            return self.adjacency();
        }
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.u].push(e.v);
        }
        adj
    }

    pub fn density(&self) -> Result<Density> {
        if self.n == 0 {
            return invalid("density of a graph with no vertices");
        }
        Ok(Density::new(self.edges.len() as u64, self.n as u64))
    }

    /// Number of edges with both endpoints in `member`.
    pub fn edges_within(&self, member: &[bool]) -> usize {
        self.edges
            .iter()
            .filter(|e| member[e.u] && member[e.v])
            .count()
    }

    /// Density of the subgraph induced on `vertices` without materializing it.
    pub fn density_of(&self, vertices: &[VertexId]) -> Result<Density> {
        let member = self.membership(vertices)?;
        let k = member.iter().filter(|&&b| b).count();
        if k == 0 {
            return invalid("density of an empty vertex set");
        }
        Ok(Density::new(self.edges_within(&member) as u64, k as u64))
    }

    fn membership(&self, vertices: &[VertexId]) -> Result<Vec<bool>> {
        let mut member = vec![false; self.n];
        for &v in vertices {
            if v >= self.n {
                return invalid(format!("vertex {v} not in graph with n = {}", self.n));
            }
            member[v] = true;
        }
        Ok(member)
    }

    /// `G[U]` reindexed to `0..|U|`. Vertex `i` of the result is `mapping[i]`
    /// of the source; `mapping` is sorted ascending.
    pub fn induced_subgraph(&self, vertices: &[VertexId]) -> Result<InducedSubgraph> {
        let member = self.membership(vertices)?;
        let mapping: Vec<VertexId> = (0..self.n).filter(|&v| member[v]).collect();
        if mapping.is_empty() {
            return invalid("induced subgraph on an empty vertex set");
        }
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in mapping.iter().enumerate() {
            index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| member[e.u] && member[e.v])
            .map(|e| Edge::new(index[e.u], index[e.v], self.directed))
            .collect();
        Ok(InducedSubgraph {
            graph: Graph::from_canonical(mapping.len(), self.directed, edges),
            mapping,
        })
    }

    /// Spanning subgraph keeping only the edges for which `keep` holds.
    pub fn spanning_subgraph(&self, mut keep: impl FnMut(&Edge) -> bool) -> Graph {
        Graph {
            n: self.n,
            directed: self.directed,
            edges: self.edges.iter().copied().filter(|e| keep(e)).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct InducedSubgraph {
    pub graph: Graph,
    pub mapping: Vec<VertexId>,
}

/// Maps arbitrary external vertex labels onto dense ids in first-seen order.
#[derive(Clone, Debug, Default)]
pub struct Relabeler<L: Hash + Eq + Clone> {
    ids: HashMap<L, VertexId>,
    labels: Vec<L>,
}

impl<L: Hash + Eq + Clone> Relabeler<L> {
    pub fn new() -> Self {
        Relabeler {
            ids: HashMap::new(),
            labels: Vec::new(),
        }
    }

    pub fn id(&mut self, label: &L) -> VertexId {
        if let Some(&id) = self.ids.get(label) {
            return id;
        }
        let id = self.labels.len();
        self.ids.insert(label.clone(), id);
        self.labels.push(label.clone());
        id
    }

    pub fn label(&self, id: VertexId) -> Option<&L> {
        self.labels.get(id)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Small named graphs used by tests and examples.
pub mod families {
    use super::*;

    pub fn complete(n: usize) -> Graph {
        let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::from_edges(n, false, pairs).expect("valid complete graph")
    }

    pub fn complete_digraph(n: usize) -> Graph {
        let pairs = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)));
        Graph::from_edges(n, true, pairs).expect("valid complete digraph")
    }

    pub fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, false, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
    }

    pub fn path(n: usize) -> Graph {
        Graph::from_edges(n, false, (1..n).map(|i| (i - 1, i))).expect("valid path")
    }

    pub fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, false, (1..=leaves).map(|i| (0, i))).expect("valid star")
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let pairs = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)));
        Graph::from_edges(a + b, false, pairs).expect("valid complete bipartite graph")
    }

    /// K4 on `0..4` with a pendant path `3-4-5-6`.
    pub fn k4_with_pendant_path() -> Graph {
        let mut pairs: Vec<_> = (0..4)
            .flat_map(|u| (u + 1..4).map(move |v| (u, v)))
            .collect();
        pairs.extend([(3, 4), (4, 5), (5, 6)]);
        Graph::from_edges(7, false, pairs).expect("valid graph")
    }
}
