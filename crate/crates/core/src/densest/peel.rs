use std::collections::BTreeSet;

use super::DensestResult;
use crate::error::{invalid, Result};
use crate::graph::{Density, Graph};

/// Greedy peeling: repeatedly delete a minimum-degree vertex (smallest index
/// on ties) and return the densest of the intermediate graphs. The result is
/// at least half the optimum density.
///
/// The degree queue is a `BTreeSet` keyed by `(degree, vertex)` so that the
/// tie-break is exact; cost is `O((n + m) log n)`.
pub fn charikar_peel(g: &Graph) -> Result<DensestResult> {
    let n = g.vertex_count();
    if g.is_directed() {
        return invalid("densest subgraph is defined on undirected graphs");
    }
    if n == 0 {
        return invalid("densest subgraph of a graph with no vertices");
    }
    if g.edge_count() == 0 {
        return Ok(DensestResult::in_source(vec![0], Density::from_integer(0)));
    }
    let adj = g.adjacency();
    let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut queue: BTreeSet<(usize, usize)> = (0..n).map(|v| (deg[v], v)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut edges = g.edge_count() as u64;
    let mut best = Density::new(edges, n as u64);
    let mut best_removed = 0;
    while let Some((_, v)) = queue.pop_first() {
        removed[v] = true;
        order.push(v);
        for &w in &adj[v] {
            if !removed[w] {
                queue.remove(&(deg[w], w));
                deg[w] -= 1;
                queue.insert((deg[w], w));
            }
        }
        edges -= deg[v] as u64;
        let remaining = (n - order.len()) as u64;
        if remaining > 0 {
            let d = Density::new(edges, remaining);
            if d > best {
                best = d;
                best_removed = order.len();
            }
        }
    }
    let mut gone = vec![false; n];
    for &v in &order[..best_removed] {
        gone[v] = true;
    }
    let vertices = (0..n).filter(|&v| !gone[v]).collect();
    Ok(DensestResult::in_source(vertices, best))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densest::exact::brute_force_densest;
    use crate::graph::families::*;

    #[test]
    fn finds_k4_next_to_pendant_path() {
        let r = charikar_peel(&k4_with_pendant_path()).unwrap();
        assert_eq!(r.vertices, vec![0, 1, 2, 3]);
        assert_eq!(r.density(), Density::new(3, 2));
    }

    #[test]
    fn regular_graphs_stay_whole() {
        for g in [cycle(9), complete(6), complete_bipartite(4, 4)] {
            let r = charikar_peel(&g).unwrap();
            assert_eq!(r.vertices.len(), g.vertex_count());
            assert_eq!(r.density(), g.density().unwrap());
        }
    }

    #[test]
    fn star_is_optimal() {
        let g = star(5);
        let r = charikar_peel(&g).unwrap();
        let opt = brute_force_densest(&g).unwrap();
        assert_eq!(opt.density(), Density::new(5, 6));
        assert_eq!(r.density(), opt.density());
    }

    #[test]
    fn edgeless_gives_single_vertex() {
        let r = charikar_peel(&Graph::empty(3, false)).unwrap();
        assert_eq!(
            (r.density(), r.vertices),
            (Density::from_integer(0), vec![0])
        );
    }

    #[test]
    fn reported_density_matches_vertex_set() {
        let g = Graph::from_edges(
            7,
            false,
            [
                (0, 1),
                (1, 2),
                (2, 0),
                (2, 3),
                (3, 4),
                (4, 5),
                (5, 6),
                (6, 4),
            ],
        )
        .unwrap();
        let r = charikar_peel(&g).unwrap();
        assert_eq!(g.density_of(&r.vertices).unwrap(), r.density());
    }
}
