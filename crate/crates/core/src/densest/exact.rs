//! Exact densest subgraph: max-flow binary search over candidate densities,
//! plus a brute-force enumerator for tiny graphs.

use super::flow::FlowNetwork;
use super::DensestResult;
use crate::error::{invalid, Error, Result};
use crate::graph::{Density, Graph, VertexId};

pub const FLOW_VERTEX_LIMIT: usize = 5000;
pub const BRUTE_FORCE_VERTEX_LIMIT: usize = 20;

/// Goldberg's network for `max_S b*e(S) - a*|S|`: the minimum cut equals
/// `b*m*n + 2*(a*|S| - b*e(S))` for source side `S`. `forced` vertices are
/// pinned to the source side.
fn density_network(g: &Graph, a: i64, b: i64, forced: Option<VertexId>) -> (FlowNetwork, i64) {
    let n = g.vertex_count();
    let m = g.edge_count() as i64;
    let (s, t) = (n, n + 1);
    let deg = g.degrees();
    let mut net = FlowNetwork::new(n + 2);
    let big = b * m * n as i64 + 1;
    for (v, &dv) in deg.iter().enumerate() {
        let src = if forced == Some(v) { big } else { b * m };
        net.add_edge(s, v, src, 0);
        net.add_edge(v, t, b * m + 2 * a - b * dv as i64, 0);
    }
    for e in g.edges() {
        net.add_edge(e.u, e.v, b, b);
    }
    (net, b * m * n as i64)
}

/// The smallest `S` maximizing `b*e(S) - a*|S|`, if that maximum is positive.
fn denser_than(g: &Graph, a: i64, b: i64) -> Option<Vec<VertexId>> {
    let n = g.vertex_count();
    let (mut net, empty_cut) = density_network(g, a, b, None);
    if net.max_flow(n, n + 1) >= empty_cut {
        return None;
    }
    let side = net.source_side(n);
    Some((0..n).filter(|&v| side[v]).collect())
}

/// Ordering used to choose among equally dense sets: smaller first, then
/// lexicographically smaller.
fn prefer(candidate: &[VertexId], incumbent: &[VertexId]) -> bool {
    (candidate.len(), candidate) < (incumbent.len(), incumbent)
}

/// Exact maximum-density vertex set by max-flow.
///
/// Binary search runs over the grid `k / Q` with `Q = n(n-1) + 1`, finer
/// than the smallest gap `1/(n(n-1))` between two distinct subgraph
/// densities, so the final cell contains exactly one candidate density.
/// Among densest sets the smallest, then lexicographically first, is returned.
pub fn exact_densest(g: &Graph) -> Result<DensestResult> {
    let n = g.vertex_count();
    if g.is_directed() {
        return invalid("densest subgraph is defined on undirected graphs");
    }
    if n == 0 {
        return invalid("densest subgraph of a graph with no vertices");
    }
    if n > FLOW_VERTEX_LIMIT {
        return Err(Error::SizeGuard {
            solver: "flow densest subgraph",
            detail: format!("n = {n} exceeds {FLOW_VERTEX_LIMIT}"),
        });
    }
    if g.edge_count() == 0 {
        return Ok(DensestResult::in_source(vec![0], Density::from_integer(0)));
    }
    let q = (n * (n - 1) + 1) as i64;
    // Feasible at lo, infeasible at hi: every density is at most (n-1)/2.
    let (mut lo, mut hi) = (0i64, q * (n as i64 - 1) / 2 + 1);
    let mut witness = denser_than(g, lo, q).expect("a graph with edges is denser than 0");
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match denser_than(g, mid, q) {
            Some(s) => {
                lo = mid;
                witness = s;
            }
            None => hi = mid,
        }
    }
    // `witness` is the union of all densest sets; refine it to the preferred one.
    let opt = g.density_of(&witness)?;
    let (a, b) = (*opt.numer() as i64, *opt.denom() as i64);
    let mut best = witness.clone();
    for &v in &witness {
        let (mut net, _) = density_network(g, a, b, Some(v));
        net.max_flow(n, n + 1);
        let side = net.source_side(n);
        let minimal: Vec<VertexId> = (0..n).filter(|&u| side[u]).collect();
        debug_assert_eq!(g.density_of(&minimal)?, opt);
        if prefer(&minimal, &best) {
            best = minimal;
        }
    }
    Ok(DensestResult::in_source(best, opt))
}

/// Enumerates every nonempty vertex subset. Same tie-breaking as
/// [`exact_densest`].
pub fn brute_force_densest(g: &Graph) -> Result<DensestResult> {
    let n = g.vertex_count();
    if g.is_directed() {
        return invalid("densest subgraph is defined on undirected graphs");
    }
    if n == 0 {
        return invalid("densest subgraph of a graph with no vertices");
    }
    if n > BRUTE_FORCE_VERTEX_LIMIT {
        return Err(Error::SizeGuard {
            solver: "brute-force densest subgraph",
            detail: format!("n = {n} exceeds {BRUTE_FORCE_VERTEX_LIMIT}"),
        });
    }
    let mut adj = vec![0u32; n];
    for e in g.edges() {
        adj[e.u] |= 1 << e.v;
        adj[e.v] |= 1 << e.u;
    }
    let members = |mask: u32| -> Vec<VertexId> { (0..n).filter(|&v| mask >> v & 1 == 1).collect() };
    let (mut best_mask, mut best_e, mut best_s) = (1u32, 0u64, 1u64);
    for mask in 1u32..(1u32 << n) {
        let s = mask.count_ones() as u64;
        let twice_e: u32 = (0..n)
            .filter(|&v| mask >> v & 1 == 1)
            .map(|v| (adj[v] & mask).count_ones())
            .sum();
        let e = twice_e as u64 / 2;
        let (lhs, rhs) = (e * best_s, best_e * s);
        if lhs > rhs || (lhs == rhs && prefer(&members(mask), &members(best_mask))) {
            (best_mask, best_e, best_s) = (mask, e, s);
        }
    }
    Ok(DensestResult::in_source(
        members(best_mask),
        Density::new(best_e, best_s),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    #[test]
    fn cycle_is_its_own_densest() {
        let r = exact_densest(&cycle(8)).unwrap();
        assert_eq!(r.vertices, (0..8).collect::<Vec<_>>());
        assert_eq!(r.density(), Density::from_integer(1));
    }

    #[test]
    fn k4_beside_pendant_path() {
        let g = k4_with_pendant_path();
        let r = exact_densest(&g).unwrap();
        assert_eq!(r.vertices, vec![0, 1, 2, 3]);
        assert_eq!(r.density(), Density::new(3, 2));
        assert_eq!(brute_force_densest(&g).unwrap(), r);
    }

    #[test]
    fn two_triangles_pick_the_first() {
        let g =
            Graph::from_edges(6, false, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let r = exact_densest(&g).unwrap();
        assert_eq!(r.vertices, vec![0, 1, 2]);
        assert_eq!(r.density(), Density::from_integer(1));
        assert_eq!(brute_force_densest(&g).unwrap(), r);
    }

    #[test]
    fn smaller_densest_set_wins() {
        // K4 (density 3/2) next to K_{3,3} plus... a second K4 sharing nothing.
        // Both halves are densest; the union is too, but a single K4 is smaller.
        let mut pairs: Vec<(usize, usize)> = (0..4)
            .flat_map(|u| (u + 1..4).map(move |v| (u, v)))
            .collect();
        pairs.extend((4..8).flat_map(|u| (u + 1..8).map(move |v| (u, v))));
        let g = Graph::from_edges(8, false, pairs).unwrap();
        assert_eq!(exact_densest(&g).unwrap().vertices, vec![0, 1, 2, 3]);
    }

    #[test]
    fn edgeless_and_guards() {
        let r = exact_densest(&Graph::empty(4, false)).unwrap();
        assert_eq!(
            (r.density(), r.vertices),
            (Density::from_integer(0), vec![0])
        );
        assert!(exact_densest(&Graph::empty(0, false)).is_err());
        assert!(matches!(
            brute_force_densest(&Graph::empty(21, false)),
            Err(Error::SizeGuard { .. })
        ));
        assert!(matches!(
            exact_densest(&Graph::empty(5001, false)),
            Err(Error::SizeGuard { .. })
        ));
        assert!(exact_densest(&complete_digraph(3)).is_err());
    }

    #[test]
    fn at_least_average_density() {
        for g in [complete(5), star(6), path(9), complete_bipartite(2, 5)] {
            let r = exact_densest(&g).unwrap();
            assert!(r.density() >= g.density().unwrap());
            assert_eq!(brute_force_densest(&g).unwrap(), r);
        }
    }
}
