//! Offline solvers for the four heavy-subgraph problems. The exact ones are
//! enumerators with hard size guards; they exist to serve as oracles.

use num_rational::Ratio;
use rand::Rng;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, VertexId};
use crate::seed;

/// Exact labeling solvers refuse instances with more than this many labelings.
pub const LABELING_LIMIT: u64 = 10_000_000;
pub const BIPARTITE_VERTEX_LIMIT: usize = 16;
pub const DIRECTED_VERTEX_LIMIT: usize = 12;
pub const DEFAULT_RESTARTS: usize = 8;

/// A total map from vertices to labels in `0..d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Labeling {
    pub labels: Vec<usize>,
    pub d: usize,
}

impl Labeling {
    pub fn new(labels: Vec<usize>, d: usize) -> Result<Self> {
        if let Some(&bad) = labels.iter().find(|&&l| l >= d) {
            return invalid(format!("label {bad} outside 0..{d}"));
        }
        Ok(Labeling { labels, d })
    }

    pub fn is_surjective(&self) -> bool {
        let mut used = vec![false; self.d];
        self.labels.iter().for_each(|&l| used[l] = true);
        used.into_iter().all(|u| u)
    }

    /// Edges whose endpoints carry different labels (`differ`) or equal ones.
    pub fn count_edges(&self, g: &Graph, differ: bool) -> u64 {
        g.edges()
            .iter()
            .filter(|e| (self.labels[e.u] != self.labels[e.v]) == differ)
            .count() as u64
    }
}

/// Two vertex sets. Disjoint for bipartite densest; arbitrary nonempty sets
/// for directed densest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BipartitionSolution {
    pub a: Vec<VertexId>,
    pub b: Vec<VertexId>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MaxCutMode {
    Exact,
    LocalSearch { restarts: usize, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DirectedMode {
    Exact,
    /// Peeling heuristic without an approximation guarantee.
    Greedy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumMaxMode {
    Exact,
    /// `d - 1` lowest-degree vertices as singletons, everything else together.
    Singleton,
}

fn check_labels(d: usize) -> Result<()> {
    if d < 2 {
        return invalid(format!("need at least 2 labels, got d = {d}"));
    }
    Ok(())
}

fn check_undirected(g: &Graph, problem: &str) -> Result<()> {
    if g.is_directed() {
        return invalid(format!("{problem} is defined on undirected graphs"));
    }
    Ok(())
}

fn labeling_guard(solver: &'static str, n: usize, d: usize) -> Result<()> {
    match (d as u64).checked_pow(n as u32) {
        Some(count) if count <= LABELING_LIMIT => Ok(()),
        _ => Err(Error::SizeGuard {
            solver,
            detail: format!("{d}^{n} labelings exceed {LABELING_LIMIT}"),
        }),
    }
}

/// Earlier neighbours of each vertex, for incremental scoring.
fn lower_adjacency(g: &Graph) -> Vec<Vec<usize>> {
    let mut lower = vec![Vec::new(); g.vertex_count()];
    for e in g.edges() {
        let (lo, hi) = if e.u < e.v { (e.u, e.v) } else { (e.v, e.u) };
        lower[hi].push(lo);
    }
    lower
}

/// Best labeling over restricted growth strings (one representative per
/// label permutation). Scores edges with different labels, or equal labels
/// when `same` is set; `surjective` demands all `d` labels appear. The first
/// optimum in lexicographic order wins.
struct LabelSearch<'a> {
    lower: &'a [Vec<usize>],
    d: usize,
    same: bool,
    surjective: bool,
    labels: Vec<usize>,
    best: Option<(u64, Vec<usize>)>,
}

impl LabelSearch<'_> {
    fn run(&mut self, v: usize, used: usize, score: u64) {
        let n = self.labels.len();
        if v == n {
            if (!self.surjective || used == self.d)
                && self.best.as_ref().is_none_or(|(b, _)| score > *b)
            {
                self.best = Some((score, self.labels.clone()));
            }
            return;
        }
        if self.surjective && n - v < self.d - used {
            return;
        }
        for label in 0..self.d.min(used + 1) {
            let gain = self.lower[v]
                .iter()
                .filter(|&&w| (self.labels[w] == label) == self.same)
                .count() as u64;
            self.labels[v] = label;
            self.run(v + 1, used.max(label + 1), score + gain);
        }
    }
}

fn search_labelings(g: &Graph, d: usize, same: bool, surjective: bool) -> (Labeling, u64) {
    let lower = lower_adjacency(g);
    let mut search = LabelSearch {
        lower: &lower,
        d,
        same,
        surjective,
        labels: vec![0; g.vertex_count()],
        best: None,
    };
    search.run(0, 0, 0);
    let (value, labels) = search
        .best
        .expect("guarded instances have a feasible labeling");
    (Labeling { labels, d }, value)
}

/// d-max cut: label vertices with `d` labels to maximize the number of
/// edges whose endpoints differ.
pub fn solve_dmaxcut(g: &Graph, d: usize, mode: MaxCutMode) -> Result<(Labeling, u64)> {
    check_labels(d)?;
    check_undirected(g, "d-max cut")?;
    let n = g.vertex_count();
    match mode {
        MaxCutMode::Exact => {
            labeling_guard("exact d-max cut", n, d)?;
            Ok(search_labelings(g, d, false, false))
        }
        MaxCutMode::LocalSearch { restarts, seed } => {
            if restarts == 0 {
                return invalid("local search needs at least one restart");
            }
            let adj = g.adjacency();
            let mut rng = seed::rng(seed, seed::TAG_LOCAL_SEARCH);
            let mut best: Option<(u64, Vec<usize>)> = None;
            let mut counts = vec![0usize; d];
            for _ in 0..restarts {
                let mut labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..d)).collect();
                loop {
                    let mut improved = false;
                    for v in 0..n {
                        counts.iter_mut().for_each(|c| *c = 0);
                        adj[v].iter().for_each(|&w| counts[labels[w]] += 1);
                        let target = (0..d).min_by_key(|&l| counts[l]).expect("d >= 2");
                        if counts[target] < counts[labels[v]] {
                            labels[v] = target;
                            improved = true;
                        }
                    }
                    if !improved {
                        break;
                    }
                }
                let value = Labeling {
                    labels: labels.clone(),
                    d,
                }
                .count_edges(g, true);
                if best.as_ref().is_none_or(|(b, _)| value > *b) {
                    best = Some((value, labels));
                }
            }
            let (value, labels) = best.expect("at least one restart");
            Ok((Labeling { labels, d }, value))
        }
    }
}

/// d-sum-max clustering: use all `d` labels and maximize the number of
/// monochromatic edges. Requires `n > 2d`.
pub fn solve_dsummax(g: &Graph, d: usize, mode: SumMaxMode) -> Result<(Labeling, u64)> {
    check_labels(d)?;
    check_undirected(g, "d-sum-max clustering")?;
    let n = g.vertex_count();
    if n <= 2 * d {
        return invalid(format!(
            "d-sum-max clustering needs n > 2d, got n = {n}, d = {d}"
        ));
    }
    match mode {
        SumMaxMode::Exact => {
            labeling_guard("exact d-sum-max clustering", n, d)?;
            Ok(search_labelings(g, d, true, true))
        }
        SumMaxMode::Singleton => {
            let deg = g.degrees();
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by_key(|&v| (deg[v], v));
            let mut labels = vec![d - 1; n];
            for (label, &v) in order[..d - 1].iter().enumerate() {
                labels[v] = label;
            }
            let labeling = Labeling { labels, d };
            let value = labeling.count_edges(g, false);
            Ok((labeling, value))
        }
    }
}

struct BipartiteSearch<'a> {
    lower: &'a [Vec<usize>],
    side: Vec<u8>,
    /// (edges, vertices, sides) of the best pair so far.
    best: Option<(u64, u64, Vec<u8>)>,
}

impl BipartiteSearch<'_> {
    fn run(&mut self, v: usize, size: u64, edges: u64) {
        if v == self.side.len() {
            if size > 0
                && self
                    .best
                    .as_ref()
                    .is_none_or(|&(be, bs, _)| edges * bs > be * size)
            {
                self.best = Some((edges, size, self.side.clone()));
            }
            return;
        }
        for s in 0..3u8 {
            let gain = if s == 0 {
                0
            } else {
                let other = 3 - s;
                self.lower[v]
                    .iter()
                    .filter(|&&w| self.side[w] == other)
                    .count() as u64
            };
            self.side[v] = s;
            self.run(v + 1, size + u64::from(s != 0), edges + gain);
        }
        self.side[v] = 0;
    }
}

/// Densest bipartite subgraph by enumerating all disjoint pairs `(A, B)`.
/// The value is `|E(A, B)| / (|A| + |B|)`.
pub fn solve_bipartite_densest(g: &Graph) -> Result<(BipartitionSolution, Ratio<u64>)> {
    check_undirected(g, "densest bipartite subgraph")?;
    let n = g.vertex_count();
    if n == 0 {
        return invalid("densest bipartite subgraph of a graph with no vertices");
    }
    if n > BIPARTITE_VERTEX_LIMIT {
        return Err(Error::SizeGuard {
            solver: "exact densest bipartite subgraph",
            detail: format!("n = {n} exceeds {BIPARTITE_VERTEX_LIMIT}"),
        });
    }
    let lower = lower_adjacency(g);
    let mut search = BipartiteSearch {
        lower: &lower,
        side: vec![0; n],
        best: None,
    };
    search.run(0, 0, 0);
    let (edges, size, side) = search.best.expect("n >= 1");
    let pick = |s: u8| (0..n).filter(|&v| side[v] == s).collect();
    Ok((
        BipartitionSolution {
            a: pick(1),
            b: pick(2),
        },
        Ratio::new(edges, size),
    ))
}

fn directed_value(edges: u64, a: usize, b: usize) -> f64 {
    edges as f64 / ((a * b) as f64).sqrt()
}

/// Directed densest subgraph: maximize `|E(A, B)| / sqrt(|A| |B|)` over
/// nonempty, possibly overlapping `A` and `B`.
pub fn solve_directed_densest(g: &Graph, mode: DirectedMode) -> Result<(BipartitionSolution, f64)> {
    if !g.is_directed() {
        return invalid("directed densest subgraph needs a directed graph");
    }
    let n = g.vertex_count();
    if n == 0 {
        return invalid("directed densest subgraph of a graph with no vertices");
    }
    match mode {
        DirectedMode::Exact => directed_exact(g),
        DirectedMode::Greedy => Ok(directed_greedy(g)),
    }
}

fn directed_exact(g: &Graph) -> Result<(BipartitionSolution, f64)> {
    let n = g.vertex_count();
    if n > DIRECTED_VERTEX_LIMIT {
        return Err(Error::SizeGuard {
            solver: "exact directed densest subgraph",
            detail: format!("n = {n} exceeds {DIRECTED_VERTEX_LIMIT}"),
        });
    }
    let out = g.out_adjacency();
    let full = 1usize << n;
    let mut into_b = vec![0u64; full];
    // (edges, |A|, |B|, A, B); compare e^2 / (|A||B|) exactly.
    let mut best = (0u64, 1u64, 1u64, 1usize, 1usize);
    for a in 1..full {
        let mut w = vec![0u64; n];
        for u in (0..n).filter(|&u| a >> u & 1 == 1) {
            out[u].iter().for_each(|&v| w[v] += 1);
        }
        let ia = a.count_ones() as u64;
        for b in 1..full {
            into_b[b] = into_b[b & (b - 1)] + w[b.trailing_zeros() as usize];
            let (e, jb) = (into_b[b], b.count_ones() as u64);
            let (be, bi, bj, _, _) = best;
            if e * e * bi * bj > be * be * ia * jb {
                best = (e, ia, jb, a, b);
            }
        }
    }
    let (e, i, j, a, b) = best;
    let members = |mask: usize| (0..n).filter(|&v| mask >> v & 1 == 1).collect();
    Ok((
        BipartitionSolution {
            a: members(a),
            b: members(b),
        },
        directed_value(e, i as usize, j as usize),
    ))
}

fn directed_greedy(g: &Graph) -> (BipartitionSolution, f64) {
    let n = g.vertex_count();
    let out = g.out_adjacency();
    let mut inn = vec![Vec::new(); n];
    for e in g.edges() {
        inn[e.v].push(e.u);
    }
    let (mut in_a, mut in_b) = (vec![true; n], vec![true; n]);
    let mut out_deg: Vec<usize> = out.iter().map(Vec::len).collect();
    let mut in_deg: Vec<usize> = inn.iter().map(Vec::len).collect();
    let (mut size_a, mut size_b, mut edges) = (n, n, g.edge_count() as u64);
    let mut removals: Vec<(bool, usize)> = Vec::new();
    let (mut best, mut best_step) = (directed_value(edges, n, n), 0);
    while size_a > 0 && size_b > 0 {
        let min_a = (0..n).filter(|&u| in_a[u]).min_by_key(|&u| (out_deg[u], u));
        let min_b = (0..n).filter(|&v| in_b[v]).min_by_key(|&v| (in_deg[v], v));
        let (Some(u), Some(v)) = (min_a, min_b) else {
            break;
        };
        if out_deg[u] <= in_deg[v] {
            in_a[u] = false;
            size_a -= 1;
            edges -= out_deg[u] as u64;
            out[u]
                .iter()
                .filter(|&&w| in_b[w])
                .for_each(|&w| in_deg[w] -= 1);
            removals.push((true, u));
        } else {
            in_b[v] = false;
            size_b -= 1;
            edges -= in_deg[v] as u64;
            inn[v]
                .iter()
                .filter(|&&w| in_a[w])
                .for_each(|&w| out_deg[w] -= 1);
            removals.push((false, v));
        }
        if size_a > 0 && size_b > 0 {
            let value = directed_value(edges, size_a, size_b);
            if value > best {
                (best, best_step) = (value, removals.len());
            }
        }
    }
    let (mut a, mut b) = (vec![true; n], vec![true; n]);
    for &(from_a, x) in &removals[..best_step] {
        if from_a {
            a[x] = false;
        } else {
            b[x] = false;
        }
    }
    let a: Vec<usize> = (0..n).filter(|&v| a[v]).collect();
    let b: Vec<usize> = (0..n).filter(|&v| b[v]).collect();
    (BipartitionSolution { a, b }, best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    fn brute_maxcut(g: &Graph, d: usize) -> u64 {
        let n = g.vertex_count();
        let mut best = 0;
        for code in 0..(d as u64).pow(n as u32) {
            let mut c = code;
            let labels: Vec<usize> = (0..n)
                .map(|_| {
                    let l = (c % d as u64) as usize;
                    c /= d as u64;
                    l
                })
                .collect();
            best = best.max(Labeling { labels, d }.count_edges(g, true));
        }
        best
    }

    #[test]
    fn maxcut_examples() {
        assert_eq!(
            solve_dmaxcut(&complete(3), 3, MaxCutMode::Exact).unwrap().1,
            3
        );
        assert_eq!(
            solve_dmaxcut(&complete(4), 2, MaxCutMode::Exact).unwrap().1,
            4
        );
        assert_eq!(brute_maxcut(&complete(4), 2), 4);
        assert_eq!(
            solve_dmaxcut(&complete_bipartite(2, 2), 2, MaxCutMode::Exact)
                .unwrap()
                .1,
            4
        );
    }

    #[test]
    fn maxcut_exact_matches_brute_force() {
        let graphs = [
            k4_with_pendant_path(),
            cycle(7),
            complete(5),
            star(5),
            path(6),
        ];
        for g in &graphs {
            for d in 2..=3 {
                let (labeling, value) = solve_dmaxcut(g, d, MaxCutMode::Exact).unwrap();
                assert_eq!(value, brute_maxcut(g, d));
                assert_eq!(labeling.count_edges(g, true), value);
            }
        }
    }

    #[test]
    fn local_search_reaches_optimum_on_small_graphs() {
        let g = cycle(8);
        let (labeling, value) = solve_dmaxcut(
            &g,
            2,
            MaxCutMode::LocalSearch {
                restarts: 8,
                seed: 1,
            },
        )
        .unwrap();
        assert_eq!(value, 8);
        assert_eq!(labeling.count_edges(&g, true), 8);
        // Local optima cut at least half the edges.
        let g = complete(9);
        let (_, value) = solve_dmaxcut(
            &g,
            2,
            MaxCutMode::LocalSearch {
                restarts: 1,
                seed: 5,
            },
        )
        .unwrap();
        assert!(value >= 18);
    }

    #[test]
    fn maxcut_guards() {
        assert!(matches!(
            solve_dmaxcut(&Graph::empty(24, false), 2, MaxCutMode::Exact),
            Err(Error::SizeGuard { .. })
        ));
        assert!(solve_dmaxcut(&complete(3), 1, MaxCutMode::Exact).is_err());
        assert!(solve_dmaxcut(&complete_digraph(3), 2, MaxCutMode::Exact).is_err());
    }

    #[test]
    fn summax_examples() {
        assert_eq!(solve_dsummax(&path(5), 2, SumMaxMode::Exact).unwrap().1, 3);
        for n in 5..=8 {
            let (labeling, value) = solve_dsummax(&complete(n), 2, SumMaxMode::Exact).unwrap();
            assert_eq!(value as usize, (n - 1) * (n - 2) / 2);
            assert!(labeling.is_surjective());
        }
        assert!(solve_dsummax(&path(4), 2, SumMaxMode::Exact).is_err());
    }

    #[test]
    fn summax_singleton_heuristic() {
        let g = star(5);
        let (labeling, value) = solve_dsummax(&g, 2, SumMaxMode::Singleton).unwrap();
        // Leaf 1 is isolated, the remaining star keeps 4 edges.
        assert_eq!(labeling.labels, vec![1, 0, 1, 1, 1, 1]);
        assert_eq!(value, 4);
        let (_, opt) = solve_dsummax(&g, 2, SumMaxMode::Exact).unwrap();
        assert_eq!(opt, 4);
    }

    #[test]
    fn bipartite_examples() {
        let edge = Graph::from_edges(2, false, [(0, 1)]).unwrap();
        let (sol, value) = solve_bipartite_densest(&edge).unwrap();
        assert_eq!((sol.a, sol.b, value), (vec![0], vec![1], Ratio::new(1, 2)));
        assert_eq!(
            solve_bipartite_densest(&complete(3)).unwrap().1,
            Ratio::new(2, 3)
        );
        let (sol, value) = solve_bipartite_densest(&cycle(4)).unwrap();
        assert_eq!(value, Ratio::from_integer(1));
        assert_eq!(sol.a.len() + sol.b.len(), 4);
        assert!(matches!(
            solve_bipartite_densest(&Graph::empty(17, false)),
            Err(Error::SizeGuard { .. })
        ));
    }

    #[test]
    fn bipartite_matches_subset_enumeration() {
        // Oracle: every vertex subset, best cut inside it, divided by its size.
        let g = k4_with_pendant_path();
        let n = g.vertex_count();
        let mut best = Ratio::from_integer(0);
        for mask in 1u32..1 << n {
            for side in 0u32..1 << n {
                if side & !mask != 0 {
                    continue;
                }
                let cut = g
                    .edges()
                    .iter()
                    .filter(|e| {
                        mask >> e.u & 1 == 1
                            && mask >> e.v & 1 == 1
                            && (side >> e.u & 1) != (side >> e.v & 1)
                    })
                    .count() as u64;
                best = best.max(Ratio::new(cut, mask.count_ones() as u64));
            }
        }
        assert_eq!(solve_bipartite_densest(&g).unwrap().1, best);
    }

    #[test]
    fn directed_examples() {
        let arc = Graph::from_edges(2, true, [(0, 1)]).unwrap();
        let (sol, value) = solve_directed_densest(&arc, DirectedMode::Exact).unwrap();
        assert_eq!((sol.a, sol.b, value), (vec![0], vec![1], 1.0));
        let (sol, value) =
            solve_directed_densest(&complete_digraph(5), DirectedMode::Exact).unwrap();
        assert_eq!((sol.a.len(), sol.b.len()), (5, 5));
        assert!((value - 4.0).abs() < 1e-12);
        assert!(solve_directed_densest(&complete(3), DirectedMode::Exact).is_err());
    }

    #[test]
    fn directed_three_cycle_by_enumeration() {
        let g = Graph::from_edges(3, true, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let mut best = 0.0f64;
        for a in 1u32..8 {
            for b in 1u32..8 {
                let e = g
                    .edges()
                    .iter()
                    .filter(|e| a >> e.u & 1 == 1 && b >> e.v & 1 == 1)
                    .count();
                best = best.max(e as f64 / ((a.count_ones() * b.count_ones()) as f64).sqrt());
            }
        }
        let (_, value) = solve_directed_densest(&g, DirectedMode::Exact).unwrap();
        assert!((value - best).abs() < 1e-12);
        assert!((value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn directed_greedy_is_feasible_and_bounded() {
        let g =
            Graph::from_edges(6, true, [(0, 1), (0, 2), (0, 3), (1, 2), (4, 5), (3, 1)]).unwrap();
        let (sol, value) = solve_directed_densest(&g, DirectedMode::Greedy).unwrap();
        let (_, opt) = solve_directed_densest(&g, DirectedMode::Exact).unwrap();
        assert!(!sol.a.is_empty() && !sol.b.is_empty());
        let e = g
            .edges()
            .iter()
            .filter(|e| sol.a.contains(&e.u) && sol.b.contains(&e.v))
            .count() as u64;
        assert_eq!(value, directed_value(e, sol.a.len(), sol.b.len()));
        assert!(value <= opt + 1e-12);
    }
}
