//! Heavy subgraph problems: objectives that split into classes `k` with
//! value `f_k * |E_sol|` in each class, that are closed under spanning
//! subgraphs, and whose optimum is at least `gamma * ln|Sol_k| * f_k * m / n`.
//! For these, solving on a uniform edge sample and rescaling by `1/p`
//! estimates the optimum.
//!
//! Objectives are stored raw (the textbook value); the factor-`n`
//! normalization used by the class scales `f_k` is applied only when
//! estimating and when checking the gamma bound.

mod solvers;

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::Serialize;

pub use solvers::{
    solve_bipartite_densest, solve_directed_densest, solve_dmaxcut, solve_dsummax,
    BipartitionSolution, DirectedMode, Labeling, MaxCutMode, SumMaxMode, BIPARTITE_VERTEX_LIMIT,
    DEFAULT_RESTARTS, DIRECTED_VERTEX_LIMIT, LABELING_LIMIT,
};

use crate::densest::{check_accuracy, sample_edges, SampleSize};
use crate::error::{invalid, Error, Result};
use crate::graph::{Edge, Graph};
use crate::sketch::LeveledSampler;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    DensestBipartite,
    DirectedDensest,
    DMaxCut,
    DSumMax,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 4] = [
        ProblemKind::DensestBipartite,
        ProblemKind::DirectedDensest,
        ProblemKind::DMaxCut,
        ProblemKind::DSumMax,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::DensestBipartite => "densest-bipartite",
            ProblemKind::DirectedDensest => "directed-densest",
            ProblemKind::DMaxCut => "d-max-cut",
            ProblemKind::DSumMax => "d-sum-max",
        }
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProblemKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .map_or_else(|| invalid(format!("unknown problem '{s}'")), Ok)
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which solver to attach: the exact enumerator or the problem's heuristic
/// (local search, greedy peeling, singleton clustering).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveMode {
    Exact,
    Heuristic,
}

impl FromStr for SolveMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(SolveMode::Exact),
            "heuristic" | "local-search" | "greedy" | "singleton" => Ok(SolveMode::Heuristic),
            other => invalid(format!("unknown solve mode '{other}'")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Solution {
    Labeling(Labeling),
    Bipartition(BipartitionSolution),
}

/// A solution scored on one graph.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Evaluation {
    /// Class index `k`, starting at 1.
    pub class: usize,
    /// `|E_sol|`: edges of the graph the solution covers.
    pub edges: u64,
    /// The textbook objective.
    pub raw: f64,
    /// `f_k * edges`.
    pub normalized: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solved {
    pub solution: Solution,
    pub evaluation: Evaluation,
}

/// Problem descriptor. `d` is the label count for the labeling problems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HeavyProblem {
    pub kind: ProblemKind,
    pub d: usize,
}

fn ln_binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k)
        .map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln())
        .sum()
}

fn unique_sorted(xs: &[usize], n: usize, what: &str) -> Result<Vec<bool>> {
    let mut member = vec![false; n];
    for &v in xs {
        if v >= n || member[v] {
            return invalid(format!("{what}: vertex {v} out of range or repeated"));
        }
        member[v] = true;
    }
    Ok(member)
}

impl HeavyProblem {
    pub fn new(kind: ProblemKind, d: usize) -> Result<Self> {
        if matches!(kind, ProblemKind::DMaxCut | ProblemKind::DSumMax) && d < 2 {
            return invalid(format!("{kind} needs d >= 2, got {d}"));
        }
        Ok(HeavyProblem { kind, d })
    }

    pub fn densest_bipartite() -> Self {
        HeavyProblem {
            kind: ProblemKind::DensestBipartite,
            d: 0,
        }
    }

    pub fn directed_densest() -> Self {
        HeavyProblem {
            kind: ProblemKind::DirectedDensest,
            d: 0,
        }
    }

    pub fn d_max_cut(d: usize) -> Result<Self> {
        Self::new(ProblemKind::DMaxCut, d)
    }

    pub fn d_sum_max(d: usize) -> Result<Self> {
        Self::new(ProblemKind::DSumMax, d)
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    /// Whether instances are directed graphs.
    pub fn directed(&self) -> bool {
        self.kind == ProblemKind::DirectedDensest
    }

    pub fn gamma(&self, n: usize) -> Result<f64> {
        let nf = n as f64;
        let d = self.d as f64;
        let gamma = match self.kind {
            ProblemKind::DensestBipartite => 2.0 / (nf.ln() + 1.0),
            ProblemKind::DirectedDensest => 1.0 / (2.0 * nf.sqrt() * nf.ln()),
            ProblemKind::DMaxCut => 1.0 / (2.0 * d.ln()),
            ProblemKind::DSumMax => (nf - 2.0 * d) / (nf * d.ln()),
        };
        if !(gamma > 0.0 && gamma.is_finite()) {
            return invalid(format!("{} has no positive gamma at n = {n}", self.name()));
        }
        Ok(gamma)
    }

    /// Number of solution classes `l`.
    pub fn class_count(&self, n: usize) -> usize {
        match self.kind {
            ProblemKind::DensestBipartite => n,
            ProblemKind::DirectedDensest => n * n,
            ProblemKind::DMaxCut | ProblemKind::DSumMax => 1,
        }
    }

    /// Directed classes are pairs `(|A|, |B|)` flattened to
    /// `k = (|A| - 1) n + |B|`, so `k` runs over `1..=n^2`.
    pub fn directed_class(i: usize, j: usize, n: usize) -> usize {
        (i - 1) * n + j
    }

    fn directed_pair(k: usize, n: usize) -> (usize, usize) {
        ((k - 1) / n + 1, (k - 1) % n + 1)
    }

    /// Class scale `f_k`.
    pub fn scale(&self, k: usize, n: usize) -> f64 {
        let nf = n as f64;
        match self.kind {
            ProblemKind::DensestBipartite => nf / (n - k + 1) as f64,
            ProblemKind::DirectedDensest => {
                let (i, j) = Self::directed_pair(k, n);
                nf / ((i * j) as f64).sqrt()
            }
            ProblemKind::DMaxCut | ProblemKind::DSumMax => 1.0,
        }
    }

    /// Upper bound on `ln |Sol_k|`.
    pub fn class_count_log(&self, k: usize, n: usize) -> f64 {
        match self.kind {
            ProblemKind::DensestBipartite => {
                let s = n - k + 1;
                ln_binomial(n, s) + s as f64 * 2f64.ln()
            }
            ProblemKind::DirectedDensest => {
                let (i, j) = Self::directed_pair(k, n);
                ln_binomial(n, i) + ln_binomial(n, j)
            }
            ProblemKind::DMaxCut | ProblemKind::DSumMax => n as f64 * (self.d as f64).ln(),
        }
    }

    fn check_graph(&self, g: &Graph) -> Result<()> {
        if g.is_directed() != self.directed() {
            let want = if self.directed() {
                "a directed"
            } else {
                "an undirected"
            };
            return invalid(format!("{} needs {want} graph", self.name()));
        }
        Ok(())
    }

    /// The edges of `g` a solution covers. Fails if the solution is not
    /// feasible for this problem on a graph with `g`'s vertex set.
    pub fn solution_edges(&self, sol: &Solution, g: &Graph) -> Result<Vec<Edge>> {
        self.check_graph(g)?;
        let n = g.vertex_count();
        let edges = g.edges().iter().copied();
        match (self.kind, sol) {
            (ProblemKind::DMaxCut | ProblemKind::DSumMax, Solution::Labeling(l)) => {
                if l.labels.len() != n || l.d != self.d || l.labels.iter().any(|&x| x >= self.d) {
                    return invalid("labeling does not match the instance");
                }
                if self.kind == ProblemKind::DSumMax && !l.is_surjective() {
                    return invalid("d-sum-max clustering must use every label");
                }
                let differ = self.kind == ProblemKind::DMaxCut;
                Ok(edges
                    .filter(|e| (l.labels[e.u] != l.labels[e.v]) == differ)
                    .collect())
            }
            (ProblemKind::DensestBipartite, Solution::Bipartition(s)) => {
                let a = unique_sorted(&s.a, n, "part A")?;
                let b = unique_sorted(&s.b, n, "part B")?;
                if s.a.iter().any(|&v| b[v]) || s.a.len() + s.b.len() == 0 {
                    return invalid("bipartite parts must be disjoint with a nonempty union");
                }
                Ok(edges
                    .filter(|e| (a[e.u] && b[e.v]) || (b[e.u] && a[e.v]))
                    .collect())
            }
            (ProblemKind::DirectedDensest, Solution::Bipartition(s)) => {
                let a = unique_sorted(&s.a, n, "set A")?;
                let b = unique_sorted(&s.b, n, "set B")?;
                if s.a.is_empty() || s.b.is_empty() {
                    return invalid("directed densest sets must be nonempty");
                }
                Ok(edges.filter(|e| a[e.u] && b[e.v]).collect())
            }
            _ => invalid(format!("solution shape does not fit {}", self.name())),
        }
    }

    pub fn class_of(&self, sol: &Solution, n: usize) -> usize {
        match sol {
            Solution::Bipartition(s) if self.kind == ProblemKind::DensestBipartite => {
                n - (s.a.len() + s.b.len()) + 1
            }
            Solution::Bipartition(s) => Self::directed_class(s.a.len(), s.b.len(), n),
            Solution::Labeling(_) => 1,
        }
    }

    pub fn evaluate(&self, sol: &Solution, g: &Graph) -> Result<Evaluation> {
        let n = g.vertex_count();
        let edges = self.solution_edges(sol, g)?.len() as u64;
        let class = self.class_of(sol, n);
        let normalized = self.scale(class, n) * edges as f64;
        let raw = match self.kind {
            ProblemKind::DensestBipartite | ProblemKind::DirectedDensest => normalized / n as f64,
            ProblemKind::DMaxCut | ProblemKind::DSumMax => edges as f64,
        };
        Ok(Evaluation {
            class,
            edges,
            raw,
            normalized,
        })
    }

    /// Runs the attached solver. `seed` drives the randomized heuristics.
    pub fn solve(&self, g: &Graph, mode: SolveMode, seed: u64) -> Result<Solved> {
        self.check_graph(g)?;
        let solution = match (self.kind, mode) {
            (ProblemKind::DensestBipartite, SolveMode::Exact) => {
                Solution::Bipartition(solve_bipartite_densest(g)?.0)
            }
            (ProblemKind::DensestBipartite, SolveMode::Heuristic) => {
                return invalid("densest bipartite subgraph has only an exact solver")
            }
            (ProblemKind::DirectedDensest, mode) => {
                let mode = if mode == SolveMode::Exact {
                    DirectedMode::Exact
                } else {
                    DirectedMode::Greedy
                };
                Solution::Bipartition(solve_directed_densest(g, mode)?.0)
            }
            (ProblemKind::DMaxCut, mode) => {
                let mode = match mode {
                    SolveMode::Exact => MaxCutMode::Exact,
                    SolveMode::Heuristic => MaxCutMode::LocalSearch {
                        restarts: DEFAULT_RESTARTS,
                        seed,
                    },
                };
                Solution::Labeling(solve_dmaxcut(g, self.d, mode)?.0)
            }
            (ProblemKind::DSumMax, mode) => {
                let mode = if mode == SolveMode::Exact {
                    SumMaxMode::Exact
                } else {
                    SumMaxMode::Singleton
                };
                Solution::Labeling(solve_dsummax(g, self.d, mode)?.0)
            }
        };
        let evaluation = self.evaluate(&solution, g)?;
        Ok(Solved {
            solution,
            evaluation,
        })
    }

    /// Sample size from the accuracy/confidence formula for this problem.
    pub fn sample_size(&self, n: usize, eps: f64, delta: f64) -> Result<u64> {
        compute_general_sample_size(
            n as u64,
            self.gamma(n)?,
            self.class_count(n) as u64,
            eps,
            delta,
        )
    }

    /// Per-class gamma bound `gamma * ln|Sol_k| * f_k * m / n` against the
    /// normalized optimum found by the exact solver.
    pub fn check_gamma_bound(&self, g: &Graph) -> Result<GammaReport> {
        let n = g.vertex_count();
        let m = g.edge_count() as f64;
        let gamma = self.gamma(n)?;
        let opt = self.solve(g, SolveMode::Exact, 0)?.evaluation.normalized;
        let classes = (1..=self.class_count(n))
            .map(|k| {
                let bound = gamma * self.class_count_log(k, n) * self.scale(k, n) * m / n as f64;
                GammaClass {
                    k,
                    bound,
                    holds: bound <= opt * (1.0 + 1e-12),
                }
            })
            .collect();
        Ok(GammaReport {
            gamma,
            opt,
            classes,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GammaClass {
    pub k: usize,
    pub bound: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GammaReport {
    pub gamma: f64,
    /// Normalized optimum.
    pub opt: f64,
    pub classes: Vec<GammaClass>,
}

impl GammaReport {
    pub fn holds(&self) -> bool {
        self.classes.iter().all(|c| c.holds)
    }

    pub fn worst(&self) -> Option<&GammaClass> {
        self.classes
            .iter()
            .max_by(|a, b| a.bound.total_cmp(&b.bound))
    }
}

/// `ceil(12 n (4 + delta) max(ln l, 1) / (gamma eps^2))`. The `max` keeps
/// single-class problems (`l = 1`) from collapsing to `C = 0`.
pub fn compute_general_sample_size(
    n: u64,
    gamma: f64,
    l: u64,
    eps: f64,
    delta: f64,
) -> Result<u64> {
    check_accuracy(eps, delta)?;
    if !(gamma > 0.0 && gamma.is_finite()) {
        return invalid(format!("gamma = {gamma} must be positive"));
    }
    if l < 1 {
        return invalid("need at least one solution class");
    }
    let log_l = (l as f64).ln().max(1.0);
    Ok((12.0 * n as f64 * (4.0 + delta) * log_l / (gamma * eps * eps)).ceil() as u64)
}

/// Result of sample-and-estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct HeavyEstimate {
    /// `normalized(Alg(H)) / p`, the estimate of the normalized optimum.
    pub estimate: f64,
    /// `raw(Alg(H)) / p`, the same in textbook units.
    pub raw_estimate: f64,
    /// The solution found on the sample. No guarantee is claimed for it on
    /// the full graph.
    pub witness: Solution,
    pub on_sample: Evaluation,
    pub c: u64,
    pub m: u64,
    pub p: Ratio<u64>,
}

fn scaled(solved: Solved, c: u64, m: u64, p: Ratio<u64>) -> HeavyEstimate {
    let inv_p = p.recip().to_f64().unwrap_or(f64::NAN);
    HeavyEstimate {
        estimate: solved.evaluation.normalized * inv_p,
        raw_estimate: solved.evaluation.raw * inv_p,
        witness: solved.solution,
        on_sample: solved.evaluation,
        c,
        m,
        p,
    }
}

/// Sample-and-estimate on a materialized graph: solve on `C` uniformly
/// sampled edges and scale by `1/p`. When `m <= C` the solver runs on `g`.
pub fn estimate_heavy(
    problem: &HeavyProblem,
    g: &Graph,
    size: SampleSize,
    mode: SolveMode,
    seed: u64,
) -> Result<HeavyEstimate> {
    let (n, m) = (g.vertex_count(), g.edge_count() as u64);
    let c = match size {
        SampleSize::Fixed(0) => return invalid("sample size C must be positive"),
        SampleSize::Fixed(c) => c,
        SampleSize::Formula { eps, delta } => problem.sample_size(n, eps, delta)?,
    };
    if m <= c {
        return Ok(scaled(
            problem.solve(g, mode, seed)?,
            c,
            m,
            Ratio::from_integer(1),
        ));
    }
    let h = sample_edges(g, c as usize, seed);
    Ok(scaled(
        problem.solve(&h, mode, seed)?,
        c,
        m,
        Ratio::new(c, m),
    ))
}

/// Sample-and-estimate from a streaming sampler; `C` is the sampler's
/// configured sample size.
pub fn estimate_heavy_streaming(
    problem: &HeavyProblem,
    sampler: &LeveledSampler,
    mode: SolveMode,
    seed: u64,
) -> Result<HeavyEstimate> {
    let sample = sampler.query()?;
    let h = sample.graph();
    Ok(scaled(
        problem.solve(&h, mode, seed)?,
        sampler.config().sample_size as u64,
        sample.m,
        sample.p,
    ))
}
