//! Densest subgraph: greedy peeling, an exact flow oracle, and
//! sample-and-solve over a uniform edge sample.

pub mod exact;
pub mod flow;
mod peel;

use std::str::FromStr;

use num_rational::Ratio;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use serde::Serialize;

pub use exact::{brute_force_densest, exact_densest};
pub use peel::charikar_peel;

use crate::error::{invalid, Error, Result};
use crate::graph::{Density, Graph, VertexId};
use crate::seed;
use crate::sketch::LeveledSampler;

/// A vertex set and its density in the graph it was computed on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensestResult {
    pub vertices: Vec<VertexId>,
    density: Density,
}

impl DensestResult {
    pub(crate) fn in_source(vertices: Vec<VertexId>, density: Density) -> Self {
        DensestResult { vertices, density }
    }

    pub fn density(&self) -> Density {
        self.density
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    Charikar,
    Exact,
}

impl Solver {
    pub fn solve(self, g: &Graph) -> Result<DensestResult> {
        match self {
            Solver::Charikar => charikar_peel(g),
            Solver::Exact => exact_densest(g),
        }
    }
}

impl FromStr for Solver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "charikar" | "peel" => Ok(Solver::Charikar),
            "exact" => Ok(Solver::Exact),
            other => invalid(format!(
                "unknown solver '{other}' (expected charikar or exact)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleSizeParams {
    pub n: u64,
    pub m: u64,
    pub eps: f64,
    pub delta: f64,
    /// `ceil(12 n (4 + delta) ln(m) / eps^2)`.
    pub c: u64,
}

impl SampleSizeParams {
    /// `min(1, C/m)`.
    pub fn p(&self) -> Ratio<u64> {
        Ratio::new(self.c.min(self.m), self.m.max(1))
    }
}

pub(crate) fn check_accuracy(eps: f64, delta: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return invalid(format!("accuracy eps = {eps} must lie in (0, 1)"));
    }
    if !(delta >= 1.0 && delta.is_finite()) {
        return invalid(format!("confidence delta = {delta} must be at least 1"));
    }
    Ok(())
}

/// Sample size for which sample-and-solve is a `(1 - eps)`-approximation
/// with probability `1 - m^-delta`.
pub fn compute_sample_size(n: u64, m: u64, eps: f64, delta: f64) -> Result<SampleSizeParams> {
    check_accuracy(eps, delta)?;
    if n < 1 {
        return invalid("sample size needs at least one vertex");
    }
    if m < 2 {
        return invalid(format!("sample size formula needs m >= 2, got {m}"));
    }
    let c = (12.0 * n as f64 * (4.0 + delta) * (m as f64).ln() / (eps * eps)).ceil();
    Ok(SampleSizeParams {
        n,
        m,
        eps,
        delta,
        c: c as u64,
    })
}

/// How many edges to keep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SampleSize {
    /// From the accuracy/confidence formula.
    Formula { eps: f64, delta: f64 },
    /// An explicit `C`.
    Fixed(u64),
}

impl SampleSize {
    pub fn resolve(self, n: usize, m: usize) -> Result<u64> {
        match self {
            SampleSize::Fixed(0) => invalid("sample size C must be positive"),
            SampleSize::Fixed(c) => Ok(c),
            SampleSize::Formula { eps, delta } => {
                check_accuracy(eps, delta)?;
                if m < 2 {
                    // Nothing to sample: keep the whole graph.
                    return Ok(m as u64);
                }
                Ok(compute_sample_size(n as u64, m as u64, eps, delta)?.c)
            }
        }
    }
}

/// `c` edges drawn uniformly without replacement (partial Fisher-Yates),
/// returned as a spanning subgraph.
pub fn sample_edges(g: &Graph, c: usize, seed: u64) -> Graph {
    let mut rng = seed::rng(seed, seed::TAG_OFFLINE_SAMPLE);
    let mut edges = g.edges().to_vec();
    let c = c.min(edges.len());
    edges.partial_shuffle(&mut rng, c);
    edges.truncate(c);
    Graph::from_canonical(g.vertex_count(), g.is_directed(), edges)
}

/// Output of sample-and-solve.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledDensest {
    pub vertices: Vec<VertexId>,
    /// Density of the returned set in the source graph, when it is available.
    pub density_in_source: Option<Density>,
    /// Density of the returned set in the sampled graph.
    pub density_in_sample: Density,
    pub c: u64,
    pub m: u64,
    /// Sampling rate; 1 when the whole graph was solved.
    pub p: Ratio<u64>,
}

impl SampledDensest {
    pub fn sampled(&self) -> bool {
        self.p < Ratio::from_integer(1)
    }

    /// `den_H / p`, the sample-side estimate of the source density.
    pub fn scaled_sample_density(&self) -> f64 {
        (self.density_in_sample / self.p)
            .to_f64()
            .unwrap_or(f64::NAN)
    }
}

/// Sample-and-solve on a materialized graph. When `m <= C` the solver runs
/// on `g` itself.
pub fn approx_densest_offline(
    g: &Graph,
    size: SampleSize,
    solver: Solver,
    seed: u64,
) -> Result<SampledDensest> {
    let m = g.edge_count();
    let c = size.resolve(g.vertex_count(), m)?;
    if m as u64 <= c {
        let r = solver.solve(g)?;
        return Ok(SampledDensest {
            density_in_source: Some(r.density()),
            density_in_sample: r.density(),
            vertices: r.vertices,
            c,
            m: m as u64,
            p: Ratio::from_integer(1),
        });
    }
    let h = sample_edges(g, c as usize, seed);
    let r = solver.solve(&h)?;
    Ok(SampledDensest {
        density_in_source: Some(g.density_of(&r.vertices)?),
        density_in_sample: r.density(),
        vertices: r.vertices,
        c,
        m: m as u64,
        p: Ratio::new(c, m as u64),
    })
}

/// Sample-and-solve on the sample held by a streaming sampler. `reference`,
/// when given, is the current graph and is used only to report `den_G`.
pub fn approx_densest_streaming(
    sampler: &LeveledSampler,
    solver: Solver,
    reference: Option<&Graph>,
) -> Result<SampledDensest> {
    let sample = sampler.query()?;
    let h = sample.graph();
    let r = solver.solve(&h)?;
    let density_in_source = reference.map(|g| g.density_of(&r.vertices)).transpose()?;
    Ok(SampledDensest {
        density_in_source,
        density_in_sample: r.density(),
        vertices: r.vertices,
        c: sampler.config().sample_size as u64,
        m: sample.m,
        p: sample.p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;
    use crate::sketch::SamplerConfig;

    #[test]
    fn sample_size_formula() {
        // 12 * 10 * 5 * ln(100) / 0.25 = 11052.408..
        assert_eq!(compute_sample_size(10, 100, 0.5, 1.0).unwrap().c, 11_053);
        // 240000 * ln(1e6) = 3315722.53..
        let big = compute_sample_size(1000, 1_000_000, 0.5, 1.0).unwrap();
        assert_eq!(big.c, 3_315_723);
        assert_eq!(big.p(), Ratio::from_integer(1));
        assert!(compute_sample_size(10, 100, 1.0, 1.0).is_err());
        assert!(compute_sample_size(10, 100, 0.5, 0.5).is_err());
        assert!(compute_sample_size(10, 1, 0.5, 1.0).is_err());
    }

    #[test]
    fn small_graph_branch_is_the_solver() {
        let g = k4_with_pendant_path();
        for solver in [Solver::Charikar, Solver::Exact] {
            let r = approx_densest_offline(
                &g,
                SampleSize::Formula {
                    eps: 0.2,
                    delta: 1.0,
                },
                solver,
                3,
            )
            .unwrap();
            let direct = solver.solve(&g).unwrap();
            assert_eq!(r.vertices, direct.vertices);
            assert_eq!(r.density_in_source, Some(direct.density()));
            assert!(!r.sampled());
        }
    }

    #[test]
    fn sampled_run_reports_source_density() {
        let g = complete(12);
        let r = approx_densest_offline(&g, SampleSize::Fixed(20), Solver::Exact, 1).unwrap();
        assert!(r.sampled());
        assert_eq!(r.p, Ratio::new(20, 66));
        assert!(approx_densest_offline(&g, SampleSize::Fixed(0), Solver::Exact, 1).is_err());
        assert_eq!(
            r.density_in_source,
            Some(g.density_of(&r.vertices).unwrap())
        );
    }

    #[test]
    fn offline_sample_is_a_subset_of_size_c() {
        let g = complete(10);
        let h = sample_edges(&g, 17, 4);
        assert_eq!(h.edge_count(), 17);
        assert_eq!(h.vertex_count(), 10);
        assert!(h.edges().iter().all(|e| g.contains(e.u, e.v)));
        assert_eq!(sample_edges(&g, 17, 4), h);
    }

    #[test]
    fn streaming_with_everything_stored_equals_solver() {
        let g = k4_with_pendant_path();
        let mut s = LeveledSampler::new(SamplerConfig::new(7, 50, 2)).unwrap();
        for e in g.edges() {
            s.insert(e.u, e.v).unwrap();
        }
        let r = approx_densest_streaming(&s, Solver::Exact, Some(&g)).unwrap();
        let direct = exact_densest(&g).unwrap();
        assert_eq!(r.vertices, direct.vertices);
        assert_eq!(r.density_in_source, Some(direct.density()));
        assert_eq!(r.p, Ratio::from_integer(1));
    }
}
