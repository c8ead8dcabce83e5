use num_rational::Ratio;

use super::sparse::{DecodeFailure, SparseParams, SparseRecovery};
use crate::error::{invalid, Error, Result};
use crate::graph::{decode_edge, encode_edge, Edge, EdgeId, Graph};
use crate::hashing::{min_wise_independence, KWiseHash, MERSENNE_61};
use crate::seed;
use crate::stream::{Op, StreamEvent};

/// User-facing sampler parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct SamplerConfig {
    pub n: usize,
    pub directed: bool,
    /// Target sample size `C`.
    pub sample_size: usize,
    /// Failure parameter, at least 1.
    pub delta: f64,
    pub seed: u64,
    /// Min-wise error of the hash. `None` means `exp(-delta)`.
    pub min_wise_eps: Option<f64>,
    /// Domain-extension constant: the field must exceed `n^2 * c1 / eps`.
    pub c1: f64,
    /// Multiplier of the independence formula.
    pub c2: f64,
    /// Upper bound on the hash independence; `None` keeps the full formula.
    pub independence_cap: Option<usize>,
    pub prime: u64,
}

impl SamplerConfig {
    pub fn new(n: usize, sample_size: usize, seed: u64) -> Self {
        SamplerConfig {
            n,
            directed: false,
            sample_size,
            delta: 1.0,
            seed,
            min_wise_eps: None,
            c1: 1.0,
            c2: 2.0,
            independence_cap: Some(512),
            prime: MERSENNE_61,
        }
    }

    pub fn directed(mut self, directed: bool) -> Self {
        self.directed = directed;
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_min_wise_eps(mut self, eps: f64) -> Self {
        self.min_wise_eps = Some(eps);
        self
    }

    /// Removes the independence cap.
    pub fn full_fidelity(mut self) -> Self {
        self.independence_cap = None;
        self
    }

    pub fn eps(&self) -> f64 {
        self.min_wise_eps.unwrap_or_else(|| (-self.delta).exp())
    }

    /// Validates the configuration and derives every structural parameter.
    pub fn resolve(&self) -> Result<SamplerLayout> {
        if self.n < 2 {
            return invalid(format!(
                "a graph stream needs at least 2 vertices, got {}",
                self.n
            ));
        }
        if self.sample_size == 0 {
            return invalid("sample size must be positive");
        }
        if !self.delta.is_finite() || self.delta < 1.0 {
            return invalid(format!("delta {} must be at least 1", self.delta));
        }
        let eps = self.eps();
        let independence = min_wise_independence(
            (self.sample_size as f64 * self.delta).ceil() as usize,
            eps,
            self.c2,
            self.independence_cap,
        )?;
        let domain = (self.n as f64).powi(2) * self.c1 / eps;
        if domain.is_nan() || self.prime as f64 <= domain {
            return invalid(format!(
                "field size {} does not exceed the extended edge domain {domain:.3e}",
                self.prime
            ));
        }
        let capacity = (9.0 * self.delta * self.sample_size as f64).ceil() as usize;
        Ok(SamplerLayout {
            independence,
            levels: 64 - (self.prime - 1).leading_zeros() as usize,
            sparse: SparseParams::for_vertices(capacity, self.n),
        })
    }
}

/// Derived shape of a sampler.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SamplerLayout {
    pub independence: usize,
    /// `ceil(log2 R)` for hash range `R`.
    pub levels: usize,
    pub sparse: SparseParams,
}

/// A uniform sample of live edges. Spanning: `n` is the full vertex count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampledGraph {
    pub n: usize,
    pub directed: bool,
    /// Sampled edges in increasing `(hash, id)` order.
    pub sample: Vec<(EdgeId, u64)>,
    /// Sampling rate `|sample| / m`, exactly 1 when every live edge is kept.
    pub p: Ratio<u64>,
    /// Live edge count at query time.
    pub m: u64,
    /// Level the sample was decoded from.
    pub level: usize,
}

impl SampledGraph {
    pub fn edges(&self) -> Vec<Edge> {
        self.sample
            .iter()
            .map(|(id, _)| {
                decode_edge(*id, self.n, self.directed).expect("sampler decodes valid ids")
            })
            .collect()
    }

    pub fn graph(&self) -> Graph {
        Graph::from_canonical(self.n, self.directed, self.edges())
    }
}

/// Maintains, under insertions and deletions, enough state to return the
/// `C` live edges with the smallest hash values.
///
/// Level `i` holds every live edge with `h(e) * 2^i < R` in a sparse-recovery
/// sketch of capacity `9*delta*C`, next to an exact counter of how many
/// live edges it holds. A query decodes the deepest level whose count lies
/// in `[C, 9*delta*C]`, which necessarily contains the `C` minima.
#[derive(Clone, Debug)]
pub struct LeveledSampler {
    config: SamplerConfig,
    layout: SamplerLayout,
    hash: KWiseHash,
    levels: Vec<SparseRecovery>,
    level_counts: Vec<i64>,
    live: i64,
}

impl LeveledSampler {
    pub fn new(config: SamplerConfig) -> Result<Self> {
        let layout = config.resolve()?;
        let hash = KWiseHash::new(config.seed, layout.independence, config.prime)?;
        let level_seed = seed::derive(config.seed, seed::TAG_SPARSE);
        let levels = (0..layout.levels)
            .map(|i| SparseRecovery::new(layout.sparse, seed::derive(level_seed, i as u64)))
            .collect();
        Ok(LeveledSampler {
            level_counts: vec![0; layout.levels],
            config,
            layout,
            hash,
            levels,
            live: 0,
        })
    }

    pub fn config(&self) -> &SamplerConfig {
        &self.config
    }

    pub fn layout(&self) -> SamplerLayout {
        self.layout
    }

    pub fn hash(&self) -> &KWiseHash {
        &self.hash
    }

    /// Live edge count, `insertions - deletions`.
    pub fn live_edges(&self) -> i64 {
        self.live
    }

    pub fn level_counts(&self) -> &[i64] {
        &self.level_counts
    }

    pub fn levels(&self) -> &[SparseRecovery] {
        &self.levels
    }

    /// Deepest level containing an edge with hash value `h`.
    pub fn depth_of(&self, h: u64) -> usize {
        let range = self.hash.range() as u128;
        let mut depth = 0;
        while depth + 1 < self.layout.levels && ((h as u128) << (depth + 1)) < range {
            depth += 1;
        }
        depth
    }

    pub fn encode(&self, ev: &StreamEvent) -> Result<EdgeId> {
        encode_edge(ev.u, ev.v, self.config.n, self.config.directed)
    }

    fn apply(&mut self, id: EdgeId, h: u64, delta: i64) {
        for i in 0..=self.depth_of(h) {
            self.levels[i].update(id, delta);
            self.level_counts[i] += delta;
        }
        self.live += delta;
    }

    pub fn update(&mut self, ev: &StreamEvent) -> Result<()> {
        let id = self.encode(ev)?;
        let h = self.hash.eval(id)?;
        self.apply(id, h, ev.op.delta());
        Ok(())
    }

    /// Applies a batch of events, hashing all of them in one pass first.
    /// Nothing is applied if any event is invalid.
    pub fn update_batch(&mut self, events: &[StreamEvent]) -> Result<()> {
        let ids = events
            .iter()
            .map(|ev| self.encode(ev))
            .collect::<Result<Vec<_>>>()?;
        let hashes = self.hash.eval_batch(&ids)?.values;
        for ((ev, id), h) in events.iter().zip(ids).zip(hashes) {
            self.apply(id, h, ev.op.delta());
        }
        Ok(())
    }

    pub fn insert(&mut self, u: usize, v: usize) -> Result<()> {
        self.update(&StreamEvent {
            op: Op::Insert,
            u,
            v,
        })
    }

    pub fn delete(&mut self, u: usize, v: usize) -> Result<()> {
        self.update(&StreamEvent {
            op: Op::Delete,
            u,
            v,
        })
    }

    fn sample_from(&self, level: usize, ids: Vec<EdgeId>, take: usize) -> SampledGraph {
        let mut keyed: Vec<(u64, EdgeId)> = ids
            .into_iter()
            .map(|id| (self.hash.eval_field(id.0), id))
            .collect();
        keyed.sort_unstable();
        keyed.truncate(take);
        let m = self.live as u64;
        SampledGraph {
            n: self.config.n,
            directed: self.config.directed,
            sample: keyed.into_iter().map(|(h, id)| (id, h)).collect(),
            p: Ratio::new(take as u64, m.max(1)).min(Ratio::from_integer(1)),
            m,
            level,
        }
    }

    /// Returns `min(C, m)` live edges with the smallest hash values.
    pub fn query(&self) -> Result<SampledGraph> {
        if self.live < 0 {
            return invalid("more deletions than insertions; stream is not strict turnstile");
        }
        let c = self.config.sample_size;
        let m = self.live as usize;
        if m == 0 {
            return Ok(SampledGraph {
                n: self.config.n,
                directed: self.config.directed,
                sample: Vec::new(),
                p: Ratio::from_integer(1),
                m: 0,
                level: 0,
            });
        }
        if m <= c {
            return match self.levels[0].decode() {
                Ok(ids) => Ok(self.sample_from(0, ids, m)),
                Err(_) => Err(Error::SamplerFailure),
            };
        }
        let capacity = self.layout.sparse.capacity as i64;
        for level in (0..self.layout.levels).rev() {
            let z = self.level_counts[level];
            if z < c as i64 || z > capacity {
                continue;
            }
            match self.levels[level].decode() {
                Ok(ids) => return Ok(self.sample_from(level, ids, c)),
                Err(DecodeFailure::Overload { .. } | DecodeFailure::Stalled { .. }) => continue,
                Err(DecodeFailure::Inconsistent) => break,
            }
        }
        Err(Error::SamplerFailure)
    }

    pub fn compatible(&self, other: &LeveledSampler) -> bool {
        self.config == other.config
    }

    /// Adds `other`'s state into `self`. Both must share every parameter.
    pub fn merge(&mut self, other: &LeveledSampler) -> Result<()> {
        if !self.compatible(other) {
            return invalid("cannot merge samplers with different parameters or seeds");
        }
        for (a, b) in self.levels.iter_mut().zip(&other.levels) {
            a.add_assign(b);
        }
        for (a, b) in self.level_counts.iter_mut().zip(&other.level_counts) {
            *a += b;
        }
        self.live += other.live;
        Ok(())
    }

    pub fn merged(a: &LeveledSampler, b: &LeveledSampler) -> Result<LeveledSampler> {
        let mut out = a.clone();
        out.merge(b)?;
        Ok(out)
    }

    pub(crate) fn restore(
        config: SamplerConfig,
        live: i64,
        level_counts: Vec<i64>,
        cells: Vec<Option<Vec<super::sparse::Cell>>>,
    ) -> Result<Self> {
        let mut s = LeveledSampler::new(config)?;
        if level_counts.len() != s.layout.levels || cells.len() != s.layout.levels {
            return Err(Error::Format(
                "level count does not match the sampler layout".into(),
            ));
        }
        s.live = live;
        s.level_counts = level_counts;
        for (level, c) in s.levels.iter_mut().zip(cells) {
            if let Some(c) = c {
                level.set_cells(c);
            }
        }
        Ok(s)
    }
}

impl PartialEq for LeveledSampler {
    fn eq(&self, other: &Self) -> bool {
        self.config == other.config
            && self.live == other.live
            && self.level_counts == other.level_counts
            && self.levels == other.levels
    }
}
