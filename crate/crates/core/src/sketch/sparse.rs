use std::fmt;

use crate::graph::EdgeId;
use crate::hashing::{add_mod, mul_mod, sub_mod, KWiseHash, MERSENNE_61};
use crate::seed;

/// One bucket: signed count, wrapping sum of ids and a field sum of id fingerprints.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Cell {
    pub count: i64,
    pub id_sum: u64,
    pub fp_sum: u64,
}

impl Cell {
    fn is_zero(&self) -> bool {
        self.count == 0 && self.id_sum == 0 && self.fp_sum == 0
    }
}

/// Shape of a sparse-recovery sketch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SparseParams {
    /// Largest support the sketch promises to decode.
    pub capacity: usize,
    pub rows: usize,
    /// Buckets per row.
    pub width: usize,
}

impl SparseParams {
    /// `r = ceil(log2 n^2) + 2` rows of `2s` buckets for a universe of
    /// `n`-vertex edge labels.
    pub fn for_vertices(capacity: usize, n: usize) -> Self {
        let universe = (n as f64).powi(2).max(1.0);
        SparseParams {
            capacity,
            rows: universe.log2().ceil() as usize + 2,
            width: (2 * capacity).max(1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodeFailure {
    /// The support exceeds the declared capacity.
    Overload { support: i64, capacity: usize },
    /// Peeling ran out of pure buckets before the sketch emptied.
    Stalled { recovered: usize },
    /// Negative counts; the strict-turnstile precondition was violated upstream.
    Inconsistent,
}

impl fmt::Display for DecodeFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecodeFailure::Overload { support, capacity } => {
                write!(f, "support {support} exceeds capacity {capacity}")
            }
            DecodeFailure::Stalled { recovered } => {
                write!(f, "peeling stalled after {recovered} ids")
            }
            DecodeFailure::Inconsistent => write!(f, "negative bucket counts"),
        }
    }
}

/// Exact s-sparse recovery over `{0,1}`-valued edge vectors.
///
/// Each id lands in one bucket per row. Decoding peels buckets holding a
/// single id, verified by its fingerprint, until every bucket is empty.
/// Storage is allocated on the first update; an unallocated sketch is the
/// zero sketch.
#[derive(Clone, Debug)]
pub struct SparseRecovery {
    params: SparseParams,
    seed: u64,
    /// `(a, b)` of the row hash `((a*x + b) mod P) mod width`, one per row.
    row_hashes: Vec<(u64, u64)>,
    fingerprint: KWiseHash,
    cells: Vec<Cell>,
}

impl SparseRecovery {
    pub fn new(params: SparseParams, seed: u64) -> Self {
        use rand::Rng;
        let mut rng = seed::rng(seed, seed::TAG_SPARSE);
        let row_hashes = (0..params.rows)
            .map(|_| {
                (
                    rng.random_range(1..MERSENNE_61),
                    rng.random_range(0..MERSENNE_61),
                )
            })
            .collect();
        let fingerprint = KWiseHash::new(seed::derive(seed, seed::TAG_SPARSE), 3, MERSENNE_61)
            .expect("valid fingerprint parameters");
        SparseRecovery {
            params,
            seed,
            row_hashes,
            fingerprint,
            cells: Vec::new(),
        }
    }

    pub fn params(&self) -> SparseParams {
        self.params
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn is_allocated(&self) -> bool {
        !self.cells.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.cells.iter().all(Cell::is_zero)
    }

    /// Row-major cells, or an empty slice for the unallocated zero sketch.
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub(crate) fn set_cells(&mut self, cells: Vec<Cell>) {
        debug_assert!(cells.is_empty() || cells.len() == self.params.rows * self.params.width);
        self.cells = cells;
    }

    #[inline]
    fn bucket(&self, row: usize, id: u64) -> usize {
        let (a, b) = self.row_hashes[row];
        let h = add_mod(mul_mod(a, id % MERSENNE_61, MERSENNE_61), b, MERSENNE_61);
        row * self.params.width + (h % self.params.width as u64) as usize
    }

    fn allocate(&mut self) {
        if self.cells.is_empty() {
            self.cells = vec![Cell::default(); self.params.rows * self.params.width];
        }
    }

    /// Adds `delta` copies of `id`; `+1` inserts and `-1` deletes.
    pub fn update(&mut self, id: EdgeId, delta: i64) {
        if delta == 0 {
            return;
        }
        self.allocate();
        let fp = self.fingerprint.eval_field(id.0 % MERSENNE_61);
        let fp_delta = mul_mod(fp, delta.rem_euclid(MERSENNE_61 as i64) as u64, MERSENNE_61);
        for row in 0..self.params.rows {
            let idx = self.bucket(row, id.0);
            let cell = &mut self.cells[idx];
            cell.count += delta;
            cell.id_sum = cell.id_sum.wrapping_add(id.0.wrapping_mul(delta as u64));
            cell.fp_sum = add_mod(cell.fp_sum, fp_delta, MERSENNE_61);
        }
    }

    /// Number of live ids, read off the first row. Exact under strict turnstile.
    pub fn support(&self) -> i64 {
        self.cells[..self.params.width.min(self.cells.len())]
            .iter()
            .map(|c| c.count)
            .sum()
    }

    fn is_pure(&self, cells: &[Cell], idx: usize, row: usize) -> bool {
        let c = &cells[idx];
        c.count == 1
            && c.id_sum < MERSENNE_61
            && self.bucket(row, c.id_sum) == idx
            && self.fingerprint.eval_field(c.id_sum) == c.fp_sum
    }

    /// Peels the sketch. Returns the live ids in ascending order.
    pub fn decode(&self) -> Result<Vec<EdgeId>, DecodeFailure> {
        if self.cells.is_empty() {
            return Ok(Vec::new());
        }
        let support = self.support();
        if self.cells.iter().any(|c| c.count < 0) || support < 0 {
            return Err(DecodeFailure::Inconsistent);
        }
        if support as usize > self.params.capacity {
            return Err(DecodeFailure::Overload {
                support,
                capacity: self.params.capacity,
            });
        }
        let width = self.params.width;
        let mut cells = self.cells.clone();
        let mut queue: Vec<usize> = (0..cells.len())
            .filter(|&idx| self.is_pure(&cells, idx, idx / width))
            .collect();
        let mut recovered = Vec::with_capacity(support as usize);
        while let Some(idx) = queue.pop() {
            if !self.is_pure(&cells, idx, idx / width) {
                continue;
            }
            let id = cells[idx].id_sum;
            let fp = cells[idx].fp_sum;
            recovered.push(EdgeId(id));
            for row in 0..self.params.rows {
                let j = self.bucket(row, id);
                let cell = &mut cells[j];
                cell.count -= 1;
                cell.id_sum = cell.id_sum.wrapping_sub(id);
                cell.fp_sum = sub_mod(cell.fp_sum, fp, MERSENNE_61);
                if self.is_pure(&cells, j, row) {
                    queue.push(j);
                }
            }
        }
        if cells.iter().all(Cell::is_zero) {
            recovered.sort_unstable();
            Ok(recovered)
        } else {
            Err(DecodeFailure::Stalled {
                recovered: recovered.len(),
            })
        }
    }

    pub fn compatible(&self, other: &SparseRecovery) -> bool {
        self.params == other.params && self.seed == other.seed
    }

    /// Componentwise sum. Callers check `compatible` first.
    pub(crate) fn add_assign(&mut self, other: &SparseRecovery) {
        debug_assert!(self.compatible(other));
        if other.cells.is_empty() {
            return;
        }
        self.allocate();
        for (a, b) in self.cells.iter_mut().zip(&other.cells) {
            a.count += b.count;
            a.id_sum = a.id_sum.wrapping_add(b.id_sum);
            a.fp_sum = add_mod(a.fp_sum, b.fp_sum, MERSENNE_61);
        }
    }
}

impl PartialEq for SparseRecovery {
    fn eq(&self, other: &Self) -> bool {
        if !self.compatible(other) {
            return false;
        }
        match (self.cells.is_empty(), other.cells.is_empty()) {
            (false, false) => self.cells == other.cells,
            (true, _) => other.is_zero(),
            (_, true) => self.is_zero(),
        }
    }
}

impl Eq for SparseRecovery {}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    fn sketch(capacity: usize) -> SparseRecovery {
        SparseRecovery::new(SparseParams::for_vertices(capacity, 100), 99)
    }

    #[test]
    fn insert_then_delete_is_zero() {
        let mut sk = sketch(10);
        sk.update(EdgeId(1234), 1);
        assert!(!sk.is_zero());
        sk.update(EdgeId(1234), -1);
        assert!(sk.is_zero());
        assert_eq!(sk, sketch(10));
    }

    #[test]
    fn empty_decodes_to_nothing() {
        assert_eq!(sketch(10).decode().unwrap(), vec![]);
    }

    #[test]
    fn small_support_decodes_exactly() {
        let mut sk = sketch(10);
        for id in [5, 77, 4021] {
            sk.update(EdgeId(id), 1);
        }
        assert_eq!(
            sk.decode().unwrap(),
            vec![EdgeId(5), EdgeId(77), EdgeId(4021)]
        );
    }

    #[test]
    fn churn_below_capacity_decodes_live_set() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for trial in 0..50 {
            let mut sk = SparseRecovery::new(SparseParams::for_vertices(40, 100), trial);
            let mut live = BTreeSet::new();
            for _ in 0..400 {
                let id = rng.random_range(0..10_000u64);
                if live.remove(&id) {
                    sk.update(EdgeId(id), -1);
                } else if live.len() < 40 {
                    live.insert(id);
                    sk.update(EdgeId(id), 1);
                }
            }
            let expected: Vec<EdgeId> = live.iter().copied().map(EdgeId).collect();
            assert_eq!(sk.decode().unwrap(), expected);
        }
    }

    #[test]
    fn overload_is_reported() {
        let mut sk = sketch(10);
        for id in 0..40 {
            sk.update(EdgeId(id * 31 + 7), 1);
        }
        assert_eq!(
            sk.decode(),
            Err(DecodeFailure::Overload {
                support: 40,
                capacity: 10
            })
        );
    }

    #[test]
    fn deleting_absent_id_is_inconsistent() {
        let mut sk = sketch(10);
        sk.update(EdgeId(3), -1);
        assert_eq!(sk.decode(), Err(DecodeFailure::Inconsistent));
    }

    #[test]
    fn update_order_does_not_matter() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut updates: Vec<(u64, i64)> = (0..30).map(|i| (i * 13, 1)).collect();
        updates.extend((0..10).map(|i| (i * 13, -1)));
        let mut reference = sketch(40);
        for &(id, d) in &updates {
            reference.update(EdgeId(id), d);
        }
        for _ in 0..20 {
            updates.shuffle(&mut rng);
            let mut sk = sketch(40);
            for &(id, d) in &updates {
                sk.update(EdgeId(id), d);
            }
            assert_eq!(sk.cells(), reference.cells());
        }
    }

    #[test]
    fn sum_of_sketches_is_sketch_of_union() {
        let (mut a, mut b, mut whole) = (sketch(20), sketch(20), sketch(20));
        for id in 0..10 {
            a.update(EdgeId(id * 3), 1);
            whole.update(EdgeId(id * 3), 1);
        }
        for id in 0..5 {
            b.update(EdgeId(id * 6), -1);
            whole.update(EdgeId(id * 6), -1);
        }
        a.add_assign(&b);
        assert_eq!(a, whole);
        assert_eq!(a.decode().unwrap().len(), 5);
    }
}
