//! k-wise independent polynomial hashing over a prime field.
//!
//! A random polynomial with `k` coefficients over `GF(p)` is a k-wise
//! independent function; with `k` large enough relative to the number of
//! minima `t` and the target error `eps`, it is approximately t-min-wise
//! independent. The sampler relies on the latter: the `t` smallest hash
//! values of a set form a near-uniform `t`-subset.

use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::graph::EdgeId;
use crate::seed;

/// The Mersenne prime `2^61 - 1`.
pub const MERSENNE_61: u64 = (1 << 61) - 1;

#[inline]
fn reduce_mersenne(x: u128) -> u64 {
    let lo = (x as u64) & MERSENNE_61;
    // x < 2^122, so hi < 2^61 and lo + hi < 2^62.
    let hi = (x >> 61) as u64;
    let s = lo + hi;
    let s = (s & MERSENNE_61) + (s >> 61);
    if s >= MERSENNE_61 {
        s - MERSENNE_61
    } else {
        s
    }
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    let prod = a as u128 * b as u128;
    if p == MERSENNE_61 {
        reduce_mersenne(prod)
    } else {
        (prod % p as u128) as u64
    }
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    if s >= p as u128 {
        (s - p as u128) as u64
    } else {
        s as u64
    }
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Number of coefficients that makes a polynomial hash `eps`-approximately
/// `t`-min-wise independent: `c2 * (t * ln ln(1/eps) + ln(1/eps))`, rounded
/// up, at least 2, and clamped to `cap` when one is given.
///
/// `ln ln(1/eps)` is clamped at zero, so any `eps >= 1/e` reduces the
/// formula to `c2 * ln(1/eps)`.
pub fn min_wise_independence(t: usize, eps: f64, c2: f64, cap: Option<usize>) -> Result<usize> {
    if !(eps > 0.0 && eps < 1.0) {
        return invalid(format!("min-wise error {eps} must lie in (0, 1)"));
    }
    if c2.is_nan() || c2 <= 0.0 {
        return invalid("independence constant must be positive");
    }
    let log_inv = (1.0 / eps).ln();
    let k = (c2 * (t as f64 * log_inv.ln().max(0.0) + log_inv)).ceil() as usize;
    let k = k.max(2);
    Ok(match cap {
        Some(cap) => k.min(cap.max(2)),
        None => k,
    })
}

/// A polynomial `sum_i c_i x^i mod p` with `k = coefficients.len() >= 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KWiseHash {
    coefficients: Vec<u64>,
    prime: u64,
    seed: u64,
}

/// Result of hashing a batch of ids.
#[derive(Clone, Debug)]
pub struct BatchEval {
    pub values: Vec<u64>,
    /// Field multiplications spent; `k - 1` per id with Horner's rule.
    pub field_mults: u64,
}

impl KWiseHash {
    /// Draws `independence` coefficients uniformly from `GF(prime)` with a
    /// ChaCha stream derived from `seed`.
    pub fn new(seed: u64, independence: usize, prime: u64) -> Result<Self> {
        if independence < 2 {
            return invalid(format!(
                "independence {independence} is below pairwise independence"
            ));
        }
        if !is_prime(prime) {
            return invalid(format!("modulus {prime} is not prime"));
        }
        let mut rng = seed::rng(seed, seed::TAG_HASH);
        let coefficients = (0..independence)
            .map(|_| rng.random_range(0..prime))
            .collect();
        Ok(KWiseHash {
            coefficients,
            prime,
            seed,
        })
    }

    /// A hash with explicit coefficients, lowest order first.
    pub fn from_coefficients(coefficients: Vec<u64>, prime: u64) -> Result<Self> {
        if coefficients.len() < 2 {
            return invalid("a hash polynomial needs at least two coefficients");
        }
        if !is_prime(prime) {
            return invalid(format!("modulus {prime} is not prime"));
        }
        if let Some(c) = coefficients.iter().find(|&&c| c >= prime) {
            return invalid(format!(
                "coefficient {c} is not a field element mod {prime}"
            ));
        }
        Ok(KWiseHash {
            coefficients,
            prime,
            seed: 0,
        })
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coefficients
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn independence(&self) -> usize {
        self.coefficients.len()
    }

    /// Size of the hash range, `[0, prime)`.
    pub fn range(&self) -> u64 {
        self.prime
    }

    pub fn eval(&self, x: EdgeId) -> Result<u64> {
        if x.0 >= self.prime {
            return Err(Error::InvalidArgument(format!(
                "id {} is outside the field of size {}",
                x.0, self.prime
            )));
        }
        Ok(self.eval_field(x.0))
    }

    /// Horner evaluation; `x` must already be reduced.
    #[inline]
    pub(crate) fn eval_field(&self, x: u64) -> u64 {
        let p = self.prime;
        self.coefficients
            .iter()
            .rev()
            .fold(0, |acc, &c| add_mod(mul_mod(acc, x, p), c, p))
    }

    /// Evaluates a batch, running Horner's rule on several points in lockstep.
    pub fn eval_batch(&self, xs: &[EdgeId]) -> Result<BatchEval> {
        const LANES: usize = 8;
        if let Some(x) = xs.iter().find(|x| x.0 >= self.prime) {
            return invalid(format!(
                "id {} is outside the field of size {}",
                x.0, self.prime
            ));
        }
        let p = self.prime;
        let mut values = Vec::with_capacity(xs.len());
        for chunk in xs.chunks(LANES) {
            let mut acc = [0u64; LANES];
            for &c in self.coefficients.iter().rev() {
                for (a, x) in acc.iter_mut().zip(chunk) {
                    *a = add_mod(mul_mod(*a, x.0, p), c, p);
                }
            }
            values.extend_from_slice(&acc[..chunk.len()]);
        }
        let field_mults = xs.len() as u64 * (self.coefficients.len() as u64 - 1);
        Ok(BatchEval {
            values,
            field_mults,
        })
    }
}

/// The `c` ids with the smallest hash values, ordered by `(hash, id)`.
/// This is the reference the streaming sampler must reproduce exactly.
pub fn min_hash_select(ids: &[EdgeId], hash: &KWiseHash, c: usize) -> Result<Vec<(EdgeId, u64)>> {
    let mut keyed = Vec::with_capacity(ids.len());
    for &id in ids {
        keyed.push((hash.eval(id)?, id));
    }
    keyed.sort_unstable();
    if let Some(w) = keyed.windows(2).find(|w| w[0].1 == w[1].1) {
        return invalid(format!("id {} appears more than once", w[0].1 .0));
    }
    keyed.truncate(c);
    Ok(keyed.into_iter().map(|(h, id)| (id, h)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn primality() {
        assert!(is_prime(MERSENNE_61));
        assert!(is_prime(101));
        assert!(is_prime(2));
        assert!(!is_prime(1));
        assert!(!is_prime(MERSENNE_61 - 2));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2, 3, 5, 7
        let small: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            small,
            [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
    }

    #[test]
    fn mersenne_reduction_matches_generic() {
        let p = MERSENNE_61;
        let samples = [
            0,
            1,
            2,
            p - 1,
            p - 2,
            1 << 60,
            123_456_789_012_345,
            (1 << 61) - 3,
        ];
        for &a in &samples {
            for &b in &samples {
                let (a, b) = (a % p, b % p);
                assert_eq!(mul_mod(a, b, p), (a as u128 * b as u128 % p as u128) as u64);
            }
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let a = KWiseHash::new(7, 4, MERSENNE_61).unwrap();
        let b = KWiseHash::new(7, 4, MERSENNE_61).unwrap();
        let c = KWiseHash::new(8, 4, MERSENNE_61).unwrap();
        assert_eq!(a.coefficients(), b.coefficients());
        assert_ne!(a.coefficients(), c.coefficients());
        assert_eq!(a.independence(), 4);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(KWiseHash::new(7, 1, MERSENNE_61).is_err());
        assert!(KWiseHash::new(7, 4, 100).is_err());
        assert!(KWiseHash::from_coefficients(vec![5], 101).is_err());
        assert!(KWiseHash::from_coefficients(vec![5, 101], 101).is_err());
    }

    #[test]
    fn evaluation_examples() {
        let constant = KWiseHash::from_coefficients(vec![5, 0, 0], MERSENNE_61).unwrap();
        assert_eq!(constant.eval(EdgeId(987_654)).unwrap(), 5);
        let identity = KWiseHash::from_coefficients(vec![0, 1, 0, 0], MERSENNE_61).unwrap();
        assert_eq!(identity.eval(EdgeId(42)).unwrap(), 42);
        let quad = KWiseHash::from_coefficients(vec![1, 2, 3], 101).unwrap();
        assert_eq!(quad.eval(EdgeId(10)).unwrap(), 18);
        assert!(quad.eval(EdgeId(101)).is_err());
    }

    #[test]
    fn batch_matches_pointwise() {
        let h = KWiseHash::new(3, 37, MERSENNE_61).unwrap();
        let xs: Vec<EdgeId> = (0..100).map(|i| EdgeId(i * 7919)).collect();
        let batch = h.eval_batch(&xs).unwrap();
        for (x, v) in xs.iter().zip(&batch.values) {
            assert_eq!(h.eval(*x).unwrap(), *v);
        }
        assert_eq!(batch.field_mults, 100 * 36);
        let small = KWiseHash::new(3, 3, 101).unwrap();
        assert!(small.eval_batch(&[EdgeId(1), EdgeId(500)]).is_err());
    }

    // Direct field evaluation from the power-sum definition.
    fn power_sum(coeffs: &[u64], x: u64, p: u64) -> u64 {
        let mut sum = 0u128;
        let mut pw = 1u128;
        for &c in coeffs {
            sum = (sum + c as u128 * pw) % p as u128;
            pw = pw * x as u128 % p as u128;
        }
        sum as u64
    }

    #[test]
    fn horner_matches_power_sum() {
        for seed in 0..20 {
            for p in [101, 65_537, MERSENNE_61] {
                let h = KWiseHash::new(seed, 2 + seed as usize % 9, p).unwrap();
                for x in [0, 1, 2, 99, p - 1] {
                    assert_eq!(
                        h.eval(EdgeId(x)).unwrap(),
                        power_sum(h.coefficients(), x, p)
                    );
                }
            }
        }
    }

    #[test]
    fn min_hash_select_examples() {
        let h = KWiseHash::new(11, 4, MERSENNE_61).unwrap();
        let one = min_hash_select(&[EdgeId(9)], &h, 5).unwrap();
        assert_eq!(one, vec![(EdgeId(9), h.eval(EdgeId(9)).unwrap())]);
        assert!(min_hash_select(&[EdgeId(9)], &h, 0).unwrap().is_empty());

        let ids: Vec<EdgeId> = (1..=100).map(EdgeId).collect();
        let mut oracle: Vec<(u64, u64)> = ids.iter().map(|x| (h.eval(*x).unwrap(), x.0)).collect();
        oracle.sort();
        let expected: Vec<(EdgeId, u64)> = oracle
            .iter()
            .take(10)
            .map(|&(v, x)| (EdgeId(x), v))
            .collect();
        assert_eq!(min_hash_select(&ids, &h, 10).unwrap(), expected);
        assert_eq!(min_hash_select(&ids, &h, 1000).unwrap().len(), 100);
        assert!(min_hash_select(&[EdgeId(1), EdgeId(1)], &h, 1).is_err());
    }

    #[test]
    fn ties_break_by_id() {
        let constant = KWiseHash::from_coefficients(vec![5, 0], 101).unwrap();
        let got = min_hash_select(&[EdgeId(30), EdgeId(4), EdgeId(17)], &constant, 2).unwrap();
        assert_eq!(got, vec![(EdgeId(4), 5), (EdgeId(17), 5)]);
    }

    #[test]
    fn independence_formula() {
        // eps = 0.1, t = 3, c2 = 2: 2 * (3 ln ln 10 + ln 10) = 9.61..
        assert_eq!(min_wise_independence(3, 0.1, 2.0, None).unwrap(), 10);
        // eps = 1/e: ln ln e = 0, so only c2 * 1 remains.
        assert_eq!(
            min_wise_independence(50, (-1.0f64).exp(), 2.0, None).unwrap(),
            2
        );
        assert_eq!(
            min_wise_independence(10_000, 0.01, 2.0, Some(512)).unwrap(),
            512
        );
        assert!(min_wise_independence(3, 1.5, 2.0, None).is_err());
    }

    #[test]
    fn pairwise_collision_rate() {
        const TRIALS: u64 = 100_000;
        const BINS: u128 = 256;
        let bin = |v: u64| v as u128 * BINS / MERSENNE_61 as u128;
        let mut collisions = 0u64;
        for seed in 0..TRIALS {
            let h = KWiseHash::new(seed, 2, MERSENNE_61).unwrap();
            if bin(h.eval(EdgeId(12)).unwrap()) == bin(h.eval(EdgeId(13)).unwrap()) {
                collisions += 1;
            }
        }
        let q = 1.0 / BINS as f64;
        let sigma = (q * (1.0 - q) / TRIALS as f64).sqrt();
        let rate = collisions as f64 / TRIALS as f64;
        assert!(
            (rate - q).abs() <= 5.0 * sigma,
            "rate {rate} vs {q} (sigma {sigma})"
        );
    }

    #[test]
    fn approximately_min_wise_on_small_set() {
        const TRIALS: usize = 20_000;
        let k = min_wise_independence(3, 0.1, 2.0, None).unwrap();
        let xs: Vec<EdgeId> = (1..=30).map(EdgeId).collect();
        let mut per_subset: HashMap<[u64; 3], usize> = HashMap::new();
        let mut per_item = [0usize; 30];
        for seed in 0..TRIALS as u64 {
            let h = KWiseHash::new(seed, k, MERSENNE_61).unwrap();
            let mut key: Vec<u64> = min_hash_select(&xs, &h, 3)
                .unwrap()
                .iter()
                .map(|p| p.0 .0)
                .collect();
            key.sort();
            for &x in &key {
                per_item[x as usize - 1] += 1;
            }
            *per_subset.entry([key[0], key[1], key[2]]).or_default() += 1;
        }
        // Marginals: each id is among the three minima 1/10 of the time.
        let expected_item = TRIALS as f64 * 3.0 / 30.0;
        for &c in &per_item {
            assert!(
                (c as f64 - expected_item).abs() <= 0.3 * expected_item,
                "{per_item:?}"
            );
        }
        // Joint: chi-square over all C(30,3) subsets within 5 sd of its mean.
        let cells = 4060.0;
        let expected = TRIALS as f64 / cells;
        let observed: f64 = per_subset
            .values()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        let unseen = cells - per_subset.len() as f64;
        let chi2 = observed + unseen * expected;
        let df = cells - 1.0;
        assert!(
            (chi2 - df).abs() <= 5.0 * (2.0 * df).sqrt(),
            "chi2 {chi2} for df {df}"
        );
    }
}
