//! Seeded G(n,p) with order-independent lazy pair exposure.
//!
//! Every pair `{u, v}` owns a stream of pseudorandom words derived only from
//! `(seed, n, min(u,v), max(u,v), index)`. Word 0 decides presence; words
//! `1..=k` drive the per-round indicators of [`DeferredGnp::expose_pair_rounds`].

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::bits::words_for;
use crate::error::{Result, SatError};
use crate::graph::Graph;

const EXPOSED: u64 = 1;
const ROUNDS: u64 = 2;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[inline]
fn instance_key(seed: u64, n: usize) -> u64 {
    mix64(mix64(seed) ^ (n as u64).wrapping_mul(0xd6e8_feb8_6659_fd93))
}

/// Uniform draw in `[0, 1)` for word `index` of the stream of pair `lo < hi`.
#[inline]
fn pair_uniform(key: u64, lo: usize, hi: usize, index: u64) -> f64 {
    let h = mix64(key ^ mix64((lo as u64) << 32 ^ hi as u64 ^ index.wrapping_mul(0xa076_1d64_78bd_642f)));
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(SatError::Parameter(format!("probability {p} outside [0, 1]")));
    }
    Ok(())
}

/// Per-round probability `q` with `1 - (1-q)^k = p`.
pub fn round_probability(p: f64, k: usize) -> f64 {
    1.0 - (1.0 - p).powf(1.0 / k as f64)
}

/// Binomial random graph `G(n,p)`, deterministic in `(n, p, seed)`.
pub fn gen_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    Ok(DeferredGnp::new(n, p, seed)?.materialize())
}

/// A `G(n,p)` instance whose pairs are revealed on demand.
pub struct DeferredGnp {
    n: usize,
    p: f64,
    seed: u64,
    key: u64,
    status: Vec<AtomicU64>,
}

impl DeferredGnp {
    pub fn new(n: usize, p: f64, seed: u64) -> Result<Self> {
        check_p(p)?;
        let pairs = n * n.saturating_sub(1) / 2;
        let status = (0..(2 * pairs).div_ceil(64)).map(|_| AtomicU64::new(0)).collect();
        Ok(DeferredGnp { n, p, seed, key: instance_key(seed, n), status })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn order(&self, u: usize, v: usize) -> Result<(usize, usize)> {
        if u >= self.n {
            return Err(SatError::VertexRange { v: u, n: self.n });
        }
        if v >= self.n {
            return Err(SatError::VertexRange { v, n: self.n });
        }
        if u == v {
            return Err(SatError::SelfLoop(u));
        }
        Ok((u.min(v), u.max(v)))
    }

    #[inline]
    fn slot(&self, lo: usize, hi: usize) -> (usize, u32) {
        let idx = lo * (2 * self.n - lo - 1) / 2 + (hi - lo - 1);
        let bit = 2 * idx;
        (bit / 64, (bit % 64) as u32)
    }

    fn mark(&self, lo: usize, hi: usize, flags: u64) -> u64 {
        let (w, b) = self.slot(lo, hi);
        (self.status[w].fetch_or(flags << b, Ordering::AcqRel) >> b) & 3
    }

    /// Whether the pair has been revealed by either exposure call.
    pub fn is_exposed(&self, u: usize, v: usize) -> Result<bool> {
        let (lo, hi) = self.order(u, v)?;
        let (w, b) = self.slot(lo, hi);
        Ok((self.status[w].load(Ordering::Acquire) >> b) & EXPOSED != 0)
    }

    #[inline]
    fn present(&self, lo: usize, hi: usize) -> bool {
        pair_uniform(self.key, lo, hi, 0) < self.p
    }

    /// Reveals `{u, v}`. Idempotent; also valid after a round exposure, where it
    /// returns the OR of the rounds.
    pub fn expose_pair(&self, u: usize, v: usize) -> Result<bool> {
        let (lo, hi) = self.order(u, v)?;
        self.mark(lo, hi, EXPOSED);
        Ok(self.present(lo, hi))
    }

    /// Reveals `{u, v}` as `k` Bernoulli(`q`) rounds whose OR is the pair's presence.
    ///
    /// Given presence, the first success is placed with the exact conditional law
    /// of `k` independent rounds; after it the rounds are plain Bernoulli(`q`).
    pub fn expose_pair_rounds(&self, u: usize, v: usize, k: usize, q: f64) -> Result<Vec<bool>> {
        let (lo, hi) = self.order(u, v)?;
        if k == 0 || !(0.0..=1.0).contains(&q) || (1.0 - (1.0 - q).powi(k as i32) - self.p).abs() > 1e-9 {
            return Err(SatError::Parameter(format!(
                "rounds k={k}, q={q} do not compose to p={}",
                self.p
            )));
        }
        let prev = self.mark(lo, hi, EXPOSED | ROUNDS);
        if prev & EXPOSED != 0 {
            return Err(SatError::Coupling(lo, hi));
        }
        Ok(self.rounds_of(lo, hi, k, q))
    }

    fn rounds_of(&self, lo: usize, hi: usize, k: usize, q: f64) -> Vec<bool> {
        let mut out = vec![false; k];
        if !self.present(lo, hi) {
            return out;
        }
        let mut hit = false;
        for (j, slot) in out.iter_mut().enumerate() {
            let remaining = (k - j) as i32;
            let prob = if hit { q } else { q / (1.0 - (1.0 - q).powi(remaining)) };
            *slot = pair_uniform(self.key, lo, hi, j as u64 + 1) < prob;
            hit |= *slot;
        }
        out
    }

    /// Full graph of pair values. Reads the pair function directly and does not
    /// mark anything as exposed.
    pub fn materialize(&self) -> Graph {
        let n = self.n;
        let w = words_for(n);
        let mut rows = vec![0u64; n * w];
        if w > 0 {
            rows.par_chunks_mut(w).enumerate().for_each(|(u, row)| {
                for v in 0..n {
                    if v != u && self.present(u.min(v), u.max(v)) {
                        row[v / 64] |= 1 << (v % 64);
                    }
                }
            });
        }
        Graph::from_rows(n, rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extremes() {
        let g = gen_gnp(5, 1.0, 3).unwrap();
        assert_eq!(g.edge_count(), 10);
        let g = gen_gnp(7, 0.0, 3).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert!(gen_gnp(5, 1.5, 0).is_err());
        assert!(gen_gnp(5, -0.1, 0).is_err());
        assert_eq!(gen_gnp(0, 0.5, 0).unwrap().n(), 0);
        assert_eq!(gen_gnp(1, 0.5, 0).unwrap().edge_count(), 0);
    }

    #[test]
    fn edge_count_band() {
        let g = gen_gnp(1000, 0.5, 7).unwrap();
        let m = g.edge_count();
        assert!((248_336..=251_164).contains(&m), "m = {m}");
        assert!(g.check_invariants());
    }

    #[test]
    fn seeds_and_sizes_differ() {
        let a = gen_gnp(60, 0.5, 1).unwrap();
        let b = gen_gnp(60, 0.5, 2).unwrap();
        assert_ne!(a, b);
        assert_eq!(a, gen_gnp(60, 0.5, 1).unwrap());
    }

    #[test]
    fn exposure_matches_generator_in_any_order() {
        let (n, p, seed) = (40, 0.4, 11);
        let g = gen_gnp(n, p, seed).unwrap();
        let d = DeferredGnp::new(n, p, seed).unwrap();
        let mut pairs: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        pairs.reverse();
        for &(u, v) in &pairs {
            assert_eq!(d.expose_pair(v, u).unwrap(), g.has_edge(u, v));
            assert_eq!(d.expose_pair(u, v).unwrap(), g.has_edge(u, v));
        }
        assert!(matches!(d.expose_pair(3, 3), Err(SatError::SelfLoop(3))));
        assert!(d.expose_pair(3, 40).is_err());
    }

    #[test]
    fn rounds_single_round_is_presence() {
        let d = DeferredGnp::new(30, 0.5, 4).unwrap();
        let g = d.materialize();
        for u in 0..30 {
            for v in u + 1..30 {
                let r = d.expose_pair_rounds(u, v, 1, 0.5).unwrap();
                assert_eq!(r, vec![g.has_edge(u, v)]);
            }
        }
    }

    #[test]
    fn rounds_or_equals_presence_and_guards() {
        let p = 0.5;
        let q = round_probability(p, 2);
        assert!((q - 0.292_893).abs() < 1e-6);
        let d = DeferredGnp::new(200, p, 9).unwrap();
        let g = d.materialize();
        let mut first = 0usize;
        let mut total = 0usize;
        for u in 0..200 {
            for v in u + 1..200 {
                let r = d.expose_pair_rounds(u, v, 2, q).unwrap();
                assert_eq!(r[0] || r[1], g.has_edge(u, v));
                assert_eq!(d.expose_pair(u, v).unwrap(), g.has_edge(u, v));
                first += r[0] as usize;
                total += 1;
                if total >= 10_000 {
                    break;
                }
            }
            if total >= 10_000 {
                break;
            }
        }
        let frac = first as f64 / total as f64;
        assert!((frac - 0.2929).abs() < 0.02, "round-1 fraction {frac}");
        assert!(matches!(d.expose_pair_rounds(0, 1, 2, q), Err(SatError::Coupling(0, 1))));
        let fresh = DeferredGnp::new(10, p, 1).unwrap();
        fresh.expose_pair(0, 1).unwrap();
        assert!(matches!(fresh.expose_pair_rounds(1, 0, 2, q), Err(SatError::Coupling(0, 1))));
        assert!(matches!(fresh.expose_pair_rounds(2, 3, 2, 0.3), Err(SatError::Parameter(_))));
    }

    #[test]
    fn mean_edge_count_over_seeds() {
        let total: usize = (0..30).map(|s| gen_gnp(1000, 0.5, s).unwrap().edge_count()).sum();
        let mean = total as f64 / 30.0;
        assert!((mean - 249_750.0).abs() / 249_750.0 < 0.01);
    }
}
