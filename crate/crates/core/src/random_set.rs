//! The random set `X = Q(U)` for a standard uniform `U`, its hit events and
//! capacity functional `T(K) = Pr{X ∩ K ≠ ∅} = max_{z in K} F_C(z)`.
//!
//! Randomness comes from ChaCha20 (`rand_chacha`) seeded with a `u64`. Draws
//! are grouped in blocks of [`BLOCK`]; block `b` uses stream `b` of the master
//! seed, so a Monte-Carlo estimate is the same however the blocks are
//! scheduled.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::cdf::ConeCdf;
use crate::distribution::reaches;
use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::quantile::{check_level, QuantileFn};
use crate::region::CRegion;

/// Draws per independent sub-stream in [`capacity_mc`].
pub const BLOCK: usize = 4096;

/// ChaCha20 generator that remembers its seed.
#[derive(Clone, Debug)]
pub struct SeededRng {
    seed: u64,
    rng: ChaCha20Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng {
            seed,
            rng: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    /// Generator for stream `stream` of the same seed.
    pub fn substream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        SeededRng { seed, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform on `[0, 1)`.
    pub fn next_uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn inner(&mut self) -> &mut ChaCha20Rng {
        &mut self.rng
    }
}

/// A finite nonempty test set `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct CompactTestSet {
    points: Vec<Vector>,
}

impl CompactTestSet {
    pub fn new(points: Vec<Vector>) -> Result<Self> {
        let dim = points.first().ok_or(Error::InvalidInput("K: at least one point required"))?.dim();
        for p in &points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
            if !p.is_finite() {
                return Err(Error::InvalidInput("K: non-finite coordinate"));
            }
        }
        Ok(CompactTestSet { points })
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// One realisation `(U, Q(U))`.
#[derive(Clone, Debug)]
pub struct Draw {
    pub u: f64,
    pub region: CRegion,
}

/// Monte-Carlo hit frequency next to the exact capacity.
#[derive(Clone, Debug, PartialEq)]
pub struct CapacityEstimate {
    pub exact: f64,
    pub mc_estimate: f64,
    pub n_draws: usize,
    pub hits: usize,
    pub std_error: f64,
    pub seed: u64,
}

pub fn draw(q: &QuantileFn, rng: &mut SeededRng) -> Result<Draw> {
    let u = rng.next_uniform();
    Ok(Draw {
        u,
        region: q.lower_quantile(u)?,
    })
}

/// `Q(u) ∩ K ≠ ∅`, decided pointwise through exact membership.
pub fn hits(q: &QuantileFn, u: f64, k: &CompactTestSet) -> Result<bool> {
    check_level(u)?;
    for z in &k.points {
        if q.member(u, z)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `T(K) = max_{z in K} F_C(z)`.
pub fn capacity_exact(cdf: &ConeCdf, k: &CompactTestSet) -> Result<f64> {
    let mut best: f64 = 0.0;
    for z in &k.points {
        best = best.max(cdf.lower_cdf(z)?);
    }
    Ok(best)
}

/// The draws `(u, hit)` of block `block` (`count <= BLOCK` draws) given the
/// values `F_C(z)` on `K`. `member(u, z)` only depends on `F_C(z)`, so the
/// values are computed once and the per-draw test is the membership rule
/// itself.
pub fn block_draws(values: &[f64], seed: u64, block: u64, count: usize) -> impl Iterator<Item = (f64, bool)> + '_ {
    let mut rng = SeededRng::substream(seed, block);
    (0..count).map(move |_| {
        let u = rng.next_uniform();
        (u, values.iter().any(|&v| u <= 0.0 || reaches(v, u)))
    })
}

/// Hit count of one block, see [`block_draws`].
pub fn capacity_block(values: &[f64], seed: u64, block: u64, count: usize) -> usize {
    block_draws(values, seed, block, count).filter(|d| d.1).count()
}

/// `F_C` on every point of `K`.
pub fn test_set_values(cdf: &ConeCdf, k: &CompactTestSet) -> Result<Vec<f64>> {
    k.points.iter().map(|z| cdf.lower_cdf(z)).collect()
}

/// Assembles an estimate from a total hit count.
pub fn estimate_from_hits(exact: f64, hits: usize, n: usize, seed: u64) -> CapacityEstimate {
    let mc = hits as f64 / n as f64;
    CapacityEstimate {
        exact,
        mc_estimate: mc,
        n_draws: n,
        hits,
        std_error: libm::sqrt(mc * (1.0 - mc) / n as f64),
        seed,
    }
}

/// Number of draws in each block for `n` draws.
pub fn block_sizes(n: usize) -> impl Iterator<Item = (u64, usize)> {
    (0..n.div_ceil(BLOCK)).map(move |b| (b as u64, BLOCK.min(n - b * BLOCK)))
}

/// Monte-Carlo estimate of `T(K)` from `n >= 100` draws of `U`.
pub fn capacity_mc(q: &QuantileFn, k: &CompactTestSet, n: usize, seed: u64) -> Result<CapacityEstimate> {
    if n < 100 {
        return Err(Error::Config("n: at least 100 draws required"));
    }
    let values = test_set_values(q.cdf(), k)?;
    let exact = values.iter().fold(0.0f64, |a, &b| a.max(b));
    let hits = block_sizes(n)
        .map(|(b, count)| capacity_block(&values, seed, b, count))
        .sum();
    Ok(estimate_from_hits(exact, hits, n, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::ConvexCone;
    use crate::distribution::EmpiricalSample;
    use alloc::vec;

    fn s4q() -> QuantileFn {
        let s = EmpiricalSample::new(vec![
            Vector::from([0.0, 0.0]),
            Vector::from([1.0, 0.0]),
            Vector::from([0.0, 1.0]),
            Vector::from([1.0, 1.0]),
        ])
        .unwrap();
        QuantileFn::new(ConeCdf::new(s, ConvexCone::orthant(2), 17).unwrap())
    }

    #[test]
    fn reproducible_draws() {
        let q = s4q();
        let mut a = SeededRng::new(7);
        let mut b = SeededRng::new(7);
        let (da, db) = (draw(&q, &mut a).unwrap(), draw(&q, &mut b).unwrap());
        assert_eq!(da.u, db.u);
        assert_eq!(da.region, db.region);
        assert!(q.lower_quantile(0.0).unwrap().is_whole());
    }

    #[test]
    fn hit_examples() {
        let q = s4q();
        let one = CompactTestSet::new(vec![Vector::from([1.0, 1.0])]).unwrap();
        let origin = CompactTestSet::new(vec![Vector::from([0.0, 0.0])]).unwrap();
        assert!(hits(&q, 0.9, &one).unwrap());
        assert!(!hits(&q, 0.5, &origin).unwrap());
        assert!(hits(&q, 0.0, &origin).unwrap());
        assert_eq!(capacity_exact(q.cdf(), &one).unwrap(), 1.0);
        assert_eq!(capacity_exact(q.cdf(), &origin).unwrap(), 0.25);
        assert!(CompactTestSet::new(vec![]).is_err());
    }

    #[test]
    fn monte_carlo() {
        let q = s4q();
        let origin = CompactTestSet::new(vec![Vector::from([0.0, 0.0])]).unwrap();
        let e = capacity_mc(&q, &origin, 20_000, 11).unwrap();
        assert!((e.mc_estimate - e.exact).abs() <= 3.0 * e.std_error);
        assert_eq!(e, capacity_mc(&q, &origin, 20_000, 11).unwrap());
        let one = CompactTestSet::new(vec![Vector::from([1.0, 1.0])]).unwrap();
        assert_eq!(capacity_mc(&q, &one, 500, 3).unwrap().mc_estimate, 1.0);
        assert!(matches!(capacity_mc(&q, &one, 99, 3), Err(Error::Config(_))));
    }
}
