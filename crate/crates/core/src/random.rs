//! Seeded instance generation.
//!
//! The stream is SplitMix64 (Vigna's reference constants). A draw in `[0, 1)`
//! takes the top 53 bits of `next_u64` and multiplies by `2^-53`; uniform
//! draws on `[lo, hi)` are `lo + (hi - lo) * u`. Both steps are fixed here so
//! other implementations can reproduce the same loops from the same seed.

use alloc::vec::Vec;

use rand_xoshiro::rand_core::{RngCore, SeedableRng};

use crate::error::Result;
use crate::linalg::{check_dim, determinant, MatN, VecN};
use crate::loops::{LoopN, Role};
use crate::realization::check_inequalities;

/// Main parts with `|det| < MIN_RANDOM_DET` are resampled by [`random_loop`].
pub const MIN_RANDOM_DET: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitMix64(rand_xoshiro::SplitMix64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self(rand_xoshiro::SplitMix64::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 bits of resolution.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

/// n vectors with i.i.d. coordinates uniform on `[-1, 1)`, drawn vector by
/// vector.
pub fn random_main(n: usize, rng: &mut SplitMix64) -> Vec<VecN> {
    (0..n)
        .map(|_| VecN::from_vec_unchecked((0..n).map(|_| rng.uniform(-1.0, 1.0)).collect()))
        .collect()
}

/// A random vertex loop of either orientation, no determinant filtering.
pub fn random_signed_loop(n: usize, rng: &mut SplitMix64) -> Result<LoopN> {
    check_dim(n)?;
    Ok(LoopN::from_main_unchecked(random_main(n, rng), Role::Vertex))
}

/// Seeded random positive vertex loop.
///
/// Main parts with `|det| < 1e-3` are redrawn; a negative determinant is
/// fixed by negating the first coordinate of every vector.
pub fn random_loop(n: usize, seed: u64) -> Result<LoopN> {
    check_dim(n)?;
    let mut rng = SplitMix64::new(seed);
    Ok(random_positive_loop(n, &mut rng))
}

/// Same as [`random_loop`] but continues an existing stream.
pub fn random_positive_loop(n: usize, rng: &mut SplitMix64) -> LoopN {
    loop {
        let mut main = random_main(n, rng);
        let det = determinant(&MatN::from_columns(&main).expect("dimension checked by caller"));
        if det.abs() < MIN_RANDOM_DET {
            continue;
        }
        if det < 0.0 {
            for v in &mut main {
                let mut c = v.clone().into_coords();
                c[0] = -c[0];
                *v = VecN::from_vec_unchecked(c);
            }
        }
        return LoopN::from_main_unchecked(main, Role::Vertex);
    }
}

/// n+1 lengths log-uniform on `[0.1, 10)`, redrawn until they satisfy the
/// strict simplex inequalities.
pub fn random_feasible_lengths(n: usize, rng: &mut SplitMix64) -> Vec<f64> {
    let (lo, hi) = (libm::log(0.1), libm::log(10.0));
    loop {
        let lengths: Vec<f64> = (0..=n).map(|_| libm::exp(rng.uniform(lo, hi))).collect();
        if check_inequalities(&lengths).is_ok_and(|r| r.feasible) {
            return lengths;
        }
    }
}
