//! Sampling helpers on top of [`rand_core::RngCore`].
//!
//! Every stochastic routine in the crate takes an explicit generator. Per-task
//! streams are derived from a master seed with [`task_rng`], which selects an
//! independent ChaCha stream per task.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Uniform draw in `[0, 1)` with 53 bits of precision.
pub fn uniform<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform draw in `(0, 1]`.
pub fn uniform_open0<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    1.0 - uniform(rng)
}

pub fn uniform_range<R: RngCore + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * uniform(rng)
}

/// Standard normal draw (Box–Muller, one variate per call).
pub fn standard_normal<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    let u1 = uniform_open0(rng);
    let u2 = uniform(rng);
    libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(core::f64::consts::TAU * u2)
}

/// Geometric draw with `P(k) = (1 − γ) γ^k`, `k = 0, 1, …`.
pub fn geometric<R: RngCore + ?Sized>(rng: &mut R, gamma: f64) -> usize {
    debug_assert!(gamma > 0.0 && gamma < 1.0);
    let u = uniform_open0(rng);
    let k = libm::floor(libm::log(u) / libm::log(gamma));
    if k >= usize::MAX as f64 {
        usize::MAX
    } else {
        k as usize
    }
}

/// Generator for task `task` derived from `master_seed`.
pub fn task_rng(master_seed: u64, task: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(task);
    rng
}
