//! Stochastic policy gradients for kernel policies.
//!
//! A sample draws a state from the discounted occupation measure by rolling
//! a geometric number of steps `t`, perturbs the mean action with Gaussian
//! noise, and estimates `Q` by summing `T + 1` rewards with `T` geometric as
//! well. The result is the single-knot RKHS function
//! `κ(s_t, ·) Σ⁻¹ (a_t − h(s_t)) Q̂ / (1 − γ)`.

use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::kernel::Policy;
use crate::rng::{geometric, standard_normal};

/// Reward of one transition and whether the new state is absorbing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub reward: f64,
    pub absorbing: bool,
}

/// Episodic environment driven by continuous actions.
///
/// Absorbing states keep returning their absorbing reward on every further
/// step; the estimators rely on this rather than on early termination.
pub trait Environment {
    fn state_dim(&self) -> usize;
    fn action_dim(&self) -> usize;
    /// Starts a new episode.
    fn reset<R: RngCore + ?Sized>(&mut self, rng: &mut R);
    /// Observation of the current state (length `state_dim`).
    fn observation(&self) -> Vec<f64>;
    fn step(&mut self, action: &[f64]) -> Transition;
    fn is_absorbing(&self) -> bool;
}

/// Diagonal covariance `Σ` of the Gaussian exploration noise.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplorationNoise {
    covariance_diag: Vec<f64>,
}

impl ExplorationNoise {
    pub fn new(covariance_diag: Vec<f64>) -> Result<Self> {
        if covariance_diag.is_empty() || covariance_diag.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(Error::InvalidArgument("noise covariance entries must be positive".into()));
        }
        Ok(Self { covariance_diag })
    }

    pub fn covariance_diag(&self) -> &[f64] {
        &self.covariance_diag
    }

    pub fn dim(&self) -> usize {
        self.covariance_diag.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradientConfig {
    pub gamma: f64,
    pub noise: ExplorationNoise,
    /// Hard cap on both geometric horizons.
    pub step_cap: usize,
}

impl GradientConfig {
    pub fn new(gamma: f64, noise: ExplorationNoise, step_cap: usize) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::InvalidArgument("discount must lie in (0, 1)".into()));
        }
        Ok(Self { gamma, noise, step_cap })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradientSample {
    pub knot: Vec<f64>,
    /// Action-space weight of `κ(knot, ·)`, before the step size.
    pub weight: Vec<f64>,
    pub horizon_t: usize,
    pub q_horizon: usize,
    pub q_estimate: f64,
}

/// `h(s) + n` with `n ~ N(0, Σ)`.
pub fn sample_action<P, R>(policy: &P, s: &[f64], noise: &ExplorationNoise, rng: &mut R) -> Vec<f64>
where
    P: Policy + ?Sized,
    R: RngCore + ?Sized,
{
    let mut a = vec![0.0; policy.action_dim()];
    policy.eval_into(s, &mut a);
    for (x, var) in a.iter_mut().zip(noise.covariance_diag()) {
        *x += libm::sqrt(*var) * standard_normal(rng);
    }
    a
}

/// Applies `a0` in the current state of `env`, then follows the stochastic
/// policy for `T` more steps. Returns the undiscounted sum of the `T + 1`
/// rewards and `T`.
pub fn estimate_q<E, P, R>(env: &mut E, policy: &P, a0: &[f64], cfg: &GradientConfig, rng: &mut R) -> (f64, usize)
where
    E: Environment + ?Sized,
    P: Policy + ?Sized,
    R: RngCore + ?Sized,
{
    let horizon = geometric(rng, cfg.gamma).min(cfg.step_cap);
    let mut q = env.step(a0).reward;
    for _ in 0..horizon {
        let s = env.observation();
        let a = sample_action(policy, &s, &cfg.noise, rng);
        q += env.step(&a).reward;
    }
    (q, horizon)
}

/// One unbiased gradient sample for `policy` on `env`.
///
/// When the episode is absorbed before step `t` the sample carries zero
/// weight at the last observation taken before absorption.
pub fn estimate_gradient<E, P, R>(env: &mut E, policy: &P, cfg: &GradientConfig, rng: &mut R) -> GradientSample
where
    E: Environment + ?Sized,
    P: Policy + ?Sized,
    R: RngCore + ?Sized,
{
    let t = geometric(rng, cfg.gamma).min(cfg.step_cap);
    env.reset(rng);
    let mut s = env.observation();
    for _ in 0..t {
        if env.is_absorbing() {
            break;
        }
        let a = sample_action(policy, &s, &cfg.noise, rng);
        env.step(&a);
        if env.is_absorbing() {
            break;
        }
        s = env.observation();
    }
    if env.is_absorbing() {
        return GradientSample {
            knot: s,
            weight: vec![0.0; policy.action_dim()],
            horizon_t: t,
            q_horizon: 0,
            q_estimate: 0.0,
        };
    }
    let mut mean = vec![0.0; policy.action_dim()];
    policy.eval_into(&s, &mut mean);
    let a = sample_action(policy, &s, &cfg.noise, rng);
    let (q, q_horizon) = estimate_q(env, policy, &a, cfg, rng);
    let scale = q / (1.0 - cfg.gamma);
    let weight = a
        .iter()
        .zip(&mean)
        .zip(cfg.noise.covariance_diag())
        .map(|((ai, hi), var)| (ai - hi) / var * scale)
        .collect();
    GradientSample { knot: s, weight, horizon_t: t, q_horizon, q_estimate: q }
}

/// `b` independent samples with weights divided by `b`, so that their sum
/// is the batch-averaged gradient.
pub fn batch_gradient<E, P, R>(
    env: &mut E,
    policy: &P,
    cfg: &GradientConfig,
    b: usize,
    rng: &mut R,
) -> Vec<GradientSample>
where
    E: Environment + ?Sized,
    P: Policy + ?Sized,
    R: RngCore + ?Sized,
{
    (0..b)
        .map(|_| {
            let mut g = estimate_gradient(env, policy, cfg, rng);
            g.weight.iter_mut().for_each(|w| *w /= b as f64);
            g
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::KernelPolicy;
    use crate::kernel::{Dictionary, KernelSpec};
    use crate::linalg::Matrix;
    use crate::rng::task_rng;

    /// One state, reward `scale · (offset − a²)`.
    struct Quadratic {
        scale: f64,
        offset: f64,
    }

    impl Environment for Quadratic {
        fn state_dim(&self) -> usize {
            1
        }
        fn action_dim(&self) -> usize {
            1
        }
        fn reset<R: RngCore + ?Sized>(&mut self, _rng: &mut R) {}
        fn observation(&self) -> Vec<f64> {
            vec![0.0]
        }
        fn step(&mut self, a: &[f64]) -> Transition {
            Transition { reward: self.scale * (self.offset - a[0] * a[0]), absorbing: false }
        }
        fn is_absorbing(&self) -> bool {
            false
        }
    }

    fn constant_policy(c: f64) -> KernelPolicy {
        let spec = KernelSpec::new(vec![1.0], vec![], 1).unwrap();
        let dict = Dictionary::from_flat(1, vec![0.0]).unwrap();
        KernelPolicy::new(spec, dict, Matrix::from_vec(1, 1, vec![c])).unwrap()
    }

    fn cfg(var: f64) -> GradientConfig {
        GradientConfig::new(0.9, ExplorationNoise::new(vec![var]).unwrap(), 200).unwrap()
    }

    #[test]
    fn noise_validation() {
        assert!(ExplorationNoise::new(vec![0.1, 0.0]).is_err());
        assert!(ExplorationNoise::new(vec![]).is_err());
        assert!(GradientConfig::new(1.0, ExplorationNoise::new(vec![1.0]).unwrap(), 10).is_err());
    }

    #[test]
    fn vanishing_noise_returns_mean() {
        let pol = constant_policy(0.7);
        let noise = ExplorationNoise::new(vec![1e-12]).unwrap();
        let mut rng = task_rng(1, 0);
        let a = sample_action(&pol, &[0.0], &noise, &mut rng);
        assert!((a[0] - 0.7).abs() < 1e-4);
    }

    #[test]
    fn zero_reward_gives_zero_weight() {
        let pol = constant_policy(0.3);
        let mut env = Quadratic { scale: 0.0, offset: 0.0 };
        let mut rng = task_rng(2, 0);
        for s in batch_gradient(&mut env, &pol, &cfg(0.05), 4, &mut rng) {
            assert_eq!(s.weight, vec![0.0]);
        }
    }

    #[test]
    fn rewards_scale_weights_exactly() {
        let pol = constant_policy(0.3);
        let mut a = Quadratic { scale: 1.0, offset: 2.0 };
        let mut b = Quadratic { scale: 8.0, offset: 2.0 };
        let mut ra = task_rng(3, 0);
        let mut rb = task_rng(3, 0);
        for _ in 0..100 {
            let sa = estimate_gradient(&mut a, &pol, &cfg(0.05), &mut ra);
            let sb = estimate_gradient(&mut b, &pol, &cfg(0.05), &mut rb);
            assert_eq!(sa.weight[0] * 8.0, sb.weight[0]);
            assert_eq!(sa.knot, sb.knot);
        }
    }
}
