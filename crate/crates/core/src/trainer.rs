//! The training loop: per-task batch gradients, a gradient step on the
//! shared dictionary, projection onto the coupling constraint, dictionary
//! pruning and the first-order stopping check. Agnostic runs skip the
//! projection, consensus runs project with `ε = 0`.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand_chacha::ChaCha8Rng;
use rand_core::RngCore;

use crate::bundle::PolicyBundle;
use crate::cdkomp::{prune_with_inverse, GramInverse};
use crate::error::{Error, Result};
use crate::gradient::{batch_gradient, sample_action, Environment, ExplorationNoise, GradientConfig, GradientSample};
use crate::kernel::{GramMatrix, KernelSpec, Policy};
use crate::nav::{EpisodeLimits, EpisodeStatus, NavEnv, Pose, Scenario, ANGULAR_DIMS};
use crate::projection::{project_exact, project_relaxed, SolverOptions};
use crate::rng::task_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Independent task policies, no central policy.
    Agnostic,
    /// One shared policy: projection with `ε = 0`.
    Consensus,
    /// Task policies within `ε` of a central policy.
    Cross,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionMode {
    Exact,
    Relaxed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainerConfig {
    pub mode: Mode,
    pub projection: ProjectionMode,
    pub gamma: f64,
    pub step_size: f64,
    pub epsilon: f64,
    pub beta: f64,
    /// Stopping threshold; the check is only enforced when positive.
    pub alpha: f64,
    pub batch_size: usize,
    pub noise_diag: Vec<f64>,
    pub length_scales: Vec<f64>,
    pub angular_dims: Vec<usize>,
    pub order_cap: usize,
    pub max_iters: usize,
    pub seed: u64,
    /// Cap on the geometric horizons and on evaluation episodes.
    pub step_cap: usize,
    pub goal_radius: f64,
    pub max_speed: Option<f64>,
    pub max_turn_rate: Option<f64>,
    pub solver_tol: f64,
    pub max_sweeps: usize,
    /// Iterations between fresh recomputations of the inverse Gram matrix.
    pub inverse_refresh: usize,
}

/// Compression budget used by the navigation preset.
pub const DEFAULT_BETA: f64 = 0.1;

impl TrainerConfig {
    /// Constants of the navigation experiments; `ε` is 3 in cross mode and
    /// 0 otherwise.
    pub fn paper_vi(mode: Mode) -> Self {
        Self {
            mode,
            projection: ProjectionMode::Exact,
            gamma: 0.9,
            step_size: 0.1,
            epsilon: if mode == Mode::Cross { 3.0 } else { 0.0 },
            beta: DEFAULT_BETA,
            alpha: 0.0,
            batch_size: 4,
            noise_diag: vec![0.05, 0.05],
            length_scales: vec![1.0, PI / 5.0, 1.0, PI / 5.0, PI / 10.0],
            angular_dims: ANGULAR_DIMS.to_vec(),
            order_cap: 400,
            max_iters: 29_000,
            seed: 0,
            step_cap: 200,
            goal_radius: 0.3,
            max_speed: None,
            max_turn_rate: None,
            solver_tol: 1e-8,
            max_sweeps: 10_000,
            inverse_refresh: 200,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, why: &str| Err(Error::InvalidArgument(format!("{field}: {why}")));
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return bad("gamma", "must lie in (0, 1)");
        }
        if !(self.step_size > 0.0) || !self.step_size.is_finite() {
            return bad("step_size", "must be positive");
        }
        if !(self.epsilon >= 0.0) || !self.epsilon.is_finite() {
            return bad("epsilon", "must be a nonnegative number");
        }
        if !(self.beta >= 0.0) || !self.beta.is_finite() {
            return bad("beta", "must be a nonnegative number");
        }
        if !(self.alpha >= 0.0) {
            return bad("alpha", "must be nonnegative");
        }
        if self.batch_size == 0 {
            return bad("batch_size", "must be at least 1");
        }
        if self.noise_diag.is_empty() || self.noise_diag.iter().any(|v| !(*v > 0.0)) {
            return bad("noise", "covariance entries must be positive");
        }
        if self.length_scales.is_empty() || self.length_scales.iter().any(|v| !(*v > 0.0)) {
            return bad("length_scales", "entries must be positive");
        }
        if self.angular_dims.iter().any(|d| *d >= self.length_scales.len()) {
            return bad("angular_dims", "index beyond the state dimension");
        }
        if self.order_cap == 0 {
            return bad("order_cap", "must be at least 1");
        }
        if self.step_cap == 0 {
            return bad("step_cap", "must be at least 1");
        }
        if !(self.goal_radius >= 0.0) {
            return bad("goal_radius", "must be nonnegative");
        }
        if !(self.solver_tol > 0.0) {
            return bad("solver_tol", "must be positive");
        }
        Ok(())
    }

    pub fn kernel_spec(&self) -> Result<KernelSpec> {
        KernelSpec::new(self.length_scales.clone(), self.angular_dims.clone(), self.noise_diag.len())
    }

    pub fn gradient_config(&self) -> Result<GradientConfig> {
        GradientConfig::new(self.gamma, ExplorationNoise::new(self.noise_diag.clone())?, self.step_cap)
    }

    pub fn episode_limits(&self) -> EpisodeLimits {
        EpisodeLimits { goal_radius: self.goal_radius, max_speed: self.max_speed, max_turn_rate: self.max_turn_rate }
    }

    pub fn solver_options(&self) -> SolverOptions {
        SolverOptions { tol: self.solver_tol, max_sweeps: self.max_sweeps }
    }

    /// Coupling radius the projection actually uses.
    pub fn effective_epsilon(&self) -> Option<f64> {
        match self.mode {
            Mode::Agnostic => None,
            Mode::Consensus => Some(0.0),
            Mode::Cross => Some(self.epsilon),
        }
    }
}

/// Maps a closure over per-task workers.
pub trait Executor {
    fn map_mut<W, T, F>(&self, items: &mut [W], f: F) -> Vec<T>
    where
        W: Send,
        T: Send,
        F: Fn(usize, &mut W) -> T + Sync;
}

/// Runs the workers one after another.
#[derive(Debug, Clone, Copy, Default)]
pub struct SerialExecutor;

impl Executor for SerialExecutor {
    fn map_mut<W, T, F>(&self, items: &mut [W], f: F) -> Vec<T>
    where
        W: Send,
        T: Send,
        F: Fn(usize, &mut W) -> T + Sync,
    {
        items.iter_mut().enumerate().map(|(i, w)| f(i, w)).collect()
    }
}

/// A task's environment and its private random stream.
#[derive(Debug, Clone)]
pub struct TaskWorker<E> {
    pub env: E,
    pub rng: ChaCha8Rng,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    /// Mean Q-estimate of each task's batch.
    pub return_estimates: Vec<f64>,
    /// `‖h_i − g‖` after pruning; absent without a central policy.
    pub dist_to_center: Option<Vec<f64>>,
    pub model_order: usize,
    pub prune_bias: f64,
    pub removed: usize,
    pub cap_forced: bool,
    /// Largest `sup_{h ∈ C} ⟨∇̂U_i, h − h_i⟩`; absent in agnostic mode.
    pub margin: Option<f64>,
    pub stop: bool,
    /// Wall time of the iteration, filled in by callers that have a clock.
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrainingHistory {
    pub records: Vec<IterationRecord>,
}

/// Stepwise training state.
#[derive(Debug, Clone)]
pub struct Trainer<E> {
    config: TrainerConfig,
    grad_cfg: GradientConfig,
    workers: Vec<TaskWorker<E>>,
    bundle: PolicyBundle,
    gram: GramMatrix,
    inverse: GramInverse,
    iteration: usize,
    history: TrainingHistory,
    stopped: bool,
}

impl<E: Environment + Send> Trainer<E> {
    pub fn new(config: TrainerConfig, envs: Vec<E>) -> Result<Self> {
        config.validate()?;
        if envs.is_empty() {
            return Err(Error::InvalidArgument("tasks: at least one environment is required".into()));
        }
        let spec = config.kernel_spec()?;
        for env in &envs {
            if env.state_dim() != spec.state_dim() {
                return Err(Error::DimensionMismatch { expected: spec.state_dim(), got: env.state_dim() });
            }
            if env.action_dim() != spec.action_dim() {
                return Err(Error::DimensionMismatch { expected: spec.action_dim(), got: env.action_dim() });
            }
        }
        let workers = envs
            .into_iter()
            .enumerate()
            .map(|(i, env)| TaskWorker { env, rng: task_rng(config.seed, i as u64) })
            .collect::<Vec<_>>();
        let with_central = config.mode != Mode::Agnostic;
        let bundle = PolicyBundle::zero(spec, workers.len(), with_central, config.effective_epsilon().unwrap_or(0.0));
        let gram = GramMatrix::compute(&bundle.spec, &bundle.dict);
        let inverse = GramInverse::compute(&gram)?;
        Ok(Self {
            grad_cfg: config.gradient_config()?,
            config,
            workers,
            bundle,
            gram,
            inverse,
            iteration: 0,
            history: TrainingHistory::default(),
            stopped: false,
        })
    }

    pub fn config(&self) -> &TrainerConfig {
        &self.config
    }

    pub fn bundle(&self) -> &PolicyBundle {
        &self.bundle
    }

    pub fn gram(&self) -> &GramMatrix {
        &self.gram
    }

    pub fn history(&self) -> &TrainingHistory {
        &self.history
    }

    pub fn history_mut(&mut self) -> &mut TrainingHistory {
        &mut self.history
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    /// True once the stopping check fired or the iteration budget is spent.
    pub fn finished(&self) -> bool {
        self.stopped || self.iteration >= self.config.max_iters
    }

    pub fn into_parts(self) -> (PolicyBundle, TrainingHistory) {
        (self.bundle, self.history)
    }

    /// One full iteration.
    pub fn step<X: Executor>(&mut self, exec: &X) -> Result<&IterationRecord> {
        let k = self.iteration;
        let at = |e: Error| Error::AtIteration { iteration: k, source: Box::new(e) };

        let bundle = &self.bundle;
        let grad_cfg = &self.grad_cfg;
        let b = self.config.batch_size;
        let samples: Vec<Vec<GradientSample>> = exec.map_mut(&mut self.workers, |i, w| {
            batch_gradient(&mut w.env, &bundle.task_view(i), grad_cfg, b, &mut w.rng)
        });
        if samples.iter().flatten().any(|s| s.weight.iter().any(|x| !x.is_finite())) {
            return Err(Error::NonFinite { context: "gradient", iteration: k });
        }

        let margin = self.config.effective_epsilon().map(|eps| stopping_margin(&samples, &self.bundle, eps));
        let return_estimates = samples
            .iter()
            .map(|s| s.iter().map(|g| g.q_estimate).sum::<f64>() / s.len() as f64)
            .collect();

        // gradient step: h_i += η Σ_b κ(s_b, ·) ŵ_b
        for (i, task_samples) in samples.iter().enumerate() {
            for s in task_samples {
                let (idx, appended) = self.bundle.insert_knot(&s.knot).map_err(at)?;
                if appended {
                    self.gram.push_last(&self.bundle.spec, &self.bundle.dict);
                    self.inverse.push_last(&self.gram).map_err(at)?;
                }
                let row = self.bundle.tasks[i].row_mut(idx);
                for (w, g) in row.iter_mut().zip(&s.weight) {
                    *w += self.config.step_size * g;
                }
            }
        }

        match self.config.mode {
            Mode::Agnostic => {}
            Mode::Consensus => {
                self.bundle = project_relaxed(&self.bundle, 0.0, &self.gram).map_err(at)?.bundle;
            }
            Mode::Cross => {
                let eps = self.config.epsilon;
                self.bundle = match self.config.projection {
                    ProjectionMode::Exact => {
                        project_exact(&self.bundle, eps, &self.gram, self.config.solver_options()).map_err(at)?.bundle
                    }
                    ProjectionMode::Relaxed => project_relaxed(&self.bundle, eps, &self.gram).map_err(at)?.bundle,
                };
            }
        }

        if self.config.inverse_refresh > 0 && (k + 1) % self.config.inverse_refresh == 0 {
            self.inverse = GramInverse::compute(&self.gram).map_err(at)?;
        }
        let pruned = prune_with_inverse(&self.bundle, self.config.beta, self.config.order_cap, &self.gram, &self.inverse).map_err(at)?;
        self.bundle = pruned.bundle;
        self.gram = pruned.gram;
        self.inverse = pruned.inverse;
        if !self.bundle.is_finite() {
            return Err(Error::NonFinite { context: "weights", iteration: k });
        }

        let stop = self.config.alpha > 0.0 && margin.map_or(false, |m| m <= self.config.alpha);
        self.stopped = stop;
        self.iteration += 1;
        self.history.records.push(IterationRecord {
            iteration: k,
            return_estimates,
            dist_to_center: self.bundle.distances_to_center(&self.gram),
            model_order: self.bundle.order(),
            prune_bias: pruned.report.max_bias(),
            removed: pruned.report.removed_knots.len(),
            cap_forced: pruned.report.cap_forced,
            margin,
            stop,
            seconds: 0.0,
        });
        Ok(self.history.records.last().expect("record just pushed"))
    }
}

/// Runs until the stopping check fires or `max_iters` iterations are done.
pub fn train<E, X>(config: TrainerConfig, envs: Vec<E>, exec: &X) -> Result<(PolicyBundle, TrainingHistory)>
where
    E: Environment + Send,
    X: Executor,
{
    let mut trainer = Trainer::new(config, envs)?;
    while !trainer.finished() {
        trainer.step(exec)?;
    }
    Ok(trainer.into_parts())
}

/// Navigation environments for `scenarios` under the episode limits of `config`.
pub fn nav_envs(config: &TrainerConfig, scenarios: &[Scenario]) -> Result<Vec<NavEnv>> {
    scenarios.iter().map(|s| NavEnv::new(s.clone(), config.episode_limits())).collect()
}

/// `sup_{h ∈ C} ⟨d, h − h_i⟩ = ⟨d, g − h_i⟩ + ε ‖d‖` for the single-knot
/// expansion `d = Σ_b κ(s_b, ·) ŵ_b`, evaluated through the reproducing
/// property so no dictionary merge is needed.
pub fn support_margin(samples: &[GradientSample], spec: &KernelSpec, gap: &dyn Fn(&[f64]) -> Vec<f64>, eps: f64) -> f64 {
    let mut inner = 0.0;
    for s in samples {
        let v = gap(&s.knot);
        inner += s.weight.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>();
    }
    let mut norm_sq = 0.0;
    for a in samples {
        for b in samples {
            let w: f64 = a.weight.iter().zip(&b.weight).map(|(x, y)| x * y).sum();
            if w != 0.0 {
                norm_sq += w * spec.eval_unchecked(&a.knot, &b.knot);
            }
        }
    }
    inner + eps * libm::sqrt(norm_sq.max(0.0))
}

/// Largest stopping margin over tasks for the pre-step bundle.
pub fn stopping_margin(samples: &[Vec<GradientSample>], bundle: &PolicyBundle, eps: f64) -> f64 {
    let p = bundle.spec.action_dim();
    let central = bundle.central_view();
    let mut worst = f64::NEG_INFINITY;
    for (i, task_samples) in samples.iter().enumerate() {
        let task = bundle.task_view(i);
        let gap = |s: &[f64]| {
            let mut h = vec![0.0; p];
            task.eval_into(s, &mut h);
            let mut g = vec![0.0; p];
            if let Some(c) = &central {
                c.eval_into(s, &mut g);
            }
            g.iter().zip(&h).map(|(a, b)| a - b).collect::<Vec<f64>>()
        };
        worst = worst.max(support_margin(task_samples, &bundle.spec, &gap, eps));
    }
    worst
}

/// `(stop, margin)` with `stop = margin ≤ α`.
pub fn stopping_check(samples: &[Vec<GradientSample>], bundle: &PolicyBundle, alpha: f64, eps: f64) -> (bool, f64) {
    let m = stopping_margin(samples, bundle, eps);
    (m <= alpha, m)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalSummary {
    pub episodes: usize,
    pub mean_return: f64,
    pub success_rate: f64,
    pub collision_rate: f64,
    pub mean_steps: f64,
}

impl EvalSummary {
    /// Cost is the negated return.
    pub fn mean_cost(&self) -> f64 {
        -self.mean_return
    }
}

/// Evaluation settings shared by [`evaluate`] and [`rollout`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    pub gamma: f64,
    pub step_cap: usize,
    pub limits: EpisodeLimits,
    /// Use mean actions instead of sampling the exploration noise.
    pub deterministic: bool,
}

impl EvalOptions {
    pub fn from_config(config: &TrainerConfig) -> Self {
        Self { gamma: config.gamma, step_cap: config.step_cap, limits: config.episode_limits(), deterministic: true }
    }
}

fn act<P: Policy + ?Sized, R: RngCore + ?Sized>(
    policy: &P,
    s: &[f64],
    noise: Option<&ExplorationNoise>,
    rng: &mut R,
) -> Vec<f64> {
    match noise {
        Some(n) => sample_action(policy, s, n, rng),
        None => {
            let mut a = vec![0.0; policy.action_dim()];
            policy.eval_into(s, &mut a);
            a
        }
    }
}

/// Discounted return over `step_cap` steps from the current state of `env`,
/// plus the number of steps before absorption.
fn run_episode<P: Policy + ?Sized, R: RngCore + ?Sized>(
    env: &mut NavEnv,
    policy: &P,
    opts: &EvalOptions,
    noise: Option<&ExplorationNoise>,
    rng: &mut R,
) -> (f64, usize) {
    let mut total = 0.0;
    let mut disc = 1.0;
    for t in 0..opts.step_cap {
        let s = env.observation();
        let a = act(policy, &s, noise, rng);
        let tr = env.step(&a);
        total += disc * tr.reward;
        disc *= opts.gamma;
        if tr.absorbing {
            // the absorbing reward repeats for the remaining steps
            let after = env.step(&a).reward;
            let remaining = (opts.step_cap - t - 1) as i32;
            total += after * disc * (1.0 - libm::pow(opts.gamma, remaining as f64)) / (1.0 - opts.gamma);
            return (total, t + 1);
        }
    }
    (total, opts.step_cap)
}

/// Monte-Carlo evaluation over `episodes` resets of `scenario`.
pub fn evaluate<P: Policy + ?Sized, R: RngCore + ?Sized>(
    policy: &P,
    scenario: &Scenario,
    episodes: usize,
    opts: &EvalOptions,
    noise: Option<&ExplorationNoise>,
    rng: &mut R,
) -> Result<EvalSummary> {
    if episodes == 0 {
        return Err(Error::InvalidArgument("episodes: must be at least 1".into()));
    }
    let noise = if opts.deterministic { None } else { noise };
    let mut env = NavEnv::new(scenario.clone(), opts.limits)?;
    let (mut ret, mut succ, mut coll, mut steps) = (0.0, 0usize, 0usize, 0usize);
    for _ in 0..episodes {
        env.reset(rng);
        let (r, n) = run_episode(&mut env, policy, opts, noise, rng);
        ret += r;
        steps += n;
        match env.status() {
            EpisodeStatus::Finished => succ += 1,
            EpisodeStatus::Collided => coll += 1,
            EpisodeStatus::Running => {}
        }
    }
    let e = episodes as f64;
    Ok(EvalSummary {
        episodes,
        mean_return: ret / e,
        success_rate: succ as f64 / e,
        collision_rate: coll as f64 / e,
        mean_steps: steps as f64 / e,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRow {
    pub t: usize,
    pub x: f64,
    pub y: f64,
    pub psi: f64,
    pub action_z: f64,
    pub action_psi: f64,
    pub reward: f64,
    /// Distance to the current goal before the action.
    pub d_g: f64,
    pub collided: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub rows: Vec<TrajectoryRow>,
    pub status: EpisodeStatus,
    pub goals_reached: usize,
    /// Pose after the last step.
    pub final_pose: Pose,
}

impl Trajectory {
    pub fn reached_goal(&self) -> bool {
        self.status == EpisodeStatus::Finished
    }

    pub fn collided(&self) -> bool {
        self.status == EpisodeStatus::Collided
    }
}

/// One episode, stopping at absorption or after `step_cap` steps.
pub fn rollout<P: Policy + ?Sized, R: RngCore + ?Sized>(
    policy: &P,
    scenario: &Scenario,
    start: Option<Pose>,
    opts: &EvalOptions,
    noise: Option<&ExplorationNoise>,
    rng: &mut R,
) -> Result<Trajectory> {
    let noise = if opts.deterministic { None } else { noise };
    let mut env = NavEnv::new(scenario.clone(), opts.limits)?;
    env.reset(rng);
    if let Some(p) = start {
        env.set_pose(p);
    }
    let mut rows = Vec::new();
    for t in 0..opts.step_cap {
        let pose = env.pose();
        let d_g = env.goal_distance();
        let s = env.observation();
        let a = act(policy, &s, noise, rng);
        let tr = env.step(&a);
        rows.push(TrajectoryRow {
            t,
            x: pose.x,
            y: pose.y,
            psi: pose.psi,
            action_z: a[0],
            action_psi: a[1],
            reward: tr.reward,
            d_g,
            collided: env.status() == EpisodeStatus::Collided,
        });
        if tr.absorbing {
            break;
        }
    }
    let status = env.status();
    let goals_reached = env.goal_index() + usize::from(status == EpisodeStatus::Finished);
    Ok(Trajectory { rows, status, goals_reached, final_pose: env.pose() })
}
