//! Subcommands of the `crosslearn` binary.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use crosslearn_core::gradient::ExplorationNoise;
use crosslearn_core::nav::{EpisodeLimits, Pose, PRESET_NAMES};
use crosslearn_core::rng::task_rng;
use crosslearn_core::trainer::{evaluate, rollout, EvalOptions, Mode, Trainer};
use crosslearn_core::{KernelPolicy, PolicyBundle};
use toml::Value;

use crate::config::{default_out_dir, parse_value, ConfigSource, RunConfig, KEYS, PRESETS};
use crate::error::{CliError, CliResult};
use crate::exec::ThreadedExecutor;
use crate::experiment::{all_policies, evaluate_selection, parse_selection, train_selection, train_timed};
use crate::io::{
    load_bundle, metrics_rows, prune_row, resolve_scenario, save_bundle, scenario_to_toml, summary_row,
    trajectory_rows, write_csv, METRICS_HEADER, PRUNE_HEADER, SUMMARY_HEADER, TRAJECTORY_HEADER,
};

#[derive(Debug, Parser)]
#[command(name = "crosslearn", version, about = "Cross-learning of kernel navigation policies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train a policy bundle and write metrics, checkpoints and the final bundle.
    Train(TrainCmd),
    /// Evaluate a saved bundle over many episodes.
    Eval(EvalCmd),
    /// Record one episode of a saved policy as a trajectory CSV.
    Rollout(RolloutCmd),
    /// Train and evaluate the agnostic, consensus and cross policies side by side.
    Compare(CompareCmd),
    /// List scenario presets and config presets, or print one scenario file.
    Presets(PresetsCmd),
}

/// Training options shared by `train` and `compare`. Each flag overrides the
/// matching config key.
#[derive(Debug, Args, Default)]
pub struct TrainOpts {
    /// TOML file of flat dotted keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Named constant set.
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub projection: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub epsilon: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub iters: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Count of training presets, or a comma list of presets / scenario files.
    #[arg(long)]
    pub tasks: Option<String>,
    #[arg(long)]
    pub max_speed: Option<f64>,
    #[arg(long)]
    pub max_turn_rate: Option<f64>,
    #[arg(long)]
    pub threads: Option<u64>,
    /// Output directory (default: $CROSSLEARN_OUT or ./out).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub checkpoint_every: Option<u64>,
    /// Any config key, as `key=value`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Print per-iteration progress.
    #[arg(short, long, conflicts_with = "quiet")]
    pub verbose: bool,
    #[arg(short, long)]
    pub quiet: bool,
}

impl TrainOpts {
    pub fn source(&self) -> CliResult<ConfigSource> {
        let mut src = match &self.config {
            Some(p) => ConfigSource::from_file(p)?,
            None => ConfigSource::default(),
        };
        let mut put = |k: &str, v: Option<Value>| {
            if let Some(v) = v {
                src.set(k, v);
            }
        };
        put("preset", self.preset.clone().map(Value::String));
        put("trainer.mode", self.mode.clone().map(Value::String));
        put("trainer.projection", self.projection.clone().map(Value::String));
        put("trainer.epsilon", self.epsilon.map(Value::Float));
        put("trainer.beta", self.beta.map(Value::Float));
        put("trainer.iters", self.iters.map(|v| Value::Integer(v as i64)));
        put("trainer.seed", self.seed.map(|v| Value::Integer(v as i64)));
        put("env.tasks", self.tasks.as_deref().map(parse_value));
        put("env.max_speed", self.max_speed.map(Value::Float));
        put("env.max_turn_rate", self.max_turn_rate.map(Value::Float));
        put("run.threads", self.threads.map(|v| Value::Integer(v as i64)));
        put("output.dir", self.out.as_ref().map(|p| Value::String(p.display().to_string())));
        put("output.checkpoint_every", self.checkpoint_every.map(|v| Value::Integer(v as i64)));
        if self.verbose {
            put("output.verbosity", Some(Value::Integer(2)));
        }
        if self.quiet {
            put("output.verbosity", Some(Value::Integer(0)));
        }
        for a in &self.set {
            src.set_assignment(a)?;
        }
        Ok(src)
    }

    pub fn resolve(&self) -> CliResult<RunConfig> {
        self.source()?.resolve()
    }
}

#[derive(Debug, Args)]
pub struct TrainCmd {
    #[command(flatten)]
    pub opts: TrainOpts,
}

/// Episode settings for `eval` and `rollout`.
#[derive(Debug, Args)]
pub struct EpisodeOpts {
    #[arg(long, default_value_t = 0.9)]
    pub gamma: f64,
    #[arg(long, default_value_t = 200)]
    pub step_cap: usize,
    #[arg(long, default_value_t = 0.3)]
    pub goal_radius: f64,
    #[arg(long)]
    pub max_speed: Option<f64>,
    #[arg(long)]
    pub max_turn_rate: Option<f64>,
    /// Exploration covariance diagonal used by stochastic episodes.
    #[arg(long, value_delimiter = ',', default_values_t = [0.05, 0.05])]
    pub noise: Vec<f64>,
}

impl EpisodeOpts {
    fn options(&self, deterministic: bool) -> CliResult<(EvalOptions, ExplorationNoise)> {
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(CliError::config("gamma: must lie in (0, 1)"));
        }
        if self.step_cap == 0 {
            return Err(CliError::config("step_cap: must be at least 1"));
        }
        let noise = ExplorationNoise::new(self.noise.clone()).map_err(|e| CliError::config(format!("noise: {e}")))?;
        let limits =
            EpisodeLimits { goal_radius: self.goal_radius, max_speed: self.max_speed, max_turn_rate: self.max_turn_rate };
        Ok((EvalOptions { gamma: self.gamma, step_cap: self.step_cap, limits, deterministic }, noise))
    }
}

#[derive(Debug, Args)]
pub struct EvalCmd {
    #[arg(long)]
    pub bundle: PathBuf,
    /// Scenario presets or files; repeat or separate with commas.
    #[arg(long, value_delimiter = ',', default_values_t = [String::from("task1"), String::from("task2"), String::from("task3")])]
    pub scenario: Vec<String>,
    #[arg(long, default_value_t = 500)]
    pub episodes: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// `central` or `task-<i>`; defaults to the central policy.
    #[arg(long, conflicts_with = "per_task")]
    pub policy: Option<String>,
    /// One row per task policy.
    #[arg(long)]
    pub per_task: bool,
    /// Sample actions with exploration noise instead of using mean actions.
    #[arg(long)]
    pub stochastic: bool,
    #[command(flatten)]
    pub episode: EpisodeOpts,
    /// Summary CSV path (default: <out dir>/eval.csv).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RolloutCmd {
    #[arg(long)]
    pub bundle: PathBuf,
    #[arg(long, default_value = "central")]
    pub policy: String,
    #[arg(long, default_value = "eval-circle")]
    pub scenario: String,
    /// Start pose `x,y` or `x,y,psi`; defaults to the scenario's start.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub start: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Use mean actions (no exploration noise).
    #[arg(long)]
    pub deterministic: bool,
    #[command(flatten)]
    pub episode: EpisodeOpts,
    /// Trajectory CSV path (default: <out dir>/trajectory.csv).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareCmd {
    #[command(flatten)]
    pub opts: TrainOpts,
    /// Comma list: agnostic-<r>, agnostic, consensus, cross.
    #[arg(long)]
    pub policies: Option<String>,
    /// Extra evaluation scenarios besides the training tasks.
    #[arg(long, value_delimiter = ',', default_values_t = [String::from("eval-circle"), String::from("eval-ellipse"), String::from("eval-multi")])]
    pub eval_scenarios: Vec<String>,
    #[arg(long, default_value_t = 500)]
    pub episodes: usize,
    /// Seed of the evaluation starts (default: the training seed).
    #[arg(long)]
    pub eval_seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct PresetsCmd {
    /// Print this scenario preset as a scenario file.
    #[arg(long)]
    pub show: Option<String>,
}

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Train(c) => cmd_train(&c),
        Command::Eval(c) => cmd_eval(&c),
        Command::Rollout(c) => cmd_rollout(&c),
        Command::Compare(c) => cmd_compare(&c),
        Command::Presets(c) => cmd_presets(&c),
    }
}

fn progress_every(iters: usize) -> usize {
    (iters / 20).max(1)
}

fn report(verbosity: u8, label: &str, t: &Trainer<crosslearn_core::nav::NavEnv>) {
    let k = t.iteration();
    let every = progress_every(t.config().max_iters);
    if verbosity == 0 || (verbosity == 1 && k % every != 0 && !t.finished()) {
        return;
    }
    let r = t.history().records.last().expect("iteration recorded");
    let mean_q = r.return_estimates.iter().sum::<f64>() / r.return_estimates.len() as f64;
    let dist = r.dist_to_center.as_ref().map(|d| d.iter().cloned().fold(0.0, f64::max));
    eprintln!(
        "{label} iter {k}/{}: return {mean_q:.3}, order {}, prune bias {:.3e}{}{}",
        t.config().max_iters,
        r.model_order,
        r.prune_bias,
        dist.map(|d| format!(", max dist {d:.4}")).unwrap_or_default(),
        if r.cap_forced { " (cap forced)" } else { "" },
    );
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Agnostic => "agnostic",
        Mode::Consensus => "consensus",
        Mode::Cross => "cross",
    }
}

/// Writes metrics, prune rows, the final bundle and checkpoints of one run.
fn write_run(dir: &Path, bundle: &PolicyBundle, history: &crosslearn_core::trainer::TrainingHistory) -> CliResult<()> {
    let metrics: Vec<Vec<String>> = history.records.iter().flat_map(metrics_rows).collect();
    write_csv(&dir.join("metrics.csv"), &METRICS_HEADER, &metrics)?;
    let prune: Vec<Vec<String>> = history.records.iter().map(prune_row).collect();
    write_csv(&dir.join("prune.csv"), &PRUNE_HEADER, &prune)?;
    save_bundle(&dir.join("bundle.json"), bundle)
}

fn cmd_train(c: &TrainCmd) -> CliResult<()> {
    let rc = c.opts.resolve()?;
    let exec = ThreadedExecutor::new(rc.threads);
    let cfg = &rc.trainer;
    let label = mode_name(cfg.mode);
    let ckpt_dir = rc.out_dir.join("checkpoints");
    let mut ckpt_err = None;
    let (bundle, history) = train_timed(cfg, &rc.tasks, &exec, &mut |t| {
        report(rc.verbosity, label, t);
        let k = t.iteration();
        if rc.checkpoint_every > 0 && k % rc.checkpoint_every == 0 && ckpt_err.is_none() {
            if let Err(e) = save_bundle(&ckpt_dir.join(format!("bundle-{k:06}.json")), t.bundle()) {
                ckpt_err = Some(e);
            }
        }
    })?;
    if let Some(e) = ckpt_err {
        return Err(e);
    }
    write_run(&rc.out_dir, &bundle, &history)?;
    if rc.verbosity > 0 {
        eprintln!("wrote {}", rc.out_dir.display());
    }
    Ok(())
}

/// `central` or `task-<i>`.
fn select_policy(bundle: &PolicyBundle, selector: &str) -> CliResult<KernelPolicy> {
    if selector == "central" {
        return bundle.central_policy().ok_or_else(|| {
            CliError::config("policy: the bundle has no central policy (agnostic run); use task-<i>")
        });
    }
    let i = selector
        .strip_prefix("task-")
        .and_then(|s| s.parse::<usize>().ok())
        .ok_or_else(|| CliError::config(format!("policy: expected `central` or `task-<i>`, got `{selector}`")))?;
    if i >= bundle.n_tasks() {
        return Err(CliError::config(format!("policy: task-{i} out of range (bundle has {} tasks)", bundle.n_tasks())));
    }
    Ok(bundle.task_policy(i))
}

fn print_table(header: &[&str], rows: &[Vec<String>]) {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|c| match c.parse::<f64>() {
                    Ok(x) if c.contains('.') || c.contains('e') => format!("{x:.4}"),
                    _ => c.clone(),
                })
                .collect()
        })
        .collect();
    for r in &cells {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = std::io::stdout().lock();
    let line = |cols: Vec<&str>| cols.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect::<Vec<_>>().join("  ");
    let _ = writeln!(out, "{}", line(header.to_vec()));
    for r in &cells {
        let _ = writeln!(out, "{}", line(r.iter().map(String::as_str).collect()));
    }
}

fn cmd_eval(c: &EvalCmd) -> CliResult<()> {
    if c.episodes == 0 {
        return Err(CliError::config("episodes: must be at least 1"));
    }
    let bundle = load_bundle(&c.bundle)?;
    let (opts, noise) = c.episode.options(!c.stochastic)?;
    let policies: Vec<(String, KernelPolicy)> = if c.per_task {
        (0..bundle.n_tasks()).map(|i| (format!("task-{i}"), bundle.task_policy(i))).collect()
    } else {
        let sel = c.policy.clone().unwrap_or_else(|| "central".into());
        vec![(sel.clone(), select_policy(&bundle, &sel)?)]
    };
    let scenarios = c.scenario.iter().map(|s| resolve_scenario(s)).collect::<CliResult<Vec<_>>>()?;
    let mut rows = Vec::new();
    for (name, policy) in &policies {
        for (k, sc) in scenarios.iter().enumerate() {
            let mut rng = task_rng(c.seed, k as u64);
            let s = evaluate(policy, sc, c.episodes, &opts, Some(&noise), &mut rng)?;
            rows.push(summary_row(name, &sc.name, &s));
        }
    }
    let out = c.out.clone().unwrap_or_else(|| default_out_dir().join("eval.csv"));
    write_csv(&out, &SUMMARY_HEADER, &rows)?;
    print_table(&SUMMARY_HEADER, &rows);
    Ok(())
}

fn cmd_rollout(c: &RolloutCmd) -> CliResult<()> {
    let bundle = load_bundle(&c.bundle)?;
    let policy = select_policy(&bundle, &c.policy)?;
    let scenario = resolve_scenario(&c.scenario)?;
    let start = match c.start.as_deref() {
        None => None,
        Some([x, y]) => {
            let g = scenario.goals[0];
            Some(Pose::new(*x, *y, (g[1] - y).atan2(g[0] - x)))
        }
        Some([x, y, psi]) => Some(Pose::new(*x, *y, *psi)),
        Some(_) => return Err(CliError::config("start: expected x,y or x,y,psi")),
    };
    let (opts, noise) = c.episode.options(c.deterministic)?;
    let mut rng = task_rng(c.seed, 0);
    let traj = rollout(&policy, &scenario, start, &opts, Some(&noise), &mut rng)?;
    let out = c.out.clone().unwrap_or_else(|| default_out_dir().join("trajectory.csv"));
    write_csv(&out, &TRAJECTORY_HEADER, &trajectory_rows(&traj))?;
    eprintln!(
        "{} steps, {} goal(s) reached{}",
        traj.rows.len(),
        traj.goals_reached,
        if traj.collided() { ", collided" } else { "" }
    );
    Ok(())
}

fn cmd_compare(c: &CompareCmd) -> CliResult<()> {
    let mut src = c.opts.source()?;
    // the protocol trains every mode itself; ε only matters for the cross run
    if src.get("preset").is_none() && src.get("trainer.epsilon").is_none() {
        return Err(CliError::config("trainer.epsilon: required for the cross policy (or use --preset paper-vi)"));
    }
    src.set("trainer.mode", Value::String("cross".into()));
    let rc = src.resolve()?;
    if c.episodes == 0 {
        return Err(CliError::config("episodes: must be at least 1"));
    }
    let selection = match &c.policies {
        Some(list) => parse_selection(list, &rc.tasks)?,
        None => all_policies(rc.tasks.len()),
    };
    let mut scenarios = rc.tasks.clone();
    let mut training = vec![true; scenarios.len()];
    for name in &c.eval_scenarios {
        scenarios.push(resolve_scenario(name)?);
        training.push(false);
    }
    let exec = ThreadedExecutor::new(rc.threads);
    let set = train_selection(&rc.trainer, &rc.tasks, &selection, &exec, &mut |m, t| report(rc.verbosity, mode_name(m), t))?;
    for (name, run) in [("agnostic", &set.agnostic), ("consensus", &set.consensus), ("cross", &set.cross)] {
        if let Some((b, h)) = run {
            write_run(&rc.out_dir.join(name), b, h)?;
        }
    }
    let opts = EvalOptions::from_config(&rc.trainer);
    let seed = c.eval_seed.unwrap_or(rc.trainer.seed);
    let rows = evaluate_selection(&set, &selection, &rc.tasks, &scenarios, &training, c.episodes, seed, &opts)?;
    let rows: Vec<Vec<String>> = rows.iter().map(|r| summary_row(&r.policy, &r.scenario, &r.summary)).collect();
    write_csv(&rc.out_dir.join("compare.csv"), &SUMMARY_HEADER, &rows)?;
    print_table(&SUMMARY_HEADER, &rows);
    Ok(())
}

fn cmd_presets(c: &PresetsCmd) -> CliResult<()> {
    let text = match &c.show {
        Some(name) => {
            let s = crosslearn_core::nav::scenario_by_name(name)
                .ok_or_else(|| CliError::config(format!("show: unknown scenario preset `{name}`")))?;
            scenario_to_toml(&s)
        }
        None => {
            let mut t = String::from("scenarios:\n");
            for name in PRESET_NAMES {
                t += &format!("  {name}\n");
            }
            t += "config presets:\n";
            for p in PRESETS {
                t += &format!("  {p}\n");
            }
            t += "config keys:\n";
            for (k, d) in KEYS {
                t += &format!("  {k:<24} {d}\n");
            }
            t
        }
    };
    // a closed pipe (e.g. `| head`) is not an error
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
    Ok(())
}
