//! Run configuration: a TOML file of flat dotted keys, overridden by
//! command-line values (flags win).
//!
//! ```toml
//! preset = "paper-vi"
//! trainer.mode = "cross"
//! trainer.iters = 5000
//! env.tasks = ["task1", "task2", "task3"]
//! env.max_speed = 1.0
//! output.dir = "runs/cross"
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crosslearn_core::nav::{make_training_tasks, Scenario};
use crosslearn_core::trainer::{Mode, ProjectionMode, TrainerConfig};
use toml::Value;

use crate::error::{CliError, CliResult};
use crate::io::resolve_scenario;

pub const PRESETS: [&str; 1] = ["paper-vi"];

/// Output directory used when neither the config nor a flag names one.
pub const OUT_ENV: &str = "CROSSLEARN_OUT";

/// Every accepted key with a one-line description.
pub const KEYS: [(&str, &str); 25] = [
    ("preset", "named constant set (paper-vi)"),
    ("trainer.mode", "agnostic | consensus | cross"),
    ("trainer.projection", "exact | relaxed"),
    ("trainer.gamma", "discount factor in (0, 1)"),
    ("trainer.step_size", "gradient step size"),
    ("trainer.epsilon", "coupling radius (required in cross mode without a preset)"),
    ("trainer.beta", "compression budget per prune"),
    ("trainer.alpha", "stopping threshold; 0 disables stopping"),
    ("trainer.batch_size", "gradient samples per task and iteration"),
    ("trainer.noise", "exploration covariance diagonal"),
    ("trainer.order_cap", "largest dictionary size"),
    ("trainer.iters", "iteration budget"),
    ("trainer.seed", "master seed"),
    ("trainer.inverse_refresh", "iterations between fresh Gram inverses"),
    ("kernel.length_scales", "kernel variances per state dimension"),
    ("kernel.angular_dims", "wrapped state dimensions"),
    ("solver.tol", "projection tolerance"),
    ("solver.max_sweeps", "projection iteration cap"),
    ("env.tasks", "scenario presets or files, or a count of training presets"),
    ("env.step_cap", "cap on rollout horizons"),
    ("env.goal_radius", "goal capture radius"),
    ("env.max_speed", "forward speed clamp"),
    ("env.max_turn_rate", "turn rate clamp"),
    ("output.dir", "output directory"),
    ("output.checkpoint_every", "iterations between bundle checkpoints; 0 disables"),
];

const EXTRA_KEYS: [&str; 2] = ["output.verbosity", "run.threads"];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub trainer: TrainerConfig,
    pub tasks: Vec<Scenario>,
    pub out_dir: PathBuf,
    pub checkpoint_every: usize,
    pub verbosity: u8,
    pub threads: usize,
}

/// Collected key/value pairs; later insertions replace earlier ones.
#[derive(Debug, Clone, Default)]
pub struct ConfigSource {
    values: BTreeMap<String, Value>,
}

fn flatten(prefix: &str, table: &toml::Table, out: &mut BTreeMap<String, Value>) {
    for (k, v) in table {
        let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
        match v {
            Value::Table(t) => flatten(&key, t, out),
            other => {
                out.insert(key, other.clone());
            }
        }
    }
}

/// Parses a command-line value as a TOML value, falling back to a string.
pub fn parse_value(text: &str) -> Value {
    match format!("v = {text}").parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").expect("key present"),
        Err(_) => Value::String(text.to_string()),
    }
}

impl ConfigSource {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        let table: toml::Table = text.parse().map_err(|e| CliError::config(format!("{e}")))?;
        let mut values = BTreeMap::new();
        flatten("", &table, &mut values);
        Ok(Self { values })
    }

    pub fn from_file(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.values.insert(key.to_string(), value);
    }

    /// `key=value` with the value in TOML syntax (bare words become strings).
    pub fn set_assignment(&mut self, assignment: &str) -> CliResult<()> {
        let (k, v) = assignment
            .split_once('=')
            .ok_or_else(|| CliError::config(format!("--set {assignment}: expected key=value")))?;
        self.set(k.trim(), parse_value(v.trim()));
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.values.get(key)
    }

    pub fn resolve(&self) -> CliResult<RunConfig> {
        Resolver { src: self }.run()
    }
}

struct Resolver<'a> {
    src: &'a ConfigSource,
}

fn type_error(key: &str, want: &str, got: &Value) -> CliError {
    CliError::config(format!("{key}: expected {want}, got {}", got.type_str()))
}

impl Resolver<'_> {
    fn float(&self, key: &str) -> CliResult<Option<f64>> {
        match self.src.get(key) {
            None => Ok(None),
            Some(Value::Float(x)) => Ok(Some(*x)),
            Some(Value::Integer(i)) => Ok(Some(*i as f64)),
            Some(v) => Err(type_error(key, "a number", v)),
        }
    }

    fn uint(&self, key: &str) -> CliResult<Option<u64>> {
        match self.src.get(key) {
            None => Ok(None),
            Some(Value::Integer(i)) if *i >= 0 => Ok(Some(*i as u64)),
            Some(v) => Err(type_error(key, "a nonnegative integer", v)),
        }
    }

    fn string(&self, key: &str) -> CliResult<Option<String>> {
        match self.src.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(v) => Err(type_error(key, "a string", v)),
        }
    }

    fn floats(&self, key: &str) -> CliResult<Option<Vec<f64>>> {
        match self.src.get(key) {
            None => Ok(None),
            Some(Value::Array(a)) => a
                .iter()
                .map(|v| match v {
                    Value::Float(x) => Ok(*x),
                    Value::Integer(i) => Ok(*i as f64),
                    other => Err(type_error(key, "an array of numbers", other)),
                })
                .collect::<CliResult<Vec<_>>>()
                .map(Some),
            Some(v) => Err(type_error(key, "an array of numbers", v)),
        }
    }

    fn uints(&self, key: &str) -> CliResult<Option<Vec<usize>>> {
        match self.src.get(key) {
            None => Ok(None),
            Some(Value::Array(a)) => a
                .iter()
                .map(|v| match v {
                    Value::Integer(i) if *i >= 0 => Ok(*i as usize),
                    other => Err(type_error(key, "an array of nonnegative integers", other)),
                })
                .collect::<CliResult<Vec<_>>>()
                .map(Some),
            Some(v) => Err(type_error(key, "an array of nonnegative integers", v)),
        }
    }

    fn tasks(&self) -> CliResult<Vec<Scenario>> {
        let key = "env.tasks";
        let presets = make_training_tasks();
        match self.src.get(key) {
            None => Ok(presets),
            Some(Value::Integer(n)) => {
                if *n < 1 || *n as usize > presets.len() {
                    return Err(CliError::config(format!("{key}: count must lie in 1..={}", presets.len())));
                }
                Ok(presets.into_iter().take(*n as usize).collect())
            }
            Some(Value::String(s)) => match s.parse::<usize>() {
                Ok(n) if (1..=presets.len()).contains(&n) => Ok(presets.into_iter().take(n).collect()),
                Ok(_) => Err(CliError::config(format!("{key}: count must lie in 1..={}", presets.len()))),
                Err(_) => s.split(',').map(|t| resolve_scenario(t.trim())).collect(),
            },
            Some(Value::Array(a)) => a
                .iter()
                .map(|v| match v {
                    Value::String(s) => resolve_scenario(s),
                    other => Err(type_error(key, "scenario names", other)),
                })
                .collect(),
            Some(v) => Err(type_error(key, "a list of scenarios or a count", v)),
        }
    }

    fn run(&self) -> CliResult<RunConfig> {
        for key in self.src.values.keys() {
            if !KEYS.iter().any(|(k, _)| k == key) && !EXTRA_KEYS.contains(&key.as_str()) {
                return Err(CliError::config(format!("{key}: unknown key")));
            }
        }
        let preset = self.string("preset")?;
        if let Some(p) = &preset {
            if !PRESETS.contains(&p.as_str()) {
                return Err(CliError::config(format!("preset: unknown preset `{p}` (known: {})", PRESETS.join(", "))));
            }
        }
        let mode = match self.string("trainer.mode")?.as_deref() {
            None | Some("cross") => Mode::Cross,
            Some("agnostic") => Mode::Agnostic,
            Some("consensus") => Mode::Consensus,
            Some(other) => {
                return Err(CliError::config(format!("trainer.mode: unknown mode `{other}` (agnostic, consensus, cross)")))
            }
        };
        let mut c = TrainerConfig::paper_vi(mode);
        match self.float("trainer.epsilon")? {
            Some(e) => c.epsilon = e,
            None if mode == Mode::Cross && preset.is_none() => {
                return Err(CliError::config("trainer.epsilon: required in cross mode (or use preset = \"paper-vi\")"))
            }
            None => {}
        }
        if let Some(p) = self.string("trainer.projection")? {
            c.projection = match p.as_str() {
                "exact" => ProjectionMode::Exact,
                "relaxed" => ProjectionMode::Relaxed,
                other => return Err(CliError::config(format!("trainer.projection: unknown `{other}` (exact, relaxed)"))),
            };
        }
        macro_rules! apply {
            ($get:ident, $key:literal, $field:expr) => {
                if let Some(v) = self.$get($key)? {
                    $field = v;
                }
            };
            ($get:ident as usize, $key:literal, $field:expr) => {
                if let Some(v) = self.$get($key)? {
                    $field = v as usize;
                }
            };
        }
        apply!(float, "trainer.gamma", c.gamma);
        apply!(float, "trainer.step_size", c.step_size);
        apply!(float, "trainer.beta", c.beta);
        apply!(float, "trainer.alpha", c.alpha);
        apply!(uint as usize, "trainer.batch_size", c.batch_size);
        apply!(floats, "trainer.noise", c.noise_diag);
        apply!(uint as usize, "trainer.order_cap", c.order_cap);
        apply!(uint as usize, "trainer.iters", c.max_iters);
        apply!(uint, "trainer.seed", c.seed);
        apply!(uint as usize, "trainer.inverse_refresh", c.inverse_refresh);
        apply!(floats, "kernel.length_scales", c.length_scales);
        apply!(uints, "kernel.angular_dims", c.angular_dims);
        apply!(float, "solver.tol", c.solver_tol);
        apply!(uint as usize, "solver.max_sweeps", c.max_sweeps);
        apply!(uint as usize, "env.step_cap", c.step_cap);
        apply!(float, "env.goal_radius", c.goal_radius);
        if let Some(v) = self.float("env.max_speed")? {
            c.max_speed = Some(v);
        }
        if let Some(v) = self.float("env.max_turn_rate")? {
            c.max_turn_rate = Some(v);
        }
        c.validate().map_err(|e| match e {
            crosslearn_core::Error::InvalidArgument(m) => CliError::config(m),
            other => CliError::Numeric(other),
        })?;
        if c.noise_diag.len() != 2 {
            return Err(CliError::config("trainer.noise: navigation actions have two components"));
        }
        if c.length_scales.len() != crosslearn_core::nav::OBS_DIM {
            return Err(CliError::config(format!(
                "kernel.length_scales: navigation observations have {} components",
                crosslearn_core::nav::OBS_DIM
            )));
        }

        let tasks = self.tasks()?;
        let out_dir = match self.string("output.dir")? {
            Some(d) => PathBuf::from(d),
            None => default_out_dir(),
        };
        Ok(RunConfig {
            trainer: c,
            tasks,
            out_dir,
            checkpoint_every: self.uint("output.checkpoint_every")?.unwrap_or(0) as usize,
            verbosity: self.uint("output.verbosity")?.unwrap_or(1).min(2) as u8,
            threads: self.uint("run.threads")?.map_or_else(default_threads, |t| t.max(1) as usize),
        })
    }
}

pub fn default_out_dir() -> PathBuf {
    std::env::var_os(OUT_ENV).map_or_else(|| PathBuf::from("out"), PathBuf::from)
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}
