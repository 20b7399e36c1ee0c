//! Policy bundle files (JSON), scenario files (TOML) and CSV outputs.

use std::fs;
use std::io::Write;
use std::path::Path;

use crosslearn_core::nav::{scenario_by_name, Obstacle, Scenario, StartSpec};
use crosslearn_core::trainer::{EvalSummary, IterationRecord, Trajectory};
use crosslearn_core::{Dictionary, KernelSpec, Matrix, PolicyBundle};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const BUNDLE_FORMAT_VERSION: u32 = 1;

pub const TRAJECTORY_HEADER: [&str; 9] = ["t", "x", "y", "psi", "action_z", "action_psi", "reward", "d_g", "collided"];
pub const METRICS_HEADER: [&str; 8] =
    ["iter", "task", "return_estimate", "dist_to_center", "model_order", "prune_bias", "margin", "seconds"];
pub const PRUNE_HEADER: [&str; 5] = ["iter", "model_order", "removed", "prune_bias", "cap_forced"];
pub const SUMMARY_HEADER: [&str; 8] =
    ["policy", "scenario", "episodes", "mean_cost", "mean_return", "success_rate", "collision_rate", "mean_steps"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelSection {
    pub state_dim: usize,
    pub action_dim: usize,
    pub length_scales: Vec<f64>,
    pub angular_dims: Vec<usize>,
}

/// On-disk form of a [`PolicyBundle`]. Weight matrices are lists of rows,
/// one row per knot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundleFile {
    pub format_version: u32,
    pub kernel: KernelSection,
    pub epsilon: f64,
    pub knots: Vec<Vec<f64>>,
    pub tasks: Vec<Vec<Vec<f64>>>,
    pub central: Option<Vec<Vec<f64>>>,
}

fn rows_of(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

fn matrix_from(rows: &[Vec<f64>], cols: usize, what: &str) -> CliResult<Matrix> {
    let mut data = Vec::with_capacity(rows.len() * cols);
    for r in rows {
        if r.len() != cols {
            return Err(CliError::config(format!("{what}: row of length {} (expected {cols})", r.len())));
        }
        data.extend_from_slice(r);
    }
    Ok(Matrix::from_vec(rows.len(), cols, data))
}

impl BundleFile {
    pub fn from_bundle(b: &PolicyBundle) -> Self {
        Self {
            format_version: BUNDLE_FORMAT_VERSION,
            kernel: KernelSection {
                state_dim: b.spec.state_dim(),
                action_dim: b.spec.action_dim(),
                length_scales: b.spec.length_scales().to_vec(),
                angular_dims: b.spec.angular_dims().to_vec(),
            },
            epsilon: b.epsilon,
            knots: b.dict.knots().map(<[f64]>::to_vec).collect(),
            tasks: b.tasks.iter().map(rows_of).collect(),
            central: b.central.as_ref().map(rows_of),
        }
    }

    pub fn into_bundle(self) -> CliResult<PolicyBundle> {
        if self.format_version != BUNDLE_FORMAT_VERSION {
            return Err(CliError::config(format!(
                "format_version: unsupported version {} (expected {BUNDLE_FORMAT_VERSION})",
                self.format_version
            )));
        }
        let k = &self.kernel;
        if k.length_scales.len() != k.state_dim {
            return Err(CliError::config("kernel.length_scales: length differs from state_dim"));
        }
        let spec = KernelSpec::new(k.length_scales.clone(), k.angular_dims.clone(), k.action_dim)?;
        let flat = matrix_from(&self.knots, k.state_dim, "knots")?;
        let dict = Dictionary::from_flat(k.state_dim, flat.as_slice().to_vec())?;
        let tasks = self
            .tasks
            .iter()
            .map(|t| matrix_from(t, k.action_dim, "tasks"))
            .collect::<CliResult<Vec<_>>>()?;
        let central = self.central.as_ref().map(|c| matrix_from(c, k.action_dim, "central")).transpose()?;
        Ok(PolicyBundle::from_parts(spec, dict, tasks, central, self.epsilon)?)
    }
}

pub fn bundle_to_json(b: &PolicyBundle) -> CliResult<String> {
    if !b.is_finite() {
        return Err(CliError::Numeric(crosslearn_core::Error::NonFinite { context: "bundle weights", iteration: 0 }));
    }
    serde_json::to_string_pretty(&BundleFile::from_bundle(b)).map_err(|e| CliError::config(e.to_string()))
}

pub fn bundle_from_json(text: &str) -> CliResult<PolicyBundle> {
    let file: BundleFile = serde_json::from_str(text).map_err(|e| CliError::config(format!("bundle: {e}")))?;
    file.into_bundle()
}

pub fn save_bundle(path: &Path, b: &PolicyBundle) -> CliResult<()> {
    let text = bundle_to_json(b)?;
    write_file(path, text.as_bytes())
}

pub fn load_bundle(path: &Path) -> CliResult<PolicyBundle> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    bundle_from_json(&text).map_err(|e| match e {
        CliError::Config(m) => CliError::config(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ObstacleSection {
    Circle { center: [f64; 2], radius: f64 },
    Ellipse { center: [f64; 2], semi_axes: [f64; 2] },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum StartSection {
    Fixed {
        x: f64,
        y: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        psi: Option<f64>,
    },
    Uniform { lo: [f64; 2], hi: [f64; 2] },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    pub step_time: f64,
    pub bounds: [f64; 4],
    pub goals: Vec<[f64; 2]>,
    pub start: StartSection,
    #[serde(default)]
    pub obstacles: Vec<ObstacleSection>,
}

impl From<&Scenario> for ScenarioFile {
    fn from(s: &Scenario) -> Self {
        Self {
            name: s.name.clone(),
            step_time: s.step_time,
            bounds: s.bounds,
            goals: s.goals.clone(),
            start: match s.start {
                StartSpec::Fixed { x, y, psi } => StartSection::Fixed { x, y, psi },
                StartSpec::Uniform { lo, hi } => StartSection::Uniform { lo, hi },
            },
            obstacles: s
                .obstacles
                .iter()
                .map(|o| match *o {
                    Obstacle::Circle { center, radius } => ObstacleSection::Circle { center, radius },
                    Obstacle::Ellipse { center, semi_axes } => ObstacleSection::Ellipse { center, semi_axes },
                })
                .collect(),
        }
    }
}

impl ScenarioFile {
    pub fn into_scenario(self) -> CliResult<Scenario> {
        let s = Scenario {
            name: self.name,
            obstacles: self
                .obstacles
                .into_iter()
                .map(|o| match o {
                    ObstacleSection::Circle { center, radius } => Obstacle::circle(center, radius),
                    ObstacleSection::Ellipse { center, semi_axes } => Obstacle::ellipse(center, semi_axes),
                })
                .collect(),
            goals: self.goals,
            start: match self.start {
                StartSection::Fixed { x, y, psi } => StartSpec::Fixed { x, y, psi },
                StartSection::Uniform { lo, hi } => StartSpec::Uniform { lo, hi },
            },
            step_time: self.step_time,
            bounds: self.bounds,
        };
        s.validate().map_err(|e| CliError::config(format!("scenario {}: {e}", s.name)))?;
        Ok(s)
    }
}

pub fn scenario_to_toml(s: &Scenario) -> String {
    toml::to_string(&ScenarioFile::from(s)).expect("scenario serializes")
}

pub fn scenario_from_toml(text: &str) -> CliResult<Scenario> {
    let file: ScenarioFile = toml::from_str(text).map_err(|e| CliError::config(format!("scenario: {e}")))?;
    file.into_scenario()
}

/// A preset name or the path of a scenario file.
pub fn resolve_scenario(name_or_path: &str) -> CliResult<Scenario> {
    if let Some(s) = scenario_by_name(name_or_path) {
        return Ok(s);
    }
    let path = Path::new(name_or_path);
    if !path.exists() {
        return Err(CliError::config(format!("scenario: `{name_or_path}` is neither a preset nor a file")));
    }
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    scenario_from_toml(&text).map_err(|e| match e {
        CliError::Config(m) => CliError::config(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// CSV writer over any sink, with the header written up front.
pub struct CsvOut<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> CsvOut<W> {
    pub fn new(sink: W, header: &[&str]) -> csv::Result<Self> {
        let mut inner = csv::Writer::from_writer(sink);
        inner.write_record(header)?;
        Ok(Self { inner })
    }

    pub fn row<I, S>(&mut self, fields: I) -> csv::Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.inner.write_record(fields)
    }

    pub fn finish(mut self) -> csv::Result<W> {
        self.inner.flush()?;
        self.inner.into_inner().map_err(|e| e.into_error().into())
    }
}

fn num(x: f64) -> String {
    x.to_string()
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn trajectory_rows(t: &Trajectory) -> Vec<Vec<String>> {
    t.rows
        .iter()
        .map(|r| {
            vec![
                r.t.to_string(),
                num(r.x),
                num(r.y),
                num(r.psi),
                num(r.action_z),
                num(r.action_psi),
                num(r.reward),
                num(r.d_g),
                u8::from(r.collided).to_string(),
            ]
        })
        .collect()
}

/// One row per task; coupling columns stay empty without a central policy.
pub fn metrics_rows(r: &IterationRecord) -> Vec<Vec<String>> {
    r.return_estimates
        .iter()
        .enumerate()
        .map(|(i, q)| {
            vec![
                r.iteration.to_string(),
                i.to_string(),
                num(*q),
                opt(r.dist_to_center.as_ref().map(|d| d[i])),
                r.model_order.to_string(),
                num(r.prune_bias),
                opt(r.margin),
                num(r.seconds),
            ]
        })
        .collect()
}

pub fn prune_row(r: &IterationRecord) -> Vec<String> {
    vec![
        r.iteration.to_string(),
        r.model_order.to_string(),
        r.removed.to_string(),
        num(r.prune_bias),
        u8::from(r.cap_forced).to_string(),
    ]
}

pub fn summary_row(policy: &str, scenario: &str, s: &EvalSummary) -> Vec<String> {
    vec![
        policy.to_string(),
        scenario.to_string(),
        s.episodes.to_string(),
        num(s.mean_cost()),
        num(s.mean_return),
        num(s.success_rate),
        num(s.collision_rate),
        num(s.mean_steps),
    ]
}

/// Writes `rows` under `header` to `path`, creating parent directories.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> CliResult<()> {
    let mut buf = CsvOut::new(Vec::new(), header).map_err(|e| CliError::io(path, e))?;
    for r in rows {
        buf.row(r).map_err(|e| CliError::io(path, e))?;
    }
    let bytes = buf.finish().map_err(|e| CliError::io(path, e))?;
    write_file(path, &bytes)
}
