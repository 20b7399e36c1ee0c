//! The five-policy comparison: one agnostic policy per task, the consensus
//! policy (`ε = 0`) and the cross-learned central policy, all trained from
//! the same master seed and evaluated on common random starts.

use std::time::Instant;

use crosslearn_core::nav::{Obstacle, Scenario};
use crosslearn_core::rng::task_rng;
use crosslearn_core::trainer::{
    evaluate, nav_envs, EvalOptions, EvalSummary, Executor, Mode, Trainer, TrainerConfig, TrainingHistory,
};
use crosslearn_core::{KernelPolicy, PolicyBundle};

use crate::error::{CliError, CliResult};

/// Seed offset separating evaluation streams from training streams.
const EVAL_STREAM: u64 = 0x5eed_e7a1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolicyId {
    Agnostic(usize),
    Consensus,
    Cross,
}

/// `agnostic-<r>` after the task's obstacle radius when it has a single
/// circle, `agnostic-<task name>` otherwise.
pub fn agnostic_label(task: &Scenario) -> String {
    match task.obstacles.as_slice() {
        [Obstacle::Circle { radius, .. }] => format!("agnostic-{radius}"),
        _ => format!("agnostic-{}", task.name),
    }
}

pub fn policy_label(id: PolicyId, tasks: &[Scenario]) -> String {
    match id {
        PolicyId::Agnostic(i) => agnostic_label(&tasks[i]),
        PolicyId::Consensus => "consensus".into(),
        PolicyId::Cross => "cross".into(),
    }
}

/// Parses a comma list such as `agnostic-0.5,cross`; `agnostic` selects
/// every agnostic policy.
pub fn parse_selection(list: &str, tasks: &[Scenario]) -> CliResult<Vec<PolicyId>> {
    let mut out = Vec::new();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let ids: Vec<PolicyId> = match item {
            "cross" => vec![PolicyId::Cross],
            "consensus" => vec![PolicyId::Consensus],
            "agnostic" => (0..tasks.len()).map(PolicyId::Agnostic).collect(),
            other => {
                let i = (0..tasks.len())
                    .find(|&i| agnostic_label(&tasks[i]) == other || format!("agnostic-{}", tasks[i].name) == other)
                    .ok_or_else(|| CliError::config(format!("policies: unknown policy `{other}`")))?;
                vec![PolicyId::Agnostic(i)]
            }
        };
        for id in ids {
            if !out.contains(&id) {
                out.push(id);
            }
        }
    }
    if out.is_empty() {
        return Err(CliError::config("policies: empty selection"));
    }
    Ok(out)
}

pub fn all_policies(n_tasks: usize) -> Vec<PolicyId> {
    let mut v: Vec<PolicyId> = (0..n_tasks).map(PolicyId::Agnostic).collect();
    v.push(PolicyId::Consensus);
    v.push(PolicyId::Cross);
    v
}

/// Trained bundles of the three training runs a selection needs.
#[derive(Debug, Clone, Default)]
pub struct TrainedSet {
    pub agnostic: Option<(PolicyBundle, TrainingHistory)>,
    pub consensus: Option<(PolicyBundle, TrainingHistory)>,
    pub cross: Option<(PolicyBundle, TrainingHistory)>,
}

impl TrainedSet {
    pub fn policy(&self, id: PolicyId) -> Option<KernelPolicy> {
        match id {
            PolicyId::Agnostic(i) => self.agnostic.as_ref().map(|(b, _)| b.task_policy(i)),
            PolicyId::Consensus => self.consensus.as_ref().and_then(|(b, _)| b.central_policy()),
            PolicyId::Cross => self.cross.as_ref().and_then(|(b, _)| b.central_policy()),
        }
    }
}

/// Config of one training run of the protocol; `base` supplies everything
/// but the mode and, outside cross mode, `ε`.
pub fn run_config(base: &TrainerConfig, mode: Mode) -> TrainerConfig {
    let mut c = base.clone();
    c.mode = mode;
    if mode != Mode::Cross {
        c.epsilon = 0.0;
    }
    c
}

/// Trains `config` on `tasks`, timing each iteration. `progress` sees every
/// finished iteration.
pub fn train_timed<X: Executor>(
    config: &TrainerConfig,
    tasks: &[Scenario],
    exec: &X,
    progress: &mut dyn FnMut(&Trainer<crosslearn_core::nav::NavEnv>),
) -> CliResult<(PolicyBundle, TrainingHistory)> {
    let mut t = Trainer::new(config.clone(), nav_envs(config, tasks)?)?;
    while !t.finished() {
        let start = Instant::now();
        t.step(exec)?;
        let secs = start.elapsed().as_secs_f64();
        if let Some(r) = t.history_mut().records.last_mut() {
            r.seconds = secs;
        }
        progress(&t);
    }
    Ok(t.into_parts())
}

pub fn train_selection<X: Executor>(
    base: &TrainerConfig,
    tasks: &[Scenario],
    selection: &[PolicyId],
    exec: &X,
    progress: &mut dyn FnMut(Mode, &Trainer<crosslearn_core::nav::NavEnv>),
) -> CliResult<TrainedSet> {
    let mut set = TrainedSet::default();
    let needs = |m: Mode| {
        selection.iter().any(|id| match id {
            PolicyId::Agnostic(_) => m == Mode::Agnostic,
            PolicyId::Consensus => m == Mode::Consensus,
            PolicyId::Cross => m == Mode::Cross,
        })
    };
    for mode in [Mode::Agnostic, Mode::Consensus, Mode::Cross] {
        if !needs(mode) {
            continue;
        }
        let cfg = run_config(base, mode);
        let out = train_timed(&cfg, tasks, exec, &mut |t| progress(mode, t))?;
        match mode {
            Mode::Agnostic => set.agnostic = Some(out),
            Mode::Consensus => set.consensus = Some(out),
            Mode::Cross => set.cross = Some(out),
        }
    }
    Ok(set)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub policy: String,
    pub scenario: String,
    pub summary: EvalSummary,
}

/// Label of the rows averaging the training tasks.
pub const TASK_AVERAGE: &str = "task-average";

/// Evaluates every selected policy on every scenario. Episode starts come
/// from a stream keyed by `(seed, scenario index)`, shared by all policies.
/// Each policy also gets a [`TASK_AVERAGE`] row over the scenarios flagged
/// in `training`.
pub fn evaluate_selection(
    set: &TrainedSet,
    selection: &[PolicyId],
    tasks: &[Scenario],
    scenarios: &[Scenario],
    training: &[bool],
    episodes: usize,
    seed: u64,
    opts: &EvalOptions,
) -> CliResult<Vec<CompareRow>> {
    let mut rows = Vec::new();
    for &id in selection {
        let policy = set
            .policy(id)
            .ok_or_else(|| CliError::config(format!("{}: policy was not trained", policy_label(id, tasks))))?;
        let label = policy_label(id, tasks);
        let mut averaged: Vec<EvalSummary> = Vec::new();
        for (k, sc) in scenarios.iter().enumerate() {
            let mut rng = task_rng(seed ^ EVAL_STREAM, k as u64);
            let s = evaluate(&policy, sc, episodes, opts, None, &mut rng)?;
            if training.get(k).copied().unwrap_or(false) {
                averaged.push(s);
            }
            rows.push(CompareRow { policy: label.clone(), scenario: sc.name.clone(), summary: s });
        }
        if !averaged.is_empty() {
            rows.push(CompareRow { policy: label, scenario: TASK_AVERAGE.into(), summary: average(&averaged) });
        }
    }
    Ok(rows)
}

/// Episode-weighted mean of several summaries.
pub fn average(items: &[EvalSummary]) -> EvalSummary {
    let total: usize = items.iter().map(|s| s.episodes).sum();
    let w = |f: fn(&EvalSummary) -> f64| items.iter().map(|s| f(s) * s.episodes as f64).sum::<f64>() / total as f64;
    EvalSummary {
        episodes: total,
        mean_return: w(|s| s.mean_return),
        success_rate: w(|s| s.success_rate),
        collision_rate: w(|s| s.collision_rate),
        mean_steps: w(|s| s.mean_steps),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crosslearn_core::nav::make_training_tasks;

    #[test]
    fn labels_follow_obstacle_radius() {
        let tasks = make_training_tasks();
        let labels: Vec<String> = all_policies(3).into_iter().map(|id| policy_label(id, &tasks)).collect();
        assert_eq!(labels, ["agnostic-0.5", "agnostic-1", "agnostic-2", "consensus", "cross"]);
    }

    #[test]
    fn selection_parsing() {
        let tasks = make_training_tasks();
        assert_eq!(parse_selection("agnostic-0.5,cross", &tasks).unwrap(), [PolicyId::Agnostic(0), PolicyId::Cross]);
        assert_eq!(parse_selection("agnostic-task3", &tasks).unwrap(), [PolicyId::Agnostic(2)]);
        assert_eq!(parse_selection("agnostic", &tasks).unwrap().len(), 3);
        assert!(parse_selection("agnostic-7", &tasks).is_err());
    }

    #[test]
    fn averaging_weights_by_episodes() {
        let a = EvalSummary { episodes: 1, mean_return: 1.0, success_rate: 1.0, collision_rate: 0.0, mean_steps: 2.0 };
        let b = EvalSummary { episodes: 3, mean_return: 5.0, success_rate: 0.0, collision_rate: 1.0, mean_steps: 6.0 };
        let m = average(&[a, b]);
        assert_eq!((m.episodes, m.mean_return, m.success_rate, m.collision_rate, m.mean_steps), (4, 4.0, 0.25, 0.75, 5.0));
    }
}
