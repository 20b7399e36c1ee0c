use std::path::Path;
use std::process::{Command, Output};

use crosslearn::io::save_bundle;
use crosslearn_core::nav::{ANGULAR_DIMS, OBS_DIM};
use crosslearn_core::{KernelSpec, PolicyBundle};

fn bin(dir: &Path) -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_crosslearn"));
    c.current_dir(dir).env_remove("CROSSLEARN_OUT");
    c
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin(dir).args(args).output().expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> Output {
    let out = run(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn zero_bundle(dir: &Path, n: usize, central: bool) -> std::path::PathBuf {
    let spec = KernelSpec::new(vec![1.0; OBS_DIM], ANGULAR_DIMS.to_vec(), 2).unwrap();
    let path = dir.join(format!("zero-{n}-{central}.json"));
    save_bundle(&path, &PolicyBundle::zero(spec, n, central, 3.0)).unwrap();
    path
}

#[test]
fn train_writes_one_metrics_row_per_task_and_iteration() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["train", "--preset", "paper-vi", "--iters", "100", "--seed", "7", "--out", "run", "-q", "--checkpoint-every", "50"]);
    let metrics = read(&dir.path().join("run/metrics.csv"));
    let rows: Vec<&str> = metrics.lines().skip(1).collect();
    assert_eq!(rows.len(), 300);
    for task in 0..3 {
        assert_eq!(rows.iter().filter(|r| r.split(',').nth(1) == Some(&task.to_string())).count(), 100);
    }
    assert_eq!(read(&dir.path().join("run/prune.csv")).lines().count(), 101);
    assert!(dir.path().join("run/bundle.json").exists());
    assert!(dir.path().join("run/checkpoints/bundle-000050.json").exists());
    assert!(dir.path().join("run/checkpoints/bundle-000100.json").exists());
}

#[test]
fn agnostic_single_task_leaves_coupling_columns_empty() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["train", "--mode", "agnostic", "--tasks", "1", "--iters", "4", "-q"]);
    let metrics = read(&dir.path().join("out/metrics.csv"));
    let rows: Vec<Vec<&str>> = metrics.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 4);
    for r in rows {
        assert_eq!(r[1], "0");
        assert_eq!(r[3], "");
        assert_eq!(r[6], "");
    }
}

#[test]
fn output_directory_defaults_to_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin(dir.path())
        .env("CROSSLEARN_OUT", "elsewhere")
        .args(["train", "--mode", "agnostic", "--tasks", "1", "--iters", "1", "-q"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("elsewhere/metrics.csv").exists());
}

#[test]
fn config_errors_exit_with_two_and_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["train", "--mode", "cross", "--iters", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("trainer.epsilon"));

    std::fs::write(dir.path().join("bad.toml"), "preset = \"paper-vi\"\ntrainer.batch_size = \"four\"\n").unwrap();
    let out = run(dir.path(), &["train", "--config", "bad.toml"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("trainer.batch_size"));

    let out = run(dir.path(), &["train", "--preset", "paper-vi", "--set", "trainer.gamma=1.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gamma"));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.toml"),
        "preset = \"paper-vi\"\ntrainer.mode = \"agnostic\"\ntrainer.iters = 50\nenv.tasks = [\"task2\"]\noutput.dir = \"from-file\"\n",
    )
    .unwrap();
    ok(dir.path(), &["train", "--config", "run.toml", "--iters", "2", "-q"]);
    assert_eq!(read(&dir.path().join("from-file/metrics.csv")).lines().count(), 3);
}

#[test]
fn missing_files_exit_with_four() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["eval", "--bundle", "missing.json"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn eval_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let b = zero_bundle(dir.path(), 3, true);
    let b = b.to_str().unwrap();
    for name in ["a.csv", "b.csv"] {
        ok(dir.path(), &["eval", "--bundle", b, "--episodes", "500", "--seed", "3", "--stochastic", "--out", name]);
    }
    assert_eq!(read(&dir.path().join("a.csv")), read(&dir.path().join("b.csv")));
}

#[test]
fn eval_rows_and_rates() {
    let dir = tempfile::tempdir().unwrap();
    let b = zero_bundle(dir.path(), 3, true);
    let b = b.to_str().unwrap();
    ok(dir.path(), &["eval", "--bundle", b, "--scenario", "eval-circle", "--episodes", "20", "--out", "one.csv"]);
    let text = read(&dir.path().join("one.csv"));
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 1);
    for col in [5, 6] {
        let v: f64 = rows[0][col].parse().unwrap();
        assert!((0.0..=1.0).contains(&v));
    }
    ok(dir.path(), &["eval", "--bundle", b, "--scenario", "eval-circle", "--episodes", "5", "--per-task", "--out", "per.csv"]);
    assert_eq!(read(&dir.path().join("per.csv")).lines().count(), 4);
}

#[test]
fn rollout_from_fixed_start() {
    let dir = tempfile::tempdir().unwrap();
    let b = zero_bundle(dir.path(), 3, true);
    let b = b.to_str().unwrap();
    ok(dir.path(), &["rollout", "--bundle", b, "--scenario", "eval-circle", "--start", "0.5,1.5", "--out", "t.csv"]);
    let text = read(&dir.path().join("t.csv"));
    let first: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!((first[1], first[2]), ("0.5", "1.5"));

    for seed in ["1", "2"] {
        ok(dir.path(), &["rollout", "--bundle", b, "--deterministic", "--seed", seed, "--out", &format!("d{seed}.csv")]);
    }
    assert_eq!(read(&dir.path().join("d1.csv")), read(&dir.path().join("d2.csv")));
}

#[test]
fn central_selector_needs_a_central_policy() {
    let dir = tempfile::tempdir().unwrap();
    let b = zero_bundle(dir.path(), 3, false);
    let out = run(dir.path(), &["rollout", "--bundle", b.to_str().unwrap(), "--policy", "central"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("central"));
    ok(dir.path(), &["rollout", "--bundle", b.to_str().unwrap(), "--policy", "task-2", "--out", "t.csv"]);
}

#[test]
fn compare_honours_policy_subset() {
    let dir = tempfile::tempdir().unwrap();
    ok(
        dir.path(),
        &["compare", "--preset", "paper-vi", "--iters", "3", "--episodes", "4", "--policies", "agnostic-0.5,cross", "--out", "cmp", "-q"],
    );
    let text = read(&dir.path().join("cmp/compare.csv"));
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    // 3 training tasks + 3 evaluation courses + the task average, per policy
    assert_eq!(rows.len(), 14);
    let policies: std::collections::BTreeSet<&str> = rows.iter().map(|r| r[0]).collect();
    assert_eq!(policies.into_iter().collect::<Vec<_>>(), ["agnostic-0.5", "cross"]);
    assert!(rows.iter().any(|r| r[1] == "task-average"));
    assert!(!dir.path().join("cmp/consensus").exists());
    assert!(dir.path().join("cmp/cross/bundle.json").exists());
}

#[test]
fn presets_lists_and_shows() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(dir.path(), &["presets"]);
    let text = String::from_utf8_lossy(&out.stdout);
    for name in ["task1", "eval-multi", "paper-vi", "trainer.epsilon"] {
        assert!(text.contains(name), "{name}");
    }
    let out = ok(dir.path(), &["presets", "--show", "task2"]);
    let s = crosslearn::io::scenario_from_toml(&String::from_utf8_lossy(&out.stdout)).unwrap();
    assert_eq!(s.name, "task2");
}
