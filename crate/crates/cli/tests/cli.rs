//! End-to-end checks of the command surface: exit codes, file outputs,
//! determinism of trace CSVs, and idempotence on inputs.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ollp(dir: &Path, args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ollp"));
    cmd.current_dir(dir).args(args);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("spawn ollp")
}

fn gen_instance(dir: &Path, n: usize, seed: u64) {
    let out = ollp(
        dir,
        &[
            "gen",
            "--n",
            &n.to_string(),
            "--seed",
            &seed.to_string(),
            "--out",
            "inst.json",
        ],
        &[],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn gen_writes_a_parsable_instance() {
    let dir = tempfile::tempdir().unwrap();
    gen_instance(dir.path(), 5, 9);
    let text = fs::read_to_string(dir.path().join("inst.json")).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["n"], 5);
    assert_eq!(value["cells"].as_array().unwrap().len(), 5);
    assert_eq!(value["flows"].as_array().unwrap().len(), 5);
}

#[test]
fn solve_is_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    gen_instance(dir.path(), 4, 2);
    let solve_args = [
        "solve",
        "--instance",
        "inst.json",
        "--algo",
        "de",
        "--seed",
        "7",
        "--pop",
        "12",
        "--gens",
        "8",
        "--repeats",
        "2",
        "--out",
    ];

    let mut outputs = Vec::new();
    for (out_dir, threads) in [("run1", "1"), ("run2", "4"), ("run3", "1")] {
        let mut args = solve_args.to_vec();
        args.push(out_dir);
        let out = ollp(dir.path(), &args, &[("OLLP_THREADS", threads)]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let trace = fs::read(dir.path().join(out_dir).join("trace_de_7.csv")).unwrap();
        let trace2 = fs::read(dir.path().join(out_dir).join("trace_de_8.csv")).unwrap();
        let layout = fs::read(dir.path().join(out_dir).join("best_layout.json")).unwrap();
        outputs.push((trace, trace2, layout));
    }
    assert_eq!(outputs[0], outputs[1], "thread count changed the traces");
    assert_eq!(outputs[0], outputs[2], "same-seed rerun diverged");
}

#[test]
fn solve_single_cell_has_zero_objective() {
    let dir = tempfile::tempdir().unwrap();
    gen_instance(dir.path(), 1, 1);
    let out = ollp(
        dir.path(),
        &[
            "solve", "--instance", "inst.json", "--algo", "pso", "--pop", "8", "--gens", "3",
            "--out", "run",
        ],
        &[],
    );
    assert!(out.status.success());
    let summary = fs::read_to_string(dir.path().join("run/summary.csv")).unwrap();
    let row = summary.lines().nth(1).unwrap();
    let best: f64 = row.split(',').nth(3).unwrap().parse().unwrap();
    assert_eq!(best, 0.0);
}

#[test]
fn unknown_algo_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    gen_instance(dir.path(), 2, 1);
    let out = ollp(
        dir.path(),
        &["solve", "--instance", "inst.json", "--algo", "tabu", "--out", "run"],
        &[],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_files_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = ollp(
        dir.path(),
        &["solve", "--instance", "nope.json", "--algo", "sga", "--out", "run"],
        &[],
    );
    assert_eq!(out.status.code(), Some(2));
    let out = ollp(dir.path(), &["validate", "--layout", "nope.json"], &[]);
    assert_eq!(out.status.code(), Some(2));
}

fn solved_layout(dir: &Path) -> serde_json::Value {
    gen_instance(dir, 3, 4);
    let out = ollp(
        dir,
        &[
            "solve", "--instance", "inst.json", "--algo", "sga", "--pop", "10", "--gens", "5",
            "--out", "run",
        ],
        &[],
    );
    assert!(out.status.success());
    let text = fs::read_to_string(dir.join("run/best_layout.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn validate_accepts_solved_layouts_and_flags_injected_overlap() {
    let dir = tempfile::tempdir().unwrap();
    let mut layout = solved_layout(dir.path());

    let out = ollp(dir.path(), &["validate", "--layout", "run/best_layout.json"], &[]);
    assert_eq!(out.status.code(), Some(0));

    // Stack every cell on the origin.
    for p in layout["placements"].as_array_mut().unwrap() {
        p["x"] = 0.0.into();
        p["y"] = 0.0.into();
    }
    fs::write(dir.path().join("broken.json"), layout.to_string()).unwrap();
    let out = ollp(dir.path(), &["validate", "--layout", "broken.json"], &[]);
    assert_eq!(out.status.code(), Some(1));
    let report = String::from_utf8_lossy(&out.stdout);
    assert!(report.contains("non-overlap"), "{report}");
}

#[test]
fn render_counts_and_infeasible_exit() {
    let dir = tempfile::tempdir().unwrap();
    let mut layout = solved_layout(dir.path());

    let out = ollp(
        dir.path(),
        &[
            "render", "--layout", "run/best_layout.json", "--out", "layout.svg", "--show-paths",
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    let svg = fs::read_to_string(dir.path().join("layout.svg")).unwrap();
    assert_eq!(svg.matches("<rect class=\"cell\"").count(), 3);
    assert_eq!(svg.matches("<line class=\"door\"").count(), 3);
    let flows = svg.matches("<polyline class=\"flow\"").count();
    assert!(flows >= 1, "expected at least one flow path, got {flows}");
    assert!(svg.contains("stroke-dasharray"));

    for p in layout["placements"].as_array_mut().unwrap() {
        p["x"] = 0.0.into();
        p["y"] = 0.0.into();
    }
    fs::write(dir.path().join("broken.json"), layout.to_string()).unwrap();
    let out = ollp(
        dir.path(),
        &["render", "--layout", "broken.json", "--out", "broken.svg"],
        &[],
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn metrics_emits_one_row() {
    let dir = tempfile::tempdir().unwrap();
    solved_layout(dir.path());
    let out = ollp(dir.path(), &["metrics", "--layout", "run/best_layout.json"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "instance,algo,seed,objective,perimeter_eff,hull_eff"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row.len(), 6);
    assert_eq!(row[1], "sga");
    let hull_eff: f64 = row[5].parse().unwrap();
    assert!(hull_eff > 0.0 && hull_eff <= 1.0 + 1e-9);
}

#[test]
fn commands_never_mutate_their_inputs() {
    let dir = tempfile::tempdir().unwrap();
    solved_layout(dir.path());
    let instance_bytes = fs::read(dir.path().join("inst.json")).unwrap();
    let layout_bytes = fs::read(dir.path().join("run/best_layout.json")).unwrap();

    for args in [
        vec!["validate", "--layout", "run/best_layout.json"],
        vec!["metrics", "--layout", "run/best_layout.json"],
        vec!["render", "--layout", "run/best_layout.json", "--out", "x.svg"],
        vec![
            "solve", "--instance", "inst.json", "--algo", "de", "--pop", "8", "--gens", "2",
            "--out", "again",
        ],
    ] {
        let out = ollp(dir.path(), &args, &[]);
        assert!(out.status.success(), "{args:?}");
    }
    assert_eq!(instance_bytes, fs::read(dir.path().join("inst.json")).unwrap());
    assert_eq!(
        layout_bytes,
        fs::read(dir.path().join("run/best_layout.json")).unwrap()
    );
}
