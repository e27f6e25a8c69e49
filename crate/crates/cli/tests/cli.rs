use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sparse-maker")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn play_to(dir: &Path, name: &str, extra: &[&str]) -> (Output, String) {
    let path = dir.join(name);
    let mut args = vec!["play", "--graph", "c6", "-o", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = run(&args);
    (o, fs::read_to_string(&path).unwrap_or_default())
}

#[test]
fn board_summary_for_six_cycle() {
    let o = run(&["board", "--graph", "c6", "--s", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("blocks 4 36 132 4 36 132"), "{text}");
    assert!(text.contains("edges_exact 10848"), "{text}");
}

#[test]
fn label_and_dag() {
    let o = run(&["label", "--graph", "petersen", "--leveling", "lll", "--level-seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("# violations 0"));
    let o = run(&["dag", "--graph", "c6"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("# P(2) = {0,3,1,4}"), "{text}");
    assert!(text.contains("pass true"));
}

#[test]
fn guarantee_play_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let (o, text) = play_to(dir.path(), "t.txt", &["--s", "guarantee", "--breaker", "random", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(text.contains("outcome winner=maker termination=completed"));
    assert!(text.contains("scheme verified"));
    let path = dir.path().join("t.txt");
    let o = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("replay identical"));

    // forge one Maker move
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    let k = lines.iter().position(|l| l.starts_with("M 3 ")).unwrap();
    lines[k] = lines[k].replace("case=", "case=2");
    let forged = dir.path().join("forged.txt");
    fs::write(&forged, lines.join("\n") + "\n").unwrap();
    let o = run(&["verify", forged.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains(&format!("first divergence at line {}", k + 1)), "{}", stdout(&o));
}

#[test]
fn round_cap_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let (o, text) = play_to(dir.path(), "t.txt", &["--s", "8", "--round-cap", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(text.contains("termination=round_cap"));
}

#[test]
fn scripted_play_reads_moves() {
    let dir = tempfile::tempdir().unwrap();
    let script = dir.path().join("moves.txt");
    fs::write(&script, "# two moves then passes\n0#0 1#0\npass\n").unwrap();
    let (o, text) = play_to(dir.path(), "t.txt", &["--s", "8", "--breaker", "scripted", "--script", script.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(text.contains("B 1 v0#0 v1#0\n"));
    assert!(text.contains("B 2 pass\n"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "graph=petersen\ns=64\nbreaker=scatter\nrepetitions=3\nseed=10\n").unwrap();
    let o = run(&["experiment", "--config", cfg.to_str().unwrap(), "--repetitions", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("run=1 seed=11 winner=maker"), "{text}");
    assert!(text.contains("breaker=scatter runs=2 wins=2 errors=0"), "{text}");
    assert!(text.contains("invariant_violations=0"));
}

#[test]
fn empty_experiment_succeeds() {
    let o = run(&["experiment", "--graph", "c6", "--repetitions", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("runs=0 wins=0"));
}

#[test]
fn oracle_suite_agrees() {
    let o = run(&["oracle", "--cases", "40"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("0 disagreements"));
}

#[test]
fn errors_exit_one() {
    assert_eq!(run(&["board", "--graph", "nope"]).status.code(), Some(1));
    assert_eq!(run(&["board", "--graph", "c6", "--s", "zero"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "/nonexistent/transcript"]).status.code(), Some(1));
    assert_eq!(run(&["play", "--graph", "c6", "--breaker", "scripted"]).status.code(), Some(1));
}
