use std::path::PathBuf;
use std::process::Command;

use gclwb_cli::{run, Output};

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name).to_string_lossy().into_owned()
}

fn gclwb(args: &[&str]) -> Output {
    run(std::iter::once("gclwb").chain(args.iter().copied()))
}

fn code(args: &[&str]) -> i32 {
    gclwb(args).code
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut a = args.to_vec();
    a.push("--json");
    let out = gclwb(&a);
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", out.stdout))
}

#[test]
fn run_exit_codes() {
    let gcd = corpus("gcd.gcl");
    let out = gclwb(&["run", &gcd, "--init", "x=12,y=18", "--all"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("x: 6") || out.stdout.contains("x:6"), "{}", out.stdout);
    assert_eq!(code(&["run", &corpus("diverge.gcl"), "--init", "x=0", "--budget", "50"]), 1);
    assert_eq!(code(&["run", &gcd, "--init", "x=twelve"]), 2);
    assert_eq!(code(&["run", "/no/such/file.gcl"]), 2);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.gcl");
    std::fs::write(&bad, "var x;\ndo x > 0 -> x := x - 1\n").unwrap();
    let out = gclwb(&["run", bad.to_str().unwrap(), "--init", "x=1"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.starts_with("error:"), "{}", out.stderr);
}

#[test]
fn run_single_choice_follows_seed() {
    let choice = corpus("choice.gcl");
    let a = gclwb(&["run", &choice, "--init", "x=7", "--seed", "3"]);
    let b = gclwb(&["run", &choice, "--init", "x=7", "--seed", "3"]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_exit_codes() {
    assert_eq!(code(&["verify", &corpus("gcd.gcl"), "--domain", "x=1..20,y=1..20"]), 0);
    for mutant in ["gcd-no-lower-bound.gcl", "gcd-bound-x.gcl", "gcd-weak-invariant.gcl"] {
        assert_eq!(code(&["verify", &corpus(mutant), "--domain", "x=-3..12,y=-3..12"]), 1, "{mutant}");
    }
    assert_eq!(code(&["verify", &corpus("gcd.gcl"), "--domain", "x=1..,y=1..20"]), 2);
    assert_eq!(code(&["verify", &corpus("gcd.gcl")]), 2);
}

#[test]
fn verify_json_reports_counterexample() {
    let v = json(&["verify", &corpus("gcd-bound-x.gcl"), "--domain", "x=-3..12,y=-3..12"]);
    assert_eq!(v["ok"], false);
    let failing: Vec<_> = v["vcs"].as_array().unwrap().iter().filter(|vc| vc["valid"] == false).collect();
    assert!(!failing.is_empty());
    assert!(failing.iter().all(|vc| vc["counterexample"].is_object()));
}

#[test]
fn prove_exit_codes() {
    let out = gclwb(&["prove", &corpus("heron.proof")]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("overall: valid"));
    assert_eq!(code(&["prove", &corpus("heron-no-definition.proof")]), 1);

    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.proof");
    std::fs::write(&broken, "a + b\n= { algebra\nb + a\n").unwrap();
    assert_eq!(code(&["prove", broken.to_str().unwrap()]), 2);
}

#[test]
fn explore_exit_codes() {
    assert_eq!(code(&["explore", "--model", "dekker"]), 0);
    assert_eq!(code(&["explore", "--model", "philosophers:n=3,strategy=symmetric"]), 1);
    assert_eq!(code(&["explore", "--model", "philosophers:n=3,strategy=asymmetric"]), 0);
    assert_eq!(code(&["explore", "--model", "ring:n=3,k=3", "--check", "stabilization"]), 0);
    assert_eq!(code(&["explore", "--model", "turnstile"]), 2);
    assert_eq!(code(&["explore", "--model", "ring:n=3,k=3", "--check", "mutex"]), 2);
}

#[test]
fn explore_json_has_trace() {
    let v = json(&["explore", "--model", "naive", "--check", "mutex"]);
    assert_eq!(v["ok"], false);
    let labels = v["checks"]["mutex"]["trace"]["labels"].as_array().unwrap();
    assert_eq!(labels.len(), 4);
}

#[test]
fn explore_writes_dot() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dekker.dot");
    assert_eq!(code(&["explore", "--model", "dekker", "--dot", path.to_str().unwrap()]), 0);
    let dot = std::fs::read_to_string(&path).unwrap();
    assert!(dot.starts_with("digraph"));
    assert!(dot.trim_end().ends_with('}'));
}

#[test]
fn demo_exit_codes() {
    assert_eq!(code(&["demo", "sssp", &corpus("streets.tsv"), "--source", "home"]), 0);
    assert_eq!(code(&["demo", "sssp", &corpus("streets.tsv"), "--source", "nowhere"]), 2);
    assert_eq!(code(&["demo", "banker", "--capital", "10", "--loans", "4,4", "--claims", "8,6"]), 0);
    assert_eq!(code(&["demo", "banker", "--capital", "10", "--loans", "4,4", "--claims", "10,10"]), 1);
    assert_eq!(code(&["demo", "banker", "--capital", "10", "--loans", "4", "--claims", "8,6"]), 2);
    assert_eq!(code(&["demo", "fair-bit", "--draws", "100"]), 0);
    assert_eq!(code(&["demo", "fair-bit", "--bias", "1.5"]), 2);
    assert_eq!(code(&["demo", "roulette", "--n", "3", "--draws", "100"]), 0);
    assert_eq!(code(&["demo", "pythagoras", "--sides", "3,4,5"]), 0);
    assert_eq!(code(&["demo", "pythagoras", "--sides", "1,2,5"]), 2);
    assert_eq!(code(&["demo", "sylvester", &corpus("grid3.tsv")]), 0);
    assert_eq!(code(&["demo", "knight", "--n", "5"]), 0);
    assert_eq!(code(&["demo", "knight", "--n", "4"]), 1);
    assert_eq!(code(&["demo", "knight", "--n", "9"]), 2);
    assert_eq!(code(&["demo", "river"]), 0);
    assert_eq!(code(&["demo", "ring-k", "--n", "4"]), 0);
}

#[test]
fn river_plan_text() {
    let out = gclwb(&["demo", "river"]);
    assert!(out.stdout.lines().next().unwrap().contains("goat"));
    assert!(out.stdout.contains("7 crossings"));
}

#[test]
fn json_carries_ok_flag() {
    assert_eq!(json(&["prove", &corpus("heron.proof")])["ok"], true);
    assert_eq!(json(&["demo", "knight", "--n", "3"])["ok"], false);
    let out = gclwb(&["run", "/no/such/file.gcl", "--json"]);
    assert_eq!(out.code, 2);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert!(v["error"].is_string());
}

#[test]
fn usage_errors() {
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&[]), 2);
    assert_eq!(code(&["run", &corpus("gcd.gcl"), "--budget", "lots"]), 2);
}

#[test]
fn binary_seed_from_environment() {
    let exe = env!("CARGO_BIN_EXE_gclwb");
    let args = ["demo", "roulette", "--n", "5", "--draws", "500"];
    let flag = Command::new(exe).args(args).args(["--seed", "17"]).env_remove("GCLWB_SEED").output().unwrap();
    let env = Command::new(exe).args(args).env("GCLWB_SEED", "17").output().unwrap();
    let other = Command::new(exe).args(args).args(["--seed", "18"]).env_remove("GCLWB_SEED").output().unwrap();
    assert_eq!(flag.status.code(), Some(0));
    assert_eq!(flag.stdout, env.stdout);
    assert_ne!(flag.stdout, other.stdout);
}
