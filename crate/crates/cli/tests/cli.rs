use std::io::Cursor;
use std::process::{Command, Stdio};

use involution::{ExactPmf, Histogram, Scenario};

const GOLDEN_STORY: &str = include_str!("../../../stories/three_cheaters.txt");
const SAMPLE_JSON: &str = r#"{"c": 3, "f": 1, "mistress": [2, 4, 3]}"#;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run_with(args: &[&str], stdin: &str) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("involution").chain(args.iter().copied());
    let code = involution_cli::run(argv, &mut Cursor::new(stdin.as_bytes()), &mut out, &mut err);
    Run {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn run(args: &[&str]) -> Run {
    run_with(args, "")
}

#[test]
fn gen_emits_valid_scenario() {
    let r = run(&["gen", "-c", "3", "-f", "1", "--seed", "7"]);
    assert_eq!(r.code, 0);
    let s: Scenario = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!((s.c(), s.f()), (3, 1));
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["c", "f", "mistress"]);
}

#[test]
fn story_matches_golden() {
    let r = run_with(&["story", "--scenario", "-"], SAMPLE_JSON);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout, GOLDEN_STORY);

    let file = concat!(env!("CARGO_MANIFEST_DIR"), "/../../stories/three_cheaters.json");
    let r = run(&["story", "--scenario", file]);
    assert_eq!(r.stdout, GOLDEN_STORY);
}

#[test]
fn pmf_total_is_uniform() {
    let r = run(&["--json", "pmf", "total", "-c", "3", "-f", "1"]);
    assert_eq!(r.code, 0);
    let p: ExactPmf = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(p.offset(), 1);
    assert_eq!(p.masses().len(), 4);
    assert!(r.stdout.matches(r#"{"num":"1","den":"4"}"#).count() == 4);
}

#[test]
fn chase_json() {
    let r = run_with(&["chase", "--scenario", "-", "--json"], SAMPLE_JSON);
    assert_eq!(r.stdout.trim(), r#"{"man":4,"asked":[4,2,1],"requests":3}"#);
    let r = run_with(&["--json", "chase", "--all", "--scenario", "-"], SAMPLE_JSON);
    assert_eq!(r.stdout.trim(), r#"{"pairs":{"4":{"woman":1,"requests":3}}}"#);
    let r = run_with(&["chase", "--scenario", "-", "-m", "2"], SAMPLE_JSON);
    assert_eq!(r.code, 1);
    assert!(r.stderr.starts_with("error: not_faithful:"));
}

#[test]
fn moments_and_pgf_json() {
    let r = run(&["--json", "moments", "total", "-c", "1", "-f", "2"]);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["mean"], serde_json::json!({"num": "8", "den": "3"}));
    assert_eq!(v["mu3"], serde_json::json!({"num": "-2", "den": "27"}));

    let r = run(&["--json", "moments", "single", "-c", "1", "-f", "2", "--order", "3"]);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["central_moment"], serde_json::json!({"num": "2", "den": "27"}));

    let r = run(&["--json", "pgf", "total", "-c", "1", "-f", "2"]);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v[2], serde_json::json!({"num": "1", "den": "3"}));
    assert_eq!(v[3], serde_json::json!({"num": "2", "den": "3"}));
}

#[test]
fn simulate_is_seeded() {
    let args = ["--json", "simulate", "single", "-c", "4", "-f", "2", "-n", "2000", "--seed", "9"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let h: Histogram = serde_json::from_str(&a.stdout).unwrap();
    assert_eq!((h.trials, h.seed), (2000, 9));

    let r = run(&["--json", "simulate", "total", "-c", "3", "-f", "1", "-n", "100000", "--compare"]);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert!(v["tv_distance"].as_f64().unwrap() < 0.01);
    assert_eq!(v["chi_squared"]["dof"], 3);
    assert!(v["chi_squared"]["statistic"].as_f64().unwrap() < 16.27);
}

#[test]
fn exit_codes() {
    let r = run(&["pmf", "single", "-c", "3", "-f", "0"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.stderr.lines().count(), 1);
    assert!(r.stderr.starts_with("error: no_faithful:"));

    assert_eq!(run(&["pmf", "single", "-c", "3"]).code, 2);
    assert_eq!(run(&["count", "-c", "3", "-f", "1", "--bogus"]).code, 2);
    assert_eq!(run(&["frobnicate"]).code, 2);

    let r = run_with(&["story", "--scenario", "-"], r#"{"c":2,"f":1,"mistress":[3,3]}"#);
    assert_eq!(r.code, 1);
    assert!(r.stderr.starts_with("error: non_injective:"));
    let r = run_with(&["story", "--scenario", "-"], "not json");
    assert_eq!(r.code, 1);
    assert_eq!(r.stderr.lines().count(), 1);
}

#[test]
fn gen_round_trips_through_chase_and_story() {
    for seed in 0..1000 {
        let seed = seed.to_string();
        let (c, f) = ("6", "3");
        let g = run(&["gen", "-c", c, "-f", f, "--seed", &seed]);
        assert_eq!(g.code, 0);
        assert_eq!(run_with(&["chase", "--scenario", "-", "--all"], &g.stdout).code, 0);
        assert_eq!(run_with(&["story", "--scenario", "-"], &g.stdout).code, 0);
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("involution-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("count.txt");
    let r = run(&["count", "-c", "3", "-f", "1", "--out", path.to_str().unwrap()]);
    assert_eq!((r.code, r.stdout.as_str()), (0, ""));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "24\n");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn verify_small_range_passes() {
    let r = run(&["verify", "--max-size", "500"]);
    assert_eq!(r.code, 0, "{}{}", r.stdout, r.stderr);
    assert_eq!(r.stdout.lines().count(), 6);
    assert!(r.stdout.lines().all(|l| l.starts_with("PASS ")));
}

#[test]
fn binary_pipes_gen_into_story() {
    let exe = env!("CARGO_BIN_EXE_involution");
    let gen = Command::new(exe)
        .args(["gen", "-c", "4", "-f", "2", "--seed", "5"])
        .output()
        .unwrap();
    assert!(gen.status.success());
    let mut story = Command::new(exe)
        .args(["story", "--scenario", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    use std::io::Write;
    story.stdin.take().unwrap().write_all(&gen.stdout).unwrap();
    let out = story.wait_with_output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("Once upon a time"));

    let bad = Command::new(exe).args(["limit", "-k", "1"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));

    let threads = Command::new(exe)
        .args(["simulate", "single", "-c", "2", "-f", "2", "-n", "10"])
        .env("GM_THREADS", "nope")
        .output()
        .unwrap();
    assert_eq!(threads.status.code(), Some(2));
}
