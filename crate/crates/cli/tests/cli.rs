use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::NamedTempFile;

fn file(contents: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homhash"))
        .args(args)
        .output()
        .unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

#[test]
fn subset_sum_decide_yes_with_witness() {
    let f = file("3 8\n3 5 8\n");
    let out = run(&["subsetsum", "decide", f.path().to_str().unwrap(), "--oracle"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["answer"]["decision"], "YES");
    let w: Vec<u64> = serde_json::from_value(r["witness"].clone()).unwrap();
    let weights = [3u64, 5, 8];
    assert_eq!(w.iter().map(|&i| weights[i as usize]).sum::<u64>(), 8);
    assert_eq!(r["oracle_checked"], true);
}

#[test]
fn subset_sum_no_exits_one() {
    let f = file("3 8\n1 2 4\n");
    let out = run(&["subsetsum", "decide", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["answer"]["decision"], "NO");
}

#[test]
fn subset_sum_count_and_table_engine() {
    let f = file("4 5\n1 2 3 4\n");
    for algo in ["derandomized", "derandomized-table"] {
        let out = run(&["subsetsum", "count", f.path().to_str().unwrap(), "--algo", algo, "--oracle"]);
        assert_eq!(out.status.code(), Some(0));
        // {1,4} and {2,3}.
        assert_eq!(report(&out)["answer"]["count"], "2");
    }
}

#[test]
fn cnf_count_both_routes() {
    let f = file("c running example\np cnf 2 2\n1 2 0\n-1 0\n");
    for algo in ["projections", "union"] {
        let out = run(&["cnf", "count", f.path().to_str().unwrap(), "--algo", algo, "--oracle"]);
        assert_eq!(out.status.code(), Some(0));
        let r = report(&out);
        assert_eq!(r["answer"]["count"], "1");
        assert_eq!(r["parameters"]["P"], 3);
        assert_eq!(r["oracle_checked"], true);
    }
}

#[test]
fn cnf_projection_listing() {
    let f = file("p cnf 2 2\n1 2 0\n-1 0\n");
    let out = run(&["cnf", "projections", f.path().to_str().unwrap(), "--oracle"]);
    let r = report(&out);
    let list = r["parameters"]["projections"].as_array().unwrap();
    let pairs: Vec<(String, String)> = list
        .iter()
        .map(|e| (e["projection"].as_str().unwrap().to_owned(), e["count"].as_str().unwrap().to_owned()))
        .collect();
    assert_eq!(
        pairs,
        vec![("10".into(), "2".into()), ("01".into(), "1".into()), ("11".into(), "1".into())]
    );
}

#[test]
fn linear_sat_modes() {
    let f = file("2 2\n10\n01\n11\n1 1\n2\n");
    let path = f.path().to_str().unwrap();
    for algo in ["winwin", "hash", "highrank"] {
        let out = run(&["linsat", "count", path, "--algo", algo, "--oracle"]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(report(&out)["answer"]["count"], "1");
    }
    let g = file("2 2\n10\n10\n01\n1 1\n2\n");
    let out = run(&["linsat", "decide", g.path().to_str().unwrap(), "--oracle"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn set_partition_and_cover() {
    let part = file("3 4 2\n100\n011\n110\n001\n");
    for mode in ["poly", "exp"] {
        let out = run(&["setpart", mode, part.path().to_str().unwrap(), "--oracle"]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(report(&out)["answer"]["count"], "2");
    }
    let cover = file("2 3 2\n10\n01\n11\n");
    let out = run(&["setcover", cover.path().to_str().unwrap(), "--oracle"]);
    let r = report(&out);
    assert_eq!(r["answer"]["decision"], "YES");
    assert_eq!(r["parameters"]["count"], "3");
    let none = file("3 3 2\n100\n010\n001\n");
    let out = run(&["setcover", none.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reports_are_deterministic_per_seed() {
    let f = file("6 21\n1 2 3 4 5 6\n");
    let path = f.path().to_str().unwrap();
    let a = run(&["--seed", "1", "subsetsum", "decide", path]);
    let b = run(&["--seed", "1", "subsetsum", "decide", path]);
    assert_eq!(a.stdout, b.stdout);
    let g = file("3 4 2\n100\n011\n110\n001\n");
    let a = run(&["--seed", "1", "setpart", "poly", g.path().to_str().unwrap()]);
    let b = run(&["--seed", "1", "--threads", "1", "setpart", "poly", g.path().to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn usage_and_input_errors_exit_two() {
    let bad = file("p cnf x 2\n");
    let out = run(&["cnf", "count", bad.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let f = file("1 1\n1\n");
    let out = run(&["subsetsum", "decide", f.path().to_str().unwrap(), "--algo", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exhausted_budget_exits_four() {
    let f = file("3 8\n3 5 8\n");
    let out = run(&["subsetsum", "count", f.path().to_str().unwrap(), "--budget", "3"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn selftest_passes() {
    let out = run(&["selftest"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(report(&out)["oracle_checked"], true);
}

#[test]
fn timing_is_opt_in() {
    let f = file("1 1\n1\n");
    let path = f.path().to_str().unwrap();
    assert!(report(&run(&["subsetsum", "decide", path])).get("elapsed_ms").is_none());
    assert!(report(&run(&["subsetsum", "decide", path, "--timing"]))["elapsed_ms"].is_number());
}

#[test]
fn bench_emits_csv() {
    let out = run(&["bench", "--suite", "cnf", "--exponents", "2,3", "--reps", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "instance,algorithm,sparsity_name,sparsity,rep,seconds,answer");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("cnf-p2,projection_support,P,4,0,"));
}
