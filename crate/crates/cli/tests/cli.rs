use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_sampled-centrality"));
    c.env_remove("SAMPLED_CENTRALITY_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

#[test]
fn full_sampling_matches_dense_reference() {
    let out = run(&[
        "run",
        "--generate",
        "er:n=60,p=0.1,seed=1",
        "--measure",
        "subgraph",
        "--gamma",
        "1",
        "--ell",
        "60",
        "--strategy",
        "guided",
        "--seed",
        "7",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["tool_version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["reference"]["source"], "dense");
    assert_eq!(v["runs"][0]["overlap"], 20);
    assert_eq!(v["runs"][0]["exact"], 20);
    assert_eq!(v["complete"], true);
    // Header keys come first.
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys[..2], ["tool_version", "config_echo"]);
}

#[test]
fn star_perron_ranks_center_first() {
    let out = run(&["run", "--generate", "star:leaves=3", "--measure", "perron", "--ell", "4"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["runs"][0]["top"][0], 0);
    assert_eq!(v["reference"]["top"][0], 0);
    assert_eq!(v["config_echo"]["k"], 4);
}

#[test]
fn timing_table_per_ell() {
    let out = run(&[
        "run",
        "--generate",
        "pa:n=200,m=3,seed=2",
        "--measure",
        "communicability",
        "--ell",
        "10..30:10",
        "--trials",
        "3",
        "--strategy",
        "both",
    ]);
    assert!(out.status.success());
    let stderr = String::from_utf8(out.stderr.clone()).unwrap();
    assert!(stderr.starts_with("ell      strategy  mean_s"));
    assert_eq!(stderr.lines().count(), 1 + 3 * 2);
    let v = json(&out);
    assert_eq!(v["runs"].as_array().unwrap().len(), 18);
    assert_eq!(v["summary"].as_array().unwrap().len(), 6);
    assert!(v.get("timing_seconds").is_none());
}

#[test]
fn katz_defaults_to_half_inverse_spectral_radius() {
    let out = run(&["run", "--generate", "cycle:n=5", "--measure", "katz", "--ell", "5"]);
    assert!(out.status.success());
    let gamma = json(&out)["gamma"].as_f64().unwrap();
    assert!((gamma - 0.25).abs() < 1e-8, "{gamma}");
}

#[test]
fn env_seed_is_the_default() {
    let args = [
        "run",
        "--generate",
        "er:n=50,p=0.1,seed=3",
        "--measure",
        "subgraph",
        "--ell",
        "8",
        "--strategy",
        "random",
    ];
    let a = bin().args(args).env("SAMPLED_CENTRALITY_SEED", "11").output().unwrap();
    let b = run(&[&args[..], &["--seed", "11"]].concat());
    let c = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn failed_runs_are_flushed_and_exit_nonzero() {
    // A path on 3 nodes has only 3 nonzero columns.
    let out = run(&["run", "--generate", "path:n=3", "--measure", "subgraph", "--ell", "2,5"]);
    assert!(!out.status.success());
    let v = json(&out);
    assert_eq!(v["complete"], false);
    assert_eq!(v["runs"][0]["status"], "ok");
    assert_eq!(v["runs"][1]["status"], "failed");
    assert!(String::from_utf8_lossy(&out.stderr).contains("run failed"));

    let csv = run(&["run", "--generate", "path:n=3", "--measure", "subgraph", "--ell", "2,5", "--csv"]);
    assert!(String::from_utf8(csv.stdout).unwrap().trim_end().ends_with("failed,1"));
}

#[test]
fn csv_figure_layout_and_out_files() {
    let dir = std::env::temp_dir().join(format!("sc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out_path = dir.join("report.json");
    let out = run(&[
        "run",
        "--generate",
        "er:n=40,p=0.15,seed=4",
        "--measure",
        "communicability",
        "--ell",
        "10",
        "--k",
        "5",
        "--json",
        "--csv",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(report["config_echo"]["k"], 5);
    let csv = std::fs::read_to_string(dir.join("report.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert!(lines[0].starts_with("# tool_version="));
    assert_eq!(lines[1], "rank,reference,guided l=10 seed=0");
    assert_eq!(lines.len(), 2 + 5 + 2);
    assert!(lines[7].starts_with("overlap@5,5,"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn generate_writes_edge_list() {
    let out = run(&["generate", "cycle:n=3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 3);
}

#[test]
fn invalid_arguments_fail() {
    for args in [
        &["run", "--generate", "blob:n=3", "--measure", "subgraph", "--ell", "2"][..],
        &["run", "--generate", "star:leaves=3", "--measure", "subgraph", "--ell", "0"],
        &[
            "run",
            "--generate",
            "star:leaves=3",
            "--measure",
            "subgraph",
            "--ell",
            "2",
            "--trials",
            "0",
        ],
        &["run", "--measure", "subgraph", "--ell", "2"],
        &["run", "--input", "/nonexistent/graph.txt", "--measure", "subgraph", "--ell", "2"],
        &["generate", "er:n=10"],
    ] {
        let out = run(args);
        assert!(!out.status.success(), "{args:?}");
    }
}

#[test]
fn reads_matrix_market_input() {
    let dir = std::env::temp_dir().join(format!("sc-mtx-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("star.mtx");
    std::fs::write(&path, "%%MatrixMarket matrix coordinate pattern symmetric\n4 4 3\n2 1\n3 1\n4 1\n").unwrap();
    let out = run(&[
        "run",
        "--input",
        path.to_str().unwrap(),
        "--format",
        "mtx",
        "--measure",
        "communicability",
        "--ell",
        "1",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["graph"]["directed"], false);
    // Labels are the 1-based Matrix Market ids; the center is node 1.
    assert_eq!(v["reference"]["top"][0], 1);
    std::fs::remove_dir_all(&dir).unwrap();
}
