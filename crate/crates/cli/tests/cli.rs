use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use polya_core::mass::{parse_decimal, ratio};
use polya_core::Rational;
use polya_net::{parse_config, ExperimentConfig, GraphSpec};

const BIN: &str = env!("CARGO_BIN_EXE_polya-net");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("POLYA_NET_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "status {:?}, stderr: {}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_graph(dir: &Path, name: &str, kind: &str, nodes: usize) -> String {
    let path = dir.join(name);
    let p = path.to_str().unwrap().to_string();
    stdout(&run(&["graph-gen", "--kind", kind, "--nodes", &nodes.to_string(), "-o", &p]));
    p
}

fn sum_fractions<'a>(rows: impl Iterator<Item = (&'a str, &'a str)>) -> Rational {
    rows.map(|(n, d)| parse_decimal(&format!("{n}/{d}")).unwrap()).sum()
}

#[test]
fn enumerate_two_node_table_sums_to_one() {
    let dir = tempfile::tempdir().unwrap();
    let k2 = write_graph(dir.path(), "k2.edges", "complete", 2);
    let text = stdout(&run(&[
        "enumerate", "--graph", &k2, "--red", "1,1", "--black", "1,1", "--delta", "1", "--horizon", "2",
    ]));
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# config_sha256="));
    assert_eq!(lines.next().unwrap(), "a_1_1,a_1_2,a_2_1,a_2_2,p_num,p_den");
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 16);
    let total = sum_fractions(rows.iter().map(|r| (r[4], r[5])));
    assert_eq!(total, ratio(1, 1));
    // All four draws black: (1/2)(1/2) then (4/6)(4/6).
    assert_eq!((rows[0][4], rows[0][5]), ("1", "9"));
}

#[test]
fn float_enumeration_matches_exact() {
    let dir = tempfile::tempdir().unwrap();
    let c = write_graph(dir.path(), "c3.edges", "cycle", 3);
    let text = stdout(&run(&[
        "enumerate", "--graph", &c, "--red", "1,2,1", "--black", "2", "--delta", "0.5", "--horizon", "2", "--float",
    ]));
    let total: f64 = text
        .lines()
        .skip(2)
        .map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn single_node_fit_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("one.edges");
    fs::write(&g, "1\n").unwrap();
    let text = stdout(&run(&[
        "fit", "--graph", g.to_str().unwrap(), "--red", "1", "--black", "1", "--delta", "1", "--horizon", "8",
    ]));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let fit = &v["fits"][0];
    assert!((fit["delta_hat"].as_f64().unwrap() - 0.5).abs() < 1e-6);
    assert!(fit["kl"].as_f64().unwrap() < 1e-9);
    assert_eq!(v["seed"], 0);
}

#[test]
fn sis_below_threshold_dies_out() {
    let dir = tempfile::tempdir().unwrap();
    let k5 = write_graph(dir.path(), "k5.edges", "complete", 5);
    let csv = dir.path().join("sis.csv");
    let text = stdout(&run(&[
        "sis", "--graph", &k5, "--beta", "0.2", "--delta-sis", "0.9", "--horizon", "200",
        "-o", csv.to_str().unwrap(),
    ]));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(v["final_mean"].as_f64().unwrap() <= 1e-6);
    assert_eq!(v["classification"], "dies_out");
    assert!((v["lambda_max"].as_f64().unwrap() - 4.0).abs() < 1e-9);
    assert_eq!(fs::read_to_string(&csv).unwrap().lines().count(), 2 + 201);
}

#[test]
fn simulate_is_reproducible_and_tagged() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_graph(dir.path(), "ba.edges", "ba", 12);
    let args = |out: &str, threads: &str| {
        vec![
            "--threads".to_string(), threads.into(), "simulate".into(), "--graph".into(), g.clone(),
            "--red".into(), "1".into(), "--black".into(), "2".into(), "--delta".into(), "1".into(),
            "--horizon".into(), "20".into(), "--trials".into(), "300".into(), "--seed".into(), "9".into(),
            "--pairs".into(), "-o".into(), out.into(),
        ]
    };
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (path, threads) in [(&a, "1"), (&b, "3")] {
        let argv = args(path.to_str().unwrap(), threads);
        let text = stdout(&run(&argv.iter().map(String::as_str).collect::<Vec<_>>()));
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["seed"], 9);
        assert_eq!(v["trials"], 300);
    }
    let first = fs::read_to_string(&a).unwrap();
    assert_eq!(first, fs::read_to_string(&b).unwrap());
    assert!(first.starts_with("# config_sha256="));
    assert!(first.lines().nth(1).unwrap().ends_with(",pair_freq"));
}

#[test]
fn histogram_output_has_unit_area() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_graph(dir.path(), "s.edges", "star", 4);
    let hist = dir.path().join("h.csv");
    let traj = dir.path().join("t.csv");
    stdout(&run(&[
        "simulate", "--graph", &g, "--red", "1", "--black", "1", "--delta", "1", "--horizon", "30", "--trials", "500",
        "--node", "0", "--histogram-output", hist.to_str().unwrap(), "--bins", "10", "-o", traj.to_str().unwrap(),
    ]));
    let text = fs::read_to_string(&hist).unwrap();
    let area: f64 = text
        .lines()
        .skip(2)
        .map(|l| {
            let f: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            (f[1] - f[0]) * f[2]
        })
        .sum();
    assert!((area - 1.0).abs() < 1e-9);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let k2 = write_graph(dir.path(), "k2.edges", "complete", 2);
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["simulate", "--trials", "x"]).status.code(), Some(1));

    let zero = run(&["enumerate", "--graph", &k2, "--red", "0", "--black", "1", "--delta", "1", "--horizon", "1"]);
    assert_eq!(zero.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&zero.stderr).contains("red[0] = 0 must be ≥ 1"));

    let neg = run(&["enumerate", "--graph", &k2, "--red", "1", "--black", "1", "--delta-red", "-1", "--delta-black", "1", "--horizon", "1"]);
    assert_eq!(neg.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&neg.stderr).contains("delta_red must be ≥ 0"));

    let capped = run(&["enumerate", "--graph", &k2, "--red", "1", "--black", "1", "--delta", "1", "--horizon", "3", "--cap", "4"]);
    assert_eq!(capped.status.code(), Some(1));

    let unwritable = dir.path().join("missing").join("out.csv");
    let io = run(&[
        "enumerate", "--graph", &k2, "--red", "1", "--black", "1", "--delta", "1", "--horizon", "1",
        "-o", unwritable.to_str().unwrap(),
    ]);
    assert_eq!(io.status.code(), Some(2));
}

#[test]
fn config_round_trips_and_flags_win() {
    let cfg = ExperimentConfig {
        network: Some(GraphSpec { kind: "cycle".into(), nodes: 4, m: None, seed: None }),
        red: Some(vec!["0.1".into(), "1".into(), "3/7".into(), "2".into()]),
        black: Some(vec!["1e0".into()]),
        delta: Some("0.25".into()),
        memory: Some(3),
        horizon: Some(2),
        ..Default::default()
    };
    let json = serde_json::to_string_pretty(&cfg).unwrap();
    assert_eq!(parse_config(&json).unwrap(), cfg);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.json");
    let fixed = ExperimentConfig { red: Some(vec!["1".into()]), ..cfg };
    fs::write(&path, serde_json::to_string(&fixed).unwrap()).unwrap();
    let base = stdout(&run(&["enumerate", "--config", path.to_str().unwrap(), "--float"]));
    let over = stdout(&run(&["enumerate", "--config", path.to_str().unwrap(), "--float", "--horizon", "1"]));
    assert_eq!(base.lines().count(), 2 + 256);
    assert_eq!(over.lines().count(), 2 + 16);
    // Missing seed defaults to 0 and is echoed in the header.
    assert!(base.lines().next().unwrap().contains(" seed=0 "));
}

#[test]
fn config_errors_report_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{\n  \"horizon\": 2,\n  \"delta\": 0.5\n}").unwrap();
    let out = run(&["enumerate", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn reproduce_writes_tagged_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let text = stdout(&run(&["reproduce", "fig5", "--out-dir", out, "--trials", "20", "--horizon", "40", "--seed", "3"]));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["runs"].as_array().unwrap().len(), 6);
    for label in ["low", "met", "same_finite"] {
        let csv = fs::read_to_string(dir.path().join(format!("fig5_{label}.csv"))).unwrap();
        assert!(csv.starts_with("# config_sha256=") && csv.contains(" seed=3 "));
    }
    assert!(dir.path().join("fig5_summary.json").exists());
}
