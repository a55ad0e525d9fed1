//! Command-line behavior: exit codes, determinism, output schemas.

mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use common::{random_graph, test_stream};
use netbench_core::dataset::edgelist_string;
use netbench_core::graph::Graph;

fn netbench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netbench"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).to_string()
}

fn write_complete_graph(path: &Path, n: usize) {
    let g = Graph::from_edges((0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))), None).unwrap();
    std::fs::write(path, edgelist_string(&g)).unwrap();
}

struct Workspace {
    _dir: tempfile::TempDir,
    root: PathBuf,
}

impl Workspace {
    fn new() -> Workspace {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path().to_path_buf();
        Workspace { _dir: dir, root }
    }

    fn path(&self, name: &str) -> String {
        self.root.join(name).to_string_lossy().to_string()
    }
}

#[test]
fn usage_errors_exit_one() {
    let out = netbench(&["sample", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(1));
    let out = netbench(&["not-a-subcommand"]);
    assert_eq!(out.status.code(), Some(1));
    let out = netbench(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("sample"));
}

#[test]
fn data_errors_exit_two() {
    let ws = Workspace::new();
    std::fs::write(ws.root.join("bad.edges"), "0 x\n").unwrap();
    let out = netbench(&[
        "sample",
        "--input",
        &ws.path("bad.edges"),
        "--out",
        &ws.path("out"),
        "--seed",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));

    let out = netbench(&["stats", "--dataset", &ws.path("missing"), "--seed", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn partial_failures_exit_three() {
    let ws = Workspace::new();
    // draws clamp to the 5-node source, but its largest component holds 3
    std::fs::write(ws.root.join("tiny.edges"), "0 1\n1 2\n3 4\n").unwrap();
    let out = netbench(&[
        "sample",
        "--input",
        &ws.path("tiny.edges"),
        "--out",
        &ws.path("out"),
        "--count",
        "2",
        "--mu",
        "8",
        "--sigma",
        "0",
        "--seed",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("2 failure(s)"));
}

#[test]
fn sample_on_k20_with_degenerate_sigma() {
    let ws = Workspace::new();
    write_complete_graph(&ws.root.join("k20.edges"), 20);
    let out = netbench(&[
        "sample",
        "--input",
        &ws.path("k20.edges"),
        "--out",
        &ws.path("ds"),
        "--count",
        "1",
        "--mu",
        "10",
        "--sigma",
        "0",
        "--seed",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let manifest: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(ws.root.join("ds").join("manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["master_seed"], 3);
    let graphs = manifest["graphs"].as_array().unwrap();
    assert_eq!(graphs.len(), 1);
    assert_eq!(graphs[0]["id"], "sample_0");
    assert_eq!(graphs[0]["n_nodes"], 10);
    assert_eq!(graphs[0]["provenance"], "sampled");
}

#[test]
fn identical_seeds_give_byte_identical_datasets() {
    let ws = Workspace::new();
    let g = random_graph(300, 0.03, &mut test_stream(8));
    std::fs::write(ws.root.join("src.edges"), edgelist_string(&g)).unwrap();
    for out_dir in ["a", "b"] {
        let out = netbench(&[
            "sample",
            "--input",
            &ws.path("src.edges"),
            "--out",
            &ws.path(out_dir),
            "--count",
            "6",
            "--mu",
            "40",
            "--sigma",
            "5",
            "--seed",
            "42",
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    for name in ["manifest.json", "sample_0.edges", "sample_5.edges"] {
        let a = std::fs::read(ws.root.join("a").join(name)).unwrap();
        let b = std::fs::read(ws.root.join("b").join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identically seeded runs");
    }
}

#[test]
fn unseeded_runs_print_the_generated_seed() {
    let ws = Workspace::new();
    write_complete_graph(&ws.root.join("k9.edges"), 9);
    let out = netbench(&[
        "sample",
        "--input",
        &ws.path("k9.edges"),
        "--out",
        &ws.path("ds"),
        "--count",
        "1",
        "--mu",
        "5",
        "--sigma",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let seed_line = text
        .lines()
        .find(|l| l.starts_with("seed: "))
        .expect("generated seed is printed");
    let printed: u64 = seed_line.trim_start_matches("seed: ").parse().unwrap();
    let manifest: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(ws.root.join("ds").join("manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["master_seed"], printed);
}

#[test]
fn stats_prints_summary_keys_and_raw_rows() {
    let ws = Workspace::new();
    // one K3 as a bare ingested dataset
    std::fs::write(ws.root.join("ds.edges.d"), "").ok();
    let ds_dir = ws.root.join("k3ds");
    std::fs::create_dir(&ds_dir).unwrap();
    std::fs::write(ds_dir.join("g.edges"), "0 1\n1 2\n2 0\n").unwrap();

    let out = netbench(&["stats", "--dataset", &ws.path("k3ds"), "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for key in [
        "n_networks",
        "min_nodes",
        "max_nodes",
        "min_density",
        "max_density",
        "min_communities",
        "max_communities",
    ] {
        assert!(text.contains(key), "summary lacks {key}");
    }
    assert!(text.contains("min_density     1"));

    let out = netbench(&[
        "stats",
        "--dataset",
        &ws.path("k3ds"),
        "--seed",
        "5",
        "--raw",
        "--json",
        &ws.path("summary.json"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let header_at = text
        .lines()
        .position(|l| l == "graph_id,metric,value")
        .expect("raw header");
    // K3: 3 degree + 3 clustering + 3 spectral + 6 path rows
    let rows: Vec<&str> = text.lines().skip(header_at + 1).collect();
    assert_eq!(rows.len(), 15);
    assert_eq!(rows.iter().filter(|r| r.contains(",degree,")).count(), 3);
    assert_eq!(rows.iter().filter(|r| r.contains(",paths,")).count(), 6);

    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(ws.root.join("summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["n_networks"], 1);
    assert_eq!(summary["min_communities"], 1);
}

#[test]
fn mmd_self_comparison_writes_zero_row() {
    let ws = Workspace::new();
    let g = random_graph(200, 0.05, &mut test_stream(21));
    std::fs::write(ws.root.join("src.edges"), edgelist_string(&g)).unwrap();
    let out = netbench(&[
        "sample",
        "--input",
        &ws.path("src.edges"),
        "--out",
        &ws.path("ds"),
        "--count",
        "5",
        "--mu",
        "30",
        "--sigma",
        "3",
        "--seed",
        "11",
    ]);
    assert_eq!(out.status.code(), Some(0));

    for report_dir in ["r1", "r2"] {
        let out = netbench(&[
            "mmd",
            "--reference",
            &ws.path("ds"),
            "--candidate",
            &ws.path("ds"),
            "--out",
            &ws.path(report_dir),
            "--seed",
            "77",
        ]);
        assert_eq!(out.status.code(), Some(0));
    }

    let csv = std::fs::read_to_string(ws.root.join("r1").join("report.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "dataset,model,mmd_nodes,mmd_degree,mmd_clustering,mmd_spectral,mmd_steps,mmd_saturation,mmd_paths,mmd_louvain"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row.len(), 10);
    for score in &row[2..] {
        let value: f64 = score.parse().unwrap();
        assert!(value <= 1e-9, "self-comparison score {value}");
    }

    // identical seeds, identical bytes
    let a = std::fs::read(ws.root.join("r1").join("report.csv")).unwrap();
    let b = std::fs::read(ws.root.join("r2").join("report.csv")).unwrap();
    assert_eq!(a, b);
    let a = std::fs::read(ws.root.join("r1").join("report.json")).unwrap();
    let b = std::fs::read(ws.root.join("r2").join("report.json")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn mmd_accepts_a_config_file_and_flag_overrides() {
    let ws = Workspace::new();
    let g = random_graph(150, 0.06, &mut test_stream(31));
    std::fs::write(ws.root.join("src.edges"), edgelist_string(&g)).unwrap();
    netbench(&[
        "sample",
        "--input",
        &ws.path("src.edges"),
        "--out",
        &ws.path("ds"),
        "--count",
        "3",
        "--mu",
        "25",
        "--sigma",
        "2",
        "--seed",
        "13",
    ]);

    let config = r#"{
        "master_seed": 5,
        "sir": { "n_runs": 4 },
        "louvain_runs": 2,
        "kernels": { "nodes": { "kind": "gaussian", "bandwidth": "median-heuristic" } }
    }"#;
    std::fs::write(ws.root.join("suite.json"), config).unwrap();
    let out = netbench(&[
        "mmd",
        "--reference",
        &ws.path("ds"),
        "--candidate",
        &ws.path("ds"),
        "--out",
        &ws.path("rpt"),
        "--config",
        &ws.path("suite.json"),
        "--sir-runs",
        "6",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(ws.root.join("rpt").join("report.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(report["config"]["master_seed"], 5);
    assert_eq!(report["config"]["sir"]["n_runs"], 6);
    assert_eq!(report["config"]["louvain_runs"], 2);
    assert_eq!(report["config"]["sir"]["n_seeds"], 2);
}

#[test]
fn split_partitions_deterministically() {
    let ws = Workspace::new();
    let g = random_graph(200, 0.05, &mut test_stream(41));
    std::fs::write(ws.root.join("src.edges"), edgelist_string(&g)).unwrap();
    netbench(&[
        "sample",
        "--input",
        &ws.path("src.edges"),
        "--out",
        &ws.path("ds"),
        "--count",
        "10",
        "--mu",
        "25",
        "--sigma",
        "3",
        "--seed",
        "17",
    ]);
    for suffix in ["x", "y"] {
        let out = netbench(&[
            "split",
            "--dataset",
            &ws.path("ds"),
            "--ratio",
            "0.8",
            "--seed",
            "23",
            "--out-train",
            &ws.path(&format!("train_{suffix}")),
            "--out-test",
            &ws.path(&format!("test_{suffix}")),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let train: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(ws.root.join("train_x").join("manifest.json")).unwrap(),
    )
    .unwrap();
    let test: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(ws.root.join("test_x").join("manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(train["graphs"].as_array().unwrap().len(), 8);
    assert_eq!(test["graphs"].as_array().unwrap().len(), 2);
    assert_eq!(train["name"], "sampled_train");

    let a = std::fs::read(ws.root.join("train_x").join("manifest.json")).unwrap();
    let b = std::fs::read(ws.root.join("train_y").join("manifest.json")).unwrap();
    assert_eq!(a, b);

    // invalid ratio is a data error
    let out = netbench(&[
        "split",
        "--dataset",
        &ws.path("ds"),
        "--ratio",
        "1.5",
        "--seed",
        "1",
        "--out-train",
        &ws.path("t1"),
        "--out-test",
        &ws.path("t2"),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn threads_flag_does_not_change_results() {
    let ws = Workspace::new();
    let g = random_graph(200, 0.05, &mut test_stream(51));
    std::fs::write(ws.root.join("src.edges"), edgelist_string(&g)).unwrap();
    for (dir, threads) in [("one", "1"), ("many", "4")] {
        let out = netbench(&[
            "--threads",
            threads,
            "sample",
            "--input",
            &ws.path("src.edges"),
            "--out",
            &ws.path(dir),
            "--count",
            "4",
            "--mu",
            "30",
            "--sigma",
            "4",
            "--seed",
            "19",
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let a = std::fs::read(ws.root.join("one").join("manifest.json")).unwrap();
    let b = std::fs::read(ws.root.join("many").join("manifest.json")).unwrap();
    assert_eq!(a, b);
}
