mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use feature_clock::datasets::iris;
use feature_clock::ingest::{validate_config, write_dataset, Dataset, RawOptions};
use feature_clock::numstats::Matrix;
use feature_clock::pipeline::run_global;
use serde_json::Value;
use sha2::{Digest, Sha256};
use tempfile::TempDir;

use common::{normal, random_matrix, rng};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_feature-clock"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn arrows(v: &Value, clock: usize) -> Vec<(String, f64, f64)> {
    v["clocks"][clock]["arrows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| {
            (
                a["feature"].as_str().unwrap().to_string(),
                a["beta0"].as_f64().unwrap(),
                a["beta90"].as_f64().unwrap(),
            )
        })
        .collect()
}

struct Files {
    dir: TempDir,
    x: String,
    y: String,
    labels: Option<String>,
}

fn write_files(ds: &Dataset) -> Files {
    let dir = TempDir::new().unwrap();
    let x = dir.path().join("x.csv");
    let y = dir.path().join("y.csv");
    let labels = ds.labels().map(|_| dir.path().join("labels.csv"));
    write_dataset(ds, &x, &y, labels.as_deref()).unwrap();
    Files {
        x: x.display().to_string(),
        y: y.display().to_string(),
        labels: labels.map(|p| p.display().to_string()),
        dir,
    }
}

impl Files {
    fn out(&self) -> String {
        self.dir.path().join("out").display().to_string()
    }

    fn run(&self, command: &str, extra: &[&str]) -> Output {
        let out = self.out();
        let mut args = vec![command, "--x", &self.x, "--y", &self.y, "--out-dir", &out];
        if let Some(l) = &self.labels {
            args.extend(["--labels", l.as_str()]);
        }
        args.extend(extra);
        run(&args)
    }

    fn json(&self, stem: &str) -> Value {
        read_json(&self.dir.path().join("out").join(format!("{stem}.json")))
    }
}

fn noise_dataset(seed: u64) -> Dataset {
    let mut r = rng(seed);
    let x = random_matrix(&mut r, 100, 3);
    let y = random_matrix(&mut r, 100, 2);
    Dataset::new(vec!["a".into(), "b".into(), "c".into()], x, y, None).unwrap()
}

fn blob_dataset(seed: u64, groups: usize, per: usize) -> Dataset {
    let mut r = rng(seed);
    let mut xr = Vec::new();
    let mut yr = Vec::new();
    let mut tokens = Vec::new();
    for g in 0..groups {
        for _ in 0..per {
            let row = vec![g as f64 * 3.0 + normal(&mut r), normal(&mut r), normal(&mut r)];
            yr.push(vec![row[0] + 0.1 * normal(&mut r), row[1] + 0.1 * normal(&mut r)]);
            xr.push(row);
            tokens.push(format!("g{g}"));
        }
    }
    Dataset::new(
        vec!["a".into(), "b".into(), "c".into()],
        Matrix::from_rows(&xr).unwrap(),
        Matrix::from_rows(&yr).unwrap(),
        Some(tokens),
    )
    .unwrap()
}

#[test]
fn missing_file_is_input_error() {
    let o = run(&["global", "--x", "/nonexistent/x.csv", "--y", "/nonexistent/y.csv"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("/nonexistent/x.csv"), "{}", stderr(&o));
}

#[test]
fn bad_flags_are_input_errors() {
    assert_eq!(run(&["global", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["nope"]).status.code(), Some(2));
    let f = write_files(&noise_dataset(1));
    assert_eq!(f.run("global", &["--alpha", "1.5"]).status.code(), Some(2));
    assert_eq!(f.run("global", &["--canvas", "wide"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn strict_alpha_on_noise_gives_empty_clock() {
    let f = write_files(&noise_dataset(2));
    let o = f.run("global", &["--alpha", "0.0001"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("warning: no significant features"));
    let v = f.json("clock");
    assert!(v["clocks"][0]["arrows"].as_array().unwrap().is_empty());
    assert!(!v["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn single_label_local_matches_global() {
    let ds = noise_dataset(3);
    let n = ds.n();
    let f = write_files(&ds.clone().with_labels(vec!["all".to_string(); n]).unwrap());
    assert_eq!(f.run("global", &["--alpha", "1"]).status.code(), Some(0));
    assert_eq!(f.run("local", &["--alpha", "1"]).status.code(), Some(0));
    let g = arrows(&f.json("clock"), 0);
    let l = arrows(&f.json("local_clocks"), 0);
    assert_eq!(g.len(), 3);
    assert_eq!(g.len(), l.len());
    for (a, b) in g.iter().zip(&l) {
        assert_eq!(a.0, b.0);
        assert!((a.1 - b.1).abs() < 1e-12 && (a.2 - b.2).abs() < 1e-12);
    }
}

#[test]
fn dbscan_all_noise_is_compute_error() {
    let f = write_files(&noise_dataset(4));
    let o = f.run("local", &["--cluster", "dbscan:0.000001,3"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("no usable groups"), "{}", stderr(&o));
}

#[test]
fn local_without_grouping_is_input_error() {
    let f = write_files(&noise_dataset(5));
    let o = f.run("local", &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("no grouping source"));
}

#[test]
fn intergroup_needs_two_groups() {
    let ds = noise_dataset(6);
    let n = ds.n();
    let f = write_files(&ds.with_labels(vec!["one".to_string(); n]).unwrap());
    let o = f.run("intergroup", &[]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn three_groups_give_two_edges() {
    let f = write_files(&blob_dataset(7, 3, 40));
    let o = f.run("intergroup", &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = f.json("intergroup_clocks");
    assert_eq!(v["clocks"].as_array().unwrap().len(), 2);
    assert_eq!(v["grouping"]["mst"]["edges"].as_array().unwrap().len(), 2);
}

#[test]
fn and_rule_is_subset_of_or() {
    let f = write_files(&blob_dataset(8, 3, 40));
    assert_eq!(f.run("local", &["--alpha", "0.2"]).status.code(), Some(0));
    let or = f.json("local_clocks");
    assert_eq!(f.run("local", &["--alpha", "0.2", "--significance-rule", "and"]).status.code(), Some(0));
    let and = f.json("local_clocks");
    for c in 0..3 {
        let or_names: Vec<String> = arrows(&or, c).into_iter().map(|a| a.0).collect();
        for (name, _, _) in arrows(&and, c) {
            assert!(or_names.contains(&name));
        }
    }
}

#[test]
fn bundled_iris_files_reproduce_library_run() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().display().to_string();
    let x = data("iris_X.csv").display().to_string();
    let y = data("iris_pca.csv").display().to_string();
    let o = run(&["global", "--x", &x, "--y", &y, "--top-k", "4", "--out-dir", &out]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let cli = arrows(&read_json(&dir.path().join("clock.json")), 0);
    let raw = RawOptions {
        top_k: Some(4),
        ..RawOptions::default()
    };
    let lib = run_global(&iris(), &validate_config(&raw).unwrap()).unwrap();
    let lib: Value = serde_json::from_str(&lib.json()).unwrap();
    let lib = arrows(&lib, 0);
    assert_eq!(cli.len(), 4);
    for (a, b) in cli.iter().zip(&lib) {
        assert_eq!(a.0, b.0);
        assert!((a.1 - b.1).abs() < 1e-9 && (a.2 - b.2).abs() < 1e-9);
    }
}

#[test]
fn shipped_pca_matches_regeneration() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("pca.csv");
    let x = data("iris_X.csv").display().to_string();
    let o = run(&["pca", "--x", &x, "--out", &out.display().to_string()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(fs::read_to_string(out).unwrap(), fs::read_to_string(data("iris_pca.csv")).unwrap());
}

const DEMO_FILES: [&str; 6] = [
    "global_clock.json",
    "global_clock.svg",
    "local_clocks.json",
    "local_clocks.svg",
    "intergroup_clocks.json",
    "intergroup_clocks.svg",
];

fn demo(dir: &Path) {
    let o = run(&["demo", "--out-dir", &dir.display().to_string()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

fn sha256_hex(path: &Path) -> String {
    Sha256::digest(fs::read(path).unwrap())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

const GOLDEN: [&str; 6] = [
    "79c4345e594aa9dcf1477be680c5f7db7076eceff7fef806c4e4e3b7b840836d",
    "9fd4f5abe5eef3a421446a847a3505c8b129b188a1319c15c9593e1fca16fc54",
    "74f0a418ea63ce122efa6d6b63191c1b3a86cf98166dcd56659113f6d744f587",
    "b89fdae6703c075e69e8f14d3087349b1dddecb2a689ad89d4fd36058da72606",
    "71a69fb0cbd41e332885e1806402bbd78f6bc896fe0ff88d6a8ae97526a59ad1",
    "5667f6e462a5623cbe653d37cf71b691228c9e76d52dfce46aba3e9bb1e08408",
];

#[test]
fn demo_outputs_are_golden() {
    let dir = TempDir::new().unwrap();
    demo(dir.path());
    for (name, want) in DEMO_FILES.iter().zip(GOLDEN) {
        let got = sha256_hex(&dir.path().join(name));
        assert_eq!(got, want, "{name}");
    }
}

#[test]
fn demo_sepal_width_points_at_setosa() {
    let dir = TempDir::new().unwrap();
    demo(dir.path());
    let v = read_json(&dir.path().join("global_clock.json"));
    let clock = &v["clocks"][0];
    let anchor = (clock["anchor"][0].as_f64().unwrap(), clock["anchor"][1].as_f64().unwrap());
    let arrow = clock["arrows"]
        .as_array()
        .unwrap()
        .iter()
        .find(|a| a["feature"] == "sepal_width")
        .unwrap();
    let ds = iris();
    let labels = ds.labels().unwrap();
    let setosa: Vec<usize> = (0..ds.n()).filter(|&i| labels[i] == "setosa").collect();
    let cx = setosa.iter().map(|&i| ds.y().get(i, 0)).sum::<f64>() / setosa.len() as f64;
    let cy = setosa.iter().map(|&i| ds.y().get(i, 1)).sum::<f64>() / setosa.len() as f64;
    let dot = arrow["beta0"].as_f64().unwrap() * (cx - anchor.0) + arrow["beta90"].as_f64().unwrap() * (cy - anchor.1);
    assert!(dot > 0.0);
}
