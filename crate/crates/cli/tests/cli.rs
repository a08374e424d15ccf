use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

use tetradigit::format::{parse_circuit, write_circuit};
use tetradigit_core::circuit::synth_uc;
use tetradigit_core::{Lattice, Tag, TdModel, TdParams};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }
}

fn run(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_tetradigit")).args(args).output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).display().to_string()
}

#[test]
fn model_reports() {
    let r = run(&["model", "--td", "0,1,2,3", "--dims", "2,3,3"]);
    assert_eq!(r.code, 0);
    let v = r.json();
    assert_eq!(v["gsd_log2"], 13);
    assert_eq!(v["redundancies"], 6);
    assert_eq!(v["seed_count"], 13);
    assert_eq!(v["seed_set_size"], 13);
    assert_eq!(v["commuting"], true);

    let v = run(&["model", "--td", "0,1,1,1", "--dims", "5"]).json();
    assert_eq!(v["commuting"], false);
    assert!(v["gsd_log2"].is_null());

    let v = run(&["model", "--td", "2,3,4,4", "--dims", "2,2,2,2"]).json();
    assert_eq!(v["gsd_log2"], 4);

    let v = run(&["model", "--td", "0,1,2,2", "--dims", "3,3", "--open", "1,2"]).json();
    assert_eq!(v["gsd_log2"], 0);
    assert_eq!(v["lattice_sizes"], serde_json::json!([2, 2]));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["model", "--td", "0,1,2", "--dims", "3"]).code, 2);
    assert_eq!(run(&["model", "--td", "0,1,2,2", "--dims", "3"]).code, 2);
    assert_eq!(run(&["model", "--td", "0,1,2,2", "--dims", "3,3", "--open", "3"]).code, 2);
    assert_eq!(run(&["model", "--td", "2,1,2,2", "--dims", "3,3"]).code, 2);
    let r = run(&["synth", "--td", "0,1,1,1", "--dims", "5"]);
    assert_eq!(r.code, 3, "{}", r.stderr);
    assert_eq!(run(&["synth", "--td", "0,2,2,2", "--dims", "3,3"]).code, 3);
    assert_eq!(run(&["verify", "--td", "0,1,2,2", "--dims", "3,3", "--seeds", "basis:1"]).code, 2);
}

#[test]
fn synth_toric_file() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "u.qct");
    let r = run(&["synth", "--td", "0,1,2,2", "--dims", "4,4", "--out", &out]);
    assert_eq!(r.code, 0);
    let v = r.json();
    assert_eq!(v["h_layers"], 1);
    assert_eq!(v["cnot_layers"], 6);
    assert_eq!(v["predicted_cnot_layers"], 6);

    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("qubits 32\n"));
    assert!(text.ends_with('\n'));
    let parsed = parse_circuit(&text).unwrap();
    assert_eq!(parsed.layers.len(), 7);
    assert_eq!(write_circuit(&parsed), text);

    let model = TdModel::build(Lattice::periodic(&[4, 4]).unwrap(), TdParams::new(0, 1, 2, 2).unwrap()).unwrap();
    assert_eq!(parsed, synth_uc(&model).unwrap().circuit);

    let stdout = run(&["synth", "--td", "0,1,2,2", "--dims", "4,4"]);
    assert_eq!(stdout.stdout, text);
    assert!(stdout.stderr.contains("\"cnot_layers\": 6"));
}

#[test]
fn synth_open_drops_parts() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "open.qct");
    let args = ["--td", "1,2,3,3", "--dims", "3,3,3", "--open", "1"];
    let r = run(&[&["synth"][..], &args, &["--out", &out]].concat());
    assert_eq!(r.code, 0);
    for part in r.json()["parts"].as_array().unwrap() {
        let removed = part["part"].as_str().unwrap().contains('1');
        assert_eq!(part["removed"], removed);
        if removed {
            assert_eq!(part["layers"], 0);
        }
    }
    let circuit = parse_circuit(&fs::read_to_string(&out).unwrap()).unwrap();
    for seg in circuit.layers.iter().flat_map(|l| &l.segments) {
        if let Tag::Uc { part, .. } = seg.tag {
            assert!(!part.contains(0));
        }
    }
    let r = run(&[&["verify"][..], &args, &["--circuit", &out]].concat());
    assert_eq!(r.code, 0, "{}", r.stdout);
}

#[test]
fn synth_seed_prefix() {
    let r = run(&["synth", "--td", "0,1,2,3", "--dims", "3,3,3", "--seeds", "ghz"]);
    assert_eq!(r.code, 0);
    let circuit = parse_circuit(&r.stdout).unwrap();
    let tags: Vec<Tag> = circuit.layers.iter().map(|l| l.segments[0].tag).collect();
    let first_uc = tags.iter().position(|t| matches!(t, Tag::Uc { .. })).unwrap();
    assert!(first_uc > 0);
    assert_eq!(tags[0], Tag::SeedEntangler);
    assert!(tags[..first_uc].iter().any(|t| matches!(t, Tag::Growth { .. })));
    assert!(tags[..first_uc]
        .iter()
        .all(|t| matches!(t, Tag::SeedEntangler | Tag::Growth { .. })));
    let prefix = r.stderr.split("\"prefix_layers\": ").nth(1).unwrap();
    assert!(prefix.starts_with(&first_uc.to_string()));
}

#[test]
fn verify_four_dimensional() {
    let r = run(&["verify", "--td", "0,1,2,4", "--dims", "2,2,2,2"]);
    assert_eq!(r.code, 0);
    let v = r.json();
    assert_eq!(v["pass"], true);
    assert_eq!(v["counts"]["gsd_log2"], 28);
    assert_eq!(v["counts"]["seed_count"], 28);
}

#[test]
fn verify_basis_with_oracle() {
    let r = run(&["verify", "--td", "0,1,2,2", "--dims", "3,3", "--seeds", "basis:10", "--oracle"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let case = &r.json()["cases"][0];
    assert_eq!(case["logical"], true);
    assert_eq!(case["oracle"]["ran"], true);
    assert_eq!(case["oracle"]["tableau_agrees"], true);
    assert!(case["oracle"]["fidelity"].as_f64().unwrap() > 1.0 - 1e-10);

    let r = run(&["verify", "--td", "0,1,2,2", "--dims", "3,3", "--seeds", "ghz", "--oracle"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
}

fn labels(v: &Value) -> Vec<String> {
    v["cases"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["label"].as_str().unwrap().to_string())
        .collect()
}

#[test]
fn random_patterns_follow_the_seed() {
    let args = ["verify", "--td", "1,2,3,3", "--dims", "3,3,2", "--seeds", "random", "--patterns", "5"];
    let a = run(&[&args[..], &["--rng-seed", "7"]].concat());
    let b = run(&[&args[..], &["--rng-seed", "7"]].concat());
    assert_eq!(a.code, 0);
    assert_eq!(labels(&a.json()).len(), 5);
    assert_eq!(labels(&a.json()), labels(&b.json()));
}

fn write_broken(dir: &TempDir) -> String {
    let good = path(dir, "u.qct");
    assert_eq!(run(&["synth", "--td", "0,1,2,2", "--dims", "3,3", "--out", &good]).code, 0);
    let text = fs::read_to_string(&good).unwrap();
    let broken: String = text.lines().filter(|l| *l != "H 0").map(|l| format!("{l}\n")).collect();
    assert_ne!(broken, text);
    let p = path(dir, "broken.qct");
    fs::write(&p, broken).unwrap();
    p
}

#[test]
fn broken_circuit_fails_verification() {
    let dir = TempDir::new().unwrap();
    let broken = write_broken(&dir);
    let r = run(&["verify", "--td", "0,1,2,2", "--dims", "3,3", "--circuit", &broken, "--oracle"]);
    assert_eq!(r.code, 1);
    let case = &r.json()["cases"][0];
    assert_eq!(case["code_state"]["pass"], false);
    assert!(!case["code_state"]["violated_a"].as_array().unwrap().is_empty());
    assert_eq!(case["oracle"]["tableau_agrees"], true);
    assert!(case["oracle"]["fidelity"].as_f64().unwrap() < 0.9);

    fs::write(path(&dir, "bad.qct"), "qubits 18\nCX 0 99\n").unwrap();
    let r = run(&["verify", "--td", "0,1,2,2", "--dims", "3,3", "--circuit", &path(&dir, "bad.qct")]);
    assert_eq!(r.code, 2);
}

fn write_steane(dir: &Path) -> (String, String) {
    let gx = dir.join("steane.txt");
    fs::write(&gx, "# Hamming [7,4]\n0001111\n0110011\n1010101\n").unwrap();
    let p = gx.display().to_string();
    (p.clone(), p)
}

#[test]
fn css_steane() {
    let dir = TempDir::new().unwrap();
    let (gx, gz) = write_steane(dir.path());
    let out = path(&dir, "report.json");
    let r = run(&["css", "--gx", &gx, "--gz", &gz, "--oracle", "--out", &out]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    assert_eq!(v["k"], 1);
    assert_eq!(v["seeds"].as_array().unwrap().len(), 1);
    assert_eq!(v["unique"], true);
    assert_eq!(v["no_rep_condition"], true);
    assert_eq!(v["patterns"][1]["dense"], true);
    assert_eq!(fs::read_to_string(out).unwrap(), r.stdout);
}

#[test]
fn css_exported_model() {
    let dir = TempDir::new().unwrap();
    let export = path(&dir, "m");
    let r = run(&["model", "--td", "1,2,3,3", "--dims", "3,3,2", "--export-dir", &export]);
    assert_eq!(r.code, 0);
    let legend: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("m/model.json")).unwrap()).unwrap();
    assert_eq!(legend["qubits"].as_array().unwrap().len(), 54);
    assert_eq!(legend["x_checks"].as_array().unwrap().len(), 17);
    let f = |n: &str| path(&dir, &format!("m/{n}"));
    let r = run(&["css", "--gx", &f("gx.txt"), "--gz", &f("gz.txt"), "--plan", &f("plan.json")]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    assert_eq!(v["k"], 3);
    assert_eq!(v["r"], 17);
    assert_eq!(v["seeds"].as_array().unwrap().len(), 3);
    assert_eq!(v["plan_source"], "file");
    assert_eq!(v["pass"], true);
}

#[test]
fn css_rejects_malformed_input() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("x.txt"), "1000000\n").unwrap();
    fs::write(dir.path().join("z.txt"), "1100000\n").unwrap();
    fs::write(dir.path().join("junk.txt"), "10a\n").unwrap();
    let (x, z, junk) = (path(&dir, "x.txt"), path(&dir, "z.txt"), path(&dir, "junk.txt"));
    assert_eq!(run(&["css", "--gx", &x, "--gz", &z]).code, 4);
    assert_eq!(run(&["css", "--gx", &junk, "--gz", &z]).code, 4);

    let (gx, gz) = write_steane(dir.path());
    fs::write(dir.path().join("plan.json"), r#"{"representatives": [3, 2, 0], "order": [2, 1, 0]}"#).unwrap();
    assert_eq!(run(&["css", "--gx", &gx, "--gz", &gz, "--plan", &path(&dir, "plan.json")]).code, 4);
    assert_eq!(run(&["css", "--gx", &path(&dir, "missing.txt"), "--gz", &gz]).code, 2);
}
