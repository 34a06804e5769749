use std::path::Path;
use std::process::{Command, Output};

fn vmgbs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vmgbs"))
        .args(args)
        .output()
        .unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = vmgbs(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

fn gen(dir: &Path, pos: &str, neg: &str) {
    let d = dir.to_str().unwrap();
    ok(&[
        "gen-dataset",
        "--parent",
        "7",
        "--child",
        "6",
        "--pos",
        pos,
        "--neg",
        neg,
        "--seed",
        "1",
        "--out",
        d,
    ]);
}

#[test]
fn full_size_dataset_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    gen(dir.path(), "500", "500");
    let data = read(&dir.path().join("dataset.jsonl"));
    assert_eq!(data.lines().count(), 1000);
    assert_eq!(
        data.lines().filter(|l| l.contains(r#""label":1"#)).count(),
        500
    );
    let m: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("gen-dataset.manifest.json"))).unwrap();
    assert_eq!(m["settings"]["seed"], 1);
    assert_eq!(m["outputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert_eq!(m["config_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn reruns_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for dir in [a.path(), b.path()] {
        gen(dir, "40", "40");
        let d = dir.to_str().unwrap();
        let data = format!("{d}/dataset.jsonl");
        ok(&[
            "train",
            "--dataset",
            &data,
            "--seed",
            "3",
            "--kind",
            "gbs",
            "--samples-per-pair",
            "2",
            "--out",
            d,
        ]);
        let model = format!("{d}/model.json");
        ok(&[
            "eval",
            "--dataset",
            &data,
            "--model",
            &model,
            "--seed",
            "3",
            "--trials",
            "9",
            "--out",
            d,
        ]);
    }
    for f in ["dataset.jsonl", "model.json", "eval.csv"] {
        assert_eq!(read(&a.path().join(f)), read(&b.path().join(f)), "{f}");
    }
}

#[test]
fn single_trial_eval_is_single_shot() {
    let dir = tempfile::tempdir().unwrap();
    gen(dir.path(), "40", "40");
    let d = dir.path().to_str().unwrap();
    let data = format!("{d}/dataset.jsonl");
    ok(&["train", "--dataset", &data, "--seed", "2", "--out", d]);
    let model = format!("{d}/model.json");
    let stdout = ok(&[
        "eval",
        "--dataset",
        &data,
        "--model",
        &model,
        "--seed",
        "2",
        "--trials",
        "1",
        "--out",
        d,
    ]);
    let csv = read(&dir.path().join("eval.csv"));
    let rows: Vec<Vec<&str>> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 20);
    let hits = rows
        .iter()
        .filter(|r| r[3].len() == 1 && r[2] == r[3] && r[1] == r[2])
        .count();
    let expected = format!("accuracy {:.4}", hits as f64 / rows.len() as f64);
    assert!(stdout.contains(&expected), "{stdout} vs {expected}");
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        format!(r#"{{"parent": 7, "child": 6, "pos": 5, "neg": 5, "seed": 4, "out": "{d}"}}"#),
    )
    .unwrap();
    ok(&[
        "gen-dataset",
        "--config",
        cfg.to_str().unwrap(),
        "--pos",
        "7",
    ]);
    let data = read(&dir.path().join("dataset.jsonl"));
    assert_eq!(data.lines().count(), 12);
    std::fs::write(&cfg, r#"{"parnet": 7}"#).unwrap();
    assert_eq!(
        vmgbs(&["gen-dataset", "--config", cfg.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn exit_codes() {
    assert_eq!(
        vmgbs(&["gen-dataset", "--parent", "7"]).status.code(),
        Some(2)
    );
    assert_eq!(vmgbs(&["gen-dataset", "--nonsense"]).status.code(), Some(2));
    assert_eq!(
        vmgbs(&["gen-dataset", "--parent", "5", "--seed", "1"])
            .status
            .code(),
        Some(2)
    );
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("none.jsonl");
    let out = vmgbs(&[
        "train",
        "--dataset",
        missing.to_str().unwrap(),
        "--seed",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("none.jsonl"));
    gen(dir.path(), "5", "5");
    let d = dir.path().to_str().unwrap();
    let data = format!("{d}/dataset.jsonl");
    ok(&["train", "--dataset", &data, "--seed", "1", "--out", d]);
    let model = format!("{d}/model.json");
    let even = vmgbs(&[
        "eval",
        "--dataset",
        &data,
        "--model",
        &model,
        "--seed",
        "1",
        "--trials",
        "4",
        "--out",
        d,
    ]);
    assert_eq!(even.status.code(), Some(2));
}

#[test]
fn verify_accepts_generated_and_rejects_flipped_labels() {
    let dir = tempfile::tempdir().unwrap();
    gen(dir.path(), "10", "10");
    let path = dir.path().join("dataset.jsonl");
    let p = path.to_str().unwrap();
    let d = dir.path().to_str().unwrap();
    ok(&["verify", "--dataset", p, "--out", d]);
    let flipped = read(&path).replacen(r#""label":1"#, r#""label":0"#, 1);
    std::fs::write(&path, flipped).unwrap();
    assert_eq!(
        vmgbs(&["verify", "--dataset", p, "--out", d]).status.code(),
        Some(1)
    );
}

#[test]
fn study_commands_write_documented_headers() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let small = [
        "--pos",
        "20",
        "--neg",
        "20",
        "--trials",
        "11",
        "--samples-per-pair",
        "2",
        "--seed",
        "1",
        "--out",
        d,
    ];
    let mut sweep = vec![
        "sweep",
        "--parent",
        "6",
        "--squeeze-grid",
        "3,6",
        "--loss-grid",
        "0",
    ];
    sweep.extend(small);
    ok(&sweep);
    let s = read(&dir.path().join("sweep.csv"));
    assert!(s.starts_with("squeeze_db,loss_db,n_required,accuracy_at_cap\n"));
    assert_eq!(s.lines().count(), 3);
    let mut rt = vec![
        "runtime-model",
        "--sizes",
        "6",
        "--t-svm-s",
        "1e-8",
        "--t-takagi-s",
        "1e-5",
    ];
    rt.extend(small);
    ok(&rt);
    let r = read(&dir.path().join("runtime.csv"));
    assert!(r.starts_with("n,n_c,n_q,t_c_s,t_qgbs_s,t_cgbs_s,speedup,"));
    let mut bl = vec!["baselines", "--sizes", "7", "--repeats", "1"];
    bl.extend(small);
    ok(&bl);
    let b = read(&dir.path().join("baselines.csv"));
    assert!(b.starts_with("n_parent,n_child,seed,method,accuracy,error\n"));
    assert_eq!(b.lines().count(), 5);
}
