use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn rboost(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rboost")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = rboost(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn csv_lines(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn constant_target_model_predicts_the_constant() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("train.csv");
    let mut text = String::from("a,b,y\n");
    for i in 0..20 {
        text.push_str(&format!("{},{},3.25\n", i, 20 - i));
    }
    fs::write(&data, text).unwrap();
    let d = dir.path().to_str().unwrap();
    ok(&["fit", "--data", data.to_str().unwrap(), "--algo", "boost", "--k-max", "10", "--out", d]);
    assert!(dir.path().join("model.json").exists());
    assert!(dir.path().join("fit.manifest.json").exists());

    let stdout = ok(&[
        "predict",
        "--model",
        dir.path().join("model.json").to_str().unwrap(),
        "--data",
        data.to_str().unwrap(),
    ]);
    let preds: Vec<f64> = stdout.lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(preds.len(), 20);
    for p in preds {
        assert!((p - 3.25).abs() < 1e-12, "{p}");
    }
}

#[test]
fn fit_then_predict_to_file_with_clip() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("train.csv");
    let mut text = String::from("x,y\n");
    for i in 0..40 {
        let x = i as f64 / 10.0;
        text.push_str(&format!("{x},{}\n", 5.0 * x.sin()));
    }
    fs::write(&data, text).unwrap();
    let d = dir.path().to_str().unwrap();
    ok(&["fit", "--data", data.to_str().unwrap(), "--algo", "ddr", "--j", "2", "--out", d]);

    let features = dir.path().join("x.csv");
    fs::write(&features, "x\n0.5\n1.5\n4.7\n").unwrap();
    ok(&[
        "predict",
        "--model",
        dir.path().join("model.json").to_str().unwrap(),
        "--data",
        features.to_str().unwrap(),
        "--no-target",
        "--clip",
        "1",
        "--out",
        d,
    ]);
    let rows = csv_lines(&dir.path().join("predictions.csv"));
    assert_eq!(rows[0], ["prediction", "manifest"]);
    assert_eq!(rows.len(), 4);
    for r in &rows[1..] {
        let p: f64 = r[0].parse().unwrap();
        assert!(p.abs() <= 1.0);
    }
}

#[test]
fn simulate_writes_one_row_per_trial_and_method_plus_means() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let stdout = ok(&[
        "simulate", "--target", "1,2", "--trials", "2", "--k-max", "20", "--grid", "3:1:100",
        "--train-m", "60", "--test-m", "50", "--out", d,
    ]);
    assert!(stdout.contains("DDRBoosting"));
    let rows = csv_lines(&dir.path().join("simulate.csv"));
    // 2 targets x 3 methods x (2 trials + 1 mean row)
    assert_eq!(rows.len(), 1 + 2 * 3 * 3);
    assert_eq!(rows[0].last().unwrap(), "manifest");
    assert!(rows[1..].iter().all(|r| r.last().unwrap() == "simulate.manifest.json"));

    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("simulate.manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["command"], "simulate");
    assert_eq!(manifest["config"]["options"]["k_max"], 20);
}

#[test]
fn ucurve_has_one_row_per_grid_point() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    ok(&[
        "ucurve", "--target", "4", "--sigma", "0.5", "--trials", "2", "--k-max", "15", "--grid",
        "5:1:1e4", "--train-m", "50", "--test-m", "40", "--out", d,
    ]);
    let rows = csv_lines(&dir.path().join("ucurve.csv"));
    assert_eq!(rows[0][..5], ["target", "sigma", "u", "mean_rmse", "std_rmse"]);
    let us: Vec<u64> = rows[1..].iter().map(|r| r[2].parse().unwrap()).collect();
    assert_eq!(us, [1, 10, 100, 1000, 10000]);

    let table = ok(&["report", dir.path().join("ucurve.csv").to_str().unwrap()]);
    assert!(table.contains("10000"));
}

#[test]
fn realdata_reports_three_methods() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.csv");
    let mut text = String::from("a,b,target\n");
    for i in 0..60 {
        let (a, b) = (i as f64 / 60.0, ((i * 7) % 11) as f64);
        text.push_str(&format!("{a},{b},{}\n", a * a + 0.1 * b));
    }
    fs::write(&data, text).unwrap();
    let d = dir.path().to_str().unwrap();
    ok(&[
        "realdata", "--data", data.to_str().unwrap(), "--k-max", "30", "--grid", "3:1:100",
        "--out", d,
    ]);
    let rows = csv_lines(&dir.path().join("realdata.csv"));
    let methods: Vec<&str> = rows[1..].iter().map(|r| r[0].as_str()).collect();
    assert_eq!(methods.len(), 3);
    assert!(methods.iter().any(|m| m.starts_with("RBoosting")));
}

#[test]
fn exit_codes() {
    assert_eq!(rboost(&["simulate"]).status.code(), Some(2));
    assert_eq!(rboost(&["frobnicate"]).status.code(), Some(2));
    let missing = rboost(&["fit", "--data", "/nonexistent/file.csv"]);
    assert_eq!(missing.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&missing.stderr);
    assert_eq!(stderr.trim().lines().count(), 1, "{stderr}");
}

#[test]
fn nan_in_input_names_its_location() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("bad.csv");
    fs::write(&data, "x,y\n1,2\nNaN,3\n").unwrap();
    let out = rboost(&["fit", "--data", data.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("row") && stderr.contains("column"), "{stderr}");
}
