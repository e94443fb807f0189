use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use qmplab_core::io::{density_to_json, model_from_json};
use qmplab_core::states::{pure_projector, random_mixed};

fn qmplab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmplab")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_owned()
}

#[test]
fn impure_example_passes() {
    let o = qmplab(&[
        "qmp-impure",
        "--ds",
        "2",
        "--de",
        "4",
        "--rank",
        "2",
        "--epsilon",
        "0.1",
        "--samples",
        "1000",
        "--seed",
        "7",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["verdict"], "pass");
    assert_eq!(report["counters"]["total"], 1000);
    assert_eq!(report["counters"]["indefinite"], 1000);
}

#[test]
fn validation_errors_exit_2() {
    for args in [
        &["qmp-impure", "--epsilon", "0.6"][..],
        &["qmp-impure", "--epsilon", "0"],
        &["qmp-impure", "--de", "2", "--rank", "2"],
        &["qmp-pure", "--rank", "2"],
        &["verify", "--samples", "0"],
        &["sweep", "--delta", "-0.1"],
        &["verify", "--no-such-flag"],
        &["qmp-impure", "--format", "xml"],
        &["frobnicate"],
    ] {
        let o = qmplab(args);
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn failing_verdict_exits_1() {
    let o = qmplab(&["qmp-pure", "--delta", "2", "--samples", "200"]);
    assert_eq!(code(&o), 1);
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["verdict"], "fail");
    assert!(report["counters"]["violations"].as_u64().unwrap() > 0);
}

#[test]
fn csv_sweep_has_one_row_per_sample() {
    let o = qmplab(&["qmp-pure", "--samples", "25", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "sample_index,delta_actual,overlap1,overlap2,label");
    assert_eq!(lines.len(), 26);
    assert!(lines[1..].iter().all(|l| l.ends_with(",Indefinite")));
}

#[test]
fn classify_roundtrip_through_saved_model() {
    let dir = tempfile::tempdir().unwrap();
    let model_path = path(dir.path(), "model.json");
    let o = qmplab(&["qmp-impure", "--rank", "2", "--samples", "5", "--seed", "3", "--save-model", &model_path]);
    assert_eq!(code(&o), 0);
    let model = model_from_json(&fs::read_to_string(&model_path).unwrap()).unwrap();

    // a postmeasurement anchor is definite
    let anchor = model.postmeasurement(&pure_projector(model.psi(2)).unwrap()).unwrap();
    let anchor_path = path(dir.path(), "anchor.json");
    fs::write(&anchor_path, density_to_json(&anchor)).unwrap();
    let o = qmplab(&["classify", "--model", &model_path, "--state", &anchor_path]);
    assert_eq!(code(&o), 0);
    let c: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(c["label"], "Config2");
    assert!((c["overlap2"].as_f64().unwrap() - 1.0).abs() < 1e-9);

    // a microsystem state is evolved first; the superposition is indefinite
    let phi_path = path(dir.path(), "phi.json");
    fs::write(&phi_path, density_to_json(&pure_projector(&model.phi()).unwrap())).unwrap();
    let out_path = path(dir.path(), "class.csv");
    let o =
        qmplab(&["classify", "--model", &model_path, "--state", &phi_path, "--format", "csv", "--output", &out_path]);
    assert_eq!(code(&o), 0);
    let csv = fs::read_to_string(&out_path).unwrap();
    assert!(csv.lines().nth(1).unwrap().starts_with("Indefinite,"));

    // wrong dimension
    let bad_path = path(dir.path(), "bad.json");
    fs::write(&bad_path, density_to_json(&random_mixed(5, 2, 1).unwrap())).unwrap();
    assert_eq!(code(&qmplab(&["classify", "--model", &model_path, "--state", &bad_path])), 2);
}

#[test]
fn unreadable_or_invalid_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let missing = path(dir.path(), "missing.json");
    assert_eq!(code(&qmplab(&["classify", "--model", &missing, "--state", &missing])), 2);

    let model_path = path(dir.path(), "model.json");
    assert_eq!(code(&qmplab(&["qmp-pure", "--samples", "2", "--save-model", &model_path])), 0);
    let not_psd = path(dir.path(), "not_psd.json");
    fs::write(&not_psd, r#"{"rows": 2, "cols": 2, "re": [1.5, 0, 0, -0.5], "im": [0, 0, 0, 0]}"#).unwrap();
    let o = qmplab(&["classify", "--model", &model_path, "--state", &not_psd]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("positive"), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn output_file_is_complete_or_absent() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "report.json");
    assert_eq!(code(&qmplab(&["qmp-impure", "--epsilon", "0.7", "--output", &out])), 2);
    assert!(!Path::new(&out).exists());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0, "no temporary files left behind");

    assert_eq!(code(&qmplab(&["verify", "--samples", "20", "--output", &out])), 0);
    let body: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(body["reports"].as_array().unwrap().len(), 4);
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn sequential_and_parallel_outputs_match() {
    let strip = |o: Output| {
        String::from_utf8(o.stdout)
            .unwrap()
            .lines()
            .filter(|l| !l.contains("duration_ms"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let a = strip(qmplab(&["qmp-impure", "--rank", "2", "--samples", "50"]));
    let b = strip(qmplab(&["qmp-impure", "--rank", "2", "--samples", "50", "--sequential"]));
    assert_eq!(a, b);
}

#[test]
fn sweep_grid_csv() {
    let o = qmplab(&["sweep", "--samples", "10", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    // 12 impure grid points plus 6 pure ones
    assert_eq!(text.lines().count(), 1 + 18);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",pass")));
}
