//! End-to-end tests of the binary: exit codes, report files, and the
//! stdout formats, all on a small uniform line so every run is quick.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tentlab::report::CertificationReport;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tentlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn assert_success(output: &Output) {
    assert!(
        output.status.success(),
        "exit {:?}, stderr: {}",
        output.status.code(),
        String::from_utf8_lossy(&output.stderr)
    );
}

fn stdout_str(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf8 stdout")
}

fn write_space(dir: &Path) -> PathBuf {
    let n = 60;
    let points: Vec<Vec<f64>> = (0..n).map(|i| vec![i as f64 / n as f64]).collect();
    let space = serde_json::json!({
        "points": points,
        "mu": "uniform",
        "potential": { "type": "explicit", "values": vec![0.0; n] },
        "admissibility": { "type": "constant", "value": 0.5 },
    });
    let path = dir.join("space.json");
    fs::write(&path, space.to_string()).unwrap();
    path
}

fn write_config(dir: &Path, space: &Path) -> PathBuf {
    let config = serde_json::json!({
        "space_file": space,
        "levels": 8,
        "corpus_size": 4,
        "set_count": 4,
        "seed": 11,
    });
    let path = dir.join("config.json");
    fs::write(&path, config.to_string()).unwrap();
    path
}

#[test]
fn suite_report_is_deterministic_and_passes() {
    let tmp = tempfile::tempdir().unwrap();
    let space = write_space(tmp.path());
    let config = write_config(tmp.path(), &space);
    let out1 = tmp.path().join("run1");
    let out2 = tmp.path().join("run2");

    let first = run(&[
        "suite",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out1.to_str().unwrap(),
    ]);
    assert_success(&first);
    let second = run(&[
        "suite",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out2.to_str().unwrap(),
    ]);
    assert_success(&second);

    let bytes1 = fs::read(out1.join("report.json")).unwrap();
    let bytes2 = fs::read(out2.join("report.json")).unwrap();
    assert_eq!(bytes1, bytes2);

    let report = CertificationReport::from_json(std::str::from_utf8(&bytes1).unwrap()).unwrap();
    assert!(report.all_passed());
    assert!(report.checks.len() >= 25, "got {}", report.checks.len());
    assert!(!report.curves.is_empty());
    for curve in &report.curves {
        assert!(out1.join(format!("curve_{}.csv", curve.name)).is_file());
    }
}

#[test]
fn written_json_round_trips_through_the_report_type() {
    let tmp = tempfile::tempdir().unwrap();
    let space = write_space(tmp.path());
    let config = write_config(tmp.path(), &space);
    let out = tmp.path().join("out");

    let output = run(&[
        "region",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_success(&output);

    let text = fs::read_to_string(out.join("report.json")).unwrap();
    let report = CertificationReport::from_json(&text).unwrap();
    assert_eq!(report.to_json(), text);
}

#[test]
fn csv_report_has_one_row_per_check() {
    let tmp = tempfile::tempdir().unwrap();
    let space = write_space(tmp.path());
    let config = write_config(tmp.path(), &space);

    let json_run = run(&["space", "--config", config.to_str().unwrap()]);
    assert_success(&json_run);
    let report = CertificationReport::from_json(&stdout_str(&json_run)).unwrap();

    let csv_run = run(&[
        "space",
        "--config",
        config.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_success(&csv_run);
    let text = stdout_str(&csv_run);
    let lines: Vec<&str> = text.trim_end().lines().collect();
    assert_eq!(lines.len(), report.checks.len() + 1);
    assert!(lines[0].starts_with("name,status,anchor"));
}

#[test]
fn empty_selection_yields_a_header_only_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let space = write_space(tmp.path());
    let config = serde_json::json!({
        "space_file": space,
        "levels": 8,
        "corpus_size": 4,
        "set_count": 4,
        "suites": {
            "space": false,
            "geometry": false,
            "functionals": false,
            "atomic": false,
            "dyadic": false,
            "cone_cover": false,
        },
    });
    let config_path = tmp.path().join("config.json");
    fs::write(&config_path, config.to_string()).unwrap();

    let output = run(&[
        "suite",
        "--config",
        config_path.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_success(&output);
    assert_eq!(
        stdout_str(&output),
        "name,status,anchor,constants,tolerances,witness,wall_ms\n"
    );
}

#[test]
fn malformed_config_exits_two() {
    let tmp = tempfile::tempdir().unwrap();
    let config = tmp.path().join("config.json");
    fs::write(&config, "{\"seed\": ").unwrap();
    let output = run(&["suite", "--config", config.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn malformed_space_file_exits_two() {
    let tmp = tempfile::tempdir().unwrap();
    let space = tmp.path().join("space.json");
    fs::write(&space, "not a space").unwrap();
    let output = run(&["suite", "--space", space.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn rejected_exponent_exits_two() {
    let tmp = tempfile::tempdir().unwrap();
    let space = write_space(tmp.path());
    let config = write_config(tmp.path(), &space);
    let output = run(&[
        "norms",
        "--config",
        config.to_str().unwrap(),
        "--q",
        "0.5",
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn seed_flag_overrides_the_config() {
    let tmp = tempfile::tempdir().unwrap();
    let space = write_space(tmp.path());
    let config = write_config(tmp.path(), &space);

    let base = run(&["region", "--config", config.to_str().unwrap()]);
    assert_success(&base);
    let reseeded = run(&[
        "region",
        "--config",
        config.to_str().unwrap(),
        "--seed",
        "12",
    ]);
    assert_success(&reseeded);
    assert_ne!(stdout_str(&base), stdout_str(&reseeded));

    let report = CertificationReport::from_json(&stdout_str(&reseeded)).unwrap();
    assert_eq!(report.seed, 12);
}

#[test]
fn decompose_emits_term_table_and_certificates() {
    let tmp = tempfile::tempdir().unwrap();
    let space = write_space(tmp.path());
    let config = write_config(tmp.path(), &space);
    let out = tmp.path().join("out");

    let output = run(&[
        "decompose",
        "--config",
        config.to_str().unwrap(),
        "--function",
        "random_seeded(3)",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_success(&output);

    let table = fs::read_to_string(out.join("terms.csv")).unwrap();
    let lines: Vec<&str> = table.trim_end().lines().collect();
    assert_eq!(
        lines[0],
        "k,j,lambda,ball_center,ball_radius,atom_size,atom_norm"
    );
    assert!(lines.len() >= 2);

    let report =
        CertificationReport::from_json(&fs::read_to_string(out.join("report.json")).unwrap())
            .unwrap();
    assert!(report.all_passed());
    for name in ["atomic_decomposition", "atom_certificates", "norm_equivalence"] {
        assert!(report.checks.iter().any(|c| c.name == name), "missing {name}");
    }
}

#[test]
fn verify_atoms_passes_on_random_input() {
    let tmp = tempfile::tempdir().unwrap();
    let space = write_space(tmp.path());
    let config = write_config(tmp.path(), &space);
    let output = run(&[
        "verify-atoms",
        "--config",
        config.to_str().unwrap(),
        "--function",
        "random_seeded(5)",
        "--q",
        "1",
    ]);
    assert_success(&output);
}

#[test]
fn norms_reports_every_configured_aperture() {
    let tmp = tempfile::tempdir().unwrap();
    let space = write_space(tmp.path());
    let config = write_config(tmp.path(), &space);
    let output = run(&[
        "norms",
        "--config",
        config.to_str().unwrap(),
        "--function",
        "tent_indicator",
    ]);
    assert_success(&output);

    let report = CertificationReport::from_json(&stdout_str(&output)).unwrap();
    let norms = report
        .checks
        .iter()
        .find(|c| c.name == "tent_norms")
        .expect("tent_norms record");
    let apertures = norms
        .constants
        .keys()
        .filter(|k| k.starts_with("norm_alpha_"))
        .count();
    assert_eq!(apertures, 4);
}

#[test]
fn maximal_csv_lists_inputs_and_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let space = write_space(tmp.path());
    let config = write_config(tmp.path(), &space);
    let output = run(&[
        "maximal",
        "--config",
        config.to_str().unwrap(),
        "--op",
        "local",
        "--format",
        "csv",
    ]);
    assert_success(&output);

    let text = stdout_str(&output);
    let lines: Vec<&str> = text.trim_end().lines().collect();
    assert_eq!(lines[0], "point,u_0,local");
    assert_eq!(lines.len(), 61);
}

#[test]
fn conecover_passes_and_tabulates_trials() {
    let tmp = tempfile::tempdir().unwrap();
    let space = write_space(tmp.path());
    let config = write_config(tmp.path(), &space);
    let output = run(&[
        "conecover",
        "--config",
        config.to_str().unwrap(),
        "--trials",
        "5",
        "--format",
        "csv",
    ]);
    assert_success(&output);

    let text = stdout_str(&output);
    let lines: Vec<&str> = text.trim_end().lines().collect();
    assert!(lines[0].starts_with("trial,apex"));
    assert!(lines.len() >= 2);
    for row in &lines[1..] {
        assert!(row.ends_with(",true"), "uncovered trial row: {row}");
    }
}
