use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use qdirac::surface::icosphere;
use serde_json::Value;

fn qdirac(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdirac"))
        .args(args)
        .arg("--out")
        .arg(dir.join("out"))
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("scenario.toml");
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn summary(dir: &Path, subcommand: &str) -> Value {
    let text = fs::read_to_string(dir.join("out").join(format!("{subcommand}.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn verify_algebra_passes_and_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = qdirac(dir.path(), &["verify-algebra", "--seed", "5"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("out/verify-algebra.csv")).unwrap();
    let mut lines = csv.lines();
    let first = lines.next().unwrap();
    assert!(first.starts_with("# generated ") && first.ends_with(" seed=5"), "{first}");
    assert_eq!(lines.next(), Some("check,anchor,value,threshold,status"));
    assert!(lines.all(|l| l.ends_with(",pass")));
    let json = summary(dir.path(), "verify-algebra");
    assert_eq!(json["seed"], 5);
    assert_eq!(json["failed"], 0);
}

#[test]
fn cauchy_interior_default_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let out = qdirac(dir.path(), &["cauchy-interior"]);
    assert_eq!(code(&out), 0);
    let json = summary(dir.path(), "cauchy-interior");
    let rows = json["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    for row in rows {
        assert!(row["value"].as_f64().unwrap() < 1e-3);
        assert_eq!(row["anchor"], "interior Cauchy formula");
    }
}

#[test]
fn cauchy_exterior_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"
        schema_version = 1
        scenario = "damped exterior"
        targets = [[0.0, 0.0, 2.0], [1.5, 1.0, 0.0]]
        [params]
        nu = [1.0, 0.5]
        [[sources]]
        position = [0.1, 0.0, -0.2]
        coefficient = [[1.0, 0.0], [0.0, 1.0], [0.0, 0.0], [0.5, 0.0]]
        "#,
    );
    let out = qdirac(dir.path(), &["cauchy-exterior", "--config", &cfg, "--level", "3"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let json = summary(dir.path(), "cauchy-exterior");
    assert_eq!(json["scenario"], "damped exterior");
    assert_eq!(json["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn radiation_scan_labels_fields() {
    let dir = tempfile::tempdir().unwrap();
    let out = qdirac(dir.path(), &["radiation-scan"]);
    assert_eq!(code(&out), 0);
    let csv = fs::read_to_string(dir.path().join("out/radiation-scan.csv")).unwrap();
    assert!(csv.lines().any(|l| l.starts_with("outgoing null field") && l.ends_with(",radiating")));
    assert!(csv.lines().any(|l| l.starts_with("incoming kernel") && l.ends_with(",non-radiating")));
}

#[test]
fn radiation_scan_for_spinor_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "schema_version = 1\n[params]\nomega = 2.0\nm = 1.0\n");
    let out = qdirac(dir.path(), &["radiation-scan", "--config", &cfg]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn spinor_exterior_default_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let out = qdirac(dir.path(), &["spinor-exterior"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn spinor_exterior_needs_spinor_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "schema_version = 1\n[params]\nnu = [1.0, 0.0]\n");
    assert_eq!(code(&qdirac(dir.path(), &["spinor-exterior", "--config", &cfg])), 2);
}

#[test]
fn stokes_and_l2_defaults_pass() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&qdirac(dir.path(), &["stokes-check", "--level", "3"])), 0);
    assert_eq!(code(&qdirac(dir.path(), &["l2-scan"])), 0);
}

#[test]
fn convergence_writes_order_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = qdirac(dir.path(), &["convergence", "--level", "4"]);
    assert_eq!(code(&out), 0);
    let table = fs::read_to_string(dir.path().join("out/convergence_table.csv")).unwrap();
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines[0], "level,h,error,order");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("2,") && lines[1].ends_with(','));
    let order: f64 = lines[3].rsplit(',').next().unwrap().parse().unwrap();
    assert!(order > 1.7);
}

#[test]
fn unknown_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "schema_version = 1\nwavenumber = 3.0\n");
    let out = qdirac(dir.path(), &["cauchy-interior", "--config", &cfg]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid configuration"));
}

#[test]
fn missing_schema_version_and_bad_level_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "seed = 3\n");
    assert_eq!(code(&qdirac(dir.path(), &["verify-algebra", "--config", &cfg])), 2);
    assert_eq!(code(&qdirac(dir.path(), &["cauchy-interior", "--level", "12"])), 2);
    assert_eq!(code(&qdirac(dir.path(), &["verify-algebra", "--config", "/nonexistent.toml"])), 2);
}

#[test]
fn failing_checks_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "schema_version = 1\n[tolerances]\nrelative_error = 1e-12\n");
    let out = qdirac(dir.path(), &["cauchy-interior", "--config", &cfg, "--level", "2"]);
    assert_eq!(code(&out), 1);
    assert!(summary(dir.path(), "cauchy-interior")["failed"].as_u64().unwrap() > 0);
}

#[test]
fn strict_turns_warnings_into_failures() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "schema_version = 1\ntargets = [[0.0, 0.0, 0.0], [0.0, 0.0, 0.99]]\n");
    let lenient = qdirac(dir.path(), &["cauchy-interior", "--config", &cfg, "--level", "3"]);
    assert_eq!(code(&lenient), 0);
    assert!(String::from_utf8_lossy(&lenient.stderr).contains("skipped"));
    let json = summary(dir.path(), "cauchy-interior");
    assert_eq!(json["warnings"].as_array().unwrap().len(), 1);
    let strict = qdirac(dir.path(), &["cauchy-interior", "--config", &cfg, "--level", "3", "--strict"]);
    assert_eq!(code(&strict), 1);
}

#[test]
fn reports_are_deterministic_apart_from_the_timestamp() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        assert_eq!(code(&qdirac(dir.path(), &["stokes-check", "--level", "2", "--seed", "9"])), 0);
    }
    let read = |d: &tempfile::TempDir, f: &str| fs::read_to_string(d.path().join("out").join(f)).unwrap();
    assert_eq!(read(&a, "stokes-check.json"), read(&b, "stokes-check.json"));
    let body = |s: String| s.lines().skip(1).collect::<Vec<_>>().join("\n");
    assert_eq!(body(read(&a, "stokes-check.csv")), body(read(&b, "stokes-check.csv")));

    let c = tempfile::tempdir().unwrap();
    assert_eq!(code(&qdirac(c.path(), &["stokes-check", "--level", "2", "--seed", "10"])), 0);
    assert_ne!(read(&a, "stokes-check.json"), read(&c, "stokes-check.json"));
}

#[test]
fn imported_mesh_relative_to_config() {
    let dir = tempfile::tempdir().unwrap();
    icosphere(1.0, 4, [0.0; 3]).write(dir.path().join("ball.mesh")).unwrap();
    let cfg = write_config(dir.path(), "schema_version = 1\n[geometry]\nmesh = \"ball.mesh\"\n");
    let out = qdirac(dir.path(), &["cauchy-interior", "--config", &cfg]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(code(&qdirac(dir.path(), &["cauchy-interior", "--config", &cfg, "--level", "2"])), 2);
}
