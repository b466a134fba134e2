use std::path::Path;
use std::process::{Command, Output};

fn condent(args: &[&str], out_dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_condent"))
        .args(args)
        .env("CONDENT_OUT_DIR", out_dir)
        .current_dir(out_dir)
        .output()
        .expect("spawn condent")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// Parses the number after `key` on the first line starting with it.
fn field(text: &str, key: &str) -> f64 {
    let line = text.lines().find(|l| l.starts_with(key)).unwrap_or_else(|| panic!("no {key} in {text}"));
    line[key.len()..].trim().parse().unwrap()
}

fn make(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name).to_string_lossy().into_owned();
    let mut full = vec!["channel", "make"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", &path]);
    let o = condent(&full, dir);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

#[test]
fn make_validate_and_entropy() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let swap = make(d, "swap.json", &["swap", "--dims", "2"]);
    let cnot = make(d, "cnot.json", &["unitary", "--gate", "cnot"]);
    let idid = make(d, "idid.json", &["unitary", "--gate", "identity"]);

    let o = condent(&["entropy", &swap], d);
    assert_eq!(o.status.code(), Some(0));
    assert!((field(&stdout(&o), "value:") + 3.0).abs() < 1e-5);

    let o = condent(&["entropy", &idid, "--quantity", "smin"], d);
    assert!((field(&stdout(&o), "value:") + 1.0).abs() < 1e-5);

    let o = condent(&["entropy", &cnot, "--quantity", "ns"], d);
    assert_eq!(o.status.code(), Some(0));
    assert!((field(&stdout(&o), "value:") + 1.0).abs() < 1e-5);

    let o = condent(&["channel", "validate", &cnot], d);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("cptp: pass"), "{text}");
    assert!(text.contains("ppt: fail"), "{text}");
}

#[test]
fn entropy_csv_row_uses_the_experiment_schema() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cnot = make(d, "cnot.json", &["unitary", "--gate", "cnot"]);
    let csv = d.join("row.csv");
    let o = condent(&["entropy", &cnot, "--csv", csv.to_str().unwrap()], d);
    assert_eq!(o.status.code(), Some(0));
    let rows = condent::experiments::read_csv(&csv).unwrap();
    assert_eq!(rows.len(), 1);
    assert!((rows[0].value + 2.0).abs() < 1e-5);
}

#[test]
fn noisy_and_tensor_channels_compose() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cnot = make(d, "cnot.json", &["unitary", "--gate", "cnot"]);
    let noisy = make(d, "noisy.json", &["noisy", "--base", &cnot, "--p", "1"]);
    let o = condent(&["entropy", &noisy], d);
    assert!((field(&stdout(&o), "value:") - 1.0).abs() < 1e-5);
    let r = make(d, "r.json", &["replacer", "--dims", "1,2,1,2"]);
    let t = make(d, "t.json", &["tensor", "--base", &r, "--other", &r]);
    let o = condent(&["channel", "validate", &t], d);
    assert!(stdout(&o).contains("cptp: pass"));
}

#[test]
fn rates_from_the_command_line() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cnot = make(d, "cnot.json", &["unitary", "--gate", "cnot"]);
    let o = condent(&["rate", "cost", &cnot, "--trivial-h", "--epsilon", "0"], d);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("1.500000"), "{text}");
}

#[test]
fn fig2_writes_63_rows_to_the_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let o = condent(&["experiment", "fig2"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = condent::experiments::read_csv(&dir.path().join("fig2.csv")).unwrap();
    assert_eq!(rows.len(), 63);
}

#[test]
fn verify_passes_and_negative_control_fails() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = condent(&["experiment", "verify", "--seed", "7"], d);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.join("verify.json")).unwrap()).unwrap();
    assert_eq!(report["all_passed"], true);
    assert_eq!(report["schema_version"], "1");

    let o = condent(&["experiment", "verify", "--samples", "2", "--no-aep", "--inject-faulty", "--out", "faulty.json"], d);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
}

#[test]
fn usage_and_input_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(condent(&["channel", "make", "bogus"], d).status.code(), Some(1));
    assert_eq!(condent(&["--tolerance", "1", "experiment", "fig2"], d).status.code(), Some(1));
    assert_eq!(condent(&[], d).status.code(), Some(1));
    let bad = d.join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(condent(&["entropy", bad.to_str().unwrap()], d).status.code(), Some(1));
    let missing = d.join("missing.json");
    assert_eq!(condent(&["channel", "validate", missing.to_str().unwrap()], d).status.code(), Some(1));
    assert_eq!(condent(&["--help"], d).status.code(), Some(0));
}
