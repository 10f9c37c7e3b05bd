use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn swtl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swtl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn error_category(out: &Output) -> String {
    assert!(!out.status.success());
    let report: Value = serde_json::from_slice(&out.stderr).expect("stderr is a JSON error report");
    assert!(report["message"].as_str().is_some_and(|m| !m.is_empty()));
    report["category"].as_str().unwrap().to_owned()
}

fn fa_netlist() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/fa.json")
}

fn compile_fa(dir: &Path) -> PathBuf {
    let out = swtl(&[
        "compile",
        fa_netlist().to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    stdout(&out);
    dir.join("layout.json")
}

#[test]
fn dispersion_curves_ordered_by_field() {
    let out = stdout(&swtl(&[
        "dispersion",
        "--fields",
        "-0.1,0,0.1",
        "--k-min",
        "1e8",
        "--points",
        "5",
    ]));
    let rows: Vec<Vec<f64>> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 15);
    for i in 0..5 {
        let (lo, mid, hi) = (rows[i][2], rows[i + 5][2], rows[i + 10][2]);
        assert!(lo < mid && mid < hi);
        assert_eq!(rows[i][1], rows[i + 10][1]);
    }
}

#[test]
fn dispersion_matches_library() {
    use swtl_core::dispersion::{omega_of_k, FieldPoint};
    let out = stdout(&swtl(&[
        "dispersion",
        "--fields",
        "0.0147",
        "--k-min",
        "1e7",
        "--k-max",
        "1e9",
        "--points",
        "3",
        "--format",
        "json",
    ]));
    let doc: Value = serde_json::from_str(&out).unwrap();
    let stack = swtl_core::MaterialStack::preset("cofeb-paper").unwrap();
    let points = doc[0]["points"].as_array().unwrap();
    assert_eq!(points.len(), 3);
    for p in points {
        let k = p["k_rad_per_m"].as_f64().unwrap();
        let f = omega_of_k(k, FieldPoint(0.0147), &stack).unwrap() / (2.0 * std::f64::consts::PI) / 1e9;
        assert_eq!(p["f_ghz"].as_f64().unwrap(), f);
    }
}

#[test]
fn dispersion_requires_fields() {
    assert_eq!(error_category(&swtl(&["dispersion"])), "usage");
}

#[test]
fn calibrate_prints_field() {
    let out = stdout(&swtl(&["calibrate", "--target-deg", "10", "--format", "json"]));
    let doc: Value = serde_json::from_str(&out).unwrap();
    let field = doc["field_t"].as_f64().unwrap();
    assert!((field - 0.015_478_362_792_276_647).abs() < 1e-9, "{field}");
    let zero: Value =
        serde_json::from_str(&stdout(&swtl(&["calibrate", "--target-deg", "0", "--format", "json"]))).unwrap();
    assert_eq!(zero["field_t"].as_f64().unwrap(), 0.0);
    assert_eq!(
        error_category(&swtl(&["calibrate", "--target-deg", "5000"])),
        "calibration"
    );
}

#[test]
fn field_sweep_writes_table_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = swtl(&[
        "--shifter-nm",
        "200",
        "--out",
        dir.path().to_str().unwrap(),
        "sweep",
        "field",
        "--min-t",
        "-0.01",
        "--max-t",
        "0.01",
        "--steps",
        "21",
    ]);
    stdout(&out);
    let table = std::fs::read_to_string(dir.path().join("sweep_field.csv")).unwrap();
    assert!(table.starts_with("x_value,phase_shift_deg\n"));
    assert_eq!(table.lines().count(), 22);
    let summary = std::fs::read_to_string(dir.path().join("sweep_field_summary.csv")).unwrap();
    let r2 = summary.lines().nth(1).unwrap().rsplit(',').next().unwrap();
    assert_eq!(r2, "1.0000");
}

#[test]
fn frequency_sweep_r_squared_increases() {
    let out = stdout(&swtl(&[
        "--shifter-nm",
        "200",
        "--format",
        "json",
        "sweep",
        "frequency",
        "--freqs-ghz",
        "30,35,40",
    ]));
    let doc: Value = serde_json::from_str(&out).unwrap();
    let r2: Vec<f64> = doc
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["r_squared"].as_f64().unwrap())
        .collect();
    assert!(r2[0] < r2[1] && r2[1] < r2[2] && r2[2] < 1.0 && r2[0] > 0.99);
}

#[test]
fn length_sweep_doubles() {
    let out = stdout(&swtl(&[
        "--format",
        "json",
        "sweep",
        "length",
        "--lengths-nm",
        "100,200",
    ]));
    let doc: Value = serde_json::from_str(&out).unwrap();
    let s = doc["samples"].as_array().unwrap();
    let (a, b) = (
        s[0]["phase_shift_deg"].as_f64().unwrap(),
        s[1]["phase_shift_deg"].as_f64().unwrap(),
    );
    assert!((b / a - 2.0).abs() < 1e-12);
}

#[test]
fn sweep_names_failing_field() {
    let out = swtl(&["--freq-ghz", "3", "sweep", "field"]);
    assert_eq!(error_category(&out), "dispersion");
    assert!(String::from_utf8_lossy(&out.stderr).contains("sweep point at"));
}

#[test]
fn compile_and_simulate_full_adder() {
    let dir = tempfile::tempdir().unwrap();
    let layout = compile_fa(dir.path());
    assert!(dir.path().join("layout_shifters.csv").exists());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&layout).unwrap()).unwrap();
    let counts: Vec<usize> = doc["gates"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g["shifters"].as_array().unwrap().len())
        .collect();
    assert_eq!(counts, vec![4, 5]);

    let report = stdout(&swtl(&["simulate", layout.to_str().unwrap(), "--exhaustive"]));
    let lines: Vec<&str> = report.lines().collect();
    assert_eq!(lines[0], "a,b,cin,cout_delta_phi_deg,cout,sum_delta_phi_deg,sum");
    assert_eq!(lines.len(), 9);
    for (row, line) in lines[1..].iter().enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        let ones = row.count_ones() as usize;
        assert_eq!(cells[4], if ones >= 2 { "1" } else { "0" });
        assert_eq!(cells[6], if ones % 2 == 1 { "1" } else { "0" });
    }
    assert_eq!(lines[7], "1,1,0,0.333971,1,-9.55346,0");
}

#[test]
fn simulate_single_vector_and_per_gate_files() {
    let dir = tempfile::tempdir().unwrap();
    let layout = compile_fa(dir.path());
    let json = stdout(&swtl(&[
        "simulate",
        layout.to_str().unwrap(),
        "--input",
        "000",
        "--mode",
        "ideal",
        "--format",
        "json",
    ]));
    let doc: Value = serde_json::from_str(&json).unwrap();
    let results = doc["rows"][0]["results"].as_array().unwrap();
    assert_eq!(results[0]["net_phase_deg"].as_f64().unwrap(), -20.0);
    assert_eq!(results[1]["net_phase_deg"].as_f64().unwrap(), -10.0);

    let reports = dir.path().join("reports");
    stdout(&swtl(&[
        "simulate",
        layout.to_str().unwrap(),
        "--exhaustive",
        "--out",
        reports.to_str().unwrap(),
    ]));
    let cout = std::fs::read_to_string(reports.join("report_cout.csv")).unwrap();
    assert!(cout.starts_with("a,b,cin,delta_phi_deg,cout\n"));
    assert_eq!(
        error_category(&swtl(&["simulate", layout.to_str().unwrap(), "--input", "10"])),
        "invalid-argument"
    );
    assert_eq!(
        error_category(&swtl(&["simulate", layout.to_str().unwrap(), "--input", "1x0"])),
        "invalid-argument"
    );
}

#[test]
fn cost_and_truth_table() {
    let fa = fa_netlist();
    let cost = stdout(&swtl(&["cost", fa.to_str().unwrap()]));
    assert_eq!(
        cost,
        "implementation,gate_count,transducer_count,shifter_count,gate_depth\ntlg,2,4,9,2\nmaj3,3,12,0,2\n"
    );
    let table = stdout(&swtl(&["truth-table", fa.to_str().unwrap()]));
    assert_eq!(table.lines().count(), 9);
    assert_eq!(table.lines().nth(6).unwrap(), "1,0,1,1,0");
}

#[test]
fn budget_violation_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.json");
    std::fs::write(
        &path,
        r#"{"primary_inputs":["x"],"gates":[{"id":"g","inputs":["x"],"weights":[40],"threshold":0}],"outputs":["g"]}"#,
    )
    .unwrap();
    let out = swtl(&["compile", path.to_str().unwrap()]);
    assert_eq!(error_category(&out), "budget");
    assert!(String::from_utf8_lossy(&out.stderr).contains("x=1"));
}

#[test]
fn error_categories() {
    let dir = tempfile::tempdir().unwrap();
    let cyclic = dir.path().join("cyclic.json");
    std::fs::write(
        &cyclic,
        r#"{"primary_inputs":["a"],"gates":[{"id":"p","inputs":["q"],"weights":[1],"threshold":1},{"id":"q","inputs":["p"],"weights":[1],"threshold":1}],"outputs":["p"]}"#,
    )
    .unwrap();
    assert_eq!(
        error_category(&swtl(&["truth-table", cyclic.to_str().unwrap()])),
        "netlist"
    );
    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{not json").unwrap();
    assert_eq!(error_category(&swtl(&["cost", garbage.to_str().unwrap()])), "format");
    assert_eq!(error_category(&swtl(&["cost", "/no/such/file.json"])), "io");
    assert_eq!(
        error_category(&swtl(&["--preset", "nope", "calibrate", "--target-deg", "10"])),
        "config"
    );
    assert_eq!(
        error_category(&swtl(&["--freq-ghz", "-1", "calibrate", "--target-deg", "10"])),
        "invalid-argument"
    );
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let layout = compile_fa(dir.path());
    let first = std::fs::read(&layout).unwrap();
    let again = tempfile::tempdir().unwrap();
    assert_eq!(std::fs::read(compile_fa(again.path())).unwrap(), first);
    let args = ["simulate", layout.to_str().unwrap(), "--exhaustive", "--format", "json"];
    assert_eq!(swtl(&args).stdout, swtl(&args).stdout);
    let sweep = ["sweep", "frequency"];
    assert_eq!(swtl(&sweep).stdout, swtl(&sweep).stdout);
}

#[test]
fn material_file_preset() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("stack.toml");
    let stack = swtl_core::MaterialStack::preset("cofeb-paper").unwrap();
    std::fs::write(&path, stack.to_toml_string().unwrap()).unwrap();
    let from_file = stdout(&swtl(&[
        "--preset",
        path.to_str().unwrap(),
        "calibrate",
        "--target-deg",
        "10",
    ]));
    let from_name = stdout(&swtl(&["calibrate", "--target-deg", "10"]));
    assert_eq!(from_file, from_name);
}
