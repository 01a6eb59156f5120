use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    format!("{}/../core/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn dehnfill(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dehnfill"))
        .args(args)
        .env_remove("DEHNFILL_BITS")
        .output()
        .expect("spawn dehnfill")
}

fn json_ok(args: &[&str]) -> Value {
    let out = dehnfill(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn validate_figure_eight() {
    let v = json_ok(&["validate", &fixture("figure_eight.json")]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["vanishes_at_one"], true);
}

#[test]
fn newton_reports_top_slope() {
    let v = json_ok(&["newton", &fixture("figure_eight.json")]);
    assert_eq!(v["top_slope"], "4");
}

#[test]
fn specialize_emits_decimal_coefficients() {
    let v = json_ok(&[
        "specialize",
        &fixture("figure_eight.json"),
        "-p",
        "9",
        "-q",
        "2",
    ]);
    let coeffs: Vec<&str> = v["coeffs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_str().unwrap())
        .collect();
    assert_eq!(coeffs.len(), 19);
    assert_eq!((coeffs[0], coeffs[18]), ("1", "1"));
    assert_eq!(v["t_shift"], -8);
    assert_eq!(v["collision"], false);
}

#[test]
fn specialize_collision_flag() {
    let v = json_ok(&[
        "specialize",
        &fixture("figure_eight.json"),
        "-p",
        "4",
        "-q",
        "1",
    ]);
    assert_eq!(v["collision"], true);
}

#[test]
fn factor_inline_and_pretty() {
    let v = json_ok(&["factor", "x^4 - 1"]);
    let orders: Vec<u64> = v["cyclotomic_part"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["order"].as_u64().unwrap())
        .collect();
    assert_eq!(orders, vec![1, 2, 4]);
    let out = dehnfill(&["factor", "[\"-2\", \"0\", \"4\"]", "--pretty"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\n  \"content\": \"2\""), "{text}");
}

#[test]
fn factor_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    std::fs::write(&path, "[6, 5, 1]").unwrap();
    let v = json_ok(&["factor", path.to_str().unwrap()]);
    assert_eq!(v["factors"].as_array().unwrap().len(), 2);
}

#[test]
fn mahler_of_lehmer() {
    let lehmer = "x^10 + x^9 - x^7 - x^6 - x^5 - x^4 - x^3 + x + 1";
    for method in ["roots", "graeffe", "both"] {
        let v = json_ok(&["mahler", lehmer, "--method", method]);
        assert!(
            (v["value"].as_f64().unwrap() - 1.176280818).abs() < 1e-8,
            "{method}: {v}"
        );
        assert_eq!(v["length"], "9");
        assert_eq!(v["method"], method);
    }
    let v = json_ok(&["mahler", lehmer, "--bits", "128"]);
    assert!(v["abs_error"].as_f64().unwrap() < 1e-8);
}

#[test]
fn leading_minus_is_a_polynomial_not_a_flag() {
    let v = json_ok(&["mahler", "-5*x"]);
    assert_eq!(v["value"], 5.0);
    let v = json_ok(&["factor", "--pretty", "-x^2 + 1"]);
    assert_eq!(v["unit"], -1);
}

#[test]
fn roots_and_near_unit() {
    let v = json_ok(&[
        "roots",
        &fixture("figure_eight.json"),
        "-p",
        "9",
        "-q",
        "2",
        "--eps",
        "0.1",
    ]);
    assert_eq!((v["p"].as_i64(), v["q"].as_i64()), (Some(9), Some(2)));
    let moduli = v["moduli"].as_array().unwrap();
    assert_eq!(moduli.len(), v["degree"].as_u64().unwrap() as usize);
    assert!(v["fitted_D"].as_f64().is_some());
    assert_eq!(v["near_unit"]["top_row_roots_empty"], true);
}

#[test]
fn model_report() {
    let v = json_ok(&["model", "-p", "30", "-q", "1", "--eps", "0.15"]);
    assert_eq!(v["degree"], 31);
    assert!(v["max_residual"].as_f64().unwrap() < 1e-9);
    assert_eq!(
        v["count"].as_u64().unwrap() as usize,
        v["solutions"].as_array().unwrap().len()
    );
}

#[test]
fn bad_input_fails_cleanly() {
    let out = dehnfill(&[
        "specialize",
        &fixture("figure_eight.json"),
        "-p",
        "2",
        "-q",
        "4",
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("coprime"));
    let out = dehnfill(&["model", "-p", "30", "-q", "1", "--eps", "0.5"]);
    assert!(!out.status.success());
    let out = dehnfill(&["factor", "x^2 + y"]);
    assert!(!out.status.success());
}

#[test]
fn survey_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let v = json_ok(&[
        "survey",
        &fixture("figure_eight.json"),
        "--p",
        "9..13",
        "--q",
        "1..2",
        "--quadrants",
        "++",
        "--jobs",
        "2",
        "-o",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(v["cells"], 8);
    for f in [
        "records.jsonl",
        "records.csv",
        "band.json",
        "plot_ratio_vs_max.csv",
        "plot_modulus_vs_q.csv",
        "plot_measure_hist.csv",
    ] {
        assert!(out_dir.join(f).is_file(), "{f}");
    }
    let csv = std::fs::read_to_string(out_dir.join("records.csv")).unwrap();
    assert_eq!(csv.lines().count(), 9);
    let band: Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("band.json")).unwrap()).unwrap();
    assert!(band["c1_hat"].as_f64().unwrap() > 0.0);
}

#[test]
fn survey_config_file_and_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("plan.toml");
    std::fs::write(
        &cfg,
        format!(
            "fixture = {:?}\np = \"9..11\"\nq = \"2\"\nquadrants = [\"++\"]\n",
            fixture("figure_eight.json")
        ),
    )
    .unwrap();
    let out = dehnfill(&["survey", "--config", cfg.to_str().unwrap()]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let lines: Vec<Value> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let pq: Vec<(i64, i64)> = lines
        .iter()
        .map(|r| (r["p"].as_i64().unwrap(), r["q"].as_i64().unwrap()))
        .collect();
    assert_eq!(pq, vec![(9, 2), (11, 2)]);

    let out = dehnfill(&["survey", "--config", cfg.to_str().unwrap(), "--q", "1"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 3);
}

#[test]
fn survey_empty_cell_set_succeeds() {
    let out = dehnfill(&[
        "survey",
        &fixture("figure_eight.json"),
        "--p",
        "2",
        "--q",
        "2",
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
}

#[test]
fn survey_rejects_invalid_fixture_without_force() {
    let out = dehnfill(&["survey", "m^2 + 3*l", "--p", "1..3", "--q", "1"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("validation"));
    let out = dehnfill(&["survey", "m^2 + 3*l", "--p", "1..3", "--q", "1", "--force"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}
