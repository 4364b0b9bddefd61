use std::path::PathBuf;
use std::process::Command;

use vega_core::cli::{run_with, EXIT_DATA, EXIT_OK, EXIT_USAGE};
use vega_core::report::RunReport;
use vega_core::Measure;

fn fixture(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn five_rows() -> String {
    concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/five_rows.csv").to_string()
}

fn vega(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("vega").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn value(report: &RunReport, m: Measure) -> f64 {
    report.measures.iter().find(|r| r.measure == m).unwrap().value
}

#[test]
fn default_measures_are_gini_and_vega() {
    let path = five_rows();
    let (code, out, err) = vega(&["--input", &path, "--column", "income"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let report = RunReport::from_json(&out).unwrap();
    let names: Vec<_> = report.measures.iter().map(|r| r.measure).collect();
    assert_eq!(names, [Measure::Gini, Measure::Vega]);
    assert_eq!(report.dataset.rows_read, 5);
    assert!(report.decomposition.is_none());
}

#[test]
fn column_by_position_matches_column_by_name() {
    let path = five_rows();
    let (_, by_name, _) = vega(&["--input", &path, "--column", "income", "--output", "table"]);
    let (code, by_index, err) = vega(&["--input", &path, "--column", "1", "--output", "table"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let strip = |t: &str| t.lines().skip(2).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&by_name), strip(&by_index));
}

#[test]
fn output_is_independent_of_threads_and_chunk() {
    let values: String = (0..400).map(|i| format!("{}\n", 1.0 + (i * 37 % 101) as f64 * 0.73)).collect();
    let path = fixture("many.csv", &format!("y\n{values}"));
    let path = path.to_str().unwrap();
    let (_, base, _) = vega(&["--input", path, "--column", "y", "--measure", "angular-mean", "--measure", "vega"]);
    let base = RunReport::from_json(&base).unwrap();
    for (threads, chunk) in [("3", "1"), ("8", "17"), ("2", "1000")] {
        let (code, out, _) = vega(&[
            "--input", path, "--column", "y", "--measure", "angular-mean", "--measure", "vega",
            "--threads", threads, "--chunk", chunk,
        ]);
        assert_eq!(code, EXIT_OK);
        let report = RunReport::from_json(&out).unwrap();
        assert_eq!(report.measures, base.measures);
    }
}

#[test]
fn group_column_adds_decomposition() {
    let path = five_rows();
    let (code, out, _) = vega(&["--input", &path, "--column", "income", "--group-column", "region"]);
    assert_eq!(code, EXIT_OK);
    let report = RunReport::from_json(&out).unwrap();
    let d = report.decomposition.as_ref().unwrap();
    let labels: Vec<_> = d.groups.iter().map(|g| g.label.as_str()).collect();
    assert_eq!(labels, ["north", "south"]);
    assert!(d.residual <= 1e-12);
    assert!((d.total - value(&report, Measure::Vega)).abs() <= 1e-12);
}

#[test]
fn weight_column_equals_replication_for_gini_and_vega() {
    let weighted = fixture("weighted.csv", "y,w\n1,2\n2,1\n3,1\n");
    let replicated = fixture("replicated.csv", "y\n1\n1\n2\n3\n");
    let (code, a, err) = vega(&["--input", weighted.to_str().unwrap(), "--column", "y", "--weight-column", "w"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let (_, b, _) = vega(&["--input", replicated.to_str().unwrap(), "--column", "y"]);
    let (a, b) = (RunReport::from_json(&a).unwrap(), RunReport::from_json(&b).unwrap());
    for m in [Measure::Gini, Measure::Vega] {
        assert!((value(&a, m) - value(&b, m)).abs() <= 1e-12, "{m:?}");
    }
    assert!((value(&a, Measure::Vega) - 0.12257145621283826).abs() <= 1e-12);
}

#[test]
fn strict_mode_rejects_nonpositive_majority() {
    let path = fixture("zeros.csv", "y\n0\n0\n0\n5\n9\n");
    let path = path.to_str().unwrap();
    let (code, out, err) = vega(&["--input", path, "--column", "y", "--strict"]);
    assert_eq!(code, EXIT_DATA);
    assert!(out.is_empty());
    assert!(err.contains("NONPOSITIVE_MAJORITY"), "{err}");

    let (code, out, err) = vega(&["--input", path, "--column", "y"]);
    assert_eq!(code, EXIT_OK);
    assert!(err.contains("warning"), "{err}");
    let report = RunReport::from_json(&out).unwrap();
    assert!((report.measures[0].nonpositive_share - 0.6).abs() < 1e-15);
}

#[test]
fn nonpositive_mean_is_a_data_error() {
    let path = fixture("debt.csv", "y\n-5\n1\n2\n");
    let (code, _, err) = vega(&["--input", path.to_str().unwrap(), "--column", "y"]);
    assert_eq!(code, EXIT_DATA);
    assert!(err.contains("NON_POSITIVE_MEAN") || err.contains("mean"), "{err}");

    // The angular mean is still defined.
    let (code, _, _) = vega(&["--input", path.to_str().unwrap(), "--column", "y", "--measure", "angular-mean"]);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn missing_cells() {
    let path = fixture("gaps.csv", "id,y\na,1\nb,\nc,3\nd,abc\ne,5\n");
    let path = path.to_str().unwrap();
    let (code, _, err) = vega(&["--input", path, "--column", "y"]);
    assert_eq!(code, EXIT_DATA);
    assert!(err.contains("line"), "{err}");

    let (code, out, _) = vega(&["--input", path, "--column", "y", "--missing", "drop"]);
    assert_eq!(code, EXIT_OK);
    let report = RunReport::from_json(&out).unwrap();
    assert_eq!(report.dataset.rows_read, 5);
    assert_eq!(report.dataset.rows_dropped, 2);
    assert_eq!(report.dataset.warnings.len(), 2);
}

#[test]
fn tab_delimited_input_is_detected() {
    let path = fixture("tabs.tsv", "name\ty\na\t1\nb\t2\nc\t3\n");
    let (code, out, err) = vega(&["--input", path.to_str().unwrap(), "--column", "y", "--measure", "vega"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let report = RunReport::from_json(&out).unwrap();
    assert!((value(&report, Measure::Vega) - 0.10231479463098545).abs() < 1e-15);
}

#[test]
fn quantile_plan_is_echoed() {
    let path = five_rows();
    let (code, out, _) = vega(&["--input", &path, "--column", "income", "--quantiles", "5"]);
    assert_eq!(code, EXIT_OK);
    let report = RunReport::from_json(&out).unwrap();
    let (_, exact, _) = vega(&["--input", &path, "--column", "income"]);
    // Five bins over five unit-weight rows lose nothing.
    assert_eq!(report.measures, RunReport::from_json(&exact).unwrap().measures);
    assert!(out.contains("\"quantile\""), "{out}");
}

#[test]
fn usage_errors() {
    let path = five_rows();
    assert_eq!(vega(&["--column", "income"]).0, EXIT_USAGE);
    assert_eq!(vega(&["--input", &path, "--column", "income", "--measure", "theil"]).0, EXIT_USAGE);
    assert_eq!(vega(&["--input", &path, "--column", "income", "--threads", "0"]).0, EXIT_USAGE);
    assert_eq!(vega(&["--input", &path, "--column", "income", "--quantiles", "0"]).0, EXIT_USAGE);
    let (code, out, _) = vega(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("--group-column"));
}

#[test]
fn data_errors() {
    let path = five_rows();
    let (code, _, err) = vega(&["--input", "/nonexistent/x.csv", "--column", "y"]);
    assert_eq!(code, EXIT_DATA, "{err}");
    let (code, _, err) = vega(&["--input", &path, "--column", "wealth"]);
    assert_eq!(code, EXIT_DATA);
    assert!(err.contains("wealth"), "{err}");
    // Five rows cannot fill six bins.
    let (code, _, _) = vega(&["--input", &path, "--column", "income", "--quantiles", "6"]);
    assert_eq!(code, EXIT_DATA);
}

#[test]
fn witness_subcommand() {
    let (code, out, _) = vega(&["witness"]);
    assert_eq!(code, EXIT_OK);
    let json: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(json["angular_mean_witness"]["angular_mean_increased"], true);
    assert_eq!(json["regression_anchors"].as_array().unwrap().len(), 3);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_vega");
    let ok = Command::new(bin).args(["--input", &five_rows(), "--column", "income"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    let bad = Command::new(bin).args(["--input", &five_rows()]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));
    let table = Command::new(bin)
        .args(["--input", &five_rows(), "--column", "income", "--output", "table"])
        .output()
        .unwrap();
    let text = String::from_utf8(table.stdout).unwrap();
    assert!(text.contains("vega") && text.contains("gini"), "{text}");
}
