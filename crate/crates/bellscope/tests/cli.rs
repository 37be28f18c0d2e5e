//! End-to-end tests of the bellscope binary: formats, exit codes,
//! determinism, and the agreement of every number across output formats.

use std::f64::consts::{PI, TAU};
use std::process::{Command, Output};

use serde_json::Value;

fn bellscope(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bellscope"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).expect("json stdout")
}

/// Rows of a CSV payload as field vectors, comment and header lines
/// skipped.
fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip_while(|l| l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

/// The value a text-format row carries for `key`.
fn text_field(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(key).filter(|rest| rest.starts_with(' ')))
        .unwrap_or_else(|| panic!("no row {key:?} in {text}"))
        .trim()
        .to_string()
}

#[test]
fn report_states_the_duer_verdict_in_both_formats() {
    let out = bellscope(&["report", "dur", "--n", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["family"], "dur");
    assert_eq!(v["n"], 6);
    assert_eq!(v["violated"], true);
    assert_eq!(v["method"], "analytic");
    let norm_sq = v["norm_sq"].as_f64().unwrap();
    let lhv_bound = v["lhv_bound"].as_f64().unwrap();
    let alpha = v["params"]["alpha"].as_f64().unwrap();
    assert!((norm_sq - TAU.powi(6) / 98.0).abs() <= 1e-9 * norm_sq);
    assert!((lhv_bound - 4096.0 / 7.0).abs() <= 1e-9 * lhv_bound);
    assert!((alpha - PI / 20.0).abs() <= 1e-9);

    // the text format carries bitwise the same numbers
    let text = stdout(&bellscope(&["report", "dur", "--n", "6", "--format", "text"]));
    assert_eq!(text_field(&text, "norm_sq").parse::<f64>().unwrap(), norm_sq);
    assert_eq!(text_field(&text, "lhv_bound").parse::<f64>().unwrap(), lhv_bound);
    assert_eq!(text_field(&text, "violated"), "true");
}

#[test]
fn quadrature_cross_check_switches_the_reported_method() {
    let out = bellscope(&["report", "dur", "--n", "4", "--quad-points", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["method"], "quadrature");
}

#[test]
fn csv_and_json_scans_carry_identical_numbers() {
    let args = ["scan", "dur", "--n-range", "3:8", "--grid", "0.5:1.0:2"];
    let csv = stdout(&bellscope(&args));
    let mut jargs = args.to_vec();
    jargs.extend(["--format", "json"]);
    let rows = csv_rows(&csv);
    let items = json(&bellscope(&jargs));
    let items = items.as_array().unwrap();
    assert_eq!(rows.len(), items.len());
    assert_eq!(rows.len(), 12);

    for (row, item) in rows.iter().zip(items) {
        assert_eq!(row[0], item["family"].as_str().unwrap());
        assert_eq!(row[1].parse::<u64>().unwrap(), item["n"].as_u64().unwrap());
        for (col, key) in [
            (2, "param"),
            (3, "norm_sq"),
            (4, "lhv_bound"),
            (5, "margin"),
            (7, "threshold_functional"),
            (8, "threshold_two_setting"),
        ] {
            let from_csv: f64 = row[col].parse().unwrap();
            let from_json = item[key].as_f64().unwrap();
            assert_eq!(from_csv, from_json, "{key} differs: {from_csv} vs {from_json}");
        }
        let n: usize = row[1].parse().unwrap();
        assert_eq!(row[6] == "true", n >= 6, "verdict at n = {n}");
        assert_eq!(item["violated"].as_bool().unwrap(), n >= 6);
    }
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = ["scan", "ghz", "--n-range", "2:6", "--grid", "0.05:0.78:7", "--format", "json"];
    let first = bellscope(&args);
    let second = bellscope(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);

    // --output writes exactly the bytes that went to stdout
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.json");
    let mut fargs = args.to_vec();
    let path_str = path.to_str().unwrap();
    fargs.extend(["--output", path_str]);
    let third = bellscope(&fargs);
    assert_eq!(third.status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), first.stdout);
}

#[test]
fn exit_codes_follow_the_contract() {
    // 0: success, including help and version
    assert_eq!(bellscope(&["--help"]).status.code(), Some(0));
    assert_eq!(bellscope(&["--version"]).status.code(), Some(0));
    assert_eq!(bellscope(&["report", "dur", "--n", "6", "--expect-violation"]).status.code(), Some(0));

    // 1: usage and domain errors
    for bad in [
        vec!["report", "dur", "--n", "20"],
        vec!["report", "ghz", "--n", "4"],
        vec!["report", "dur", "--n", "6", "--bogus"],
        vec!["scan", "ghz", "--n-range", "3:4", "--grid", "0:1:0"],
        vec!["scan", "ghz", "--n-range", "8:3", "--grid", "0:1:2"],
        vec!["scan", "ghz", "--n-range", "3:11", "--grid", "0.1:0.2:2"],
        vec!["scan", "ghz", "--n-range", "3:3", "--grid", "0.7:0.9:3"],
        vec!["oracle", "--n", "2", "--m", "20", "--exhaustive"],
        vec!["oracle", "ghz", "--n", "2", "--amplitude", "1"],
        vec!["oracle", "--n", "2", "--m", "8", "--decoupled", "--greedy"],
    ] {
        let out = bellscope(&bad);
        assert_eq!(out.status.code(), Some(1), "args {bad:?}");
        assert!(out.stdout.is_empty() || bad.contains(&"--bogus"), "args {bad:?} printed a payload");
    }

    // 2: verdict contradicts --expect-violation
    assert_eq!(bellscope(&["report", "dur", "--n", "5", "--expect-violation"]).status.code(), Some(2));
    let out = bellscope(&["mk", "ghz", "--n", "3", "--beta", "0.1", "--restarts", "4", "--expect-violation"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ghz_scan_flips_within_one_grid_step_of_the_threshold() {
    let out = bellscope(&["scan", "ghz", "--n-range", "5:5", "--grid", "0.08:0.13:51"]);
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 51);
    let step = (0.13 - 0.08) / 50.0;
    let threshold_beta = (2.0 * (2.0 / PI).powi(5)).asin() / 2.0;

    let flip = rows.iter().position(|r| r[6] == "true").expect("some row violates");
    assert!(flip > 0, "first row already violates");
    assert!(rows[..flip].iter().all(|r| r[6] == "false"));
    assert!(rows[flip..].iter().all(|r| r[6] == "true"));
    let beta_at_flip: f64 = rows[flip][2].parse().unwrap();
    assert!(
        (beta_at_flip - threshold_beta).abs() <= step + 1e-12,
        "flip at {beta_at_flip}, threshold {threshold_beta}"
    );

    let printed_threshold: f64 = rows[0][7].parse().unwrap();
    assert!((printed_threshold - 2.0 * (2.0 / PI).powi(5)).abs() <= 1e-9);
}

#[test]
fn config_values_yield_to_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bellscope.conf");
    std::fs::write(&path, "# defaults\nn = 5\nbeta = 0.3\nformat = text\n").unwrap();
    let path = path.to_str().unwrap();

    let text = stdout(&bellscope(&["report", "ghz", "--config", path]));
    assert_eq!(text_field(&text, "n"), "5");
    assert_eq!(text_field(&text, "beta").parse::<f64>().unwrap(), 0.3);

    let text = stdout(&bellscope(&["report", "ghz", "--config", path, "--n", "4", "--beta", "0.2"]));
    assert_eq!(text_field(&text, "n"), "4");
    assert_eq!(text_field(&text, "beta").parse::<f64>().unwrap(), 0.2);

    let method = dir.path().join("method.conf");
    std::fs::write(&method, "method = exhaustive\n").unwrap();
    let text = stdout(&bellscope(&["oracle", "--n", "1", "--m", "8", "--config", method.to_str().unwrap()]));
    assert_eq!(text_field(&text, "method"), "exhaustive");

    let broken = dir.path().join("broken.conf");
    std::fs::write(&broken, "no equals sign here\n").unwrap();
    assert_eq!(bellscope(&["report", "dur", "--n", "4", "--config", broken.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn entanglement_tables_list_every_cut() {
    // at n = 3 the 2:(n-2) cuts are relabelings, and a comment says so
    let out = stdout(&bellscope(&["entanglement", "dur", "--n", "3"]));
    assert!(out.starts_with("# at n = 3"), "missing note: {out}");
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r[2] == "1:2" && r[5] == "true"));

    let out = stdout(&bellscope(&["entanglement", "dur", "--n", "6"]));
    assert!(!out.starts_with('#'));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 6 + 15);
    for r in &rows {
        let eig: f64 = r[4].parse().unwrap();
        match r[2].as_str() {
            "1:5" => {
                assert_eq!(r[5], "true");
                assert!(eig >= -1e-10, "1-cut eig {eig}");
            }
            "2:4" => {
                assert_eq!(r[5], "false");
                assert!((eig + 1.0 / 14.0).abs() <= 1e-9, "2-cut eig {eig}");
            }
            other => panic!("unexpected cut {other}"),
        }
    }

    let v = json(&bellscope(&["entanglement", "dur", "--n", "6", "--format", "json"]));
    assert_eq!(v["cuts"].as_array().unwrap().len(), 21);
    assert!(v.get("note").is_none());
    let v = json(&bellscope(&["entanglement", "dur", "--n", "3", "--format", "json"]));
    assert!(v["note"].as_str().unwrap().contains("relabels"));
}

#[test]
fn oracle_methods_and_formats_agree() {
    let decoupled = stdout(&bellscope(&["oracle", "--n", "1", "--m", "8"]));
    let exhaustive = stdout(&bellscope(&["oracle", "--n", "1", "--m", "8", "--exhaustive"]));
    assert_eq!(text_field(&decoupled, "method"), "decoupled");
    assert_eq!(text_field(&exhaustive, "method"), "exhaustive");
    assert_eq!(
        text_field(&decoupled, "best_value"),
        text_field(&exhaustive, "best_value"),
        "methods disagree on an enumerable grid"
    );

    let v = json(&bellscope(&["oracle", "--n", "3", "--m", "256", "--format", "json"]));
    let best = v["best_value"].as_f64().unwrap();
    let bound = v["bound"].as_f64().unwrap();
    assert_eq!(bound, 64.0);
    assert!(best >= 0.995 * bound && best <= bound * (1.0 + 5.0 / 256.0));
    let strategy = &v["best_strategy"];
    assert_eq!(strategy["n_qubits"], 3);
    assert_eq!(strategy["grid_size"], 256);
    let bits = strategy["response_bits"].as_array().unwrap();
    assert_eq!(bits.len(), 3);
    assert!(bits.iter().all(|row| row.as_str().unwrap().len() == 256));

    // family-sourced harmonics fill in amplitude and phase
    let dur = stdout(&bellscope(&["oracle", "dur", "--n", "4", "--m", "16"]));
    assert_eq!(text_field(&dur, "amplitude").parse::<f64>().unwrap(), 0.2);
}

#[test]
fn mk_finds_the_mermin_point() {
    let out = bellscope(&[
        "mk", "ghz", "--n", "3", "--beta", "0.7853981633974483", "--restarts", "8", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["value"].as_f64().unwrap() - 2.0).abs() <= 1e-9);
    assert_eq!(v["violated"], true);
    assert_eq!(v["lhv_bound"].as_f64().unwrap(), 1.0);
    let settings = v["settings"].as_array().unwrap();
    assert_eq!(settings.len(), 3);
    assert!(settings.iter().all(|pair| pair.as_array().unwrap().len() == 2));
}
