use std::process::{Command, Output};

use serde_json::Value;

const BSC_01: &str = r#"{"kind":"bsc","p":0.1}"#;
const BSC_0: &str = r#"{"kind":"bsc","p":0.0}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_msa-polar"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

#[test]
fn validate_exit_codes() {
    let good = run(&["validate", "--channel", BSC_01]);
    assert_eq!(code(&good), 0);
    let report: Value = serde_json::from_str(&stdout(&good)).unwrap();
    assert_eq!(report["is_good"], Value::Bool(true));

    assert_eq!(
        code(&run(&[
            "validate",
            "--channel",
            r#"{"kind":"bsc","p":0.5}"#
        ])),
        1
    );
    assert_eq!(
        code(&run(&["validate", "--channel", r#"{"kind":"bsc""#])),
        2
    );
    assert_eq!(
        code(&run(&["validate", "--channel", r#"{"kind":"nope"}"#])),
        2
    );
    assert_eq!(
        code(&run(&["validate", "--channel", "/no/such/file.json"])),
        2
    );
}

#[test]
fn channel_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ch.json");
    std::fs::write(&path, r#"{"kind":"biawgn8","sigma":0.8}"#).unwrap();
    let out = run(&["validate", "--channel", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
}

#[test]
fn pe_table_small() {
    let out = run(&["pe-table", "--channel", BSC_01, "--n", "1"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(
        text.lines().next().unwrap(),
        "i,wt,pe,z_star,mi,support_size"
    );
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 2);
    // 1 - (0.9^2 + 0.1^2) and 0.1
    assert!((rows[0][2] - 0.18).abs() < 1e-12);
    assert!((rows[1][2] - 0.1).abs() < 1e-12);
    // plus index: 2 Z^2 over the product channel, Z = 0.6
    assert!((rows[1][3] - 0.36).abs() < 1e-12);
    // minus index: bounded by 2Z - Z^2
    assert!(rows[0][3] <= 2.0 * 0.6 - 0.36 + 1e-12);
    assert_eq!(rows[0][5], 2.0);
    assert_eq!(rows[1][5], 3.0);
}

#[test]
fn pe_table_row_count_and_clean_channel() {
    for n in 0..=4usize {
        let out = run(&["pe-table", "--channel", BSC_01, "--n", &n.to_string()]);
        assert_eq!(csv_rows(&stdout(&out)).len(), 1 << n);
    }
    let out = run(&["pe-table", "--channel", BSC_0, "--n", "2"]);
    assert_eq!(code(&out), 0);
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r[2] == 0.0));
}

#[test]
fn pe_table_json_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.json");
    let out = run(&[
        "pe-table",
        "--channel",
        BSC_01,
        "--n",
        "2",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let value: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(value["entries"].as_array().unwrap().len(), 4);
}

#[test]
fn pe_table_rejects_bad_labeler() {
    let out = run(&[
        "pe-table",
        "--channel",
        r#"{"kind":"bsc","p":0.5}"#,
        "--n",
        "2",
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn construct_examples() {
    let out = run(&["construct", "--channel", BSC_01, "--n", "1", "--k", "1"]);
    assert_eq!(code(&out), 0);
    let code_json: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(code_json["info_set"], serde_json::json!([1]));
    assert!((code_json["union_bound"].as_f64().unwrap() - 0.1).abs() < 1e-12);

    let empty: Value = serde_json::from_str(&stdout(&run(&[
        "construct",
        "--channel",
        BSC_01,
        "--n",
        "3",
        "--k",
        "0",
    ])))
    .unwrap();
    assert_eq!(empty["info_set"], serde_json::json!([]));
    assert_eq!(empty["union_bound"].as_f64().unwrap(), 0.0);

    let full: Value = serde_json::from_str(&stdout(&run(&[
        "construct",
        "--channel",
        BSC_01,
        "--n",
        "3",
        "--k",
        "8",
    ])))
    .unwrap();
    assert_eq!(
        full["info_set"],
        serde_json::json!([0, 1, 2, 3, 4, 5, 6, 7])
    );

    let ranked = run(&[
        "construct",
        "--channel",
        BSC_01,
        "--n",
        "3",
        "--k",
        "4",
        "--rank",
        "z-star",
    ]);
    assert_eq!(code(&ranked), 0);

    assert_eq!(
        code(&run(&[
            "construct",
            "--channel",
            BSC_01,
            "--n",
            "2",
            "--k",
            "5"
        ])),
        1
    );
}

#[test]
fn thresholds_sweep() {
    let args = [
        "thresholds",
        "--channel",
        BSC_01,
        "--grid",
        "0:0.2:0.05",
        "--dg",
        "6",
        "--de",
        "14",
    ];
    let first = run(&args);
    assert_eq!(code(&first), 0);
    let text = stdout(&first);
    assert_eq!(text.lines().next().unwrap(), "param,C,R_U,R_L");
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 5);
    assert_eq!(&rows[0][..], &[0.0, 1.0, 1.0, 1.0]);
    for r in &rows {
        assert_eq!(r.len(), 4);
        assert!(r[3] <= r[2] && r[2] <= r[1] + 1e-9, "{r:?}");
    }
    for w in rows.windows(2) {
        assert!(w[1][0] > w[0][0]);
        assert!(w[1][1] < w[0][1]);
    }
    assert_eq!(run(&args).stdout, first.stdout);
}

#[test]
fn thresholds_awgn_sweep_has_reference_columns() {
    let out = run(&[
        "thresholds",
        "--channel",
        r#"{"kind":"biawgn8","sigma":0.8}"#,
        "--grid",
        "0.6:0.8:0.1",
        "--dg",
        "5",
        "--de",
        "12",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(
        text.lines().next().unwrap(),
        "param,C,R_U,R_L,C_biawgn,C_awgn"
    );
    for r in csv_rows(&text) {
        assert_eq!(r.len(), 6);
        // quantized capacity <= unquantized binary-input <= unconstrained
        assert!(r[1] <= r[4] + 1e-9 && r[4] <= r[5] + 1e-9, "{r:?}");
        assert!(r[3] <= r[2] && r[2] <= r[1] + 1e-9);
    }
}

#[test]
fn thresholds_single_channel_tree_and_csv() {
    let args = ["thresholds", "--channel", BSC_01, "--dg", "5", "--de", "10"];
    let out = run(&args);
    assert_eq!(code(&out), 0);
    let tree: Value = serde_json::from_str(&stdout(&out)).unwrap();
    for key in ["params", "g", "e", "r_l", "r_u"] {
        assert!(tree.get(key).is_some(), "missing {key}");
    }
    let r_u = tree["r_u"].as_f64().unwrap();
    let r_l = tree["r_l"].as_f64().unwrap();
    assert!(r_l <= r_u);

    let csv = run(&[&args[..], &["--format", "csv"]].concat());
    let rows = csv_rows(&stdout(&csv));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][2], r_u);
    assert_eq!(rows[0][3], r_l);
}

#[test]
fn thresholds_usage_errors() {
    assert_eq!(
        code(&run(&[
            "thresholds",
            "--channel",
            BSC_01,
            "--grid",
            "0.2:0.1:0.05"
        ])),
        2
    );
    assert_eq!(
        code(&run(&[
            "thresholds",
            "--channel",
            BSC_01,
            "--grid",
            "0:0.1"
        ])),
        2
    );
    assert_eq!(
        code(&run(&[
            "thresholds",
            "--channel",
            BSC_01,
            "--dg",
            "10",
            "--de",
            "5"
        ])),
        2
    );
}

#[test]
fn simulate_clean_channel_and_reproducibility() {
    let clean = run(&[
        "simulate",
        "--channel",
        BSC_0,
        "--n",
        "4",
        "--trials",
        "200",
    ]);
    assert_eq!(code(&clean), 0);
    let v: Value = serde_json::from_str(&stdout(&clean)).unwrap();
    assert_eq!(v["word_errors"].as_u64(), Some(0));

    let args = [
        "simulate",
        "--channel",
        BSC_01,
        "--n",
        "4",
        "--k",
        "8",
        "--trials",
        "500",
        "--seed",
        "9",
    ];
    let a = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(run(&args).stdout, a.stdout);
    let v: Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["trials"].as_u64(), Some(500));
    assert_eq!(v["info_set"].as_array().unwrap().len(), 8);

    let other = run(&[&args[..9], &["--seed", "10"]].concat());
    assert_ne!(other.stdout, a.stdout);
}

#[test]
fn simulate_genie_consistency() {
    let out = run(&[
        "simulate",
        "--channel",
        BSC_01,
        "--n",
        "3",
        "--decoder",
        "genie",
        "--trials",
        "4000",
    ]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let c = &v["consistency"];
    assert_eq!(c["total"].as_u64(), Some(8));
    assert_eq!(c["consistent"], Value::Bool(true));

    let partial = run(&[
        "simulate",
        "--channel",
        BSC_01,
        "--n",
        "3",
        "--decoder",
        "genie",
        "--genie-depth",
        "1",
        "--trials",
        "100",
    ]);
    let v: Value = serde_json::from_str(&stdout(&partial)).unwrap();
    assert!(v.get("consistency").is_none());
    assert_eq!(v["block_errors"].as_array().unwrap().len(), 2);

    assert_eq!(
        code(&run(&[
            "simulate",
            "--channel",
            BSC_01,
            "--n",
            "2",
            "--decoder",
            "genie",
            "--genie-depth",
            "3"
        ])),
        2
    );
}

#[test]
fn simulate_exact_decoder_runs() {
    let out = run(&[
        "simulate",
        "--channel",
        r#"{"kind":"biawgn8","sigma":0.7}"#,
        "--n",
        "4",
        "--k",
        "4",
        "--decoder",
        "exact",
        "--trials",
        "300",
    ]);
    assert_eq!(code(&out), 0);
}

#[test]
fn parse_errors_exit_2() {
    assert_eq!(code(&run(&[])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["pe-table", "--channel", BSC_01])), 2);
    assert_eq!(
        code(&run(&["pe-table", "--channel", BSC_01, "--n", "x"])),
        2
    );
}
