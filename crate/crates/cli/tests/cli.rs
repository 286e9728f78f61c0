use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn quadrex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadrex"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = quadrex(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

fn golden(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name]
        .iter()
        .collect();
    std::fs::read_to_string(path).expect("golden file")
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).expect("one JSON document")
}

#[test]
fn fast_symbol_prints_bare_value() {
    assert_eq!(stdout(&["symbol", "--fast", "141", "311"]), "1\n");
}

#[test]
fn symbol_methods_agree() {
    for method in ["euler", "gauss", "table", "fast", "jacobi"] {
        assert_eq!(
            stdout(&["symbol", "--method", method, "365", "1847"]),
            "1\n",
            "{method}"
        );
        assert_eq!(
            stdout(&["symbol", "--method", method, "-1", "7"]),
            "-1\n",
            "{method}"
        );
    }
    assert_eq!(stdout(&["symbol", "2", "15"]), "1\n");
}

#[test]
fn symbol_trace_golden() {
    assert_eq!(
        stdout(&["symbol", "--trace", "141", "311"]),
        golden("symbol_trace_141_311.json")
    );
    let v = json(&["symbol", "--trace", "141", "311"]);
    assert_eq!(v["trace"]["r"], serde_json::json!([311, 141, 29, 25, 1]));
    assert_eq!(v["trace"]["s"], serde_json::json!([0, 0, 2]));
}

#[test]
fn xset_126_classes() {
    assert_eq!(stdout(&["xset", "126"]), golden("xset_126.json"));
    let v = json(&["xset", "126"]);
    assert_eq!(v["modulus"], 56);
    assert_eq!(
        v["plus"],
        serde_json::json!([1, 5, 9, 11, 13, 25, 31, 43, 45, 47, 51, 55])
    );
    assert_eq!(
        v["minus"],
        serde_json::json!([3, 15, 17, 19, 23, 27, 29, 33, 37, 39, 41, 53])
    );
    assert_eq!(v["excluded_primes"], serde_json::json!([3]));
}

#[test]
fn xset_verification_finds_nothing() {
    let v = json(&["xset", "7", "--verify", "--prime-bound", "20000"]);
    assert_eq!(v["plus"], serde_json::json!([1, 3, 9, 19, 25, 27]));
    assert_eq!(
        v["verify"]["plus"]["counterexamples"],
        serde_json::json!([])
    );
    assert_eq!(
        v["verify"]["minus"]["counterexamples"],
        serde_json::json!([])
    );
}

#[test]
fn solvers() {
    assert_eq!(
        json(&["sqrt", "365", "1847"])["roots"],
        serde_json::json!([496, 1351])
    );
    assert_eq!(
        stdout(&["solve", "1", "0", "-1", "105", "--csv"]),
        golden("solve_105.csv")
    );
    assert_eq!(json(&["sqrt", "3", "7"])["roots"], serde_json::json!([]));
}

#[test]
fn density_csv_columns() {
    let out = stdout(&["density", "2", "3", "5", "--csv", "--prime-bound", "100000"]);
    let mut lines = out.lines();
    assert_eq!(
        lines.next(),
        Some("prime_bound,theoretical,empirical,abs_error")
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "100000");
    assert_eq!(row[1], "0.125");
    assert!(row[3].parse::<f64>().unwrap() < 0.01);
}

#[test]
fn obstructed_density_is_zero() {
    let v = json(&["density", "2", "3", "6", "--minus"]);
    assert_eq!(v["density"]["kind"], "obstructed");
    assert_eq!(v["matches"], 0);
}

#[test]
fn forms_table_golden() {
    assert_eq!(
        stdout(&["forms", "-4", "-23", "-84", "5", "13", "--csv"]),
        golden("forms.csv")
    );
    let v = json(&["forms", "61"]);
    assert_eq!(v["pell"]["t0"], "1523");
    assert_eq!(v["pell"]["u0"], "195");
}

#[test]
fn excess_partition_golden() {
    assert_eq!(
        stdout(&["excess", "23", "--den", "4"]),
        golden("excess_23_4.json")
    );
    let v = json(&["excess", "103"]);
    assert_eq!(v["signs"]["violations"], serde_json::json!([]));
}

#[test]
fn gauss_sum_magnitude() {
    let v = json(&["gauss-sum", "13", "2"]);
    assert!(v["abs_error"].as_f64().unwrap() < 1e-9);
}

#[test]
fn weil_both_inputs() {
    let v = json(&["weil", "31", "1", "2", "3"]);
    assert_eq!(v["complete_holds"], true);
    let v = json(&["weil", "7", "--coeffs", "1,0"]);
    assert_eq!(v["complete_sum"], -1);
    assert_eq!(
        quadrex(&["weil", "7", "--coeffs", "1,2"]).status.code(),
        Some(2)
    );
}

#[test]
fn ap_commands() {
    let v = json(&[
        "ap",
        "diagram",
        "--tuple",
        r#"{"a":[1,6,50,1,49],"b":[1,2,10,3,21]}"#,
        "--s",
        "5",
    ]);
    assert_eq!(v["e"], 9);
    let v = json(&["ap", "generate", "--d", "1,2", "--t", "2,3"]);
    assert_eq!(v["b"], serde_json::json!([1, 2, 6]));
    let spec = r#"{"b":[1,2],"s":[[0,1],[1,3]]}"#;
    let a = stdout(&[
        "ap", "sweep", "--family", spec, "--from", "1000", "--count", "6", "--jobs", "1",
    ]);
    let b = stdout(&[
        "ap", "sweep", "--family", spec, "--from", "1000", "--count", "6", "--jobs", "4",
    ]);
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 6);
}

#[test]
fn clt_second_moment_exact() {
    let v = json(&["clt", "1009", "--moments", "2"]);
    let h = v["h"].as_i64().unwrap();
    assert_eq!(v["moments"]["power_sums"][1], 1009 * h - h * h);
}

#[test]
fn zkp_demo_accepts_and_is_reproducible() {
    let out = stdout(&["zkp", "demo", "--rounds", "30", "--seed", "7"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 32);
    let last: Value = serde_json::from_str(lines[31]).unwrap();
    assert_eq!(last["status"], "accepted");
    assert_eq!(last["rounds"], 30);
    assert_eq!(
        out,
        stdout(&["zkp", "demo", "--rounds", "30", "--seed", "7"])
    );
    assert_eq!(
        stdout(&["zkp", "demo", "--rounds", "5", "--seed", "7"]),
        golden("zkp_demo_5_7.jsonl")
    );
}

#[test]
fn zkp_trials_independent_of_jobs() {
    let args = [
        "zkp",
        "trials",
        "--impostor",
        "--rounds",
        "2",
        "--sessions",
        "400",
        "--seed",
        "3",
    ];
    let one = stdout(&[&args[..], &["--jobs", "1"]].concat());
    let many = stdout(&[&args[..], &["--jobs", "3"]].concat());
    assert_eq!(one, many);
    let v: Value = serde_json::from_str(&one).unwrap();
    let rate = v["rate"].as_f64().unwrap();
    assert!((rate - 0.25).abs() < 0.07, "{rate}");
}

#[test]
fn exit_codes() {
    assert_eq!(quadrex(&["--help"]).status.code(), Some(0));
    assert_eq!(quadrex(&["--version"]).status.code(), Some(0));
    assert_eq!(quadrex(&[]).status.code(), Some(1));
    assert_eq!(quadrex(&["bogus"]).status.code(), Some(1));
    assert_eq!(quadrex(&["symbol", "x", "7"]).status.code(), Some(1));
    assert_eq!(
        quadrex(&["ap", "params", "--family", "{"]).status.code(),
        Some(1)
    );
    assert_eq!(
        quadrex(&["symbol", "--method", "euler", "2", "15"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(quadrex(&["symbol", "3", "8"]).status.code(), Some(2));
    assert_eq!(quadrex(&["gauss-sum", "15"]).status.code(), Some(2));
    let out = quadrex(&["forms", "--", "-12"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}
