//! The `parkstat` binary: outputs, formats and exit codes.

use std::process::{Command, Output};

fn parkstat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parkstat"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let o = parkstat(args);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout).unwrap()
}

#[test]
fn count_examples() {
    assert_eq!(stdout(&["count", "--n", "3"]), "16\n");
    assert_eq!(
        stdout(&["count", "--n", "3", "--symbolic"]),
        "a^3+6a^2+9a\n"
    );
    assert_eq!(stdout(&["count", "--n", "0", "--a", "9"]), "1\n");
    let json: serde_json::Value = serde_json::from_str(&stdout(&[
        "count", "--n", "4", "--a", "2", "--format", "json",
    ]))
    .unwrap();
    assert_eq!(json["count"], "432");
}

#[test]
fn genfun_examples() {
    assert_eq!(
        stdout(&["genfun", "--n", "3"]),
        "area,count\n0,6\n1,6\n2,3\n3,1\n"
    );
    let rows = stdout(&["genfun", "--n", "2", "--a", "2"]);
    let total: u64 = rows
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 8);
    assert_eq!(stdout(&["genfun", "--n", "0"]), "area,count\n0,1\n");
}

#[test]
fn moments_examples() {
    let json: serde_json::Value = serde_json::from_str(&stdout(&[
        "moments", "--n", "3", "--k", "2", "--format", "json",
    ]))
    .unwrap();
    assert_eq!(json["factorial"], serde_json::json!(["15/16", "3/4"]));
    let text = stdout(&["moments", "--n", "1", "--k", "2"]);
    assert!(text.contains("variance = 0"));
    let csv = stdout(&["moments", "--n", "100", "--k", "8", "--format", "csv"]);
    assert_eq!(csv.lines().count(), 9);
    assert!(
        !csv.contains('e') || !csv.contains("e+"),
        "no scientific notation"
    );
}

#[test]
fn fit_examples() {
    let text = stdout(&["fit", "--k", "2"]);
    assert!(text.contains("5/12n^3-1/12n^2-1/3n + (-7/3n-7/3) * E_1(n)"));
    assert!(text.contains("5/12 n^3"));
    let json: serde_json::Value =
        serde_json::from_str(&stdout(&["fit", "--k", "1", "--format", "json"])).unwrap();
    assert_eq!(json["A"]["terms"], serde_json::json!([]));
    assert_eq!(
        json["B"]["terms"],
        serde_json::json!([{"coeff": "1", "exps": [0]}])
    );
    assert!(stdout(&["fit", "--k", "6", "--format", "csv"]).contains("B,7,-3955/2048\n"));
}

#[test]
fn hist_examples() {
    let csv = stdout(&["hist", "--n", "6", "--scaled", "--precision", "6"]);
    assert!(csv.starts_with("area,count,x,density\n0,720,"));
    assert_eq!(csv.lines().count(), 1 + 16);
}

#[test]
fn airy_report_rows() {
    let csv = stdout(&["airy", "--k", "3", "--grid", "10,20"]);
    assert_eq!(csv.lines().count(), 1 + 6);
}

#[test]
fn out_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("parkstat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("g.json");
    let o = parkstat(&[
        "genfun",
        "--n",
        "4",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        stdout(&["genfun", "--n", "4", "--format", "json"])
    );
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(parkstat(&["count"]).status.code(), Some(2));
    assert_eq!(parkstat(&["count", "--n", "-1"]).status.code(), Some(2));
    assert_eq!(parkstat(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        parkstat(&["moments", "--n", "3", "--k", "0"]).status.code(),
        Some(2)
    );
    let o = parkstat(&["genfun", "--n", "80", "--budget", "1000"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
    assert_eq!(
        parkstat(&["hist", "--n", "1", "--scaled"]).status.code(),
        Some(2)
    );
    assert_eq!(
        parkstat(&["verify", "--suite", "closed-form", "--n", "40"])
            .status
            .code(),
        Some(0)
    );
}
