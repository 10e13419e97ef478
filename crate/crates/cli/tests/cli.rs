use std::process::{Command, Output};

fn dtriple(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dtriple"))
        .args(args)
        .env_remove("DTRIPLE_PRECISION")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn verify_small_range_as_json_lines() {
    let out = dtriple(&["verify", "--k-min", "2", "--k-max", "3", "--nu", "1,2", "--d-max", "1000000000"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let lines: Vec<serde_json::Value> = stdout(&out).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2 * 2 * 2);
    assert!(lines.iter().all(|v| v["verdict"] == "all-regular"));
    assert_eq!(lines[0]["k"], 2);
    assert_eq!(lines[0]["sign"], "+");
}

#[test]
fn verify_csv_and_text() {
    let out = dtriple(&["verify", "--k-min", "45", "--k-max", "45", "--nu", "2", "--format", "csv", "--jobs", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "k,nu,sign,lambda,c,verdict,rounds,m_bound,residual,irregular");
    assert_eq!(lines.count(), 6);
    let out = dtriple(&["verify", "--k-min", "2", "--k-max", "2", "--nu", "1", "--format", "text"]);
    assert!(stdout(&out).contains("[ok] oracle"));
}

#[test]
fn precision_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_dtriple"))
        .args(["verify", "--k-min", "50", "--k-max", "50", "--nu", "1"])
        .env("DTRIPLE_PRECISION", "120")
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = Command::new(env!("CARGO_BIN_EXE_dtriple"))
        .args(["verify", "--k-min", "50", "--k-max", "50", "--nu", "1"])
        .env("DTRIPLE_PRECISION", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_range_is_a_usage_error() {
    let out = dtriple(&["verify", "--k-min", "5", "--k-max", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("k range"));
}

#[test]
fn corollary_small_k() {
    let out = dtriple(&["corollary", "--k-min", "2", "--k-max", "3", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")), "{text}");
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn pell_examples() {
    let out = dtriple(&["pell", "--d", "2", "--n", "1", "--s-max", "10"]);
    assert!(stdout(&out).contains("unit: (3, 2)"));
    let out = dtriple(&["pell", "--d", "56", "--n", "-55", "--s-max", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let classes = v["classes"].as_array().unwrap();
    assert!(classes.iter().any(|c| c["s"] == "2" && (c["t"] == "13" || c["t"] == "-13")));
    let out = dtriple(&["pell", "--d", "4", "--n", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn search_examples() {
    let out = dtriple(&["search", "--triple", "2,12,24", "--d-max", "10000000"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["extensions"], serde_json::json!([{"d": "2380", "regular": true}]));
    let out = dtriple(&["search", "--triple", "1,3,8", "--d-max", "1000"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["extensions"], serde_json::json!([{"d": "120", "regular": true}]));
    let out = dtriple(&["search", "--triple", "1,2,3"]);
    assert_eq!(out.status.code(), Some(2));
}
