use std::process::{Command, Output};

use pwsample::selection::sampling_constant;

fn pwsample(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pwsample")).args(args).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn canonical_construct() {
    let out = pwsample(&["construct", "--spectrum", r#"{"m":4,"cells":[0]}"#, "--d", "1", "--mode", "sampling"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["certified_lower"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    assert!((v["certified_upper"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    assert_eq!(v["density"], "1/4");
}

#[test]
fn undersampled_verify_is_descriptive() {
    let out = pwsample(&["verify", "--spectrum", r#"{"m":8,"cells":[0,1,2]}"#, "--residues", "0,3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["bounds"]["lower"].as_f64(), Some(0.0));
    assert_eq!(v["landau_violation"], true);
}

#[test]
fn sweep_rows_meet_their_targets() {
    let args = ["sweep", "--m", "64", "--fractions", "1/16,1/8", "--d", "0.5,1,3"];
    let out = pwsample(&args);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let (comment, body) = text.split_once('\n').unwrap();
    assert_eq!(comment, "# pwsample report v1");
    let mut rdr = csv::Reader::from_reader(body.as_bytes());
    let head = rdr.headers().unwrap().clone();
    let col = |name: &str| head.iter().position(|h| h == name).unwrap();
    let mut rows = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let d: f64 = rec[col("d")].parse().unwrap();
        let n: f64 = rec[col("n")].parse().unwrap();
        let lower: f64 = rec[col("lower")].parse().unwrap();
        assert!(lower >= sampling_constant(d) * n / 64.0);
        assert_eq!(&rec[col("pass")], "true");
        rows += 1;
    }
    assert_eq!(rows, 6);
    assert_eq!(pwsample(&args).stdout, out.stdout);
}

#[test]
fn riesz_and_duality_commands() {
    let g = r#"{"m":16,"cells":[0,1,2,3]}"#;
    let out = pwsample(&["construct", "--spectrum", g, "--mode", "riesz", "--d", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["pass"], true);
    let out = pwsample(&["duality", "--spectrum", g, "--residues", "0,4,8,12"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["exact_identity_pass"], true);
}

#[test]
fn input_errors_exit_with_two() {
    let out = pwsample(&["construct", "--spectrum", r#"{"m":4,"cells":[9]}"#]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty() && out.stdout.is_empty());
    let out = pwsample(&["construct", "--spectrum", r#"{"m":4,"cells":[0]}"#, "--mode", "riesz", "--d", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = pwsample(&["exhaust", "--spectrum", r#"{"intervals":[[0.5,1.5]]}"#, "--schedule", "32,16"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(pwsample(&["bogus"]).status.code(), Some(2));
}
