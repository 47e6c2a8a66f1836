use std::process::{Command, Output};

fn orlicz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orlicz")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn norm_of_diag_literal() {
    let out = orlicz(&["norm", "--phi", "power:p=2", "--op", "diag(3,4)"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["luxemburg"]["value"].as_f64().unwrap() - 5.0).abs() < 1e-9);
    assert!((v["orlicz"]["value"].as_f64().unwrap() - 10.0).abs() < 1e-9);
    for key in ["value", "iterations", "bracket_width", "method"] {
        assert!(v["luxemburg"].get(key).is_some(), "missing {key}");
    }
}

#[test]
fn floats_have_seventeen_digits() {
    let out = orlicz(&["norm", "--phi", "cosh", "--op", "diag(1)"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let line = text.lines().find(|l| l.contains("\"value\"")).unwrap();
    let mantissa = line.split(':').nth(1).unwrap().trim().trim_end_matches(',').split('e').next().unwrap();
    assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17, "{line}");
}

#[test]
fn text_and_json_agree() {
    let args = ["modular", "--phi", "power:p=2", "--op", "bergman", "--lambda", "1.5"];
    let j = json(&orlicz(&args));
    let mut text_args = args.to_vec();
    text_args.extend(["--output", "text"]);
    let text = String::from_utf8(orlicz(&text_args).stdout).unwrap();
    for line in text.lines() {
        let (key, value) = line.split_once(" = ").unwrap();
        assert_eq!(j[key].to_string().parse::<f64>().unwrap(), value.parse::<f64>().unwrap(), "{key}");
    }
    assert!(j["tail_bound"].as_f64().unwrap() <= 1e-11);
}

#[test]
fn modular_fields() {
    let v = json(&orlicz(&["modular", "--phi", "power:p=2", "--op", "diag(1,2)", "--lambda", "2"]));
    assert_eq!(v["value"].as_f64().unwrap(), 20.0);
    assert_eq!(v["terms_used"].as_u64().unwrap(), 2);
    assert_eq!(v["tail_bound"].as_f64().unwrap(), 0.0);
}

#[test]
fn bergman_table() {
    let out = orlicz(&["bergman"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    let p2 = rows.iter().find(|r| r["p"].as_f64() == Some(2.0)).unwrap();
    assert!((p2["computed"].as_f64().unwrap() - 0.803_077_870_974).abs() < 1e-8);
    assert!(v["cosh_rank_one"]["difference"].as_f64().unwrap().abs() < 1e-10);
}

#[test]
fn membership_and_svd() {
    let v = json(&orlicz(&["membership", "--phi", "power:p=1", "--op", "bergman"]));
    assert_eq!(v["in_s_phi"], false);
    assert_eq!(v["rationale"], "tail-comparison");
    let v = json(&orlicz(&["svd", "--op", "diag(3,-4,4)"]));
    assert_eq!(v["multiplicities"], serde_json::json!([2, 1]));
}

#[test]
fn matrix_file_input() {
    let dir = std::env::temp_dir().join(format!("orlicz-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("m.json");
    std::fs::write(&good, r#"{"rows":2,"cols":2,"re":[0,1,1,0],"im":[0,0,0,0]}"#).unwrap();
    let v = json(&orlicz(&["norm", "--phi", "power:p=2", "--op", good.to_str().unwrap()]));
    assert!((v["luxemburg"]["value"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-9);

    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"rows":2,"cols":2,"re":[1,2,3]}"#).unwrap();
    let out = orlicz(&["norm", "--phi", "power:p=2", "--op", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("dimension mismatch"));

    let garbage = dir.join("garbage.json");
    std::fs::write(&garbage, "not json").unwrap();
    let out = orlicz(&["norm", "--phi", "power:p=2", "--op", garbage.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("operator JSON must be"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn input_errors_exit_two_with_distinct_messages() {
    let cases: [(&[&str], &str); 5] = [
        (&["norm", "--phi", "power:q=2", "--op", "diag(1)"], "accepted forms"),
        (&["norm", "--phi", "cosh", "--op", "/does/not/exist.json"], "cannot read operator file"),
        (&["norm", "--phi", "cosh", "--op", "diag(1,x)"], "invalid diag literal"),
        (&["modular", "--phi", "cosh", "--op", "diag(1)", "--lambda", "-1"], "--lambda must be positive"),
        (&["verify", "--trials", "0"], "--trials must be at least 1"),
    ];
    for (args, needle) in cases {
        let out = orlicz(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(stderr(&out).contains(needle), "{args:?}: {}", stderr(&out));
    }
    assert_eq!(orlicz(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn verify_small_run_passes() {
    let out = orlicz(&["verify", "--seed", "3", "--trials", "5"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert!(v.as_array().unwrap().iter().all(|r| r["passed"] == true));
}
