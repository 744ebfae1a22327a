use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn mconv(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mconv"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn read(dir: &Path, name: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join(name)).unwrap()).unwrap()
}

#[test]
fn construct_convolve_twist_reduce_certify() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    assert_eq!(code(&mconv(d, &["construct", "--m", "4", "--r", "9", "-o", "t.json"])), 0);
    assert_eq!(read(d, "t.json")["n"], 2);

    assert_eq!(code(&mconv(d, &["convolve", "--lambda", "-1", "t.json", "-o", "c.json"])), 0);
    assert_eq!(read(d, "c.json")["n"], 14);

    let o = mconv(d, &["convolve", "--lambda", "1", "t.json"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));

    assert_eq!(code(&mconv(d, &["rank-one", "--pattern", "N1", "--r", "9", "-o", "n1.json"])), 0);
    assert_eq!(code(&mconv(d, &["tensor", "c.json", "n1.json", "-o", "tw.json"])), 0);
    assert_eq!(read(d, "tw.json")["n"], 14);

    assert_eq!(code(&mconv(d, &["reduce", "t.json", "--ell", "5", "-o", "t5.json"])), 0);
    assert_eq!(read(d, "t5.json")["field"]["kind"], "finite");

    // a rank-two dihedral-type tuple is not a certified SL case
    let o = mconv(d, &["certify", "t5.json", "-o", "cert.json"]);
    assert_eq!(code(&o), 1);
    assert_eq!(read(d, "cert.json")["verdict"], false);

    assert_eq!(code(&mconv(d, &["selfcheck", "t.json"])), 0);
    let o = mconv(d, &["analyze", "t5.json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["census"].as_array().unwrap().len(), 10);
}

#[test]
fn pipeline_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let o = mconv(d, &["pipeline", "--family", "1", "--m", "4", "--r", "9", "--q", "5", "--report", "r.json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = read(d, "r.json");
    assert_eq!(r["residual"]["certificate"]["verdict"], true);
    assert_eq!(r["rank"], 27);

    let o = mconv(d, &["pipeline", "--family", "1", "--m", "4", "--r", "8"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn malformed_input_is_an_error() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    assert_eq!(code(&mconv(d, &["construct", "--m", "4", "--r", "9", "-o", "t.json"])), 0);
    let text = fs::read_to_string(d.join("t.json")).unwrap();
    fs::write(d.join("cut.json"), &text[..text.len() / 2]).unwrap();
    let o = mconv(d, &["convolve", "--lambda", "-1", "cut.json"]);
    assert_eq!(code(&o), 2);

    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["entries"].as_array_mut().unwrap().pop();
    fs::write(d.join("short.json"), v.to_string()).unwrap();
    let o = mconv(d, &["convolve", "--lambda", "-1", "short.json"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("tuple.entries"));

    assert_eq!(code(&mconv(d, &["analyze", "missing.json"])), 2);
}
