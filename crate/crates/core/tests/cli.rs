mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use srmk::code::LinearCode;
use srmk::decoder::decode;
use srmk::Mat;

fn srmk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_srmk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_fixture(dir: &Path, fx: &common::Fixture) -> (String, String) {
    let code = dir.join("code.txt");
    let y = dir.join("y.txt");
    fs::write(&code, fx.code.to_text()).unwrap();
    fs::write(&y, fx.y.to_text()).unwrap();
    (code.to_str().unwrap().to_owned(), y.to_str().unwrap().to_owned())
}

#[test]
fn decode_success_writes_codeword() {
    let dir = tempfile::tempdir().unwrap();
    let fx = common::example1();
    let (code, y) = write_fixture(dir.path(), &fx);
    let c_out = dir.path().join("c.txt");
    let e_out = dir.path().join("e.txt");
    let out = srmk(&[
        "decode",
        "--code",
        &code,
        "--input",
        &y,
        "--out",
        c_out.to_str().unwrap(),
        "--error-out",
        e_out.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(
        Mat::parse(&fx.field, &fs::read_to_string(c_out).unwrap()).unwrap(),
        fx.c
    );
    assert_eq!(
        Mat::parse(&fx.field, &fs::read_to_string(e_out).unwrap()).unwrap(),
        fx.e
    );
}

#[test]
fn decode_failure_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let (code, y) = write_fixture(dir.path(), &common::example2());
    let out = srmk(&["decode", "--code", &code, "--input", &y]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("support mismatch"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(srmk(&["decode"]).status.code(), Some(1));
    assert_eq!(
        srmk(&["decode", "--code", "/nonexistent", "--input", "/nonexistent"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        srmk(&["gen-code", "--q", "6", "--m", "1", "--partition", "2,2", "--k", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(srmk(&["--help"]).status.code(), Some(0));
}

#[test]
fn generate_encode_corrupt_decode() {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name).to_str().unwrap().to_owned();
    let run = |args: &[&str]| {
        let out = srmk(args);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    };
    run(&[
        "gen-code",
        "--q",
        "2",
        "--m",
        "3",
        "--partition",
        "2x4",
        "--k",
        "2",
        "--seed",
        "5",
        "--out",
        &p("code"),
    ]);
    run(&[
        "encode",
        "--code",
        &p("code"),
        "--s",
        "4",
        "--seed",
        "6",
        "--out",
        &p("c"),
    ]);
    run(&[
        "corrupt",
        "--code",
        &p("code"),
        "--input",
        &p("c"),
        "--t",
        "2",
        "--seed",
        "7",
        "--out",
        &p("y"),
        "--error-out",
        &p("e"),
    ]);
    let code = LinearCode::parse(&fs::read_to_string(p("code")).unwrap()).unwrap();
    let c = Mat::parse(code.field(), &fs::read_to_string(p("c")).unwrap()).unwrap();
    let y = Mat::parse(code.field(), &fs::read_to_string(p("y")).unwrap()).unwrap();
    assert!(code.contains(&c).unwrap());
    // the binary agrees with the library on the same inputs
    let lib = decode(&code, &y).unwrap();
    let out = srmk(&["decode", "--code", &p("code"), "--input", &p("y"), "--out", &p("dc")]);
    if lib.is_success() {
        assert_eq!(out.status.code(), Some(0));
        let dc = Mat::parse(code.field(), &fs::read_to_string(p("dc")).unwrap()).unwrap();
        assert_eq!(Some(dc), lib.codeword);
    } else {
        assert_eq!(out.status.code(), Some(2));
    }
}

#[test]
fn failure_bound_at_zero_weight() {
    let out = srmk(&[
        "bounds",
        "--kind",
        "failure-bound",
        "--q",
        "2",
        "--m",
        "2",
        "--partition",
        "2x5",
        "--t",
        "0",
        "--st-min",
        "1",
        "--st-max",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "st,bound_log_base10");
    assert_eq!(lines[1], "1,-inf");
}

#[test]
fn csv_schemas() {
    let text = |args: &[&str]| String::from_utf8(srmk(args).stdout).unwrap();
    let exact = text(&[
        "bounds",
        "--kind",
        "failure-exact",
        "--q",
        "2",
        "--m",
        "2",
        "--partition",
        "2x5",
        "--t",
        "4",
    ]);
    assert!(exact.starts_with("st,logprobability_base10\n0,"));
    assert_eq!(exact.lines().count(), 12);
    let cond = text(&[
        "bounds",
        "--kind",
        "condition",
        "--q",
        "2",
        "--m",
        "2",
        "--partition",
        "1x24",
        "--k",
        "8",
        "--t-min",
        "10",
        "--t-max",
        "11",
    ]);
    assert!(cond.starts_with("t,ps,sl,su,sa\n10,nan,"));
    let phi = text(&["phi", "--q", "2", "--partition", "1x3", "--t-max", "2"]);
    assert_eq!(phi, "t,phi,multiplications\n0,1,0\n1,3,2\n2,3,4\n");
}
