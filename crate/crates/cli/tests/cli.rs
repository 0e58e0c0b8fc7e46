use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn mfs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mfs"))
        .args(args)
        .env_remove("MFS_DEFAULT_DEGREE")
        .output()
        .expect("mfs runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn strings(v: &[&str]) -> Value {
    Value::from(v.to_vec())
}

#[test]
fn eval_boxcon_of_zeta() {
    let dir = tempfile::tempdir().unwrap();
    let z = write(dir.path(), "z.json", r#"["1", "1", "1", "1"]"#);
    let out = mfs(&["eval", "--op", "boxcon", "--lhs", &z, "--rhs", &z]);
    assert_eq!(stdout_json(&out), strings(&["1", "2", "5", "14"]));
}

#[test]
fn eval_s_l_of_zeta() {
    let dir = tempfile::tempdir().unwrap();
    let z = write(dir.path(), "z.json", r#"["1", "1", "1", "1", "1"]"#);
    let out = mfs(&["eval", "--op", "S_l", "--lhs", &z]);
    assert_eq!(stdout_json(&out), strings(&["1", "-1", "1", "-1", "1"]));
}

#[test]
fn eval_writes_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", r#"["1", "1", "0"]"#);
    let out_path = dir.path().join("out.json");
    let out = mfs(&[
        "eval",
        "--op",
        "mul_inverse",
        "--lhs",
        &a,
        "--output",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(out_path).unwrap()).unwrap();
    assert_eq!(v, strings(&["1", "-1", "1"]));
}

#[test]
fn eval_matrix_document() {
    let dir = tempfile::tempdir().unwrap();
    let gen = mfs(&["gen", "--algebra", "mat2", "--degree", "2", "--seed", "3"]);
    let f = write(dir.path(), "f.json", &String::from_utf8(gen.stdout).unwrap());
    let sigma = write(
        dir.path(),
        "sigma.json",
        &String::from_utf8(mfs(&["eval", "--op", "sigma", "--lhs", &f]).stdout).unwrap(),
    );
    let one = stdout_json(&mfs(&["eval", "--op", "mul", "--lhs", &f, "--rhs", &sigma]));
    assert_eq!(one["algebra"]["dim"], 2);
    let comps = one["components"].as_array().unwrap();
    assert_eq!(comps.len(), 1, "F F^-1 has only a constant term");
    assert_eq!(comps[0]["value"], strings(&["1", "0", "0", "1"]));
}

#[test]
fn compose_with_nonzero_constant_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.json", r#"["1", "1", "1"]"#);
    let g = write(dir.path(), "g.json", r#"["1", "1", "0"]"#);
    let out = mfs(&["eval", "--op", "compose", "--lhs", &f, "--rhs", &g]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn eval_argument_errors() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.json", r#"["1", "1"]"#);
    let bad = write(dir.path(), "bad.json", r#"{"algebra": {"kind": "scalar"}}"#);
    for args in [
        vec!["eval", "--op", "nope", "--lhs", &f],
        vec!["eval", "--op", "mul", "--lhs", &f],
        vec!["eval", "--op", "S_l", "--lhs", &f, "--rhs", &f],
        vec!["eval", "--op", "S_l", "--lhs", &bad],
        vec!["eval", "--op", "S_l", "--lhs", "/nonexistent/f.json"],
    ] {
        assert_eq!(mfs(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn convert_catalan_moments() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.json", r#"["1", "2", "5", "14"]"#);
    let out = mfs(&["convert", "moments-to-cumulants", "--input", &m]);
    assert_eq!(stdout_json(&out), strings(&["1", "1", "1", "1"]));
    let out = mfs(&[
        "convert",
        "s-transform",
        "--input",
        &write(dir.path(), "k.json", r#"["1", "1", "1", "1"]"#),
    ]);
    assert_eq!(stdout_json(&out), strings(&["1", "-1", "1", "-1"]));
}

#[test]
fn convert_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let k = write(dir.path(), "k.json", r#"["2/3", "-1", "1/5", "7", "0", "3/2"]"#);
    let m_path = dir.path().join("m.json");
    let out = mfs(&[
        "convert",
        "cumulants-to-moments",
        "--input",
        &k,
        "--output",
        m_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let back = mfs(&["convert", "moments-to-cumulants", "--input", m_path.to_str().unwrap()]);
    assert_eq!(stdout_json(&back), strings(&["2/3", "-1", "1/5", "7", "0", "3/2"]));
    assert_eq!(mfs(&["convert", "sideways", "--input", &k]).status.code(), Some(2));
}

#[test]
fn gen_respects_class_and_seed() {
    let a = stdout_json(&mfs(&[
        "gen",
        "--class",
        "gdif",
        "--algebra",
        "mat3",
        "--degree",
        "2",
        "--seed",
        "5",
    ]));
    let b = stdout_json(&mfs(&[
        "gen",
        "--class",
        "gdif",
        "--algebra",
        "mat3",
        "--degree",
        "2",
        "--seed",
        "5",
    ]));
    assert_eq!(a, b);
    assert_eq!(a["algebra"]["dim"], 3);
    assert_eq!(a["degree"], 2);
    // no constant term in the diffeomorphism class
    let c0 = &a["components"][0];
    assert_eq!(c0["n"], 0);
    assert!(c0["value"].as_array().unwrap().iter().all(|x| x == "0"));
    let c = stdout_json(&mfs(&[
        "gen",
        "--class",
        "gdif",
        "--algebra",
        "mat3",
        "--degree",
        "2",
        "--seed",
        "6",
    ]));
    assert_ne!(a, c);
}

#[test]
fn default_degree_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_mfs"))
        .args(["gen", "--algebra", "scalar"])
        .env("MFS_DEFAULT_DEGREE", "6")
        .output()
        .unwrap();
    assert_eq!(stdout_json(&out)["degree"], 6);
    let out = Command::new(env!("CARGO_BIN_EXE_mfs"))
        .args(["gen", "--algebra", "scalar", "--degree", "2"])
        .env("MFS_DEFAULT_DEGREE", "6")
        .output()
        .unwrap();
    assert_eq!(stdout_json(&out)["degree"], 2);
    assert_eq!(stdout_json(&mfs(&["gen", "--algebra", "scalar"]))["degree"], 4);
}

#[test]
fn check_reports_are_deterministic() {
    let args = [
        "check",
        "--suite",
        "series-laws",
        "--degree",
        "3",
        "--trials",
        "3",
        "--seed",
        "11",
    ];
    let a = mfs(&args);
    let b = mfs(&args);
    assert_eq!(a.status.code(), Some(0));
    let parse = |o: &Output| -> Vec<Value> {
        let mut lines: Vec<Value> = String::from_utf8_lossy(&o.stdout)
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        // wall-clock time is the only field allowed to differ
        lines.last_mut().unwrap().as_object_mut().unwrap().remove("elapsed_ms");
        lines
    };
    let lines = parse(&a);
    assert_eq!(lines, parse(&b));
    let summary = lines.last().unwrap();
    assert_eq!(summary["failed"], 0);
    assert_eq!(summary["identities"], lines.len() - 1);
    assert!(lines[..lines.len() - 1].iter().all(|l| l["status"] == "pass"));
}

#[test]
fn scalar_group_laws_note_the_collapse() {
    let out = mfs(&["check", "--suite", "group-laws", "--algebra", "scalar", "--trials", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let summary: Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert!(summary["notes"][0].as_str().unwrap().contains("commutative"));
}

#[test]
fn check_configuration_errors() {
    assert_eq!(mfs(&["check", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(
        mfs(&["check", "--suite", "oracle", "--trials", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        mfs(&["check", "--suite", "oracle", "--fixtures", "/nonexistent"])
            .status
            .code(),
        Some(2)
    );
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "broken.json",
        r#"{"name": "broken", "suite": "oracle", "op": "mul"}"#,
    );
    let out = mfs(&["check", "--suite", "oracle", "--fixtures", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failing_fixture_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "wrong.json",
        r#"{"name": "wrong", "suite": "oracle", "op": "boxcon",
            "lhs": ["1", "1", "1"], "rhs": ["1", "1", "1"], "expected": ["1", "2", "6"]}"#,
    );
    let out = mfs(&["check", "--suite", "oracle", "--fixtures", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    let line = text.lines().find(|l| l.contains("fixture:wrong")).unwrap();
    let v: Value = serde_json::from_str(line).unwrap();
    assert_eq!(v["status"], "fail");
    assert_eq!(v["failures"][0]["component"], 2);
    assert_eq!(v["failures"][0]["lhs"], strings(&["5"]));
    assert_eq!(v["failures"][0]["rhs"], strings(&["6"]));
}
