use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cartesian"))
        .args(args)
        .env_remove("CARTESIAN_MAX_FIELD")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} exited with {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

fn schema(name: &str) -> jsonschema::JSONSchema {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("schemas")
        .join(format!("{name}.schema.json"));
    let doc: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::JSONSchema::compile(&doc).unwrap()
}

fn assert_valid(name: &str, doc: &Value) {
    let s = schema(name);
    let msgs: Vec<String> = match s.validate(doc) {
        Ok(()) => return,
        Err(errors) => errors.map(|e| e.to_string()).collect(),
    };
    panic!("{name} report violates its schema: {msgs:?}");
}

#[test]
fn params_examples() {
    let v = json(&[
        "params",
        "--q",
        "9",
        "--ext",
        "auto",
        "--sets",
        "full,full,full,full",
        "--d",
        "3",
    ]);
    assert_eq!(v["dimension"], 35);
    assert_eq!(v["min_distance"], 4374);
    assert_eq!(v["saturated"], false);
    assert_valid("params", &v);

    let v = json(&["params", "--q", "2", "--sets", "full,full", "--d", "1"]);
    assert_eq!(
        (
            v["length"].as_u64(),
            v["dimension"].as_u64(),
            v["min_distance"].as_u64()
        ),
        (Some(4), Some(3), Some(2))
    );

    let v = json(&[
        "params",
        "--q",
        "5",
        "--sets",
        "{1,2},subgroup:4",
        "--d",
        "0",
    ]);
    assert_eq!(v["dimension"], 1);
    assert_eq!(v["min_distance"], 8);
    assert_valid("params", &v);
}

#[test]
fn params_ext_and_singletons() {
    let v = json(&[
        "params",
        "--q",
        "4",
        "--ext",
        "2",
        "--sets",
        "{3},full,{0,1}",
        "--d",
        "1",
    ]);
    assert_eq!(v["cards"], serde_json::json!([2, 4]));
    assert_eq!(v["length"], 8);
    let v = json(&["params", "--q", "7", "--sets", "{3}*3", "--d", "2"]);
    assert_eq!(v["length"], 1);
    assert_eq!(v["saturated"], true);
}

#[test]
fn table_examples() {
    let md = stdout(&[
        "table", "--torus", "2,5,9", "--dmax", "13", "--format", "md",
    ]);
    let lines: Vec<&str> = md.lines().collect();
    assert_eq!(lines.len(), 5);
    assert_eq!(
        lines[3],
        "| dim | 4 | 9 | 16 | 25 | 35 | 45 | 55 | 65 | 74 | 81 | 86 | 89 | 90 |"
    );
    assert_eq!(
        lines[4],
        "| δ | 45 | 36 | 27 | 18 | 9 | 8 | 7 | 6 | 5 | 4 | 3 | 2 | 1 |"
    );

    let csv = stdout(&["table", "--q", "9", "--sets", "full×4", "--dmax", "5"]);
    assert_eq!(
        csv,
        "d,length,dimension,min_distance\n\
         1,6561,5,5832\n2,6561,15,5103\n3,6561,35,4374\n4,6561,70,3645\n5,6561,126,2916\n"
    );
    assert_eq!(
        stdout(&["table", "--q", "9", "--sets", "full*4", "--dmax", "5"]),
        csv
    );

    let v = json(&[
        "table", "--q", "2", "--sets", "full", "--dmax", "1", "--format", "json",
    ]);
    assert_eq!(v["rows"].as_array().unwrap().len(), 1);
    assert_eq!(v["rows"][0]["min_distance"], 1);
    assert_valid("table", &v);

    let v = json(&["table", "--torus", "2,5,9", "--format", "json"]);
    assert_eq!(v["v"], serde_json::json!([90, 36, 20]));
    assert_eq!(v["rows"].as_array().unwrap().len(), 13);
    assert_valid("table", &v);
}

#[test]
fn matrix_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    let p = path.to_str().unwrap();
    let out = stdout(&[
        "matrix",
        "--q",
        "2",
        "--sets",
        "full,full",
        "--d",
        "1",
        "--out",
        p,
    ]);
    assert!(out.is_empty());
    assert_eq!(
        fs::read_to_string(&path).unwrap(),
        "2 3 4\n1 1 1 1\n0 1 0 1\n0 0 1 1\n"
    );
    assert_eq!(
        fs::read_to_string(format!("{p}.monomials")).unwrap(),
        "0 0\n0 1\n1 0\n"
    );

    // at the regularity the matrix is square
    let text = stdout(&["matrix", "--q", "3", "--sets", "full,{0,1}", "--d", "3"]);
    assert!(text.starts_with("3 6 6\n"));

    let bad = run(&[
        "matrix",
        "--q",
        "2",
        "--sets",
        "full",
        "--d",
        "1",
        "--out",
        "/nonexistent-dir/m.txt",
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn verify_examples() {
    let v = json(&["verify", "--q", "3", "--sets", "full,full", "--dall"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["fully_verified"], true);
    assert_eq!(v["reports"].as_array().unwrap().len(), 4);
    assert_valid("verify", &v);

    let v = json(&[
        "verify",
        "--q",
        "9",
        "--sets",
        "full×4",
        "--d",
        "3",
        "--max-words",
        "1000",
    ]);
    let checks = v["reports"][0]["checks"].as_array().unwrap();
    let status = |name: &str| {
        checks.iter().find(|c| c["check"] == name).unwrap()["status"]
            .as_str()
            .unwrap()
            .to_string()
    };
    assert_eq!(status("generator_rank"), "pass");
    assert_eq!(status("rank_dimension"), "pass");
    assert_eq!(status("min_distance"), "skipped");
    assert_eq!(v["passed"], true);
    assert_eq!(v["fully_verified"], false);
    assert_valid("verify", &v);
}

#[test]
fn verify_modes_agree() {
    let base = json(&["verify", "--q", "4", "--sets", "{0,1,2},{1,3}", "--dall"]);
    let naive = json(&[
        "verify",
        "--q",
        "4",
        "--sets",
        "{0,1,2},{1,3}",
        "--dall",
        "--naive",
    ]);
    assert_eq!(base, naive);
    let confirm = json(&[
        "verify",
        "--q",
        "4",
        "--sets",
        "{0,1,2},{1,3}",
        "--dall",
        "--confirm-only",
    ]);
    assert_eq!(confirm["passed"], true);
}

#[test]
fn corrupted_fixture_fails() {
    let out = run(&[
        "verify",
        "--q",
        "3",
        "--sets",
        "full,full",
        "--d",
        "2",
        "--corrupt-fixture",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], false);
    let rank = v["reports"][0]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["check"] == "generator_rank")
        .unwrap()
        .clone();
    assert_eq!(rank["status"], "fail");
    assert!(rank["detail"]
        .as_str()
        .unwrap()
        .contains("combination of earlier rows"));
    assert_valid("verify", &v);
}

#[test]
fn construct_examples() {
    let v = json(&["construct", "--degrees", "2,5,9"]);
    assert_eq!(v["q"], 181);
    assert_eq!(v["v"], serde_json::json!([90, 36, 20]));
    assert_eq!(v["subgroups"][0]["elements"], serde_json::json!([1, 180]));
    assert_eq!(v["table"].as_array().unwrap().len(), 13);
    assert_valid("construct", &v);

    assert_eq!(json(&["construct", "--degrees", "2"])["q"], 3);
    assert_eq!(
        json(&["construct", "--degrees", "4,4"])["v"],
        serde_json::json!([1, 1])
    );
    assert_eq!(
        run(&["construct", "--degrees", "1,3"]).status.code(),
        Some(2)
    );

    // 1 mod 4: 5 is prime; 1 mod 8: 9 = 3^2 precedes the prime 17
    assert_eq!(json(&["construct", "--degrees", "8"])["q"], 17);
    let v = json(&["construct", "--degrees", "8", "--allow-prime-powers"]);
    assert_eq!(
        (v["q"].as_u64(), v["p"].as_u64(), v["e"].as_u64()),
        (Some(9), Some(3), Some(2))
    );
    assert_valid("construct", &v);
}

#[test]
fn usage_errors_exit_2() {
    let cases: &[&[&str]] = &[
        &["params", "--q", "6", "--sets", "full", "--d", "1"],
        &[
            "params", "--q", "4", "--ext", "1", "--sets", "full", "--d", "1",
        ],
        &["params", "--q", "5", "--sets", "{1,1}", "--d", "1"],
        &["params", "--q", "5", "--sets", "{5}", "--d", "1"],
        &["params", "--q", "5", "--sets", "{}", "--d", "1"],
        &["params", "--q", "5", "--sets", "subgroup:3", "--d", "1"],
        &["params", "--q", "5", "--sets", "full", "--d", "-1"],
        &["table", "--q", "5", "--sets", "full", "--dmax", "0"],
        &["verify", "--q", "5", "--sets", "full"],
        &["verify", "--q", "5", "--sets", "full", "--d", "1", "--dall"],
        &["bogus"],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn field_cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_cartesian"))
        .args(["construct", "--degrees", "2,5,9"])
        .env("CARTESIAN_MAX_FIELD", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_cartesian"))
        .args(["params", "--q", "121", "--sets", "full", "--d", "1"])
        .env("CARTESIAN_MAX_FIELD", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_cartesian"))
        .args(["params", "--q", "5", "--sets", "full", "--d", "1"])
        .env("CARTESIAN_MAX_FIELD", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_byte_stable() {
    let cases: &[&[&str]] = &[
        &["params", "--q", "9", "--sets", "full×4", "--d", "10"],
        &["table", "--torus", "2,5,9", "--format", "md"],
        &[
            "table",
            "--q",
            "8",
            "--sets",
            "units,{0,3,5}",
            "--format",
            "json",
        ],
        &["construct", "--degrees", "3,4,6"],
        &["verify", "--q", "4", "--sets", "full,{1,2}", "--dall"],
        &["matrix", "--q", "9", "--sets", "{0,4,8},units", "--d", "4"],
    ];
    for args in cases {
        let a = run(args);
        let b = run(args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
