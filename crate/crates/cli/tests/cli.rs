use std::process::{Command, Output};

use serde_json::Value;

fn qmcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmcert"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn congruences_for_the_three_discriminants() {
    for (d, m, n) in [("6", 24, 6), ("10", 40, 10), ("22", 88, 26)] {
        let out = qmcert(&["congruences", "-d", d]);
        assert_eq!(out.status.code(), Some(0));
        let v = json(&out);
        assert_eq!(v["modulus"], m);
        assert_eq!(v["residues"].as_array().unwrap().len(), n);
    }
    assert_eq!(
        json(&qmcert(&["congruences", "-d", "6"]))["residues"],
        serde_json::json!([2, 5, 7, 11, 17, 23])
    );
}

#[test]
fn small_queries() {
    let v = json(&qmcert(&["hilbert", "-a", "-1", "-b", "3", "-v", "3"]));
    assert_eq!(v["symbol"], -1);
    let v = json(&qmcert(&["classnum", "-D", "-20"]));
    assert_eq!(v["class_number"], 2);
    let v = json(&qmcert(&["splitting", "-K", "q_zeta5", "-p", "11"]));
    assert_eq!(v["efg"], serde_json::json!([1, 1, 4]));
    let v = json(&qmcert(&["shimura-local", "-d", "6", "-p", "3"]));
    assert_eq!(v["local_points_qp"], false);
}

#[test]
fn certify_writes_a_certificate() {
    let dir = std::env::temp_dir().join(format!("qmcert-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cert.json");
    let out = qmcert(&["certify", "-d", "22", "-K", "q_zeta5", "-o", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["conclusion"]["kind"], "trivially_empty");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(qmcert(&["certify", "-d", "12", "-K", "q_zeta5"]).status.code(), Some(1));
    assert_eq!(
        qmcert(&["certify", "-d", "6", "-K", "no_such_field"]).status.code(),
        Some(1)
    );
    assert_eq!(qmcert(&["classnum", "-D", "-12"]).status.code(), Some(1));
    assert_eq!(qmcert(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(qmcert(&["--help"]).status.code(), Some(0));
}
