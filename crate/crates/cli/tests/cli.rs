use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

fn wzcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wzcert")).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn fact1_rejects_order_zero() {
    let out = wzcert(&["fact1", "--order", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = wzcert(&["fact1", "--order", "3"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.is_object());
}

#[test]
fn stored_certificate_verifies_and_tampering_is_caught() {
    let out = wzcert(&["verify-cert", s(&fixture("cert.json"))]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let dir = tempfile::tempdir().unwrap();
    let mut j: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(fixture("cert.json")).unwrap()).unwrap();
    j["G1"][0]["coeff"] = "12345".into();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&j).unwrap()).unwrap();
    let out = wzcert(&["verify-cert", s(&bad)]);
    assert_ne!(out.status.code(), Some(0));
}

#[test]
fn csv_table_reloads_for_square_extraction() {
    let dir = tempfile::tempdir().unwrap();
    let out = wzcert(&["expand", "--nmax", "6", "--format", "csv", "--out", s(dir.path())]);
    assert!(out.status.success());
    let csv = dir.path().join("table_B.csv");
    assert!(std::fs::read_to_string(&csv).unwrap().starts_with("# vars=c"));
    let out = wzcert(&["extract-squares", "--table", s(&csv)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let zeros = v["patterns"]["zero_entries"].as_u64().unwrap() as usize;
    assert_eq!(v["certificates"].as_array().unwrap().len() + zeros, 28);
}

#[test]
fn bad_exponent_is_a_usage_error() {
    assert_eq!(wzcert(&["expand", "--exponent", "2"]).status.code(), Some(2));
}

#[test]
fn recurrence_tools_chain() {
    let dir = tempfile::tempdir().unwrap();
    let d = s(dir.path());
    let out = wzcert(&["rec2-check", "--cert", s(&fixture("cert.json")), "--cert-k0", s(&fixture("cert_k0.json")), "--out", d]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("rec2.json")).unwrap()).unwrap();
    assert_eq!(v["k0_certificate_agrees"], true);
    assert_eq!(v["windows_failed"].as_array().unwrap().len(), 0);

    let rec = dir.path().join("fib.json");
    std::fs::write(
        &rec,
        r#"{"order":2,"vars":["n"],"coeffs":[[{"coeff":"1","exps":[0]}],[{"coeff":"1","exps":[0]}],[{"coeff":"-1","exps":[0]}]],"status":"proved"}"#,
    )
    .unwrap();
    let out = wzcert(&["unroll", s(&rec), "--initials", "0;1", "--n-end", "10", "--format", "csv"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.ends_with("10,55\n"), "{text}");
    let out = wzcert(&["symsquare", s(&rec), "--compare", s(&rec)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn prove_fact2_with_stored_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let out = wzcert(&[
        "prove-fact2",
        "--cert",
        s(&fixture("cert.json")),
        "--cert-k0",
        s(&fixture("cert_k0.json")),
        "--out",
        s(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["report.json", "timings.json", "cert.json", "rec2.json", "squares.json", "table_B.json"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
}
