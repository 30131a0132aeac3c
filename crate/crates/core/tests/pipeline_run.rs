use std::path::PathBuf;

use wzcert::holonomic::{Recurrence, RecurrenceJson};
use wzcert::pipeline::{run_prove_fact2, write_outputs, Config, StepStatus};
use wzcert::tables::{CoeffTable, TableJson};
use wzcert::wz::{Certificate, CertificateJson};

fn fixture(name: &str) -> Certificate {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    let j: CertificateJson = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    Certificate::from_json(&j).unwrap()
}

fn config() -> Config {
    Config { certificate: Some(fixture("cert.json")), certificate_k0: Some(fixture("cert_k0.json")), ..Config::default() }
}

#[test]
fn stored_certificates_prove_every_column() {
    let (report, art) = run_prove_fact2(&config());
    assert!(report.success(), "{:?}", report.failed_steps());
    assert_eq!(report.exit_code(), 0);
    for k in 0..=3 {
        let s = report.step(&format!("initials_matched[k={k}]")).unwrap();
        assert_eq!(s.status, StepStatus::Proved, "{}", s.detail);
        assert_eq!(report.step(&format!("rec_guessed[k={k}]")).unwrap().status, StepStatus::Conjectured);
    }
    assert_eq!(report.step("cert_verified").unwrap().status, StepStatus::Proved);
    assert!(art.files.contains_key("rec2.json"));
    let all = art.squares.unwrap().to_json();
    assert!(!report.square_certificates.is_empty());
    assert!(report.square_certificates.iter().all(|c| all.contains(c)));
}

#[test]
fn reports_are_deterministic_and_artifacts_reload() {
    let (r1, a1) = run_prove_fact2(&config());
    let (r2, _) = run_prove_fact2(&config());
    assert_eq!(r1.to_json_string().unwrap(), r2.to_json_string().unwrap());

    let dir = tempfile::tempdir().unwrap();
    write_outputs(dir.path(), &r1, &a1).unwrap();
    let read = |f: &str| std::fs::read_to_string(dir.path().join(f)).unwrap();
    assert_eq!(read("report.json"), r1.to_json_string().unwrap());

    let b: TableJson = serde_json::from_str(&read("table_B.json")).unwrap();
    assert_eq!(&CoeffTable::from_json(&b).unwrap(), a1.b.as_ref().unwrap());
    let rec: RecurrenceJson = serde_json::from_str(&read("rec2.json")).unwrap();
    assert_eq!(&Recurrence::from_json(&rec).unwrap(), a1.rec2.as_ref().unwrap());
    let cert: CertificateJson = serde_json::from_str(&read("cert.json")).unwrap();
    assert_eq!(&Certificate::from_json(&cert).unwrap(), a1.certificate.as_ref().unwrap());
}

#[test]
fn tiny_range_fails_at_guessing() {
    let cfg = Config { n_max: 2, guess_n_max: 2, ..config() };
    let (report, _) = run_prove_fact2(&cfg);
    assert_eq!(report.exit_code(), 1);
    let s = report.step("rec_guessed[k=0]").unwrap();
    assert_eq!(s.status, StepStatus::Failed);
    assert!(s.detail.contains("insufficient data"), "{}", s.detail);
    assert_eq!(report.step("initials_matched[k=0]").unwrap().status, StepStatus::Skipped);
}
