mod common;

use std::path::Path;
use std::process::{Command, Output};

use pdf_lwc::ciphers::CipherSuite;
use pdf_lwc::crypt::encrypt_document;
use pdf_lwc::fixtures::{sized_fixture, FixtureSize};
use pdf_lwc::pdf::{parse_document, serialize_document};
use pdf_lwc::security::Credentials;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pdf-lwc")).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn encrypt_decrypt_round_trip_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b, c) = (dir.path().join("a.pdf"), dir.path().join("b.pdf"), dir.path().join("c.pdf"));
    let doc = sized_fixture(FixtureSize::Small);
    std::fs::write(&a, serialize_document(&doc)).unwrap();

    for suite in CipherSuite::ALL {
        let o = bin(&["encrypt", "--in", s(&a), "--out", s(&b), "--cipher", suite.name(), "--user-pw", "u", "--owner-pw", "o", "--seed", "11"]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let lib = encrypt_document(&parse_document(&std::fs::read(&a).unwrap()).unwrap(), &Credentials::new("o", "u"), -4, suite, Some(11)).unwrap();
        assert_eq!(std::fs::read(&b).unwrap(), serialize_document(&lib));

        let o = bin(&["decrypt", "--in", s(&b), "--out", s(&c), "--password", "u"]);
        assert!(o.status.success());
        let back = parse_document(&std::fs::read(&c).unwrap()).unwrap();
        assert!(back.same_content(&doc));
    }
}

#[test]
fn wrong_password_exits_2_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b, c) = (dir.path().join("a.pdf"), dir.path().join("b.pdf"), dir.path().join("c.pdf"));
    std::fs::write(&a, serialize_document(&sized_fixture(FixtureSize::Small))).unwrap();
    assert!(bin(&["encrypt", "--in", s(&a), "--out", s(&b), "--cipher", "xoodyak", "--user-pw", "u"]).status.success());
    let o = bin(&["decrypt", "--in", s(&b), "--out", s(&c), "--password", "x"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: AUTH:"));
    assert!(!c.exists());
}

#[test]
fn inspect_encrypted_and_plain() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.pdf"), dir.path().join("b.pdf"));
    std::fs::write(&a, serialize_document(&sized_fixture(FixtureSize::Small))).unwrap();
    let o = bin(&["inspect", "--in", s(&a)]);
    assert!(String::from_utf8_lossy(&o.stdout).contains("encrypted: false"));
    assert!(bin(&["encrypt", "--in", s(&a), "--out", s(&b), "--cipher", "ascon128", "--seed", "1"]).status.success());
    let out = String::from_utf8(bin(&["inspect", "--in", s(&b), "--kv"]).stdout).unwrap();
    for line in ["encrypted=true", "v=4", "r=4", "length=128", "cfm=ASCON128", "p=-4", "p_hex=0xFFFFFFFC"] {
        assert!(out.lines().any(|l| l == line), "{line}\n{out}");
    }
}

#[test]
fn failure_codes() {
    let o = bin(&["encrypt", "--in", "x.pdf"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: USAGE:"));
    assert_eq!(bin(&["decrypt", "--in", "a", "--out", "b", "--seed", "3"]).status.code(), Some(1));
    assert_eq!(bin(&["inspect", "--in", "/nonexistent.pdf"]).status.code(), Some(3));

    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.pdf");
    std::fs::write(&junk, b"not a pdf").unwrap();
    let o = bin(&["inspect", "--in", s(&junk)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: PARSE:"));
}

#[test]
fn kat_subcommand() {
    let file = common::data_dir().join("ascon128_LWC_AEAD_KAT_128_128.txt");
    let o = bin(&["kat", "--cipher", "ascon128", "--file", s(&file)]);
    assert!(o.status.success());
    assert_eq!(String::from_utf8_lossy(&o.stdout), "suite=ascon128 total=1089 passed=1089\n");
    let o = bin(&["kat", "--cipher", "xoodyak", "--file", s(&file)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: KAT: first failure at Count = 1"));
}

#[test]
fn bench_small_run_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let args = ["bench", "--fixture", "small", "--warmup", "1", "--iters", "2", "--forks", "2", "--iteration-ms", "20"];
    let o = bin(&[&args[..], &["--report", "csv", "--out", s(&out)]].concat());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 7);
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",4")));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("verdict avgt:") && err.contains("verdict ss:"));

    let o = bin(&[&args[..], &["--mode", "avg", "--report", "plot", "--report-path", s(dir.path())]].concat());
    assert!(o.status.success());
    assert!(std::fs::read_to_string(dir.path().join("bench.svg")).unwrap().starts_with("<svg"));

    let o = bin(&["bench", "--fixture", "small", "--sizes"]);
    assert!(o.status.success());
    let sizes = String::from_utf8(o.stdout).unwrap();
    assert_eq!(sizes.lines().count(), 4);
    assert!(sizes.lines().skip(1).all(|l| l.ends_with(",true")));
}
