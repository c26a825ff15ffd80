mod common;

use std::path::PathBuf;

use common::*;
use pdf_lwc::ciphers::CipherSuite;
use pdf_lwc::crypt::{decrypt_document, encrypt_document, read_security_params};
use pdf_lwc::fixtures::random_document;
use pdf_lwc::pdf::{parse_document, serialize_document};
use pdf_lwc::security::Credentials;

const FROZEN: usize = 10;

fn frozen_dir() -> PathBuf {
    data_dir().join("pypdf")
}

fn frozen_pair(i: usize) -> (PathBuf, PathBuf) {
    let d = frozen_dir();
    (d.join(format!("plain_{i}.pdf")), d.join(format!("pypdf_aes_{i}.pdf")))
}

/// Rewrites the pypdf-encrypted reference files. Needs python3 with pypdf.
#[test]
#[ignore]
fn regenerate_frozen_pypdf_files() {
    std::fs::create_dir_all(frozen_dir()).unwrap();
    for i in 0..FROZEN {
        let (plain, enc) = frozen_pair(i);
        std::fs::write(&plain, serialize_document(&random_document(1000 + i as u64, false))).unwrap();
        pypdf_encrypt(&plain, &enc, "user", "owner").unwrap();
    }
}

#[test]
fn frozen_pypdf_files_decrypt() {
    for i in 0..FROZEN {
        let (plain, enc) = frozen_pair(i);
        let plain = parse_document(&std::fs::read(plain).unwrap()).unwrap();
        let enc = parse_document(&std::fs::read(enc).unwrap()).unwrap();
        let (params, sel) = read_security_params(&enc).unwrap();
        assert_eq!((params.r, params.v, params.length_bits), (4, 4, 128));
        assert_eq!(sel.streams, Some(CipherSuite::Aes128));
        let original = streams(&plain);
        for pw in [&b"user"[..], b"owner"] {
            let dec = decrypt_document(&enc, pw, true).unwrap();
            let got = streams(&dec);
            assert!(!got.is_empty());
            assert!(got.iter().all(|s| original.contains(s)), "fixture {i}: stream not in the original");
            assert_eq!(info_strings(&dec), info_strings(&plain), "fixture {i}");
        }
        assert!(decrypt_document(&enc, b"wrong", true).is_err());
    }
}

#[test]
fn pypdf_reads_our_output() {
    if !pypdf_available() {
        eprintln!("python3 with pypdf not found; live interop skipped");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..3u64 {
        let doc = random_document(seed, false);
        let enc = encrypt_document(&doc, &Credentials::new("owner", "user"), -4, CipherSuite::Aes128, Some(seed)).unwrap();
        let path = dir.path().join(format!("ours_{seed}.pdf"));
        std::fs::write(&path, serialize_document(&enc)).unwrap();
        for pw in ["user", "owner"] {
            let view = pypdf_dump(&path, pw).unwrap();
            assert_eq!(view.streams, streams(&doc), "seed {seed}");
            assert_eq!(view.info, info_strings(&doc), "seed {seed}");
        }
        assert!(pypdf_dump(&path, "nope").is_err());
    }
}

#[test]
fn we_read_pypdf_output() {
    if !pypdf_available() {
        eprintln!("python3 with pypdf not found; live interop skipped");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..3u64 {
        let doc = random_document(seed, false);
        let plain = dir.path().join("plain.pdf");
        let enc_path = dir.path().join("enc.pdf");
        std::fs::write(&plain, serialize_document(&doc)).unwrap();
        pypdf_encrypt(&plain, &enc_path, "user", "owner").unwrap();
        let enc = parse_document(&std::fs::read(&enc_path).unwrap()).unwrap();
        let dec = decrypt_document(&enc, b"user", true).unwrap();
        let expected = pypdf_dump(&enc_path, "user").unwrap();
        assert_eq!(sorted(streams(&dec)), sorted(expected.streams));
        assert_eq!(info_strings(&dec), info_strings(&doc));
    }
}
