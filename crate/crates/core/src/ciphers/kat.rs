//! Runner for NIST LWC AEAD known-answer files.
//!
//! Records are blocks of `Count`, `Key`, `Nonce`, `PT`, `AD` and `CT` lines
//! separated by blank lines; `CT` holds the ciphertext followed by the tag.

use super::{CipherError, CipherSuite};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KatRecord {
    pub count: u64,
    pub key: Vec<u8>,
    pub nonce: Vec<u8>,
    pub pt: Vec<u8>,
    pub ad: Vec<u8>,
    pub ct: Vec<u8>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KatReport {
    pub total: usize,
    pub passed: usize,
    /// `Count` of the first record that failed in either direction.
    pub first_failure: Option<u64>,
}

impl KatReport {
    pub fn all_passed(&self) -> bool {
        self.total > 0 && self.passed == self.total
    }
}

pub fn parse_kat(text: &[u8]) -> Result<Vec<KatRecord>, CipherError> {
    let text = std::str::from_utf8(text).map_err(|_| CipherError::MalformedKatFile("not UTF-8".into()))?;
    let mut records = Vec::new();
    let mut fields: [Option<String>; 6] = Default::default();
    let names = ["Count", "Key", "Nonce", "PT", "AD", "CT"];

    let mut flush = |fields: &mut [Option<String>; 6], line_no: usize| -> Result<(), CipherError> {
        if fields.iter().all(Option::is_none) {
            return Ok(());
        }
        let mut take = |i: usize| {
            fields[i]
                .take()
                .ok_or_else(|| CipherError::MalformedKatFile(format!("record ending at line {line_no} lacks {}", names[i])))
        };
        let count = take(0)?;
        let count = count
            .parse::<u64>()
            .map_err(|_| CipherError::MalformedKatFile(format!("bad Count '{count}' near line {line_no}")))?;
        let mut hexfield = |i: usize| -> Result<Vec<u8>, CipherError> {
            let v = take(i)?;
            hex::decode(&v)
                .map_err(|e| CipherError::MalformedKatFile(format!("{} of Count {count}: {e}", names[i])))
        };
        let key = hexfield(1)?;
        let nonce = hexfield(2)?;
        let pt = hexfield(3)?;
        let ad = hexfield(4)?;
        let ct = hexfield(5)?;
        records.push(KatRecord { count, key, nonce, pt, ad, ct });
        Ok(())
    };

    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        last_line = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            flush(&mut fields, last_line)?;
            continue;
        }
        let (name, value) = line
            .split_once('=')
            .ok_or_else(|| CipherError::MalformedKatFile(format!("line {last_line}: expected 'Name = value'")))?;
        let name = name.trim();
        let slot = names
            .iter()
            .position(|n| *n == name)
            .ok_or_else(|| CipherError::MalformedKatFile(format!("line {last_line}: unknown field '{name}'")))?;
        if fields[slot].is_some() {
            return Err(CipherError::MalformedKatFile(format!("line {last_line}: duplicate {name}")));
        }
        fields[slot] = Some(value.trim().to_string());
    }
    flush(&mut fields, last_line)?;

    if records.is_empty() {
        return Err(CipherError::MalformedKatFile("no records".into()));
    }
    Ok(records)
}

fn check_record(suite: CipherSuite, rec: &KatRecord) -> bool {
    let (Ok(key), Ok(nonce)) = (<[u8; 16]>::try_from(rec.key.as_slice()), <[u8; 16]>::try_from(rec.nonce.as_slice()))
    else {
        return false;
    };
    let (ct, tag) = suite.encrypt(&key, &nonce, &rec.ad, &rec.pt);
    let mut joined = ct;
    joined.extend_from_slice(&tag);
    if joined != rec.ct {
        return false;
    }
    if rec.ct.len() < suite.tag_len() {
        return false;
    }
    let (body, tag) = rec.ct.split_at(rec.ct.len() - suite.tag_len());
    matches!(suite.decrypt(&key, &nonce, &rec.ad, body, tag, true), Ok(pt) if pt == rec.pt)
}

/// Checks every record in both directions.
pub fn run_kat_file(suite: CipherSuite, kat_text: &[u8]) -> Result<KatReport, CipherError> {
    let records = parse_kat(kat_text)?;
    let mut report = KatReport { total: records.len(), ..Default::default() };
    for rec in &records {
        if check_record(suite, rec) {
            report.passed += 1;
        } else if report.first_failure.is_none() {
            report.first_failure = Some(rec.count);
        }
    }
    Ok(report)
}

/// FIPS-197 appendix C.1 example plus `round_trips` random CBC round trips.
/// Record 0 is the example vector; record i > 0 is round trip i.
pub fn aes128_self_test(round_trips: usize, seed: u64) -> KatReport {
    use rand::{Rng, RngCore, SeedableRng};

    let mut report = KatReport { total: round_trips + 1, ..Default::default() };
    let mut outcome = |count: u64, ok: bool| {
        if ok {
            report.passed += 1;
        } else if report.first_failure.is_none() {
            report.first_failure = Some(count);
        }
    };
    let key: [u8; 16] = std::array::from_fn(|i| i as u8);
    let pt: [u8; 16] = std::array::from_fn(|i| (i as u8) * 0x11);
    let ct = super::aes128_block_encrypt(&super::AesContext::new(&key), &pt);
    outcome(0, hex::encode(ct) == "69c4e0d86a7b0430d8cdb78070b4c55a");

    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
    for i in 1..=round_trips {
        let (mut k, mut iv) = ([0u8; 16], [0u8; 16]);
        rng.fill_bytes(&mut k);
        rng.fill_bytes(&mut iv);
        let mut msg = vec![0u8; rng.gen_range(0..96)];
        rng.fill_bytes(&mut msg);
        let ct = super::aes128_cbc_encrypt(&k, &iv, &msg);
        let ok = ct.len().is_multiple_of(16) && ct.len() > msg.len() && matches!(super::aes128_cbc_decrypt(&k, &iv, &ct), Ok(p) if p == msg);
        outcome(i as u64, ok);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aes_self_test_passes() {
        let r = aes128_self_test(1000, 1);
        assert_eq!(r, KatReport { total: 1001, passed: 1001, first_failure: None });
    }

    fn record_text(suite: CipherSuite, count: u64, pt: &[u8], ad: &[u8]) -> String {
        let key: [u8; 16] = std::array::from_fn(|i| i as u8);
        let (ct, tag) = suite.encrypt(&key, &key, ad, pt);
        format!(
            "Count = {count}\nKey = {}\nNonce = {}\nPT = {}\nAD = {}\nCT = {}{}\n\n",
            hex::encode_upper(key),
            hex::encode_upper(key),
            hex::encode_upper(pt),
            hex::encode_upper(ad),
            hex::encode_upper(ct),
            hex::encode_upper(tag)
        )
    }

    #[test]
    fn parses_and_runs_self_generated_records() {
        let text = record_text(CipherSuite::Ascon128, 1, b"", b"") + &record_text(CipherSuite::Ascon128, 2, b"abc", b"x");
        let report = run_kat_file(CipherSuite::Ascon128, text.as_bytes()).unwrap();
        assert_eq!(report, KatReport { total: 2, passed: 2, first_failure: None });
        // Same file checked against a different suite fails on the first record.
        let report = run_kat_file(CipherSuite::Xoodyak, text.as_bytes()).unwrap();
        assert_eq!(report.first_failure, Some(1));
    }

    #[test]
    fn missing_field_is_malformed() {
        let text = "Count = 1\nKey = 00\nNonce = 00\nPT = \nAD = \n\n";
        assert!(matches!(parse_kat(text.as_bytes()), Err(CipherError::MalformedKatFile(_))));
    }

    #[test]
    fn bad_hex_is_malformed() {
        let text = "Count = 1\nKey = 0G\nNonce = 00\nPT = \nAD = \nCT = 00\n";
        assert!(matches!(parse_kat(text.as_bytes()), Err(CipherError::MalformedKatFile(_))));
    }

    #[test]
    fn empty_file_is_malformed() {
        assert!(matches!(parse_kat(b"\n\n"), Err(CipherError::MalformedKatFile(_))));
    }
}
