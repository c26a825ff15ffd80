//! Document-level encryption and decryption: strings and streams are
//! encrypted in place with per-object keys and an `Encrypt` dictionary is
//! installed next to them.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::ciphers::{CipherError, CipherSuite};
use crate::pdf::{collect_encryption_targets, Dictionary, PdfDocument, PdfValue, TargetKind};
use crate::security::{authenticate, derive_object_key, Credentials, SecurityError, SecurityParams, REVISION, VERSION};

/// Name under which the single crypt filter is registered in `CF`.
pub const CRYPT_FILTER_NAME: &str = "StdCF";

#[derive(Debug, PartialEq, Eq, thiserror::Error)]
pub enum CryptError {
    #[error("document is already encrypted")]
    AlreadyEncrypted,
    #[error("document is not encrypted")]
    NotEncrypted,
    #[error("password rejected")]
    WrongPassword,
    #[error("unsupported security handler: {0}")]
    UnsupportedHandler(String),
    #[error("unsupported security handler revision {0}")]
    UnsupportedRevision(i64),
    #[error("encrypted payload of {len} bytes is shorter than the {min}-byte minimum")]
    TooShort { len: usize, min: usize },
    #[error("authentication tag mismatch")]
    TagMismatch,
    #[error("invalid padding")]
    BadPadding,
}

impl From<SecurityError> for CryptError {
    fn from(e: SecurityError) -> Self {
        match e {
            SecurityError::UnsupportedRevision(r) => CryptError::UnsupportedRevision(r),
            other => CryptError::UnsupportedHandler(other.to_string()),
        }
    }
}

/// Smallest valid frame: AES needs the IV and one block, the AEADs the
/// nonce and the tag.
pub fn min_frame_len(suite: CipherSuite) -> usize {
    match suite {
        CipherSuite::Aes128 => 32,
        _ => suite.nonce_len() + suite.tag_len(),
    }
}

/// `iv ‖ ct` for AES, `nonce ‖ ct ‖ tag` for the AEADs (empty AD).
pub fn encrypt_payload(object_key: &[u8; 16], suite: CipherSuite, rng: &mut impl RngCore, plaintext: &[u8]) -> Vec<u8> {
    let mut nonce = [0u8; 16];
    rng.fill_bytes(&mut nonce);
    let (ct, tag) = suite.encrypt(object_key, &nonce, &[], plaintext);
    let mut out = Vec::with_capacity(16 + ct.len() + tag.len());
    out.extend_from_slice(&nonce);
    out.extend_from_slice(&ct);
    out.extend_from_slice(&tag);
    out
}

pub fn decrypt_payload(
    object_key: &[u8; 16],
    suite: CipherSuite,
    framed: &[u8],
    verify_tag: bool,
) -> Result<Vec<u8>, CryptError> {
    let min = min_frame_len(suite);
    if framed.len() < min {
        return Err(CryptError::TooShort { len: framed.len(), min });
    }
    let (nonce, rest) = framed.split_at(16);
    let (ct, tag) = rest.split_at(rest.len() - suite.tag_len());
    suite
        .decrypt(object_key, nonce.try_into().expect("16 bytes"), &[], ct, tag, verify_tag)
        .map_err(|e| match e {
            CipherError::TagMismatch => CryptError::TagMismatch,
            _ => CryptError::BadPadding,
        })
}

pub fn build_encrypt_dict(params: &SecurityParams, suite: CipherSuite) -> PdfValue {
    let filter: Dictionary = [
        ("Type", PdfValue::name("CryptFilter")),
        ("CFM", PdfValue::name(suite.cfm_name())),
        ("AuthEvent", PdfValue::name("DocOpen")),
        ("Length", PdfValue::Integer(suite.key_len() as i64)),
    ]
    .into_iter()
    .collect();
    let cf: Dictionary = [(CRYPT_FILTER_NAME, PdfValue::Dictionary(filter))].into_iter().collect();
    let mut d: Dictionary = [
        ("Filter", PdfValue::name("Standard")),
        ("V", PdfValue::Integer(params.v)),
        ("R", PdfValue::Integer(params.r)),
        ("Length", PdfValue::Integer(params.length_bits as i64)),
        ("CF", PdfValue::Dictionary(cf)),
        ("StmF", PdfValue::name(CRYPT_FILTER_NAME)),
        ("StrF", PdfValue::name(CRYPT_FILTER_NAME)),
        ("O", PdfValue::LiteralString(params.o.to_vec())),
        ("U", PdfValue::LiteralString(params.u.to_vec())),
        ("P", PdfValue::Integer(params.p as i64)),
    ]
    .into_iter()
    .collect();
    if !params.encrypt_metadata {
        d.set("EncryptMetadata", PdfValue::Boolean(false));
    }
    PdfValue::Dictionary(d)
}

fn rng_from(seed: Option<u64>) -> ChaCha20Rng {
    match seed {
        Some(s) => ChaCha20Rng::seed_from_u64(s),
        None => ChaCha20Rng::from_entropy(),
    }
}

fn object_key(file_key: &[u8], num: u32, gen: u16, suite: CipherSuite) -> Result<[u8; 16], CryptError> {
    derive_object_key(file_key, num, gen, suite)
        .try_into()
        .map_err(|k: Vec<u8>| CryptError::UnsupportedHandler(format!("{}-byte object key, need 16", k.len())))
}

fn is_metadata_stream(v: &PdfValue) -> bool {
    matches!(v, PdfValue::Stream(s) if s.dict.has_name(b"Type", b"Metadata"))
}

/// Encrypts every eligible string and stream with `suite` and installs the
/// `Encrypt` dictionary. `ID[0]` is kept (or created), `ID[1]` is redrawn.
pub fn encrypt_document(
    doc: &PdfDocument,
    creds: &Credentials,
    permissions: i32,
    suite: CipherSuite,
    rng_seed: Option<u64>,
) -> Result<PdfDocument, CryptError> {
    if doc.is_encrypted() {
        return Err(CryptError::AlreadyEncrypted);
    }
    let mut rng = rng_from(rng_seed);
    let mut out = doc.clone();

    let mut second = vec![0u8; 16];
    rng.fill_bytes(&mut second);
    let first = match doc.file_id() {
        Some((first, _)) => first.to_vec(),
        None => {
            let mut first = vec![0u8; 16];
            rng.fill_bytes(&mut first);
            first
        }
    };

    let params = SecurityParams::derive(creds, permissions, &first, suite.key_bits())?;

    for t in collect_encryption_targets(doc) {
        let key = object_key(&params.file_encryption_key, t.owner.num, t.owner.gen, suite)?;
        let slot = out.value_at_mut(&t.location).expect("target located in a clone");
        match (t.kind, slot) {
            (TargetKind::Stream, PdfValue::Stream(s)) => {
                let framed = encrypt_payload(&key, suite, &mut rng, &s.data);
                s.set_data(framed);
            }
            (TargetKind::String, v) => {
                let bytes = v.as_string_bytes().expect("string target");
                *v = PdfValue::HexString(encrypt_payload(&key, suite, &mut rng, bytes));
            }
            _ => unreachable!("target kind matches its value"),
        }
    }

    let encrypt = out.add_object(build_encrypt_dict(&params, suite));
    out.trailer.dict.set("Encrypt", PdfValue::Reference(encrypt));
    out.set_file_id(first, second);
    Ok(out)
}

/// Which filter applies to strings and streams; `None` means Identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FilterSelection {
    pub streams: Option<CipherSuite>,
    pub strings: Option<CipherSuite>,
}

/// Reads and validates the `Encrypt` dictionary of `doc`.
pub fn read_security_params(doc: &PdfDocument) -> Result<(SecurityParams, FilterSelection), CryptError> {
    if !doc.is_encrypted() {
        return Err(CryptError::NotEncrypted);
    }
    let d = doc.encrypt_dict().ok_or_else(|| CryptError::UnsupportedHandler("Encrypt is not a dictionary".into()))?;
    if !d.has_name(b"Filter", b"Standard") {
        return Err(CryptError::UnsupportedHandler("Filter is not Standard".into()));
    }
    let int = |k: &[u8]| d.get(k).and_then(|v| doc.resolve(v)).and_then(PdfValue::as_i64);
    let r = int(b"R").ok_or_else(|| CryptError::UnsupportedHandler("missing R".into()))?;
    if r != REVISION {
        return Err(CryptError::UnsupportedRevision(r));
    }
    let v = int(b"V").unwrap_or(0);
    if v != VERSION {
        return Err(CryptError::UnsupportedHandler(format!("V = {v}")));
    }
    let length_bits = int(b"Length").unwrap_or(128);
    if length_bits != 128 {
        return Err(CryptError::UnsupportedHandler(format!("Length = {length_bits}")));
    }
    let p = int(b"P").ok_or_else(|| CryptError::UnsupportedHandler("missing P".into()))?;
    // Some writers store P as the unsigned 32-bit pattern.
    let p = if (i32::MIN as i64..=u32::MAX as i64).contains(&p) {
        p as u32 as i32
    } else {
        return Err(CryptError::UnsupportedHandler(format!("P = {p}")));
    };
    let entry32 = |k: &[u8]| -> Result<[u8; 32], CryptError> {
        let s = d.get(k).and_then(|v| doc.resolve(v)).and_then(PdfValue::as_string_bytes);
        match s {
            Some(b) if b.len() >= 32 => Ok(b[..32].try_into().expect("32 bytes")),
            _ => Err(CryptError::UnsupportedHandler(format!("{} is not a 32-byte string", String::from_utf8_lossy(k)))),
        }
    };
    let encrypt_metadata = !matches!(d.get(b"EncryptMetadata"), Some(PdfValue::Boolean(false)));

    let filter = |key: &[u8]| -> Result<Option<CipherSuite>, CryptError> {
        let name = match d.get(key) {
            None => return Ok(None),
            Some(v) => v.as_name().ok_or_else(|| CryptError::UnsupportedHandler("filter name expected".into()))?,
        };
        if name == b"Identity" {
            return Ok(None);
        }
        let cfm = d
            .get(b"CF")
            .and_then(|v| doc.resolve(v))
            .and_then(PdfValue::as_dict)
            .and_then(|cf| cf.get(name))
            .and_then(|v| doc.resolve(v))
            .and_then(PdfValue::as_dict)
            .and_then(|f| f.get(b"CFM"))
            .and_then(PdfValue::as_name)
            .ok_or_else(|| CryptError::UnsupportedHandler(format!("no CFM for {}", String::from_utf8_lossy(name))))?;
        CipherSuite::from_cfm_name(cfm)
            .map(Some)
            .ok_or_else(|| CryptError::UnsupportedHandler(format!("CFM {}", String::from_utf8_lossy(cfm))))
    };
    let selection = FilterSelection { streams: filter(b"StmF")?, strings: filter(b"StrF")? };

    let file_id_0 = doc.file_id().map(|(a, _)| a.to_vec()).unwrap_or_default();
    let params = SecurityParams {
        r,
        v,
        length_bits: length_bits as u32,
        o: entry32(b"O")?,
        u: entry32(b"U")?,
        p,
        file_id_0,
        file_encryption_key: Vec::new(),
        encrypt_metadata,
    };
    Ok((params, selection))
}

/// Authenticates `password`, decrypts every eligible payload and removes the
/// `Encrypt` dictionary.
pub fn decrypt_document(doc: &PdfDocument, password: &[u8], verify_tag: bool) -> Result<PdfDocument, CryptError> {
    let (params, selection) = read_security_params(doc)?;
    let file_key = authenticate(password, &params).key().ok_or(CryptError::WrongPassword)?.to_vec();

    let mut out = doc.clone();
    for t in collect_encryption_targets(doc) {
        let suite = match t.kind {
            TargetKind::Stream => selection.streams,
            TargetKind::String => selection.strings,
        };
        let Some(suite) = suite else { continue };
        let slot = out.value_at_mut(&t.location).expect("target located in a clone");
        if !params.encrypt_metadata && is_metadata_stream(slot) {
            continue;
        }
        let key = object_key(&file_key, t.owner.num, t.owner.gen, suite)?;
        match slot {
            PdfValue::Stream(s) => {
                let pt = decrypt_payload(&key, suite, &s.data, verify_tag)?;
                s.set_data(pt);
            }
            v => {
                let bytes = v.as_string_bytes_mut().expect("string target");
                *bytes = decrypt_payload(&key, suite, bytes, verify_tag)?;
            }
        }
    }

    if let Some(id) = out.trailer.dict.remove(b"Encrypt").and_then(|v| v.as_reference()) {
        out.objects.remove(&id.num);
    }
    Ok(out)
}
