use crate::ciphers::CipherSuite;
use crate::crypt::{encrypt_document, CryptError};
use crate::pdf::{collect_encryption_targets, serialize_document, PdfDocument, PdfValue, TargetKind};
use crate::security::{Credentials, DEFAULT_PERMISSIONS};

/// Bytes a payload of `plain_len` bytes grows by when framed for `suite`.
pub fn framing_overhead(suite: CipherSuite, plain_len: usize) -> usize {
    if suite.is_aead() {
        16 + suite.tag_len()
    } else {
        16 + (16 - plain_len % 16)
    }
}

/// Encrypted size of one document under one suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SizeRow {
    pub suite: CipherSuite,
    pub payloads: usize,
    pub plaintext_bytes: usize,
    pub encrypted_bytes: usize,
    /// Size from plaintext + framing arithmetic + dictionary overhead,
    /// computed without running a cipher.
    pub predicted_bytes: usize,
    /// Growth of the payloads themselves.
    pub framing_bytes: usize,
    /// Everything else: Encrypt dictionary, ID, Length digits, string form.
    pub overhead_bytes: usize,
    /// Payloads whose framed length differs from the arithmetic.
    pub payload_mismatches: usize,
}

impl SizeRow {
    pub fn encrypted_mb(&self) -> f64 {
        self.encrypted_bytes as f64 / 1e6
    }

    pub fn plaintext_mb(&self) -> f64 {
        self.plaintext_bytes as f64 / 1e6
    }

    pub fn is_exact(&self) -> bool {
        self.payload_mismatches == 0 && self.predicted_bytes == self.encrypted_bytes
    }
}

fn payload_len(v: Option<&PdfValue>) -> usize {
    match v {
        Some(PdfValue::Stream(s)) => s.data.len(),
        Some(v) => v.as_string_bytes().map_or(0, <[u8]>::len),
        None => 0,
    }
}

/// Encrypts `doc` with every suite and accounts for the size change.
pub fn size_report(doc: &PdfDocument, suites: &[CipherSuite], seed: u64) -> Result<Vec<SizeRow>, CryptError> {
    let plaintext_bytes = serialize_document(doc).len();
    let targets = collect_encryption_targets(doc);
    let mut rows = Vec::with_capacity(suites.len());
    for &suite in suites {
        let enc = encrypt_document(doc, &Credentials::default(), DEFAULT_PERMISSIONS, suite, Some(seed))?;
        let encrypted_bytes = serialize_document(&enc).len();

        let mut shape = doc.clone();
        let mut framing_bytes = 0;
        let mut payload_mismatches = 0;
        for t in &targets {
            let plain = payload_len(doc.value_at(&t.location));
            let grow = framing_overhead(suite, plain);
            framing_bytes += grow;
            if payload_len(enc.value_at(&t.location)) != plain + grow {
                payload_mismatches += 1;
            }
            let zeros = vec![0u8; plain + grow];
            match (t.kind, shape.value_at_mut(&t.location)) {
                (TargetKind::Stream, Some(PdfValue::Stream(s))) => s.set_data(zeros),
                (TargetKind::String, Some(v)) => *v = PdfValue::HexString(zeros),
                _ => {}
            }
        }
        let encrypt_ref = enc.trailer.dict.get(b"Encrypt").and_then(PdfValue::as_reference);
        if let Some(id) = encrypt_ref {
            let dict = enc.get(id.num).map(|o| o.value.clone()).unwrap_or(PdfValue::Null);
            shape.insert(id, dict);
            shape.trailer.dict.set("Encrypt", PdfValue::Reference(id));
        }
        if let Some((a, b)) = enc.file_id() {
            shape.set_file_id(a.to_vec(), b.to_vec());
        }
        let predicted_bytes = serialize_document(&shape).len();

        rows.push(SizeRow {
            suite,
            payloads: targets.len(),
            plaintext_bytes,
            encrypted_bytes,
            predicted_bytes,
            framing_bytes,
            overhead_bytes: predicted_bytes.saturating_sub(plaintext_bytes + framing_bytes),
            payload_mismatches,
        });
    }
    Ok(rows)
}
