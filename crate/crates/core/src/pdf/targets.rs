//! Enumeration of the strings and streams that partial encryption touches.

use super::value::{Dictionary, ObjectId, PdfValue};
use super::PdfDocument;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PathStep {
    Key(Vec<u8>),
    Index(usize),
}

/// Object number plus the path from the object's top-level value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TargetLocation {
    pub object: u32,
    pub path: Vec<PathStep>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TargetKind {
    String,
    Stream,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncryptionTarget {
    pub location: TargetLocation,
    pub kind: TargetKind,
    /// Enclosing indirect object; feeds the per-object key.
    pub owner: ObjectId,
}

/// `Type /Sig`, or both `ByteRange` and `Contents` present.
pub fn is_signature_dict(d: &Dictionary) -> bool {
    d.has_name(b"Type", b"Sig") || (d.contains_key(b"ByteRange") && d.contains_key(b"Contents"))
}

/// Every string and stream in the body in object-number order, depth first.
///
/// Skipped: the trailer (so both `ID` strings), the object holding the
/// `Encrypt` dictionary, `Contents` of signature dictionaries, and anything
/// inside stream data, which is never tokenized.
pub fn collect_encryption_targets(doc: &PdfDocument) -> Vec<EncryptionTarget> {
    let encrypt_obj = doc.trailer.dict.get(b"Encrypt").and_then(PdfValue::as_reference);
    let mut out = Vec::new();
    for obj in doc.objects.values() {
        if encrypt_obj.is_some_and(|id| id.num == obj.id.num) {
            continue;
        }
        let mut path = Vec::new();
        walk(&obj.value, obj.id, &mut path, &mut out);
    }
    out
}

fn walk(v: &PdfValue, owner: ObjectId, path: &mut Vec<PathStep>, out: &mut Vec<EncryptionTarget>) {
    let push = |kind, path: &Vec<PathStep>, out: &mut Vec<EncryptionTarget>| {
        out.push(EncryptionTarget { location: TargetLocation { object: owner.num, path: path.clone() }, kind, owner })
    };
    match v {
        PdfValue::LiteralString(_) | PdfValue::HexString(_) => push(TargetKind::String, path, out),
        PdfValue::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                path.push(PathStep::Index(i));
                walk(item, owner, path, out);
                path.pop();
            }
        }
        PdfValue::Dictionary(d) => walk_dict(d, owner, path, out),
        PdfValue::Stream(s) => {
            walk_dict(&s.dict, owner, path, out);
            push(TargetKind::Stream, path, out);
        }
        _ => {}
    }
}

fn walk_dict(d: &Dictionary, owner: ObjectId, path: &mut Vec<PathStep>, out: &mut Vec<EncryptionTarget>) {
    let sig = is_signature_dict(d);
    for (k, v) in d.iter() {
        if sig && k == b"Contents" {
            continue;
        }
        path.push(PathStep::Key(k.to_vec()));
        walk(v, owner, path, out);
        path.pop();
    }
}
