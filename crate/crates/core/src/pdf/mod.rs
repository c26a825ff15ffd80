//! Linear PDF 1.7 file structure: header, body, classic xref table and
//! trailer.

mod parser;
mod reader;
mod targets;
mod value;
mod writer;

use std::collections::BTreeMap;

pub use self::parser::parse_value;
pub use self::reader::parse_document;
pub use self::targets::{collect_encryption_targets, is_signature_dict, EncryptionTarget, PathStep, TargetKind, TargetLocation};
pub use self::value::{Dictionary, IndirectObject, ObjectId, PdfValue, Stream};
pub use self::writer::{serialize_document, write_value};

/// Written when the source file has no usable binary marker line.
pub const DEFAULT_BINARY_MARKER: [u8; 4] = [0xE2, 0xE3, 0xCF, 0xD3];

#[derive(Debug, thiserror::Error)]
pub enum PdfError {
    #[error("file does not start with %PDF-")]
    MalformedHeader,
    #[error("no trailer found (missing %%EOF, startxref or Root)")]
    MissingTrailer,
    #[error("malformed xref entry at byte {offset}")]
    BadXrefEntry { offset: usize },
    #[error("object {num} {gen} starting at byte {offset} is not terminated")]
    UnterminatedObject { num: u32, gen: u16, offset: usize },
    #[error("syntax error at byte {offset}: {msg}")]
    Syntax { offset: usize, msg: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct XrefEntry {
    pub offset: u64,
    pub generation: u16,
    pub in_use: bool,
}

impl XrefEntry {
    pub const FREE_HEAD: XrefEntry = XrefEntry { offset: 0, generation: 65535, in_use: false };
}

/// Entries indexed by object number, consecutive from 0.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct XrefTable {
    pub entries: Vec<XrefEntry>,
}

impl XrefTable {
    /// Densifies a sparse map; entry 0 is always the free head and missing
    /// numbers become free entries.
    pub(crate) fn from_sparse(sparse: &BTreeMap<u32, XrefEntry>) -> Self {
        let size = sparse.keys().next_back().map_or(1, |n| n + 1) as usize;
        let mut entries = vec![XrefEntry { offset: 0, generation: 0, in_use: false }; size];
        for (&num, e) in sparse {
            entries[num as usize] = *e;
        }
        entries[0] = XrefEntry::FREE_HEAD;
        Self { entries }
    }

    pub fn in_use_count(&self) -> usize {
        self.entries.iter().filter(|e| e.in_use).count()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trailer {
    pub dict: Dictionary,
    pub startxref_offset: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PdfDocument {
    /// Text after `%PDF-`, e.g. `1.7`.
    pub version: String,
    pub binary_marker: [u8; 4],
    /// Keyed by object number.
    pub objects: BTreeMap<u32, IndirectObject>,
    /// The table as read from the file (or as last serialized).
    pub xref: XrefTable,
    pub trailer: Trailer,
}

impl PdfDocument {
    /// An empty 1.7 document whose trailer points at `root`.
    pub fn new(root: ObjectId) -> Self {
        let mut dict = Dictionary::new();
        dict.set("Root", PdfValue::Reference(root));
        Self {
            version: "1.7".into(),
            binary_marker: DEFAULT_BINARY_MARKER,
            objects: BTreeMap::new(),
            xref: XrefTable { entries: vec![XrefEntry::FREE_HEAD] },
            trailer: Trailer { dict, startxref_offset: 0 },
        }
    }

    pub fn get(&self, num: u32) -> Option<&IndirectObject> {
        self.objects.get(&num)
    }

    pub fn get_mut(&mut self, num: u32) -> Option<&mut IndirectObject> {
        self.objects.get_mut(&num)
    }

    /// Follows a reference (one level); other values are returned as is.
    pub fn resolve<'a>(&'a self, value: &'a PdfValue) -> Option<&'a PdfValue> {
        match value {
            PdfValue::Reference(id) => self.objects.get(&id.num).filter(|o| o.id.gen == id.gen).map(|o| &o.value),
            other => Some(other),
        }
    }

    pub fn insert(&mut self, id: ObjectId, value: PdfValue) {
        self.objects.insert(id.num, IndirectObject { id, value });
    }

    /// Adds `value` under the next unused object number.
    pub fn add_object(&mut self, value: PdfValue) -> ObjectId {
        let num = self.objects.keys().next_back().map_or(1, |n| n + 1);
        let id = ObjectId::new(num, 0);
        self.insert(id, value);
        id
    }

    pub fn root(&self) -> Option<ObjectId> {
        self.trailer.dict.get(b"Root").and_then(PdfValue::as_reference)
    }

    pub fn is_encrypted(&self) -> bool {
        self.trailer.dict.contains_key(b"Encrypt")
    }

    /// The Encrypt dictionary, direct or referenced from the trailer.
    pub fn encrypt_dict(&self) -> Option<&Dictionary> {
        self.resolve(self.trailer.dict.get(b"Encrypt")?)?.as_dict()
    }

    /// Both elements of the trailer ID array.
    pub fn file_id(&self) -> Option<(&[u8], &[u8])> {
        let ids = match self.resolve(self.trailer.dict.get(b"ID")?)? {
            PdfValue::Array(a) if a.len() == 2 => a,
            _ => return None,
        };
        Some((ids[0].as_string_bytes()?, ids[1].as_string_bytes()?))
    }

    pub fn set_file_id(&mut self, first: Vec<u8>, second: Vec<u8>) {
        self.trailer
            .dict
            .set("ID", PdfValue::Array(vec![PdfValue::HexString(first), PdfValue::HexString(second)]));
    }

    pub fn value_at(&self, loc: &TargetLocation) -> Option<&PdfValue> {
        let mut v = &self.objects.get(&loc.object)?.value;
        for step in &loc.path {
            v = match (step, v) {
                (PathStep::Key(k), _) => v.as_dict()?.get(k)?,
                (PathStep::Index(i), PdfValue::Array(a)) => a.get(*i)?,
                _ => return None,
            };
        }
        Some(v)
    }

    pub fn value_at_mut(&mut self, loc: &TargetLocation) -> Option<&mut PdfValue> {
        let mut v = &mut self.objects.get_mut(&loc.object)?.value;
        for step in &loc.path {
            v = match step {
                PathStep::Key(k) => v.as_dict_mut()?.get_mut(k)?,
                PathStep::Index(i) => match v {
                    PdfValue::Array(a) => a.get_mut(*i)?,
                    _ => return None,
                },
            };
        }
        Some(v)
    }

    /// Same object numbers, generations and values, and the same trailer
    /// apart from bookkeeping entries (`Size`, `Prev`, `XRefStm`).
    pub fn same_object_graph(&self, other: &PdfDocument) -> bool {
        let strip = |d: &Dictionary| {
            let mut d = d.clone();
            for k in [&b"Size"[..], b"Prev", b"XRefStm"] {
                d.remove(k);
            }
            d
        };
        self.objects == other.objects && strip(&self.trailer.dict) == strip(&other.trailer.dict)
    }

    /// Same object numbers, generations and values, ignoring whether a
    /// string is written in literal or hex form.
    pub fn same_content(&self, other: &PdfDocument) -> bool {
        self.objects.len() == other.objects.len()
            && self.objects.iter().zip(&other.objects).all(|((n, a), (m, b))| n == m && a.id == b.id && a.value.content_eq(&b.value))
    }
}

#[cfg(test)]
mod tests;
