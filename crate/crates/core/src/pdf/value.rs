use std::fmt;

/// `(object number, generation number)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObjectId {
    pub num: u32,
    pub gen: u16,
}

impl ObjectId {
    pub const fn new(num: u32, gen: u16) -> Self {
        Self { num, gen }
    }
}

impl fmt::Display for ObjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} R", self.num, self.gen)
    }
}

/// A PDF dictionary. Keys are raw name bytes (after `#xx` decoding); entry
/// order is preserved so re-serialization is stable.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Dictionary {
    entries: Vec<(Vec<u8>, PdfValue)>,
}

impl Dictionary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, key: &[u8]) -> Option<&PdfValue> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn get_mut(&mut self, key: &[u8]) -> Option<&mut PdfValue> {
        self.entries.iter_mut().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn contains_key(&self, key: &[u8]) -> bool {
        self.get(key).is_some()
    }

    /// Replaces an existing entry in place or appends a new one.
    pub fn set(&mut self, key: impl Into<Vec<u8>>, value: PdfValue) {
        let key = key.into();
        match self.get_mut(&key) {
            Some(slot) => *slot = value,
            None => self.entries.push((key, value)),
        }
    }

    pub fn remove(&mut self, key: &[u8]) -> Option<PdfValue> {
        let idx = self.entries.iter().position(|(k, _)| k == key)?;
        Some(self.entries.remove(idx).1)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[u8], &PdfValue)> {
        self.entries.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn iter_mut(&mut self) -> impl Iterator<Item = (&[u8], &mut PdfValue)> {
        self.entries.iter_mut().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn keys(&self) -> impl Iterator<Item = &[u8]> {
        self.entries.iter().map(|(k, _)| k.as_slice())
    }

    /// `true` if `key` maps to the name `name`.
    pub fn has_name(&self, key: &[u8], name: &[u8]) -> bool {
        matches!(self.get(key), Some(PdfValue::Name(n)) if n == name)
    }
}

impl<K: Into<Vec<u8>>> FromIterator<(K, PdfValue)> for Dictionary {
    fn from_iter<I: IntoIterator<Item = (K, PdfValue)>>(iter: I) -> Self {
        let mut d = Dictionary::new();
        for (k, v) in iter {
            d.set(k, v);
        }
        d
    }
}

/// A stream: its dictionary plus the raw, still-encoded bytes between the
/// `stream` and `endstream` keywords.
#[derive(Clone, Debug, PartialEq)]
pub struct Stream {
    pub dict: Dictionary,
    pub data: Vec<u8>,
}

impl Stream {
    /// Builds a stream whose `Length` matches `data`.
    pub fn new(mut dict: Dictionary, data: Vec<u8>) -> Self {
        dict.set("Length", PdfValue::Integer(data.len() as i64));
        Self { dict, data }
    }

    /// Replaces the raw bytes and keeps `Length` consistent.
    pub fn set_data(&mut self, data: Vec<u8>) {
        self.dict.set("Length", PdfValue::Integer(data.len() as i64));
        self.data = data;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PdfValue {
    Null,
    Boolean(bool),
    Integer(i64),
    Real(f64),
    Name(Vec<u8>),
    LiteralString(Vec<u8>),
    HexString(Vec<u8>),
    Array(Vec<PdfValue>),
    Dictionary(Dictionary),
    Stream(Stream),
    Reference(ObjectId),
}

impl PdfValue {
    pub fn name(n: &str) -> Self {
        PdfValue::Name(n.as_bytes().to_vec())
    }

    pub fn as_dict(&self) -> Option<&Dictionary> {
        match self {
            PdfValue::Dictionary(d) => Some(d),
            PdfValue::Stream(s) => Some(&s.dict),
            _ => None,
        }
    }

    pub fn as_dict_mut(&mut self) -> Option<&mut Dictionary> {
        match self {
            PdfValue::Dictionary(d) => Some(d),
            PdfValue::Stream(s) => Some(&mut s.dict),
            _ => None,
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        match self {
            PdfValue::Integer(i) => Some(*i),
            _ => None,
        }
    }

    pub fn as_name(&self) -> Option<&[u8]> {
        match self {
            PdfValue::Name(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_reference(&self) -> Option<ObjectId> {
        match self {
            PdfValue::Reference(id) => Some(*id),
            _ => None,
        }
    }

    /// Raw bytes of a literal or hex string.
    pub fn as_string_bytes(&self) -> Option<&[u8]> {
        match self {
            PdfValue::LiteralString(b) | PdfValue::HexString(b) => Some(b),
            _ => None,
        }
    }

    pub fn as_string_bytes_mut(&mut self) -> Option<&mut Vec<u8>> {
        match self {
            PdfValue::LiteralString(b) | PdfValue::HexString(b) => Some(b),
            _ => None,
        }
    }

    pub fn is_string(&self) -> bool {
        matches!(self, PdfValue::LiteralString(_) | PdfValue::HexString(_))
    }

    /// Equality that treats literal and hex strings with the same bytes as
    /// equal.
    pub fn content_eq(&self, other: &PdfValue) -> bool {
        match (self, other) {
            (a, b) if a.is_string() && b.is_string() => a.as_string_bytes() == b.as_string_bytes(),
            (PdfValue::Array(a), PdfValue::Array(b)) => a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.content_eq(y)),
            (PdfValue::Dictionary(a), PdfValue::Dictionary(b)) => dict_content_eq(a, b),
            (PdfValue::Stream(a), PdfValue::Stream(b)) => a.data == b.data && dict_content_eq(&a.dict, &b.dict),
            (a, b) => a == b,
        }
    }
}

fn dict_content_eq(a: &Dictionary, b: &Dictionary) -> bool {
    a.len() == b.len() && a.iter().all(|(k, v)| b.get(k).is_some_and(|w| v.content_eq(w)))
}

/// An object delimited by `N G obj` / `endobj`.
#[derive(Clone, Debug, PartialEq)]
pub struct IndirectObject {
    pub id: ObjectId,
    pub value: PdfValue,
}
