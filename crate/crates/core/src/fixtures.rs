//! Deterministic sample documents: three fixed sizes for benchmarking and
//! a seeded generator for randomized tests.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use flate2::write::ZlibEncoder;
use flate2::Compression;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::pdf::{Dictionary, ObjectId, PdfDocument, PdfValue, Stream};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixtureSize {
    Small,
    Medium,
    Large,
}

impl FixtureSize {
    pub const ALL: [FixtureSize; 3] = [FixtureSize::Small, FixtureSize::Medium, FixtureSize::Large];

    pub fn name(self) -> &'static str {
        match self {
            FixtureSize::Small => "small",
            FixtureSize::Medium => "medium",
            FixtureSize::Large => "large",
        }
    }

    fn options(self) -> FixtureOptions {
        let (pages, content_bytes) = match self {
            FixtureSize::Small => (1, 2 * 1024),
            FixtureSize::Medium => (8, 16 * 1024),
            FixtureSize::Large => (32, 64 * 1024),
        };
        FixtureOptions { pages, content_bytes, ..FixtureOptions::default() }
    }
}

impl fmt::Display for FixtureSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FixtureSize {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown fixture size '{s}' (expected small, medium or large)"))
    }
}

#[derive(Clone, Debug)]
pub struct FixtureOptions {
    pub pages: usize,
    /// Uncompressed content-stream bytes per page (approximate).
    pub content_bytes: usize,
    /// Flate-encode content streams.
    pub flate: bool,
    pub annotations_per_page: usize,
    pub info: bool,
    pub file_id: bool,
    /// Adds a signature field whose value is a signature dictionary.
    pub signature: bool,
}

impl Default for FixtureOptions {
    fn default() -> Self {
        Self {
            pages: 1,
            content_bytes: 1024,
            flate: true,
            annotations_per_page: 1,
            info: true,
            file_id: true,
            signature: false,
        }
    }
}

const WORDS: &[&str] = &[
    "lorem", "ipsum", "dolor", "sit", "amet", "cipher", "sponge", "nonce", "block", "stream", "object", "trailer",
    "(paren)", "back\\slash", "tab\tbed", "permute", "absorb", "squeeze", "round", "key",
];

fn content_stream(rng: &mut impl Rng, target: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(target + 128);
    let mut y = 760;
    while out.len() < target {
        let n = rng.gen_range(3..12);
        let line: Vec<&str> = (0..n).map(|_| *WORDS.choose(rng).expect("non-empty")).collect();
        let text = line.join(" ").replace('\\', "\\\\").replace('(', "\\(").replace(')', "\\)");
        writeln!(out, "BT /F1 {} Tf 72 {} Td ({}) Tj ET", rng.gen_range(8..16), y, text).expect("vec write");
        y = if y < 60 { 760 } else { y - 14 };
    }
    out
}

fn deflate(data: &[u8]) -> Vec<u8> {
    let mut enc = ZlibEncoder::new(Vec::new(), Compression::default());
    enc.write_all(data).expect("vec write");
    enc.finish().expect("vec write")
}

fn dict<const N: usize>(entries: [(&str, PdfValue); N]) -> PdfValue {
    PdfValue::Dictionary(entries.into_iter().collect())
}

fn text(s: &str) -> PdfValue {
    PdfValue::LiteralString(s.as_bytes().to_vec())
}

fn random_bytes(rng: &mut impl Rng, n: usize) -> Vec<u8> {
    (0..n).map(|_| rng.gen()).collect()
}

/// Builds a document with catalog, page tree, pages with content streams,
/// a font, text annotations and optionally an Info dictionary, a file ID
/// and a signature field.
pub fn generate(opts: &FixtureOptions, seed: u64) -> PdfDocument {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let catalog = ObjectId::new(1, 0);
    let pages = ObjectId::new(2, 0);
    let font = ObjectId::new(3, 0);
    let mut doc = PdfDocument::new(catalog);
    doc.insert(
        font,
        dict([
            ("Type", PdfValue::name("Font")),
            ("Subtype", PdfValue::name("Type1")),
            ("BaseFont", PdfValue::name("Helvetica")),
        ]),
    );
    doc.insert(pages, PdfValue::Null);

    let mut kids = Vec::new();
    let mut first_page = None;
    for p in 0..opts.pages {
        let raw = content_stream(&mut rng, opts.content_bytes);
        let stream = if opts.flate {
            Stream::new([("Filter", PdfValue::name("FlateDecode"))].into_iter().collect(), deflate(&raw))
        } else {
            Stream::new(Dictionary::new(), raw)
        };
        let contents = doc.add_object(PdfValue::Stream(stream));
        let mut annots = Vec::new();
        for a in 0..opts.annotations_per_page {
            let note = format!("note {a} on page {}: {}", p + 1, WORDS.choose(&mut rng).expect("non-empty"));
            annots.push(PdfValue::Reference(doc.add_object(dict([
                ("Type", PdfValue::name("Annot")),
                ("Subtype", PdfValue::name("Text")),
                ("Rect", PdfValue::Array([100, 100 + 30 * a as i64, 120, 120 + 30 * a as i64].map(PdfValue::Integer).to_vec())),
                ("Contents", text(&note)),
                ("NM", PdfValue::HexString(random_bytes(&mut rng, 8))),
            ]))));
        }
        let mut page: Dictionary = [
            ("Type", PdfValue::name("Page")),
            ("Parent", PdfValue::Reference(pages)),
            ("MediaBox", PdfValue::Array(vec![PdfValue::Integer(0), PdfValue::Integer(0), PdfValue::Real(612.0), PdfValue::Real(792.0)])),
            ("Resources", dict([("Font", dict([("F1", PdfValue::Reference(font))]))])),
            ("Contents", PdfValue::Reference(contents)),
        ]
        .into_iter()
        .collect();
        if !annots.is_empty() {
            page.set("Annots", PdfValue::Array(annots));
        }
        let id = doc.add_object(PdfValue::Dictionary(page));
        first_page.get_or_insert(id);
        kids.push(PdfValue::Reference(id));
    }
    let count = kids.len() as i64;
    doc.insert(
        pages,
        dict([("Type", PdfValue::name("Pages")), ("Kids", PdfValue::Array(kids)), ("Count", PdfValue::Integer(count))]),
    );

    let mut cat: Dictionary = [("Type", PdfValue::name("Catalog")), ("Pages", PdfValue::Reference(pages))].into_iter().collect();
    if opts.signature {
        let sig = doc.add_object(dict([
            ("Type", PdfValue::name("Sig")),
            ("Filter", PdfValue::name("Adobe.PPKLite")),
            ("SubFilter", PdfValue::name("adbe.pkcs7.detached")),
            ("ByteRange", PdfValue::Array([0, 0, 0, 0].map(PdfValue::Integer).to_vec())),
            ("Contents", PdfValue::HexString(random_bytes(&mut rng, 64))),
            ("Reason", text("approved")),
            ("M", text("D:20240101120000Z")),
        ]));
        let mut field: Dictionary = [
            ("FT", PdfValue::name("Sig")),
            ("T", text("Signature1")),
            ("V", PdfValue::Reference(sig)),
            ("Type", PdfValue::name("Annot")),
            ("Subtype", PdfValue::name("Widget")),
            ("Rect", PdfValue::Array([0, 0, 0, 0].map(PdfValue::Integer).to_vec())),
        ]
        .into_iter()
        .collect();
        if let Some(p) = first_page {
            field.set("P", PdfValue::Reference(p));
        }
        let field = doc.add_object(PdfValue::Dictionary(field));
        cat.set("AcroForm", dict([("Fields", PdfValue::Array(vec![PdfValue::Reference(field)])), ("SigFlags", PdfValue::Integer(3))]));
    }
    doc.insert(catalog, PdfValue::Dictionary(cat));

    if opts.info {
        let info = doc.add_object(dict([
            ("Title", text(&format!("Fixture {seed}"))),
            ("Author", text("pdf-lwc")),
            ("Subject", PdfValue::HexString(random_bytes(&mut rng, 12))),
            ("Keywords", text("partial encryption (strings) and streams")),
            ("CreationDate", text("D:20240101000000Z")),
        ]));
        doc.trailer.dict.set("Info", PdfValue::Reference(info));
    }
    if opts.file_id {
        let id = random_bytes(&mut rng, 16);
        doc.set_file_id(id.clone(), id);
    }
    doc
}

pub fn sized_fixture(size: FixtureSize) -> PdfDocument {
    generate(&size.options(), 0x5EED_0000 + size as u64)
}

/// A small document with randomized shape: page count, stream sizes,
/// compression, annotations, and optionally a signature field.
pub fn random_document(seed: u64, signature: bool) -> PdfDocument {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xA5A5_A5A5);
    let opts = FixtureOptions {
        pages: rng.gen_range(1..5),
        content_bytes: rng.gen_range(0..3000),
        flate: rng.gen_bool(0.7),
        annotations_per_page: rng.gen_range(0..3),
        info: rng.gen_bool(0.8),
        file_id: true,
        signature,
    };
    let mut doc = generate(&opts, seed);
    if rng.gen_bool(0.5) {
        // A stream whose dictionary itself carries strings.
        let n = rng.gen_range(0..200);
        let data = random_bytes(&mut rng, n);
        let mut d: Dictionary = [("Type", PdfValue::name("EmbeddedFile"))].into_iter().collect();
        d.set("Params", dict([("CheckSum", PdfValue::HexString(random_bytes(&mut rng, 16)))]));
        doc.add_object(PdfValue::Stream(Stream::new(d, data)));
    }
    if rng.gen_bool(0.5) {
        let names: Vec<PdfValue> = (0..rng.gen_range(1..4))
            .flat_map(|i| [text(&format!("dest{i}")), PdfValue::Array(vec![PdfValue::Integer(i), PdfValue::name("Fit")])])
            .collect();
        doc.add_object(dict([("Names", PdfValue::Array(names))]));
    }
    doc
}
