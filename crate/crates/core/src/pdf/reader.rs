//! File structure: header, `startxref`, classic xref sections and trailers,
//! with a linear scan for `N G obj` markers when offsets cannot be trusted.

use std::collections::{BTreeMap, HashSet};

use super::parser::{find, rfind, LengthResolver, Parser};
use super::value::{Dictionary, IndirectObject, ObjectId, PdfValue};
use super::{PdfDocument, PdfError, Trailer, XrefEntry, XrefTable, DEFAULT_BINARY_MARKER};

/// Offsets of objects as located in the file.
type Locations = BTreeMap<u32, (u16, usize)>;

struct Section {
    entries: BTreeMap<u32, XrefEntry>,
    trailer: Dictionary,
}

pub fn parse_document(bytes: &[u8]) -> Result<PdfDocument, PdfError> {
    let (version, binary_marker) = parse_header(bytes)?;
    let startxref = locate_startxref(bytes)?;

    let (mut entries, trailer_dict) = match read_xref_chain(bytes, startxref) {
        Ok(v) => v,
        Err(e @ PdfError::Unsupported(_)) | Err(e @ PdfError::BadXrefEntry { .. }) => return Err(e),
        Err(_) => reconstruct_xref(bytes)?,
    };

    // Trust the table only if every in-use offset points at the right header.
    let mut locations = Locations::new();
    let mut consistent = true;
    for (&num, e) in entries.iter().filter(|(n, e)| e.in_use && **n != 0) {
        let mut p = Parser::new(bytes, e.offset as usize);
        match p.object_header() {
            Some(id) if id.num == num => {
                locations.insert(num, (id.gen, p.pos));
            }
            _ => {
                consistent = false;
                break;
            }
        }
    }
    if !consistent {
        locations = scan_objects(bytes);
        for (num, (gen, pos)) in &locations {
            let header_offset = header_start(bytes, *pos);
            entries.insert(*num, XrefEntry { offset: header_offset as u64, generation: *gen, in_use: true });
        }
        entries.retain(|num, e| !e.in_use || locations.contains_key(num));
    }

    let mut loader = Loader { bytes, locations: &locations, cache: BTreeMap::new(), in_progress: HashSet::new() };
    let nums: Vec<u32> = locations.keys().copied().collect();
    for num in nums {
        loader.load(num)?;
    }
    let objects: BTreeMap<u32, IndirectObject> = loader.cache;

    for obj in objects.values() {
        if let Some(d) = obj.value.as_dict() {
            if d.has_name(b"Type", b"XRef") || d.has_name(b"Type", b"ObjStm") {
                return Err(PdfError::Unsupported(
                    "cross-reference streams and object streams are not supported".into(),
                ));
            }
        }
    }
    if trailer_dict.get(b"Root").and_then(PdfValue::as_reference).is_none() {
        return Err(PdfError::MissingTrailer);
    }

    let xref = XrefTable::from_sparse(&entries);
    Ok(PdfDocument {
        version,
        binary_marker,
        objects,
        xref,
        trailer: Trailer { dict: trailer_dict, startxref_offset: startxref as u64 },
    })
}

fn parse_header(bytes: &[u8]) -> Result<(String, [u8; 4]), PdfError> {
    if !bytes.starts_with(b"%PDF-") {
        return Err(PdfError::MalformedHeader);
    }
    let line_end = bytes.iter().position(|&b| b == b'\r' || b == b'\n').unwrap_or(bytes.len());
    let version = std::str::from_utf8(&bytes[5..line_end])
        .map_err(|_| PdfError::MalformedHeader)?
        .trim()
        .to_string();
    if version.is_empty() || !version.chars().all(|c| c.is_ascii_digit() || c == '.') {
        return Err(PdfError::MalformedHeader);
    }
    let mut rest = line_end;
    while rest < bytes.len() && (bytes[rest] == b'\r' || bytes[rest] == b'\n') {
        rest += 1;
    }
    let mut marker = DEFAULT_BINARY_MARKER;
    if bytes.get(rest) == Some(&b'%') {
        let high: Vec<u8> = bytes[rest + 1..].iter().take(4).copied().collect();
        if high.len() == 4 && high.iter().all(|&b| b >= 128) {
            marker.copy_from_slice(&high);
        }
    }
    Ok((version, marker))
}

fn locate_startxref(bytes: &[u8]) -> Result<usize, PdfError> {
    let tail_start = bytes.len().saturating_sub(2048);
    let tail = &bytes[tail_start..];
    let eof = rfind(tail, b"%%EOF").ok_or(PdfError::MissingTrailer)?;
    // Only whitespace may follow the final marker.
    if !tail[eof + 5..].iter().all(|b| b.is_ascii_whitespace() || *b == 0) {
        return Err(PdfError::MissingTrailer);
    }
    let sx = rfind(&tail[..eof], b"startxref").ok_or(PdfError::MissingTrailer)?;
    let mut p = Parser::new(bytes, tail_start + sx + b"startxref".len());
    let offset = p.unsigned().ok_or(PdfError::MissingTrailer)?;
    Ok(offset as usize)
}

fn read_xref_chain(bytes: &[u8], start: usize) -> Result<(BTreeMap<u32, XrefEntry>, Dictionary), PdfError> {
    let mut merged: BTreeMap<u32, XrefEntry> = BTreeMap::new();
    let mut newest_trailer: Option<Dictionary> = None;
    let mut seen = HashSet::new();
    let mut next = Some(start);
    while let Some(offset) = next {
        if !seen.insert(offset) {
            break;
        }
        let section = read_xref_section(bytes, offset)?;
        for (num, e) in section.entries {
            merged.entry(num).or_insert(e);
        }
        next = section.trailer.get(b"Prev").and_then(PdfValue::as_i64).map(|p| p as usize);
        if newest_trailer.is_none() {
            newest_trailer = Some(section.trailer);
        }
    }
    let mut trailer = newest_trailer.ok_or(PdfError::MissingTrailer)?;
    trailer.remove(b"Prev");
    Ok((merged, trailer))
}

fn read_xref_section(bytes: &[u8], offset: usize) -> Result<Section, PdfError> {
    if offset >= bytes.len() {
        return Err(PdfError::MissingTrailer);
    }
    let mut p = Parser::new(bytes, offset);
    if !p.eat_keyword(b"xref") {
        let mut probe = Parser::new(bytes, offset);
        if let Some(id) = probe.object_header() {
            if let Ok(v) = probe.parse_value() {
                if v.as_dict().is_some_and(|d| d.has_name(b"Type", b"XRef")) {
                    return Err(PdfError::Unsupported(format!(
                        "cross-reference stream in object {} is not supported",
                        id.num
                    )));
                }
            }
        }
        return Err(PdfError::MissingTrailer);
    }
    let mut entries = BTreeMap::new();
    loop {
        p.skip_ws();
        if p.eat_keyword(b"trailer") {
            break;
        }
        let first = p.unsigned().ok_or(PdfError::BadXrefEntry { offset: p.pos })?;
        let count = p.unsigned().ok_or(PdfError::BadXrefEntry { offset: p.pos })?;
        // Entries start on the next line.
        while p.pos < bytes.len() && matches!(bytes[p.pos], b' ' | b'\t') {
            p.pos += 1;
        }
        if bytes.get(p.pos) == Some(&b'\r') {
            p.pos += 1;
        }
        if bytes.get(p.pos) == Some(&b'\n') {
            p.pos += 1;
        }
        for i in 0..count {
            let entry_at = p.pos;
            let entry = parse_xref_entry(bytes, entry_at)?;
            p.pos = entry_at + 20;
            let num = u32::try_from(first + i).map_err(|_| PdfError::BadXrefEntry { offset: entry_at })?;
            entries.insert(num, entry);
        }
    }
    let trailer = match p.parse_value()? {
        PdfValue::Dictionary(d) => d,
        _ => return Err(PdfError::MissingTrailer),
    };
    Ok(Section { entries, trailer })
}

/// One fixed-width line: 10-digit offset, space, 5-digit generation, space,
/// `n` or `f`, then a two-byte end-of-line.
fn parse_xref_entry(bytes: &[u8], at: usize) -> Result<XrefEntry, PdfError> {
    let bad = PdfError::BadXrefEntry { offset: at };
    let line = bytes.get(at..at + 20).ok_or(PdfError::BadXrefEntry { offset: at })?;
    let digits = |s: &[u8]| -> Option<u64> {
        if s.iter().all(u8::is_ascii_digit) {
            std::str::from_utf8(s).ok()?.parse().ok()
        } else {
            None
        }
    };
    let offset = digits(&line[0..10]).ok_or(PdfError::BadXrefEntry { offset: at })?;
    if line[10] != b' ' || line[16] != b' ' {
        return Err(bad);
    }
    let generation = digits(&line[11..16])
        .and_then(|g| u16::try_from(g).ok())
        .ok_or(PdfError::BadXrefEntry { offset: at })?;
    let in_use = match line[17] {
        b'n' => true,
        b'f' => false,
        _ => return Err(bad),
    };
    let eol_ok = matches!(&line[18..20], b" \n" | b" \r" | b"\r\n");
    if !eol_ok {
        return Err(bad);
    }
    Ok(XrefEntry { offset, generation, in_use })
}

/// Rebuilds xref entries and the trailer from the object markers alone.
fn reconstruct_xref(bytes: &[u8]) -> Result<(BTreeMap<u32, XrefEntry>, Dictionary), PdfError> {
    let locations = scan_objects(bytes);
    let mut entries = BTreeMap::new();
    for (num, (gen, pos)) in &locations {
        entries.insert(*num, XrefEntry { offset: header_start(bytes, *pos) as u64, generation: *gen, in_use: true });
    }
    let at = rfind(bytes, b"trailer").ok_or(PdfError::MissingTrailer)?;
    let mut p = Parser::new(bytes, at + b"trailer".len());
    match p.parse_value() {
        Ok(PdfValue::Dictionary(mut d)) => {
            d.remove(b"Prev");
            Ok((entries, d))
        }
        _ => Err(PdfError::MissingTrailer),
    }
}

/// Finds every `N G obj` marker at the start of a line; later definitions
/// win, matching incremental-update semantics.
fn scan_objects(bytes: &[u8]) -> Locations {
    let mut out = Locations::new();
    let mut from = 0;
    while let Some(rel) = find(&bytes[from..], b"obj") {
        let kw = from + rel;
        from = kw + 3;
        if bytes.get(kw + 3).is_some_and(|b| !super::parser::is_whitespace(*b) && !super::parser::is_delimiter(*b)) {
            continue;
        }
        let start = line_start_of_header(bytes, kw);
        let Some(start) = start else { continue };
        let mut p = Parser::new(bytes, start);
        if let Some(id) = p.object_header() {
            if p.pos == kw + 3 {
                out.insert(id.num, (id.gen, p.pos));
            }
        }
    }
    out
}

/// Walks back from the `obj` keyword over `N G ` and returns where `N` starts.
fn line_start_of_header(bytes: &[u8], kw: usize) -> Option<usize> {
    let mut i = kw;
    for _ in 0..2 {
        while i > 0 && matches!(bytes[i - 1], b' ' | b'\t' | b'\r' | b'\n' | b'\0' | b'\x0c') {
            i -= 1;
        }
        let end = i;
        while i > 0 && bytes[i - 1].is_ascii_digit() {
            i -= 1;
        }
        if i == end {
            return None;
        }
    }
    if i == 0 || matches!(bytes[i - 1], b'\r' | b'\n' | b' ' | b'\t' | b'>' | b']' | b')') {
        Some(i)
    } else {
        None
    }
}

fn header_start(bytes: &[u8], after_obj: usize) -> usize {
    line_start_of_header(bytes, after_obj - 3).unwrap_or(after_obj - 3)
}

struct Loader<'a> {
    bytes: &'a [u8],
    locations: &'a Locations,
    cache: BTreeMap<u32, IndirectObject>,
    in_progress: HashSet<u32>,
}

impl Loader<'_> {
    fn load(&mut self, num: u32) -> Result<(), PdfError> {
        if self.cache.contains_key(&num) || !self.in_progress.insert(num) {
            return Ok(());
        }
        let &(gen, pos) = self.locations.get(&num).expect("known location");
        let id = ObjectId::new(num, gen);
        let mut p = Parser::new(self.bytes, pos);
        let value = p.object_body(id, self)?;
        self.in_progress.remove(&num);
        self.cache.insert(num, IndirectObject { id, value });
        Ok(())
    }
}

impl LengthResolver for Loader<'_> {
    fn resolve_length(&mut self, id: ObjectId) -> Option<usize> {
        if !self.locations.contains_key(&id.num) {
            return None;
        }
        self.load(id.num).ok()?;
        self.cache.get(&id.num)?.value.as_i64().and_then(|n| usize::try_from(n).ok())
    }
}
