//! Serialization to a single flattened revision with a freshly computed xref.

use std::io::Write;

use super::parser::{is_delimiter, is_whitespace};
use super::value::{Dictionary, PdfValue};
use super::{PdfDocument, XrefEntry, XrefTable};

pub fn serialize_document(doc: &PdfDocument) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(b"%PDF-");
    out.extend_from_slice(doc.version.as_bytes());
    out.push(b'\n');
    out.push(b'%');
    out.extend_from_slice(&doc.binary_marker);
    out.push(b'\n');

    let size = doc.objects.keys().next_back().map_or(1, |n| n + 1);
    let mut offsets: Vec<Option<(u64, u16)>> = vec![None; size as usize];
    for (num, obj) in &doc.objects {
        offsets[*num as usize] = Some((out.len() as u64, obj.id.gen));
        writeln!(out, "{} {} obj", num, obj.id.gen).expect("vec write");
        write_value(&mut out, &obj.value);
        out.extend_from_slice(b"\nendobj\n");
    }

    let xref = build_xref(&offsets);
    let xref_offset = out.len();
    write_xref(&mut out, &xref);

    let mut trailer = doc.trailer.dict.clone();
    trailer.remove(b"Prev");
    trailer.remove(b"XRefStm");
    trailer.set("Size", PdfValue::Integer(xref.entries.len() as i64));
    out.extend_from_slice(b"trailer\n");
    write_dict(&mut out, &trailer);
    write!(out, "\nstartxref\n{xref_offset}\n%%EOF\n").expect("vec write");
    out
}

/// Entry 0 is the free-list head `(0, 65535, f)`; gaps become free entries
/// that point back to it.
fn build_xref(offsets: &[Option<(u64, u16)>]) -> XrefTable {
    let entries = offsets
        .iter()
        .enumerate()
        .map(|(i, slot)| match slot {
            _ if i == 0 => XrefEntry::FREE_HEAD,
            Some((offset, gen)) => XrefEntry { offset: *offset, generation: *gen, in_use: true },
            None => XrefEntry { offset: 0, generation: 0, in_use: false },
        })
        .collect();
    XrefTable { entries }
}

/// `xref`, one subsection, then 20-byte entries ending in space + LF.
pub(crate) fn write_xref(out: &mut Vec<u8>, xref: &XrefTable) {
    write!(out, "xref\n0 {}\n", xref.entries.len()).expect("vec write");
    for e in &xref.entries {
        writeln!(out, "{:010} {:05} {} ", e.offset, e.generation, if e.in_use { 'n' } else { 'f' })
            .expect("vec write");
    }
}

pub fn write_value(out: &mut Vec<u8>, value: &PdfValue) {
    match value {
        PdfValue::Null => out.extend_from_slice(b"null"),
        PdfValue::Boolean(b) => out.extend_from_slice(if *b { b"true" } else { b"false" }),
        PdfValue::Integer(i) => write!(out, "{i}").expect("vec write"),
        PdfValue::Real(r) => write_real(out, *r),
        PdfValue::Name(n) => write_name(out, n),
        PdfValue::LiteralString(s) => write_literal(out, s),
        PdfValue::HexString(s) => {
            out.push(b'<');
            out.extend_from_slice(hex::encode_upper(s).as_bytes());
            out.push(b'>');
        }
        PdfValue::Array(items) => {
            out.push(b'[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(b' ');
                }
                write_value(out, item);
            }
            out.push(b']');
        }
        PdfValue::Dictionary(d) => write_dict(out, d),
        PdfValue::Stream(s) => {
            let mut dict = s.dict.clone();
            dict.set("Length", PdfValue::Integer(s.data.len() as i64));
            write_dict(out, &dict);
            out.extend_from_slice(b"\nstream\n");
            out.extend_from_slice(&s.data);
            out.extend_from_slice(b"\nendstream");
        }
        PdfValue::Reference(id) => write!(out, "{} {} R", id.num, id.gen).expect("vec write"),
    }
}

fn write_dict(out: &mut Vec<u8>, d: &Dictionary) {
    out.extend_from_slice(b"<<");
    for (i, (k, v)) in d.iter().enumerate() {
        if i > 0 {
            out.push(b' ');
        }
        write_name(out, k);
        out.push(b' ');
        write_value(out, v);
    }
    out.extend_from_slice(b">>");
}

fn write_real(out: &mut Vec<u8>, r: f64) {
    if r.is_finite() && r == r.trunc() && r.abs() < 1e15 {
        write!(out, "{r:.1}").expect("vec write");
    } else if r.is_finite() {
        write!(out, "{r}").expect("vec write");
    } else {
        out.push(b'0');
    }
}

fn write_name(out: &mut Vec<u8>, name: &[u8]) {
    out.push(b'/');
    for &b in name {
        if b == b'#' || !(0x21..=0x7e).contains(&b) || is_delimiter(b) || is_whitespace(b) {
            write!(out, "#{b:02X}").expect("vec write");
        } else {
            out.push(b);
        }
    }
}

fn write_literal(out: &mut Vec<u8>, s: &[u8]) {
    out.push(b'(');
    for &b in s {
        match b {
            b'(' | b')' | b'\\' => {
                out.push(b'\\');
                out.push(b);
            }
            b'\r' => out.extend_from_slice(b"\\r"),
            _ => out.push(b),
        }
    }
    out.push(b')');
}
