use super::*;

const MINIMAL: &[u8] = b"%PDF-1.7\n%\xe2\xe3\xcf\xd3\n\
1 0 obj\n<</Type /Catalog /Pages 2 0 R>>\nendobj\n\
2 0 obj\n<</Type /Pages /Kids [3 0 R] /Count 1>>\nendobj\n\
3 0 obj\n<</Type /Page /Parent 2 0 R /Contents 4 0 R>>\nendobj\n\
4 0 obj\n<</Length 5 0 R>>\nstream\nBT ET\nendstream\nendobj\n\
5 0 obj\n5\nendobj\n";

fn with_xref(body: &[u8]) -> Vec<u8> {
    let mut offsets = Vec::new();
    let mut i = 0;
    while let Some(p) = parser::find(&body[i..], b" 0 obj") {
        let at = i + p;
        let line = body[..at].iter().rposition(|&b| b == b'\n').map_or(0, |n| n + 1);
        offsets.push(line);
        i = at + 1;
    }
    let mut out = body.to_vec();
    let xref_at = out.len();
    out.extend_from_slice(format!("xref\n0 {}\n0000000000 65535 f \n", offsets.len() + 1).as_bytes());
    for o in &offsets {
        out.extend_from_slice(format!("{o:010} 00000 n \n").as_bytes());
    }
    out.extend_from_slice(
        format!("trailer\n<</Size {} /Root 1 0 R>>\nstartxref\n{xref_at}\n%%EOF\n", offsets.len() + 1).as_bytes(),
    );
    out
}

#[test]
fn parses_minimal_file() {
    let doc = parse_document(&with_xref(MINIMAL)).unwrap();
    assert_eq!(doc.version, "1.7");
    assert_eq!(doc.binary_marker, DEFAULT_BINARY_MARKER);
    assert_eq!(doc.objects.len(), 5);
    assert_eq!(doc.root(), Some(ObjectId::new(1, 0)));
    assert_eq!(doc.xref.entries[0], XrefEntry::FREE_HEAD);
    match &doc.get(4).unwrap().value {
        PdfValue::Stream(s) => assert_eq!(s.data, b"BT ET"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn serialize_then_parse_is_isomorphic() {
    let doc = parse_document(&with_xref(MINIMAL)).unwrap();
    let bytes = serialize_document(&doc);
    let again = parse_document(&bytes).unwrap();
    assert!(doc.same_object_graph(&again));
    assert_eq!(serialize_document(&again), bytes);
}

#[test]
fn emitted_offsets_point_at_object_headers() {
    let doc = parse_document(&with_xref(MINIMAL)).unwrap();
    let bytes = serialize_document(&doc);
    let again = parse_document(&bytes).unwrap();
    assert_eq!(again.xref.entries.len(), 6);
    for (num, e) in again.xref.entries.iter().enumerate().filter(|(_, e)| e.in_use) {
        let head = format!("{num} {} obj", e.generation);
        assert!(bytes[e.offset as usize..].starts_with(head.as_bytes()), "object {num}");
    }
    assert!(bytes.ends_with(b"%%EOF\n"));
}

#[test]
fn three_objects_give_subsection_of_four() {
    let mut doc = PdfDocument::new(ObjectId::new(1, 0));
    doc.insert(ObjectId::new(1, 0), PdfValue::Dictionary([("Type", PdfValue::name("Catalog"))].into_iter().collect()));
    doc.add_object(PdfValue::Integer(1));
    doc.add_object(PdfValue::Null);
    let bytes = serialize_document(&doc);
    assert!(parser::find(&bytes, b"xref\n0 4\n").is_some());
}

#[test]
fn wrong_offsets_fall_back_to_scan() {
    let mut bytes = with_xref(MINIMAL);
    let xref = parser::rfind(&bytes, b"\nxref\n").unwrap() + 1;
    let line = xref + 5 + 4 + 20 + 20;
    bytes[line..line + 10].copy_from_slice(b"0000000003");
    let doc = parse_document(&bytes).unwrap();
    assert_eq!(doc.objects.len(), 5);
}

#[test]
fn bad_startxref_falls_back_to_scan() {
    let bytes = with_xref(MINIMAL);
    let at = parser::rfind(&bytes, b"startxref\n").unwrap() + 10;
    let mut broken = bytes[..at].to_vec();
    broken.extend_from_slice(b"99999\n%%EOF\n");
    let doc = parse_document(&broken).unwrap();
    assert_eq!(doc.objects.len(), 5);
    assert_eq!(doc.root(), Some(ObjectId::new(1, 0)));
}

#[test]
fn header_is_required() {
    assert!(matches!(parse_document(b"hello world"), Err(PdfError::MalformedHeader)));
}

#[test]
fn missing_eof_is_missing_trailer() {
    let mut bytes = with_xref(MINIMAL);
    bytes.truncate(bytes.len() - 6);
    assert!(matches!(parse_document(&bytes), Err(PdfError::MissingTrailer)));
}

#[test]
fn short_xref_entry_is_rejected() {
    let mut bytes = with_xref(MINIMAL);
    let xref = parser::rfind(&bytes, b"\nxref\n").unwrap() + 1;
    let line = xref + 5 + 4 + 20;
    bytes[line + 3] = b'x';
    assert!(matches!(parse_document(&bytes), Err(PdfError::BadXrefEntry { .. })));
}

#[test]
fn xref_streams_are_unsupported() {
    let body = b"%PDF-1.7\n%\xe2\xe3\xcf\xd3\n\
1 0 obj\n<</Type /Catalog>>\nendobj\n\
2 0 obj\n<</Type /XRef /Size 3 /W [1 2 1] /Root 1 0 R /Length 0>>\nstream\n\nendstream\nendobj\n";
    let mut bytes = body.to_vec();
    let at = parser::find(&bytes, b"2 0 obj").unwrap();
    bytes.extend_from_slice(format!("startxref\n{at}\n%%EOF\n").as_bytes());
    assert!(matches!(parse_document(&bytes), Err(PdfError::Unsupported(_))));
}

#[test]
fn incremental_update_last_revision_wins() {
    let mut bytes = with_xref(MINIMAL);
    let prev = {
        let text = String::from_utf8_lossy(&bytes).into_owned();
        let at = text.rfind("startxref\n").unwrap() + 10;
        text[at..].lines().next().unwrap().to_owned()
    };
    let obj_at = bytes.len();
    bytes.extend_from_slice(b"3 0 obj\n<</Type /Page>>\nendobj\n6 0 obj\n(new)\nendobj\n");
    let xref_at = bytes.len();
    bytes.extend_from_slice(
        format!(
            "xref\n0 1\n0000000000 65535 f \n3 1\n{obj_at:010} 00000 n \n6 1\n{:010} 00000 n \n\
trailer\n<</Size 7 /Root 1 0 R /Prev {prev}>>\nstartxref\n{xref_at}\n%%EOF\n",
            obj_at + 31
        )
        .as_bytes(),
    );
    let doc = parse_document(&bytes).unwrap();
    assert_eq!(doc.objects.len(), 6);
    assert_eq!(doc.get(3).unwrap().value.as_dict().unwrap().len(), 1);
    assert_eq!(doc.get(6).unwrap().value, PdfValue::LiteralString(b"new".to_vec()));
    match &doc.get(4).unwrap().value {
        PdfValue::Stream(s) => assert_eq!(s.data, b"BT ET"),
        other => panic!("{other:?}"),
    }
    let flat = serialize_document(&doc);
    assert!(parser::find(&flat, b"/Prev").is_none());
}

#[test]
fn file_id_accessors() {
    let mut doc = PdfDocument::new(ObjectId::new(1, 0));
    assert!(doc.file_id().is_none());
    doc.set_file_id(vec![7; 16], vec![8; 16]);
    let (a, b) = doc.file_id().unwrap();
    assert_eq!((a, b), (&[7u8; 16][..], &[8u8; 16][..]));
}
