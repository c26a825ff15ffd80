use std::collections::BTreeSet;

use proptest::prelude::*;

use pdf_lwc::bench::stats::{error_margin, mean};
use pdf_lwc::ciphers::{ascon_permutation, xoodoo_permutation, AsconState, CipherSuite, XoodooState};
use pdf_lwc::crypt::{decrypt_document, encrypt_document};
use pdf_lwc::fixtures::{generate, random_document, FixtureOptions};
use pdf_lwc::pdf::{collect_encryption_targets, parse_document, serialize_document, Dictionary, ObjectId, PdfDocument, PdfValue, Stream};
use pdf_lwc::security::Credentials;

fn suite() -> impl Strategy<Value = CipherSuite> {
    prop::sample::select(CipherSuite::ALL.to_vec())
}

fn opaque_doc(data: Vec<u8>) -> PdfDocument {
    let mut doc = PdfDocument::new(ObjectId::new(1, 0));
    doc.insert(ObjectId::new(1, 0), PdfValue::Dictionary([("Type", PdfValue::name("Catalog"))].into_iter().collect()));
    doc.add_object(PdfValue::Stream(Stream::new(Dictionary::new(), data)));
    doc
}

/// Strings and streams reachable from the catalog, each object visited once.
fn reachable_payloads(doc: &PdfDocument) -> usize {
    fn walk(doc: &PdfDocument, v: &PdfValue, seen: &mut BTreeSet<u32>) -> usize {
        match v {
            PdfValue::LiteralString(_) | PdfValue::HexString(_) => 1,
            PdfValue::Array(a) => a.iter().map(|x| walk(doc, x, seen)).sum(),
            PdfValue::Dictionary(d) => d.iter().map(|(_, x)| walk(doc, x, seen)).sum(),
            PdfValue::Stream(s) => 1 + s.dict.iter().map(|(_, x)| walk(doc, x, seen)).sum::<usize>(),
            PdfValue::Reference(id) if seen.insert(id.num) => doc.get(id.num).map_or(0, |o| walk(doc, &o.value, seen)),
            _ => 0,
        }
    }
    let root = doc.root().unwrap();
    let mut seen = BTreeSet::new();
    walk(doc, &PdfValue::Reference(root), &mut seen)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reparse_is_isomorphic(seed in any::<u64>(), sig in any::<bool>()) {
        let doc = parse_document(&serialize_document(&random_document(seed, sig))).unwrap();
        let again = parse_document(&serialize_document(&doc)).unwrap();
        prop_assert!(again.same_object_graph(&doc));
    }

    #[test]
    fn xref_offsets_point_at_headers(seed in any::<u64>()) {
        let bytes = serialize_document(&random_document(seed, seed % 2 == 0));
        let doc = parse_document(&bytes).unwrap();
        for (num, e) in doc.xref.entries.iter().enumerate().filter(|(_, e)| e.in_use) {
            let head = format!("{num} {} obj", e.generation);
            prop_assert!(bytes[e.offset as usize..].starts_with(head.as_bytes()));
        }
    }

    #[test]
    fn targets_cover_reachable_payloads(seed in any::<u64>(), pages in 1usize..5, annots in 0usize..3, flate in any::<bool>()) {
        let opts = FixtureOptions { pages, annotations_per_page: annots, flate, info: false, signature: false, ..FixtureOptions::default() };
        let doc = generate(&opts, seed);
        prop_assert_eq!(collect_encryption_targets(&doc).len(), reachable_payloads(&doc));
    }

    #[test]
    fn stream_bytes_survive_parsing(data in prop::collection::vec(any::<u8>(), 0..600)) {
        let mut data = data;
        data.extend_from_slice(b"\nendstream\nendobj\n");
        let doc = parse_document(&serialize_document(&opaque_doc(data.clone()))).unwrap();
        prop_assert!(matches!(&doc.get(2).unwrap().value, PdfValue::Stream(s) if s.data == data));
    }

    #[test]
    fn cipher_length_law_and_determinism(
        s in suite(),
        key in any::<[u8; 16]>(),
        nonce in any::<[u8; 16]>(),
        ad in prop::collection::vec(any::<u8>(), 0..40),
        pt in prop::collection::vec(any::<u8>(), 0..100),
    ) {
        let (ct, tag) = s.encrypt(&key, &nonce, &ad, &pt);
        if s.is_aead() {
            prop_assert_eq!(ct.len(), pt.len());
            prop_assert_eq!(tag.len(), 16);
        } else {
            prop_assert_eq!(ct.len(), (pt.len() / 16 + 1) * 16);
        }
        let other = std::thread::spawn(move || s.encrypt(&key, &nonce, &ad, &pt)).join().unwrap();
        prop_assert_eq!((ct, tag), other);
    }

    #[test]
    fn permutations_separate_distinct_states(a in any::<[u64; 5]>(), b in any::<[u64; 5]>(), c in any::<[u32; 12]>(), d in any::<[u32; 12]>()) {
        prop_assume!(a != b && c != d);
        prop_assert_ne!(ascon_permutation(AsconState { x: a }, 12).x, ascon_permutation(AsconState { x: b }, 12).x);
        prop_assert_ne!(xoodoo_permutation(XoodooState { lanes: c }).lanes, xoodoo_permutation(XoodooState { lanes: d }).lanes);
    }

    #[test]
    fn encryption_keeps_structure(seed in any::<u64>(), s in suite()) {
        let doc = random_document(seed, seed % 3 == 0);
        let enc = encrypt_document(&doc, &Credentials::new("o", "u"), -4, s, Some(seed)).unwrap();
        // One object more: the Encrypt dictionary.
        prop_assert_eq!(enc.objects.len(), doc.objects.len() + 1);
        for (num, obj) in &doc.objects {
            let after = &enc.get(*num).unwrap().value;
            match (&obj.value, after) {
                (PdfValue::Stream(a), PdfValue::Stream(b)) => {
                    prop_assert_eq!(a.dict.keys().collect::<Vec<_>>(), b.dict.keys().collect::<Vec<_>>());
                    prop_assert_eq!(b.dict.get(b"Length"), Some(&PdfValue::Integer(b.data.len() as i64)));
                }
                (PdfValue::Dictionary(a), PdfValue::Dictionary(b)) => {
                    prop_assert_eq!(a.keys().collect::<Vec<_>>(), b.keys().collect::<Vec<_>>());
                }
                (a, b) => prop_assert_eq!(std::mem::discriminant(a), std::mem::discriminant(b)),
            }
        }
        let dec = decrypt_document(&parse_document(&serialize_document(&enc)).unwrap(), b"u", true).unwrap();
        prop_assert!(dec.same_content(&doc));
    }

    #[test]
    fn statistics_are_sane(samples in prop::collection::vec(0.001f64..1e6, 1..50)) {
        let m = mean(&samples);
        let lo = samples.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(m >= lo * (1.0 - 1e-12) && m <= hi * (1.0 + 1e-12));
        prop_assert!(error_margin(&samples, 0.999) >= 0.0);
    }
}
