#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;

use pdf_lwc::pdf::{PdfDocument, PdfValue};

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

fn tool() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../tools/pypdf_interop.py")
}

pub fn pypdf_available() -> bool {
    Command::new("python3")
        .args(["-c", "import pypdf"])
        .output()
        .map(|o| o.status.success())
        .unwrap_or(false)
}

/// Streams and Info strings as pypdf sees them after decrypting.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct PypdfView {
    pub streams: Vec<Vec<u8>>,
    pub info: BTreeMap<String, Vec<u8>>,
}

fn python(args: &[&str]) -> Result<String, String> {
    let out = Command::new("python3")
        .arg(tool())
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(String::from_utf8_lossy(&out.stderr).into_owned());
    }
    Ok(String::from_utf8_lossy(&out.stdout).into_owned())
}

pub fn pypdf_dump(path: &Path, password: &str) -> Result<PypdfView, String> {
    let text = python(&["dump", path.to_str().unwrap(), password])?;
    let mut view = PypdfView::default();
    for line in text.lines() {
        let parts: Vec<&str> = line.split(' ').collect();
        match parts.as_slice() {
            ["stream"] => view.streams.push(Vec::new()),
            ["stream", h] => view.streams.push(hex::decode(h).map_err(|e| e.to_string())?),
            ["info", k] => {
                view.info.insert(k.to_string(), Vec::new());
            }
            ["info", k, h] => {
                view.info.insert(k.to_string(), hex::decode(h).map_err(|e| e.to_string())?);
            }
            _ => return Err(format!("unexpected line {line:?}")),
        }
    }
    Ok(view)
}

pub fn pypdf_encrypt(src: &Path, dst: &Path, user: &str, owner: &str) -> Result<(), String> {
    python(&["encrypt", src.to_str().unwrap(), dst.to_str().unwrap(), user, owner]).map(|_| ())
}

/// Stream data in object-number order.
pub fn streams(doc: &PdfDocument) -> Vec<Vec<u8>> {
    doc.objects
        .values()
        .filter_map(|o| match &o.value {
            PdfValue::Stream(s) => Some(s.data.clone()),
            _ => None,
        })
        .collect()
}

/// Info dictionary strings.
pub fn info_strings(doc: &PdfDocument) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let info = doc.trailer.dict.get(b"Info").and_then(|v| doc.resolve(v)).and_then(PdfValue::as_dict);
    if let Some(d) = info {
        for (k, v) in d.iter() {
            if let Some(b) = v.as_string_bytes() {
                out.insert(String::from_utf8_lossy(k).into_owned(), b.to_vec());
            }
        }
    }
    out
}

pub fn sorted(mut v: Vec<Vec<u8>>) -> Vec<Vec<u8>> {
    v.sort();
    v
}
