//! Object-level grammar: tokens, direct values and `N G obj ... endobj`.

use super::value::{Dictionary, ObjectId, PdfValue, Stream};
use super::PdfError;

pub(crate) fn is_whitespace(b: u8) -> bool {
    matches!(b, b'\0' | b'\t' | b'\n' | b'\x0c' | b'\r' | b' ')
}

pub(crate) fn is_delimiter(b: u8) -> bool {
    matches!(b, b'(' | b')' | b'<' | b'>' | b'[' | b']' | b'{' | b'}' | b'/' | b'%')
}

fn is_regular(b: u8) -> bool {
    !is_whitespace(b) && !is_delimiter(b)
}

/// Resolves an indirect `Length` while a stream body is being read.
pub(crate) trait LengthResolver {
    fn resolve_length(&mut self, id: ObjectId) -> Option<usize>;
}

impl LengthResolver for () {
    fn resolve_length(&mut self, _: ObjectId) -> Option<usize> {
        None
    }
}

pub(crate) struct Parser<'a> {
    pub(crate) data: &'a [u8],
    pub(crate) pos: usize,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(data: &'a [u8], pos: usize) -> Self {
        Self { data, pos }
    }

    fn peek(&self) -> Option<u8> {
        self.data.get(self.pos).copied()
    }

    fn syntax(&self, msg: impl Into<String>) -> PdfError {
        PdfError::Syntax { offset: self.pos, msg: msg.into() }
    }

    pub(crate) fn skip_ws(&mut self) {
        while let Some(b) = self.peek() {
            if is_whitespace(b) {
                self.pos += 1;
            } else if b == b'%' {
                while let Some(c) = self.peek() {
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn regular_run(&mut self) -> &'a [u8] {
        let start = self.pos;
        while matches!(self.peek(), Some(b) if is_regular(b)) {
            self.pos += 1;
        }
        &self.data[start..self.pos]
    }

    /// Consumes `kw` if it is the next token.
    pub(crate) fn eat_keyword(&mut self, kw: &[u8]) -> bool {
        self.skip_ws();
        let save = self.pos;
        if self.regular_run() == kw {
            true
        } else {
            self.pos = save;
            false
        }
    }

    /// Reads an unsigned integer token without consuming anything on failure.
    pub(crate) fn unsigned(&mut self) -> Option<u64> {
        self.skip_ws();
        let save = self.pos;
        let run = self.regular_run();
        if !run.is_empty() && run.iter().all(u8::is_ascii_digit) {
            if let Some(v) = std::str::from_utf8(run).ok().and_then(|s| s.parse().ok()) {
                return Some(v);
            }
        }
        self.pos = save;
        None
    }

    /// Parses `N G obj`, returning the id.
    pub(crate) fn object_header(&mut self) -> Option<ObjectId> {
        let save = self.pos;
        let parsed = (|| {
            let num = u32::try_from(self.unsigned()?).ok()?;
            let gen = u16::try_from(self.unsigned()?).ok()?;
            self.eat_keyword(b"obj").then_some(ObjectId::new(num, gen))
        })();
        if parsed.is_none() {
            self.pos = save;
        }
        parsed
    }

    pub(crate) fn parse_value(&mut self) -> Result<PdfValue, PdfError> {
        self.skip_ws();
        let b = self.peek().ok_or_else(|| self.syntax("unexpected end of data"))?;
        match b {
            b'/' => {
                self.pos += 1;
                Ok(PdfValue::Name(self.name_body()?))
            }
            b'(' => Ok(PdfValue::LiteralString(self.literal_string()?)),
            b'<' if self.data.get(self.pos + 1) == Some(&b'<') => {
                self.pos += 2;
                Ok(PdfValue::Dictionary(self.dictionary_body()?))
            }
            b'<' => Ok(PdfValue::HexString(self.hex_string()?)),
            b'[' => {
                self.pos += 1;
                let mut items = Vec::new();
                loop {
                    self.skip_ws();
                    match self.peek() {
                        Some(b']') => {
                            self.pos += 1;
                            break;
                        }
                        Some(_) => items.push(self.parse_value()?),
                        None => return Err(self.syntax("unterminated array")),
                    }
                }
                Ok(PdfValue::Array(items))
            }
            b'+' | b'-' | b'.' | b'0'..=b'9' => self.number_or_reference(),
            _ if is_regular(b) => {
                let word = self.regular_run();
                match word {
                    b"true" => Ok(PdfValue::Boolean(true)),
                    b"false" => Ok(PdfValue::Boolean(false)),
                    b"null" => Ok(PdfValue::Null),
                    other => {
                        self.pos -= other.len();
                        Err(self.syntax(format!("unexpected token '{}'", String::from_utf8_lossy(other))))
                    }
                }
            }
            _ => Err(self.syntax(format!("unexpected byte 0x{b:02x}"))),
        }
    }

    fn number_or_reference(&mut self) -> Result<PdfValue, PdfError> {
        let start = self.pos;
        let tok = self.regular_run();
        let text = std::str::from_utf8(tok).map_err(|_| self.syntax("bad number"))?;
        if !text.contains('.') {
            let value: i64 = match text.parse() {
                Ok(v) => v,
                // Out-of-range integers degrade to reals.
                Err(_) => {
                    return text
                        .parse::<f64>()
                        .map(PdfValue::Real)
                        .map_err(|_| PdfError::Syntax { offset: start, msg: format!("bad number '{text}'") })
                }
            };
            // Possible `N G R`.
            if value >= 0 && !text.starts_with(['+', '-']) {
                let save = self.pos;
                if let Some(gen) = self.unsigned() {
                    if self.eat_keyword(b"R") {
                        if let (Ok(num), Ok(gen)) = (u32::try_from(value), u16::try_from(gen)) {
                            return Ok(PdfValue::Reference(ObjectId::new(num, gen)));
                        }
                    }
                }
                self.pos = save;
            }
            return Ok(PdfValue::Integer(value));
        }
        let normalized = if text.starts_with('.') || text.starts_with("-.") || text.starts_with("+.") {
            text.replacen('.', "0.", 1)
        } else {
            text.to_string()
        };
        normalized
            .trim_end_matches('.')
            .parse::<f64>()
            .map(PdfValue::Real)
            .map_err(|_| PdfError::Syntax { offset: start, msg: format!("bad number '{text}'") })
    }

    fn name_body(&mut self) -> Result<Vec<u8>, PdfError> {
        let raw = self.regular_run();
        let mut out = Vec::with_capacity(raw.len());
        let mut i = 0;
        while i < raw.len() {
            if raw[i] == b'#' && i + 2 < raw.len() {
                let digits = std::str::from_utf8(&raw[i + 1..i + 3]).unwrap_or("");
                if let Ok(v) = u8::from_str_radix(digits, 16) {
                    out.push(v);
                    i += 3;
                    continue;
                }
            }
            out.push(raw[i]);
            i += 1;
        }
        Ok(out)
    }

    fn literal_string(&mut self) -> Result<Vec<u8>, PdfError> {
        let start = self.pos;
        self.pos += 1;
        let mut depth = 1usize;
        let mut out = Vec::new();
        loop {
            let b = self
                .peek()
                .ok_or(PdfError::Syntax { offset: start, msg: "unterminated literal string".into() })?;
            self.pos += 1;
            match b {
                b'(' => {
                    depth += 1;
                    out.push(b);
                }
                b')' => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok(out);
                    }
                    out.push(b);
                }
                b'\r' => {
                    // Bare EOL of any form reads as a single LF.
                    if self.peek() == Some(b'\n') {
                        self.pos += 1;
                    }
                    out.push(b'\n');
                }
                b'\\' => {
                    let e = self
                        .peek()
                        .ok_or(PdfError::Syntax { offset: start, msg: "unterminated literal string".into() })?;
                    self.pos += 1;
                    match e {
                        b'n' => out.push(b'\n'),
                        b'r' => out.push(b'\r'),
                        b't' => out.push(b'\t'),
                        b'b' => out.push(0x08),
                        b'f' => out.push(0x0c),
                        b'(' | b')' | b'\\' => out.push(e),
                        b'\r' => {
                            if self.peek() == Some(b'\n') {
                                self.pos += 1;
                            }
                        }
                        b'\n' => {}
                        b'0'..=b'7' => {
                            let mut v = (e - b'0') as u32;
                            for _ in 0..2 {
                                match self.peek() {
                                    Some(d @ b'0'..=b'7') => {
                                        v = v * 8 + (d - b'0') as u32;
                                        self.pos += 1;
                                    }
                                    _ => break,
                                }
                            }
                            out.push(v as u8);
                        }
                        // Unknown escapes drop the backslash.
                        other => out.push(other),
                    }
                }
                _ => out.push(b),
            }
        }
    }

    fn hex_string(&mut self) -> Result<Vec<u8>, PdfError> {
        let start = self.pos;
        self.pos += 1;
        let mut nibbles = Vec::new();
        loop {
            let b = self
                .peek()
                .ok_or(PdfError::Syntax { offset: start, msg: "unterminated hex string".into() })?;
            self.pos += 1;
            match b {
                b'>' => break,
                _ if is_whitespace(b) => {}
                _ => {
                    let v = (b as char)
                        .to_digit(16)
                        .ok_or(PdfError::Syntax { offset: self.pos - 1, msg: "bad hex digit".into() })?;
                    nibbles.push(v as u8);
                }
            }
        }
        if nibbles.len() % 2 == 1 {
            nibbles.push(0);
        }
        Ok(nibbles.chunks_exact(2).map(|p| (p[0] << 4) | p[1]).collect())
    }

    fn dictionary_body(&mut self) -> Result<Dictionary, PdfError> {
        let mut dict = Dictionary::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'>') if self.data.get(self.pos + 1) == Some(&b'>') => {
                    self.pos += 2;
                    return Ok(dict);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let key = self.name_body()?;
                    let value = self.parse_value()?;
                    dict.set(key, value);
                }
                Some(_) => return Err(self.syntax("expected name key in dictionary")),
                None => return Err(self.syntax("unterminated dictionary")),
            }
        }
    }

    /// Parses the body of an indirect object positioned just after `obj`,
    /// including a trailing stream, up to and including `endobj`.
    pub(crate) fn object_body(
        &mut self,
        id: ObjectId,
        resolver: &mut dyn LengthResolver,
    ) -> Result<PdfValue, PdfError> {
        let header_pos = self.pos;
        let unterminated = |_| PdfError::UnterminatedObject { num: id.num, gen: id.gen, offset: header_pos };
        let value = self.parse_value().map_err(|e| match e {
            PdfError::Syntax { msg, .. } if msg.starts_with("unterminated") || msg.contains("end of data") => {
                unterminated(())
            }
            other => other,
        })?;
        let value = match value {
            PdfValue::Dictionary(dict) if self.eat_keyword(b"stream") => {
                PdfValue::Stream(self.stream_body(dict, id, resolver)?)
            }
            other => other,
        };
        if !self.eat_keyword(b"endobj") {
            // Tolerate a missing endobj when the next object starts right away.
            self.skip_ws();
            let save = self.pos;
            let next_is_object = self.object_header().is_some();
            self.pos = save;
            if !next_is_object && !self.at_structure_keyword() {
                return Err(unterminated(()));
            }
        }
        Ok(value)
    }

    fn at_structure_keyword(&self) -> bool {
        let rest = &self.data[self.pos..];
        rest.starts_with(b"xref") || rest.starts_with(b"trailer") || rest.starts_with(b"startxref")
    }

    fn stream_body(
        &mut self,
        dict: Dictionary,
        id: ObjectId,
        resolver: &mut dyn LengthResolver,
    ) -> Result<Stream, PdfError> {
        // `stream` is followed by CRLF or LF.
        if self.peek() == Some(b'\r') {
            self.pos += 1;
        }
        if self.peek() == Some(b'\n') {
            self.pos += 1;
        }
        let start = self.pos;
        let declared = match dict.get(b"Length") {
            Some(PdfValue::Integer(n)) if *n >= 0 => Some(*n as usize),
            Some(PdfValue::Reference(r)) => resolver.resolve_length(*r),
            _ => None,
        };
        if let Some(len) = declared {
            if let Some(end) = start.checked_add(len).filter(|e| *e <= self.data.len()) {
                let mut p = Parser::new(self.data, end);
                if p.eat_keyword(b"endstream") {
                    self.pos = p.pos;
                    return Ok(Stream::new(dict, self.data[start..end].to_vec()));
                }
            }
        }
        // Length missing or wrong: fall back to the endstream keyword.
        let rel = find(&self.data[start..], b"endstream").ok_or(PdfError::UnterminatedObject {
            num: id.num,
            gen: id.gen,
            offset: start,
        })?;
        let mut end = start + rel;
        if end > start && self.data[end - 1] == b'\n' {
            end -= 1;
            if end > start && self.data[end - 1] == b'\r' {
                end -= 1;
            }
        } else if end > start && self.data[end - 1] == b'\r' {
            end -= 1;
        }
        self.pos = start + rel + b"endstream".len();
        Ok(Stream::new(dict, self.data[start..end].to_vec()))
    }
}

pub(crate) fn find(haystack: &[u8], needle: &[u8]) -> Option<usize> {
    haystack.windows(needle.len()).position(|w| w == needle)
}

pub(crate) fn rfind(haystack: &[u8], needle: &[u8]) -> Option<usize> {
    haystack.windows(needle.len()).rposition(|w| w == needle)
}

/// Parses a single direct value from `bytes`.
pub fn parse_value(bytes: &[u8]) -> Result<PdfValue, PdfError> {
    Parser::new(bytes, 0).parse_value()
}
