//! Byte formats for queries and answers.
//!
//! All integers are little-endian; field elements use the fixed width of
//! [`FieldModulus::width_bytes`].
//!
//! ```text
//! query:  "TPIR" | version u8 | width u8 | q u64 | K u32 | L u32 | D u32 | D*K*L elements
//! answer: "TPIR" | version u8 | width u8 | db u32 | D u32 | D elements
//! ```
//!
//! The answer header does not repeat `q`; the reader supplies the modulus it
//! expects and the width byte is checked against it.

use std::fmt;

use thiserror::Error;

use crate::field::FieldModulus;
use crate::linalg::Matrix;
use crate::scheme::{Answer, Query};

pub const MAGIC: [u8; 4] = *b"TPIR";
pub const VERSION: u8 = 1;
pub const QUERY_HEADER_LEN: usize = 4 + 1 + 1 + 8 + 4 + 4 + 4;
pub const ANSWER_HEADER_LEN: usize = 4 + 1 + 1 + 4 + 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {offset}: {kind}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    BadMagic([u8; 4]),
    UnsupportedVersion(u8),
    Truncated { expected: usize, actual: usize },
    WidthMismatch { expected: usize, found: usize },
    BadModulus(u64),
    ValueOutOfRange(u64),
    TrailingBytes(usize),
    Inconsistent(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::BadMagic(m) => write!(f, "bad magic {m:02x?}"),
            Self::UnsupportedVersion(v) => write!(f, "unsupported version {v}"),
            Self::Truncated { expected, actual } => {
                write!(f, "truncated: expected {expected} bytes, got {actual}")
            }
            Self::WidthMismatch { expected, found } => {
                write!(f, "element width {found}, expected {expected}")
            }
            Self::BadModulus(q) => write!(f, "modulus {q} is not prime"),
            Self::ValueOutOfRange(v) => write!(f, "element {v} not below the modulus"),
            Self::TrailingBytes(n) => write!(f, "{n} trailing bytes"),
            Self::Inconsistent(msg) => f.write_str(msg),
        }
    }
}

/// Bounds-checked little-endian cursor.
pub(crate) struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub(crate) fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    fn fail(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            offset: self.pos,
            kind,
        }
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8], ParseError> {
        let end = self.pos + n;
        if end > self.bytes.len() {
            return Err(self.fail(ParseErrorKind::Truncated {
                expected: end,
                actual: self.bytes.len(),
            }));
        }
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    /// Fails unless at least `n` more bytes remain, without consuming them.
    pub(crate) fn need(&self, n: usize) -> Result<(), ParseError> {
        let end = self.pos.saturating_add(n);
        if end > self.bytes.len() {
            return Err(self.fail(ParseErrorKind::Truncated {
                expected: end,
                actual: self.bytes.len(),
            }));
        }
        Ok(())
    }

    pub(crate) fn u8(&mut self) -> Result<u8, ParseError> {
        Ok(self.take(1)?[0])
    }

    pub(crate) fn u32(&mut self) -> Result<u32, ParseError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    pub(crate) fn u64(&mut self) -> Result<u64, ParseError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    pub(crate) fn elements(&mut self, count: usize, modulus: FieldModulus) -> Result<Vec<u64>, ParseError> {
        let w = modulus.width_bytes();
        self.need(count.saturating_mul(w))?;
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let at = self.pos;
            let v = modulus.decode_raw(self.take(w)?);
            if v >= modulus.value() {
                return Err(ParseError {
                    offset: at,
                    kind: ParseErrorKind::ValueOutOfRange(v),
                });
            }
            out.push(v);
        }
        Ok(out)
    }

    fn header(&mut self) -> Result<usize, ParseError> {
        let magic: [u8; 4] = self.take(4)?.try_into().expect("4 bytes");
        if magic != MAGIC {
            return Err(ParseError {
                offset: 0,
                kind: ParseErrorKind::BadMagic(magic),
            });
        }
        let version = self.u8()?;
        if version != VERSION {
            return Err(ParseError {
                offset: 4,
                kind: ParseErrorKind::UnsupportedVersion(version),
            });
        }
        Ok(self.u8()? as usize)
    }

    pub(crate) fn finish(&self) -> Result<(), ParseError> {
        let extra = self.bytes.len() - self.pos;
        if extra > 0 {
            return Err(self.fail(ParseErrorKind::TrailingBytes(extra)));
        }
        Ok(())
    }
}

pub fn encode_query(query: &Query) -> Vec<u8> {
    let c = &query.coefficients;
    let q = c.modulus();
    let mut out = Vec::with_capacity(QUERY_HEADER_LEN + c.data().len() * q.width_bytes());
    out.extend_from_slice(&MAGIC);
    out.push(VERSION);
    out.push(q.width_bytes() as u8);
    out.extend_from_slice(&q.value().to_le_bytes());
    out.extend_from_slice(&(query.messages as u32).to_le_bytes());
    out.extend_from_slice(&(query.message_len() as u32).to_le_bytes());
    out.extend_from_slice(&(c.rows() as u32).to_le_bytes());
    for &x in c.data() {
        q.encode_value(x, &mut out);
    }
    out
}

pub fn decode_query(bytes: &[u8]) -> Result<Query, ParseError> {
    let mut r = Reader::new(bytes);
    let width = r.header()?;
    let q_at = r.pos;
    let q = r.u64()?;
    let modulus = FieldModulus::new(q).map_err(|_| ParseError {
        offset: q_at,
        kind: ParseErrorKind::BadModulus(q),
    })?;
    if width != modulus.width_bytes() {
        return Err(ParseError {
            offset: 5,
            kind: ParseErrorKind::WidthMismatch {
                expected: modulus.width_bytes(),
                found: width,
            },
        });
    }
    let messages = r.u32()? as usize;
    let message_len = r.u32()? as usize;
    let rows = r.u32()? as usize;
    if messages == 0 {
        return Err(ParseError {
            offset: 14,
            kind: ParseErrorKind::Inconsistent("query declares zero messages".into()),
        });
    }
    let cols = messages
        .checked_mul(message_len)
        .ok_or_else(|| r.fail(ParseErrorKind::Inconsistent("K*L overflows".into())))?;
    let data = r.elements(rows.saturating_mul(cols), modulus)?;
    r.finish()?;
    let coefficients = Matrix::new(rows, cols, modulus, data).expect("length checked");
    Ok(Query {
        messages,
        coefficients,
    })
}

pub fn encode_answer(answer: &Answer) -> Vec<u8> {
    let q = answer.modulus;
    let mut out = Vec::with_capacity(ANSWER_HEADER_LEN + answer.values.len() * q.width_bytes());
    out.extend_from_slice(&MAGIC);
    out.push(VERSION);
    out.push(q.width_bytes() as u8);
    out.extend_from_slice(&(answer.db as u32).to_le_bytes());
    out.extend_from_slice(&(answer.values.len() as u32).to_le_bytes());
    for &x in &answer.values {
        q.encode_value(x, &mut out);
    }
    out
}

pub fn decode_answer(bytes: &[u8], modulus: FieldModulus) -> Result<Answer, ParseError> {
    let mut r = Reader::new(bytes);
    let width = r.header()?;
    if width != modulus.width_bytes() {
        return Err(ParseError {
            offset: 5,
            kind: ParseErrorKind::WidthMismatch {
                expected: modulus.width_bytes(),
                found: width,
            },
        });
    }
    let db = r.u32()? as usize;
    let len = r.u32()? as usize;
    let values = r.elements(len, modulus)?;
    r.finish()?;
    Ok(Answer { db, modulus, values })
}
