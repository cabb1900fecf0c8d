//! Turning raw bytes into a message store.

use tpir_core::{MessageStore, SchemeParams, SeededRng};

use crate::error::{SimError, SimResult};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Bytes(Vec<u8>),
    /// Uniformly random symbols from the given seed.
    Seeded(u64),
}

impl Source {
    /// `seed:<n>` selects seeded random content; anything else is an error.
    pub fn parse_directive(s: &str) -> SimResult<Self> {
        s.strip_prefix("seed:")
            .and_then(|n| n.trim().parse().ok())
            .map(Source::Seeded)
            .ok_or_else(|| SimError::BadDirective(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    /// Reduce each chunk modulo q.
    #[default]
    Reduce,
    /// Reject chunks that are not already below q.
    Strict,
}

/// Reads `K * L` little-endian symbols of the field's fixed width.
pub fn ingest_messages(source: &Source, params: &SchemeParams, mode: Mode) -> SimResult<MessageStore> {
    let bytes = match source {
        Source::Seeded(seed) => return Ok(MessageStore::random(params, &mut SeededRng::new(*seed))),
        Source::Bytes(b) => b,
    };
    let q = params.modulus();
    let width = q.width_bytes();
    let (k, l) = (params.messages(), params.message_len());
    let expected = k * l * width;
    if bytes.len() != expected {
        return Err(SimError::WrongLength {
            expected,
            actual: bytes.len(),
        });
    }
    let mut symbols = Vec::with_capacity(k * l);
    for (index, chunk) in bytes.chunks_exact(width).enumerate() {
        let mut le = [0u8; 8];
        le[..width].copy_from_slice(chunk);
        let value = u64::from_le_bytes(le);
        if mode == Mode::Strict && value >= q.value() {
            return Err(SimError::OutOfRange {
                index,
                value,
                modulus: q.value(),
            });
        }
        symbols.push(q.reduce(value));
    }
    let messages = symbols.chunks(l).map(<[u64]>::to_vec).collect();
    Ok(MessageStore::new(q, messages)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> SchemeParams {
        SchemeParams::new(2, 3, 2, 3).unwrap()
    }

    #[test]
    fn zero_stream_is_zero_store() {
        let p = params();
        let store = ingest_messages(&Source::Bytes(vec![0; 18]), &p, Mode::Strict).unwrap();
        assert_eq!(store, MessageStore::zeros(&p));
    }

    #[test]
    fn seeded_directive_is_deterministic() {
        let p = params();
        let s = Source::parse_directive("seed:42").unwrap();
        assert_eq!(ingest_messages(&s, &p, Mode::Reduce).unwrap(), ingest_messages(&s, &p, Mode::Reduce).unwrap());
        assert!(Source::parse_directive("random").is_err());
    }

    #[test]
    fn short_stream_rejected() {
        let err = ingest_messages(&Source::Bytes(vec![0; 17]), &params(), Mode::Reduce).unwrap_err();
        assert!(matches!(err, SimError::WrongLength { expected: 18, actual: 17 }));
    }

    #[test]
    fn strict_and_reducing_modes() {
        let p = params();
        let mut bytes = vec![1u8; 18];
        bytes[5] = 200;
        let store = ingest_messages(&Source::Bytes(bytes.clone()), &p, Mode::Reduce).unwrap();
        assert_eq!(store.message(0)[5], 200 % 11);
        let err = ingest_messages(&Source::Bytes(bytes), &p, Mode::Strict).unwrap_err();
        assert!(matches!(err, SimError::OutOfRange { index: 5, value: 200, .. }));
    }

    #[test]
    fn multi_byte_width() {
        let p = SchemeParams::new(1, 2, 1, 2)
            .unwrap()
            .with_modulus(tpir_core::FieldModulus::new(257).unwrap())
            .unwrap();
        let store = ingest_messages(&Source::Bytes(vec![2, 0, 0, 1]), &p, Mode::Strict).unwrap();
        assert_eq!(store.message(0), &[2, 256]);
        assert!(ingest_messages(&Source::Bytes(vec![1, 1, 0, 1]), &p, Mode::Strict).is_err());
    }
}
