use num_bigint::BigInt;

use super::{length_as_width, BitReader, Codebook};
use crate::codes::{parse_code_spec, CodeHandle};
use crate::construct::ConstructConfig;
use crate::error::{Error, Result};
use crate::numerics::{Dyadic, Nat};

/// File magic, ASCII `NATC`.
pub const NATC_MAGIC: [u8; 4] = *b"NATC";
pub const NATC_VERSION: u8 = 0x01;

const FIXED_HEADER: usize = 4 + 1 + 2 + 8;

/// An encoded symbol sequence together with the code-spec that produced it.
///
/// The on-disk layout is `NATC`, version byte, spec length (u16 BE), spec
/// (UTF-8), bit count (u64 BE), then the MSB-first payload zero-padded to a
/// byte boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedStream {
    spec: String,
    bit_count: u64,
    payload: Vec<u8>,
}

impl EncodedStream {
    pub fn new(spec: impl Into<String>, bit_count: u64, payload: Vec<u8>) -> Self {
        EncodedStream {
            spec: spec.into(),
            bit_count,
            payload,
        }
    }

    pub fn spec(&self) -> &str {
        &self.spec
    }

    pub fn bit_count(&self) -> u64 {
        self.bit_count
    }

    pub fn payload(&self) -> &[u8] {
        &self.payload
    }

    fn payload_offset(&self) -> u64 {
        (FIXED_HEADER + self.spec.len()) as u64
    }

    /// Payload is exactly `ceil(bit_count / 8)` bytes with zero padding.
    pub fn check_padding(&self) -> Result<()> {
        let expected = self.bit_count.div_ceil(8);
        if self.payload.len() as u64 != expected {
            return Err(Error::format(
                self.payload_offset(),
                format!(
                    "payload has {} bytes, bit count {} needs {expected}",
                    self.payload.len(),
                    self.bit_count
                ),
            ));
        }
        let used = (self.bit_count % 8) as u32;
        if used != 0 {
            let last = *self.payload.last().expect("non-empty when bits are used");
            if last & (0xFFu8 >> used) != 0 {
                return Err(Error::format(
                    self.payload_offset() + expected - 1,
                    "nonzero padding bits",
                ));
            }
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let spec_len =
            u16::try_from(self.spec.len()).map_err(|_| Error::format(5, "code spec longer than 65535 bytes"))?;
        let mut out = Vec::with_capacity(FIXED_HEADER + self.spec.len() + self.payload.len());
        out.extend_from_slice(&NATC_MAGIC);
        out.push(NATC_VERSION);
        out.extend_from_slice(&spec_len.to_be_bytes());
        out.extend_from_slice(self.spec.as_bytes());
        out.extend_from_slice(&self.bit_count.to_be_bytes());
        out.extend_from_slice(&self.payload);
        Ok(out)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 4 || bytes[..4] != NATC_MAGIC {
            return Err(Error::format(0, "missing NATC magic"));
        }
        match bytes.get(4) {
            Some(&NATC_VERSION) => {}
            Some(v) => return Err(Error::format(4, format!("unsupported version {v:#04x}"))),
            None => return Err(Error::format(4, "missing version byte")),
        }
        let spec_len = bytes.get(5..7).ok_or_else(|| Error::format(5, "missing spec length"))?;
        let spec_len = u16::from_be_bytes([spec_len[0], spec_len[1]]) as usize;
        let spec_end = 7 + spec_len;
        let spec = bytes
            .get(7..spec_end)
            .ok_or_else(|| Error::format(7, "spec runs past end of file"))?;
        let spec =
            std::str::from_utf8(spec).map_err(|e| Error::format(7 + e.valid_up_to() as u64, "spec is not UTF-8"))?;
        let count = bytes
            .get(spec_end..spec_end + 8)
            .ok_or_else(|| Error::format(spec_end as u64, "missing bit count"))?;
        let bit_count = u64::from_be_bytes(count.try_into().expect("eight bytes"));
        let stream = EncodedStream::new(spec, bit_count, bytes[spec_end + 8..].to_vec());
        stream.check_padding()?;
        Ok(stream)
    }
}

/// Concatenated canonical codewords of `symbols` under `c`.
pub fn encode_stream(c: &CodeHandle, symbols: &[Nat]) -> Result<EncodedStream> {
    Codebook::new(c.clone())?.encode(symbols)
}

/// Decode with the code named in the stream header.
pub fn decode_stream(stream: &EncodedStream) -> Result<Vec<Nat>> {
    let code = parse_code_spec(stream.spec())?.build(&ConstructConfig::default())?;
    Codebook::new(code)?.decode(stream)
}

/// Reference decoder: for each symbol walk `n = 0, 1, 2, ...` and stop at the
/// first `n` whose next `c(n)` bits, as an integer, are below
/// `partial_sum(c, n + 1) * 2^c(n)`. Cost is linear in the decoded values.
pub fn decode_stream_linear(stream: &EncodedStream, c: &CodeHandle) -> Result<Vec<Nat>> {
    c.require_monotone("decoding")?;
    stream.check_padding()?;
    let reader = BitReader::new(stream.payload(), stream.bit_count());
    let total = stream.bit_count();
    let mut out = Vec::new();
    let mut pos = 0u64;
    while pos < total {
        let remaining = total - pos;
        let mut below = Dyadic::zero();
        let mut n = 0u64;
        loop {
            let length = c.eval_u64(n)?;
            let width = length_as_width(&length)?;
            if width > remaining {
                return Err(Error::Truncated { bit_offset: pos });
            }
            below += &Dyadic::kraft_weight(&length)?;
            let boundary = below
                .scaled_exact(width)
                .ok_or_else(|| Error::contract("lengths are not monotone"))?;
            let v = BigInt::from(reader.peek_uint(pos, width));
            if v < boundary {
                out.push(Nat::from(n));
                pos += width;
                break;
            }
            n += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{alpha, elias_successor};

    #[test]
    fn file_layout() {
        let s = encode_stream(&alpha(), &[Nat::from(0u32)]).unwrap();
        let bytes = s.to_bytes().unwrap();
        let mut expected = b"NATC\x01\x00\x05alpha".to_vec();
        expected.extend_from_slice(&1u64.to_be_bytes());
        expected.push(0x00);
        assert_eq!(bytes, expected);
        assert_eq!(EncodedStream::from_bytes(&bytes).unwrap(), s);
        assert_eq!(decode_stream(&s).unwrap(), vec![Nat::from(0u32)]);
    }

    #[test]
    fn bad_headers() {
        let good = encode_stream(&alpha(), &[Nat::from(2u32)]).unwrap().to_bytes().unwrap();
        let mut b = good.clone();
        b[0] = b'X';
        assert!(matches!(
            EncodedStream::from_bytes(&b),
            Err(Error::Format { offset: 0, .. })
        ));
        let mut b = good.clone();
        b[4] = 2;
        assert!(matches!(
            EncodedStream::from_bytes(&b),
            Err(Error::Format { offset: 4, .. })
        ));
        let b = &good[..good.len() - 1];
        assert!(matches!(EncodedStream::from_bytes(b), Err(Error::Format { .. })));
        let mut b = good.clone();
        *b.last_mut().unwrap() |= 0x01;
        assert!(matches!(
            EncodedStream::from_bytes(&b),
            Err(Error::Format { offset: 20, .. })
        ));
    }

    #[test]
    fn linear_decoder_matches() {
        let e = elias_successor(&alpha()).unwrap();
        let s = EncodedStream::new("elias(alpha)", 4, vec![0x40]);
        assert_eq!(
            decode_stream_linear(&s, &e).unwrap(),
            vec![Nat::from(0u32), Nat::from(1u32)]
        );
        let t = EncodedStream::new("alpha", 1, vec![0x80]);
        assert!(matches!(
            decode_stream_linear(&t, &alpha()),
            Err(Error::Truncated { bit_offset: 0 })
        ));
    }
}
