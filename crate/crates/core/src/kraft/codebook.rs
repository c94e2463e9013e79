use num_bigint::BigUint;
use num_traits::{One, Zero};
use parking_lot::Mutex;

use super::{length_as_width, BitReader, BitString, BitWriter, EncodedStream};
use crate::codes::CodeHandle;
use crate::error::{Error, Result};
use crate::numerics::{exponent_limit, Nat};

/// Default number of runs a [`Codebook`] tabulates.
pub const DEFAULT_TABLE_LIMIT: u64 = 1 << 20;

/// A stretch `[start, end)` of constant length with `B(start)`.
///
/// `B(n) = partial_sum(c, n) * 2^c(n)` is the canonical codeword of `n` read
/// as an integer. Inside a run `B(n + 1) = B(n) + 1`; across a length change
/// `B(n + 1) = (B(n) + 1) << (c(n + 1) - c(n))`.
struct Segment {
    start: Nat,
    end: Nat,
    length: u64,
    boundary: BigUint,
}

impl Segment {
    fn count(&self) -> Nat {
        &self.end - &self.start
    }

    /// `B(end - 1)`.
    fn last_boundary(&self) -> BigUint {
        &self.boundary + self.count() - 1u32
    }
}

/// Encoder and decoder for one code over a lazily grown table of runs, so
/// codes with long constant stretches handle huge symbols cheaply.
pub struct Codebook {
    code: CodeHandle,
    table: Mutex<Vec<Segment>>,
    limit: u64,
}

impl Codebook {
    pub fn new(code: CodeHandle) -> Result<Self> {
        Self::with_limit(code, DEFAULT_TABLE_LIMIT)
    }

    pub fn with_limit(code: CodeHandle, limit: u64) -> Result<Self> {
        code.require_monotone("a codebook")?;
        Ok(Codebook {
            code,
            table: Mutex::new(Vec::new()),
            limit,
        })
    }

    pub fn code(&self) -> &CodeHandle {
        &self.code
    }

    fn extend(&self, table: &mut Vec<Segment>) -> Result<()> {
        if table.len() as u64 >= self.limit {
            return Err(Error::cap("codebook table runs", self.limit));
        }
        let start = table.last().map_or_else(Nat::zero, |s| s.end.clone());
        let run = self.code.run(&start)?;
        let end = run.end_or_next(&start);
        let length = length_as_width(&run.value)?;
        if length > exponent_limit() {
            return Err(Error::Overflow {
                exponent: length,
                limit: exponent_limit(),
            });
        }
        let boundary = match table.last() {
            None => BigUint::zero(),
            Some(prev) => {
                if length < prev.length {
                    return Err(Error::contract(format!("lengths decrease at index {start}")));
                }
                (prev.last_boundary() + 1u32) << (length - prev.length)
            }
        };
        // Every B(n) in the run must fit in `length` bits.
        let cap = BigUint::one() << length;
        let room = if boundary < cap {
            cap - &boundary
        } else {
            BigUint::zero()
        };
        let segment = Segment {
            start,
            end,
            length,
            boundary,
        };
        if segment.count() > room {
            return Err(Error::Kraft {
                prefix_len: (&segment.start + room + 1u32).to_string(),
            });
        }
        table.push(segment);
        Ok(())
    }

    fn ensure(&self, table: &mut Vec<Segment>, n: &Nat) -> Result<()> {
        while table.last().is_none_or(|s| &s.end <= n) {
            self.extend(table)?;
        }
        Ok(())
    }

    /// Canonical codeword for `n`; identical to
    /// [`assign_codeword`](super::assign_codeword).
    pub fn codeword(&self, n: &Nat) -> Result<BitString> {
        let mut table = self.table.lock();
        self.ensure(&mut table, n)?;
        let s = &table[table.partition_point(|s| &s.end <= n)];
        Ok(BitString::from_uint(&(&s.boundary + (n - &s.start)), s.length))
    }

    pub fn encode(&self, symbols: &[Nat]) -> Result<EncodedStream> {
        let mut writer = BitWriter::new();
        for s in symbols {
            writer.write_bits(&self.codeword(s)?);
        }
        let (payload, bit_count) = writer.finish();
        Ok(EncodedStream::new(self.code.spec(), bit_count, payload))
    }

    /// Decode a stream, locating each symbol by bisection over the run table.
    /// Gives the same result as the linear scan in
    /// [`decode_stream_linear`](super::decode_stream_linear).
    pub fn decode(&self, stream: &EncodedStream) -> Result<Vec<Nat>> {
        stream.check_padding()?;
        let reader = BitReader::new(stream.payload(), stream.bit_count());
        let total = stream.bit_count();
        let mut out = Vec::new();
        let mut pos = 0u64;
        let mut table = self.table.lock();
        self.ensure(&mut table, &Nat::zero())?;
        while pos < total {
            let remaining = total - pos;
            // Symbol n is the answer once the next c(n) bits, read as an
            // integer, do not exceed B(n); the predicate is monotone in n,
            // so it is enough to test the last index of each run.
            let fits = |s: &Segment| reader.peek_uint(pos, s.length) <= s.last_boundary();
            // Each test reads up to c(n) bits, so grow in doubling batches
            // and test once per batch.
            while !fits(table.last().expect("non-empty")) {
                if table.last().expect("non-empty").length > remaining {
                    return Err(Error::Truncated { bit_offset: pos });
                }
                for _ in 0..table.len() {
                    self.extend(&mut table)?;
                    if table.last().expect("non-empty").length > remaining || table.len() as u64 >= self.limit {
                        break;
                    }
                }
            }
            let s = &table[table.partition_point(|s| !fits(s))];
            if s.length > remaining {
                return Err(Error::Truncated { bit_offset: pos });
            }
            let v = reader.peek_uint(pos, s.length);
            let offset = if v > s.boundary {
                v - &s.boundary
            } else {
                BigUint::zero()
            };
            out.push(&s.start + offset);
            pos += s.length;
        }
        Ok(out)
    }
}

impl std::fmt::Debug for Codebook {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Codebook")
            .field("code", &self.code.spec())
            .field("runs", &self.table.lock().len())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{alpha, cex_elias, elias_successor};
    use crate::kraft::assign_codeword;

    #[test]
    fn table_matches_direct_assignment() {
        let e = elias_successor(&alpha()).unwrap();
        for code in [alpha(), e.clone(), elias_successor(&e).unwrap(), cex_elias()] {
            let book = Codebook::new(code.clone()).unwrap();
            for n in (0..200u64).rev() {
                let n = Nat::from(n);
                assert_eq!(book.codeword(&n).unwrap(), assign_codeword(&code, &n).unwrap());
            }
        }
    }

    #[test]
    fn small_streams() {
        let book = Codebook::new(alpha()).unwrap();
        let s = book.encode(&[Nat::from(0u32)]).unwrap();
        assert_eq!((s.bit_count(), s.payload()), (1, &[0x00][..]));
        let s = book.encode(&[Nat::from(1u32), Nat::from(0u32)]).unwrap();
        assert_eq!((s.bit_count(), s.payload()), (3, &[0x80][..]));
        assert_eq!(book.decode(&s).unwrap(), vec![Nat::from(1u32), Nat::from(0u32)]);

        let book = Codebook::new(elias_successor(&alpha()).unwrap()).unwrap();
        let s = book.encode(&[Nat::from(0u32), Nat::from(1u32)]).unwrap();
        assert_eq!((s.bit_count(), s.payload()), (4, &[0x40][..]));
        assert_eq!(book.decode(&s).unwrap(), vec![Nat::from(0u32), Nat::from(1u32)]);
    }

    #[test]
    fn truncated_stream() {
        let book = Codebook::new(alpha()).unwrap();
        let s = EncodedStream::new("alpha", 1, vec![0x80]);
        assert!(matches!(book.decode(&s), Err(Error::Truncated { .. })));
        let s = EncodedStream::new("alpha", 4, vec![0xF0]);
        assert!(matches!(book.decode(&s), Err(Error::Truncated { .. })));
    }
}
