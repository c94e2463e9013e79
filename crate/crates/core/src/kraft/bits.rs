use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A finite sequence of bits, most significant first.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    /// The `width`-bit big-endian representation of `value`.
    ///
    /// `value` must be below `2^width`.
    pub fn from_uint(value: &BigUint, width: u64) -> Self {
        debug_assert!(value.bits() <= width);
        let bits = (0..width).rev().map(|i| value.bit(i)).collect();
        BitString { bits }
    }

    pub fn parse(text: &str) -> Result<Self> {
        text.chars()
            .enumerate()
            .map(|(i, ch)| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::parse(i, format!("`{ch}` is not a bit"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(|bits| BitString { bits })
    }

    pub fn len(&self) -> u64 {
        self.bits.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn extend(&mut self, other: &BitString) {
        self.bits.extend_from_slice(&other.bits);
    }

    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        other.bits.starts_with(&self.bits)
    }

    pub fn to_uint(&self) -> BigUint {
        let mut v = BigUint::zero();
        for (i, &b) in self.bits.iter().rev().enumerate() {
            if b {
                v.set_bit(i as u64, true);
            }
        }
        v
    }
}

// Lexicographic order of left-aligned strings; a proper prefix sorts first.
impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bits.cmp(&other.bits)
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

/// MSB-first bit packer.
#[derive(Default)]
pub struct BitWriter {
    bytes: Vec<u8>,
    bit_count: u64,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn write_bit(&mut self, bit: bool) {
        let offset = (self.bit_count % 8) as u32;
        if offset == 0 {
            self.bytes.push(0);
        }
        if bit {
            *self.bytes.last_mut().expect("pushed above") |= 0x80 >> offset;
        }
        self.bit_count += 1;
    }

    pub fn write_bits(&mut self, bits: &BitString) {
        for &b in bits.bits() {
            self.write_bit(b);
        }
    }

    pub fn bit_count(&self) -> u64 {
        self.bit_count
    }

    /// Packed bytes; unused low bits of the last byte are zero.
    pub fn finish(self) -> (Vec<u8>, u64) {
        (self.bytes, self.bit_count)
    }
}

/// MSB-first random-access reader over a packed payload.
pub struct BitReader<'a> {
    bytes: &'a [u8],
    bit_count: u64,
}

impl<'a> BitReader<'a> {
    pub fn new(bytes: &'a [u8], bit_count: u64) -> Self {
        BitReader { bytes, bit_count }
    }

    pub fn bit_count(&self) -> u64 {
        self.bit_count
    }

    /// Bit at `pos`; positions at or past `bit_count` read as zero.
    pub fn bit(&self, pos: u64) -> bool {
        if pos >= self.bit_count {
            return false;
        }
        let byte = self.bytes[(pos / 8) as usize];
        byte & (0x80 >> (pos % 8)) != 0
    }

    /// `width` bits starting at `pos` as a big-endian integer, zero-filled
    /// past the end of the stream.
    pub fn peek_uint(&self, pos: u64, width: u64) -> BigUint {
        let available = self.bit_count.saturating_sub(pos).min(width);
        if available == 0 {
            return BigUint::zero();
        }
        let end = pos + available;
        let bytes = &self.bytes[(pos / 8) as usize..end.div_ceil(8) as usize];
        let mut v = BigUint::from_bytes_be(bytes) >> (end.div_ceil(8) * 8 - end);
        if !pos.is_multiple_of(8) {
            v &= (BigUint::one() << available) - 1u32;
        }
        v << (width - available)
    }
}
