//! Canonical codewords and NATC files built by hand.

use num_bigint::BigUint;
use num_traits::Zero;

/// Canonical codewords from the exact cumulative sums, termwise. The sum is
/// kept as an integer numerator over `2^scale`; lengths must not decrease.
pub fn codewords_ref(lengths: &[u64]) -> Vec<String> {
    let mut below = BigUint::zero();
    let mut scale = 0u64;
    let mut out = Vec::with_capacity(lengths.len());
    for &width in lengths {
        assert!(width > 0 && width >= scale);
        below <<= width - scale;
        scale = width;
        assert!(below.bits() <= width);
        out.push(format!("{:0>w$}", below.to_str_radix(2), w = width as usize));
        below += 1u32;
    }
    out
}

/// NATC bytes assembled by hand from reference codewords.
pub fn natc_ref(spec: &str, words: &[String], symbols: &[u64]) -> Vec<u8> {
    let bits: String = symbols.iter().map(|&s| words[s as usize].as_str()).collect();
    let mut out = b"NATC\x01".to_vec();
    out.extend_from_slice(&(spec.len() as u16).to_be_bytes());
    out.extend_from_slice(spec.as_bytes());
    out.extend_from_slice(&(bits.len() as u64).to_be_bytes());
    for chunk in bits.as_bytes().chunks(8) {
        let mut byte = 0u8;
        for (i, &b) in chunk.iter().enumerate() {
            if b == b'1' {
                byte |= 0x80 >> i;
            }
        }
        out.push(byte);
    }
    out
}
