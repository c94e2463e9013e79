//! Kraft sums, canonical codeword assignment and the bit-exact stream format.

mod bits;
mod codebook;
mod stream;

use num_traits::Zero;

use crate::codes::{CodeHandle, LengthFunction};
use crate::error::{Error, Result};
use crate::numerics::{Dyadic, Nat};

pub use bits::{BitReader, BitString, BitWriter};
pub use codebook::{Codebook, DEFAULT_TABLE_LIMIT};
pub use stream::{decode_stream, decode_stream_linear, encode_stream, EncodedStream, NATC_MAGIC, NATC_VERSION};

/// Default cap on the number of runs walked by a single Kraft scan.
pub const DEFAULT_RUN_CAP: u64 = 1 << 22;

/// Exact `sum_{m < n} 2^-c(m)`.
pub fn partial_sum(c: &LengthFunction, n: &Nat) -> Result<Dyadic> {
    partial_sum_capped(c, n, DEFAULT_RUN_CAP)
}

pub fn partial_sum_capped(c: &LengthFunction, n: &Nat, run_cap: u64) -> Result<Dyadic> {
    let mut sum = Dyadic::zero();
    let mut at = Nat::zero();
    let mut runs = 0u64;
    while &at < n {
        runs += 1;
        if runs > run_cap {
            return Err(Error::cap("runs walked by a partial sum", run_cap));
        }
        let run = c.run(&at)?;
        let end = run.end_or_next(&at).min(n.clone());
        sum += &Dyadic::run_mass(&(&end - &at), &run.value)?;
        at = end;
    }
    Ok(sum)
}

/// `1 - partial_sum(c, n)`; an error if some prefix of length `<= n` has
/// Kraft sum above one.
pub fn kraft_gap(c: &LengthFunction, n: &Nat) -> Result<Dyadic> {
    let gap = Dyadic::one() - partial_sum(c, n)?;
    if gap.is_negative() {
        return Err(Error::Kraft {
            prefix_len: first_violation(c, n)?.to_string(),
        });
    }
    Ok(gap)
}

/// Least prefix length whose Kraft sum exceeds one, known to be `<= n`.
fn first_violation(c: &LengthFunction, n: &Nat) -> Result<Nat> {
    let one = Dyadic::one();
    let mut sum = Dyadic::zero();
    let mut at = Nat::zero();
    while &at < n {
        let run = c.run(&at)?;
        let end = run.end_or_next(&at).min(n.clone());
        let count = &end - &at;
        let mass = Dyadic::run_mass(&count, &run.value)?;
        if &sum + &mass > one {
            // Within the run each entry adds 2^-v; find how many fit.
            let weight = Dyadic::kraft_weight(&run.value)?;
            let room = (&one - &sum).floor_scaled(weight.exponent());
            let fit = room.to_biguint().unwrap_or_default();
            return Ok(&at + fit + 1u32);
        }
        sum += &mass;
        at = end;
    }
    Ok(n.clone())
}

/// Canonical codeword for `n`: the `c(n)`-bit big-endian binary expansion of
/// `partial_sum(c, n) * 2^c(n)`.
///
/// Lengths must be monotone, which makes the scaled sum an integer, and
/// `partial_sum(c, n + 1)` must not exceed one.
pub fn assign_codeword(c: &CodeHandle, n: &Nat) -> Result<BitString> {
    c.require_monotone("canonical codeword assignment")?;
    let length = c.eval(n)?;
    let below = partial_sum(c.lengths(), n)?;
    let through = &below + &Dyadic::kraft_weight(&length)?;
    if through > Dyadic::one() {
        return Err(Error::Kraft {
            prefix_len: (n + 1u32).to_string(),
        });
    }
    let width = length_as_width(&length)?;
    let value = below
        .scaled_exact(width)
        .ok_or_else(|| Error::contract("lengths are not monotone at this index"))?;
    let value = value.to_biguint().expect("partial sums are non-negative");
    Ok(BitString::from_uint(&value, width))
}

pub(crate) fn length_as_width(length: &Nat) -> Result<u64> {
    use num_traits::ToPrimitive;
    length.to_u64().ok_or(Error::Overflow {
        exponent: u64::MAX,
        limit: crate::numerics::exponent_limit(),
    })
}
