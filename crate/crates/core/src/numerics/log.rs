//! Rigorous base-2 logarithms of rationals and the effective map
//! `x -> log2(1 - x)` on computable reals bounded away from one.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{ComputableReal, RationalInterval};
use crate::error::{Error, Result};

/// Rational upper bound on `2 log2(e) ~= 2.885`, the slope constant that
/// bounds `|d/dt log2(1 - t)|` by `slope * Delta` for `t <= 1 - 1/(2 Delta)`.
pub const LOG_SLOPE_BOUND: u32 = 3;

const MAX_REFINEMENTS: u32 = 24;

/// Enclosure of `sum_{j>=1} t^j / j = -ln(1 - t)` for `0 <= t <= 1/2`, where
/// `t` is itself known to lie in `[t_lo, t_hi] / 2^bits`. Returns integer
/// bounds in the same fixed-point scale.
fn neg_ln_one_minus_fixed(t_lo: &BigInt, t_hi: &BigInt, bits: u64) -> (BigInt, BigInt) {
    let unit = BigInt::one() << bits;
    let mut pow_lo = unit.clone();
    let mut pow_hi = unit.clone();
    let mut sum_lo = BigInt::zero();
    let mut sum_hi = BigInt::zero();
    let mut j = 1u64;
    loop {
        pow_lo = (&pow_lo * t_lo) >> bits;
        pow_hi = ceil_div(&(&pow_hi * t_hi), &unit);
        let jj = BigInt::from(j);
        sum_lo += &pow_lo / &jj;
        sum_hi += ceil_div(&pow_hi, &jj);
        // Remainder after term j is at most t^(j+1) / ((j+1)(1-t)) <= 2 t^(j+1) / (j+1).
        let next_hi = ceil_div(&(&pow_hi * t_hi), &unit);
        let remainder = ceil_div(&(next_hi * 2u32), &BigInt::from(j + 1));
        if remainder <= BigInt::one() || pow_hi.is_zero() {
            sum_hi += remainder;
            return (sum_lo, sum_hi);
        }
        j += 1;
    }
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_ceil(b)
}

fn ln2_fixed(bits: u64) -> (BigInt, BigInt) {
    let half = BigInt::one() << (bits - 1);
    neg_ln_one_minus_fixed(&half, &half, bits)
}

/// Split a positive rational as `2^k * y` with `1/2 < y <= 1`.
fn split_binary_exponent(r: &BigRational) -> (i64, BigRational) {
    let num_bits = r.numer().bits() as i64;
    let den_bits = r.denom().bits() as i64;
    let mut k = num_bits - den_bits;
    let mut y = scale_pow2(r, -k);
    let one = BigRational::one();
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    while y > one {
        k += 1;
        y = scale_pow2(r, -k);
    }
    while y <= half {
        k -= 1;
        y = scale_pow2(r, -k);
    }
    (k, y)
}

fn scale_pow2(r: &BigRational, power: i64) -> BigRational {
    if power >= 0 {
        r * BigRational::from_integer(BigInt::one() << power as u64)
    } else {
        r / BigRational::from_integer(BigInt::one() << power.unsigned_abs())
    }
}

/// A rigorous enclosure of `log2(r)` of width at most `max_width`.
///
/// Exact powers of two give a point interval.
pub fn log2_enclosure(r: &BigRational, max_width: &BigRational) -> Result<RationalInterval> {
    if !r.is_positive() {
        return Err(Error::Domain(format!("log2 of non-positive value {r}")));
    }
    if !max_width.is_positive() {
        return Err(Error::Domain("log2 error bound must be positive".into()));
    }
    let (k, y) = split_binary_exponent(r);
    let k = BigRational::from_integer(BigInt::from(k));
    if y.is_one() {
        return Ok(RationalInterval::point(k));
    }
    let t = BigRational::one() - y;

    // Working precision: enough bits for the requested width plus guard bits.
    let inv = (BigRational::one() / max_width).ceil().to_integer();
    let mut bits = inv.bits() + 16;
    for _ in 0..MAX_REFINEMENTS {
        let scaled = &t * BigRational::from_integer(BigInt::one() << bits);
        let t_lo = scaled.floor().to_integer();
        let t_hi = scaled.ceil().to_integer();
        let (s_lo, s_hi) = neg_ln_one_minus_fixed(&t_lo, &t_hi, bits);
        let (l_lo, l_hi) = ln2_fixed(bits);
        // ln y in [-s_hi, -s_lo], ln 2 in [l_lo, l_hi], so
        // log2 y in [-s_hi / l_lo, -s_lo / l_hi].
        let lo = &k - BigRational::new(s_hi, l_lo);
        let hi = &k - BigRational::new(s_lo, l_hi);
        let enclosure = RationalInterval::new(lo, hi)?;
        if &enclosure.width() <= max_width {
            return Ok(enclosure);
        }
        bits *= 2;
    }
    Err(Error::cap("log2 refinement rounds", MAX_REFINEMENTS as u64))
}

/// A rational `q` with `|q - log2(r)| <= error`.
pub fn log2_rational(r: &BigRational, error: &BigRational) -> Result<BigRational> {
    let width = error * BigRational::from_integer(BigInt::from(2));
    Ok(log2_enclosure(r, &width)?.midpoint())
}

/// `log2(1 - x)` as a computable real, given a rational `delta > 0` with
/// `x <= 1 - delta`.
///
/// For precision `n` the argument is queried at precision
/// `N = 2 * LOG_SLOPE_BOUND * Delta * n` with `Delta = ceil(1/delta)`; the
/// resulting `[a, b]` maps to `[f(b), f(a)]` of width at most `1/(2n)`, and each
/// endpoint is enclosed to within `1/(4n)`.
pub fn log2_one_minus(x: ComputableReal, delta: BigRational) -> Result<ComputableReal> {
    if !delta.is_positive() {
        return Err(Error::Domain("delta must be positive".into()));
    }
    let big_delta = (BigRational::one() / &delta).ceil().to_integer();
    let big_delta = big_delta
        .to_biguint()
        .ok_or_else(|| Error::Domain("delta must be positive".into()))?;
    let ceiling = BigRational::one() - &delta;
    Ok(ComputableReal::from_oracle(move |n: &BigUint| {
        let query = BigUint::from(2 * LOG_SLOPE_BOUND) * &big_delta * n;
        let interval = x.approx(&query)?;
        if interval.lo() > &ceiling {
            return Err(Error::contract(format!(
                "argument enclosure {interval} lies above 1 - delta = {ceiling}"
            )));
        }
        let one = BigRational::one();
        if interval.hi() >= &one {
            return Err(Error::contract(format!("argument enclosure {interval} reaches 1")));
        }
        let quarter = BigRational::new(BigInt::one(), BigInt::from(n.clone()) * 4u32);
        let at_hi = log2_enclosure(&(&one - interval.hi()), &quarter)?;
        let at_lo = log2_enclosure(&(&one - interval.lo()), &quarter)?;
        RationalInterval::new(at_hi.lo().clone(), at_lo.hi().clone())
    }))
}
