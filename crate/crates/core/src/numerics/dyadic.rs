use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default cap on the power-of-two denominator of any [`Dyadic`].
pub const DEFAULT_EXPONENT_LIMIT: u64 = 1 << 20;

static EXPONENT_LIMIT: AtomicU64 = AtomicU64::new(DEFAULT_EXPONENT_LIMIT);

/// Current process-wide cap on dyadic exponents.
pub fn exponent_limit() -> u64 {
    EXPONENT_LIMIT.load(AtomicOrdering::Relaxed)
}

/// Replace the process-wide cap on dyadic exponents.
pub fn set_exponent_limit(limit: u64) {
    EXPONENT_LIMIT.store(limit, AtomicOrdering::Relaxed);
}

fn check_exponent(exponent: u64) -> Result<()> {
    let limit = exponent_limit();
    if exponent > limit {
        Err(Error::Overflow { exponent, limit })
    } else {
        Ok(())
    }
}

/// An exact rational `numerator / 2^exponent`.
///
/// Always stored in canonical form: either the exponent is zero or the
/// numerator is odd. Zero is `0 / 2^0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    numerator: BigInt,
    exponent: u64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            numerator: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic::from_integer(BigInt::one())
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        Dyadic {
            numerator: value.into(),
            exponent: 0,
        }
    }

    /// `numerator / 2^exponent`, reduced.
    pub fn new(numerator: impl Into<BigInt>, exponent: u64) -> Result<Self> {
        check_exponent(exponent)?;
        Ok(Self::normalized(numerator.into(), exponent))
    }

    fn normalized(mut numerator: BigInt, mut exponent: u64) -> Self {
        if numerator.is_zero() {
            return Dyadic::zero();
        }
        if exponent > 0 {
            let twos = numerator.trailing_zeros().unwrap_or(0).min(exponent);
            if twos > 0 {
                numerator >>= twos;
                exponent -= twos;
            }
        }
        Dyadic { numerator, exponent }
    }

    /// `2^power` for any signed power.
    pub fn pow2(power: i64) -> Result<Self> {
        if power >= 0 {
            Ok(Dyadic::from_integer(BigInt::one() << power as u64))
        } else {
            let exponent = power.unsigned_abs();
            check_exponent(exponent)?;
            Ok(Dyadic {
                numerator: BigInt::one(),
                exponent,
            })
        }
    }

    /// `2^-length`, the Kraft weight of a codeword of the given length.
    pub fn kraft_weight(length: &BigUint) -> Result<Self> {
        let exponent = length.to_u64().ok_or(Error::Overflow {
            exponent: u64::MAX,
            limit: exponent_limit(),
        })?;
        check_exponent(exponent)?;
        Ok(Dyadic {
            numerator: BigInt::one(),
            exponent,
        })
    }

    /// Multiply by `2^power`.
    pub fn mul_pow2(&self, power: i64) -> Result<Self> {
        if self.numerator.is_zero() {
            return Ok(Dyadic::zero());
        }
        if power >= 0 {
            let shift = power as u64;
            if shift <= self.exponent {
                Ok(Dyadic {
                    numerator: self.numerator.clone(),
                    exponent: self.exponent - shift,
                })
            } else {
                Ok(Dyadic {
                    numerator: &self.numerator << (shift - self.exponent),
                    exponent: 0,
                })
            }
        } else {
            let exponent = self.exponent + power.unsigned_abs();
            check_exponent(exponent)?;
            Ok(Self::normalized(self.numerator.clone(), exponent))
        }
    }

    /// `count * 2^-length`, the Kraft mass of a run of equal lengths.
    pub fn run_mass(count: &BigUint, length: &BigUint) -> Result<Self> {
        let weight = Dyadic::kraft_weight(length)?;
        Ok(Self::normalized(
            BigInt::from(count.clone()) * weight.numerator,
            weight.exponent,
        ))
    }

    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.numerator.is_negative()
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.numerator.clone(), BigInt::one() << self.exponent)
    }

    /// `floor(self * 2^scale)` as an integer.
    pub fn floor_scaled(&self, scale: u64) -> BigInt {
        if scale >= self.exponent {
            &self.numerator << (scale - self.exponent)
        } else {
            floor_shr(&self.numerator, self.exponent - scale)
        }
    }

    /// `self * 2^scale` if that is an integer.
    pub fn scaled_exact(&self, scale: u64) -> Option<BigInt> {
        (scale >= self.exponent).then(|| &self.numerator << (scale - self.exponent))
    }

    /// Lossy conversion for display only.
    pub fn to_f64(&self) -> f64 {
        let bits = self.numerator.bits();
        if bits > 1000 || self.exponent > 1000 {
            let keep = bits.min(64);
            let top = floor_shr(&self.numerator, bits - keep).to_f64().unwrap_or(0.0);
            let shift = bits as i64 - keep as i64 - self.exponent as i64;
            top * 2f64.powi(shift.clamp(-2000, 2000) as i32)
        } else {
            self.numerator.to_f64().unwrap_or(f64::NAN) / 2f64.powi(self.exponent as i32)
        }
    }

    /// Decimal rendering with `digits` digits after the point, truncated
    /// toward negative infinity.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = num_traits::pow(BigInt::from(10u32), digits);
        let scaled = floor_shr(&(&self.numerator * &scale), self.exponent);
        let negative = scaled.is_negative();
        let magnitude = scaled.abs().to_string();
        let padded = if magnitude.len() <= digits {
            format!("{}{}", "0".repeat(digits + 1 - magnitude.len()), magnitude)
        } else {
            magnitude
        };
        let (int_part, frac_part) = padded.split_at(padded.len() - digits);
        let sign = if negative { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac_part}")
        }
    }
}

/// Arithmetic right shift rounding toward negative infinity.
pub(crate) fn floor_shr(value: &BigInt, shift: u64) -> BigInt {
    if value.sign() == Sign::Minus {
        -((-value - 1u32) >> shift) - 1u32
    } else {
        value >> shift
    }
}

fn align(a: &Dyadic, b: &Dyadic) -> (BigInt, BigInt, u64) {
    match a.exponent.cmp(&b.exponent) {
        Ordering::Equal => (a.numerator.clone(), b.numerator.clone(), a.exponent),
        Ordering::Less => (
            &a.numerator << (b.exponent - a.exponent),
            b.numerator.clone(),
            b.exponent,
        ),
        Ordering::Greater => (
            a.numerator.clone(),
            &b.numerator << (a.exponent - b.exponent),
            a.exponent,
        ),
    }
}

// Sums and differences never need a larger exponent than their operands, so
// the additive operators are infallible.
impl Add<&Dyadic> for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, exponent) = align(self, rhs);
        Dyadic::normalized(a + b, exponent)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl Sub<&Dyadic> for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, exponent) = align(self, rhs);
        Dyadic::normalized(a - b, exponent)
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        &self - &rhs
    }
}

impl AddAssign<&Dyadic> for Dyadic {
    fn add_assign(&mut self, rhs: &Dyadic) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Dyadic> for Dyadic {
    fn sub_assign(&mut self, rhs: &Dyadic) {
        *self = &*self - rhs;
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            numerator: -self.numerator,
            exponent: self.exponent,
        }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = align(self, other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/2^{}", self.numerator, self.exponent)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dyadic({self})")
    }
}
