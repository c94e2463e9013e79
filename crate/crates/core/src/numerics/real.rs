use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::Dyadic;
use crate::error::{Error, Result};

/// Closed interval with exact rational endpoints.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalInterval {
    lo: BigRational,
    hi: BigRational,
}

impl RationalInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Result<Self> {
        if lo > hi {
            return Err(Error::contract(format!(
                "interval endpoints out of order: [{lo}, {hi}]"
            )));
        }
        Ok(RationalInterval { lo, hi })
    }

    pub fn point(value: BigRational) -> Self {
        RationalInterval {
            lo: value.clone(),
            hi: value,
        }
    }

    pub fn from_dyadics(lo: &Dyadic, hi: &Dyadic) -> Result<Self> {
        Self::new(lo.to_rational(), hi.to_rational())
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))
    }

    pub fn contains(&self, value: &BigRational) -> bool {
        &self.lo <= value && value <= &self.hi
    }

    pub fn intersects(&self, other: &RationalInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// `width <= 1/precision`.
    pub fn within_precision(&self, precision: &BigUint) -> bool {
        self.width() * BigRational::from_integer(BigInt::from(precision.clone())) <= BigRational::one()
    }

    pub fn shifted(&self, offset: &BigRational) -> Self {
        RationalInterval {
            lo: &self.lo + offset,
            hi: &self.hi + offset,
        }
    }
}

impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

type Oracle = dyn Fn(&BigUint) -> Result<RationalInterval> + Send + Sync;

/// A real number known only through a precision oracle.
///
/// For a positive precision `p` the oracle returns a closed rational interval
/// of width at most `1/p` containing the value. Intervals for different
/// precisions are not required to be nested.
#[derive(Clone)]
pub struct ComputableReal {
    oracle: Arc<Oracle>,
}

impl ComputableReal {
    pub fn from_oracle<F>(oracle: F) -> Self
    where
        F: Fn(&BigUint) -> Result<RationalInterval> + Send + Sync + 'static,
    {
        ComputableReal {
            oracle: Arc::new(oracle),
        }
    }

    /// An exactly known value; every query returns the point interval.
    pub fn exact(value: BigRational) -> Self {
        Self::from_oracle(move |_| Ok(RationalInterval::point(value.clone())))
    }

    pub fn exact_dyadic(value: &Dyadic) -> Self {
        Self::exact(value.to_rational())
    }

    /// Query at precision `p >= 1`. Rejects answers wider than `1/p`.
    pub fn approx(&self, precision: &BigUint) -> Result<RationalInterval> {
        if precision.is_zero() {
            return Err(Error::Domain("precision must be positive".into()));
        }
        let interval = (self.oracle)(precision)?;
        if !interval.within_precision(precision) {
            return Err(Error::contract(format!(
                "oracle returned {interval}, wider than 1/{precision}"
            )));
        }
        Ok(interval)
    }

    pub fn approx_u64(&self, precision: u64) -> Result<RationalInterval> {
        self.approx(&BigUint::from(precision))
    }

    /// The value plus an exactly known offset.
    pub fn shifted(&self, offset: &Dyadic) -> Self {
        let base = self.clone();
        let offset = offset.to_rational();
        Self::from_oracle(move |p| Ok(base.approx(p)?.shifted(&offset)))
    }
}

impl fmt::Debug for ComputableReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ComputableReal(..)")
    }
}

/// Default cap on the index scanned by [`real_from_partial_sums`].
pub const DEFAULT_PARTIAL_SUM_CAP: u64 = 1 << 16;

/// A real given by exact partial sums and a proven tail bound.
///
/// `prefix_sum(m) <= value <= prefix_sum(m) + tail_bound(m)` must hold for
/// every `m`, and `tail_bound` must be non-increasing with limit zero. The
/// oracle answers precision `p` with the enclosure at the least `m` whose tail
/// bound is at most `1/p`; `cap` bounds the search.
pub fn real_from_partial_sums<P, T>(prefix_sum: P, tail_bound: T, cap: u64) -> ComputableReal
where
    P: Fn(u64) -> Result<Dyadic> + Send + Sync + 'static,
    T: Fn(u64) -> Result<Dyadic> + Send + Sync + 'static,
{
    ComputableReal::from_oracle(move |precision| {
        let p = BigInt::from(precision.clone());
        let fits = |m: u64| -> Result<bool> {
            let tail = tail_bound(m)?;
            Ok(tail.numerator() * &p <= BigInt::one() << tail.exponent())
        };
        let m = least_satisfying(&fits, cap)?;
        let lo = prefix_sum(m)?;
        let hi = &lo + &tail_bound(m)?;
        RationalInterval::from_dyadics(&lo, &hi)
    })
}

/// Least `m < cap` with `pred(m)`, for a predicate that is monotone in `m`.
fn least_satisfying(pred: &dyn Fn(u64) -> Result<bool>, cap: u64) -> Result<u64> {
    if cap == 0 {
        return Err(Error::cap("partial-sum index", cap));
    }
    if pred(0)? {
        return Ok(0);
    }
    // Gallop to a satisfying index, then bisect.
    let mut failing = 0u64;
    let mut probe = 1u64;
    loop {
        if probe >= cap {
            if pred(cap - 1)? {
                probe = cap - 1;
                break;
            }
            return Err(Error::cap("partial-sum index", cap));
        }
        if pred(probe)? {
            break;
        }
        failing = probe;
        probe = probe.saturating_mul(2);
    }
    let (mut lo, mut hi) = (failing, probe);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pred(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
