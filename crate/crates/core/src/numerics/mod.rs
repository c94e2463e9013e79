//! Exact arithmetic kernel: dyadic rationals, rational intervals, computable
//! reals and the effective logarithm.

mod dyadic;
mod log;
mod real;

pub use dyadic::{exponent_limit, set_exponent_limit, Dyadic, DEFAULT_EXPONENT_LIMIT};
pub use log::{log2_enclosure, log2_one_minus, log2_rational, LOG_SLOPE_BOUND};
pub use real::{real_from_partial_sums, ComputableReal, RationalInterval, DEFAULT_PARTIAL_SUM_CAP};

/// Arbitrary-precision natural number used for indices and code lengths.
pub type Nat = num_bigint::BigUint;

/// Exact sum of two dyadics.
pub fn dyadic_add(a: &Dyadic, b: &Dyadic) -> Dyadic {
    a + b
}
