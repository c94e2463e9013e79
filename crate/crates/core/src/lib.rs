//! Universal codes for the natural numbers, treated through their codeword
//! length functions.
//!
//! A *code* here is a monotone non-decreasing length function `c: N -> N`
//! whose Kraft sum `sum 2^-c(n)` is exactly one. The crate provides
//!
//! - [`numerics`]: exact dyadic arithmetic, rational intervals, computable
//!   reals and a rigorous `log2(1 - x)`;
//! - [`codes`]: lazy memoized length functions, the trivial code `n + 1`, the
//!   Elias successor operator and two counterexample sequences;
//! - [`kraft`]: exact Kraft partial sums, canonical codeword assignment and a
//!   bit-exact stream format;
//! - [`construct`]: the diagonal precode, its completion to a code, and the
//!   resulting code that beats every member of a given sequence of codes;
//! - [`hierarchy`]: a transfinite chain of ever better codes indexed by
//!   ordinals below `w^w`.

pub mod codes;
pub mod construct;
pub mod error;
pub mod hierarchy;
pub mod kraft;
pub mod numerics;
pub mod par;

pub use error::{Error, Result};
pub use numerics::Nat;
