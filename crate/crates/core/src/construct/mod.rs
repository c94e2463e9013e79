//! The diagonal precode, its completion to a code, and the pipeline that
//! yields a code better than every member of a code sequence.

mod better;
mod completion;
mod sequence;
mod trace;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::codes::CodeHandle;
use crate::error::Result;

pub use better::{better_precode, q_index, BetterPrecodeResult};
pub use completion::{choose_k, complete_precode, delta_for_length, CompletionStep, CompletionTrace};
pub use sequence::{diagonal_min, CodeSequence};
pub use trace::{export_text, trace_records, TraceRecord};

/// Resource caps for the constructions. Every scan and every step loop is
/// bounded and reports a resource-cap error instead of running on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructConfig {
    /// Runs walked by a single scan (q-index, jump search, prefix sums,
    /// completion position search).
    pub max_scan: u64,
    /// Completion steps.
    pub max_steps: u64,
    /// Cut points `r_m`, and the index searched by the `sigma(e)` oracle.
    pub partial_sum_cap: u64,
}

impl Default for ConstructConfig {
    fn default() -> Self {
        ConstructConfig {
            max_scan: 1 << 20,
            max_steps: 1 << 14,
            partial_sum_cap: 1 << 16,
        }
    }
}

/// Both stages of the construction for one sequence.
#[derive(Clone, Debug)]
pub struct Domination {
    pub precode: BetterPrecodeResult,
    pub completion: CompletionTrace,
}

impl Domination {
    pub fn code(&self) -> &CodeHandle {
        self.completion.final_code()
    }
}

/// Build the precode and its completion; nothing is evaluated yet.
pub fn dominate(cs: &CodeSequence, config: &ConstructConfig) -> Result<Domination> {
    let precode = better_precode(cs, config)?;
    // sigma(e) <= 1/2, so delta = 1/2 is valid for the first logarithm.
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let completion = complete_precode(precode.e(), precode.sigma_e().clone(), half, config)?;
    Ok(Domination { precode, completion })
}

/// A code `d` with `d(n) - c_k(n) -> -infinity` for every member `c_k`.
pub fn dominating_code(cs: &CodeSequence, config: &ConstructConfig) -> Result<CodeHandle> {
    let d = dominate(cs, config)?;
    Ok(d.code().clone().with_spec(format!("dom({})", cs.spec())))
}
