use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use parking_lot::Mutex;

use super::ConstructConfig;
use crate::codes::{CodeHandle, CodeKind, LengthFunction, Lengths, Run};
use crate::error::{Error, Result};
use crate::numerics::{log2_one_minus, ComputableReal, Dyadic, Nat, RationalInterval};

/// One executed step of the completion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletionStep {
    pub t: u64,
    /// Enclosure of `log2(1 - sigma(d_t))` at precision 2.
    pub log_gap: RationalInterval,
    /// `2 - ceil(hi)` for the enclosure above.
    pub k_prime: i64,
    /// `max(k_prime, k_(t-1))`.
    pub k: u64,
    /// Least position with `d_t(m) > k`; it is set to `k`.
    pub m: Nat,
    pub old_length: Nat,
    /// `sigma(d_(t+1)) - sigma(e)`, exact.
    pub offset: Dyadic,
}

/// `k_t` from an enclosure of `log2(1 - sigma(d_t))`.
///
/// Queries at precision 2, takes `j = ceil(hi)` and returns
/// `max(2 - j, k_prev)`; then `2^-k <= 1 - sigma(d_t) <= 2^(2-k)`.
pub fn choose_k(log_gap: &ComputableReal, k_prev: Option<i64>) -> Result<i64> {
    Ok(choose_k_detail(log_gap, k_prev)?.1)
}

fn choose_k_detail(log_gap: &ComputableReal, k_prev: Option<i64>) -> Result<(RationalInterval, i64, i64)> {
    let interval = log_gap.approx_u64(2)?;
    if !interval.lo().is_negative() {
        return Err(Error::contract(format!(
            "log2 of the Kraft gap encloses {interval}, not below 0; the precode is not proper"
        )));
    }
    let j = interval.hi().ceil().to_integer();
    let k_prime = (BigInt::from(2) - j)
        .to_i64()
        .ok_or_else(|| Error::cap("magnitude of k_t", i64::MAX as u64))?;
    let k = k_prev.map_or(k_prime, |p| p.max(k_prime));
    Ok((interval, k_prime, k))
}

struct State {
    steps: Vec<CompletionStep>,
    offset: Dyadic,
    delta: BigRational,
}

struct Inner {
    e: CodeHandle,
    sigma_e: ComputableReal,
    config: ConstructConfig,
    state: Mutex<State>,
}

impl Inner {
    fn step(&self, state: &mut State) -> Result<()> {
        let t = state.steps.len() as u64;
        if t >= self.config.max_steps {
            return Err(Error::cap("completion steps", self.config.max_steps));
        }
        let x = self.sigma_e.shifted(&state.offset);
        let log_gap = log2_one_minus(x, state.delta.clone())?;
        let k_prev = state.steps.last().map(|s| s.k as i64);
        let (log_gap, k_prime, k) = choose_k_detail(&log_gap, k_prev)?;
        let k = u64::try_from(k).map_err(|_| Error::contract(format!("k_t = {k} is not positive")))?;
        let start = state.steps.last().map_or_else(Nat::zero, |s| &s.m + 1u32);
        let (m, old_length) = self.first_longer(&start, k)?;
        let old_weight = Dyadic::kraft_weight(&old_length)?;
        let offset = &state.offset + &(Dyadic::pow2(-(k as i64))? - old_weight.clone());
        state.delta = old_weight.to_rational();
        state.offset = offset.clone();
        state.steps.push(CompletionStep {
            t,
            log_gap,
            k_prime,
            k,
            m,
            old_length,
            offset,
        });
        Ok(())
    }

    /// Least `n >= start` with `e(n) > k`. Positions before `start` already
    /// hold values `<= k`.
    fn first_longer(&self, start: &Nat, k: u64) -> Result<(Nat, Nat)> {
        let k = Nat::from(k);
        let mut at = start.clone();
        for _ in 0..self.config.max_scan {
            let run = self.e.run(&at)?;
            if run.value > k {
                return Ok((at, run.value));
            }
            at = run.end_or_next(&at);
        }
        Err(Error::cap(
            "runs scanned for the next completion position",
            self.config.max_scan,
        ))
    }

    /// Run steps until some modified position exceeds `n`.
    fn advance_past(&self, state: &mut State, n: &Nat) -> Result<()> {
        while state.steps.last().is_none_or(|s| &s.m <= n) {
            self.step(state)?;
        }
        Ok(())
    }

    fn final_run(&self, n: &Nat) -> Result<Run> {
        let next_modified = {
            let mut state = self.state.lock();
            self.advance_past(&mut state, n)?;
            let i = state.steps.partition_point(|s| &s.m < n);
            let s = &state.steps[i];
            if &s.m == n {
                return Ok(Run::single(Nat::from(s.k), n));
            }
            s.m.clone()
        };
        let run = self.e.run(n)?;
        let end = run.end_or_next(n).min(next_modified);
        Ok(Run {
            value: run.value,
            end: Some(end),
        })
    }
}

struct FinalLengths(Arc<Inner>);

impl Lengths for FinalLengths {
    fn length(&self, n: &Nat) -> Result<Nat> {
        Ok(self.0.final_run(n)?.value)
    }

    fn run(&self, n: &Nat) -> Result<Run> {
        self.0.final_run(n)
    }
}

/// The lazily executed completion of a proper precode to a code.
///
/// Step `t` picks `k_t`, finds the least position `m_t` whose length exceeds
/// `k_t` and shortens it to `k_t`. Positions strictly increase, so the final
/// code at `n` is known once some `m_t > n`.
#[derive(Clone)]
pub struct CompletionTrace {
    inner: Arc<Inner>,
    final_code: CodeHandle,
}

impl CompletionTrace {
    pub fn final_code(&self) -> &CodeHandle {
        &self.final_code
    }

    pub fn precode(&self) -> &CodeHandle {
        &self.inner.e
    }

    /// Snapshot of the steps executed so far.
    pub fn steps(&self) -> Vec<CompletionStep> {
        self.inner.state.lock().steps.clone()
    }

    pub fn executed(&self) -> u64 {
        self.inner.state.lock().steps.len() as u64
    }

    /// Execute steps until at least `count` have run.
    pub fn run_to(&self, count: u64) -> Result<()> {
        let mut state = self.inner.state.lock();
        while (state.steps.len() as u64) < count {
            self.inner.step(&mut state)?;
        }
        Ok(())
    }

    /// Execute steps until every position `<= n` is final.
    pub fn advance_past(&self, n: &Nat) -> Result<()> {
        self.inner.advance_past(&mut self.inner.state.lock(), n)
    }

    /// `sigma(d_t) - sigma(e)` after `t` steps.
    pub fn offset_after(&self, t: u64) -> Result<Dyadic> {
        self.run_to(t)?;
        let state = self.inner.state.lock();
        Ok(match t {
            0 => Dyadic::zero(),
            t => state.steps[t as usize - 1].offset.clone(),
        })
    }
}

impl fmt::Debug for CompletionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CompletionTrace")
            .field("precode", &self.inner.e.spec())
            .field("executed", &self.executed())
            .finish()
    }
}

/// Complete a proper precode `e` to a code `d <= e` pointwise.
///
/// `sigma_e` must represent `sigma(e)` and `delta` must satisfy
/// `sigma(e) <= 1 - delta`.
pub fn complete_precode(
    e: &CodeHandle,
    sigma_e: ComputableReal,
    delta: BigRational,
    config: &ConstructConfig,
) -> Result<CompletionTrace> {
    e.require_monotone("completion")?;
    if e.kind() == CodeKind::Code {
        return Err(Error::contract(format!(
            "`{}` is already a code; completion needs a proper precode",
            e.spec()
        )));
    }
    if !delta.is_positive() {
        return Err(Error::Domain("delta must be positive".into()));
    }
    let inner = Arc::new(Inner {
        e: e.memoize(),
        sigma_e,
        config: config.clone(),
        state: Mutex::new(State {
            steps: Vec::new(),
            offset: Dyadic::zero(),
            delta,
        }),
    });
    let final_code = CodeHandle::new(
        LengthFunction::new(FinalLengths(inner.clone()), true).memoize(),
        CodeKind::Code,
        format!("complete({})", e.spec()),
    )?;
    Ok(CompletionTrace { inner, final_code })
}

/// `2^-length` as a rational, for callers assembling `delta`.
pub fn delta_for_length(length: &BigUint) -> Result<BigRational> {
    Ok(Dyadic::kraft_weight(length)?.to_rational())
}
