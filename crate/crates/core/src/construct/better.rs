use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{ToPrimitive, Zero};
use parking_lot::Mutex;

use super::sequence::diagonal_run;
use super::{CodeSequence, ConstructConfig};
use crate::codes::{CodeHandle, CodeKind, LengthFunction, Lengths, Run};
use crate::error::{Error, Result};
use crate::numerics::{real_from_partial_sums, ComputableReal, Dyadic, Nat};

/// Least `q >= 1` with `partial_sum(c, q) >= 1 - 2^-(m+2)`, walking at most
/// `max_scan` runs of `c`.
pub fn q_index(c: &CodeHandle, m: u64, max_scan: u64) -> Result<Nat> {
    let target = Dyadic::one() - Dyadic::pow2(-(m as i64) - 2)?;
    let mut sum = Dyadic::zero();
    let mut at = Nat::zero();
    for _ in 0..max_scan {
        let run = c.run(&at)?;
        let end = run.end_or_next(&at);
        let width = width_of(&run.value)?;
        // Entries still needed in this run: ceil((target - sum) * 2^width).
        let needed = -(-(&target - &sum)).floor_scaled(width);
        let needed = needed.to_biguint().unwrap_or_default();
        let span = &end - &at;
        if needed <= span {
            return Ok(at + needed);
        }
        sum += &Dyadic::run_mass(&span, &run.value)?;
        at = end;
    }
    Err(Error::cap(
        format!("runs scanned for q_index of `{}` at m = {m}", c.spec()),
        max_scan,
    ))
}

fn width_of(length: &Nat) -> Result<u64> {
    length.to_u64().ok_or_else(|| Error::Overflow {
        exponent: u64::MAX,
        limit: crate::numerics::exponent_limit(),
    })
}

#[derive(Default)]
struct State {
    /// Cut points `r_0 = 0 < r_1 < ...`.
    r: Vec<Nat>,
    /// `prefix[j] = sum_(n < r_j) 2^-e(n)`; needs `constant_c`.
    prefix: Vec<Dyadic>,
    constant_c: Option<u64>,
    q: HashMap<(u64, u64), Nat>,
}

struct Inner {
    cs: CodeSequence,
    config: ConstructConfig,
    state: Mutex<State>,
}

impl Inner {
    fn q(&self, state: &mut State, k: u64, m: u64) -> Result<Nat> {
        let k = self.cs.tail_index().map_or(k, |t| k.min(t));
        if let Some(q) = state.q.get(&(k, m)) {
            return Ok(q.clone());
        }
        let q = q_index(&self.cs.at(k)?, m, self.config.max_scan)?;
        state.q.insert((k, m), q.clone());
        Ok(q)
    }

    /// `p_m = max_(k <= m+1) q_(m,k)`.
    fn p(&self, state: &mut State, m: u64) -> Result<Nat> {
        let top = self.cs.tail_index().map_or(m + 1, |t| t.min(m + 1));
        let mut best = Nat::zero();
        for k in 0..=top {
            best = best.max(self.q(state, k, m)?);
        }
        Ok(best)
    }

    /// Least `n > b` with `d(n) > d(n - 1)`.
    fn next_jump(&self, b: &Nat) -> Result<Nat> {
        let mut at = b.clone();
        let mut prev: Option<Nat> = None;
        for _ in 0..self.config.max_scan {
            let run = diagonal_run(&self.cs, &at)?;
            if prev.as_ref().is_some_and(|p| &run.value > p) {
                return Ok(at);
            }
            at = run.end_or_next(&at);
            prev = Some(run.value);
        }
        Err(Error::cap(
            "runs scanned for the next jump of the diagonal",
            self.config.max_scan,
        ))
    }

    fn extend_r(&self, state: &mut State) -> Result<()> {
        if state.r.is_empty() {
            state.r.push(Nat::zero());
            return Ok(());
        }
        let m = state.r.len() as u64;
        let cap = self.config.partial_sum_cap;
        if m > cap {
            return Err(Error::cap("cut points r_m computed", cap));
        }
        let prev = state.r.last().expect("non-empty").clone();
        let bound = prev.max(self.p(state, 2 * m)?);
        let r = self.next_jump(&bound)?;
        state.r.push(r);
        Ok(())
    }

    fn r(&self, state: &mut State, m: u64) -> Result<Nat> {
        while state.r.len() as u64 <= m {
            self.extend_r(state)?;
        }
        Ok(state.r[m as usize].clone())
    }

    /// Stage `j` with `r_j <= n < r_(j+1)`, and `r_(j+1)`.
    fn stage(&self, state: &mut State, n: &Nat) -> Result<(u64, Nat)> {
        self.r(state, 0)?;
        while state.r.last().expect("r_0 exists") <= n {
            self.extend_r(state)?;
        }
        let j = state.r.partition_point(|r| r <= n) - 1;
        Ok((j as u64, state.r[j + 1].clone()))
    }

    fn constant_c(&self, state: &mut State) -> Result<u64> {
        if let Some(c) = state.constant_c {
            return Ok(c);
        }
        // S_1: on [0, r_1) e' is the diagonal itself.
        let r1 = self.r(state, 1)?;
        let s1 = self.diagonal_mass(&Nat::zero(), &r1, 0, 0)?;
        let total = s1 + Dyadic::one();
        let mut c = 1u64;
        while Dyadic::pow2(c as i64 - 1)? < total {
            c += 1;
        }
        state.constant_c = Some(c);
        state.prefix = vec![Dyadic::zero()];
        Ok(c)
    }

    /// `sum_(from <= n < to) 2^-(d(n) - j + c)`.
    fn diagonal_mass(&self, from: &Nat, to: &Nat, j: u64, c: u64) -> Result<Dyadic> {
        let mut sum = Dyadic::zero();
        let mut at = from.clone();
        let mut runs = 0u64;
        while &at < to {
            runs += 1;
            if runs > self.config.max_scan {
                return Err(Error::cap("runs summed for a prefix of sigma(e)", self.config.max_scan));
            }
            let run = diagonal_run(&self.cs, &at)?;
            let end = run.end_or_next(&at).min(to.clone());
            let length = shift_length(&run.value, j, c)?;
            sum += &Dyadic::run_mass(&(&end - &at), &length)?;
            at = end;
        }
        Ok(sum)
    }

    fn prefix(&self, state: &mut State, m: u64) -> Result<Dyadic> {
        let c = self.constant_c(state)?;
        while state.prefix.len() as u64 <= m {
            let j = state.prefix.len() as u64 - 1;
            let from = self.r(state, j)?;
            let to = self.r(state, j + 1)?;
            let mass = self.diagonal_mass(&from, &to, j, c)?;
            let next = state.prefix.last().expect("prefix[0] exists") + &mass;
            state.prefix.push(next);
        }
        Ok(state.prefix[m as usize].clone())
    }

    fn e_run(&self, n: &Nat) -> Result<Run> {
        let (j, c, next_cut) = {
            let mut state = self.state.lock();
            let c = self.constant_c(&mut state)?;
            let (j, next_cut) = self.stage(&mut state, n)?;
            (j, c, next_cut)
        };
        let run = diagonal_run(&self.cs, n)?;
        let end = run.end_or_next(n).min(next_cut);
        Ok(Run {
            value: shift_length(&run.value, j, c)?,
            end: Some(end),
        })
    }
}

/// `d - j + c`, which must be a positive length.
fn shift_length(d: &Nat, j: u64, c: u64) -> Result<Nat> {
    let v = d + c;
    if v <= Nat::from(j) {
        return Err(Error::contract(format!("diagonal value {d} too small for stage {j}")));
    }
    Ok(v - j)
}

struct PrecodeLengths(Arc<Inner>);

impl Lengths for PrecodeLengths {
    fn length(&self, n: &Nat) -> Result<Nat> {
        Ok(self.0.e_run(n)?.value)
    }

    fn run(&self, n: &Nat) -> Result<Run> {
        self.0.e_run(n)
    }
}

/// The proper precode `e` that is eventually better than every member of a
/// code sequence, with the data of its construction.
///
/// Everything is computed on demand: cut points `r_m` are found only when an
/// evaluation or a precision request reaches them.
#[derive(Clone)]
pub struct BetterPrecodeResult {
    inner: Arc<Inner>,
    e: CodeHandle,
    sigma_e: ComputableReal,
}

impl BetterPrecodeResult {
    pub fn e(&self) -> &CodeHandle {
        &self.e
    }

    /// `sigma(e)` from exact prefix sums at the cut points with tail bound
    /// `2^-(m - 1 + C)`.
    pub fn sigma_e(&self) -> &ComputableReal {
        &self.sigma_e
    }

    pub fn sequence(&self) -> &CodeSequence {
        &self.inner.cs
    }

    pub fn constant_c(&self) -> Result<u64> {
        self.inner.constant_c(&mut self.inner.state.lock())
    }

    pub fn r(&self, m: u64) -> Result<Nat> {
        self.inner.r(&mut self.inner.state.lock(), m)
    }

    pub fn p(&self, m: u64) -> Result<Nat> {
        self.inner.p(&mut self.inner.state.lock(), m)
    }

    /// Exact `sum_(n < r_m) 2^-e(n)`.
    pub fn prefix_sum(&self, m: u64) -> Result<Dyadic> {
        self.inner.prefix(&mut self.inner.state.lock(), m)
    }

    /// `d(n) = min_(k < c_0(n)) c_k(n) + k`.
    pub fn diagonal(&self, n: &Nat) -> Result<Nat> {
        Ok(diagonal_run(&self.inner.cs, n)?.value)
    }
}

impl fmt::Debug for BetterPrecodeResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BetterPrecodeResult")
            .field("sequence", &self.inner.cs)
            .field("cuts", &self.inner.state.lock().r.len())
            .finish()
    }
}

/// A proper precode `e` with `sigma(e) <= 1/2` such that for all `k, t`,
/// `e(n) <= c_k(n) - t` once `n >= r_(k+t+C)`.
pub fn better_precode(cs: &CodeSequence, config: &ConstructConfig) -> Result<BetterPrecodeResult> {
    let inner = Arc::new(Inner {
        cs: cs.clone(),
        config: config.clone(),
        state: Mutex::new(State::default()),
    });
    let e = CodeHandle::new(
        LengthFunction::new(PrecodeLengths(inner.clone()), true).memoize(),
        CodeKind::ProperPrecode,
        format!("better({})", cs.spec()),
    )?;
    let prefix_inner = inner.clone();
    let tail_inner = inner.clone();
    let sigma_e = real_from_partial_sums(
        move |m| prefix_inner.prefix(&mut prefix_inner.state.lock(), m),
        move |m| {
            let c = tail_inner.constant_c(&mut tail_inner.state.lock())?;
            Dyadic::pow2(1 - m as i64 - c as i64)
        },
        config.partial_sum_cap,
    );
    Ok(BetterPrecodeResult { inner, e, sigma_e })
}
