use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::ToPrimitive;
use parking_lot::Mutex;

use crate::codes::{code_length_floor, CodeHandle, Run};
use crate::error::{Error, Result};
use crate::numerics::Nat;

type Member = dyn Fn(u64) -> Result<CodeHandle> + Send + Sync;

struct Inner {
    spec: String,
    member: Box<Member>,
    tail: Option<u64>,
    memo: Mutex<HashMap<u64, CodeHandle>>,
}

/// A sequence of codes `k -> c_k`, built on demand.
///
/// With a tail index `K`, every `c_k` for `k >= K` is `c_K`, which lets the
/// diagonal stop scanning at `K`.
#[derive(Clone)]
pub struct CodeSequence {
    inner: Arc<Inner>,
}

impl CodeSequence {
    pub fn from_fn<F>(spec: impl Into<String>, tail: Option<u64>, member: F) -> Self
    where
        F: Fn(u64) -> Result<CodeHandle> + Send + Sync + 'static,
    {
        CodeSequence {
            inner: Arc::new(Inner {
                spec: spec.into(),
                member: Box::new(member),
                tail,
                memo: Mutex::new(HashMap::new()),
            }),
        }
    }

    /// `c, c, c, ...`.
    pub fn constant(c: CodeHandle) -> Self {
        Self::with_tail(vec![c]).expect("one member")
    }

    /// `c_0, ..., c_(K-1), c_(K-1), c_(K-1), ...`.
    pub fn with_tail(members: Vec<CodeHandle>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Domain("a code sequence needs at least one member".into()));
        }
        let spec = members.iter().map(CodeHandle::spec).collect::<Vec<_>>().join(",");
        let tail = members.len() as u64 - 1;
        let members: Vec<CodeHandle> = members.iter().map(CodeHandle::memoize).collect();
        Ok(Self::from_fn(spec, Some(tail), move |k| {
            Ok(members[k.min(tail) as usize].clone())
        }))
    }

    pub fn spec(&self) -> &str {
        &self.inner.spec
    }

    pub fn tail_index(&self) -> Option<u64> {
        self.inner.tail
    }

    /// `c_k`, memoized; an error unless it is a code.
    pub fn at(&self, k: u64) -> Result<CodeHandle> {
        let k = self.inner.tail.map_or(k, |t| k.min(t));
        if let Some(c) = self.inner.memo.lock().get(&k) {
            return Ok(c.clone());
        }
        let c = (self.inner.member)(k)?;
        c.require_code("a code sequence member")?;
        let c = c.memoize();
        Ok(self.inner.memo.lock().entry(k).or_insert(c).clone())
    }
}

impl fmt::Debug for CodeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CodeSequence")
            .field("spec", &self.inner.spec)
            .field("tail", &self.inner.tail)
            .finish()
    }
}

/// `d(n) = min_(k < c_0(n)) c_k(n) + k`.
pub fn diagonal_min(cs: &CodeSequence, n: &Nat) -> Result<Nat> {
    Ok(diagonal_run(cs, n)?.value)
}

/// The diagonal at `n` together with a stretch on which it is constant.
///
/// Members are monotone, so a member whose value is at least the minimum at
/// `n` stays so to the right; the diagonal is therefore constant on the run
/// of any minimizing member. Members with `c_k(n) + k` provably above the
/// current best (every code has `c_k(n) >= bits(n + 1)`) are not evaluated.
pub(crate) fn diagonal_run(cs: &CodeSequence, n: &Nat) -> Result<Run> {
    let first = cs.at(0)?.run(n)?;
    let bound = first.value.clone();
    let floor = code_length_floor(n);
    let mut best = first.value;
    let mut end = first.end;
    let last = match (cs.tail_index(), (&bound - 1u32).to_u64()) {
        (Some(t), Some(b)) => t.min(b),
        (Some(t), None) => t,
        (None, Some(b)) => b,
        (None, None) => u64::MAX,
    };
    let mut k = 1u64;
    while k <= last && &floor + k < best {
        let run = cs.at(k)?.run(n)?;
        let value = run.value + k;
        if value < best {
            best = value;
            end = run.end;
        } else if value == best {
            end = longer(end, run.end);
        }
        k += 1;
    }
    Ok(Run { value: best, end })
}

fn longer(a: Option<Nat>, b: Option<Nat>) -> Option<Nat> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, None) => a,
        (None, b) => b,
    }
}
