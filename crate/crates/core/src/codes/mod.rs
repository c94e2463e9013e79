//! Length functions, code handles and the built-in codes.

mod builtin;
mod evidence;
mod spec;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::One;
use parking_lot::RwLock;

use crate::error::{Error, Result};
use crate::numerics::Nat;

pub use builtin::{
    alpha, cex_elias, cex_elias_stage_start, cex_nonmonotone, elias_iterate, elias_successor,
    nonmonotone_critical_index,
};
pub use evidence::{compare_evidence, find_witness, scan_until_witness, EvidenceReport, Witness};
pub use spec::{parse_code_spec, CodeSpec};

/// A maximal-or-not stretch on which a length function is constant.
///
/// `value` holds on every index in `[start, end)`. An `end` of `None` means
/// the extent is unknown beyond the queried index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    pub value: Nat,
    pub end: Option<Nat>,
}

impl Run {
    pub fn single(value: Nat, at: &Nat) -> Self {
        Run {
            value,
            end: Some(at + 1u32),
        }
    }

    /// Exclusive end of the run, defaulting to one past `start`.
    pub fn end_or_next(&self, start: &Nat) -> Nat {
        match &self.end {
            Some(end) if end > start => end.clone(),
            _ => start + 1u32,
        }
    }
}

/// Source of codeword lengths.
///
/// `run` is an accelerator: it must agree with `length` on every index it
/// covers. The default reports a run of one.
pub trait Lengths: Send + Sync {
    fn length(&self, n: &Nat) -> Result<Nat>;

    fn run(&self, n: &Nat) -> Result<Run> {
        Ok(Run::single(self.length(n)?, n))
    }
}

struct ClosureLengths<F>(F);

impl<F> Lengths for ClosureLengths<F>
where
    F: Fn(&Nat) -> Result<Nat> + Send + Sync,
{
    fn length(&self, n: &Nat) -> Result<Nat> {
        (self.0)(n)
    }
}

struct Inner {
    source: Box<dyn Lengths>,
    monotone: bool,
    memo: Option<RwLock<HashMap<Nat, Nat>>>,
}

/// A total function `N -> N` giving codeword lengths.
///
/// Cheap to clone and safe to share between threads. A memoized function
/// caches every evaluated index for the life of the process.
#[derive(Clone)]
pub struct LengthFunction {
    inner: Arc<Inner>,
}

impl LengthFunction {
    pub fn new(source: impl Lengths + 'static, monotone: bool) -> Self {
        LengthFunction {
            inner: Arc::new(Inner {
                source: Box::new(source),
                monotone,
                memo: None,
            }),
        }
    }

    pub fn from_fn<F>(f: F, monotone: bool) -> Self
    where
        F: Fn(&Nat) -> Result<Nat> + Send + Sync + 'static,
    {
        Self::new(ClosureLengths(f), monotone)
    }

    /// The same function with a shared evaluation cache in front of it.
    pub fn memoize(&self) -> Self {
        if self.inner.memo.is_some() {
            return self.clone();
        }
        LengthFunction {
            inner: Arc::new(Inner {
                source: Box::new(self.clone()),
                monotone: self.inner.monotone,
                memo: Some(RwLock::new(HashMap::new())),
            }),
        }
    }

    pub fn is_monotone(&self) -> bool {
        self.inner.monotone
    }

    /// Whether both handles share one underlying function and cache.
    pub fn ptr_eq(&self, other: &LengthFunction) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }

    pub fn is_memoized(&self) -> bool {
        self.inner.memo.is_some()
    }

    pub fn eval(&self, n: &Nat) -> Result<Nat> {
        let Some(memo) = &self.inner.memo else {
            return self.inner.source.length(n);
        };
        if let Some(v) = memo.read().get(n) {
            return Ok(v.clone());
        }
        let v = self.inner.source.length(n)?;
        // First writer wins so concurrent callers observe one value.
        Ok(memo.write().entry(n.clone()).or_insert(v).clone())
    }

    pub fn eval_u64(&self, n: u64) -> Result<Nat> {
        self.eval(&Nat::from(n))
    }

    /// Cached value at `n`, if any, without evaluating.
    pub fn cached(&self, n: &Nat) -> Option<Nat> {
        self.inner.memo.as_ref()?.read().get(n).cloned()
    }

    pub fn cache_len(&self) -> usize {
        self.inner.memo.as_ref().map_or(0, |m| m.read().len())
    }

    pub fn run(&self, n: &Nat) -> Result<Run> {
        self.inner.source.run(n)
    }

    /// Lengths at `from..=to`, evaluated in parallel when the `parallel`
    /// feature is on.
    pub fn eval_range(&self, from: u64, to: u64) -> Result<Vec<Nat>> {
        crate::par::map_range(from, to, |n| self.eval_u64(n))
    }

    pub fn eval_range_sequential(&self, from: u64, to: u64) -> Result<Vec<Nat>> {
        crate::par::map_range_sequential(from, to, |n| self.eval_u64(n))
    }

    /// Lengths at `from..=to` produced by walking runs.
    pub fn eval_range_by_runs(&self, from: u64, to: u64) -> Result<Vec<Nat>> {
        let mut out = Vec::with_capacity(to.saturating_sub(from) as usize + 1);
        let mut n = Nat::from(from);
        let last = Nat::from(to);
        while n <= last {
            let run = self.run(&n)?;
            let end = run.end_or_next(&n).min(&last + 1u32);
            while n < end {
                out.push(run.value.clone());
                n += 1u32;
            }
        }
        Ok(out)
    }
}

impl Lengths for LengthFunction {
    fn length(&self, n: &Nat) -> Result<Nat> {
        self.eval(n)
    }

    fn run(&self, n: &Nat) -> Result<Run> {
        LengthFunction::run(self, n)
    }
}

impl fmt::Debug for LengthFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LengthFunction")
            .field("monotone", &self.inner.monotone)
            .field("memoized", &self.is_memoized())
            .finish()
    }
}

/// What a length function is claimed to be.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CodeKind {
    /// Monotone, Kraft sum exactly one.
    Code,
    /// Monotone, Kraft sum at most one.
    Precode,
    /// Monotone, Kraft sum strictly below one.
    ProperPrecode,
    /// No contract beyond totality.
    Raw,
}

impl fmt::Display for CodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CodeKind::Code => "code",
            CodeKind::Precode => "precode",
            CodeKind::ProperPrecode => "proper-precode",
            CodeKind::Raw => "raw",
        })
    }
}

/// A length function together with its declared contract and the code-spec
/// string that names it.
///
/// Kraft tightness is declared, not checked: it is not decidable for an
/// arbitrary oracle.
#[derive(Clone, Debug)]
pub struct CodeHandle {
    lengths: LengthFunction,
    kind: CodeKind,
    spec: String,
}

impl CodeHandle {
    pub fn new(lengths: LengthFunction, kind: CodeKind, spec: impl Into<String>) -> Result<Self> {
        if kind != CodeKind::Raw && !lengths.is_monotone() {
            return Err(Error::contract(format!("a {kind} must be monotone non-decreasing")));
        }
        Ok(CodeHandle {
            lengths,
            kind,
            spec: spec.into(),
        })
    }

    pub fn lengths(&self) -> &LengthFunction {
        &self.lengths
    }

    pub fn kind(&self) -> CodeKind {
        self.kind
    }

    pub fn spec(&self) -> &str {
        &self.spec
    }

    pub fn is_code(&self) -> bool {
        self.kind == CodeKind::Code
    }

    pub fn require_code(&self, context: &str) -> Result<()> {
        if self.is_code() {
            Ok(())
        } else {
            Err(Error::contract(format!(
                "{context} needs a code, got {} `{}`",
                self.kind, self.spec
            )))
        }
    }

    pub fn require_monotone(&self, context: &str) -> Result<()> {
        if self.lengths.is_monotone() {
            Ok(())
        } else {
            Err(Error::contract(format!(
                "{context} needs monotone lengths, `{}` is not",
                self.spec
            )))
        }
    }

    pub fn eval(&self, n: &Nat) -> Result<Nat> {
        self.lengths.eval(n)
    }

    pub fn eval_u64(&self, n: u64) -> Result<Nat> {
        self.lengths.eval_u64(n)
    }

    pub fn run(&self, n: &Nat) -> Result<Run> {
        self.lengths.run(n)
    }

    /// Same handle with a memoizing length function.
    pub fn memoize(&self) -> Self {
        CodeHandle {
            lengths: self.lengths.memoize(),
            kind: self.kind,
            spec: self.spec.clone(),
        }
    }

    pub fn with_spec(mut self, spec: impl Into<String>) -> Self {
        self.spec = spec.into();
        self
    }
}

/// Memoizing wrapper.
pub fn memoize(c: &LengthFunction) -> LengthFunction {
    c.memoize()
}

/// Smallest length any code may assign to `n`: `2^len >= n + 2`.
pub(crate) fn code_length_floor(n: &Nat) -> Nat {
    Nat::from((n + Nat::one()).bits())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn memoize_is_extensionally_invisible() {
        let a = alpha().lengths().memoize();
        assert_eq!(a.eval_u64(7).unwrap(), Nat::from(8u32));
        let n = Nat::from(10_000u32);
        assert!(a.cached(&n).is_none());
        let first = a.eval(&n).unwrap();
        assert_eq!(a.cached(&n), Some(first.clone()));
        assert_eq!(a.eval(&n).unwrap(), first);
        assert_eq!(a.cache_len(), 2);
    }

    #[test]
    fn memoized_cex_elias() {
        let c = cex_elias().lengths().memoize();
        assert_eq!(c.eval_u64(2048).unwrap(), Nat::from(14u32));
    }

    #[test]
    fn non_monotone_cannot_be_a_code() {
        let d = cex_nonmonotone();
        assert!(!d.is_monotone());
        assert!(CodeHandle::new(d.clone(), CodeKind::Code, "x").is_err());
        assert!(CodeHandle::new(d, CodeKind::Raw, "x").is_ok());
    }

    #[test]
    fn concurrent_memo_is_consistent() {
        let c = elias_successor(&alpha()).unwrap().memoize();
        let values: Vec<Nat> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..8).map(|_| s.spawn(|| c.eval_u64(12_345).unwrap())).collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        assert!(values.windows(2).all(|w| w[0] == w[1]));
        assert_eq!(c.lengths().cache_len(), 1);
    }

    #[test]
    fn length_floor() {
        assert_eq!(code_length_floor(&Nat::from(0u32)), Nat::from(1u32));
        assert_eq!(code_length_floor(&Nat::from(2u32)), Nat::from(2u32));
        assert_eq!(code_length_floor(&Nat::from(6u32)), Nat::from(3u32));
        assert_eq!(code_length_floor(&Nat::from(7u32)), Nat::from(4u32));
    }
}
