use num_bigint::BigInt;
use serde::{Serialize, Serializer};

use super::CodeHandle;
use crate::error::Result;
use crate::numerics::Nat;

fn as_string<S: Serializer, T: ToString>(value: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&value.to_string())
}

/// An index where `a(n) <= b(n) - gap`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub n: u64,
    #[serde(serialize_with = "as_string")]
    pub diff: BigInt,
}

/// Finite-range evidence about the order between two length functions.
///
/// `a` being better than `b` means `a(n) - b(n) -> -infinity`; a report can
/// only exhibit a witness that the difference has dropped below `-gap`.
/// Statistics cover `0..=scanned`, which is `horizon` unless the scan stopped
/// at the first witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EvidenceReport {
    pub code_a: String,
    pub code_b: String,
    pub horizon: u64,
    pub scanned: u64,
    #[serde(serialize_with = "as_string")]
    pub gap: Nat,
    #[serde(serialize_with = "as_string")]
    pub max_diff: BigInt,
    pub max_at: u64,
    #[serde(serialize_with = "as_string")]
    pub min_diff: BigInt,
    pub min_at: u64,
    /// Maximum of `a(n) - b(n)` over the upper half `n >= scanned / 2`.
    #[serde(serialize_with = "as_string")]
    pub tail_max_diff: BigInt,
    pub witness: Option<Witness>,
}

struct Tally {
    gap: BigInt,
    max: Option<(BigInt, u64)>,
    min: Option<(BigInt, u64)>,
    diffs: Vec<BigInt>,
    witness: Option<Witness>,
}

impl Tally {
    fn new(gap: &Nat) -> Self {
        Tally {
            gap: BigInt::from(gap.clone()),
            max: None,
            min: None,
            diffs: Vec::new(),
            witness: None,
        }
    }

    fn add(&mut self, n: u64, x: &Nat, y: &Nat) {
        let diff = BigInt::from(x.clone()) - BigInt::from(y.clone());
        if self.max.as_ref().is_none_or(|(m, _)| &diff > m) {
            self.max = Some((diff.clone(), n));
        }
        if self.min.as_ref().is_none_or(|(m, _)| &diff < m) {
            self.min = Some((diff.clone(), n));
        }
        if self.witness.is_none() && diff <= -&self.gap {
            self.witness = Some(Witness { n, diff: diff.clone() });
        }
        self.diffs.push(diff);
    }

    fn report(self, a: &CodeHandle, b: &CodeHandle, horizon: u64, gap: &Nat) -> EvidenceReport {
        let scanned = self.diffs.len() as u64 - 1;
        let tail_max = self.diffs[(scanned / 2) as usize..]
            .iter()
            .max()
            .cloned()
            .unwrap_or_default();
        let (max_diff, max_at) = self.max.expect("at least one index");
        let (min_diff, min_at) = self.min.expect("at least one index");
        EvidenceReport {
            code_a: a.spec().to_string(),
            code_b: b.spec().to_string(),
            horizon,
            scanned,
            gap: gap.clone(),
            max_diff,
            max_at,
            min_diff,
            min_at,
            tail_max_diff: tail_max,
            witness: self.witness,
        }
    }
}

/// Compare `a` and `b` on all of `0..=horizon`; lengths are evaluated in
/// parallel.
pub fn compare_evidence(a: &CodeHandle, b: &CodeHandle, horizon: u64, gap: &Nat) -> Result<EvidenceReport> {
    let la = a.lengths().eval_range(0, horizon)?;
    let lb = b.lengths().eval_range(0, horizon)?;
    let mut tally = Tally::new(gap);
    for (n, (x, y)) in (0u64..).zip(la.iter().zip(&lb)) {
        tally.add(n, x, y);
    }
    Ok(tally.report(a, b, horizon, gap))
}

/// Like [`compare_evidence`] but evaluates in order and stops at the first
/// witness, so constructions that are costly far out are only run as far as
/// needed.
pub fn scan_until_witness(a: &CodeHandle, b: &CodeHandle, horizon: u64, gap: &Nat) -> Result<EvidenceReport> {
    let mut tally = Tally::new(gap);
    for n in 0..=horizon {
        tally.add(n, &a.eval_u64(n)?, &b.eval_u64(n)?);
        if tally.witness.is_some() {
            break;
        }
    }
    Ok(tally.report(a, b, horizon, gap))
}

/// Least `n <= horizon` with `a(n) <= b(n) - gap`, scanning in order and
/// stopping at the first hit.
pub fn find_witness(a: &CodeHandle, b: &CodeHandle, horizon: u64, gap: &Nat) -> Result<Option<Witness>> {
    for n in 0..=horizon {
        let x = a.eval_u64(n)?;
        let y = b.eval_u64(n)?;
        if &x + gap <= y {
            let diff = BigInt::from(x) - BigInt::from(y);
            return Ok(Some(Witness { n, diff }));
        }
    }
    Ok(None)
}
