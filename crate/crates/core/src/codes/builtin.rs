use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::{CodeHandle, CodeKind, LengthFunction, Lengths, Run};
use crate::error::{Error, Result};
use crate::numerics::Nat;

/// Largest `ell + 1` for which a stage end `ell + 2^(ell+1)` is materialized.
const MAX_MATERIALIZED_SHIFT: u64 = 1 << 24;

struct Alpha;

impl Lengths for Alpha {
    fn length(&self, n: &Nat) -> Result<Nat> {
        Ok(n + 1u32)
    }
}

/// The trivial code `n -> n + 1` (unary).
pub fn alpha() -> CodeHandle {
    CodeHandle::new(LengthFunction::new(Alpha, true), CodeKind::Code, "alpha").expect("alpha is monotone")
}

/// `floor(log2(n + 1))`.
fn block_of(n: &Nat) -> u64 {
    (n + 1u32).bits() - 1
}

struct Elias {
    base: CodeHandle,
}

impl Lengths for Elias {
    fn length(&self, n: &Nat) -> Result<Nat> {
        let block = block_of(n);
        Ok(self.base.eval(&Nat::from(block))? + block)
    }

    // Block j = [2^j - 1, 2^(j+1) - 1) has constant length.
    fn run(&self, n: &Nat) -> Result<Run> {
        let block = block_of(n);
        let value = self.base.eval(&Nat::from(block))? + block;
        let end = (Nat::one() << (block + 1)) - 1u32;
        Ok(Run { value, end: Some(end) })
    }
}

/// The successor code `n -> j + c(j)` with `j = floor(log2(n + 1))`.
///
/// Its code-spec string is rendered in normal form when the input parses.
pub fn elias_successor(c: &CodeHandle) -> Result<CodeHandle> {
    c.require_code("the Elias successor")?;
    let spec = format!("elias({})", c.spec());
    let spec = super::parse_code_spec(&spec).map_or(spec, |s| s.to_string());
    CodeHandle::new(
        LengthFunction::new(Elias { base: c.clone() }, true),
        CodeKind::Code,
        spec,
    )
}

/// `times`-fold application of [`elias_successor`].
pub fn elias_iterate(c: &CodeHandle, times: u32) -> Result<CodeHandle> {
    let mut current = c.clone();
    for _ in 0..times {
        current = elias_successor(&current)?;
    }
    Ok(current)
}

/// `4^k + k - 1`, the k-th position where the non-monotone sequence is short.
pub fn nonmonotone_critical_index(k: u64) -> Nat {
    (Nat::one() << (2 * k)) + k - 1u32
}

struct NonMonotone;

impl NonMonotone {
    /// Stage `k` containing `n`: largest `k` with `4^k + k - 1 <= n`.
    fn stage(n: &Nat) -> u64 {
        let mut k = 0u64;
        while &nonmonotone_critical_index(k + 1) <= n {
            k += 1;
        }
        k
    }
}

impl Lengths for NonMonotone {
    fn length(&self, n: &Nat) -> Result<Nat> {
        Ok(self.run(n)?.value)
    }

    // Stage k: one entry k+2 at 4^k+k-1, then 4^k entries 3k+3, then
    // 2*4^k entries 3k+4. Each stage has Kraft mass 2^-(k+1).
    fn run(&self, n: &Nat) -> Result<Run> {
        let k = Self::stage(n);
        let start = nonmonotone_critical_index(k);
        let quarter = Nat::one() << (2 * k);
        if *n == start {
            return Ok(Run::single(Nat::from(k + 2), n));
        }
        let first_end = &start + 1u32 + &quarter;
        if *n < first_end {
            Ok(Run {
                value: Nat::from(3 * k + 3),
                end: Some(first_end),
            })
        } else {
            Ok(Run {
                value: Nat::from(3 * k + 4),
                end: Some(nonmonotone_critical_index(k + 1)),
            })
        }
    }
}

/// A non-monotone length function with tight Kraft sum that no code is
/// eventually bounded by: at `n = 4^k + k - 1` it takes the value `k + 2`,
/// while every code has length at least `2k + 1` there.
pub fn cex_nonmonotone() -> LengthFunction {
    LengthFunction::new(NonMonotone, false)
}

/// Start `ell_s` of stage `s` of [`cex_elias`]: `ell_0 = 0`,
/// `ell_(s+1) = ell_s + 2^(ell_s + 1)`.
pub fn cex_elias_stage_start(stage: u32) -> Nat {
    let mut ell = Nat::zero();
    for _ in 0..stage {
        let shift = (&ell + 1u32).to_u64().expect("stage start fits in memory");
        ell = &ell + (Nat::one() << shift);
    }
    ell
}

struct CexElias;

impl Lengths for CexElias {
    fn length(&self, n: &Nat) -> Result<Nat> {
        Ok(self.run(n)?.value)
    }

    fn run(&self, n: &Nat) -> Result<Run> {
        let mut ell = Nat::zero();
        let mut stage = 0u64;
        loop {
            let shift = &ell + 1u32;
            let value = &ell + stage + 2u32;
            // 2^(ell+1) > n once ell + 1 exceeds the bit length of n.
            let beyond = shift > BigUint::from(n.bits());
            match shift.to_u64() {
                Some(s) if s <= MAX_MATERIALIZED_SHIFT => {
                    let next = &ell + (Nat::one() << s);
                    if *n < next {
                        return Ok(Run { value, end: Some(next) });
                    }
                    ell = next;
                }
                _ if beyond => return Ok(Run { value, end: None }),
                _ => return Err(Error::cap("cex-elias stage size (bits)", MAX_MATERIALIZED_SHIFT)),
            }
            stage += 1;
        }
    }
}

/// A code for which the Elias successor is not eventually better: stage `s`
/// consists of `2^(ell_s + 1)` copies of `ell_s + s + 2`.
pub fn cex_elias() -> CodeHandle {
    CodeHandle::new(LengthFunction::new(CexElias, true), CodeKind::Code, "cex-elias").expect("monotone")
}
