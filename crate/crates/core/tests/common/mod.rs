//! Independent reference implementations for integration tests. Everything
//! here works termwise on plain integers and exact rationals, without the
//! library's run accelerators, memo tables or fixed-point logarithms.
#![allow(dead_code)]

pub mod completion;
pub mod natc;

use natcode::codes::{CodeHandle, CodeKind, LengthFunction};
use natcode::Nat;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `2^-k` for any integer `k`.
pub fn pow2(k: i64) -> BigRational {
    let p = BigInt::one() << k.unsigned_abs();
    if k >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

pub fn kraft_term(length: u64) -> BigRational {
    pow2(-(length as i64))
}

/// `sum 2^-l` over the given lengths, one term at a time.
pub fn termwise_sum(lengths: &[u64]) -> BigRational {
    lengths.iter().fold(BigRational::zero(), |acc, &l| acc + kraft_term(l))
}

pub fn to_u64(n: &Nat) -> u64 {
    n.to_u64().expect("small value")
}

pub fn lengths_of(c: &CodeHandle, count: u64) -> Vec<u64> {
    (0..count).map(|n| to_u64(&c.eval_u64(n).unwrap())).collect()
}

pub fn alpha_ref(n: u64) -> u64 {
    n + 1
}

/// `floor(log2(n + 1)) + c(floor(log2(n + 1)))`.
pub fn elias_ref(c: &dyn Fn(u64) -> u64, n: u64) -> u64 {
    let j = 63 - u64::from((n + 1).leading_zeros());
    j + c(j)
}

pub fn elias_iter_ref(times: u32, n: u64) -> u64 {
    match times {
        0 => alpha_ref(n),
        t => elias_ref(&|m| elias_iter_ref(t - 1, m), n),
    }
}

/// Stage-by-stage construction: stage `s` appends `2^(len + 1)` copies of
/// `len + s + 2`, where `len` is the current length.
pub fn cex_elias_prefix(count: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut stage = 0u64;
    while out.len() < count {
        let len = out.len() as u64;
        let remaining = count - out.len();
        let take = if len + 1 >= 32 {
            remaining
        } else {
            (1usize << (len + 1)).min(remaining)
        };
        out.extend(std::iter::repeat_n(len + stage + 2, take));
        stage += 1;
    }
    out
}

/// Stage `k` of the non-monotone sequence: `k + 2` once, then `4^k` copies
/// of `3k + 3` and `2 * 4^k` copies of `3k + 4` (Kraft mass `2^-(k+1)`).
pub fn nonmono_prefix(count: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut k = 0u64;
    while out.len() < count {
        out.push(k + 2);
        let q = 1usize << (2 * k);
        out.extend(std::iter::repeat_n(3 * k + 3, q));
        out.extend(std::iter::repeat_n(3 * k + 4, 2 * q));
        k += 1;
    }
    out.truncate(count);
    out
}

/// Rigorous enclosure of `log2(y)` for rational `1 <= y <= 2`, by the
/// bit-by-bit squaring method in interval fixed point with `scale` bits.
/// Returns `[lo, hi]` of width `2^-bits`.
pub fn log2_unit_reference(y: &BigRational, bits: u32, scale: u64) -> (BigRational, BigRational) {
    assert!(*y >= BigRational::one() && *y <= rat(2, 1));
    if *y == rat(2, 1) || y.is_one() {
        let exact = if y.is_one() {
            BigRational::zero()
        } else {
            BigRational::one()
        };
        return (exact.clone(), exact);
    }
    let one = BigInt::one() << scale;
    let two = &one << 1u32;
    let scaled = y * BigRational::from_integer(one.clone());
    let mut lo = scaled.floor().to_integer();
    let mut hi = scaled.ceil().to_integer();
    let mut value = BigInt::zero();
    for _ in 0..bits {
        lo = (&lo * &lo) >> scale;
        hi = ((&hi * &hi) >> scale) + 1u32;
        value <<= 1u32;
        if lo >= two {
            value += 1u32;
            lo >>= 1u32;
            hi = (hi + 1u32) >> 1u32;
        } else if hi >= two {
            panic!("reference precision exhausted; raise `scale`");
        }
    }
    let denom = BigInt::one() << bits;
    (
        BigRational::new(value.clone(), denom.clone()),
        BigRational::new(value + 1u32, denom),
    )
}

/// Enclosure of `log2(1 - x)` for rational `0 <= x <= 1/2`.
pub fn log2_one_minus_reference(x: &BigRational) -> (BigRational, BigRational) {
    let y = (BigRational::one() - x) * rat(2, 1);
    let (lo, hi) = log2_unit_reference(&y, 96, 512);
    (lo - BigRational::one(), hi - BigRational::one())
}

/// Termwise Lemma "better" data for a finite member list whose last member
/// repeats forever.
pub struct BruteBetter {
    pub d: Vec<u64>,
    pub p: Vec<u64>,
    pub r: Vec<u64>,
    pub c: i64,
    pub e: Vec<u64>,
    /// Exact `sum_(n < r_last) 2^-e(n)` and the tail bound past it.
    pub sigma_prefix: BigRational,
    pub sigma_tail: BigRational,
}

pub fn brute_better(members: &[&dyn Fn(u64) -> u64], cuts: usize) -> BruteBetter {
    let last = members.len() - 1;
    let member = |k: u64| members[(k as usize).min(last)];
    let d_at = |n: u64| (0..members[0](n)).map(|k| member(k)(n) + k).min().unwrap();

    let q = |m: u64, k: u64| -> u64 {
        let target = BigRational::one() - pow2(-(m as i64) - 2);
        let mut sum = BigRational::zero();
        let mut q = 0u64;
        while q < 1 || sum < target {
            sum += kraft_term(member(k)(q));
            q += 1;
        }
        q
    };
    let p: Vec<u64> = (0..=2 * cuts as u64)
        .map(|m| (0..=m + 1).map(|k| q(m, k)).max().unwrap())
        .collect();

    let mut r = vec![0u64];
    for m in 1..=cuts {
        let floor = r[m - 1].max(p[2 * m]);
        let mut n = floor + 1;
        while d_at(n) <= d_at(n - 1) {
            n += 1;
        }
        r.push(n);
    }
    let horizon = *r.last().unwrap();
    let d: Vec<u64> = (0..horizon).map(d_at).collect();

    let segment = |n: u64| r.iter().rposition(|&cut| cut <= n).unwrap() as u64;
    let e_prime: Vec<i64> = (0..horizon).map(|n| d[n as usize] as i64 - segment(n) as i64).collect();
    let s1: BigRational = e_prime[..r[1] as usize]
        .iter()
        .fold(BigRational::zero(), |acc, &v| acc + pow2(-v));
    // Least C with S_1 + 2 * 2^-1 <= 2^(C - 1).
    let bound = s1 + BigRational::one();
    let mut c = 0i64;
    while pow2(c - 1) < bound {
        c += 1;
    }
    let e: Vec<u64> = e_prime.iter().map(|&v| (v + c) as u64).collect();
    let sigma_prefix = e.iter().fold(BigRational::zero(), |acc, &v| acc + kraft_term(v));
    let sigma_tail = pow2(1 - cuts as i64 - c);
    BruteBetter {
        d,
        p,
        r,
        c,
        e,
        sigma_prefix,
        sigma_tail,
    }
}

/// A monotone proper precode with exactly known Kraft sum: a random
/// non-decreasing prefix, then lengths `base + 1 + i`, each repeated
/// `repeat` times.
#[derive(Clone, Debug)]
pub struct RandomPrecode {
    pub prefix: Vec<u64>,
    pub base: u64,
    pub repeat: u64,
}

impl RandomPrecode {
    pub fn generate(rng: &mut impl Rng) -> Self {
        loop {
            let len = rng.random_range(0..12usize);
            let mut prefix = Vec::with_capacity(len);
            let mut v = rng.random_range(1..5u64);
            for _ in 0..len {
                v += rng.random_range(0..3u64);
                prefix.push(v);
            }
            let base = prefix.last().copied().unwrap_or(0) + rng.random_range(0..4u64);
            let repeat = 1u64 << rng.random_range(0..3u32);
            let p = RandomPrecode { prefix, base, repeat };
            if p.sigma() < BigRational::one() {
                return p;
            }
        }
    }

    pub fn length(&self, n: u64) -> u64 {
        match self.prefix.get(n as usize) {
            Some(&v) => v,
            None => self.base + 1 + (n - self.prefix.len() as u64) / self.repeat,
        }
    }

    pub fn sigma(&self) -> BigRational {
        termwise_sum(&self.prefix) + BigRational::from_integer(self.repeat.into()) * pow2(-(self.base as i64))
    }

    pub fn handle(&self) -> CodeHandle {
        let me = self.clone();
        let lengths = LengthFunction::from_fn(move |n: &Nat| Ok(Nat::from(me.length(to_u64(n)))), true);
        CodeHandle::new(lengths, CodeKind::ProperPrecode, format!("{self:?}")).unwrap()
    }
}

pub fn big(n: u64) -> BigUint {
    BigUint::from(n)
}
