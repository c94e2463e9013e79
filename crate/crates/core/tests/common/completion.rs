//! Termwise checker for the completion of a random proper precode.

use super::{kraft_term, pow2, rat, to_u64, RandomPrecode};
use natcode::construct::{complete_precode, CompletionStep, ConstructConfig};
use natcode::numerics::ComputableReal;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Lengths of `d_t`: the precode with the first `t` steps applied.
pub fn lengths_at(p: &RandomPrecode, steps: &[CompletionStep], n: u64) -> u64 {
    steps.iter().find(|s| to_u64(&s.m) == n).map_or(p.length(n), |s| s.k)
}

pub fn check_completion(p: &RandomPrecode, config: &ConstructConfig) {
    let sigma = p.sigma();
    let delta = BigRational::one() - &sigma;
    let trace = complete_precode(&p.handle(), ComputableReal::exact(sigma.clone()), delta, config).unwrap();
    let target = BigRational::one() - pow2(-20);

    // Run until the exact gap is below 2^-21, checking every step termwise.
    let mut sigma_t = sigma.clone();
    let mut t = 0usize;
    while BigRational::one() - &sigma_t > pow2(-21) {
        trace.run_to(t as u64 + 1).unwrap();
        let steps = trace.steps();
        let s = &steps[t];
        let gap = BigRational::one() - &sigma_t;
        assert!(
            pow2(-(s.k as i64)) <= gap && gap <= pow2(2 - s.k as i64),
            "Eq. (2) at t = {t}: {p:?}"
        );

        let m = to_u64(&s.m);
        let before = &steps[..t];
        assert!(before.iter().all(|b| to_u64(&b.m) < m), "position {m} revisited");
        assert!((0..m).all(|n| lengths_at(p, before, n) <= s.k));
        assert!(lengths_at(p, before, m) > s.k);
        assert_eq!(to_u64(&s.old_length), p.length(m));

        sigma_t += kraft_term(s.k) - kraft_term(p.length(m));
        assert_eq!(s.offset.to_rational(), &sigma_t - &sigma);
        let new_gap = BigRational::one() - &sigma_t;
        assert!(new_gap * rat(8, 1) <= gap * rat(7, 1), "contraction at t = {t}");
        let after = &steps[..=t];
        let horizon = m + 2 * p.repeat + 2;
        assert!((0..horizon).all(|n| lengths_at(p, after, n) <= lengths_at(p, after, n + 1)));
        t += 1;
    }

    // Termwise partial sums of the final code.
    let mut sum = BigRational::zero();
    let mut n = 0u64;
    while sum < target {
        sum += kraft_term(to_u64(&trace.final_code().eval_u64(n).unwrap()));
        assert!(sum < BigRational::one());
        n += 1;
        assert!(n < 1 << 16, "partial sums stall: {p:?}");
    }
    let steps = trace.steps();
    for k in 0..n {
        assert_eq!(
            to_u64(&trace.final_code().eval_u64(k).unwrap()),
            lengths_at(p, &steps, k)
        );
    }
}
