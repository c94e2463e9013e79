mod common;

use common::natc::{codewords_ref, natc_ref};
use common::{big, cex_elias_prefix, elias_iter_ref, pow2, termwise_sum};
use natcode::codes::{alpha, cex_elias, cex_nonmonotone, elias_iterate, CodeHandle, CodeKind, LengthFunction};
use natcode::kraft::{
    assign_codeword, decode_stream, decode_stream_linear, encode_stream, kraft_gap, partial_sum, BitString, Codebook,
    EncodedStream,
};
use natcode::{Error, Nat};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use proptest::prelude::*;
use std::sync::OnceLock;

fn elias_words(times: u32) -> &'static [String] {
    static TABLES: [OnceLock<Vec<String>>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    TABLES[times as usize].get_or_init(|| codewords_ref(&elias_lengths(times, 10_000)))
}

fn elias_lengths(times: u32, count: u64) -> Vec<u64> {
    (0..count).map(|n| elias_iter_ref(times, n)).collect()
}

#[test]
fn partial_sums_are_exact() {
    for n in 0..=64u64 {
        let s = partial_sum(alpha().lengths(), &big(n)).unwrap();
        assert_eq!(s.to_rational(), BigRational::one() - pow2(-(n as i64)));
    }
    for times in 1..3 {
        let c = elias_iterate(&alpha(), times).unwrap();
        let lengths = elias_lengths(times, 3000);
        for n in [0usize, 1, 2, 7, 100, 1023, 2999] {
            assert_eq!(
                partial_sum(c.lengths(), &big(n as u64)).unwrap().to_rational(),
                termwise_sum(&lengths[..n])
            );
        }
    }
    let ce = cex_elias_prefix(3000);
    for n in [0usize, 2, 10, 11, 2058, 2999] {
        assert_eq!(
            partial_sum(cex_elias().lengths(), &big(n as u64))
                .unwrap()
                .to_rational(),
            termwise_sum(&ce[..n])
        );
    }
}

#[test]
fn gaps_and_violations() {
    let g = kraft_gap(alpha().lengths(), &big(10)).unwrap();
    assert_eq!(g.to_rational(), pow2(-10));
    // 2^40 - 1 entries of elias(alpha) are 40 runs.
    let e = elias_iterate(&alpha(), 1).unwrap();
    let g = kraft_gap(e.lengths(), &((Nat::one() << 40u32) - 1u32)).unwrap();
    assert_eq!(g.to_rational(), pow2(-40));

    // 2, 1, 1: the third prefix overshoots.
    let bad = LengthFunction::from_fn(|n: &Nat| Ok(if *n == big(0) { big(2) } else { big(1) }), false);
    match kraft_gap(&bad, &big(5)) {
        Err(Error::Kraft { prefix_len }) => assert_eq!(prefix_len, "3"),
        other => panic!("{other:?}"),
    }
    assert!(kraft_gap(&bad, &big(2)).is_ok());
    // Runs of 1-bit lengths: 1, 2, 2, 2 exceeds at the fourth entry.
    let runs = LengthFunction::from_fn(|n: &Nat| Ok(if *n == big(0) { big(1) } else { big(2) }), true);
    match kraft_gap(&runs, &big(100)) {
        Err(Error::Kraft { prefix_len }) => assert_eq!(prefix_len, "4"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn codewords_match_reference_and_are_prefix_free() {
    let codes: Vec<(CodeHandle, Vec<u64>)> = vec![
        (alpha(), (0..=512).map(|n| n + 1).collect()),
        (elias_iterate(&alpha(), 1).unwrap(), elias_lengths(1, 513)),
        (elias_iterate(&alpha(), 2).unwrap(), elias_lengths(2, 513)),
        (cex_elias(), cex_elias_prefix(513)),
    ];
    for (c, lengths) in &codes {
        let book = Codebook::new(c.clone()).unwrap();
        let words: Vec<BitString> = (0..=512u64).map(|n| book.codeword(&big(n)).unwrap()).collect();
        let reference = codewords_ref(lengths);
        for (n, w) in words.iter().enumerate() {
            assert_eq!(w.to_string(), reference[n], "{} at {n}", c.spec());
            assert_eq!(assign_codeword(c, &big(n as u64)).unwrap(), *w);
        }
        // Canonical words are strictly increasing as binary fractions, so a
        // prefix relation can only occur between neighbours.
        for pair in words.windows(2) {
            assert!(!pair[0].is_prefix_of(&pair[1]), "{}: {:?}", c.spec(), pair);
        }
        for i in (0..words.len()).step_by(37) {
            for j in 0..words.len() {
                assert!(i == j || !words[i].is_prefix_of(&words[j]));
            }
        }
    }
}

#[test]
fn codewords_need_monotone_lengths() {
    let raw = CodeHandle::new(cex_nonmonotone(), CodeKind::Raw, "cex-nonmono").unwrap();
    assert!(matches!(assign_codeword(&raw, &big(3)), Err(Error::Contract(_))));
}

#[test]
fn natc_layout_is_bit_exact() {
    let symbols = [0u64, 1, 2, 3, 17, 9999, 4, 4];
    let nats: Vec<Nat> = symbols.iter().map(|&s| big(s)).collect();
    let c = elias_iterate(&alpha(), 2).unwrap();
    let stream = encode_stream(&c, &nats).unwrap();
    assert_eq!(
        stream.to_bytes().unwrap(),
        natc_ref("elias^2(alpha)", elias_words(2), &symbols)
    );
    assert_eq!(decode_stream(&stream).unwrap(), nats);
    assert_eq!(decode_stream_linear(&stream, &c).unwrap(), nats);
    let empty = encode_stream(&alpha(), &[]).unwrap();
    assert_eq!(empty.to_bytes().unwrap().len(), 15 + 5);
    assert_eq!(decode_stream(&empty).unwrap(), Vec::<Nat>::new());
}

#[test]
fn malformed_streams() {
    let good = encode_stream(&alpha(), &[big(1), big(0)]).unwrap().to_bytes().unwrap();
    let format_offset = |bytes: &[u8]| match EncodedStream::from_bytes(bytes) {
        Err(Error::Format { offset, .. }) => offset,
        other => panic!("{other:?}"),
    };
    assert_eq!(format_offset(b"NAT"), 0);
    let mut v = good.clone();
    v[4] = 2;
    assert_eq!(format_offset(&v), 4);
    assert_eq!(format_offset(&good[..6]), 5);
    assert_eq!(format_offset(&good[..9]), 7);
    assert_eq!(format_offset(&good[..15]), 12);
    let mut v = good.clone();
    v[20] |= 0x01;
    assert_eq!(format_offset(&v), 20);
    let mut v = good.clone();
    v.push(0);
    assert_eq!(format_offset(&v), 20);

    // Claim one more bit than encoded: "100" + "1" cannot finish.
    let stream = EncodedStream::new("alpha", 4, vec![0x90]);
    assert!(matches!(
        decode_stream(&stream),
        Err(Error::Truncated { bit_offset: 3 })
    ));
    let stream = EncodedStream::new("zeta", 1, vec![0]);
    assert!(matches!(decode_stream(&stream), Err(Error::Parse { .. })));
}

fn code_strategy() -> impl Strategy<Value = u32> {
    0u32..3
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn roundtrips(times in code_strategy(), symbols in prop::collection::vec(0u64..10_000, 0..40)) {
        let c = elias_iterate(&alpha(), times).unwrap();
        let nats: Vec<Nat> = symbols.iter().map(|&s| big(s)).collect();
        let stream = encode_stream(&c, &nats).unwrap();
        let bytes = stream.to_bytes().unwrap();
        let back = EncodedStream::from_bytes(&bytes).unwrap();
        prop_assert_eq!(&back, &stream);
        prop_assert_eq!(decode_stream(&back).unwrap(), nats.clone());
        prop_assert_eq!(bytes, natc_ref(c.spec(), elias_words(times), &symbols));
        let bits: u64 = symbols.iter().map(|&s| c.eval_u64(s).unwrap().to_u64().unwrap()).sum();
        prop_assert_eq!(stream.bit_count(), bits);
    }

    #[test]
    fn huge_symbols_roundtrip(shift in 64u32..400, offset in 0u64..1000) {
        let c = elias_iterate(&alpha(), 2).unwrap();
        let s = (Nat::one() << shift) + offset;
        let stream = encode_stream(&c, &[s.clone(), big(3), s.clone()]).unwrap();
        prop_assert_eq!(decode_stream(&stream).unwrap(), vec![s.clone(), big(3), s]);
    }
}
