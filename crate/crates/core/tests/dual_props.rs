mod common;

use common::{random_balanced, rng};
use knotpres::abelian::{exponent_matrix, is_perfect_presentation};
use knotpres::coset::enumerate;
use knotpres::dual::{align, default_dual, default_witness, dualize, insert_pairs, transpose_check, PairInsertion};
use knotpres::presentation::{Presentation, RawPresentation};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

/// Signed occurrence count of `a_i` in `r_j`, read off the letters directly.
fn occurrence_count(p: &RawPresentation, j: usize, i: usize) -> i64 {
    p.relators()[j]
        .iter()
        .filter(|l| l.gen() == i)
        .map(|l| if l.is_inverse() { -1 } else { 1 })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn dual_matrix_is_the_transpose(seed: u64) {
        let p = random_balanced(&mut rng(seed), 4, 10);
        prop_assert!(transpose_check(&p));
        let raw = RawPresentation::from(&p);
        let d = exponent_matrix::<i64>(&default_dual(&p).unwrap());
        let n = p.generator_count();
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(d[(i, j)], occurrence_count(&raw, j, i));
            }
        }
    }

    #[test]
    fn any_witness_gives_the_transpose(seed: u64) {
        let mut r = rng(seed);
        let p = random_balanced(&mut r, 4, 10);
        let raw = RawPresentation::from(&p);
        let mut w = default_witness(&raw).unwrap();
        for occ in &mut w.0 {
            occ.shuffle(&mut r);
        }
        let d = dualize(&raw, &w).unwrap();
        prop_assert_eq!(exponent_matrix::<BigInt>(&d), exponent_matrix::<BigInt>(&p).transpose());
    }

    #[test]
    fn double_dual_matrix(seed: u64) {
        let p = random_balanced(&mut rng(seed), 4, 10);
        let dd = default_dual(&default_dual(&p).unwrap()).unwrap();
        prop_assert_eq!(exponent_matrix::<BigInt>(&dd), exponent_matrix::<BigInt>(&p));
    }

    #[test]
    fn pair_insertion_keeps_the_matrix(seed: u64) {
        let mut r = rng(seed);
        let p = random_balanced(&mut r, 3, 8);
        let raw = RawPresentation::from(&p);
        let n = p.generator_count();
        let mut aug = raw.clone();
        for _ in 0..r.gen_range(0..4) {
            let relator = r.gen_range(0..n);
            let ins = PairInsertion {
                relator,
                generator: r.gen_range(0..n),
                count: r.gen_range(1..3),
                position: r.gen_range(0..=aug.relators()[relator].len()),
            };
            aug = insert_pairs(&aug, &[ins]).unwrap();
        }
        prop_assert_eq!(aug.reduced(), p.clone());
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(occurrence_count(&aug, j, i), occurrence_count(&raw, j, i));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn align_on_random_perfect_presentations(seed: u64) {
        let mut r = rng(seed);
        let p = loop {
            let p = random_balanced(&mut r, 3, 8);
            if is_perfect_presentation(&p) {
                break p;
            }
        };
        let cert = align(&p).unwrap();
        cert.verify().unwrap();
        prop_assert_eq!(dualize(&cert.augmented, &cert.witness).unwrap(), cert.dual.clone());
        prop_assert_eq!(exponent_matrix::<BigInt>(&cert.augmented.reduced()), exponent_matrix::<BigInt>(&p));
        let back = cert.trivialization.invert().unwrap();
        prop_assert_eq!(back.end, Presentation::empty());
        if p.generator_count() <= 2 {
            prop_assert_eq!(enumerate(&cert.dual, 100_000).order(), Some(1));
        }
    }
}
