mod common;

use common::{random_balanced, random_move, random_presentation, rng};
use knotpres::abelian::{abelian_invariants, exponent_matrix, smith_normal_form};
use knotpres::moves::{apply_move, inverse_moves, AcCertificate, AcMove};
use knotpres::presentation::Presentation;
use knotpres::Matrix;
use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;
use rand::Rng;

fn non_unit_factors(p: &Presentation) -> Vec<BigInt> {
    let mut f: Vec<BigInt> = smith_normal_form(&exponent_matrix::<BigInt>(p))
        .factors
        .into_iter()
        .filter(|x| !x.is_one())
        .collect();
    f.sort();
    f
}

fn start(seed: u64) -> (rand_chacha::ChaCha8Rng, Presentation) {
    let mut r = rng(seed);
    let n = r.gen_range(0..4);
    let k = r.gen_range(0..4);
    let p = random_presentation(&mut r, n, k, 6);
    (r, p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn every_move_is_undone_by_its_inverse(seed: u64) {
        let (mut r, p) = start(seed);
        for _ in 0..20 {
            let Some(m) = random_move(&mut r, &p) else { continue };
            let q = apply_move(&p, &m).unwrap();
            let mut back = q.clone();
            for inv in inverse_moves(&p, &m).unwrap() {
                back = apply_move(&back, &inv).unwrap();
            }
            prop_assert_eq!(&back, &p, "move {:?} from {} via {}", m, p, q);
            return Ok(());
        }
    }

    #[test]
    fn moves_keep_the_abelianization(seed: u64) {
        let (mut r, mut p) = start(seed);
        for _ in 0..10 {
            let Some(m) = random_move(&mut r, &p) else { continue };
            let q = apply_move(&p, &m).unwrap();
            prop_assert_eq!(non_unit_factors(&p), non_unit_factors(&q), "move {:?}", m);
            prop_assert_eq!(
                abelian_invariants(&exponent_matrix::<BigInt>(&p)),
                abelian_invariants(&exponent_matrix::<BigInt>(&q))
            );
            p = q;
        }
    }

    #[test]
    fn certificates_replay_and_invert(seed: u64) {
        let mut r = rng(seed);
        let p = random_balanced(&mut r, 3, 6);
        let mut cert = AcCertificate::identity(p.clone());
        let steps = r.gen_range(1..12);
        while cert.moves.len() < steps {
            if let Some(m) = random_move(&mut r, &cert.end) {
                cert.push(m).unwrap();
            }
        }
        prop_assert!(cert.verify());
        let inv = cert.invert().unwrap();
        prop_assert_eq!(&inv.start, &cert.end);
        prop_assert_eq!(&inv.end, &p);
        prop_assert!(inv.verify());
        let parsed = AcCertificate::parse(&cert.to_text()).unwrap();
        prop_assert!(parsed.verify());
        prop_assert_eq!(&parsed.end, &cert.end);
    }

    #[test]
    fn tampered_certificates_fail(seed: u64) {
        let mut r = rng(seed);
        let p = random_balanced(&mut r, 3, 6);
        let mut cert = AcCertificate::identity(p);
        for _ in 0..6 {
            if let Some(m) = random_move(&mut r, &cert.end) {
                cert.push(m).unwrap();
            }
        }
        let mut wrong = cert.clone();
        wrong.end = apply_move(&cert.end, &AcMove::Stabilize { word: knotpres::Word::empty(), name: None }).unwrap();
        prop_assert!(!wrong.verify());
    }
}

#[test]
fn unit_factor_filter_sees_torsion() {
    let p = Presentation::parse("< a, b | a^2, b^3 >").unwrap();
    assert_eq!(non_unit_factors(&p), vec![BigInt::from(6)]);
    let _ = Matrix::identity(1);
}
