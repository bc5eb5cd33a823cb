#![allow(dead_code)]

use knotpres::moves::AcMove;
use knotpres::presentation::{numbered_names, Presentation};
use knotpres::word::{Letter, Word};
use knotpres::Matrix;
use knotpres::lemma2::{replay_ops, ElementaryOp};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_letters(rng: &mut impl Rng, n_gens: usize, len: usize) -> Vec<Letter> {
    (0..len)
        .map(|_| Letter::new(rng.gen_range(0..n_gens), rng.gen_bool(0.5)))
        .collect()
}

pub fn random_word(rng: &mut impl Rng, n_gens: usize, max_len: usize) -> Word {
    if n_gens == 0 {
        return Word::empty();
    }
    let len = rng.gen_range(0..=max_len);
    Word::from_letters(&random_letters(rng, n_gens, len))
}

pub fn random_presentation(rng: &mut impl Rng, n_gens: usize, n_rels: usize, max_len: usize) -> Presentation {
    let relators = (0..n_rels).map(|_| random_word(rng, n_gens, max_len)).collect();
    Presentation::new(numbered_names("a", n_gens), relators).unwrap()
}

pub fn random_balanced(rng: &mut impl Rng, max_gens: usize, max_len: usize) -> Presentation {
    let n = rng.gen_range(1..=max_gens);
    random_presentation(rng, n, n, max_len)
}

/// A move that is valid for `p`, or `None` when the drawn kind does not
/// apply.
pub fn random_move(rng: &mut impl Rng, p: &Presentation) -> Option<AcMove> {
    let n = p.generator_count();
    let k = p.relator_count();
    let rel = |rng: &mut dyn rand::RngCore| rng.gen_range(0..k);
    match rng.gen_range(0..9) {
        0 if k > 0 && n > 0 => {
            let relator = rel(rng);
            Some(AcMove::InsertPair {
                relator,
                position: rng.gen_range(0..=p.relators()[relator].len()),
                generator: rng.gen_range(0..n),
                inverse_first: rng.gen_bool(0.5),
            })
        }
        1 if k > 0 => {
            let relator = rel(rng);
            Some(AcMove::DeletePair {
                relator,
                position: rng.gen_range(0..=p.relators()[relator].len()),
            })
        }
        2 if k > 0 => Some(AcMove::CyclicPermute {
            relator: rel(rng),
            shift: rng.gen_range(0..8),
        }),
        3 if k > 0 => Some(AcMove::InvertRelator { relator: rel(rng) }),
        4 | 5 if k > 1 => {
            let target = rel(rng);
            let mut source = rel(rng);
            while source == target {
                source = rel(rng);
            }
            Some(if rng.gen_bool(0.5) {
                AcMove::MultiplyRight { target, source }
            } else {
                AcMove::MultiplyRightInverse { target, source }
            })
        }
        6 => Some(AcMove::Stabilize {
            word: random_word(rng, n, 3),
            name: None,
        }),
        7 => {
            let g = n.checked_sub(1)?;
            let relator = p.relators().iter().position(|r| r.first() == Some(Letter::pos(g)))?;
            let ok = p.relators()[relator].letters()[1..].iter().all(|l| l.gen() != g)
                && p.relators().iter().enumerate().all(|(i, r)| i == relator || !r.contains_generator(g));
            ok.then_some(AcMove::Destabilize { generator: g, relator })
        }
        8 if k > 0 && n > 0 => Some(AcMove::Conjugate {
            relator: rel(rng),
            letter: Letter::new(rng.gen_range(0..n), rng.gen_bool(0.5)),
        }),
        _ => None,
    }
}

pub fn random_elementary_ops(rng: &mut impl Rng, n: usize, count: usize) -> Vec<ElementaryOp> {
    (0..count)
        .map(|_| {
            if n < 2 || rng.gen_bool(0.25) {
                ElementaryOp::RowNegate(rng.gen_range(0..n))
            } else {
                let mut idx: Vec<usize> = (0..n).collect();
                idx.shuffle(rng);
                ElementaryOp::RowAdd {
                    source: idx[0],
                    target: idx[1],
                }
            }
        })
        .collect()
}

/// Random unimodular matrix: at most 20 elementary row operations on the
/// identity, `n <= 5`.
pub fn random_unimodular(rng: &mut impl Rng) -> Matrix {
    let n = rng.gen_range(1..=5);
    let count = rng.gen_range(0..=20);
    replay_ops(n, &random_elementary_ops(rng, n, count))
}
