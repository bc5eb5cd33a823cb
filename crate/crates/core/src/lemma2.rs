//! Trivial-group presentations with a prescribed unimodular exponent matrix.
//!
//! A unimodular matrix is written as a product of row negations and row
//! additions applied to the identity. Each row operation is mirrored on the
//! presentation `< a1, …, an | a1, …, an >`: negating row `i` inverts
//! relator `i`, adding row `i` to row `j` multiplies relator `j` on the
//! right by relator `i`. The exponent matrix tracks the row operations, and
//! the moves themselves form the Andrews–Curtis certificate.


use crate::abelian::{determinant, IntMatrix};
use crate::error::{Error, Result};
use crate::moves::{AcCertificate, AcMove};
use crate::presentation::{numbered_names, Presentation};
use crate::scalar::IntScalar;
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ElementaryOp {
    RowNegate(usize),
    /// `row[target] += row[source]`.
    RowAdd { source: usize, target: usize },
}

impl ElementaryOp {
    pub fn apply<T: IntScalar>(&self, m: &mut IntMatrix<T>) {
        match *self {
            ElementaryOp::RowNegate(i) => m.negate_row(i),
            ElementaryOp::RowAdd { source, target } => m.add_row(source, target),
        }
    }
}

/// Replays `ops` on the `n x n` identity.
pub fn replay_ops<T: IntScalar>(n: usize, ops: &[ElementaryOp]) -> IntMatrix<T> {
    let mut m = IntMatrix::identity(n);
    for op in ops {
        op.apply(&mut m);
    }
    m
}

// Elimination steps; subtraction is expanded to negate-add-negate on output.
#[derive(Clone, Copy, Debug)]
enum Step {
    Negate(usize),
    Add(usize, usize),
    Sub(usize, usize),
}

impl Step {
    fn inverse(self) -> Step {
        match self {
            Step::Negate(i) => Step::Negate(i),
            Step::Add(s, t) => Step::Sub(s, t),
            Step::Sub(s, t) => Step::Add(s, t),
        }
    }
}

struct Eliminator<T> {
    m: IntMatrix<T>,
    steps: Vec<Step>,
}

impl<T: IntScalar> Eliminator<T> {
    fn record(&mut self, step: Step) {
        match step {
            Step::Negate(i) => self.m.negate_row(i),
            Step::Add(s, t) => self.m.add_row(s, t),
            Step::Sub(s, t) => self.m.add_row_multiple(s, t, &-T::one()),
        }
        self.steps.push(step);
    }

    /// Brings `|m[target][col]|` below `|m[source][col]|` by repeated row
    /// additions or subtractions.
    fn reduce_against(&mut self, source: usize, target: usize, col: usize) {
        let p = self.m[(source, col)].clone();
        let v = self.m[(target, col)].clone();
        let q = (v.abs()).div_floor(&p.abs());
        let same_sign = v.is_positive() == p.is_positive();
        let step = if same_sign {
            Step::Sub(source, target)
        } else {
            Step::Add(source, target)
        };
        let mut k = T::zero();
        while k < q {
            self.record(step);
            k = k + T::one();
        }
    }

    fn run(&mut self) {
        let n = self.m.rows();
        for c in 0..n {
            loop {
                let pivot = (c..n)
                    .filter(|&i| !self.m[(i, c)].is_zero())
                    .min_by(|&x, &y| self.m[(x, c)].abs().cmp(&self.m[(y, c)].abs()).then(x.cmp(&y)));
                let Some(p) = pivot else {
                    unreachable!("unimodular matrix has a nonzero in every active column")
                };
                let others: Vec<usize> = (c..n)
                    .filter(|&i| i != p && !self.m[(i, c)].is_zero())
                    .collect();
                if others.is_empty() {
                    if p != c {
                        self.record(Step::Add(p, c));
                        self.record(Step::Sub(c, p));
                    }
                    break;
                }
                for i in others {
                    self.reduce_against(p, i, c);
                }
            }
            if self.m[(c, c)].is_negative() {
                self.record(Step::Negate(c));
            }
            debug_assert!(self.m[(c, c)].is_one());
            for i in (0..n).filter(|&i| i != c) {
                if !self.m[(i, c)].is_zero() {
                    self.reduce_against(c, i, c);
                }
            }
        }
    }
}

/// Row operations that turn the identity into `a`.
pub fn decompose_unimodular<T: IntScalar>(a: &IntMatrix<T>) -> Result<Vec<ElementaryOp>> {
    let det = determinant(a)?;
    if !det.abs().is_one() {
        return Err(Error::NotUnimodular {
            det: det.to_string(),
        });
    }
    let mut e = Eliminator {
        m: a.clone(),
        steps: Vec::new(),
    };
    e.run();
    debug_assert_eq!(e.m, IntMatrix::identity(a.rows()));

    // steps reduce A to I, so A is their inverses applied in reverse order
    let mut ops: Vec<ElementaryOp> = Vec::new();
    for step in e.steps.iter().rev().map(|s| s.inverse()) {
        let expanded: &[ElementaryOp] = match step {
            Step::Negate(i) => &[ElementaryOp::RowNegate(i)],
            Step::Add(s, t) => &[ElementaryOp::RowAdd { source: s, target: t }],
            Step::Sub(s, t) => &[
                ElementaryOp::RowNegate(s),
                ElementaryOp::RowAdd { source: s, target: t },
                ElementaryOp::RowNegate(s),
            ],
        };
        for &op in expanded {
            // adjacent equal negations cancel
            if matches!(op, ElementaryOp::RowNegate(_)) && ops.last() == Some(&op) {
                ops.pop();
            } else {
                ops.push(op);
            }
        }
    }
    Ok(ops)
}

/// Trivial-group presentation with a prescribed exponent matrix, and how it
/// was built.
#[derive(Clone, Debug)]
pub struct MatrixPresentation {
    pub presentation: Presentation,
    /// From the empty presentation to `presentation`.
    pub certificate: AcCertificate,
    pub ops: Vec<ElementaryOp>,
}

impl MatrixPresentation {
    pub fn total_letters(&self) -> usize {
        self.presentation.total_length()
    }
}

/// Trivial-group presentation whose exponent matrix is exactly `a`, with
/// generators `a1 … an`.
pub fn presentation_from_matrix<T: IntScalar>(a: &IntMatrix<T>) -> Result<MatrixPresentation> {
    presentation_from_matrix_named(a, "a")
}

pub fn presentation_from_matrix_named<T: IntScalar>(
    a: &IntMatrix<T>,
    prefix: &str,
) -> Result<MatrixPresentation> {
    let ops = decompose_unimodular(a)?;
    let mut cert = AcCertificate::identity(Presentation::empty());
    for name in numbered_names(prefix, a.rows()) {
        cert.push(AcMove::Stabilize {
            word: Word::empty(),
            name: Some(name),
        })?;
    }
    for op in &ops {
        let m = match *op {
            ElementaryOp::RowNegate(i) => AcMove::InvertRelator { relator: i },
            ElementaryOp::RowAdd { source, target } => AcMove::MultiplyRight { target, source },
        };
        cert.push(m)?;
    }
    Ok(MatrixPresentation {
        presentation: cert.end.clone(),
        certificate: cert,
        ops,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::exponent_matrix;
    use num_bigint::BigInt;

    type M = IntMatrix<BigInt>;

    #[test]
    fn identity_needs_no_ops() {
        assert!(decompose_unimodular(&M::identity(4)).unwrap().is_empty());
    }

    #[test]
    fn one_by_one_minus_one() {
        let a = M::from_i64_rows(&[&[-1]]);
        assert_eq!(decompose_unimodular(&a).unwrap(), vec![ElementaryOp::RowNegate(0)]);
        let out = presentation_from_matrix(&a).unwrap();
        assert_eq!(out.presentation, Presentation::parse("< a1 | a1^-1 >").unwrap());
    }

    #[test]
    fn transpose_of_two_generator_example() {
        let a = M::from_i64_rows(&[&[2, 3], &[1, 2]]);
        let ops = decompose_unimodular(&a).unwrap();
        assert_eq!(replay_ops::<BigInt>(2, &ops), a);
        let out = presentation_from_matrix(&a).unwrap();
        assert_eq!(exponent_matrix::<BigInt>(&out.presentation), a);
        assert!(out.certificate.verify());
        assert_eq!(out.certificate.start, Presentation::empty());
    }

    #[test]
    fn identity_presentation() {
        let out = presentation_from_matrix(&M::identity(3)).unwrap();
        assert_eq!(
            out.presentation,
            Presentation::parse("< a1, a2, a3 | a1, a2, a3 >").unwrap()
        );
        assert_eq!(out.certificate.moves.len(), 3);
        assert!(out
            .certificate
            .moves
            .iter()
            .all(|m| matches!(m, AcMove::Stabilize { .. })));
    }

    #[test]
    fn rejects_non_unimodular() {
        let a = M::from_i64_rows(&[&[2, 0], &[0, 1]]);
        assert!(matches!(
            decompose_unimodular(&a),
            Err(Error::NotUnimodular { .. })
        ));
        assert!(matches!(
            presentation_from_matrix(&M::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn machine_integers_agree_with_bigints() {
        let a64 = IntMatrix::<i64>::from_i64_rows(&[&[2, 3, 0], &[1, 2, 0], &[4, 1, 1]]);
        let abig = a64.map(|&x| BigInt::from(x));
        assert_eq!(
            decompose_unimodular(&a64).unwrap(),
            decompose_unimodular(&abig).unwrap()
        );
    }
}
