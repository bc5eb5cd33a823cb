//! Exact integer matrices: exponent matrices of presentations, determinants
//! and Smith normal form.
//!
//! Rows are relators and columns are generators throughout.

use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::scalar::IntScalar;
use crate::word::Letter;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: IntScalar> IntMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::MatrixFormat("ragged rows".into()));
        }
        Ok(IntMatrix {
            rows: n,
            cols: m,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor from small literals.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| T::from(x)).collect())
                .collect(),
        )
        .expect("rectangular literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a.clone() * other[(k, j)].clone();
                    out[(i, j)] = out[(i, j)].clone() + prod;
                }
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    /// `row[target] += row[source]`.
    pub fn add_row(&mut self, source: usize, target: usize) {
        self.add_row_multiple(source, target, &T::one());
    }

    /// `row[target] += factor * row[source]`.
    pub fn add_row_multiple(&mut self, source: usize, target: usize, factor: &T) {
        for j in 0..self.cols {
            let v = self[(source, j)].clone() * factor.clone();
            self[(target, j)] = self[(target, j)].clone() + v;
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self[(i, j)] = -self[(i, j)].clone();
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn add_col_multiple(&mut self, source: usize, target: usize, factor: &T) {
        for i in 0..self.rows {
            let v = self[(i, source)].clone() * factor.clone();
            self[(i, target)] = self[(i, target)].clone() + v;
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            self[(i, j)] = -self[(i, j)].clone();
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn map<U: IntScalar>(&self, f: impl Fn(&T) -> U) -> IntMatrix<U> {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Text interchange form: `n m` header then one line per row.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(T::to_string).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut tokens = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(str::split_whitespace);
        let mut dim = || -> Result<usize> {
            tokens
                .next()
                .ok_or_else(|| Error::MatrixFormat("missing dimensions".into()))?
                .parse()
                .map_err(|_| Error::MatrixFormat("dimensions must be nonnegative integers".into()))
        };
        let (rows, cols) = (dim()?, dim()?);
        let data = tokens
            .map(|t| {
                t.parse::<T>()
                    .map_err(|_| Error::MatrixFormat(format!("bad entry `{t}`")))
            })
            .collect::<Result<Vec<T>>>()?;
        if data.len() != rows * cols {
            return Err(Error::MatrixFormat(format!(
                "expected {} entries, found {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }
}

impl<T> std::ops::Index<(usize, usize)> for IntMatrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for IntMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: IntScalar> fmt::Display for IntMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(T::to_string).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        f.write_str("]")
    }
}

/// Signed occurrence counts of each generator in a letter sequence, as a
/// matrix row.
pub(crate) fn exponent_row<T: IntScalar>(letters: &[Letter], cols: usize) -> Vec<T> {
    let mut row = vec![T::zero(); cols];
    for l in letters {
        let e = &mut row[l.gen()];
        *e = if l.is_inverse() {
            e.clone() - T::one()
        } else {
            e.clone() + T::one()
        };
    }
    row
}

/// Relator exponent sums: `n_relators x n_generators`.
pub fn exponent_matrix<T: IntScalar>(p: &Presentation) -> IntMatrix<T> {
    let cols = p.generator_count();
    IntMatrix {
        rows: p.relator_count(),
        cols,
        data: p
            .relators()
            .iter()
            .flat_map(|r| exponent_row::<T>(r.letters(), cols))
            .collect(),
    }
}

/// Exact determinant by Bareiss fraction-free elimination.
pub fn determinant<T: IntScalar>(a: &IntMatrix<T>) -> Result<T> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    let n = a.rows;
    if n == 0 {
        return Ok(T::one());
    }
    let mut m = a.clone();
    let mut sign = T::one();
    let mut prev = T::one();
    for k in 0..n - 1 {
        if m[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                Some(i) => {
                    m.swap_rows(i, k);
                    sign = -sign;
                }
                None => return Ok(T::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[(i, j)].clone() * m[(k, k)].clone() - m[(i, k)].clone() * m[(k, j)].clone();
                m[(i, j)] = num / prev.clone();
            }
        }
        prev = m[(k, k)].clone();
    }
    Ok(sign * m[(n - 1, n - 1)].clone())
}

pub fn is_unimodular<T: IntScalar>(a: &IntMatrix<T>) -> bool {
    matches!(determinant(a), Ok(d) if d.abs().is_one())
}

/// `unimodular_left · A · unimodular_right = diag(factors)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm<T> {
    /// `min(rows, cols)` nonnegative diagonal entries, each dividing the next.
    pub factors: Vec<T>,
    pub left: IntMatrix<T>,
    pub right: IntMatrix<T>,
}

pub fn smith_normal_form<T: IntScalar>(a: &IntMatrix<T>) -> SmithForm<T> {
    let (n, m) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::<T>::identity(n);
    let mut v = IntMatrix::<T>::identity(m);

    for t in 0..n.min(m) {
        loop {
            // smallest nonzero entry of the active block becomes the pivot
            let pivot = (t..n)
                .flat_map(|i| (t..m).map(move |j| (i, j)))
                .filter(|&ij| !d[ij].is_zero())
                .min_by(|&x, &y| d[x].abs().cmp(&d[y].abs()));
            let Some((pi, pj)) = pivot else { break };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut remainder = false;
            for i in t + 1..n {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row_multiple(t, i, &q);
                u.add_row_multiple(t, i, &q);
                remainder |= !d[(i, t)].is_zero();
            }
            for j in t + 1..m {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col_multiple(t, j, &q);
                v.add_col_multiple(t, j, &q);
                remainder |= !d[(t, j)].is_zero();
            }
            if remainder {
                continue;
            }
            // the pivot must divide everything left in the block
            let offender = (t + 1..n)
                .flat_map(|i| (t + 1..m).map(move |j| (i, j)))
                .find(|&ij| !d[ij].is_multiple_of(&d[(t, t)]));
            match offender {
                Some((i, _)) => {
                    d.add_row(i, t);
                    u.add_row(i, t);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }

    let factors = (0..n.min(m)).map(|i| d[(i, i)].clone()).collect();
    SmithForm {
        factors,
        left: u,
        right: v,
    }
}

/// Invariants of the abelian group presented by `a`: torsion factors
/// greater than one and the free rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianInvariants<T> {
    pub torsion: Vec<T>,
    pub free_rank: usize,
}

impl<T: IntScalar> AbelianInvariants<T> {
    pub fn is_trivial(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }
}

impl<T: IntScalar> fmt::Display for AbelianInvariants<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|t| format!("Z/{t}")).collect();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                "Z".to_string()
            } else {
                format!("Z^{}", self.free_rank)
            });
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

pub fn abelian_invariants<T: IntScalar>(a: &IntMatrix<T>) -> AbelianInvariants<T> {
    let snf = smith_normal_form(a);
    let nonzero = snf.factors.iter().filter(|f| !f.is_zero()).count();
    AbelianInvariants {
        torsion: snf.factors.into_iter().filter(|f| !f.is_zero() && !f.is_one()).collect(),
        free_rank: a.cols - nonzero,
    }
}

/// Trivial abelianization: all `m` invariant factors equal to one.
pub fn is_perfect_presentation(p: &Presentation) -> bool {
    let a = exponent_matrix::<num_bigint::BigInt>(p);
    let snf = smith_normal_form(&a);
    snf.factors.len() == p.generator_count() && snf.factors.iter().all(One::is_one)
}
