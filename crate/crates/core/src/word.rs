//! Free-group words over numbered generators.
//!
//! A [`Word`] is always freely reduced. Unreduced letter sequences appear
//! only as plain `[Letter]` slices (see [`crate::dual`], where cancelling
//! pairs have to stay addressable).

use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};

/// A generator or its inverse. Generators are 0-based internally; text
/// formats and the signed encoding are 1-based.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    gen: u32,
    inverse: bool,
}

impl Letter {
    pub fn new(gen: usize, inverse: bool) -> Self {
        Letter {
            gen: gen as u32,
            inverse,
        }
    }

    pub fn pos(gen: usize) -> Self {
        Letter::new(gen, false)
    }

    pub fn neg(gen: usize) -> Self {
        Letter::new(gen, true)
    }

    /// Signed 1-based encoding: `3` is the third generator, `-3` its inverse.
    pub fn from_signed(code: i64) -> Result<Self> {
        if code == 0 {
            return Err(Error::BadLetter(code));
        }
        Ok(Letter::new(code.unsigned_abs() as usize - 1, code < 0))
    }

    pub fn to_signed(self) -> i64 {
        let g = self.gen as i64 + 1;
        if self.inverse {
            -g
        } else {
            g
        }
    }

    #[inline]
    pub fn gen(self) -> usize {
        self.gen as usize
    }

    #[inline]
    pub fn is_inverse(self) -> bool {
        self.inverse
    }

    /// `+1` or `-1`.
    #[inline]
    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    #[inline]
    pub fn inv(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    #[inline]
    pub fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inverse != other.inverse
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_signed())
    }
}

/// Freely reduced word.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

/// Deletes adjacent cancelling pairs until none remain.
pub fn free_reduce(raw: &[Letter]) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(raw.len());
    push_reduced(&mut out, raw);
    Word(out)
}

fn push_reduced(stack: &mut Vec<Letter>, letters: &[Letter]) {
    for &l in letters {
        match stack.last() {
            Some(&top) if top.cancels(l) => {
                stack.pop();
            }
            _ => stack.push(l),
        }
    }
}

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    /// `gen^exp` as a run of letters.
    pub fn power(gen: usize, exp: i64) -> Self {
        let l = Letter::new(gen, exp < 0);
        Word(vec![l; exp.unsigned_abs() as usize])
    }

    pub fn from_letters(raw: &[Letter]) -> Self {
        free_reduce(raw)
    }

    /// Builds a word from the signed 1-based encoding, e.g. `[1, 1, -2]`.
    pub fn from_signed(codes: &[i64]) -> Result<Self> {
        let raw = codes
            .iter()
            .map(|&c| Letter::from_signed(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(free_reduce(&raw))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = Vec::with_capacity(self.len() + other.len());
        out.extend_from_slice(&self.0);
        push_reduced(&mut out, &other.0);
        Word(out)
    }

    /// `l · self · l⁻¹`, freely reduced.
    pub fn conjugate_by(&self, l: Letter) -> Word {
        let mut out = Vec::with_capacity(self.len() + 2);
        out.push(l);
        push_reduced(&mut out, &self.0);
        push_reduced(&mut out, &[l.inv()]);
        Word(out)
    }

    /// Splits `self = conjugator · core · conjugator⁻¹` with `core`
    /// cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let w = &self.0;
        let mut k = 0;
        while w.len() >= 2 * (k + 1) && w[k].cancels(w[w.len() - 1 - k]) {
            k += 1;
        }
        (Word(w[k..w.len() - k].to_vec()), Word(w[..k].to_vec()))
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(a), Some(b)) if self.len() > 1 => !a.cancels(b),
            _ => true,
        }
    }

    /// Moves the first `shift % len` letters to the end, then reduces.
    pub fn rotate(&self, shift: usize) -> Word {
        if self.is_empty() {
            return Word::empty();
        }
        let k = shift % self.len();
        let mut raw = Vec::with_capacity(self.len());
        raw.extend_from_slice(&self.0[k..]);
        raw.extend_from_slice(&self.0[..k]);
        free_reduce(&raw)
    }

    pub fn exponent_vector(&self, n_gens: usize) -> Result<Vec<i64>> {
        exponent_vector(&self.0, n_gens)
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.gen()).max()
    }

    pub fn contains_generator(&self, gen: usize) -> bool {
        self.0.iter().any(|l| l.gen() == gen)
    }

    /// Letters grouped into maximal runs `(letter, run length)`.
    pub fn runs(&self) -> Vec<(Letter, usize)> {
        letter_runs(&self.0)
    }

    /// Applies `f` to every generator index. The caller guarantees the
    /// result stays reduced (injective relabelling does).
    pub(crate) fn map_generators(&self, f: impl Fn(usize) -> usize) -> Word {
        Word(
            self.0
                .iter()
                .map(|l| Letter::new(f(l.gen()), l.is_inverse()))
                .collect(),
        )
    }
}

pub(crate) fn letter_runs(letters: &[Letter]) -> Vec<(Letter, usize)> {
    let mut runs: Vec<(Letter, usize)> = Vec::new();
    for &l in letters {
        match runs.last_mut() {
            Some((prev, n)) if *prev == l => *n += 1,
            _ => runs.push((l, 1)),
        }
    }
    runs
}

/// Signed occurrence count per generator. Works on unreduced sequences too.
pub fn exponent_vector(letters: &[Letter], n_gens: usize) -> Result<Vec<i64>> {
    let mut v = vec![0i64; n_gens];
    for l in letters {
        let slot = v.get_mut(l.gen()).ok_or(Error::GeneratorOutOfRange {
            index: l.gen() + 1,
            count: n_gens,
        })?;
        *slot += l.sign();
    }
    Ok(v)
}

impl Mul for &Word {
    type Output = Word;

    fn mul(self, rhs: &Word) -> Word {
        self.concat(rhs)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// Renders a letter sequence as `g^k` terms, `1` when empty.
pub(crate) fn render_letters(letters: &[Letter], names: &[String]) -> String {
    if letters.is_empty() {
        return "1".to_string();
    }
    let mut out = String::new();
    for (i, (l, n)) in letter_runs(letters).into_iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let name = names
            .get(l.gen())
            .cloned()
            .unwrap_or_else(|| format!("g{}", l.gen() + 1));
        out.push_str(&name);
        let exp = n as i64 * l.sign();
        if exp != 1 {
            out.push('^');
            out.push_str(&exp.to_string());
        }
    }
    out
}
