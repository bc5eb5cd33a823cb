//! Nontriviality witnesses: homomorphisms onto nontrivial permutation
//! groups, found by backtracking over generator images.

use std::collections::VecDeque;
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;
use rustc_hash::FxHashSet;

use crate::presentation::Presentation;
use crate::word::Letter;

pub const DEFAULT_MAX_DEGREE: usize = 7;

/// Bijection of `{0, …, d-1}`; points act on the right, so a word is
/// applied letter by letter from the left.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u8>);

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree as u8).collect())
    }

    pub fn from_images(images: Vec<u8>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            let slot = seen.get_mut(x as usize)?;
            if *slot {
                return None;
            }
            *slot = true;
        }
        Some(Permutation(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u8] {
        &self.0
    }

    pub fn image(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Permutation(inv)
    }

    /// `self` then `other`.
    pub fn then(&self, other: &Permutation) -> Self {
        Permutation(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    /// Nontrivial cycles, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.image(start) == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.image(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.image(x);
            }
            out.push(cycle);
        }
        out
    }
}

/// Cycle notation on points `1…d`; the identity prints as `()`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let pts: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", pts.join(" "))?;
        }
        Ok(())
    }
}

/// Image of a word under generator images.
pub fn evaluate(images: &[Permutation], letters: &[Letter], degree: usize) -> Permutation {
    let inverses: Vec<Permutation> = images.iter().map(Permutation::inverse).collect();
    letters.iter().fold(Permutation::identity(degree), |acc, l| {
        let p = if l.is_inverse() {
            &inverses[l.gen()]
        } else {
            &images[l.gen()]
        };
        acc.then(p)
    })
}

/// Order of the group generated by `gens`.
pub fn generated_order(gens: &[Permutation], degree: usize) -> usize {
    let id = Permutation::identity(degree);
    let mut seen = FxHashSet::default();
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = p.then(g);
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    seen.len()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteQuotientWitness {
    pub degree: usize,
    pub images: Vec<Permutation>,
    pub image_order: usize,
}

impl FiniteQuotientWitness {
    /// Evaluates every relator directly and recomputes the image order.
    pub fn verify(&self, p: &Presentation) -> bool {
        self.images.len() == p.generator_count()
            && self.images.iter().all(|g| g.degree() == self.degree)
            && self.images.iter().any(|g| !g.is_identity())
            && p
                .relators()
                .iter()
                .all(|r| evaluate(&self.images, r.letters(), self.degree).is_identity())
            && generated_order(&self.images, self.degree) == self.image_order
    }

    pub fn to_text(&self, p: &Presentation) -> String {
        let mut out = format!("QUOTIENT degree {} order {}\n", self.degree, self.image_order);
        for (name, g) in p.names().iter().zip(&self.images) {
            out.push_str(&format!("{name} -> {g}\n"));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuotientSearch {
    Found(FiniteQuotientWitness),
    /// No nontrivial homomorphism into `S_2 … S_max_degree`.
    Exhausted { max_degree: usize },
}

/// All permutations of one degree in lexicographic order, flattened, with
/// inverses.
struct PermTable {
    degree: usize,
    forward: Vec<u8>,
    backward: Vec<u8>,
}

impl PermTable {
    fn new(degree: usize) -> Self {
        let mut forward = Vec::new();
        let mut backward = Vec::new();
        for p in (0..degree as u8).permutations(degree) {
            let inv = Permutation(p.clone()).inverse();
            forward.extend_from_slice(&p);
            backward.extend_from_slice(&inv.0);
        }
        PermTable {
            degree,
            forward,
            backward,
        }
    }

    fn len(&self) -> usize {
        self.forward.len() / self.degree
    }

    fn get(&self, rank: usize) -> Permutation {
        Permutation(self.forward[rank * self.degree..(rank + 1) * self.degree].to_vec())
    }

    fn holds(&self, assignment: &[usize], letters: &[Letter]) -> bool {
        let d = self.degree;
        (0..d).all(|start| {
            let end = letters.iter().fold(start, |x, l| {
                let table = if l.is_inverse() {
                    &self.backward
                } else {
                    &self.forward
                };
                table[assignment[l.gen()] * d + x] as usize
            });
            end == start
        })
    }
}

struct Search<'a> {
    perms: &'a PermTable,
    // relators grouped by the last generator they mention
    by_level: &'a [Vec<Vec<Letter>>],
}

impl Search<'_> {
    fn level_ok(&self, level: usize, assignment: &[usize]) -> bool {
        self.by_level[level].iter().all(|r| self.perms.holds(assignment, r))
    }

    // rank 0 is the identity
    fn extend(&self, assignment: &mut Vec<usize>) -> bool {
        let level = assignment.len();
        if level == self.by_level.len() {
            return assignment.iter().any(|&r| r != 0);
        }
        for rank in 0..self.perms.len() {
            assignment.push(rank);
            if self.level_ok(level, assignment) && self.extend(assignment) {
                return true;
            }
            assignment.pop();
        }
        false
    }
}

fn search_degree(p: &Presentation, degree: usize) -> Option<Vec<Permutation>> {
    let n = p.generator_count();
    if n == 0 {
        return None;
    }
    let perms = PermTable::new(degree);
    let mut by_level = vec![Vec::new(); n];
    for r in p.relators() {
        if let Some(g) = r.max_generator() {
            by_level[g].push(r.letters().to_vec());
        }
    }
    let search = Search {
        perms: &perms,
        by_level: &by_level,
    };
    let ranks = (0..perms.len()).into_par_iter().find_map_first(|first| {
        let mut assignment = vec![first];
        (search.level_ok(0, &assignment) && search.extend(&mut assignment)).then_some(assignment)
    })?;
    Some(ranks.into_iter().map(|r| perms.get(r)).collect())
}

/// First nontrivial homomorphism into `S_2`, then `S_3`, … up to
/// `S_max_degree`, tuples of images taken in lexicographic rank order.
pub fn find_nontrivial_quotient(p: &Presentation, max_degree: usize) -> QuotientSearch {
    for degree in 2..=max_degree {
        if let Some(images) = search_degree(p, degree) {
            let image_order = generated_order(&images, degree);
            return QuotientSearch::Found(FiniteQuotientWitness {
                degree,
                images,
                image_order,
            });
        }
    }
    QuotientSearch::Exhausted { max_degree }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn found(text: &str, d: usize) -> Option<FiniteQuotientWitness> {
        let p = Presentation::parse(text).unwrap();
        match find_nontrivial_quotient(&p, d) {
            QuotientSearch::Found(w) => {
                assert!(w.verify(&p));
                Some(w)
            }
            QuotientSearch::Exhausted { max_degree } => {
                assert_eq!(max_degree, d);
                None
            }
        }
    }

    #[test]
    fn permutation_basics() {
        let p = Permutation::from_images(vec![1, 2, 0, 4, 3]).unwrap();
        assert_eq!(p.to_string(), "(1 2 3)(4 5)");
        assert_eq!(p.then(&p.inverse()), Permutation::identity(5));
        assert_eq!(Permutation::identity(3).to_string(), "()");
        assert!(Permutation::from_images(vec![0, 0]).is_none());
        assert!(Permutation::from_images(vec![0, 2]).is_none());
        assert_eq!(generated_order(&[p], 5), 6);
    }

    #[test]
    fn order_two_quotient() {
        let w = found("< a | a^2 >", 2).unwrap();
        assert_eq!(w.degree, 2);
        assert_eq!(w.images[0].to_string(), "(1 2)");
        assert_eq!(w.image_order, 2);
    }

    #[test]
    fn trivial_cases_exhaust() {
        assert!(found("< | >", 5).is_none());
        assert!(found("< a | a >", 5).is_none());
        assert!(found("< a, b | a b^-1, b^3 a^-2 >", 4).is_none());
    }

    #[test]
    fn binary_icosahedral_maps_onto_a5() {
        let w = found("< a, b | a b^2 a b^-1, a^4 b a^-1 b >", 5).unwrap();
        assert_eq!(w.degree, 5);
        assert_eq!(w.image_order, 60);
        assert!(found("< a, b | a b^2 a b^-1, a^4 b a^-1 b >", 4).is_none());
    }

    #[test]
    fn lower_degree_witness_wins() {
        let p = Presentation::parse("< a, b | a^2, b^3 >").unwrap();
        let a = find_nontrivial_quotient(&p, 3);
        let b = find_nontrivial_quotient(&p, 6);
        assert_eq!(a, b);
    }

    #[test]
    fn tampered_witness_fails() {
        let p = Presentation::parse("< a | a^2 >").unwrap();
        let QuotientSearch::Found(mut w) = find_nontrivial_quotient(&p, 3) else {
            panic!("found");
        };
        w.image_order = 3;
        assert!(!w.verify(&p));
        w.image_order = 2;
        w.images[0] = Permutation::from_images(vec![1, 2, 0]).unwrap();
        w.degree = 3;
        assert!(!w.verify(&p));
    }
}
