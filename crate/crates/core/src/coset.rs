//! Todd–Coxeter enumeration of the cosets of the trivial subgroup, HLT
//! style: each live coset in turn scans every relator, defining cosets to
//! complete the scan, then fills its row.

use std::fmt;

use crate::presentation::Presentation;
use crate::word::Letter;

pub const DEFAULT_MAX_COSETS: usize = 1_000_000;

const UNDEF: u32 = u32::MAX;

fn column(l: Letter) -> usize {
    2 * l.gen() + usize::from(l.is_inverse())
}

/// Closed table of a finite enumeration: cosets `0..order`, coset 0 the
/// subgroup, one column per letter (`2g` for `a_g`, `2g + 1` for its
/// inverse).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CosetTable {
    n_gens: usize,
    entries: Vec<u32>,
}

impl CosetTable {
    pub fn order(&self) -> usize {
        if self.n_gens == 0 {
            1
        } else {
            self.entries.len() / (2 * self.n_gens)
        }
    }

    pub fn generator_count(&self) -> usize {
        self.n_gens
    }

    pub fn act(&self, coset: usize, l: Letter) -> usize {
        self.entries[coset * 2 * self.n_gens + column(l)] as usize
    }

    /// Image of `coset` under a word, read left to right.
    pub fn trace(&self, coset: usize, letters: &[Letter]) -> usize {
        letters.iter().fold(coset, |c, &l| self.act(c, l))
    }

    /// Generator actions as permutations of `0..order`.
    pub fn permutations(&self) -> Vec<Vec<usize>> {
        (0..self.n_gens)
            .map(|g| (0..self.order()).map(|c| self.act(c, Letter::pos(g))).collect())
            .collect()
    }

    /// Every relator fixes every coset and every column is a bijection
    /// inverse to its partner.
    pub fn is_sound(&self, p: &Presentation) -> bool {
        if p.generator_count() != self.n_gens {
            return false;
        }
        let n = self.order();
        for g in 0..self.n_gens {
            let mut hit = vec![false; n];
            for c in 0..n {
                let d = self.act(c, Letter::pos(g));
                if d >= n || hit[d] || self.act(d, Letter::neg(g)) != c {
                    return false;
                }
                hit[d] = true;
            }
        }
        (0..n).all(|c| p.relators().iter().all(|r| self.trace(c, r.letters()) == c))
    }

    /// One line per coset: `c: images` with the columns in letter order.
    pub fn to_text(&self, p: &Presentation) -> String {
        let mut out = String::new();
        let mut header = vec!["coset".to_string()];
        for name in p.names() {
            header.push(name.clone());
            header.push(format!("{name}^-1"));
        }
        out.push_str(&header.join(" "));
        out.push('\n');
        let width = 2 * self.n_gens;
        for c in 0..self.order() {
            let row: Vec<String> = (0..width)
                .map(|k| (self.entries[c * width + k] + 1).to_string())
                .collect();
            out.push_str(&format!("{}: {}\n", c + 1, row.join(" ")));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Enumeration {
    Finite { order: usize, table: CosetTable },
    /// More than `max_cosets` cosets were live at once. Says nothing about
    /// finiteness.
    CapExceeded { max_cosets: usize, defined: usize },
}

impl Enumeration {
    pub fn order(&self) -> Option<usize> {
        match self {
            Enumeration::Finite { order, .. } => Some(*order),
            Enumeration::CapExceeded { .. } => None,
        }
    }
}

impl fmt::Display for Enumeration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Enumeration::Finite { order, .. } => write!(f, "ORDER {order}"),
            Enumeration::CapExceeded { max_cosets, .. } => write!(f, "CAP-EXCEEDED {max_cosets}"),
        }
    }
}

struct CapHit;

struct Enumerator {
    width: usize,
    relators: Vec<Vec<usize>>,
    table: Vec<u32>,
    // union-find parent; a coset is live iff it is its own parent
    parent: Vec<u32>,
    queue: Vec<u32>,
    live: usize,
    defined: usize,
    max_cosets: usize,
    // allocation bound that triggers compaction
    capacity: usize,
}

impl Enumerator {
    fn cosets(&self) -> usize {
        self.parent.len()
    }

    fn get(&self, c: usize, x: usize) -> u32 {
        self.table[c * self.width + x]
    }

    fn set(&mut self, c: usize, x: usize, d: u32) {
        self.table[c * self.width + x] = d;
    }

    fn is_live(&self, c: usize) -> bool {
        self.parent[c] as usize == c
    }

    fn define(&mut self, c: usize, x: usize) -> Result<u32, CapHit> {
        if self.live >= self.max_cosets {
            return Err(CapHit);
        }
        let d = self.cosets() as u32;
        self.parent.push(d);
        self.table.extend(std::iter::repeat_n(UNDEF, self.width));
        self.live += 1;
        self.defined += 1;
        self.set(c, x, d);
        self.set(d as usize, x ^ 1, c as u32);
        Ok(d)
    }

    fn find(&mut self, c: u32) -> u32 {
        let mut root = c;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut c = c;
        while self.parent[c as usize] != root {
            let next = self.parent[c as usize];
            self.parent[c as usize] = root;
            c = next;
        }
        root
    }

    fn merge(&mut self, a: u32, b: u32) {
        let a = self.find(a);
        let b = self.find(b);
        if a == b {
            return;
        }
        let (keep, lose) = if a < b { (a, b) } else { (b, a) };
        self.parent[lose as usize] = keep;
        self.live -= 1;
        self.queue.push(lose);
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let dead = self.queue[i] as usize;
            i += 1;
            for x in 0..self.width {
                let d = self.get(dead, x);
                if d == UNDEF {
                    continue;
                }
                if self.get(d as usize, x ^ 1) == dead as u32 {
                    self.set(d as usize, x ^ 1, UNDEF);
                }
                let mu = self.find(dead as u32);
                let nu = self.find(d);
                let mu_x = self.get(mu as usize, x);
                let nu_xi = self.get(nu as usize, x ^ 1);
                if mu_x != UNDEF {
                    self.merge(nu, mu_x);
                } else if nu_xi != UNDEF {
                    self.merge(mu, nu_xi);
                } else {
                    self.set(mu as usize, x, nu);
                    self.set(nu as usize, x ^ 1, mu);
                }
            }
        }
        self.queue.clear();
    }

    fn scan_and_fill(&mut self, c: usize, rel: usize) -> Result<(), CapHit> {
        let len = self.relators[rel].len();
        let (mut f, mut b) = (c as u32, c as u32);
        let (mut i, mut j) = (0usize, len);
        loop {
            while i < j {
                let next = self.get(f as usize, self.relators[rel][i]);
                if next == UNDEF {
                    break;
                }
                f = next;
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i {
                let next = self.get(b as usize, self.relators[rel][j - 1] ^ 1);
                if next == UNDEF {
                    break;
                }
                b = next;
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i + 1 {
                let x = self.relators[rel][i];
                self.set(f as usize, x, b);
                self.set(b as usize, x ^ 1, f);
                return Ok(());
            }
            let x = self.relators[rel][i];
            self.define(f as usize, x)?;
        }
    }

    /// Renumbers live cosets in order; returns the new index of the first
    /// live coset at or after `from`.
    fn compact(&mut self, from: usize) -> usize {
        let n = self.cosets();
        let mut new_index = vec![UNDEF; n];
        let mut next = 0u32;
        let mut from_new = None;
        for c in 0..n {
            if self.is_live(c) {
                new_index[c] = next;
                next += 1;
            }
            if c >= from && from_new.is_none() && self.is_live(c) {
                from_new = Some(new_index[c] as usize);
            }
        }
        let mut table = Vec::with_capacity(next as usize * self.width);
        for c in (0..n).filter(|&c| self.is_live(c)) {
            for x in 0..self.width {
                let d = self.get(c, x);
                table.push(if d == UNDEF { UNDEF } else { new_index[d as usize] });
            }
        }
        self.table = table;
        self.parent = (0..next).collect();
        from_new.unwrap_or(next as usize)
    }

    fn run(&mut self) -> Result<(), CapHit> {
        let per_coset = self.relators.iter().map(Vec::len).sum::<usize>() + self.width;
        let mut c = 0;
        while c < self.cosets() {
            if self.cosets() + per_coset > self.capacity && self.live < self.cosets() {
                c = self.compact(c);
                if c >= self.cosets() {
                    break;
                }
            }
            if self.is_live(c) {
                for rel in 0..self.relators.len() {
                    self.scan_and_fill(c, rel)?;
                    if !self.is_live(c) {
                        break;
                    }
                }
                for x in 0..self.width {
                    if !self.is_live(c) {
                        break;
                    }
                    if self.get(c, x) == UNDEF {
                        self.define(c, x)?;
                    }
                }
            }
            c += 1;
        }
        Ok(())
    }
}

/// Enumerates the cosets of the trivial subgroup, i.e. the elements of the
/// presented group, keeping at most `max_cosets` live at once.
pub fn enumerate(p: &Presentation, max_cosets: usize) -> Enumeration {
    if max_cosets == 0 {
        return Enumeration::CapExceeded {
            max_cosets,
            defined: 0,
        };
    }
    let width = 2 * p.generator_count();
    let relators: Vec<Vec<usize>> = p
        .relators()
        .iter()
        .filter(|r| !r.is_empty())
        .map(|r| r.letters().iter().map(|&l| column(l)).collect())
        .collect();
    let per_coset = relators.iter().map(Vec::len).sum::<usize>() + width;
    let mut e = Enumerator {
        width,
        relators,
        table: vec![UNDEF; width],
        parent: vec![0],
        queue: Vec::new(),
        live: 1,
        defined: 1,
        max_cosets,
        capacity: (2 * max_cosets).max(max_cosets + 2 * per_coset + 1),
    };
    if e.run().is_err() {
        return Enumeration::CapExceeded {
            max_cosets,
            defined: e.defined,
        };
    }
    e.compact(0);
    let table = CosetTable {
        n_gens: p.generator_count(),
        entries: e.table,
    };
    debug_assert!(table.is_sound(p));
    Enumeration::Finite {
        order: table.order(),
        table,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(text: &str, cap: usize) -> Option<usize> {
        let p = Presentation::parse(text).unwrap();
        let out = enumerate(&p, cap);
        if let Enumeration::Finite { table, .. } = &out {
            assert!(table.is_sound(&p));
        }
        out.order()
    }

    #[test]
    fn small_orders() {
        assert_eq!(order("< a | a >", 10), Some(1));
        assert_eq!(order("< a | a^5 >", 10), Some(5));
        assert_eq!(order("< | >", 10), Some(1));
        assert_eq!(order("< a, b | a^2, b^3, a b a^-1 b^-1 >", 100), Some(6));
        assert_eq!(order("< a, b | a^3, b^2, a b a b >", 100), Some(6));
        assert_eq!(order("< a, b | a^2, b^2, a b a b a b >", 100), Some(6));
    }

    #[test]
    fn cyclic_group_matches_direct_table() {
        // Z/5 acting on itself by a -> +1
        let p = Presentation::parse("< a | a^5 >").unwrap();
        let Enumeration::Finite { table, .. } = enumerate(&p, 100) else {
            panic!("finite");
        };
        let perm = &table.permutations()[0];
        let mut c = 0;
        let mut seen = vec![c];
        for _ in 0..4 {
            c = perm[c];
            seen.push(c);
        }
        seen.sort();
        assert_eq!(seen, vec![0, 1, 2, 3, 4]);
        assert_eq!(perm[c], 0);
    }

    #[test]
    fn binary_icosahedral() {
        assert_eq!(order("< a, b | a b^2 a b^-1, a^4 b a^-1 b >", 10_000), Some(120));
    }

    #[test]
    fn cap_is_reported() {
        let p = Presentation::parse("< a | >").unwrap();
        assert_eq!(
            enumerate(&p, 50).to_string(),
            "CAP-EXCEEDED 50"
        );
        assert!(enumerate(&Presentation::parse("< a | a^5 >").unwrap(), 4).order().is_none());
        assert!(enumerate(&Presentation::parse("< a | a >").unwrap(), 0).order().is_none());
    }

    #[test]
    fn compaction_keeps_results() {
        // tiny caps force repeated compaction
        for cap in [6, 7, 9, 13, 40] {
            assert_eq!(order("< a, b | a^2, b^3, a b a^-1 b^-1 >", cap), Some(6), "cap {cap}");
        }
    }

    #[test]
    fn table_dump() {
        let p = Presentation::parse("< a | a^2 >").unwrap();
        let Enumeration::Finite { table, .. } = enumerate(&p, 10) else {
            panic!("finite");
        };
        assert_eq!(table.to_text(&p), "coset a a^-1\n1: 2 2\n2: 1 1\n");
    }

    #[test]
    fn deterministic() {
        let p = Presentation::parse("< a, b | a b^2 a b^-1, a^4 b a^-1 b >").unwrap();
        assert_eq!(enumerate(&p, 10_000), enumerate(&p, 10_000));
    }
}
