//! Breadth-first search for Andrews–Curtis trivializations.
//!
//! States are balanced presentations up to relator order, relator inversion
//! and cyclic permutation, stored as [`CanonicalForm`]s. From a state, a
//! relator `r_i` may be replaced by `r_i · s` where `s` is any rotation of
//! another relator or of its inverse (cyclic permutations and conjugation
//! folded together), and the last generator may be destabilized when it
//! occurs exactly once. Certificates are rebuilt afterwards by replaying the
//! edges on concrete presentations.

use std::fmt;
use std::hash::{BuildHasher, Hash, Hasher};

use rayon::prelude::*;
use rustc_hash::{FxBuildHasher, FxHashSet};

use crate::error::{Error, Result};
use crate::moves::{apply_move_in_place, AcCertificate, AcMove};
use crate::presentation::Presentation;
use crate::word::{Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SearchLimits {
    pub max_total_letters: usize,
    pub max_relator_letters: usize,
    pub max_depth: usize,
    pub max_states: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_total_letters: 40,
            max_relator_letters: 16,
            max_depth: 256,
            max_states: 5_000_000,
        }
    }
}

// Letters as codes `2g + inverse`, which sort like `Letter`.
type Code = u8;

const MAX_GENERATORS: usize = 127;

fn code(l: Letter) -> Code {
    (2 * l.gen() + usize::from(l.is_inverse())) as Code
}

fn letter(c: Code) -> Letter {
    Letter::new(usize::from(c >> 1), c & 1 == 1)
}

fn inv(c: Code) -> Code {
    c ^ 1
}

fn push_reduced(stack: &mut Vec<Code>, c: Code) {
    if stack.last() == Some(&inv(c)) {
        stack.pop();
    } else {
        stack.push(c);
    }
}

/// Bounds of the cyclically reduced core of a reduced word.
fn core_bounds(w: &[Code]) -> (usize, usize) {
    let (mut s, mut e) = (0, w.len());
    while e - s >= 2 && w[s] == inv(w[e - 1]) {
        s += 1;
        e -= 1;
    }
    (s, e)
}

fn inverse_word(w: &[Code]) -> Vec<Code> {
    w.iter().rev().map(|&c| inv(c)).collect()
}

fn rotation_less(w: &[Code], a: usize, b: usize) -> bool {
    let n = w.len();
    for k in 0..n {
        let (x, y) = (w[(a + k) % n], w[(b + k) % n]);
        if x != y {
            return x < y;
        }
    }
    false
}

/// Least rotation start, restricted to positions holding the least letter.
fn least_rotation(w: &[Code]) -> usize {
    let Some(&m) = w.iter().min() else {
        return 0;
    };
    let mut best = None;
    for (s, &c) in w.iter().enumerate() {
        if c == m && best.is_none_or(|b| rotation_less(w, s, b)) {
            best = Some(s);
        }
    }
    best.unwrap_or(0)
}

fn rotated(w: &[Code], s: usize) -> Vec<Code> {
    let mut out = Vec::with_capacity(w.len());
    out.extend_from_slice(&w[s..]);
    out.extend_from_slice(&w[..s]);
    out
}

/// How a cyclically reduced word reaches its canonical representative:
/// optionally inverted, then rotated left by `shift`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Normalization {
    inverted: bool,
    shift: usize,
}

fn normalize_core(core: &[Code]) -> (Vec<Code>, Normalization) {
    if core.is_empty() {
        return (
            Vec::new(),
            Normalization {
                inverted: false,
                shift: 0,
            },
        );
    }
    let s = least_rotation(core);
    let plain = rotated(core, s);
    let inverse = inverse_word(core);
    let t = least_rotation(&inverse);
    let flipped = rotated(&inverse, t);
    if flipped < plain {
        (
            flipped,
            Normalization {
                inverted: true,
                shift: t,
            },
        )
    } else {
        (
            plain,
            Normalization {
                inverted: false,
                shift: s,
            },
        )
    }
}

/// Canonical representative of a reduced word's conjugacy-and-inversion
/// class.
fn canonical_relator(w: &[Code]) -> Vec<Code> {
    let (s, e) = core_bounds(w);
    normalize_core(&w[s..e]).0
}

/// A balanced presentation normalized up to relator order, inversion and
/// cyclic permutation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    generators: usize,
    relators: Vec<Word>,
}

impl CanonicalForm {
    pub fn generator_count(&self) -> usize {
        self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn to_presentation(&self) -> Presentation {
        Presentation::with_numbered_generators("a", self.relators.clone(), self.generators)
            .expect("canonical relators use only declared generators")
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_presentation().fmt(f)
    }
}

/// Each relator becomes the least word among the rotations of its cyclic
/// reduction and of that reduction's inverse; relators are then sorted.
pub fn canonical_form(p: &Presentation) -> CanonicalForm {
    let mut relators: Vec<Word> = p
        .relators()
        .iter()
        .map(|r| {
            let codes: Vec<Code> = r.letters().iter().map(|&l| code(l)).collect();
            let letters: Vec<Letter> = canonical_relator(&codes).into_iter().map(letter).collect();
            Word::from_letters(&letters)
        })
        .collect();
    relators.sort();
    CanonicalForm {
        generators: p.generator_count(),
        relators,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct State {
    generators: usize,
    relators: Vec<Vec<Code>>,
}

impl State {
    fn from_form(f: &CanonicalForm) -> Self {
        State {
            generators: f.generators,
            relators: f
                .relators
                .iter()
                .map(|r| r.letters().iter().map(|&l| code(l)).collect())
                .collect(),
        }
    }

    fn key(&self) -> u128 {
        
        let mut sip = std::hash::DefaultHasher::new();
        
        self.hash(&mut sip);
        (u128::from(FxBuildHasher.hash_one(self)) << 64) | u128::from(sip.finish())
    }

    fn total_letters(&self) -> usize {
        self.relators.iter().map(Vec::len).sum()
    }

    fn is_goal(&self) -> bool {
        self.generators == 0
    }

    /// Relator holding the last generator, if it occurs exactly once.
    fn destabilizable(&self) -> Option<usize> {
        let g = self.generators.checked_sub(1)?;
        let mut found = None;
        for (k, r) in self.relators.iter().enumerate() {
            for &c in r {
                if usize::from(c >> 1) == g {
                    if found.is_some() {
                        return None;
                    }
                    found = Some(k);
                }
            }
        }
        found
    }

    fn apply(&self, edge: Edge) -> State {
        match edge {
            Edge::Destabilize { relator } => {
                let mut relators = self.relators.clone();
                relators.remove(usize::from(relator));
                State {
                    generators: self.generators - 1,
                    relators,
                }
            }
            Edge::Multiply {
                target,
                source,
                shift,
                inverse,
            } => {
                let mut relators = self.relators.clone();
                let (target, source) = (usize::from(target), usize::from(source));
                relators[target] = product(&self.relators[target], &self.relators[source], usize::from(shift), inverse);
                relators.sort();
                State {
                    generators: self.generators,
                    relators,
                }
            }
        }
    }
}

/// Reduced `t · s'`, where `s'` is `s` rotated left by `shift`, inverted
/// when `inverse` is set.
fn raw_product(t: &[Code], s: &[Code], shift: usize, inverse: bool) -> Vec<Code> {
    let mut out = Vec::with_capacity(t.len() + s.len());
    out.extend_from_slice(t);
    let n = s.len();
    if inverse {
        for k in (0..n).rev() {
            push_reduced(&mut out, inv(s[(shift + k) % n]));
        }
    } else {
        for k in 0..n {
            push_reduced(&mut out, s[(shift + k) % n]);
        }
    }
    out
}

fn product(t: &[Code], s: &[Code], shift: usize, inverse: bool) -> Vec<Code> {
    canonical_relator(&raw_product(t, s, shift, inverse))
}

/// Edge between canonical states; indices refer to the parent's sorted
/// relators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Edge {
    Multiply {
        target: u8,
        source: u8,
        shift: u8,
        inverse: bool,
    },
    Destabilize {
        relator: u8,
    },
}

// `u8` indices keep nodes small; states stay within these bounds because
// generators are capped and relators are at most `max_relator_letters`.
impl Edge {
    fn multiply(target: usize, source: usize, shift: usize, inverse: bool) -> Self {
        Edge::Multiply {
            target: target as u8,
            source: source as u8,
            shift: shift as u8,
            inverse,
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Node {
    parent: u32,
    edge: Option<Edge>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Distinct canonical states seen, the start included.
    pub visited: usize,
    pub expanded: usize,
    /// Deepest completed BFS level.
    pub depth_reached: usize,
    /// States dropped for exceeding a letter bound.
    pub pruned: usize,
}

impl fmt::Display for SearchStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "visited {} expanded {} depth {} pruned {}",
            self.visited, self.expanded, self.depth_reached, self.pruned
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    /// Every state within the letter bounds was expanded.
    Exhausted,
    DepthLimit,
    StateLimit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found {
        certificate: AcCertificate,
        /// Number of search edges from the start to the empty presentation.
        depth: usize,
        stats: SearchStats,
    },
    /// Limits were exhausted; says nothing about AC-triviality.
    NotFound { reason: StopReason, stats: SearchStats },
}

impl SearchOutcome {
    pub fn stats(&self) -> &SearchStats {
        match self {
            SearchOutcome::Found { stats, .. } | SearchOutcome::NotFound { stats, .. } => stats,
        }
    }
}

struct Expansion {
    children: Vec<(State, Edge)>,
    pruned: usize,
}

fn expand(state: &State, limits: &SearchLimits) -> Expansion {
    let mut children = Vec::new();
    let mut pruned = 0;
    if let Some(k) = state.destabilizable() {
        children.push((state.apply(Edge::Destabilize { relator: k as u8 }), Edge::Destabilize { relator: k as u8 }));
    }
    let n = state.relators.len();
    let others_total = state.total_letters();
    for target in 0..n {
        let base = others_total - state.relators[target].len();
        for source in (0..n).filter(|&s| s != target) {
            let len = state.relators[source].len();
            for shift in 0..len {
                for inverse in [false, true] {
                    let raw = raw_product(&state.relators[target], &state.relators[source], shift, inverse);
                    let (s, e) = core_bounds(&raw);
                    if e - s > limits.max_relator_letters || base + e - s > limits.max_total_letters {
                        pruned += 1;
                        continue;
                    }
                    let r = normalize_core(&raw[s..e]).0;
                    let mut relators = state.relators.clone();
                    relators[target] = r;
                    relators.sort();
                    let child = State {
                        generators: state.generators,
                        relators,
                    };
                    children.push((child, Edge::multiply(target, source, shift, inverse)));
                }
            }
        }
    }
    Expansion { children, pruned }
}

fn require_balanced(p: &Presentation) -> Result<()> {
    if p.is_balanced() {
        Ok(())
    } else {
        Err(Error::NotBalanced {
            generators: p.generator_count(),
            relators: p.relator_count(),
        })
    }
}

/// Breadth-first search from `p` towards the empty presentation.
///
/// Levels are expanded in parallel and merged in frontier order, so the
/// result does not depend on the thread count.
pub fn search_trivialization(p: &Presentation, limits: &SearchLimits) -> Result<SearchOutcome> {
    require_balanced(p)?;
    if p.generator_count() > MAX_GENERATORS {
        return Err(Error::InvalidMove(format!(
            "search supports at most {MAX_GENERATORS} generators"
        )));
    }
    let start = State::from_form(&canonical_form(p));
    let mut stats = SearchStats {
        visited: 1,
        ..SearchStats::default()
    };
    let mut nodes = vec![Node {
        parent: u32::MAX,
        edge: None,
    }];
    if start.is_goal() {
        let certificate = rebuild(p, &nodes, 0)?;
        return Ok(SearchOutcome::Found {
            certificate,
            depth: 0,
            stats,
        });
    }
    let mut visited: FxHashSet<u128> = FxHashSet::default();
    visited.insert(start.key());
    #[cfg(debug_assertions)]
    let mut expanded_keys: FxHashSet<u128> = FxHashSet::default();

    let mut frontier: Vec<(u32, State)> = vec![(0, start)];
    let mut depth = 0;
    loop {
        if frontier.is_empty() {
            return Ok(SearchOutcome::NotFound {
                reason: StopReason::Exhausted,
                stats,
            });
        }
        if depth >= limits.max_depth {
            return Ok(SearchOutcome::NotFound {
                reason: StopReason::DepthLimit,
                stats,
            });
        }
        #[cfg(debug_assertions)]
        for (_, s) in &frontier {
            assert!(expanded_keys.insert(s.key()), "canonical state expanded twice");
        }
        let expansions: Vec<Expansion> = frontier.par_iter().map(|(_, s)| expand(s, limits)).collect();
        let mut next = Vec::new();
        for ((parent, _), exp) in frontier.iter().zip(expansions) {
            stats.expanded += 1;
            stats.pruned += exp.pruned;
            for (child, edge) in exp.children {
                if !visited.insert(child.key()) {
                    continue;
                }
                let id = nodes.len() as u32;
                nodes.push(Node {
                    parent: *parent,
                    edge: Some(edge),
                });
                stats.visited += 1;
                if child.is_goal() {
                    stats.depth_reached = depth + 1;
                    let certificate = rebuild(p, &nodes, id)?;
                    return Ok(SearchOutcome::Found {
                        certificate,
                        depth: depth + 1,
                        stats,
                    });
                }
                if stats.visited >= limits.max_states {
                    return Ok(SearchOutcome::NotFound {
                        reason: StopReason::StateLimit,
                        stats,
                    });
                }
                next.push((id, child));
            }
        }
        frontier = next;
        depth += 1;
        stats.depth_reached = depth;
    }
}

/// Concrete presentation whose relators are those of a canonical state,
/// with `slot[k]` the concrete index of canonical relator `k`.
struct Concrete {
    p: Presentation,
    slot: Vec<usize>,
    moves: Vec<AcMove>,
}

impl Concrete {
    fn push(&mut self, m: AcMove) -> Result<()> {
        apply_move_in_place(&mut self.p, &m)?;
        self.moves.push(m);
        Ok(())
    }

    /// Brings concrete relator `i` to its canonical representative.
    fn normalize(&mut self, i: usize) -> Result<()> {
        let codes: Vec<Code> = self.p.relators()[i].letters().iter().map(|&l| code(l)).collect();
        let (s, e) = core_bounds(&codes);
        if s > 0 {
            self.push(AcMove::CyclicPermute { relator: i, shift: s })?;
        }
        let (_, norm) = normalize_core(&codes[s..e]);
        if norm.inverted {
            self.push(AcMove::InvertRelator { relator: i })?;
        }
        if norm.shift > 0 {
            self.push(AcMove::CyclicPermute {
                relator: i,
                shift: norm.shift,
            })?;
        }
        Ok(())
    }

    fn codes(&self, i: usize) -> Vec<Code> {
        self.p.relators()[i].letters().iter().map(|&l| code(l)).collect()
    }

    /// Recomputes `slot` so that canonical order matches `state`.
    fn reslot(&mut self, state: &State) {
        let mut order: Vec<(Vec<Code>, usize)> = (0..self.p.relator_count()).map(|i| (self.codes(i), i)).collect();
        order.sort();
        debug_assert!(order.iter().map(|(w, _)| w).eq(state.relators.iter()));
        self.slot = order.into_iter().map(|(_, i)| i).collect();
    }

    fn follow(&mut self, parent: &State, edge: Edge, child: &State) -> Result<()> {
        match edge {
            Edge::Multiply {
                target,
                source,
                shift,
                inverse,
            } => {
                let (t, s) = (self.slot[target as usize], self.slot[source as usize]);
                let len = parent.relators[source as usize].len();
                let shift = usize::from(shift);
                if shift > 0 {
                    self.push(AcMove::CyclicPermute { relator: s, shift })?;
                }
                self.push(if inverse {
                    AcMove::MultiplyRightInverse { target: t, source: s }
                } else {
                    AcMove::MultiplyRight { target: t, source: s }
                })?;
                if shift > 0 {
                    self.push(AcMove::CyclicPermute {
                        relator: s,
                        shift: len - shift,
                    })?;
                }
                self.normalize(t)?;
            }
            Edge::Destabilize { relator } => {
                let c = self.slot[relator as usize];
                let g = self.p.generator_count() - 1;
                let codes = self.codes(c);
                let pos = codes.iter().position(|&x| usize::from(x >> 1) == g).expect("destabilized generator present");
                if pos > 0 {
                    self.push(AcMove::CyclicPermute { relator: c, shift: pos })?;
                }
                if codes[pos] & 1 == 1 {
                    self.push(AcMove::InvertRelator { relator: c })?;
                    let len = codes.len();
                    if len > 1 {
                        self.push(AcMove::CyclicPermute {
                            relator: c,
                            shift: len - 1,
                        })?;
                    }
                }
                self.push(AcMove::Destabilize { generator: g, relator: c })?;
            }
        }
        self.reslot(child);
        Ok(())
    }
}

/// Certificate from `p` along the tree path to node `goal`.
fn rebuild(p: &Presentation, nodes: &[Node], goal: u32) -> Result<AcCertificate> {
    let mut path = Vec::new();
    let mut at = goal;
    while let Some(edge) = nodes[at as usize].edge {
        path.push(edge);
        at = nodes[at as usize].parent;
    }
    path.reverse();

    let mut state = State::from_form(&canonical_form(p));
    let mut c = Concrete {
        p: p.clone(),
        slot: Vec::new(),
        moves: Vec::new(),
    };
    for i in 0..p.relator_count() {
        c.normalize(i)?;
    }
    c.reslot(&state);
    for edge in path {
        let child = state.apply(edge);
        c.follow(&state, edge, &child)?;
        state = child;
    }
    let cert = AcCertificate {
        start: p.clone(),
        moves: c.moves,
        end: c.p,
    };
    cert.replay()
        .map_err(|f| Error::InvalidMove(format!("rebuilt certificate does not replay: {f}")))?;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(s: &str) -> Presentation {
        Presentation::parse(s).unwrap()
    }

    fn found(s: &str, limits: &SearchLimits) -> (AcCertificate, usize) {
        match search_trivialization(&pres(s), limits).unwrap() {
            SearchOutcome::Found {
                certificate, depth, ..
            } => {
                assert!(certificate.verify());
                assert_eq!(certificate.end, Presentation::empty());
                (certificate, depth)
            }
            other => panic!("expected a certificate, got {other:?}"),
        }
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonical_form(&pres("< a | a^-1 >")), canonical_form(&pres("< a | a >")));
        let f = canonical_form(&pres("< a, b | b a, a b >"));
        assert_eq!(f.relators()[0], f.relators()[1]);
        let g = canonical_form(&pres("< a, b | b^-1 a^-1, a b >"));
        assert_eq!(g.relators()[0], g.relators()[1]);
        assert_eq!(g.to_string(), "< a1, a2 | a1 a2, a1 a2 >");
        assert_eq!(canonical_form(&pres("< a, b | b a b^-1 >")).to_string(), "< a1, a2 | a1 >");
    }

    #[test]
    fn canonical_is_idempotent() {
        let f = canonical_form(&pres("< a, b, c | c b^-1 a^2 c^-1, b a^-3 b^-1 a, 1 >"));
        assert_eq!(canonical_form(&f.to_presentation()), f);
    }

    #[test]
    fn single_letters_destabilize() {
        let (cert, depth) = found("< a, b, c | a^3 a^-2, b^3 b^-2, c^3 c^-2 >", &SearchLimits::default());
        assert_eq!(depth, 3);
        assert_eq!(cert.moves.len(), 3);
        assert!(cert.moves.iter().all(|m| matches!(m, AcMove::Destabilize { .. })));
    }

    #[test]
    fn empty_presentation_is_its_own_trivialization() {
        let (cert, depth) = found("< | >", &SearchLimits::default());
        assert_eq!(depth, 0);
        assert!(cert.moves.is_empty());
    }

    #[test]
    fn two_generator_dual() {
        let (_, depth) = found("< a, b | a^2 b^3, a^-1 b^-2 >", &SearchLimits::default());
        assert!(depth <= 12);
    }

    #[test]
    fn inverse_letters_and_conjugates() {
        found("< a, b | b a^-1 b^-1, b^-1 >", &SearchLimits::default());
        found("< a, b | a b, b a b^-1 a^-2 >", &SearchLimits::default());
    }

    #[test]
    fn limits_stop_the_search() {
        let tight = SearchLimits {
            max_depth: 1,
            ..SearchLimits::default()
        };
        let out = search_trivialization(&pres("< a, b | a^2 b^3, a^-1 b^-2 >"), &tight).unwrap();
        assert!(matches!(out, SearchOutcome::NotFound { reason: StopReason::DepthLimit, .. }));
        let few = SearchLimits {
            max_states: 10,
            ..SearchLimits::default()
        };
        let out = search_trivialization(&pres("< a, b | a^2 b^3, a^-1 b^-2 >"), &few).unwrap();
        assert!(matches!(out, SearchOutcome::NotFound { reason: StopReason::StateLimit, .. }));
        // Z/2: nothing within the bounds trivializes it
        let out = search_trivialization(&pres("< a | a^2 >"), &SearchLimits::default()).unwrap();
        assert!(matches!(out, SearchOutcome::NotFound { reason: StopReason::Exhausted, .. }));
    }

    #[test]
    fn unbalanced_is_an_error() {
        assert!(search_trivialization(&pres("< a, b | a >"), &SearchLimits::default()).is_err());
    }

    #[test]
    fn deterministic() {
        let p = pres("< a, b | a^2 b^3, a^-1 b^-2 >");
        let a = search_trivialization(&p, &SearchLimits::default()).unwrap();
        let b = search_trivialization(&p, &SearchLimits::default()).unwrap();
        assert_eq!(a, b);
    }
}
