//! Andrews–Curtis moves on presentations.
//!
//! Relators are stored freely reduced, so a move is the edit on the stored
//! word followed by free reduction. Two consequences:
//!
//! * `InsertPair` and `DeletePair` leave the stored relator unchanged; they
//!   are kept so certificates can record where a cancelling pair sits.
//! * A cyclic permutation of a relator that is not cyclically reduced
//!   shortens it, and its inverse is a conjugation rather than another
//!   rotation.
//!
//! [`AcMove::Conjugate`] is the only compound move: a pair insertion at the
//! end of the relator followed by a rotation, applied as one edit of the
//! raw letter sequence.

use std::fmt;

use crate::error::{Error, Result};
use crate::presentation::{is_identifier, Presentation};
use crate::word::{Letter, Word};

/// One move. Indices are 0-based; positions are insertion points into the
/// stored relator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AcMove {
    /// `r_i -> r_i[..p] · a_j a_j⁻¹ · r_i[p..]` (or `a_j⁻¹ a_j`).
    InsertPair {
        relator: usize,
        position: usize,
        generator: usize,
        inverse_first: bool,
    },
    DeletePair {
        relator: usize,
        position: usize,
    },
    /// Moves the first `shift` letters of `r_i` to its end.
    CyclicPermute {
        relator: usize,
        shift: usize,
    },
    InvertRelator {
        relator: usize,
    },
    /// `r_target -> r_target · r_source`.
    MultiplyRight {
        target: usize,
        source: usize,
    },
    /// `r_target -> r_target · r_source⁻¹`.
    MultiplyRightInverse {
        target: usize,
        source: usize,
    },
    /// New last generator `x` and new last relator `x · word`.
    Stabilize {
        word: Word,
        name: Option<String>,
    },
    /// Removes the last generator together with a relator of the form
    /// `x · w`, `x` occurring nowhere else.
    Destabilize {
        generator: usize,
        relator: usize,
    },
    /// `r_i -> l · r_i · l⁻¹` (compound).
    Conjugate {
        relator: usize,
        letter: Letter,
    },
}

impl AcMove {
    pub fn is_primitive(&self) -> bool {
        !matches!(self, AcMove::Conjugate { .. })
    }

    /// The primitive moves a compound stands for, relative to `p`.
    /// Primitive moves expand to themselves.
    pub fn expand(&self, p: &Presentation) -> Result<Vec<AcMove>> {
        match *self {
            AcMove::Conjugate { relator, letter } => {
                let len = p.relator(relator)?.len();
                Ok(vec![
                    AcMove::InsertPair {
                        relator,
                        position: len,
                        generator: letter.gen(),
                        inverse_first: !letter.is_inverse(),
                    },
                    AcMove::CyclicPermute {
                        relator,
                        shift: len + 1,
                    },
                ])
            }
            _ => Ok(vec![self.clone()]),
        }
    }
}

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidMove(msg.into()))
}

fn check_relator(p: &Presentation, i: usize) -> Result<()> {
    p.relator(i).map(|_| ())
}

fn check_generator(p: &Presentation, g: usize) -> Result<()> {
    if g < p.generator_count() {
        Ok(())
    } else {
        Err(Error::GeneratorOutOfRange {
            index: g + 1,
            count: p.generator_count(),
        })
    }
}

/// First name among `x1, x2, …` not already used by `p`.
pub fn fresh_generator_name(p: &Presentation) -> String {
    (1..)
        .map(|i| format!("x{i}"))
        .find(|n| p.generator_index(n).is_none())
        .expect("unbounded name supply")
}

pub fn apply_move(p: &Presentation, m: &AcMove) -> Result<Presentation> {
    let mut q = p.clone();
    apply_move_in_place(&mut q, m)?;
    Ok(q)
}

/// Applies `m` to `p`. On error `p` is left untouched.
pub fn apply_move_in_place(p: &mut Presentation, m: &AcMove) -> Result<()> {
    match m {
        &AcMove::InsertPair {
            relator,
            position,
            generator,
            ..
        } => {
            check_relator(p, relator)?;
            check_generator(p, generator)?;
            let len = p.relators()[relator].len();
            if position > len {
                return invalid(format!(
                    "pair position {position} beyond relator length {len}"
                ));
            }
            // the inserted pair cancels at once in the stored form
        }
        &AcMove::DeletePair { relator, position } => {
            check_relator(p, relator)?;
            let len = p.relators()[relator].len();
            if position > len {
                return invalid(format!(
                    "pair position {position} beyond relator length {len}"
                ));
            }
        }
        &AcMove::CyclicPermute { relator, shift } => {
            check_relator(p, relator)?;
            let r = &mut p.relators_mut()[relator];
            *r = r.rotate(shift);
        }
        &AcMove::InvertRelator { relator } => {
            check_relator(p, relator)?;
            let r = &mut p.relators_mut()[relator];
            *r = r.inverse();
        }
        &AcMove::MultiplyRight { target, source } | &AcMove::MultiplyRightInverse { target, source } => {
            check_relator(p, target)?;
            check_relator(p, source)?;
            if target == source {
                return invalid("relator multiplied by itself");
            }
            let rels = p.relators_mut();
            let factor = if matches!(m, AcMove::MultiplyRight { .. }) {
                rels[source].clone()
            } else {
                rels[source].inverse()
            };
            rels[target] = rels[target].concat(&factor);
        }
        AcMove::Stabilize { word, name } => {
            let m_gens = p.generator_count();
            if let Some(g) = word.max_generator() {
                check_generator(p, g)?;
            }
            let name = match name {
                Some(n) => {
                    if !is_identifier(n) {
                        return invalid(format!("`{n}` is not a valid generator name"));
                    }
                    if p.generator_index(n).is_some() {
                        return invalid(format!("generator name `{n}` already in use"));
                    }
                    n.clone()
                }
                None => fresh_generator_name(p),
            };
            let relator = Word::letter(Letter::pos(m_gens)).concat(word);
            p.names_mut().push(name);
            p.relators_mut().push(relator);
        }
        &AcMove::Destabilize { generator, relator } => {
            check_relator(p, relator)?;
            check_generator(p, generator)?;
            if generator + 1 != p.generator_count() {
                return invalid("only the last generator can be destabilized");
            }
            let r = &p.relators()[relator];
            if r.first() != Some(Letter::pos(generator)) {
                return invalid("relator does not start with the destabilized generator");
            }
            let occurs_elsewhere = r.letters()[1..].iter().any(|l| l.gen() == generator)
                || p
                    .relators()
                    .iter()
                    .enumerate()
                    .any(|(k, w)| k != relator && w.contains_generator(generator));
            if occurs_elsewhere {
                return invalid("destabilized generator occurs outside its relator");
            }
            p.relators_mut().remove(relator);
            p.names_mut().pop();
        }
        &AcMove::Conjugate { relator, letter } => {
            check_relator(p, relator)?;
            check_generator(p, letter.gen())?;
            let r = &mut p.relators_mut()[relator];
            *r = r.conjugate_by(letter);
        }
    }
    Ok(())
}

/// Moves undoing `m`, computed against the presentation `p` that `m` is
/// applied to: `p · m · inverse_moves(p, m) = p`.
pub fn inverse_moves(p: &Presentation, m: &AcMove) -> Result<Vec<AcMove>> {
    let after = apply_move(p, m)?;
    let moves = match m {
        &AcMove::InsertPair {
            relator, position, ..
        } => vec![AcMove::DeletePair { relator, position }],
        &AcMove::DeletePair { relator, position } => {
            if p.generator_count() == 0 {
                Vec::new()
            } else {
                vec![AcMove::InsertPair {
                    relator,
                    position,
                    generator: 0,
                    inverse_first: false,
                }]
            }
        }
        &AcMove::CyclicPermute { relator, shift } => {
            let r = &p.relators()[relator];
            let rotated = &after.relators()[relator];
            if r.is_empty() {
                Vec::new()
            } else if rotated.len() == r.len() {
                let k = shift % r.len();
                vec![AcMove::CyclicPermute {
                    relator,
                    shift: (r.len() - k) % r.len(),
                }]
            } else {
                // r = x·y became reduce(y·x) = x⁻¹ r x; undo by conjugating with x
                let k = shift % r.len();
                r.letters()[..k]
                    .iter()
                    .rev()
                    .map(|&letter| AcMove::Conjugate { relator, letter })
                    .collect()
            }
        }
        AcMove::InvertRelator { .. } => vec![m.clone()],
        &AcMove::MultiplyRight { target, source } => {
            vec![AcMove::MultiplyRightInverse { target, source }]
        }
        &AcMove::MultiplyRightInverse { target, source } => {
            vec![AcMove::MultiplyRight { target, source }]
        }
        AcMove::Stabilize { .. } => vec![AcMove::Destabilize {
            generator: p.generator_count(),
            relator: p.relator_count(),
        }],
        &AcMove::Destabilize { generator, relator } => {
            let w = Word::from_letters(&p.relators()[relator].letters()[1..]);
            let mut moves = vec![AcMove::Stabilize {
                word: w,
                name: Some(p.names()[generator].clone()),
            }];
            // bubble the re-created relator from the end back to its slot
            let mut cur = apply_move(&after, &moves[0])?;
            let mut at = cur.relator_count() - 1;
            while at > relator {
                let swap = swap_relators(&cur, at - 1, at)?;
                for s in &swap {
                    apply_move_in_place(&mut cur, s)?;
                }
                moves.extend(swap);
                at -= 1;
            }
            moves
        }
        &AcMove::Conjugate { relator, letter } => vec![AcMove::Conjugate {
            relator,
            letter: letter.inv(),
        }],
    };
    Ok(moves)
}

/// Moves exchanging relators `i` and `j` of `p`:
/// `(X, Y) -> (XY, Y) -> (XY, X⁻¹) -> (XYX⁻¹, X⁻¹) -> (Y, X⁻¹) -> (Y, X)`.
pub fn swap_relators(p: &Presentation, i: usize, j: usize) -> Result<Vec<AcMove>> {
    check_relator(p, i)?;
    check_relator(p, j)?;
    if i == j {
        return Ok(Vec::new());
    }
    let x = p.relators()[i].clone();
    let y = &p.relators()[j];
    let mut moves = vec![
        AcMove::MultiplyRight {
            target: i,
            source: j,
        },
        AcMove::MultiplyRightInverse {
            target: j,
            source: i,
        },
        AcMove::MultiplyRight {
            target: i,
            source: j,
        },
    ];
    let xyx = x.concat(y).concat(&x.inverse());
    if xyx.len() == 2 * x.len() + y.len() {
        if !x.is_empty() {
            moves.push(AcMove::CyclicPermute {
                relator: i,
                shift: x.len(),
            });
        }
    } else {
        // conjugate by X⁻¹: innermost letter first
        let u = x.inverse();
        moves.extend(u.letters().iter().rev().map(|&letter| AcMove::Conjugate {
            relator: i,
            letter,
        }));
    }
    moves.push(AcMove::InvertRelator { relator: j });
    Ok(moves)
}

/// Why a certificate failed to replay.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplayFailure {
    /// 0-based index of the failing move; `moves.len()` when every move
    /// applied but the final presentation differs from `end`.
    pub step: usize,
    pub reason: String,
}

impl fmt::Display for ReplayFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {}: {}", self.step + 1, self.reason)
    }
}

/// A replayable sequence of moves from `start` to `end`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcCertificate {
    pub start: Presentation,
    pub moves: Vec<AcMove>,
    pub end: Presentation,
}

impl AcCertificate {
    pub fn identity(p: Presentation) -> Self {
        AcCertificate {
            start: p.clone(),
            moves: Vec::new(),
            end: p,
        }
    }

    /// Applies `moves` to `start`, computing `end`.
    pub fn from_moves(start: Presentation, moves: Vec<AcMove>) -> Result<Self> {
        let mut cur = start.clone();
        for m in &moves {
            apply_move_in_place(&mut cur, m)?;
        }
        Ok(AcCertificate {
            start,
            moves,
            end: cur,
        })
    }

    /// Appends a move, updating `end`.
    pub fn push(&mut self, m: AcMove) -> Result<()> {
        apply_move_in_place(&mut self.end, &m)?;
        self.moves.push(m);
        Ok(())
    }

    pub fn replay(&self) -> std::result::Result<(), ReplayFailure> {
        self.trace().map(|_| ())
    }

    pub fn verify(&self) -> bool {
        self.replay().is_ok()
    }

    /// Every intermediate presentation, `start` first and `end` last.
    pub fn trace(&self) -> std::result::Result<Vec<Presentation>, ReplayFailure> {
        let mut states = Vec::with_capacity(self.moves.len() + 1);
        let mut cur = self.start.clone();
        for (step, m) in self.moves.iter().enumerate() {
            let next = apply_move(&cur, m).map_err(|e| ReplayFailure {
                step,
                reason: e.to_string(),
            })?;
            states.push(std::mem::replace(&mut cur, next));
        }
        if cur != self.end {
            return Err(ReplayFailure {
                step: self.moves.len(),
                reason: format!("replay ends at {cur}, certificate claims {}", self.end),
            });
        }
        states.push(cur);
        Ok(states)
    }

    /// Certificate from `end` back to `start`.
    pub fn invert(&self) -> Result<AcCertificate> {
        let states = self
            .trace()
            .map_err(|f| Error::InvalidMove(format!("certificate does not replay: {f}")))?;
        let mut moves = Vec::new();
        for (m, before) in self.moves.iter().zip(&states).rev() {
            moves.extend(inverse_moves(before, m)?);
        }
        Ok(AcCertificate {
            start: self.end.clone(),
            moves,
            end: self.start.clone(),
        })
    }

    /// Same certificate with every compound move replaced by the primitives
    /// it stands for. The expansion is informational: primitives are
    /// applied one at a time to reduced relators, so it does not replay.
    pub fn expanded_moves(&self) -> Result<Vec<AcMove>> {
        let states = self
            .trace()
            .map_err(|f| Error::InvalidMove(format!("certificate does not replay: {f}")))?;
        let mut out = Vec::new();
        for (m, before) in self.moves.iter().zip(&states) {
            out.extend(m.expand(before)?);
        }
        Ok(out)
    }

    pub fn primitive_only(&self) -> bool {
        self.moves.iter().all(AcMove::is_primitive)
    }

    pub fn count(&self, pred: impl Fn(&AcMove) -> bool) -> usize {
        self.moves.iter().filter(|m| pred(m)).count()
    }

    /// Line-based text form, 1-based indices.
    pub fn to_text(&self) -> String {
        let mut out = format!("START {}\n", self.start);
        let mut cur = self.start.clone();
        for m in &self.moves {
            out.push_str(&format_move(&cur, m));
            out.push('\n');
            // on failure later STAB words are rendered against the last good state
            let _ = apply_move_in_place(&mut cur, m);
        }
        out.push_str(&format!("END {}\n", self.end));
        out
    }

    pub fn parse(text: &str) -> Result<AcCertificate> {
        parse_certificate(text)
    }
}

impl fmt::Display for AcCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn format_move(cur: &Presentation, m: &AcMove) -> String {
    match m {
        AcMove::InsertPair {
            relator,
            position,
            generator,
            inverse_first,
        } => format!(
            "INSPAIR {} {} {} {}",
            relator + 1,
            position,
            generator + 1,
            u8::from(*inverse_first)
        ),
        AcMove::DeletePair { relator, position } => format!("DELPAIR {} {}", relator + 1, position),
        AcMove::CyclicPermute { relator, shift } => format!("CYC {} {}", relator + 1, shift),
        AcMove::InvertRelator { relator } => format!("INV {}", relator + 1),
        AcMove::MultiplyRight { target, source } => format!("MULR {} {}", target + 1, source + 1),
        AcMove::MultiplyRightInverse { target, source } => {
            format!("MULRI {} {}", target + 1, source + 1)
        }
        AcMove::Stabilize { word, name } => {
            let w = cur.render_word(word);
            match name {
                Some(n) => format!("STAB {w} -> {n}"),
                None => format!("STAB {w}"),
            }
        }
        AcMove::Destabilize { generator, relator } => {
            format!("DESTAB {} {}", generator + 1, relator + 1)
        }
        AcMove::Conjugate { relator, letter } => {
            format!("CONJ {} {} {}", relator + 1, letter.gen() + 1, letter.sign())
        }
    }
}

fn parse_certificate(text: &str) -> Result<AcCertificate> {
    let mut start: Option<Presentation> = None;
    let mut end: Option<Presentation> = None;
    let mut moves = Vec::new();
    // tracks the current presentation so STAB words can be resolved
    let mut cur: Option<Presentation> = None;

    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let err = |message: String| Error::CertificateFormat {
            line: lineno,
            message,
        };
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if end.is_some() {
            return Err(err("content after END".into()));
        }
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        if start.is_none() {
            if keyword != "START" {
                return Err(err("certificate must begin with START".into()));
            }
            let p = Presentation::parse(rest).map_err(|e| err(e.to_string()))?;
            cur = Some(p.clone());
            start = Some(p);
            continue;
        }
        if keyword == "END" {
            end = Some(Presentation::parse(rest).map_err(|e| err(e.to_string()))?);
            continue;
        }
        let nums = |want: usize| -> Result<Vec<i64>> {
            let v: Vec<i64> = rest
                .split_whitespace()
                .map(|t| t.parse::<i64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| err(format!("bad number: {e}")))?;
            if v.len() != want {
                return Err(err(format!("{keyword} takes {want} arguments, got {}", v.len())));
            }
            Ok(v)
        };
        let index = |v: i64| -> Result<usize> {
            if v < 1 {
                Err(err(format!("index {v} must be at least 1")))
            } else {
                Ok(v as usize - 1)
            }
        };
        let count = |v: i64| -> Result<usize> {
            usize::try_from(v).map_err(|_| err(format!("{v} must be nonnegative")))
        };
        let m = match keyword {
            "INSPAIR" => {
                let v = nums(4)?;
                if v[3] != 0 && v[3] != 1 {
                    return Err(err("pair order flag must be 0 or 1".into()));
                }
                AcMove::InsertPair {
                    relator: index(v[0])?,
                    position: count(v[1])?,
                    generator: index(v[2])?,
                    inverse_first: v[3] == 1,
                }
            }
            "DELPAIR" => {
                let v = nums(2)?;
                AcMove::DeletePair {
                    relator: index(v[0])?,
                    position: count(v[1])?,
                }
            }
            "CYC" => {
                let v = nums(2)?;
                AcMove::CyclicPermute {
                    relator: index(v[0])?,
                    shift: count(v[1])?,
                }
            }
            "INV" => AcMove::InvertRelator {
                relator: index(nums(1)?[0])?,
            },
            "MULR" | "MULRI" => {
                let v = nums(2)?;
                let (target, source) = (index(v[0])?, index(v[1])?);
                if keyword == "MULR" {
                    AcMove::MultiplyRight { target, source }
                } else {
                    AcMove::MultiplyRightInverse { target, source }
                }
            }
            "DESTAB" => {
                let v = nums(2)?;
                AcMove::Destabilize {
                    generator: index(v[0])?,
                    relator: index(v[1])?,
                }
            }
            "CONJ" => {
                let v = nums(3)?;
                if v[2] != 1 && v[2] != -1 {
                    return Err(err("conjugating letter sign must be 1 or -1".into()));
                }
                AcMove::Conjugate {
                    relator: index(v[0])?,
                    letter: Letter::new(index(v[1])?, v[2] < 0),
                }
            }
            "STAB" => {
                let (word_text, name) = match rest.split_once("->") {
                    Some((w, n)) => (w.trim(), Some(n.trim().to_string())),
                    None => (rest, None),
                };
                let p = cur.as_ref().ok_or_else(|| {
                    err("cannot resolve STAB word after an invalid move".into())
                })?;
                let word = p.parse_word(word_text).map_err(|e| err(e.to_string()))?;
                AcMove::Stabilize { word, name }
            }
            other => return Err(err(format!("unknown move `{other}`"))),
        };
        cur = cur.and_then(|p| apply_move(&p, &m).ok());
        moves.push(m);
    }
    let start = start.ok_or(Error::CertificateFormat {
        line: 0,
        message: "missing START".into(),
    })?;
    let end = end.ok_or(Error::CertificateFormat {
        line: 0,
        message: "missing END".into(),
    })?;
    Ok(AcCertificate { start, moves, end })
}
