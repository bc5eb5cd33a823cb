//! Dual presentations read off from occurrence orderings, and the
//! alignment of a perfect balanced presentation with a trivializable dual.
//!
//! Each letter `a_i^±` of relator `r_j` contributes `alpha_j^±` to the dual
//! relator `rho_i`; the order of contributions along `rho_i` is the
//! [`OrderingWitness`]. Whatever the order, the dual's exponent matrix is
//! the transpose of the source's.

use std::fmt;
use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::abelian::{determinant, exponent_matrix, smith_normal_form, IntMatrix};
use crate::error::{Error, Result};
use crate::lemma2::presentation_from_matrix_named;
use crate::moves::{AcCertificate, AcMove};
use crate::presentation::{numbered_names, Presentation, RawPresentation};
use crate::word::{free_reduce, Letter};

/// Generator prefix of dual presentations.
pub const DUAL_PREFIX: &str = "alpha";

/// A letter of some relator: `relator` and `position` address it, `inverse`
/// is its exponent sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Occurrence {
    pub relator: usize,
    pub position: usize,
    pub inverse: bool,
}

impl fmt::Display for Occurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.inverse { '-' } else { '+' };
        write!(f, "{}:{}:{}", self.relator + 1, self.position, sign)
    }
}

/// Per generator, the order in which its occurrences are read.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderingWitness(pub Vec<Vec<Occurrence>>);

impl OrderingWitness {
    pub fn generator(&self, i: usize) -> &[Occurrence] {
        &self.0[i]
    }

    /// One line per generator of space-separated `j:pos:sign` triples.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for occ in &self.0 {
            let line: Vec<String> = occ.iter().map(Occurrence::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str, n_gens: usize) -> Result<Self> {
        let lines: Vec<&str> = text.lines().collect();
        if lines.len() != n_gens {
            return Err(Error::BadWitness(format!(
                "expected {n_gens} lines, found {}",
                lines.len()
            )));
        }
        let parse_triple = |t: &str| -> Result<Occurrence> {
            let bad = || Error::BadWitness(format!("malformed occurrence `{t}`"));
            let mut parts = t.split(':');
            let (Some(j), Some(pos), Some(sign), None) = (parts.next(), parts.next(), parts.next(), parts.next())
            else {
                return Err(bad());
            };
            let j: usize = j.parse().map_err(|_| bad())?;
            if j == 0 {
                return Err(bad());
            }
            let inverse = match sign {
                "+" => false,
                "-" => true,
                _ => return Err(bad()),
            };
            Ok(Occurrence {
                relator: j - 1,
                position: pos.parse().map_err(|_| bad())?,
                inverse,
            })
        };
        lines
            .iter()
            .map(|l| l.split_whitespace().map(parse_triple).collect())
            .collect::<Result<Vec<_>>>()
            .map(OrderingWitness)
    }
}

fn require_balanced(p: &RawPresentation) -> Result<()> {
    if p.is_balanced() {
        Ok(())
    } else {
        Err(Error::NotBalanced {
            generators: p.generator_count(),
            relators: p.relator_count(),
        })
    }
}

/// Occurrences of every generator, scanning `r_1 … r_n` left to right.
pub fn default_witness(p: &RawPresentation) -> Result<OrderingWitness> {
    require_balanced(p)?;
    let mut per_gen = vec![Vec::new(); p.generator_count()];
    for (j, r) in p.relators().iter().enumerate() {
        for (pos, l) in r.iter().enumerate() {
            per_gen[l.gen()].push(Occurrence {
                relator: j,
                position: pos,
                inverse: l.is_inverse(),
            });
        }
    }
    Ok(OrderingWitness(per_gen))
}

/// Checks that `w` lists every occurrence of every generator exactly once,
/// with the right sign.
pub fn check_witness(p: &RawPresentation, w: &OrderingWitness) -> Result<()> {
    let n = p.generator_count();
    if w.0.len() != n {
        return Err(Error::BadWitness(format!(
            "witness covers {} generators, presentation has {n}",
            w.0.len()
        )));
    }
    let mut seen: Vec<Vec<bool>> = p.relators().iter().map(|r| vec![false; r.len()]).collect();
    for (i, occ) in w.0.iter().enumerate() {
        for o in occ {
            let letter = p
                .relators()
                .get(o.relator)
                .and_then(|r| r.get(o.position))
                .ok_or_else(|| Error::BadWitness(format!("occurrence {o} does not exist")))?;
            if *letter != Letter::new(i, o.inverse) {
                return Err(Error::BadWitness(format!(
                    "occurrence {o} listed under generator {} is not that letter",
                    i + 1
                )));
            }
            let slot = &mut seen[o.relator][o.position];
            if *slot {
                return Err(Error::BadWitness(format!("occurrence {o} listed twice")));
            }
            *slot = true;
        }
    }
    if seen.iter().flatten().any(|s| !s) {
        return Err(Error::BadWitness("witness misses some occurrences".into()));
    }
    Ok(())
}

/// Dual relators as raw letter sequences, before free reduction.
pub fn dual_relators_raw(p: &RawPresentation, w: &OrderingWitness) -> Result<Vec<Vec<Letter>>> {
    require_balanced(p)?;
    check_witness(p, w)?;
    Ok(w.0
        .iter()
        .map(|occ| occ.iter().map(|o| Letter::new(o.relator, o.inverse)).collect())
        .collect())
}

/// The dual presentation `< alpha1 … alphan | rho_1 … rho_n >`, reduced.
pub fn dualize(p: &RawPresentation, w: &OrderingWitness) -> Result<Presentation> {
    let raw = dual_relators_raw(p, w)?;
    Presentation::new(
        numbered_names(DUAL_PREFIX, p.relator_count()),
        raw.iter().map(|r| free_reduce(r)).collect(),
    )
}

/// Dual with respect to the scan-order witness.
pub fn default_dual(p: &Presentation) -> Result<Presentation> {
    let raw = RawPresentation::from(p);
    let w = default_witness(&raw)?;
    dualize(&raw, &w)
}

/// Whether the default dual's exponent matrix is the transpose of `p`'s.
pub fn transpose_check(p: &Presentation) -> bool {
    match default_dual(p) {
        Ok(d) => exponent_matrix::<BigInt>(&d) == exponent_matrix::<BigInt>(p).transpose(),
        Err(_) => false,
    }
}

/// `count` copies of `a_generator a_generator⁻¹` spliced into raw relator
/// `relator` at `position`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairInsertion {
    pub relator: usize,
    pub generator: usize,
    pub count: usize,
    pub position: usize,
}

/// Applies the insertions in order; positions refer to the relator as left
/// by the previous insertions.
pub fn insert_pairs(p: &RawPresentation, insertions: &[PairInsertion]) -> Result<RawPresentation> {
    let mut out = p.clone();
    for ins in insertions {
        if ins.generator >= p.generator_count() {
            return Err(Error::GeneratorOutOfRange {
                index: ins.generator + 1,
                count: p.generator_count(),
            });
        }
        let count = out.relator_count();
        let r = out.relators_mut().get_mut(ins.relator).ok_or(Error::RelatorOutOfRange {
            index: ins.relator + 1,
            count,
        })?;
        if ins.position > r.len() {
            return Err(Error::InvalidMove(format!(
                "insertion point {} beyond relator length {}",
                ins.position,
                r.len()
            )));
        }
        let pair = [Letter::pos(ins.generator), Letter::neg(ins.generator)];
        let block: Vec<Letter> = pair.iter().copied().cycle().take(2 * ins.count).collect();
        r.splice(ins.position..ins.position, block);
    }
    Ok(out)
}

/// Source presentation paired with an aligned, trivializable dual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnotCertificate {
    pub source: Presentation,
    /// `source` with cancelling pairs inserted.
    pub augmented: RawPresentation,
    pub witness: OrderingWitness,
    /// `dualize(augmented, witness)`; presents the trivial group.
    pub dual: Presentation,
    /// From the empty presentation to `dual`.
    pub trivialization: AcCertificate,
    pub source_insertions: Vec<PairInsertion>,
}

fn count_letters(letters: &[Letter], gen: usize) -> (usize, usize) {
    letters
        .iter()
        .filter(|l| l.gen() == gen)
        .fold((0, 0), |(p, m), l| if l.is_inverse() { (p, m + 1) } else { (p + 1, m) })
}

fn require_perfect_balanced(p: &Presentation) -> Result<IntMatrix<BigInt>> {
    if !p.is_balanced() {
        return Err(Error::NotBalanced {
            generators: p.generator_count(),
            relators: p.relator_count(),
        });
    }
    let a = exponent_matrix::<BigInt>(p);
    let det = determinant(&a)?;
    if det != BigInt::from(1) && det != BigInt::from(-1) {
        let factors: Vec<String> = smith_normal_form(&a).factors.iter().map(|f| f.to_string()).collect();
        return Err(Error::NotPerfect {
            det: det.to_string(),
            factors: format!("({})", factors.join(", ")),
        });
    }
    Ok(a)
}

/// Pads `p` and the matrix presentation of `Aᵀ` until an occurrence ordering
/// of the padded `p` reads off the trivializable presentation letter for
/// letter.
pub fn align(p: &Presentation) -> Result<KnotCertificate> {
    let a = require_perfect_balanced(p)?;
    let n = p.generator_count();
    let built = presentation_from_matrix_named(&a.transpose(), DUAL_PREFIX)?;
    let mut trivialization = built.certificate;
    let dual = built.presentation;

    let source_raw = RawPresentation::from(p);
    let mut dual_raw: Vec<Vec<Letter>> = dual.relators().iter().map(|r| r.letters().to_vec()).collect();
    let mut insertions = Vec::new();

    for i in 0..n {
        for j in 0..n {
            let (p_plus, _) = count_letters(&source_raw.relators()[j], i);
            let (q_plus, _) = count_letters(&dual_raw[i], j);
            if p_plus < q_plus {
                insertions.push(PairInsertion {
                    relator: j,
                    generator: i,
                    count: q_plus - p_plus,
                    position: source_raw.relators()[j].len(),
                });
            } else if p_plus > q_plus {
                for _ in q_plus..p_plus {
                    trivialization.push(AcMove::InsertPair {
                        relator: i,
                        position: dual.relators()[i].len(),
                        generator: j,
                        inverse_first: false,
                    })?;
                    dual_raw[i].extend([Letter::pos(j), Letter::neg(j)]);
                }
            }
        }
    }
    // insertion points were taken against the unpadded relators; appending
    // in order keeps each pair at the end of its relator
    insertions.sort_by_key(|ins| (ins.relator, ins.generator));
    let mut augmented = source_raw.clone();
    let mut placed = Vec::with_capacity(insertions.len());
    for ins in insertions {
        let ins = PairInsertion {
            position: augmented.relators()[ins.relator].len(),
            ..ins
        };
        augmented = insert_pairs(&augmented, &[ins])?;
        placed.push(ins);
    }

    let witness = OrderingWitness(
        (0..n)
            .into_par_iter()
            .map(|i| match_occurrences(&augmented, &dual_raw[i], i))
            .collect::<Result<Vec<_>>>()?,
    );

    let cert = KnotCertificate {
        source: p.clone(),
        augmented,
        witness,
        dual,
        trivialization,
        source_insertions: placed,
    };
    cert.verify()?;
    Ok(cert)
}

/// Witness line for generator `gen`: each letter `alpha_j^±` of `dual_raw`
/// takes the next unused occurrence of `a_gen^±` in relator `j`.
fn match_occurrences(augmented: &RawPresentation, dual_raw: &[Letter], gen: usize) -> Result<Vec<Occurrence>> {
    let n = augmented.relator_count();
    // per (relator, sign): occurrences in scan order, consumed front to back
    let mut queues: Vec<[std::collections::VecDeque<usize>; 2]> = vec![Default::default(); n];
    for (j, r) in augmented.relators().iter().enumerate() {
        for (pos, l) in r.iter().enumerate() {
            if l.gen() == gen {
                queues[j][usize::from(l.is_inverse())].push_back(pos);
            }
        }
    }
    let mut out = Vec::with_capacity(dual_raw.len());
    for l in dual_raw {
        let j = l.gen();
        let pos = queues[j][usize::from(l.is_inverse())].pop_front().ok_or_else(|| {
            Error::BadWitness(format!(
                "relator {} has too few occurrences of generator {}",
                j + 1,
                gen + 1
            ))
        })?;
        out.push(Occurrence {
            relator: j,
            position: pos,
            inverse: l.is_inverse(),
        });
    }
    if queues.iter().flatten().any(|q| !q.is_empty()) {
        return Err(Error::BadWitness(format!(
            "occurrences of generator {} left unmatched",
            gen + 1
        )));
    }
    Ok(out)
}

impl KnotCertificate {
    /// Re-checks every invariant of the bundle from scratch.
    pub fn verify(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::BadWitness(msg.to_string()));
        require_perfect_balanced(&self.source)?;
        if self.augmented.reduced() != self.source {
            return fail("augmented presentation does not reduce to the source");
        }
        if exponent_matrix::<BigInt>(&self.augmented.reduced()) != exponent_matrix::<BigInt>(&self.source) {
            return fail("augmentation changed the exponent matrix");
        }
        if dualize(&self.augmented, &self.witness)? != self.dual {
            return fail("dual of the augmented presentation differs from the aligned dual");
        }
        if self.trivialization.start != Presentation::empty() || self.trivialization.end != self.dual {
            return fail("trivialization does not run from the empty presentation to the dual");
        }
        self.trivialization
            .replay()
            .map_err(|f| Error::BadWitness(format!("trivialization does not replay: {f}")))
    }

    pub fn write_bundle(&self, dir: &Path) -> std::io::Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("source.pres"), format!("{}\n", self.source))?;
        fs::write(dir.join("augmented.pres"), format!("{}\n", self.augmented))?;
        fs::write(dir.join("witness.txt"), self.witness.to_text())?;
        fs::write(dir.join("dual.pres"), format!("{}\n", self.dual))?;
        fs::write(dir.join("trivialization.cert"), self.trivialization.to_text())?;
        Ok(())
    }

    /// Reads a bundle back and verifies it.
    pub fn read_bundle(dir: &Path) -> Result<KnotCertificate> {
        let read = |name: &str| {
            fs::read_to_string(dir.join(name)).map_err(|e| Error::BadWitness(format!("{name}: {e}")))
        };
        let source = Presentation::parse(&read("source.pres")?)?;
        let augmented = RawPresentation::parse(&read("augmented.pres")?)?;
        let witness = OrderingWitness::parse(&read("witness.txt")?, augmented.generator_count())?;
        let dual = Presentation::parse(&read("dual.pres")?)?;
        let trivialization = AcCertificate::parse(&read("trivialization.cert")?)?;
        let cert = KnotCertificate {
            source,
            augmented,
            witness,
            dual,
            trivialization,
            source_insertions: Vec::new(),
        };
        cert.verify()?;
        Ok(cert)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    
    const POINCARE: &str = "< a, b | a b^2 a b^-1, a^4 b a^-1 b >";
    const RAPAPORT: &str = "< a, b, c | b^-1 c^-2 b c^3, c^-1 a^-2 c a^3, a^-1 b^-2 a b^3 >";

    fn raw(s: &str) -> RawPresentation {
        RawPresentation::parse(s).unwrap()
    }

    fn occ(relator: usize, position: usize, inverse: bool) -> Occurrence {
        Occurrence {
            relator,
            position,
            inverse,
        }
    }

    #[test]
    fn default_witness_examples() {
        let w = default_witness(&raw("< a | a >")).unwrap();
        assert_eq!(w.0, vec![vec![occ(0, 0, false)]]);

        let w = default_witness(&raw(POINCARE)).unwrap();
        assert_eq!(
            w.generator(0),
            &[
                occ(0, 0, false),
                occ(0, 3, false),
                occ(1, 0, false),
                occ(1, 1, false),
                occ(1, 2, false),
                occ(1, 3, false),
                occ(1, 5, true),
            ]
        );

        let w = default_witness(&raw(RAPAPORT)).unwrap();
        let signs: Vec<(usize, bool)> = w.generator(0).iter().map(|o| (o.relator, o.inverse)).collect();
        assert_eq!(
            signs,
            vec![(1, true), (1, true), (1, false), (1, false), (1, false), (2, true), (2, false)]
        );
        assert!(default_witness(&raw("< a, b | a >")).is_err());
    }

    #[test]
    fn dual_of_two_generator_example() {
        let d = default_dual(&Presentation::parse(POINCARE).unwrap()).unwrap();
        assert_eq!(d.to_string(), "< alpha1, alpha2 | alpha1^2 alpha2^3, alpha1 alpha2^2 >");
    }

    #[test]
    fn dual_of_three_generator_example_is_single_letters() {
        let d = default_dual(&Presentation::parse(RAPAPORT).unwrap()).unwrap();
        assert_eq!(d.to_string(), "< alpha1, alpha2, alpha3 | alpha2, alpha3, alpha1 >");
    }

    #[test]
    fn trivial_dual() {
        let d = default_dual(&Presentation::parse("< a | a >").unwrap()).unwrap();
        assert_eq!(d.to_string(), "< alpha1 | alpha1 >");
    }

    #[test]
    fn transpose_examples() {
        assert!(transpose_check(&Presentation::parse(POINCARE).unwrap()));
        assert!(transpose_check(&Presentation::parse("< a | a >").unwrap()));
        assert!(!transpose_check(&Presentation::parse("< a | >").unwrap()));
    }

    #[test]
    fn witness_validation() {
        let p = raw(POINCARE);
        let mut w = default_witness(&p).unwrap();
        w.0[0].swap(0, 6);
        assert!(dualize(&p, &w).is_ok());
        let mut dup = default_witness(&p).unwrap();
        dup.0[0][1] = dup.0[0][0];
        assert!(dualize(&p, &dup).is_err());
        let mut wrong_sign = default_witness(&p).unwrap();
        wrong_sign.0[0][0].inverse = true;
        assert!(dualize(&p, &wrong_sign).is_err());
        let mut missing = default_witness(&p).unwrap();
        missing.0[1].pop();
        assert!(dualize(&p, &missing).is_err());
    }

    #[test]
    fn pair_insertion() {
        let p = raw("< a | a >");
        assert_eq!(insert_pairs(&p, &[]).unwrap(), p);
        let q = insert_pairs(
            &p,
            &[PairInsertion {
                relator: 0,
                generator: 0,
                count: 1,
                position: 1,
            }],
        )
        .unwrap();
        assert_eq!(q.relators()[0], vec![Letter::pos(0), Letter::pos(0), Letter::neg(0)]);
        assert_eq!(
            exponent_matrix::<i64>(&q.reduced()),
            exponent_matrix::<i64>(&p.reduced())
        );
        assert!(insert_pairs(
            &p,
            &[PairInsertion {
                relator: 0,
                generator: 0,
                count: 1,
                position: 2
            }]
        )
        .is_err());
    }

    #[test]
    fn align_single_generator() {
        let cert = align(&Presentation::parse("< a | a >").unwrap()).unwrap();
        assert_eq!(cert.dual.to_string(), "< alpha1 | alpha1 >");
        assert!(cert.source_insertions.is_empty());
        assert_eq!(cert.trivialization.moves.len(), 1);
        let inv = cert.trivialization.invert().unwrap();
        assert_eq!(
            inv.moves,
            vec![AcMove::Destabilize {
                generator: 0,
                relator: 0
            }]
        );
    }

    #[test]
    fn align_examples_verify() {
        for text in [POINCARE, RAPAPORT] {
            let cert = align(&Presentation::parse(text).unwrap()).unwrap();
            cert.verify().unwrap();
            let back = cert.trivialization.invert().unwrap();
            assert_eq!(back.end, Presentation::empty());
            assert!(back.verify());
        }
    }

    #[test]
    fn align_rejects_bad_input() {
        assert!(matches!(
            align(&Presentation::parse("< a, b | a >").unwrap()),
            Err(Error::NotBalanced { .. })
        ));
        assert!(matches!(
            align(&Presentation::parse("< a | a^2 >").unwrap()),
            Err(Error::NotPerfect { .. })
        ));
    }

    #[test]
    fn witness_text_round_trip() {
        let w = default_witness(&raw(POINCARE)).unwrap();
        assert!(w.to_text().starts_with("1:0:+ 1:3:+ 2:0:+"));
        assert_eq!(OrderingWitness::parse(&w.to_text(), 2).unwrap(), w);
        assert!(OrderingWitness::parse("1:0:*\n", 1).is_err());
        assert!(OrderingWitness::parse("1:0:+\n", 2).is_err());
    }

    #[test]
    fn bundle_round_trip() {
        let cert = align(&Presentation::parse(POINCARE).unwrap()).unwrap();
        let dir = std::env::temp_dir().join(format!("knotpres-bundle-{}", std::process::id()));
        cert.write_bundle(&dir).unwrap();
        let back = KnotCertificate::read_bundle(&dir).unwrap();
        assert_eq!(back.dual, cert.dual);
        assert_eq!(back.witness, cert.witness);
        fs::write(dir.join("dual.pres"), "< alpha1, alpha2 | alpha1, alpha2 >\n").unwrap();
        assert!(KnotCertificate::read_bundle(&dir).is_err());
        fs::remove_dir_all(&dir).unwrap();
    }
}
