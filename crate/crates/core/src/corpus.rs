//! Worked example presentations with machine-checkable expectations.

use std::fmt;

use num_bigint::BigInt;

use crate::abelian::{exponent_matrix, is_perfect_presentation, IntMatrix};
use crate::coset::{enumerate, Enumeration};
use crate::dual::{align, default_dual, transpose_check};
use crate::moves::AcMove;
use crate::presentation::{numbered_names, Presentation};
use crate::quotient::{find_nontrivial_quotient, QuotientSearch};
use crate::search::{search_trivialization, SearchLimits, SearchOutcome};
use crate::word::{Letter, Word};

/// Search depth of the two-generator dual's trivialization, pinned.
pub const TWO_GENERATOR_DUAL_DEPTH: usize = 5;
/// Move count of that trivialization, pinned.
pub const TWO_GENERATOR_DUAL_MOVES: usize = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderExpectation {
    Finite(usize),
    /// Order 1, or the enumeration gives up.
    TrivialOrInconclusive,
    /// The group is infinite, so the enumeration must give up.
    CapExceeded,
    Unchecked,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchExpectation {
    /// A certificate at exactly this search depth; `destabilizations_only`
    /// also pins its move kinds.
    Certificate { depth: usize, destabilizations_only: bool },
    NotFound,
    Unchecked,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuotientExpectation {
    ImageOrder { degree: usize, order: usize },
    /// No nontrivial permutation image up to this degree.
    Exhausted { degree: usize },
    Unchecked,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expectations {
    pub balanced: bool,
    pub perfect: bool,
    pub matrix: Option<Vec<Vec<i64>>>,
    pub order: OrderExpectation,
    /// Default-witness dual, printed.
    pub dual: Option<String>,
    pub theorem3: bool,
    pub search: SearchExpectation,
    pub quotient: QuotientExpectation,
}

impl Expectations {
    fn basic(balanced: bool, perfect: bool) -> Self {
        Expectations {
            balanced,
            perfect,
            matrix: None,
            order: OrderExpectation::Unchecked,
            dual: None,
            theorem3: false,
            search: SearchExpectation::Unchecked,
            quotient: QuotientExpectation::Unchecked,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: String,
    pub presentation: Presentation,
    pub expect: Expectations,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyVariant {
    /// `r_i = a_i⁻¹ a_{i+1}⁻¹ a_i a_{i+1}²`.
    OneTwo,
    /// `r_i = a_i⁻¹ a_{i+1}⁻² a_i a_{i+1}³`.
    TwoThree,
}

impl FamilyVariant {
    fn exponents(self) -> (i64, i64) {
        match self {
            FamilyVariant::OneTwo => (1, 2),
            FamilyVariant::TwoThree => (2, 3),
        }
    }
}

/// Cyclic family on `a1 … am`, indices taken mod `m`.
pub fn higman_family(m: usize, variant: FamilyVariant) -> Presentation {
    let (p, q) = variant.exponents();
    let relators = (0..m)
        .map(|i| {
            let j = (i + 1) % m;
            let mut w = Word::letter(Letter::neg(i));
            w = w.concat(&Word::power(j, -p));
            w = w.concat(&Word::letter(Letter::pos(i)));
            w.concat(&Word::power(j, q))
        })
        .collect();
    Presentation::new(numbered_names("a", m), relators).expect("family relators use declared generators")
}

fn shift_matrix(m: usize) -> Vec<Vec<i64>> {
    (0..m)
        .map(|i| (0..m).map(|j| i64::from(j == (i + 1) % m)).collect())
        .collect()
}

fn entry(name: &str, text: &str, expect: Expectations) -> CorpusEntry {
    CorpusEntry {
        name: name.to_string(),
        presentation: Presentation::parse(text).expect("corpus presentations parse"),
        expect,
    }
}

pub fn family_entry(m: usize, variant: FamilyVariant) -> CorpusEntry {
    let tag = match variant {
        FamilyVariant::OneTwo => "12",
        FamilyVariant::TwoThree => "23",
    };
    CorpusEntry {
        name: format!("higman-{tag}-m{m}"),
        presentation: higman_family(m, variant),
        expect: Expectations {
            matrix: Some(shift_matrix(m)),
            order: OrderExpectation::CapExceeded,
            theorem3: true,
            ..Expectations::basic(true, true)
        },
    }
}

pub fn default_corpus() -> Vec<CorpusEntry> {
    let mut out = vec![
        entry(
            "rapaport",
            "< a, b, c | b^-1 c^-2 b c^3, c^-1 a^-2 c a^3, a^-1 b^-2 a b^3 >",
            Expectations {
                matrix: Some(vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]),
                dual: Some("< alpha1, alpha2, alpha3 | alpha2, alpha3, alpha1 >".into()),
                theorem3: true,
                ..Expectations::basic(true, true)
            },
        ),
        entry(
            "rapaport-dual",
            "< alpha, beta, gamma | alpha^3 alpha^-2, beta^3 beta^-2, gamma^3 gamma^-2 >",
            Expectations {
                matrix: Some(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]),
                order: OrderExpectation::Finite(1),
                theorem3: true,
                search: SearchExpectation::Certificate {
                    depth: 3,
                    destabilizations_only: true,
                },
                ..Expectations::basic(true, true)
            },
        ),
        entry(
            "poincare",
            "< a, b | a b^2 a b^-1, a^4 b a^-1 b >",
            Expectations {
                matrix: Some(vec![vec![2, 1], vec![3, 2]]),
                order: OrderExpectation::Finite(120),
                dual: Some("< alpha1, alpha2 | alpha1^2 alpha2^3, alpha1 alpha2^2 >".into()),
                theorem3: true,
                quotient: QuotientExpectation::ImageOrder { degree: 5, order: 60 },
                ..Expectations::basic(true, true)
            },
        ),
        entry(
            "poincare-dual",
            "< alpha, beta | alpha^2 beta^3, alpha^-1 beta^-2 >",
            Expectations {
                matrix: Some(vec![vec![2, 3], vec![-1, -2]]),
                order: OrderExpectation::Finite(1),
                theorem3: true,
                search: SearchExpectation::Certificate {
                    depth: TWO_GENERATOR_DUAL_DEPTH,
                    destabilizations_only: false,
                },
                quotient: QuotientExpectation::Exhausted { degree: 5 },
                ..Expectations::basic(true, true)
            },
        ),
        entry(
            "ac-candidate",
            "< a, b | a^-1 b^-2 a b^3, b^-1 a^-2 b a^3 >",
            Expectations {
                matrix: Some(vec![vec![0, 1], vec![1, 0]]),
                order: OrderExpectation::TrivialOrInconclusive,
                theorem3: true,
                search: SearchExpectation::NotFound,
                quotient: QuotientExpectation::Exhausted { degree: 5 },
                ..Expectations::basic(true, true)
            },
        ),
        entry(
            "trivial-one",
            "< a | a >",
            Expectations {
                matrix: Some(vec![vec![1]]),
                order: OrderExpectation::Finite(1),
                dual: Some("< alpha1 | alpha1 >".into()),
                theorem3: true,
                search: SearchExpectation::Certificate {
                    depth: 1,
                    destabilizations_only: true,
                },
                ..Expectations::basic(true, true)
            },
        ),
        entry("free-cyclic", "< a | >", Expectations::basic(false, false)),
        entry("free-commutative", "< a, b | a b >", Expectations::basic(false, false)),
        entry(
            "cyclic-five",
            "< a | a^5 >",
            Expectations {
                matrix: Some(vec![vec![5]]),
                order: OrderExpectation::Finite(5),
                quotient: QuotientExpectation::ImageOrder { degree: 5, order: 5 },
                ..Expectations::basic(true, false)
            },
        ),
    ];
    for variant in [FamilyVariant::OneTwo, FamilyVariant::TwoThree] {
        for m in 4..=6 {
            out.push(family_entry(m, variant));
        }
    }
    out
}

#[derive(Clone, Copy, Debug)]
pub struct CorpusOptions {
    pub max_cosets: usize,
    pub limits: SearchLimits,
}

impl Default for CorpusOptions {
    fn default() -> Self {
        CorpusOptions {
            max_cosets: 10_000,
            limits: SearchLimits::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub entry: String,
    pub check: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "ok" } else { "FAIL" };
        write!(f, "{verdict:<4} {:<18} {:<10} {}", self.entry, self.check, self.detail)
    }
}

/// Runs every stated expectation of `e`; unchecked ones are skipped.
pub fn check_entry(e: &CorpusEntry, opts: &CorpusOptions) -> Vec<CheckResult> {
    let p = &e.presentation;
    let x = &e.expect;
    let mut out = Vec::new();
    let mut record = |check: &'static str, passed: bool, detail: String| {
        out.push(CheckResult {
            entry: e.name.clone(),
            check,
            passed,
            detail,
        })
    };

    record("balanced", p.is_balanced() == x.balanced, format!("balanced {}", p.is_balanced()));
    let perfect = is_perfect_presentation(p);
    record("perfect", perfect == x.perfect, format!("perfect {perfect}"));
    if let Some(rows) = &x.matrix {
        let a = exponent_matrix::<BigInt>(p);
        let want = IntMatrix::<BigInt>::from_rows(
            rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect(),
        );
        let ok = want.as_ref().is_ok_and(|w| *w == a);
        let rows: Vec<String> = a
            .to_rows()
            .iter()
            .map(|r| format!("[{}]", r.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        record("matrix", ok, format!("[{}]", rows.join(",")));
    }
    if p.is_balanced() {
        record("transpose", transpose_check(p), String::new());
    }
    if let Some(want) = &x.dual {
        match default_dual(p) {
            Ok(d) => record("dual", d.to_string() == *want, d.to_string()),
            Err(err) => record("dual", false, err.to_string()),
        }
    }
    if x.order != OrderExpectation::Unchecked {
        let result = enumerate(p, opts.max_cosets);
        let ok = match (x.order, &result) {
            (OrderExpectation::Finite(k), Enumeration::Finite { order, .. }) => *order == k,
            (OrderExpectation::TrivialOrInconclusive, Enumeration::Finite { order, .. }) => *order == 1,
            (OrderExpectation::TrivialOrInconclusive, Enumeration::CapExceeded { .. }) => true,
            (OrderExpectation::CapExceeded, Enumeration::CapExceeded { .. }) => true,
            _ => false,
        };
        record("order", ok, result.to_string());
    }
    if x.theorem3 {
        match align(p) {
            Ok(cert) => {
                let dual_order = enumerate(&cert.dual, opts.max_cosets);
                let ok = cert.verify().is_ok() && matches!(dual_order, Enumeration::Finite { order: 1, .. } | Enumeration::CapExceeded { .. });
                record(
                    "theorem3",
                    ok,
                    format!("dual letters {} moves {} dual {dual_order}", cert.dual.total_length(), cert.trivialization.moves.len()),
                );
            }
            Err(err) => record("theorem3", false, err.to_string()),
        }
    }
    if x.search != SearchExpectation::Unchecked {
        match search_trivialization(p, &opts.limits) {
            Ok(SearchOutcome::Found {
                certificate,
                depth,
                stats,
            }) => {
                let ok = match x.search {
                    SearchExpectation::Certificate {
                        depth: want,
                        destabilizations_only,
                    } => {
                        depth == want
                            && certificate.verify()
                            && certificate.end == Presentation::empty()
                            && (!destabilizations_only
                                || certificate.moves.iter().all(|m| matches!(m, AcMove::Destabilize { .. })))
                    }
                    _ => false,
                };
                record("acsearch", ok, format!("FOUND depth {depth} moves {} {stats}", certificate.moves.len()));
            }
            Ok(SearchOutcome::NotFound { reason, stats }) => record(
                "acsearch",
                x.search == SearchExpectation::NotFound,
                format!("NOT-FOUND {reason:?} {stats}"),
            ),
            Err(err) => record("acsearch", false, err.to_string()),
        }
    }
    let degree = match x.quotient {
        QuotientExpectation::ImageOrder { degree, .. } | QuotientExpectation::Exhausted { degree } => Some(degree),
        QuotientExpectation::Unchecked => None,
    };
    if let Some(degree) = degree {
        let result = find_nontrivial_quotient(p, degree);
        let (ok, detail) = match (&result, x.quotient) {
            (QuotientSearch::Found(w), QuotientExpectation::ImageOrder { order, .. }) => {
                (w.verify(p) && w.image_order == order, format!("image order {}", w.image_order))
            }
            (QuotientSearch::Exhausted { .. }, QuotientExpectation::Exhausted { .. }) => (true, format!("EXHAUSTED {degree}")),
            (QuotientSearch::Found(w), _) => (false, format!("image order {}", w.image_order)),
            (QuotientSearch::Exhausted { .. }, _) => (false, format!("EXHAUSTED {degree}")),
        };
        record("quotient", ok, detail);
    }
    out
}
