use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use num_bigint::BigInt;
use serde_json::{json, Value};

use knotpres::abelian::{abelian_invariants, determinant, exponent_matrix, smith_normal_form};
use knotpres::corpus::{self, CorpusOptions, FamilyVariant};
use knotpres::coset::{self, Enumeration};
use knotpres::dual::{self, OrderingWitness};
use knotpres::lemma2::presentation_from_matrix;
use knotpres::quotient::{find_nontrivial_quotient, QuotientSearch};
use knotpres::search::{search_trivialization, SearchOutcome, StopReason};
use knotpres::{AcCertificate, AcMove, KnotCertificate, Matrix, Presentation, RawPresentation};

use crate::{Command, Family};

/// What a subcommand prints, in both output formats.
pub struct Report {
    pub verdict: String,
    /// Exit status 0 when set, 1 otherwise.
    pub positive: bool,
    pub text: String,
    pub data: Value,
}

impl Report {
    fn new(verdict: impl Into<String>, positive: bool, text: String, data: Value) -> Self {
        Report {
            verdict: verdict.into(),
            positive,
            text,
            data,
        }
    }
}

/// Contents of `arg` if it names a file, else `arg` itself.
fn read_input(arg: &str) -> Result<String> {
    let path = Path::new(arg);
    if path.is_file() {
        fs::read_to_string(path).with_context(|| format!("reading {arg}"))
    } else {
        Ok(arg.to_string())
    }
}

fn load_presentation(arg: &str) -> Result<Presentation> {
    Ok(Presentation::parse(&read_input(arg)?)?)
}

fn load_matrix(arg: &str) -> Result<Matrix> {
    Ok(Matrix::parse(&read_input(arg)?)?)
}

fn matrix_rows(a: &Matrix) -> Value {
    Value::Array(
        (0..a.rows())
            .map(|i| Value::Array(a.row(i).iter().map(|v| Value::String(v.to_string())).collect()))
            .collect(),
    )
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

pub fn run(command: Command) -> Result<Report> {
    match command {
        Command::Parse(a) => parse(&a.presentation),
        Command::Balanced(a) => balanced(&a.presentation),
        Command::Matrix(a) => matrix(&a.presentation),
        Command::Snf { input, matrix } => snf(&input, matrix),
        Command::Perfect(a) => perfect(&a.presentation),
        Command::Lemma2 { matrix, output } => lemma2(&matrix, output.as_deref()),
        Command::Dualize {
            presentation,
            witness,
        } => dualize(&presentation, witness.as_deref()),
        Command::Theorem3 {
            presentation,
            output,
            max_cosets,
        } => theorem3(&presentation, output.as_deref(), max_cosets),
        Command::Order {
            presentation,
            max_cosets,
            table,
        } => order(&presentation, max_cosets, table),
        Command::Quotient {
            presentation,
            max_degree,
        } => quotient(&presentation, max_degree),
        Command::Acsearch {
            presentation,
            limits,
            output,
        } => acsearch(&presentation, limits.limits(), output),
        Command::VerifyCert { path } => verify_cert(&path),
        Command::Corpus {
            family,
            m,
            max_cosets,
            limits,
        } => run_corpus(family, m, CorpusOptions {
            max_cosets,
            limits: limits.limits(),
        }),
    }
}

fn parse(arg: &str) -> Result<Report> {
    let p = load_presentation(arg)?;
    let data = json!({
        "presentation": p.to_string(),
        "generators": p.names(),
        "relators": p.relators().iter().map(|r| p.render_word(r)).collect::<Vec<_>>(),
        "total_length": p.total_length(),
    });
    Ok(Report::new("OK", true, format!("{p}\n"), data))
}

fn balanced(arg: &str) -> Result<Report> {
    let p = load_presentation(arg)?;
    let b = p.is_balanced();
    let data = json!({
        "balanced": b,
        "generators": p.generator_count(),
        "relators": p.relator_count(),
    });
    Ok(Report::new(format!("BALANCED {b}"), b, format!("BALANCED {b}\n"), data))
}

fn matrix(arg: &str) -> Result<Report> {
    let p = load_presentation(arg)?;
    let a = exponent_matrix::<BigInt>(&p);
    let data = json!({ "rows": a.rows(), "cols": a.cols(), "matrix": matrix_rows(&a) });
    Ok(Report::new("MATRIX", true, a.to_text(), data))
}

fn snf(arg: &str, is_matrix: bool) -> Result<Report> {
    let a = if is_matrix {
        load_matrix(arg)?
    } else {
        exponent_matrix::<BigInt>(&load_presentation(arg)?)
    };
    let s = smith_normal_form(&a);
    let factors: Vec<String> = s.factors.iter().map(|f| f.to_string()).collect();
    let group = abelian_invariants(&a).to_string();
    let text = format!("FACTORS {}\nGROUP {group}\n", factors.join(" "));
    let data = json!({ "factors": factors, "group": group });
    Ok(Report::new("SNF", true, text, data))
}

fn perfect(arg: &str) -> Result<Report> {
    let p = load_presentation(arg)?;
    let a = exponent_matrix::<BigInt>(&p);
    let group = abelian_invariants(&a).to_string();
    let perfect = group == "0";
    let mut text = format!("PERFECT {perfect}\nGROUP {group}\n");
    let mut data = json!({ "perfect": perfect, "group": group });
    if p.is_balanced() {
        let det = determinant(&a)?;
        text.push_str(&format!("DET {det}\n"));
        data["det"] = Value::String(det.to_string());
    }
    Ok(Report::new(format!("PERFECT {perfect}"), perfect, text, data))
}

fn lemma2(arg: &str, output: Option<&Path>) -> Result<Report> {
    let a = load_matrix(arg)?;
    let built = presentation_from_matrix(&a)?;
    let p = &built.presentation;
    if let Some(dir) = output {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        write_file(&dir.join("presentation.pres"), &format!("{p}\n"))?;
        write_file(&dir.join("certificate.cert"), &built.certificate.to_text())?;
    }
    let text = format!("{p}\nMOVES {}\n", built.certificate.moves.len());
    let data = json!({
        "presentation": p.to_string(),
        "total_letters": built.total_letters(),
        "moves": built.certificate.moves.len(),
    });
    Ok(Report::new("PRESENTATION", true, text, data))
}

fn dualize(arg: &str, witness: Option<&Path>) -> Result<Report> {
    let raw = RawPresentation::parse(&read_input(arg)?)?;
    let w = match witness {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            OrderingWitness::parse(&text, raw.generator_count())?
        }
        None => dual::default_witness(&raw)?,
    };
    let d = dual::dualize(&raw, &w)?;
    let data = json!({
        "dual": d.to_string(),
        "relators": d.relators().iter().map(|r| d.render_word(r)).collect::<Vec<_>>(),
    });
    Ok(Report::new("DUAL", true, format!("{d}\n"), data))
}

fn theorem3(arg: &str, output: Option<&Path>, max_cosets: usize) -> Result<Report> {
    let p = load_presentation(arg)?;
    let cert = dual::align(&p)?;
    let verified = cert.verify().is_ok();
    let enumeration = coset::enumerate(&cert.dual, max_cosets);
    let trivial = enumeration.order() == Some(1);
    if let Some(dir) = output {
        cert.write_bundle(dir).with_context(|| format!("writing bundle to {}", dir.display()))?;
    }
    let stabs = cert.trivialization.count(|m| matches!(m, AcMove::Stabilize { .. }));
    let text = format!(
        "SOURCE {}\nAUGMENTED {}\nDUAL {}\nMOVES {} STABILIZATIONS {stabs}\nVERIFIED {verified}\nDUAL-{enumeration}\n",
        cert.source,
        cert.augmented,
        cert.dual,
        cert.trivialization.moves.len(),
    );
    let data = json!({
        "source": cert.source.to_string(),
        "augmented": cert.augmented.to_string(),
        "dual": cert.dual.to_string(),
        "moves": cert.trivialization.moves.len(),
        "stabilizations": stabs,
        "verified": verified,
        "dual_order": enumeration.order(),
    });
    let verdict = if verified { "CERTIFIED" } else { "FAILED" };
    Ok(Report::new(verdict, verified && trivial, text, data))
}

fn order(arg: &str, max_cosets: usize, table: bool) -> Result<Report> {
    let p = load_presentation(arg)?;
    let e = coset::enumerate(&p, max_cosets);
    let mut text = format!("{e}\n");
    let mut data = json!({ "order": e.order(), "max_cosets": max_cosets });
    if let (true, Enumeration::Finite { table: t, .. }) = (table, &e) {
        text.push_str(&t.to_text(&p));
        data["table"] = json!(t.permutations());
    }
    let positive = e.order().is_some();
    Ok(Report::new(e.to_string(), positive, text, data))
}

fn quotient(arg: &str, max_degree: usize) -> Result<Report> {
    let p = load_presentation(arg)?;
    match find_nontrivial_quotient(&p, max_degree) {
        QuotientSearch::Found(w) => {
            if !w.verify(&p) {
                bail!("quotient witness failed re-verification");
            }
            let data = json!({
                "degree": w.degree,
                "image_order": w.image_order,
                "images": w.images.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            });
            let verdict = format!("QUOTIENT {} {}", w.degree, w.image_order);
            Ok(Report::new(verdict, true, w.to_text(&p), data))
        }
        QuotientSearch::Exhausted { max_degree } => {
            let text = format!(
                "EXHAUSTED {max_degree}\nno nontrivial permutation image up to degree {max_degree}; triviality is not decided\n"
            );
            let data = json!({ "max_degree": max_degree });
            Ok(Report::new(format!("EXHAUSTED {max_degree}"), false, text, data))
        }
    }
}

fn acsearch(arg: &str, limits: knotpres::search::SearchLimits, output: Option<PathBuf>) -> Result<Report> {
    let p = load_presentation(arg)?;
    let outcome = search_trivialization(&p, &limits)?;
    let stats = *outcome.stats();
    let stats_json = json!({
        "visited": stats.visited,
        "expanded": stats.expanded,
        "depth_reached": stats.depth_reached,
        "pruned": stats.pruned,
    });
    match outcome {
        SearchOutcome::Found {
            certificate, depth, ..
        } => {
            if let Some(mut path) = output {
                if path.is_dir() {
                    path.push("acsearch.cert");
                }
                write_file(&path, &certificate.to_text())?;
            }
            let text = format!(
                "FOUND depth {depth} moves {}\n{stats}\n{}",
                certificate.moves.len(),
                certificate.to_text()
            );
            let data = json!({
                "depth": depth,
                "moves": certificate.moves.len(),
                "certificate": certificate.to_text(),
                "stats": stats_json,
            });
            Ok(Report::new("FOUND", true, text, data))
        }
        SearchOutcome::NotFound { reason, .. } => {
            let reason = match reason {
                StopReason::Exhausted => "exhausted",
                StopReason::DepthLimit => "depth-limit",
                StopReason::StateLimit => "state-limit",
            };
            let text = format!("NOT-FOUND {reason}\n{stats}\n");
            let data = json!({ "reason": reason, "stats": stats_json });
            Ok(Report::new("NOT-FOUND", false, text, data))
        }
    }
}

fn verify_cert(path: &Path) -> Result<Report> {
    if path.is_dir() {
        return Ok(match KnotCertificate::read_bundle(path) {
            Ok(cert) => {
                let text = format!("OK\nDUAL {}\n", cert.dual);
                Report::new("OK", true, text, json!({ "kind": "bundle", "dual": cert.dual.to_string() }))
            }
            Err(e) => Report::new("FAILED", false, format!("FAILED {e}\n"), json!({ "kind": "bundle", "error": e.to_string() })),
        });
    }
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let cert = AcCertificate::parse(&text)?;
    Ok(match cert.replay() {
        Ok(()) => {
            let text = format!("OK\nMOVES {}\nEND {}\n", cert.moves.len(), cert.end);
            let data = json!({ "kind": "certificate", "moves": cert.moves.len(), "end": cert.end.to_string() });
            Report::new("OK", true, text, data)
        }
        Err(f) => Report::new(
            "FAILED",
            false,
            format!("FAILED {f}\n"),
            json!({ "kind": "certificate", "step": f.step, "error": f.reason }),
        ),
    })
}

fn run_corpus(family: Option<Family>, m: Option<usize>, opts: CorpusOptions) -> Result<Report> {
    let entries = match (family, m) {
        (None, _) => corpus::default_corpus(),
        (Some(Family::Higman), Some(m)) => {
            if m < 2 {
                bail!("--m must be at least 2");
            }
            [FamilyVariant::OneTwo, FamilyVariant::TwoThree]
                .into_iter()
                .map(|v| corpus::family_entry(m, v))
                .collect()
        }
        (Some(Family::Higman), None) => [FamilyVariant::OneTwo, FamilyVariant::TwoThree]
            .into_iter()
            .flat_map(|v| (4..=6).map(move |m| corpus::family_entry(m, v)))
            .collect(),
    };
    let mut text = String::new();
    let mut rows = Vec::new();
    let (mut passed, mut total) = (0, 0);
    for e in &entries {
        for r in corpus::check_entry(e, &opts) {
            text.push_str(&format!("{r}\n"));
            total += 1;
            passed += usize::from(r.passed);
            rows.push(json!({ "entry": r.entry, "check": r.check, "passed": r.passed, "detail": r.detail }));
        }
    }
    text.push_str(&format!("CORPUS {passed}/{total}\n"));
    let ok = passed == total;
    let verdict = if ok { "PASS" } else { "FAIL" };
    Ok(Report::new(verdict, ok, text, json!({ "passed": passed, "total": total, "checks": rows })))
}
