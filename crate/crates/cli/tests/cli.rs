use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const RAPAPORT: &str = "< a, b, c | b^-1 c^-2 b c^3, c^-1 a^-2 c a^3, a^-1 b^-2 a b^3 >";
const POINCARE: &str = "< a, b | a b^2 a b^-1, a^4 b a^-1 b >";

fn knotpres(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_knotpres"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn perfect_on_rapaport() {
    let o = knotpres(&["perfect", RAPAPORT]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("PERFECT true\n"));
}

#[test]
fn imperfect_exits_one() {
    let o = knotpres(&["perfect", "< a | a^5 >"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("GROUP Z/5"));
}

#[test]
fn presentation_file_argument() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.pres");
    fs::write(&path, format!("{POINCARE}\n")).unwrap();
    let o = knotpres(&["order", path.to_str().unwrap(), "--max-cosets", "10000"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "ORDER 120\n");
}

#[test]
fn order_cap_exceeded_exits_one() {
    let o = knotpres(&["order", "< a, b | >", "--max-cosets", "50"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("CAP-EXCEEDED"));
}

#[test]
fn order_table_dump() {
    let o = knotpres(&["order", "< a | a^2 >", "--table"]);
    assert_eq!(stdout(&o), "ORDER 2\ncoset a a^-1\n1: 2 2\n2: 1 1\n");
}

#[test]
fn theorem3_bundle_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bundle");
    let o = knotpres(&["theorem3", RAPAPORT, "-o", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    for name in ["source.pres", "augmented.pres", "witness.txt", "dual.pres", "trivialization.cert"] {
        assert!(out.join(name).is_file(), "{name}");
    }
    let cert = knotpres(&["verify-cert", out.join("trivialization.cert").to_str().unwrap()]);
    assert_eq!(code(&cert), 0);
    assert!(stdout(&cert).starts_with("OK\n"));
    let bundle = knotpres(&["verify-cert", out.to_str().unwrap()]);
    assert_eq!(code(&bundle), 0);

    // the dual re-derived from the bundle matches the stored one
    let witness = out.join("witness.txt");
    let d = knotpres(&[
        "dualize",
        out.join("augmented.pres").to_str().unwrap(),
        "--witness",
        witness.to_str().unwrap(),
    ]);
    assert_eq!(stdout(&d), fs::read_to_string(out.join("dual.pres")).unwrap());
}

#[test]
fn tampered_bundle_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path();
    assert_eq!(code(&knotpres(&["theorem3", POINCARE, "-o", out.to_str().unwrap()])), 0);
    fs::write(out.join("dual.pres"), "< alpha1, alpha2 | alpha1, alpha2 >\n").unwrap();
    let o = knotpres(&["verify-cert", out.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("FAILED"));
}

#[test]
fn tampered_certificate_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.cert");
    fs::write(&path, "START < a | a >\nDESTAB 1 1\nEND < a | a >\n").unwrap();
    assert_eq!(code(&knotpres(&["verify-cert", path.to_str().unwrap()])), 1);
}

#[test]
fn theorem3_rejects_imperfect_input() {
    let o = knotpres(&["theorem3", "< a | a^2 >"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("not perfect"));
}

#[test]
fn usage_and_parse_errors_exit_two() {
    assert_eq!(code(&knotpres(&["order"])), 2);
    assert_eq!(code(&knotpres(&["nonsense"])), 2);
    assert_eq!(code(&knotpres(&["parse", "< a | b >"])), 2);
    assert_eq!(code(&knotpres(&["acsearch", "< a, b | a >"])), 2);
}

#[test]
fn matrix_and_snf() {
    assert_eq!(stdout(&knotpres(&["matrix", POINCARE])), "2 2\n2 1\n3 2\n");
    assert_eq!(stdout(&knotpres(&["snf", "< a, b | a^2 b^4, a^4 b^2 >"])), "FACTORS 2 6\nGROUP Z/2 + Z/6\n");
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.txt");
    fs::write(&m, "2 2\n2 0\n0 3\n").unwrap();
    assert_eq!(stdout(&knotpres(&["snf", "--matrix", m.to_str().unwrap()])), "FACTORS 1 6\nGROUP Z/6\n");
}

#[test]
fn lemma2_writes_replayable_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.txt");
    fs::write(&m, "2 2\n2 3\n1 2\n").unwrap();
    let out = dir.path().join("out");
    let o = knotpres(&["lemma2", m.to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let pres = out.join("presentation.pres");
    assert_eq!(stdout(&knotpres(&["matrix", pres.to_str().unwrap()])), "2 2\n2 3\n1 2\n");
    assert_eq!(stdout(&knotpres(&["order", pres.to_str().unwrap()])), "ORDER 1\n");
    assert_eq!(code(&knotpres(&["verify-cert", out.join("certificate.cert").to_str().unwrap()])), 0);
}

#[test]
fn dual_prints_literal_relators() {
    let o = knotpres(&["dualize", POINCARE]);
    assert_eq!(stdout(&o), "< alpha1, alpha2 | alpha1^2 alpha2^3, alpha1 alpha2^2 >\n");
}

#[test]
fn quotient_outcomes() {
    let o = knotpres(&["quotient", POINCARE, "--max-degree", "5"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("QUOTIENT degree 5 order 60\n"));
    let e = knotpres(&["quotient", RAPAPORT, "--max-degree", "4"]);
    assert_eq!(code(&e), 1);
    assert!(stdout(&e).starts_with("EXHAUSTED 4\n"));
}

#[test]
fn acsearch_writes_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let o = knotpres(&["acsearch", "< alpha, beta | alpha^2 beta^3, alpha^-1 beta^-2 >", "-o", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("FOUND depth 5 "));
    let cert = dir.path().join("acsearch.cert");
    assert_eq!(code(&knotpres(&["verify-cert", cert.to_str().unwrap()])), 0);
}

#[test]
fn acsearch_limits_give_not_found() {
    let o = knotpres(&["acsearch", "< a, b | a^-1 b^-2 a b^3, b^-1 a^-2 b a^3 >", "--max-depth", "3"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("NOT-FOUND depth-limit\n"));
}

#[test]
fn json_format() {
    let o = knotpres(&["--format", "json", "order", POINCARE]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "ORDER 120");
    assert_eq!(v["data"]["order"], 120);
    assert!(v["timings"]["total_ms"].is_number());
}

#[test]
fn higman_family_corpus() {
    let o = knotpres(&["corpus", "--family", "higman", "--m", "4"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).lines().last().unwrap().starts_with("CORPUS "));
}

fn deterministic(args: &[&str]) {
    let a = knotpres(args);
    let b = knotpres(args);
    assert_eq!(a.stdout, b.stdout, "{args:?}");
}

#[test]
fn output_is_byte_identical_across_runs() {
    deterministic(&["order", POINCARE, "--table"]);
    deterministic(&["quotient", POINCARE]);
    deterministic(&["dualize", RAPAPORT]);
    deterministic(&["acsearch", "< alpha, beta | alpha^2 beta^3, alpha^-1 beta^-2 >"]);
    let dir = tempfile::tempdir().unwrap();
    let (x, y) = (dir.path().join("x"), dir.path().join("y"));
    knotpres(&["theorem3", POINCARE, "-o", x.to_str().unwrap()]);
    knotpres(&["theorem3", POINCARE, "-o", y.to_str().unwrap()]);
    for name in ["augmented.pres", "witness.txt", "dual.pres", "trivialization.cert"] {
        assert_eq!(read(&x, name), read(&y, name), "{name}");
    }
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    fs::read(dir.join(name)).unwrap()
}
