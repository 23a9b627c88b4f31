//! Acceptance criteria. Every test prints one `PASS` or `FAIL` line for its
//! criterion, even when the test harness captures output.

mod common;

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use fsig::groebner::Ideal;
use fsig::ideals::ideal_equals;
use fsig::newton::monomial_signature;
use fsig::signature::{
    is_f_pure, signature_sequence, splitting_number, splitting_prime_candidate, splitting_ratio, Method, Options,
};
use fsig::systems::FGradedSystem;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn report(id: u32, title: &str, failures: &[String], elapsed: Duration) {
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    let mut line = format!("[acceptance] criterion {id} {status}: {title} ({:.2?})", elapsed);
    if !failures.is_empty() {
        line.push_str(" -- ");
        line.push_str(&failures.join("; "));
    }
    line.push('\n');
    let mut out = std::io::stdout().lock();
    out.write_all(line.as_bytes()).unwrap();
    out.flush().unwrap();
}

fn finish(id: u32, title: &str, failures: Vec<String>, start: Instant) {
    report(id, title, &failures, start.elapsed());
    assert!(failures.is_empty(), "criterion {id} failed: {failures:?}");
}

fn expect(failures: &mut Vec<String>, ok: bool, msg: impl FnOnce() -> String) {
    if !ok {
        failures.push(msg());
    }
}

fn parse_ideal(r: &fsig::Ring, gens: &[&str]) -> Ideal {
    Ideal::new(r, gens.iter().map(|g| r.parse(g).unwrap()).collect()).unwrap()
}

fn fsig_bin(name: &str, problem: &str) -> std::process::Output {
    let dir = std::env::temp_dir().join(format!("fsig-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(format!("{name}.fsig"));
    std::fs::write(&path, problem).unwrap();
    Command::new(env!("CARGO_BIN_EXE_fsig")).arg(&path).output().unwrap()
}

#[test]
fn criterion_1_snc_divisor() {
    let start = Instant::now();
    let mut f = Vec::new();
    let r = ring(3, 2);
    let half = rat(1, 2);
    let sys = FGradedSystem::product(vec![
        FGradedSystem::pair(parse_ideal(&r, &["x"]), half.clone()).unwrap(),
        FGradedSystem::pair(parse_ideal(&r, &["y"]), half.clone()).unwrap(),
    ])
    .unwrap();
    let rep = signature_sequence(&sys, 3, &Options::default()).unwrap();
    let expected = [rat(4, 9), rat(25, 81), rat(196, 729)];
    for (row, s) in rep.rows.iter().zip(&expected) {
        let q = 3u64.pow(row.e);
        let closed_form = BigUint::from((q + 1) / 2).pow(2);
        expect(&mut f, row.a_e == closed_form, || format!("a_{} = {} != {closed_form}", row.e, row.a_e));
        let product = snc_count(3, row.e, &[half.clone(), half.clone()]);
        expect(&mut f, row.a_e == product, || format!("a_{} != product formula {product}", row.e));
        expect(&mut f, &row.s_e == s, || format!("s_{} = {} != {s}", row.e, row.s_e));
    }
    expect(&mut f, rep.rows.len() == 3, || format!("{} rows", rep.rows.len()));
    let gb = splitting_number(&sys, 3, Method::Groebner).unwrap();
    expect(&mut f, gb == BigUint::from(196u32), || format!("groebner a_3 = {gb}"));
    let distance = (&rep.rows[2].s_e - rat(1, 4)).abs();
    expect(&mut f, distance == rat(7, 729), || format!("|s_3 - 1/4| = {distance}, criterion states 7/729"));
    expect(&mut f, start.elapsed() < Duration::from_secs(10), || "runtime over 10 s".into());
    finish(1, "SNC divisor p=3, t=(1/2,1/2): a_e = 4, 25, 196; |s_3 - 1/4| = 7/729", f, start);
}

#[test]
fn criterion_2_monomial_formula() {
    let start = Instant::now();
    let mut f = Vec::new();
    let a = vec![vec![3, 0], vec![0, 2]];
    let cases = [(rat(1, 4), rat(13, 16)), (rat(2, 5), rat(8, 15)), (rat(3, 5), rat(49, 300)), (rat(5, 6), rat(0, 1))];
    for (t, want) in &cases {
        let got = monomial_signature(&a, t).unwrap();
        expect(&mut f, &got == want, || format!("s(t = {t}) = {got}, expected {want}"));
    }
    expect(&mut f, start.elapsed() < Duration::from_secs(1), || "runtime over 1 s".into());
    finish(2, "monomial <x^3, y^2>: 13/16, 8/15, 49/300, 0", f, start);
}

#[test]
fn criterion_3_whitney_umbrella() {
    let start = Instant::now();
    let mut f = Vec::new();
    let r = ring(3, 3);
    let sys = FGradedSystem::quotient(parse_ideal(&r, &["x^2 - y^2*z"])).unwrap();
    let purity = is_f_pure(&sys, 3, Method::Linear).unwrap();
    expect(&mut f, purity.f_pure && purity.witness == Some(1), || format!("purity {purity:?}"));
    let opts = Options::default();
    let rep = signature_sequence(&sys, 3, &opts).unwrap();
    for e in 1..=2 {
        let both = splitting_number(&sys, e, Method::Both);
        expect(&mut f, both.is_ok(), || format!("methods disagree at e = {e}: {both:?}"));
    }
    let cand = splitting_prime_candidate(&sys, 3, &opts).unwrap();
    match &cand.ideal {
        None => f.push(format!("no prime candidate: {:?}", cand.diagnostics)),
        Some(c) => {
            let xy = parse_ideal(&r, &["x", "y"]);
            expect(&mut f, ideal_equals(c, &xy).unwrap(), || format!("candidate {:?}", c.generators()));
            let compat = cand.compatibility.as_ref().unwrap();
            expect(&mut f, compat.compatible && compat.transcript.len() == 3, || format!("{compat:?}"));
            let ratio = splitting_ratio(&sys, &rep.rows, c).unwrap();
            expect(&mut f, ratio.d_prime == 1, || format!("d' = {}", ratio.d_prime));
            let expected = [rat(2, 3), rat(5, 9), rat(14, 27)];
            for ((e, r_e), want) in ratio.rows.iter().zip(&expected) {
                expect(&mut f, r_e == want, || format!("r_{e} = {r_e}, expected {want}"));
                let gap = (r_e - rat(1, 2)).abs();
                let stated = rat(1, 2 * 3i64.pow(*e));
                expect(&mut f, gap == stated, || format!("|r_{e} - 1/2| = {gap}"));
            }
        }
    }
    expect(&mut f, start.elapsed() < Duration::from_secs(300), || "runtime over 5 min".into());
    finish(3, "Whitney umbrella p=3: prime <x,y>, d'=1, r_e = 2/3, 5/9, 14/27", f, start);
}

#[test]
fn criterion_4_cusp_cover() {
    let start = Instant::now();
    let mut f = Vec::new();
    let r = fsig::Ring::new(3, &["a", "b"], fsig::TermOrder::DegRevLex).unwrap();
    let sys = FGradedSystem::pair(parse_ideal(&r, &["a^3 - b^2"]), rat(1, 2)).unwrap();
    let rep = signature_sequence(&sys, 3, &Options::default()).unwrap();
    let sixth = rat(1, 6);
    let mut prev: Option<BigRational> = None;
    for row in &rep.rows {
        let gap = (&row.s_e - &sixth).abs();
        let bound = rat(1, 3i64.pow(row.e - 1));
        expect(&mut f, gap <= bound, || format!("|s_{} - 1/6| = {gap} > {bound}", row.e));
        expect(&mut f, row.s_e >= sixth, || format!("s_{} = {} below the limit", row.e, row.s_e));
        if let Some(p) = &prev {
            expect(&mut f, &row.s_e < p, || format!("s_{} = {} is not below s_{}", row.e, row.s_e, row.e - 1));
        }
        prev = Some(row.s_e.clone());
    }
    expect(&mut f, rep.rows.len() == 3, || "missing rows".into());
    expect(&mut f, start.elapsed() < Duration::from_secs(120), || "runtime over 2 min".into());
    finish(4, "cusp cover p=3, (a^3 - b^2)^(1/2): s_e within 1/3^(e-1) of 1/6, monotone", f, start);
}

const WHITNEY_P2: &str = "p = 2\nvars = x, y, z\nsystem = quotient { J = [x^2 - y^2*z] }\nemax = 3\n";

#[test]
fn criterion_5_non_f_pure_detection() {
    let start = Instant::now();
    let mut f = Vec::new();
    let r = ring(2, 3);
    let sys = FGradedSystem::quotient(parse_ideal(&r, &["x^2 - y^2*z"])).unwrap();
    for e in 1..=3 {
        for m in [Method::Linear, Method::Groebner] {
            let a = splitting_number(&sys, e, m).unwrap();
            expect(&mut f, a.is_zero(), || format!("a_{e} = {a} by {m:?}"));
        }
    }
    let purity = is_f_pure(&sys, 3, Method::Linear).unwrap();
    expect(&mut f, !purity.f_pure && purity.checked_up_to == 3, || format!("{purity:?}"));
    let fpure = fsig_bin("whitney-p2-fpure", &format!("{WHITNEY_P2}mode = fpure\n"));
    let text = String::from_utf8_lossy(&fpure.stdout);
    expect(&mut f, fpure.status.code() == Some(0), || format!("fpure exit {:?}", fpure.status.code()));
    expect(&mut f, text.contains("not F-pure up to e = 3"), || format!("fpure output: {text}"));
    let ratio = fsig_bin("whitney-p2-ratio", &format!("{WHITNEY_P2}mode = ratio\n"));
    expect(&mut f, ratio.status.code() == Some(2), || format!("ratio exit {:?}", ratio.status.code()));
    expect(&mut f, start.elapsed() < Duration::from_secs(60), || "runtime over 1 min".into());
    finish(5, "Whitney p=2: a_e = 0 for e <= 3, fpure false, ratio exits 2", f, start);
}

#[test]
fn criterion_6_regular_baseline() {
    let start = Instant::now();
    let mut f = Vec::new();
    for p in [2u64, 3, 5] {
        let r = ring(p, 2);
        let sys = FGradedSystem::trivial(&r);
        let rep = signature_sequence(&sys, 3, &Options::default()).unwrap();
        for row in &rep.rows {
            expect(&mut f, row.s_e.is_one(), || format!("p = {p}: s_{} = {}", row.e, row.s_e));
            let gb = splitting_number(&sys, row.e, Method::Groebner).unwrap();
            expect(&mut f, gb == row.a_e, || format!("p = {p}: groebner a_{} = {gb}", row.e));
        }
        expect(&mut f, rep.rows.len() == 3, || "missing rows".into());
    }
    finish(6, "regular baseline, trivial system on 2 variables: s_e = 1 for p = 2, 3, 5", f, start);
}

fn run_suite<S: Strategy>(
    f: &mut Vec<String>,
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) {
    let mut runner = runner(100);
    if let Err(e) = runner.run(&strategy, test) {
        f.push(format!("{name}: {e}"));
    }
}

#[test]
fn criterion_7_property_suites() {
    let start = Instant::now();
    let mut f = Vec::new();
    run_suite(&mut f, "F-graded axiom", system_instance(), |s| prop_graded_axiom(&s));
    run_suite(
        &mut f,
        "bracket-power generator independence",
        bracket_case(),
        |(case, mult, e)| prop_bracket_independence(&case, &mult, e),
    );
    run_suite(&mut f, "I_e nesting", system_instance(), |s| prop_nesting(&s));
    run_suite(&mut f, "dual-method agreement", system_instance(), |s| prop_dual_method(&s));
    run_suite(&mut f, "GB membership vs Macaulay matrix", membership_case(), |c| prop_membership(&c));
    run_suite(&mut f, "lattice-count envelope", (prime(), t_rational()), |(p, t)| {
        prop_lattice_envelope(p, &t)
    });
    finish(7, "property suites, 100 cases each: axiom, bracket powers, nesting, dual method, membership, lattice envelope", f, start);
}
