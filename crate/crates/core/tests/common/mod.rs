#![allow(dead_code)]

use std::cmp::Ordering;

use fsig::groebner::Ideal;
use fsig::ideals::{bracket_power, ideal_equals};
use fsig::newton::{clip, lattice_count, newton_polyhedron};
use fsig::signature::{splitting_ideal, splitting_number, Method};
use fsig::systems::FGradedSystem;
use fsig::{Monomial, Polynomial, Ring, TermOrder};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

pub const VARS: [&str; 3] = ["x", "y", "z"];

/// Largest box `p^(e n)` on which property suites run the Groebner route.
pub const GROEBNER_BOX: u64 = 125;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn ring(p: u64, n: usize) -> Ring {
    Ring::new(p, &VARS[..n], TermOrder::DegRevLex).unwrap()
}

pub type Terms = Vec<(Vec<u32>, u64)>;

pub fn poly(ring: &Ring, terms: &Terms) -> Polynomial {
    let p = ring.characteristic();
    ring.from_terms(terms.iter().map(|(e, c)| (Monomial::new(e.clone()), c % p)))
}

pub fn terms(n: usize, max_exp: u32, max_terms: usize) -> impl Strategy<Value = Terms> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, n), 1u64..5), 1..=max_terms)
}

/// Terms all of the same total degree `d`.
pub fn homogeneous_terms(n: usize, d: u32, max_terms: usize) -> impl Strategy<Value = Terms> {
    let monos = monomials_of_degree(n, d);
    prop::collection::vec((prop::sample::select(monos), 1u64..5), 1..=max_terms)
}

pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in monomials_of_degree(n - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct IdealCase {
    pub p: u64,
    pub n: usize,
    pub gens: Vec<Terms>,
}

impl IdealCase {
    pub fn ring(&self) -> Ring {
        ring(self.p, self.n)
    }

    pub fn polys(&self, r: &Ring) -> Vec<Polynomial> {
        self.gens.iter().map(|t| poly(r, t)).collect()
    }

    pub fn ideal(&self, r: &Ring) -> Ideal {
        Ideal::new(r, self.polys(r)).unwrap()
    }
}

/// An ideal, a multiplier in the same ring, and a level `e`.
pub fn bracket_case() -> impl Strategy<Value = (IdealCase, Terms, u32)> {
    ideal_case(2, 2, 3).prop_flat_map(|case| {
        let n = case.n;
        (Just(case), terms(n, 1, 2), 1u32..=2)
    })
}

pub fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5])
}

pub fn ideal_case(max_gens: usize, max_exp: u32, max_terms: usize) -> impl Strategy<Value = IdealCase> {
    (prime(), 1usize..=3).prop_flat_map(move |(p, n)| {
        prop::collection::vec(terms(n, max_exp, max_terms), 1..=max_gens).prop_map(move |gens| IdealCase { p, n, gens })
    })
}

#[derive(Debug, Clone)]
pub enum SystemCase {
    Pair { gens: Vec<Terms>, t: (i64, i64) },
    Quotient { h: Terms },
    Product(Vec<(Vec<Terms>, (i64, i64))>),
}

#[derive(Debug, Clone)]
pub struct SystemInstance {
    pub p: u64,
    pub n: usize,
    pub case: SystemCase,
}

fn nonconstant(t: &Terms, p: u64, n: usize) -> bool {
    poly(&ring(p, n), t).total_degree().is_some_and(|d| d > 0)
}

fn t_value() -> impl Strategy<Value = (i64, i64)> {
    (1i64..=4).prop_flat_map(|d| (0..=d, Just(d)))
}

pub fn system_instance() -> impl Strategy<Value = SystemInstance> {
    (prime(), 1usize..=3).prop_flat_map(|(p, n)| {
        let gens = || prop::collection::vec(terms(n, 2, 2), 1..=2);
        let pair = (gens(), t_value()).prop_map(|(gens, t)| SystemCase::Pair { gens, t });
        let quotient = terms(n, 2, 3)
            .prop_filter("nonconstant", move |h| nonconstant(h, p, n))
            .prop_map(|h| SystemCase::Quotient { h });
        let product = prop::collection::vec((prop::collection::vec(terms(n, 1, 2), 1..=1), t_value()), 2..=2)
            .prop_map(SystemCase::Product);
        let case = prop_oneof![pair, quotient, product];
        case.prop_map(move |case| SystemInstance { p, n, case })
    })
}

impl SystemInstance {
    pub fn build(&self, r: &Ring) -> FGradedSystem {
        let ideal = |gens: &Vec<Terms>| Ideal::new(r, gens.iter().map(|t| poly(r, t)).collect()).unwrap();
        let pair = |gens: &Vec<Terms>, t: &(i64, i64)| {
            let a = ideal(gens);
            let a = if a.is_zero() { Ideal::unit(r) } else { a };
            FGradedSystem::pair(a, rat(t.0, t.1)).unwrap()
        };
        match &self.case {
            SystemCase::Pair { gens, t } => pair(gens, t),
            SystemCase::Quotient { h } => FGradedSystem::quotient(Ideal::new(r, vec![poly(r, h)]).unwrap()).unwrap(),
            SystemCase::Product(parts) => {
                FGradedSystem::product(parts.iter().map(|(g, t)| pair(g, t)).collect()).unwrap()
            }
        }
    }

    /// Largest `e <= emax` whose box `p^(e n)` stays within `cap`.
    pub fn levels(&self, emax: u32, cap: u64) -> u32 {
        (1..=emax)
            .take_while(|&e| self.p.pow(e * self.n as u32) <= cap)
            .last()
            .unwrap_or(1)
    }
}

pub fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

/// Rank of a dense matrix over `F_p`.
pub fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = rows.first().map(|r| r.len()).unwrap_or(0);
    let inv = |a: u64| {
        let mut r = 1u64;
        for _ in 0..p - 2 {
            r = r * a % p;
        }
        r
    };
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let f = inv(rows[rank][c]);
        for x in rows[rank].iter_mut() {
            *x = *x * f % p;
        }
        for i in 0..rows.len() {
            if i != rank && rows[i][c] != 0 {
                let k = rows[i][c];
                for j in 0..cols {
                    rows[i][j] = (rows[i][j] + (p - k) * rows[rank][j]) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn coeff_vector(f: &Polynomial, basis: &[Vec<u32>]) -> Vec<u64> {
    basis.iter().map(|m| f.coeff(&Monomial::new(m.clone()))).collect()
}

/// Membership of a homogeneous `f` of degree `d` in the ideal generated by
/// homogeneous `gens`: the degree-`d` part of the ideal is spanned by the
/// products `m g` with `deg m = d - deg g`.
pub fn macaulay_member(r: &Ring, gens: &[Polynomial], f: &Polynomial, d: u32) -> bool {
    let n = r.nvars();
    let basis = monomials_of_degree(n, d);
    let mut rows = Vec::new();
    for g in gens.iter().filter(|g| !g.is_zero()) {
        let dg = g.total_degree().unwrap() as u32;
        if dg > d {
            continue;
        }
        for m in monomials_of_degree(n, d - dg) {
            rows.push(coeff_vector(&g.mul_term(&Monomial::new(m), 1), &basis));
        }
    }
    let p = r.characteristic();
    let base = rank_mod_p(rows.clone(), p);
    rows.push(coeff_vector(f, &basis));
    rank_mod_p(rows, p) == base
}

/// `dim_F S/(gens + <x_i^q>)` by rank of the products `m g` on the box.
pub fn box_corank(r: &Ring, gens: &[Polynomial], q: u32) -> usize {
    let n = r.nvars();
    let mut basis = vec![vec![]];
    for _ in 0..n {
        basis = basis
            .into_iter()
            .flat_map(|b: Vec<u32>| {
                (0..q).map(move |k| {
                    let mut c = b.clone();
                    c.push(k);
                    c
                })
            })
            .collect();
    }
    let mut rows = Vec::new();
    for g in gens {
        for m in &basis {
            rows.push(coeff_vector(&g.mul_term(&Monomial::new(m.clone()), 1), &basis));
        }
    }
    let rank = if rows.is_empty() { 0 } else { rank_mod_p(rows, r.characteristic()) };
    basis.len() - rank
}

/// Area of a convex polygon from its vertex set.
pub fn shoelace(vertices: &[Vec<BigRational>]) -> BigRational {
    if vertices.len() < 3 {
        return BigRational::zero();
    }
    let n = BigRational::from_integer(BigInt::from(vertices.len()));
    let cx: BigRational = vertices.iter().map(|v| v[0].clone()).sum::<BigRational>() / &n;
    let cy: BigRational = vertices.iter().map(|v| v[1].clone()).sum::<BigRational>() / &n;
    let half = |v: &Vec<BigRational>| {
        let (dx, dy) = (&v[0] - &cx, &v[1] - &cy);
        if dy.is_positive() || (dy.is_zero() && dx.is_positive()) {
            0
        } else {
            1
        }
    };
    let mut vs = vertices.to_vec();
    vs.sort_by(|a, b| {
        half(a).cmp(&half(b)).then_with(|| {
            let cross = (&a[0] - &cx) * (&b[1] - &cy) - (&a[1] - &cy) * (&b[0] - &cx);
            if cross.is_positive() {
                Ordering::Less
            } else if cross.is_negative() {
                Ordering::Greater
            } else {
                Ordering::Equal
            }
        })
    });
    let mut twice = BigRational::zero();
    for i in 0..vs.len() {
        let (a, b) = (&vs[i], &vs[(i + 1) % vs.len()]);
        twice += &a[0] * &b[1] - &a[1] * &b[0];
    }
    twice.abs() / BigRational::from_integer(BigInt::from(2))
}

/// `∏ ⌊(1 - t_i) p^e + t_i⌋`.
pub fn snc_count(p: u64, e: u32, ts: &[BigRational]) -> BigUint {
    let q = BigRational::from_integer(BigInt::from(p.pow(e)));
    ts.iter()
        .map(|t| ((BigRational::one() - t) * &q + t).floor().to_integer().to_biguint().unwrap())
        .product()
}

fn check(cond: bool, msg: impl Into<String>) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg.into()))
    }
}

pub fn prop_graded_axiom(inst: &SystemInstance) -> Result<(), TestCaseError> {
    let r = ring(inst.p, inst.n);
    let sys = inst.build(&r);
    let emax = if inst.p == 2 { 3 } else { 2 };
    let res = sys.verify_graded(emax).map_err(|e| TestCaseError::fail(e.to_string()))?;
    check(res.holds, format!("axiom fails at {:?} for {sys}", res.counterexample))
}

pub fn prop_bracket_independence(case: &IdealCase, mult: &Terms, e: u32) -> Result<(), TestCaseError> {
    let r = case.ring();
    let gens = case.polys(&r);
    let i = Ideal::new(&r, gens.clone()).unwrap();
    let m = poly(&r, mult);
    let mut other = gens.clone();
    other.push(&gens[0] * &m);
    if gens.len() > 1 {
        other[1] = &gens[1] + &(&m * &gens[0]);
    }
    let j = Ideal::new(&r, other).unwrap();
    check(ideal_equals(&i, &j).unwrap(), "generating sets differ")?;
    let (bi, bj) = (bracket_power(&i, e).unwrap(), bracket_power(&j, e).unwrap());
    check(ideal_equals(&bi, &bj).unwrap(), format!("I^[p^{e}] depends on generators: {bi:?} vs {bj:?}"))?;
    let via_basis = Ideal::new(&r, i.groebner().unwrap().elements().to_vec()).unwrap();
    check(
        ideal_equals(&bi, &bracket_power(&via_basis, e).unwrap()).unwrap(),
        "bracket power of the reduced basis differs",
    )
}

pub fn prop_nesting(inst: &SystemInstance) -> Result<(), TestCaseError> {
    let r = ring(inst.p, inst.n);
    let sys = inst.build(&r);
    let emax = inst.levels(3, GROEBNER_BOX);
    let ideals: Vec<Ideal> = (1..=emax)
        .map(|e| splitting_ideal(&sys, e, Method::Groebner).unwrap())
        .collect();
    for (k, ie) in ideals.iter().enumerate() {
        let nq = bracket_power(&Ideal::maximal(&r), k as u32 + 1).unwrap();
        check(nq.is_subset_of(ie).unwrap(), "n^[q] ⊄ I_e")?;
    }
    let a1 = splitting_number(&sys, 1, Method::Groebner).unwrap();
    if a1.is_zero() {
        return Ok(());
    }
    for w in ideals.windows(2) {
        check(w[1].is_subset_of(&w[0]).unwrap(), format!("I_(e+1) ⊄ I_e for {sys}"))?;
    }
    Ok(())
}

pub fn prop_dual_method(inst: &SystemInstance) -> Result<(), TestCaseError> {
    let r = ring(inst.p, inst.n);
    let sys = inst.build(&r);
    for e in 1..=inst.levels(2, GROEBNER_BOX) {
        let g = splitting_number(&sys, e, Method::Groebner).unwrap();
        let l = splitting_number(&sys, e, Method::Linear).unwrap();
        check(g == l, format!("a_{e}: groebner {g} vs linear {l} for {sys}"))?;
        let bound = BigUint::from(inst.p).pow(e * inst.n as u32);
        check(l <= bound, "a_e exceeds p^(en)")?;
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct MembershipCase {
    pub p: u64,
    pub n: usize,
    pub gens: Vec<(u32, Terms)>,
    pub mults: Vec<Terms>,
    pub extra: Option<Terms>,
    pub d: u32,
}

pub fn membership_case() -> impl Strategy<Value = MembershipCase> {
    (prime(), 1usize..=3, 2u32..=4).prop_flat_map(|(p, n, d)| {
        let gen = (1u32..=2).prop_flat_map(move |dg| homogeneous_terms(n, dg, 3).prop_map(move |t| (dg, t)));
        (
            prop::collection::vec(gen, 1..=3),
            prop::collection::vec(0..4u32, 3),
            prop::option::of(homogeneous_terms(n, d, 2)),
        )
            .prop_flat_map(move |(gens, seeds, extra)| {
                let mults: Vec<_> = gens
                    .iter()
                    .zip(&seeds)
                    .map(|((dg, _), s)| homogeneous_terms(n, d - dg, 1 + *s as usize % 3))
                    .collect();
                (Just(gens), mults, Just(extra))
            })
            .prop_map(move |(gens, mults, extra)| MembershipCase { p, n, gens, mults, extra, d })
    })
}

pub fn prop_membership(case: &MembershipCase) -> Result<(), TestCaseError> {
    let r = ring(case.p, case.n);
    let gens: Vec<Polynomial> = case.gens.iter().map(|(_, t)| poly(&r, t)).collect();
    let mut f = r.zero();
    for (g, m) in gens.iter().zip(&case.mults) {
        f = &f + &(g * &poly(&r, m));
    }
    if let Some(x) = &case.extra {
        f = &f + &poly(&r, x);
    }
    let ideal = Ideal::new(&r, gens.clone()).unwrap();
    let by_gb = ideal.contains(&f).unwrap();
    let by_matrix = macaulay_member(&r, &gens, &f, case.d);
    check(by_gb == by_matrix, format!("membership of {f}: groebner {by_gb}, matrix {by_matrix}"))
}

/// `|#(Z^2 ∩ tqP ∩ [0,q]^2)/q^2 - vol(tP ∩ [0,1]^2)| <= 3/q`: the clipped
/// region is convex inside the square, so its perimeter is at most `4q` and
/// the count differs from the area by at most `perimeter/2 + 1`.
pub fn prop_lattice_envelope(p: u64, t: &BigRational) -> Result<(), TestCaseError> {
    let poly = newton_polyhedron(&[vec![3, 0], vec![0, 2]]).unwrap();
    let vol = clip(&poly, t).unwrap().volume;
    for e in 1..=4u32 {
        let q = p.pow(e);
        let count = lattice_count(&poly, t, q).unwrap();
        let ratio = BigRational::new(BigInt::from(count), BigInt::from(q * q));
        let err = (ratio - &vol).abs();
        let bound = rat(3, q as i64);
        check(
            err <= bound,
            format!("t = {t}, e = {e}: error {} exceeds 3/{q}", err.to_f64().unwrap_or(f64::NAN)),
        )?;
    }
    Ok(())
}

pub fn t_rational() -> impl Strategy<Value = BigRational> {
    (1i64..=12).prop_flat_map(|d| (0..=d, Just(d))).prop_map(|(n, d)| rat(n, d))
}
