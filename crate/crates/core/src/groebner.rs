//! Buchberger's algorithm over `F_p`, normal forms, and the invariants of an
//! ideal that can be read off its leading monomials (quotient length and
//! Krull dimension).
//!
//! Pairs are selected by the normal strategy (smallest lcm first) and pruned
//! with the Gebauer-Moller installation of Buchberger's product and chain
//! criteria. The output is always the reduced basis, monic and sorted by
//! ascending leading monomial, so it is a canonical form of the ideal.

use std::sync::OnceLock;

use num_bigint::BigUint;
use thiserror::Error;

use crate::poly::{Monomial, PolyError, Polynomial, Ring, TermOrder};

/// Resource caps for a single Groebner basis computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of S-polynomials reduced.
    pub max_pairs: usize,
    /// Maximum number of elements in the intermediate basis.
    pub max_basis: usize,
    /// Maximum dimension of the monomial box used by the linear-algebra route.
    pub max_box: usize,
    /// Maximum number of stored matrix entries in the linear-algebra route.
    pub max_entries: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_pairs: 1_000_000,
            max_basis: 50_000,
            max_box: 20_000_000,
            max_entries: 60_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error("resource cap exceeded: more than {limit} {what}")]
    ResourceCap { what: &'static str, limit: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("the unit ideal has no Krull dimension")]
    UnitIdeal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuotientLength {
    Finite(BigUint),
    Infinite,
}

impl QuotientLength {
    pub fn finite(&self) -> Option<&BigUint> {
        match self {
            QuotientLength::Finite(n) => Some(n),
            QuotientLength::Infinite => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    ring: Ring,
    elements: Vec<Polynomial>,
    reduced: bool,
}

impl PartialEq for GroebnerBasis {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.elements == other.elements
    }
}

impl GroebnerBasis {
    /// Wrap elements already known to form a reduced basis, sorted by
    /// ascending leading monomial.
    pub(crate) fn from_parts(ring: Ring, elements: Vec<Polynomial>) -> GroebnerBasis {
        GroebnerBasis {
            ring,
            elements,
            reduced: true,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn order(&self) -> &TermOrder {
        self.ring.order()
    }

    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.elements
            .iter()
            .filter_map(|g| g.leading_monomial().cloned())
            .collect()
    }

    pub fn is_unit(&self) -> bool {
        self.elements.iter().any(|g| g.is_constant() && !g.is_zero())
    }

    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        assert!(f.ring() == &self.ring, "normal form across rings");
        reduce(f.clone(), &self.elements, true)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.normal_form(f).is_zero()
    }

    /// Dimension of `S/I` as an `F_p`-vector space, by counting standard monomials.
    pub fn quotient_length(&self) -> QuotientLength {
        let n = self.ring.nvars();
        let lms = self.leading_monomials();
        let mut bounds = vec![u32::MAX; n];
        for m in &lms {
            let support: Vec<usize> = m.support().collect();
            match support.as_slice() {
                [] => return QuotientLength::Finite(BigUint::from(0u32)),
                [i] => bounds[*i] = bounds[*i].min(m.exponents()[*i]),
                _ => {}
            }
        }
        if bounds.iter().any(|&b| b == u32::MAX) {
            return QuotientLength::Infinite;
        }
        let refs: Vec<&Monomial> = lms.iter().collect();
        let mut prefix = Vec::with_capacity(n);
        QuotientLength::Finite(BigUint::from(count_standard(&refs, &bounds, &mut prefix)))
    }

    /// The standard monomials of a zero-dimensional ideal, in ascending order.
    pub fn standard_monomials(&self) -> Option<Vec<Monomial>> {
        let lms = self.leading_monomials();
        let n = self.ring.nvars();
        let mut bounds = vec![u32::MAX; n];
        for m in &lms {
            let support: Vec<usize> = m.support().collect();
            match support.as_slice() {
                [] => return Some(Vec::new()),
                [i] => bounds[*i] = bounds[*i].min(m.exponents()[*i]),
                _ => {}
            }
        }
        if bounds.iter().any(|&b| b == u32::MAX) {
            return None;
        }
        let mut out = Vec::new();
        let mut exps = vec![0u32; n];
        loop {
            let m = Monomial::new(exps.clone());
            if !lms.iter().any(|l| l.divides(&m)) {
                out.push(m);
            }
            let mut i = 0;
            loop {
                if i == n {
                    let order = self.ring.order();
                    out.sort_by(|a, b| order.cmp(a, b));
                    return Some(out);
                }
                exps[i] += 1;
                if exps[i] < bounds[i] {
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
        }
    }

    /// Largest set of variables containing the support of no leading monomial.
    pub fn krull_dimension(&self) -> Result<usize, GroebnerError> {
        if self.is_unit() {
            return Err(GroebnerError::UnitIdeal);
        }
        let n = self.ring.nvars();
        let supports: Vec<u64> = self
            .leading_monomials()
            .iter()
            .map(|m| m.support().fold(0u64, |acc, i| acc | (1 << i)))
            .collect();
        let mut best = 0;
        for mask in 0u64..(1u64 << n) {
            let size = mask.count_ones() as usize;
            if size > best && supports.iter().all(|s| s & !mask != 0) {
                best = size;
            }
        }
        Ok(best)
    }
}

fn count_standard(lms: &[&Monomial], bounds: &[u32], prefix: &mut Vec<u32>) -> u128 {
    let v = prefix.len();
    let n = bounds.len();
    if v + 1 == n {
        // monomials still able to divide constrain only the last exponent
        let cap = lms
            .iter()
            .map(|m| m.exponents()[v])
            .min()
            .unwrap_or(bounds[v])
            .min(bounds[v]);
        return cap as u128;
    }
    let mut total = 0;
    for e in 0..bounds[v] {
        let live: Vec<&Monomial> = lms
            .iter()
            .copied()
            .filter(|m| m.exponents()[v] <= e)
            .collect();
        if live.iter().any(|m| m.exponents()[v + 1..].iter().all(|&x| x == 0)) {
            break;
        }
        prefix.push(e);
        total += count_standard(&live, bounds, prefix);
        prefix.pop();
    }
    total
}

/// Reduce `f` by `basis` (monic elements). With `full == false` only the
/// leading term is reduced until it is irreducible.
pub(crate) fn reduce(f: Polynomial, basis: &[Polynomial], full: bool) -> Polynomial {
    let ring = f.ring().clone();
    let field = *ring.field();
    let order = ring.order().clone();
    let mut cur = f.into_terms();
    let mut start = 0;
    let mut rem: Vec<(Monomial, u64)> = Vec::new();
    while start < cur.len() {
        let (m, c) = (&cur[start].0, cur[start].1);
        let divisor = basis.iter().find_map(|g| {
            let lm = g.leading_monomial()?;
            lm.quotient_of(m).map(|q| (q, g))
        });
        match divisor {
            Some((q, g)) => {
                let coef = field.neg(field.mul(c, field.inv(g.leading_coeff().unwrap())));
                cur = merge_scaled(&cur[start + 1..], &g.terms()[1..], &q, coef, &order, &field);
                start = 0;
            }
            None if full => {
                rem.push(cur[start].clone());
                start += 1;
            }
            None => {
                rem.extend(cur.drain(start..));
                break;
            }
        }
    }
    Polynomial::from_sorted(&ring, rem)
}

/// `a + coef * shift * b`, both inputs sorted descending.
fn merge_scaled(
    a: &[(Monomial, u64)],
    b: &[(Monomial, u64)],
    shift: &Monomial,
    coef: u64,
    order: &TermOrder,
    field: &crate::field::PrimeField,
) -> Vec<(Monomial, u64)> {
    use std::cmp::Ordering;
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut i = 0;
    let mut bi = b.iter().map(|(m, c)| (m.mul(shift), field.mul(*c, coef)));
    let mut next_b = bi.next();
    while let Some((bm, bc)) = next_b.take() {
        while i < a.len() && order.cmp(&a[i].0, &bm) == Ordering::Greater {
            out.push(a[i].clone());
            i += 1;
        }
        if i < a.len() && a[i].0 == bm {
            let v = field.add(a[i].1, bc);
            if v != 0 {
                out.push((bm, v));
            }
            i += 1;
        } else if bc != 0 {
            out.push((bm, bc));
        }
        next_b = bi.next();
    }
    out.extend_from_slice(&a[i..]);
    out
}

fn s_polynomial(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let ring = f.ring();
    let (lf, lg) = (f.leading_monomial().unwrap(), g.leading_monomial().unwrap());
    let l = lf.lcm(lg);
    let mf = lf.quotient_of(&l).unwrap();
    let mg = lg.quotient_of(&l).unwrap();
    let field = ring.field();
    let a: Vec<(Monomial, u64)> = f.terms()[1..]
        .iter()
        .map(|(m, c)| (m.mul(&mf), *c))
        .collect();
    let terms = merge_scaled(&a, &g.terms()[1..], &mg, field.neg(1), ring.order(), field);
    Polynomial::from_sorted(ring, terms)
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

struct Engine<'a> {
    ring: &'a Ring,
    polys: Vec<Polynomial>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
}

impl Engine<'_> {
    fn lm(&self, i: usize) -> &Monomial {
        self.polys[i].leading_monomial().unwrap()
    }

    fn active_polys(&self) -> Vec<Polynomial> {
        self.active.iter().map(|&i| self.polys[i].clone()).collect()
    }

    /// Gebauer-Moller update with the new element `h`.
    fn insert(&mut self, h: Polynomial) -> Result<(), GroebnerError> {
        let limits = self.ring.limits();
        if self.active.len() + 1 > limits.max_basis {
            return Err(GroebnerError::ResourceCap {
                what: "basis elements",
                limit: limits.max_basis,
            });
        }
        let hi = self.polys.len();
        self.polys.push(h);
        let lh = self.lm(hi).clone();

        let cands: Vec<(usize, Monomial)> = self
            .active
            .iter()
            .map(|&g| (g, lh.lcm(self.lm(g))))
            .collect();
        let mut kept: Vec<(usize, Monomial)> = Vec::new();
        for (idx, (g, l)) in cands.iter().enumerate() {
            let coprime = lh.is_coprime(self.lm(*g));
            let dominated = cands[idx + 1..].iter().any(|(_, l2)| l2.divides(l))
                || kept.iter().any(|(_, l2)| l2.divides(l));
            if coprime || !dominated {
                kept.push((*g, l.clone()));
            }
        }
        let new_pairs: Vec<Pair> = kept
            .into_iter()
            .filter(|(g, _)| !lh.is_coprime(self.lm(*g)))
            .map(|(g, lcm)| Pair { i: g, j: hi, lcm })
            .collect();

        let old = std::mem::take(&mut self.pairs);
        for pair in old {
            let drop = lh.divides(&pair.lcm)
                && lh.lcm(self.lm(pair.i)) != pair.lcm
                && lh.lcm(self.lm(pair.j)) != pair.lcm;
            if !drop {
                self.pairs.push(pair);
            }
        }
        self.pairs.extend(new_pairs);

        let polys = &self.polys;
        self.active
            .retain(|&g| !lh.divides(polys[g].leading_monomial().unwrap()));
        self.active.push(hi);
        Ok(())
    }

    fn take_pair(&mut self) -> Option<Pair> {
        let order = self.ring.order();
        let best = (0..self.pairs.len()).min_by(|&a, &b| {
            let (pa, pb) = (&self.pairs[a], &self.pairs[b]);
            order
                .cmp(&pa.lcm, &pb.lcm)
                .then((pa.j, pa.i).cmp(&(pb.j, pb.i)))
        })?;
        Some(self.pairs.swap_remove(best))
    }
}

/// Reduced Groebner basis of the ideal generated by `gens` in `ring`
/// (using the ring's term order).
pub fn buchberger(ring: &Ring, gens: &[Polynomial]) -> Result<GroebnerBasis, GroebnerError> {
    for g in gens {
        if g.ring() != ring {
            return Err(PolyError::RingMismatch.into());
        }
    }
    let mut input: Vec<Polynomial> = gens.iter().filter(|g| !g.is_zero()).map(|g| g.monic()).collect();
    if input.iter().any(|g| g.is_constant()) {
        return Ok(GroebnerBasis {
            ring: ring.clone(),
            elements: vec![ring.one()],
            reduced: true,
        });
    }
    let order = ring.order().clone();
    input.sort_by(|a, b| {
        order
            .cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap())
            .then_with(|| a.len().cmp(&b.len()))
    });
    input.dedup();

    let mut engine = Engine {
        ring,
        polys: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
    };
    for g in input {
        let r = reduce(g, &engine.active_polys(), true);
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return Ok(GroebnerBasis {
                ring: ring.clone(),
                elements: vec![ring.one()],
                reduced: true,
            });
        }
        engine.insert(r.monic())?;
    }

    let limits = ring.limits().clone();
    let mut processed = 0usize;
    let mut basis_cache = engine.active_polys();
    let mut cache_len = engine.polys.len();
    while let Some(pair) = engine.take_pair() {
        processed += 1;
        if processed > limits.max_pairs {
            return Err(GroebnerError::ResourceCap {
                what: "S-pairs",
                limit: limits.max_pairs,
            });
        }
        if cache_len != engine.polys.len() {
            basis_cache = engine.active_polys();
            cache_len = engine.polys.len();
        }
        let s = s_polynomial(&engine.polys[pair.i], &engine.polys[pair.j]);
        let r = reduce(s, &basis_cache, true);
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return Ok(GroebnerBasis {
                ring: ring.clone(),
                elements: vec![ring.one()],
                reduced: true,
            });
        }
        engine.insert(r.monic())?;
    }

    Ok(GroebnerBasis {
        ring: ring.clone(),
        elements: interreduce(engine.active_polys()),
        reduced: true,
    })
}

/// Reduced Groebner basis with respect to `order`, in a copy of the ring
/// carrying that order.
pub fn buchberger_with_order(
    ring: &Ring,
    gens: &[Polynomial],
    order: TermOrder,
) -> Result<GroebnerBasis, GroebnerError> {
    let target = ring.with_order(order);
    let moved: Vec<Polynomial> = gens.iter().map(|g| g.to_ring(&target)).collect();
    buchberger(&target, &moved)
}

fn interreduce(mut g: Vec<Polynomial>) -> Vec<Polynomial> {
    if g.is_empty() {
        return g;
    }
    let order = g[0].ring().order().clone();
    g.sort_by(|a, b| order.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    let mut minimal: Vec<Polynomial> = Vec::new();
    for f in g {
        let lm = f.leading_monomial().unwrap();
        if !minimal
            .iter()
            .any(|h| h.leading_monomial().unwrap().divides(lm))
        {
            minimal.push(f);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Polynomial> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, h)| h.clone())
            .collect();
        let f = &minimal[i];
        let lead = f.ring().term(f.leading_monomial().unwrap().clone(), 1);
        let tail = f - &lead;
        out.push(&lead + &reduce(tail, &others, true));
    }
    out
}

/// An ideal given by generators, with its reduced Groebner basis computed on
/// first use and cached.
#[derive(Debug, Clone)]
pub struct Ideal {
    ring: Ring,
    gens: Vec<Polynomial>,
    gb: OnceLock<GroebnerBasis>,
}

impl Ideal {
    pub fn new(ring: &Ring, gens: Vec<Polynomial>) -> Result<Ideal, PolyError> {
        if gens.iter().any(|g| g.ring() != ring) {
            return Err(PolyError::RingMismatch);
        }
        Ok(Ideal {
            ring: ring.clone(),
            gens,
            gb: OnceLock::new(),
        })
    }

    pub fn from_basis(gb: GroebnerBasis) -> Ideal {
        let cell = OnceLock::new();
        let gens = gb.elements.clone();
        let ring = gb.ring.clone();
        let _ = cell.set(gb);
        Ideal { ring, gens, gb: cell }
    }

    pub fn zero(ring: &Ring) -> Ideal {
        Ideal::new(ring, Vec::new()).unwrap()
    }

    pub fn unit(ring: &Ring) -> Ideal {
        Ideal::new(ring, vec![ring.one()]).unwrap()
    }

    /// The homogeneous maximal ideal `<x_1, ..., x_n>`.
    pub fn maximal(ring: &Ring) -> Ideal {
        Ideal::new(ring, ring.vars_as_polys()).unwrap()
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.iter().all(|g| g.is_zero())
    }

    pub fn is_monomial(&self) -> bool {
        self.gens.iter().all(|g| g.len() <= 1)
    }

    pub fn groebner(&self) -> Result<&GroebnerBasis, GroebnerError> {
        if let Some(gb) = self.gb.get() {
            return Ok(gb);
        }
        let gb = if self.is_monomial() {
            monomial_basis(&self.ring, &self.gens)
        } else {
            buchberger(&self.ring, &self.gens)?
        };
        let _ = self.gb.set(gb);
        Ok(self.gb.get().unwrap())
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool, GroebnerError> {
        if f.ring() != &self.ring {
            return Err(PolyError::RingMismatch.into());
        }
        Ok(self.groebner()?.contains(f))
    }

    /// `self ⊆ other`, by generator membership.
    pub fn is_subset_of(&self, other: &Ideal) -> Result<bool, GroebnerError> {
        let gb = other.groebner()?;
        Ok(self.gens.iter().all(|g| gb.contains(g)))
    }

    pub fn is_unit(&self) -> Result<bool, GroebnerError> {
        Ok(self.groebner()?.is_unit())
    }

    pub fn quotient_length(&self) -> Result<QuotientLength, GroebnerError> {
        Ok(self.groebner()?.quotient_length())
    }

    pub fn krull_dimension(&self) -> Result<usize, GroebnerError> {
        self.groebner()?.krull_dimension()
    }
}

/// Minimal generators of a monomial ideal form its reduced basis.
fn monomial_basis(ring: &Ring, gens: &[Polynomial]) -> GroebnerBasis {
    let mut mons: Vec<Monomial> = gens
        .iter()
        .filter_map(|g| g.leading_monomial().cloned())
        .collect();
    let order = ring.order();
    mons.sort_by(|a, b| order.cmp(a, b));
    mons.dedup();
    let mut minimal: Vec<Monomial> = Vec::new();
    for m in mons {
        if !minimal.iter().any(|h| h.divides(&m)) {
            minimal.push(m);
        }
    }
    GroebnerBasis {
        ring: ring.clone(),
        elements: minimal.into_iter().map(|m| ring.term(m, 1)).collect(),
        reduced: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, vars: &[&str], order: TermOrder) -> Ring {
        Ring::new(p, vars, order).unwrap()
    }

    fn polys(r: &Ring, s: &[&str]) -> Vec<Polynomial> {
        s.iter().map(|t| r.parse(t).unwrap()).collect()
    }

    #[test]
    fn linear_system_in_lex() {
        let r = ring(7, &["x", "y", "z"], TermOrder::Lex);
        let gb = buchberger(&r, &polys(&r, &["x - y", "y - z"])).unwrap();
        assert_eq!(gb.elements(), polys(&r, &["y - z", "x - z"]).as_slice());
        let orig = Ideal::new(&r, polys(&r, &["x - y", "y - z"])).unwrap();
        let other = Ideal::from_basis(gb);
        assert!(orig.is_subset_of(&other).unwrap());
        assert!(other.is_subset_of(&orig).unwrap());
    }

    #[test]
    fn monomial_and_principal_inputs() {
        let r = ring(5, &["x", "y"], TermOrder::DegRevLex);
        let gb = buchberger(&r, &polys(&r, &["x^3", "y^2"])).unwrap();
        assert_eq!(gb.elements(), polys(&r, &["y^2", "x^3"]).as_slice());
        let gb = buchberger(&r, &polys(&r, &["3*x^2 + y"])).unwrap();
        assert_eq!(gb.elements(), polys(&r, &["x^2 + 2*y"]).as_slice());
        let gb = buchberger(&r, &polys(&r, &["x + 1", "x"])).unwrap();
        assert!(gb.is_unit());
    }

    #[test]
    fn normal_forms() {
        let r = ring(3, &["x", "y"], TermOrder::DegRevLex);
        let gb = buchberger(&r, &polys(&r, &["x^2 - y"])).unwrap();
        assert_eq!(gb.normal_form(&r.parse("x^2").unwrap()), r.parse("y").unwrap());
        let f = r.parse("x^5 + x*y + 1").unwrap();
        let nf = gb.normal_form(&f);
        assert_eq!(gb.normal_form(&nf), nf);
        assert!(gb.contains(&r.parse("x^4 - y^2").unwrap()));
    }

    #[test]
    fn membership_examples() {
        let r3 = ring(3, &["x", "y", "z"], TermOrder::DegRevLex);
        let cube = Ideal::new(&r3, polys(&r3, &["x^3", "y^3", "z^3"])).unwrap();
        let h = r3.parse("x^2 - y^2*z").unwrap();
        assert!(!cube.contains(&h.pow(2)).unwrap());
        assert_eq!(
            cube.groebner().unwrap().normal_form(&h.pow(2)),
            r3.parse("x^2*y^2*z").unwrap()
        );
        let r2 = ring(2, &["x", "y", "z"], TermOrder::DegRevLex);
        let sq = Ideal::new(&r2, polys(&r2, &["x^2", "y^2", "z^2"])).unwrap();
        assert!(sq.contains(&r2.parse("x^2 - y^2*z").unwrap()).unwrap());
        let x = Ideal::new(&r2, polys(&r2, &["x"])).unwrap();
        assert!(x.contains(&r2.parse("x^2").unwrap()).unwrap());
    }

    #[test]
    fn quotient_lengths() {
        let r = ring(5, &["x", "y"], TermOrder::DegRevLex);
        let i = Ideal::new(&r, polys(&r, &["x^2", "x*y", "y^3"])).unwrap();
        assert_eq!(i.quotient_length().unwrap(), QuotientLength::Finite(4u32.into()));
        let sm = i.groebner().unwrap().standard_monomials().unwrap();
        assert_eq!(sm.len(), 4);
        let q = Ideal::new(&r, polys(&r, &["x^7", "y^7"])).unwrap();
        assert_eq!(q.quotient_length().unwrap(), QuotientLength::Finite(49u32.into()));
        let x = Ideal::new(&r, polys(&r, &["x"])).unwrap();
        assert_eq!(x.quotient_length().unwrap(), QuotientLength::Infinite);
        assert_eq!(
            Ideal::unit(&r).quotient_length().unwrap(),
            QuotientLength::Finite(0u32.into())
        );
    }

    #[test]
    fn krull_dimensions() {
        let r = ring(3, &["x", "y"], TermOrder::DegRevLex);
        assert_eq!(Ideal::new(&r, polys(&r, &["x*y"])).unwrap().krull_dimension(), Ok(1));
        assert_eq!(Ideal::zero(&r).krull_dimension(), Ok(2));
        assert_eq!(Ideal::unit(&r).krull_dimension(), Err(GroebnerError::UnitIdeal));
        let r3 = ring(3, &["x", "y", "z"], TermOrder::DegRevLex);
        let w = Ideal::new(&r3, polys(&r3, &["x^2 - y^2*z"])).unwrap();
        assert_eq!(w.krull_dimension(), Ok(2));
    }

    #[test]
    fn resource_caps_are_reported() {
        let r = ring(7, &["x", "y", "z"], TermOrder::DegRevLex).with_limits(Limits {
            max_pairs: 1,
            ..Default::default()
        });
        let err = buchberger(&r, &polys(&r, &["x^2 + y*z", "y^2 + x*z", "z^2 + x*y + 1"]))
            .unwrap_err();
        assert!(matches!(err, GroebnerError::ResourceCap { what: "S-pairs", .. }));
    }

    #[test]
    fn cyclic3_is_consistent() {
        let r = ring(32003, &["a", "b", "c"], TermOrder::DegRevLex);
        let gens = polys(&r, &["a + b + c", "a*b + b*c + c*a", "a*b*c - 1"]);
        let gb = buchberger(&r, &gens).unwrap();
        for g in &gens {
            assert!(gb.contains(g));
        }
        // cyclic-3 has 6 solutions over the algebraic closure
        assert_eq!(gb.quotient_length(), QuotientLength::Finite(6u32.into()));
        for (i, f) in gb.elements().iter().enumerate() {
            for g in &gb.elements()[i + 1..] {
                assert!(gb.normal_form(&s_polynomial(f, g)).is_zero());
            }
        }
    }
}
