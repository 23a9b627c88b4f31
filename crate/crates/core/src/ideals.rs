//! Ideal constructions: bracket powers, ordinary powers, sums, products,
//! intersections, colon ideals and equality.
//!
//! Intersections use the auxiliary-variable elimination `t*I + (1-t)*J`; colons
//! reduce to intersections with principal ideals. Monomial and principal inputs
//! take direct routes that avoid Groebner bases altogether.

use std::collections::HashSet;

use thiserror::Error;

use crate::groebner::{buchberger, GroebnerError, Ideal};
use crate::poly::{Monomial, PolyError, Polynomial, Ring, TermOrder};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdealError {
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error("colon by the zero ideal")]
    ZeroDivisorIdeal,
    #[error("internal error: {0} does not divide an element of the intersection")]
    DivisionFailure(String),
}

impl From<PolyError> for IdealError {
    fn from(e: PolyError) -> Self {
        IdealError::Groebner(e.into())
    }
}

fn same_ring(a: &Ideal, b: &Ideal) -> Result<(), IdealError> {
    if a.ring() == b.ring() {
        Ok(())
    } else {
        Err(PolyError::RingMismatch.into())
    }
}

fn nonzero_gens(i: &Ideal) -> Vec<Polynomial> {
    i.generators().iter().filter(|g| !g.is_zero()).cloned().collect()
}

fn has_unit_generator(i: &Ideal) -> bool {
    i.generators().iter().any(|g| g.is_constant() && !g.is_zero())
}

fn dedup(gens: Vec<Polynomial>) -> Vec<Polynomial> {
    let mut seen = HashSet::new();
    gens.into_iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.monic())
        .filter(|g| seen.insert(g.clone()))
        .collect()
}

/// Drop monomial generators divisible by others.
fn minimal_monomials(ring: &Ring, mons: impl IntoIterator<Item = Monomial>) -> Vec<Polynomial> {
    let mut mons: Vec<Monomial> = mons.into_iter().collect();
    mons.sort_by_key(|m| m.degree());
    let mut keep: Vec<Monomial> = Vec::new();
    for m in mons {
        if !keep.iter().any(|k| k.divides(&m)) {
            keep.push(m);
        }
    }
    keep.into_iter().map(|m| ring.term(m, 1)).collect()
}

/// `I^[p^e]`, generated by the `p^e`-th powers of the generators.
pub fn bracket_power(i: &Ideal, e: u32) -> Result<Ideal, IdealError> {
    let gens = i
        .generators()
        .iter()
        .map(|g| g.frobenius_power(e))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Ideal::new(i.ring(), gens)?)
}

/// Ordinary power `I^n`; `I^0` is the unit ideal.
pub fn ideal_power(i: &Ideal, n: u64) -> Result<Ideal, IdealError> {
    let ring = i.ring();
    if n == 0 {
        return Ok(Ideal::unit(ring));
    }
    if has_unit_generator(i) {
        return Ok(Ideal::unit(ring));
    }
    let mut gens = nonzero_gens(i);
    if gens.is_empty() {
        return Ok(Ideal::zero(ring));
    }
    let monomial = i.is_monomial();
    if gens.len() > 1 && !monomial {
        let gb = i.groebner()?;
        if gb.is_unit() {
            return Ok(Ideal::unit(ring));
        }
        if gb.elements().len() == 1 {
            gens = gb.elements().to_vec();
        }
    }
    if gens.len() == 1 {
        return Ok(Ideal::new(ring, vec![gens[0].pow(n)])?);
    }
    let mut acc = gens.clone();
    for _ in 1..n {
        let next: Vec<Polynomial> = acc
            .iter()
            .flat_map(|a| gens.iter().map(move |g| a * g))
            .collect();
        acc = if monomial {
            minimal_monomials(ring, next.iter().filter_map(|f| f.leading_monomial().cloned()))
        } else {
            dedup(next)
        };
    }
    Ok(Ideal::new(ring, acc)?)
}

pub fn ideal_product(a: &Ideal, b: &Ideal) -> Result<Ideal, IdealError> {
    same_ring(a, b)?;
    let ring = a.ring();
    let prods: Vec<Polynomial> = nonzero_gens(a)
        .iter()
        .flat_map(|f| nonzero_gens(b).into_iter().map(move |g| f * &g))
        .collect();
    let gens = if a.is_monomial() && b.is_monomial() {
        minimal_monomials(ring, prods.iter().filter_map(|f| f.leading_monomial().cloned()))
    } else {
        dedup(prods)
    };
    Ok(Ideal::new(ring, gens)?)
}

pub fn ideal_sum(a: &Ideal, b: &Ideal) -> Result<Ideal, IdealError> {
    same_ring(a, b)?;
    let mut gens = a.generators().to_vec();
    gens.extend(b.generators().iter().cloned());
    Ok(Ideal::new(a.ring(), gens)?)
}

pub fn ideal_equals(a: &Ideal, b: &Ideal) -> Result<bool, IdealError> {
    same_ring(a, b)?;
    Ok(a.groebner()?.elements() == b.groebner()?.elements())
}

/// `I ∩ J` by eliminating `t` from `t*I + (1-t)*J`.
pub fn intersection(a: &Ideal, b: &Ideal) -> Result<Ideal, IdealError> {
    same_ring(a, b)?;
    let ring = a.ring();
    if a.is_zero() || b.is_zero() {
        return Ok(Ideal::zero(ring));
    }
    if has_unit_generator(a) {
        return Ok(b.clone());
    }
    if has_unit_generator(b) {
        return Ok(a.clone());
    }
    if a.is_monomial() && b.is_monomial() {
        let lcms = nonzero_gens(a)
            .iter()
            .flat_map(|f| {
                let fm = f.leading_monomial().unwrap().clone();
                nonzero_gens(b)
                    .into_iter()
                    .map(move |g| fm.lcm(g.leading_monomial().unwrap()))
            })
            .collect::<Vec<_>>();
        return Ok(Ideal::new(ring, minimal_monomials(ring, lcms))?);
    }
    let ext = ring.extend_front(&["_t"], TermOrder::Elimination { count: 1 });
    let t = ext.var(0);
    let one_minus_t = &ext.one() - &t;
    let mut gens = Vec::new();
    for f in nonzero_gens(a) {
        gens.push(&t * &f.embed_front(&ext));
    }
    for g in nonzero_gens(b) {
        gens.push(&one_minus_t * &g.embed_front(&ext));
    }
    let gb = buchberger(&ext, &gens)?;
    let kept: Vec<Polynomial> = gb
        .elements()
        .iter()
        .filter_map(|g| g.project_front(ring))
        .collect();
    Ok(Ideal::new(ring, kept)?)
}

/// `(I : f)` for a single nonzero polynomial.
pub fn colon_poly(i: &Ideal, f: &Polynomial) -> Result<Ideal, IdealError> {
    let ring = i.ring();
    if f.is_zero() {
        return Err(IdealError::ZeroDivisorIdeal);
    }
    if f.is_constant() || has_unit_generator(i) {
        return Ok(i.clone());
    }
    let gens = nonzero_gens(i);
    if gens.is_empty() {
        // a polynomial ring is a domain
        return Ok(Ideal::zero(ring));
    }
    if i.is_monomial() && f.is_monomial() {
        let m = f.leading_monomial().unwrap();
        let mons = gens.iter().map(|g| {
            let gm = g.leading_monomial().unwrap();
            gm.gcd(m).quotient_of(gm).unwrap()
        });
        return Ok(Ideal::new(ring, minimal_monomials(ring, mons))?);
    }
    if gens.len() == 1 {
        if let Some(q) = gens[0].div_exact(f) {
            return Ok(Ideal::new(ring, vec![q.monic()])?);
        }
    }
    let principal = Ideal::new(ring, vec![f.clone()])?;
    let meet = intersection(i, &principal)?;
    let mut quotients = Vec::with_capacity(meet.generators().len());
    for g in meet.generators() {
        match g.div_exact(f) {
            Some(q) => quotients.push(q),
            None => return Err(IdealError::DivisionFailure(f.to_string())),
        }
    }
    Ok(Ideal::new(ring, quotients)?)
}

/// `(I : J) = ⋂_j (I : f_j)` over the generators `f_j` of `J`.
pub fn colon(i: &Ideal, j: &Ideal) -> Result<Ideal, IdealError> {
    same_ring(i, j)?;
    let gens = nonzero_gens(j);
    if gens.is_empty() {
        return Err(IdealError::ZeroDivisorIdeal);
    }
    if gens.iter().any(|g| g.is_constant()) {
        return Ok(i.clone());
    }
    let reduced: Vec<Polynomial> = if nonzero_gens(i).is_empty() {
        gens
    } else {
        let gb = i.groebner()?;
        gens.iter().map(|f| gb.normal_form(f)).filter(|f| !f.is_zero()).collect()
    };
    if reduced.is_empty() {
        return Ok(Ideal::unit(i.ring()));
    }
    let mut acc: Option<Ideal> = None;
    for f in &reduced {
        let c = colon_poly(i, f)?;
        acc = Some(match acc {
            None => c,
            Some(prev) => intersection(&prev, &c)?,
        });
    }
    Ok(acc.unwrap())
}
