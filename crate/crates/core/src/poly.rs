//! Monomials, term orders, polynomial rings over `F_p` and sparse polynomials.
//!
//! A [`Polynomial`] is a list of `(Monomial, coefficient)` pairs sorted in
//! strictly descending order under the ring's [`TermOrder`], with no zero
//! coefficients. Two polynomials can only be combined when they live in the
//! same [`Ring`] (same prime, same variable list, same order).

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

use crate::field::{FieldError, PrimeField};
use crate::groebner::Limits;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("polynomials belong to different rings")]
    RingMismatch,
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("duplicate or empty variable name `{0}`")]
    BadVariable(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at offset {pos}")]
    UnknownVariable { name: String, pos: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { pos, .. } | ParseError::UnknownVariable { pos, .. } => *pos,
        }
    }
}

/// Exponent vector `x^u`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, index: usize, power: u32) -> Self {
        let mut e = vec![0; nvars];
        e[index] = power;
        Monomial(e)
    }

    #[inline]
    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Variables with a positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if self.divides(other) {
            Some(Monomial(
                other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect(),
            ))
        } else {
            None
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn scale(&self, k: u64) -> Option<Monomial> {
        let k = u32::try_from(k).ok()?;
        self.0
            .iter()
            .map(|&e| e.checked_mul(k))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }
}

/// Monomial orders. `Elimination { count }` is the block order that compares
/// the first `count` variables by degrevlex and breaks ties with degrevlex on
/// the remaining ones, so it eliminates the first block.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub enum TermOrder {
    Lex,
    #[default]
    DegRevLex,
    Elimination {
        count: usize,
    },
}

fn degrevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    for (x, y) in a.iter().zip(b).rev() {
        if x != y {
            // smaller exponent in the last differing variable wins
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

impl TermOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            TermOrder::Lex => a.0.cmp(&b.0),
            TermOrder::DegRevLex => degrevlex(&a.0, &b.0),
            TermOrder::Elimination { count } => {
                let k = (*count).min(a.0.len());
                degrevlex(&a.0[..k], &b.0[..k]).then_with(|| degrevlex(&a.0[k..], &b.0[k..]))
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            TermOrder::Lex => "lex".into(),
            TermOrder::DegRevLex => "degrevlex".into(),
            TermOrder::Elimination { count } => format!("elim({count})"),
        }
    }
}

#[derive(Debug)]
struct RingData {
    field: PrimeField,
    vars: Vec<String>,
    order: TermOrder,
    limits: Limits,
}

/// Shared handle to `F_p[x_1, ..., x_n]` with a fixed term order.
#[derive(Clone, Debug)]
pub struct Ring(Arc<RingData>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.field == other.0.field
                && self.0.vars == other.0.vars
                && self.0.order == other.0.order)
    }
}

impl Eq for Ring {}

impl Ring {
    pub fn new<S: AsRef<str>>(p: u64, vars: &[S], order: TermOrder) -> Result<Ring, PolyError> {
        let field = PrimeField::new(p)?;
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        for (i, v) in vars.iter().enumerate() {
            let ok = !v.is_empty()
                && v.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok || vars[..i].contains(v) {
                return Err(PolyError::BadVariable(v.clone()));
            }
        }
        Ok(Ring(Arc::new(RingData {
            field,
            vars,
            order,
            limits: Limits::default(),
        })))
    }

    pub fn with_order(&self, order: TermOrder) -> Ring {
        Ring(Arc::new(RingData {
            field: self.0.field,
            vars: self.0.vars.clone(),
            order,
            limits: self.0.limits.clone(),
        }))
    }

    pub fn with_limits(&self, limits: Limits) -> Ring {
        Ring(Arc::new(RingData {
            field: self.0.field,
            vars: self.0.vars.clone(),
            order: self.0.order.clone(),
            limits,
        }))
    }

    /// Ring with extra variables prepended and the given order.
    pub fn extend_front(&self, names: &[&str], order: TermOrder) -> Ring {
        let mut vars: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        vars.extend(self.0.vars.iter().cloned());
        Ring(Arc::new(RingData {
            field: self.0.field,
            vars,
            order,
            limits: self.0.limits.clone(),
        }))
    }

    #[inline]
    pub fn field(&self) -> &PrimeField {
        &self.0.field
    }

    #[inline]
    pub fn characteristic(&self) -> u64 {
        self.0.field.characteristic()
    }

    pub fn vars(&self) -> &[String] {
        &self.0.vars
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.0.vars.len()
    }

    pub fn order(&self) -> &TermOrder {
        &self.0.order
    }

    pub fn limits(&self) -> &Limits {
        &self.0.limits
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.0.vars.iter().position(|v| v == name)
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial {
            ring: self.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(&self) -> Polynomial {
        self.constant(1)
    }

    pub fn constant(&self, c: u64) -> Polynomial {
        self.term(Monomial::one(self.nvars()), c)
    }

    pub fn term(&self, m: Monomial, c: u64) -> Polynomial {
        assert_eq!(m.nvars(), self.nvars(), "monomial arity mismatch");
        let c = c % self.characteristic();
        Polynomial {
            ring: self.clone(),
            terms: if c == 0 { Vec::new() } else { vec![(m, c)] },
        }
    }

    pub fn monomial(&self, exponents: &[u32]) -> Polynomial {
        self.term(Monomial::new(exponents.to_vec()), 1)
    }

    pub fn var(&self, index: usize) -> Polynomial {
        self.term(Monomial::var(self.nvars(), index, 1), 1)
    }

    pub fn vars_as_polys(&self) -> Vec<Polynomial> {
        (0..self.nvars()).map(|i| self.var(i)).collect()
    }

    /// Build from arbitrary (possibly repeated, unsorted) terms.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, u64)>>(&self, terms: I) -> Polynomial {
        let f = self.field();
        let mut acc: HashMap<Monomial, u64> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.nvars(), self.nvars(), "monomial arity mismatch");
            let slot = acc.entry(m).or_insert(0);
            *slot = f.add(*slot, c % f.characteristic());
        }
        let mut terms: Vec<(Monomial, u64)> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        let order = self.order();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Polynomial {
            ring: self.clone(),
            terms,
        }
    }

    pub fn parse(&self, text: &str) -> Result<Polynomial, ParseError> {
        Parser {
            ring: self,
            src: text.as_bytes(),
            pos: 0,
        }
        .parse_all()
    }
}

#[derive(Clone)]
pub struct Polynomial {
    ring: Ring,
    terms: Vec<(Monomial, u64)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state)
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl Polynomial {
    #[inline]
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    #[inline]
    pub fn terms(&self) -> &[(Monomial, u64)] {
        &self.terms
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|(m, _)| m)
    }

    pub fn leading_coeff(&self) -> Option<u64> {
        self.terms.first().map(|(_, c)| *c)
    }

    /// Largest total degree of a term; `None` for zero.
    pub fn total_degree(&self) -> Option<u64> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn coeff(&self, m: &Monomial) -> u64 {
        self.terms
            .iter()
            .find(|(t, _)| t == m)
            .map(|(_, c)| *c)
            .unwrap_or(0)
    }

    fn check_ring(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(PolyError::RingMismatch)
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        Ok(self.combine(other, 1))
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        Ok(self.combine(other, self.ring.field().neg(1)))
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        Ok(self.product(other))
    }

    /// `self + c * other`, by sorted merge.
    fn combine(&self, other: &Polynomial, c: u64) -> Polynomial {
        let f = *self.ring.field();
        let order = self.ring.order();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match order.cmp(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let v = f.mul(c, b[j].1);
                    if v != 0 {
                        out.push((b[j].0.clone(), v));
                    }
                    j += 1;
                }
                Ordering::Equal => {
                    let v = f.add(a[i].1, f.mul(c, b[j].1));
                    if v != 0 {
                        out.push((a[i].0.clone(), v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for (m, v) in &b[j..] {
            let v = f.mul(c, *v);
            if v != 0 {
                out.push((m.clone(), v));
            }
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    fn product(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return self.ring.zero();
        }
        if other.terms.len() == 1 {
            return self.mul_term(&other.terms[0].0, other.terms[0].1);
        }
        if self.terms.len() == 1 {
            return other.mul_term(&self.terms[0].0, self.terms[0].1);
        }
        let f = *self.ring.field();
        let mut acc: HashMap<Monomial, u64> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let slot = acc.entry(ma.mul(mb)).or_insert(0);
                *slot = f.add(*slot, f.mul(*ca, *cb));
            }
        }
        let mut terms: Vec<(Monomial, u64)> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        let order = self.ring.order();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Polynomial {
            ring: self.ring.clone(),
            terms,
        }
    }

    /// Multiply by `c * m`; order is preserved since term orders are multiplicative.
    pub fn mul_term(&self, m: &Monomial, c: u64) -> Polynomial {
        let f = self.ring.field();
        let c = c % f.characteristic();
        if c == 0 {
            return self.ring.zero();
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(t, v)| (t.mul(m), f.mul(*v, c)))
                .collect(),
        }
    }

    pub fn scale(&self, c: u64) -> Polynomial {
        self.mul_term(&Monomial::one(self.ring.nvars()), c)
    }

    /// Subtract `c * m * g` in place of a fresh allocation chain.
    pub fn sub_mul_term(&self, m: &Monomial, c: u64, g: &Polynomial) -> Polynomial {
        let f = self.ring.field();
        self.combine(&g.mul_term(m, 1), f.neg(c % f.characteristic()))
    }

    pub fn monic(&self) -> Polynomial {
        match self.leading_coeff() {
            None | Some(1) => self.clone(),
            Some(c) => self.scale(self.ring.field().inv(c)),
        }
    }

    pub fn pow(&self, mut n: u64) -> Polynomial {
        let mut base = self.clone();
        let mut acc = self.ring.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.product(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.product(&base);
            }
        }
        acc
    }

    /// `f^(p^e)`: coefficients of `F_p` are fixed by Frobenius, so only exponents scale.
    pub fn frobenius_power(&self, e: u32) -> Result<Polynomial, PolyError> {
        let q = self
            .ring
            .characteristic()
            .checked_pow(e)
            .ok_or(PolyError::ExponentOverflow)?;
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| m.scale(q).map(|m| (m, *c)))
            .collect::<Option<Vec<_>>>()
            .ok_or(PolyError::ExponentOverflow)?;
        Ok(Polynomial {
            ring: self.ring.clone(),
            terms,
        })
    }

    /// Wrap terms that are already sorted descending, reduced and nonzero.
    pub(crate) fn from_sorted(ring: &Ring, terms: Vec<(Monomial, u64)>) -> Polynomial {
        debug_assert!(terms
            .windows(2)
            .all(|w| ring.order().cmp(&w[0].0, &w[1].0) == Ordering::Greater));
        debug_assert!(terms.iter().all(|(_, c)| *c != 0));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub(crate) fn into_terms(self) -> Vec<(Monomial, u64)> {
        self.terms
    }

    /// Re-express in a ring with the same variables but another order.
    pub fn to_ring(&self, ring: &Ring) -> Polynomial {
        assert_eq!(ring.nvars(), self.ring.nvars(), "arity mismatch");
        assert_eq!(ring.field(), self.ring.field(), "field mismatch");
        let mut terms = self.terms.clone();
        let order = ring.order();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    /// Embed into a ring with `k` extra leading variables (exponent zero).
    pub fn embed_front(&self, ring: &Ring) -> Polynomial {
        let k = ring.nvars() - self.ring.nvars();
        ring.from_terms(self.terms.iter().map(|(m, c)| {
            let mut e = vec![0; k];
            e.extend_from_slice(m.exponents());
            (Monomial::new(e), *c)
        }))
    }

    /// Drop the first `k` variables; returns `None` if any of them occurs.
    pub fn project_front(&self, ring: &Ring) -> Option<Polynomial> {
        let k = self.ring.nvars() - ring.nvars();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            if m.exponents()[..k].iter().any(|&e| e > 0) {
                return None;
            }
            terms.push((Monomial::new(m.exponents()[k..].to_vec()), *c));
        }
        Some(ring.from_terms(terms))
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        assert!(self.ring == divisor.ring, "ring mismatch");
        let (lm, lc) = divisor.terms.first()?;
        let f = self.ring.field();
        let lc_inv = f.inv(*lc);
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.terms.first().cloned() {
            let qm = lm.quotient_of(&m)?;
            let qc = f.mul(c, lc_inv);
            rem = rem.sub_mul_term(&qm, qc, divisor);
            quot.push((qm, qc));
        }
        Some(Polynomial {
            ring: self.ring.clone(),
            terms: quot,
        })
    }

    /// Apply a map to every exponent vector (e.g. a variable permutation).
    pub fn map_monomials<F: Fn(&Monomial) -> Monomial>(&self, ring: &Ring, f: F) -> Polynomial {
        ring.from_terms(self.terms.iter().map(|(m, c)| (f(m), *c)))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            for (v, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.ring.vars()[v].clone()),
                    _ => factors.push(format!("{}^{}", self.ring.vars()[v], e)),
                }
            }
            if factors.is_empty() {
                write!(f, "{c}")?;
            } else if *c == 1 {
                f.write_str(&factors.join("*"))?;
            } else {
                write!(f, "{}*{}", c, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$checked(rhs).expect("polynomial ring mismatch")
            }
        }
        impl $trait<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(self.ring.field().neg(1))
    }
}

struct Parser<'a> {
    ring: &'a Ring,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn parse_all(mut self) -> Result<Polynomial, ParseError> {
        let f = self.expr()?;
        if self.peek().is_some() {
            return self.err(format!("unexpected `{}`", self.src[self.pos] as char));
        }
        Ok(f)
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.ring.zero();
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                false
            }
            Some(b'+') => {
                self.pos += 1;
                true
            }
            _ => true,
        };
        loop {
            let t = self.term()?;
            acc = if sign { &acc + &t } else { &acc - &t };
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = true;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = false;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                // implicit product: `2x`, `3 y^2`, `2(x+y)`
                Some(c) if c.is_ascii_alphanumeric() || c == b'_' || c == b'(' => {
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return self.err("expected exponent after `^`");
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            let n: u64 = match text.parse() {
                Ok(n) if n <= u32::MAX as u64 => n,
                _ => {
                    self.pos = start;
                    return self.err("exponent too large");
                }
            };
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Ok(self.ring.constant(self.ring.field().from_decimal(digits)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.ring.var_index(name) {
                    Some(i) => Ok(self.ring.var(i)),
                    None => Err(ParseError::UnknownVariable {
                        name: name.to_string(),
                        pos: start,
                    }),
                }
            }
            Some(c) => self.err(format!("unexpected `{}`", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, vars: &[&str]) -> Ring {
        Ring::new(p, vars, TermOrder::DegRevLex).unwrap()
    }

    #[test]
    fn parse_reduces_coefficients() {
        let r = ring(3, &["x", "y", "z"]);
        let f = r.parse("x^2 - y^2*z").unwrap();
        assert_eq!(f.coeff(&Monomial::new(vec![2, 0, 0])), 1);
        assert_eq!(f.coeff(&Monomial::new(vec![0, 2, 1])), 2);
        assert_eq!(f.len(), 2);
        assert_eq!(r.parse("3*x + y").unwrap(), r.var(1));
        assert_eq!(r.parse("x*x*x").unwrap(), r.monomial(&[3, 0, 0]));
        assert_eq!(r.parse("2x y").unwrap(), r.parse("2*x*y").unwrap());
    }

    #[test]
    fn parse_errors() {
        let r = ring(3, &["x", "y"]);
        assert!(matches!(
            r.parse("x + w"),
            Err(ParseError::UnknownVariable { pos: 4, .. })
        ));
        assert!(matches!(r.parse("x +"), Err(ParseError::Syntax { .. })));
        assert!(matches!(r.parse("x^"), Err(ParseError::Syntax { pos: 2, .. })));
        assert!(matches!(r.parse("(x"), Err(ParseError::Syntax { .. })));
        assert!(matches!(r.parse("x )"), Err(ParseError::Syntax { pos: 2, .. })));
    }

    #[test]
    fn arithmetic_examples() {
        let r5 = ring(5, &["x", "y"]);
        let (x, y) = (r5.var(0), r5.var(1));
        assert_eq!(&(&x + &y) * &(&x - &y), r5.parse("x^2 + 4*y^2").unwrap());
        assert_eq!(&x + &r5.zero(), x);
        let r2 = ring(2, &["x", "y"]);
        let s = r2.parse("x + y").unwrap();
        assert_eq!(&s * &s, r2.parse("x^2 + y^2").unwrap());
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let a = ring(3, &["x", "y"]);
        let b = ring(5, &["x", "y"]);
        assert_eq!(a.var(0).checked_add(&b.var(0)), Err(PolyError::RingMismatch));
        let c = a.with_order(TermOrder::Lex);
        assert_eq!(a.var(0).checked_mul(&c.var(0)), Err(PolyError::RingMismatch));
    }

    #[test]
    fn frobenius_examples() {
        let r3 = ring(3, &["x", "y"]);
        let s = r3.parse("x + y").unwrap();
        assert_eq!(s.frobenius_power(1).unwrap(), r3.parse("x^3 + y^3").unwrap());
        let r2 = ring(2, &["x", "y"]);
        assert_eq!(
            r2.parse("x*y^2").unwrap().frobenius_power(2).unwrap(),
            r2.parse("x^4*y^8").unwrap()
        );
        let sq = s.pow(2);
        // oracle: repeated multiplication
        let expected = &(&sq * &sq) * &sq;
        assert_eq!(sq.frobenius_power(1).unwrap(), expected);
        assert_eq!(expected, r3.parse("x^6 + 2*x^3*y^3 + y^6").unwrap());
    }

    #[test]
    fn canonical_printing() {
        let r = ring(3, &["x", "y", "z"]);
        let f = r.parse("-x^2 + y^2*z + 4").unwrap();
        assert_eq!(f.to_string(), "y^2*z + 2*x^2 + 1");
        assert_eq!(r.zero().to_string(), "0");
        assert_eq!(r.parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn term_orders() {
        let a = Monomial::new(vec![1, 0, 2]);
        let b = Monomial::new(vec![0, 2, 1]);
        // same degree; degrevlex compares the last variable: smaller exponent wins
        assert_eq!(TermOrder::DegRevLex.cmp(&a, &b), Ordering::Less);
        assert_eq!(TermOrder::Lex.cmp(&a, &b), Ordering::Greater);
        let t = Monomial::new(vec![1, 0, 0]);
        let big = Monomial::new(vec![0, 5, 5]);
        assert_eq!(TermOrder::Elimination { count: 1 }.cmp(&t, &big), Ordering::Greater);
    }

    #[test]
    fn exact_division() {
        let r = ring(3, &["x", "y", "z"]);
        let h = r.parse("x^2 - y^2*z").unwrap();
        let h3 = h.pow(3);
        assert_eq!(h3.div_exact(&h).unwrap(), h.pow(2));
        assert!(r.parse("x^2 + y").unwrap().div_exact(&h).is_none());
    }

    #[test]
    fn embed_and_project() {
        let r = ring(3, &["x", "y"]);
        let big = r.extend_front(&["t"], TermOrder::Elimination { count: 1 });
        let f = r.parse("x^2 + 2*y").unwrap();
        let g = f.embed_front(&big);
        assert_eq!(g.project_front(&r).unwrap(), f);
        assert!(big.var(0).project_front(&r).is_none());
    }
}
