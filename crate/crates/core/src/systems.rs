//! F-graded systems of ideals `b_e` with `b_e^[p^l] · b_l ⊆ b_{e+l}`.
//!
//! Three constructors are supported:
//! * quotient by `J`: `b_e = (J^[p^e] : J)`, the system of the ring `S/J` itself;
//! * pair `a^t`: `b_e = a^⌈t(p^e - 1)⌉` (or `a^⌈t p^e⌉` under the alternate convention);
//! * product of systems: `b_e` is the product of the factors' `b_e`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::groebner::{GroebnerError, Ideal};
use crate::ideals::{bracket_power, colon, ideal_power, ideal_product, ideal_sum, IdealError};
use crate::poly::{ParseError, PolyError, Polynomial, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("{0} ideal must be nonzero")]
    ZeroIdeal(&'static str),
    #[error("the quotient ideal J must be proper")]
    UnitQuotient,
    #[error("exponent t = {0} must be nonnegative")]
    NegativeExponent(BigRational),
    #[error("product of systems over different rings")]
    RingMismatch,
    #[error("empty product of systems")]
    EmptyProduct,
    #[error("exponent {0} is too large")]
    ExponentOverflow(BigUint),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Ideal(#[from] IdealError),
}

impl From<GroebnerError> for SystemError {
    fn from(e: GroebnerError) -> Self {
        SystemError::Ideal(e.into())
    }
}

impl From<PolyError> for SystemError {
    fn from(e: PolyError) -> Self {
        SystemError::Ideal(e.into())
    }
}

/// Rounding rule for the power of `a` attached to level `e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum CeilingConvention {
    /// `⌈t(p^e - 1)⌉`
    #[default]
    PMinusOne,
    /// `⌈t p^e⌉`
    Pe,
}

/// A nonnegative rational coefficient `t`, evaluated exactly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Exponent(BigRational);

impl Exponent {
    pub fn new(t: BigRational) -> Result<Exponent, SystemError> {
        if t.is_negative() {
            return Err(SystemError::NegativeExponent(t));
        }
        Ok(Exponent(t))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    /// Exact `⌈t(p^e - 1)⌉` or `⌈t p^e⌉`.
    pub fn at(&self, p: u64, e: u32, convention: CeilingConvention) -> BigUint {
        let pe = BigInt::from(p).pow(e);
        let base = match convention {
            CeilingConvention::PMinusOne => pe - 1,
            CeilingConvention::Pe => pe,
        };
        let num = self.0.numer() * base;
        let ceil = num.div_ceil(self.0.denom());
        ceil.to_biguint().expect("nonnegative")
    }
}

/// Unevaluated system description, as read from a problem file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SystemExpr {
    Quotient { j: Vec<String> },
    Pair { a: Vec<String>, t: BigRational },
    Product(Vec<SystemExpr>),
}

#[derive(Debug)]
enum Kind {
    Quotient { j: Ideal },
    Pair { a: Ideal, t: Exponent },
    Product(Vec<FGradedSystem>),
}

#[derive(Debug)]
struct Inner {
    ring: Ring,
    kind: Kind,
    convention: CeilingConvention,
    cache: Mutex<HashMap<u32, Ideal>>,
}

/// An F-graded system with a memo table of computed `b_e`.
#[derive(Debug, Clone)]
pub struct FGradedSystem(Arc<Inner>);

fn nonzero(i: &Ideal) -> bool {
    !i.is_zero()
}

impl FGradedSystem {
    fn build(ring: &Ring, kind: Kind, convention: CeilingConvention) -> FGradedSystem {
        FGradedSystem(Arc::new(Inner {
            ring: ring.clone(),
            kind,
            convention,
            cache: Mutex::new(HashMap::new()),
        }))
    }

    pub fn quotient(j: Ideal) -> Result<FGradedSystem, SystemError> {
        if !nonzero(&j) {
            return Err(SystemError::ZeroIdeal("quotient"));
        }
        if j.is_unit()? {
            return Err(SystemError::UnitQuotient);
        }
        let ring = j.ring().clone();
        Ok(Self::build(&ring, Kind::Quotient { j }, CeilingConvention::default()))
    }

    pub fn pair(a: Ideal, t: BigRational) -> Result<FGradedSystem, SystemError> {
        Self::pair_with(a, t, CeilingConvention::default())
    }

    pub fn pair_with(
        a: Ideal,
        t: BigRational,
        convention: CeilingConvention,
    ) -> Result<FGradedSystem, SystemError> {
        if !nonzero(&a) {
            return Err(SystemError::ZeroIdeal("pair"));
        }
        let t = Exponent::new(t)?;
        let ring = a.ring().clone();
        Ok(Self::build(&ring, Kind::Pair { a, t }, convention))
    }

    pub fn product(factors: Vec<FGradedSystem>) -> Result<FGradedSystem, SystemError> {
        let ring = factors.first().ok_or(SystemError::EmptyProduct)?.ring().clone();
        if factors.iter().any(|f| f.ring() != &ring) {
            return Err(SystemError::RingMismatch);
        }
        Ok(Self::build(&ring, Kind::Product(factors), CeilingConvention::default()))
    }

    /// The system with every `b_e = <1>`: the regular ring itself.
    pub fn trivial(ring: &Ring) -> FGradedSystem {
        Self::pair(Ideal::unit(ring), BigRational::zero()).expect("unit pair is valid")
    }

    pub fn ring(&self) -> &Ring {
        &self.0.ring
    }

    pub fn convention(&self) -> CeilingConvention {
        self.0.convention
    }

    /// `J` for quotient systems; for products, the sum of the factors' `J`.
    pub fn quotient_ideal(&self) -> Result<Option<Ideal>, SystemError> {
        match &self.0.kind {
            Kind::Quotient { j } => Ok(Some(j.clone())),
            Kind::Pair { .. } => Ok(None),
            Kind::Product(fs) => {
                let mut acc: Option<Ideal> = None;
                for f in fs {
                    if let Some(j) = f.quotient_ideal()? {
                        acc = Some(match acc {
                            None => j,
                            Some(prev) => ideal_sum(&prev, &j)?,
                        });
                    }
                }
                Ok(acc)
            }
        }
    }

    /// Dimension used to normalize splitting numbers: `dim S/J` for quotient
    /// systems, the number of variables otherwise.
    pub fn dimension(&self) -> Result<usize, SystemError> {
        match self.quotient_ideal()? {
            Some(j) => Ok(j.krull_dimension()?),
            None => Ok(self.ring().nvars()),
        }
    }

    /// The exponent of `a` at level `e` for pair systems.
    pub fn pair_exponent(&self, e: u32) -> Option<BigUint> {
        match &self.0.kind {
            Kind::Pair { t, .. } => Some(t.at(self.ring().characteristic(), e, self.0.convention)),
            _ => None,
        }
    }

    /// Generators of `a` when this is a single pair system.
    pub fn pair_parts(&self) -> Option<(&Ideal, &Exponent)> {
        match &self.0.kind {
            Kind::Pair { a, t } => Some((a, t)),
            _ => None,
        }
    }

    /// Eventual period in `e` of the fractional parts behind the exponents
    /// of `a`: the multiplicative order of `p` modulo the `p`-free part of the
    /// denominators of `t`. Quotient systems have period 1.
    pub fn period(&self) -> u64 {
        let p = self.ring().characteristic();
        match &self.0.kind {
            Kind::Quotient { .. } => 1,
            Kind::Pair { t, .. } => {
                let mut den = t.value().denom().clone();
                let pb = BigInt::from(p);
                while (&den % &pb).is_zero() {
                    den /= &pb;
                }
                let Some(m) = den.to_u64() else { return 1 };
                if m == 1 {
                    return 1;
                }
                let mut k = 1;
                let mut acc = p % m;
                while acc != 1 {
                    acc = ((acc as u128 * p as u128) % m as u128) as u64;
                    k += 1;
                }
                k
            }
            Kind::Product(fs) => fs.iter().fold(1, |acc, f| acc.lcm(&f.period())),
        }
    }

    pub fn is_quotient(&self) -> bool {
        matches!(self.0.kind, Kind::Quotient { .. })
    }

    /// The ideal `b_e`, memoized.
    pub fn b(&self, e: u32) -> Result<Ideal, SystemError> {
        if e == 0 {
            return Ok(Ideal::unit(self.ring()));
        }
        if let Some(hit) = self.0.cache.lock().unwrap().get(&e) {
            return Ok(hit.clone());
        }
        let ideal = self.compute(e)?;
        self.0
            .cache
            .lock()
            .unwrap()
            .entry(e)
            .or_insert_with(|| ideal.clone());
        Ok(ideal)
    }

    fn compute(&self, e: u32) -> Result<Ideal, SystemError> {
        match &self.0.kind {
            Kind::Quotient { j } => Ok(colon(&bracket_power(j, e)?, j)?),
            Kind::Pair { a, t } => {
                let k = t.at(self.ring().characteristic(), e, self.0.convention);
                let k64 = k.to_u64().ok_or_else(|| SystemError::ExponentOverflow(k.clone()))?;
                Ok(ideal_power(a, k64)?)
            }
            Kind::Product(fs) => {
                let mut acc = Ideal::unit(self.ring());
                for f in fs {
                    acc = ideal_product(&acc, &f.b(e)?)?;
                }
                Ok(acc)
            }
        }
    }

    /// Check `b_e^[p^l] · b_l ⊆ b_{e+l}` for `e + l <= emax`.
    pub fn verify_graded(&self, emax: u32) -> Result<GradedCheck, SystemError> {
        verify_graded_family(emax, |e| self.b(e))
    }

    /// Render the system in problem-file syntax.
    pub fn describe(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for FGradedSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |gens: &[Polynomial]| {
            gens.iter()
                .map(|g| g.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        match &self.0.kind {
            Kind::Quotient { j } => write!(f, "quotient {{ J = [{}] }}", list(j.generators())),
            Kind::Pair { a, t } => {
                write!(f, "pair {{ a = [{}], t = {} }}", list(a.generators()), t.value())
            }
            Kind::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(|s| s.to_string()).collect();
                write!(f, "product [{}]", parts.join(", "))
            }
        }
    }
}

/// Outcome of the F-graded axiom check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedCheck {
    pub holds: bool,
    /// First `(e, l)` with `b_e^[p^l] · b_l ⊄ b_{e+l}`.
    pub counterexample: Option<(u32, u32)>,
}

/// Axiom check for an arbitrary family `e ↦ b_e`.
pub fn verify_graded_family<F>(emax: u32, b: F) -> Result<GradedCheck, SystemError>
where
    F: Fn(u32) -> Result<Ideal, SystemError>,
{
    for total in 2..=emax {
        let target = b(total)?;
        let gb = target.groebner()?;
        for e in 1..total {
            let l = total - e;
            let left = bracket_power(&b(e)?, l)?;
            let right = b(l)?;
            let ok = left.generators().iter().all(|g| {
                right
                    .generators()
                    .iter()
                    .all(|h| gb.contains(&(g * h)))
            });
            if !ok {
                return Ok(GradedCheck {
                    holds: false,
                    counterexample: Some((e, l)),
                });
            }
        }
    }
    Ok(GradedCheck {
        holds: true,
        counterexample: None,
    })
}

/// Build a system from its parsed description.
pub fn make_system(expr: &SystemExpr, ring: &Ring, convention: CeilingConvention) -> Result<FGradedSystem, SystemError> {
    let parse_all = |gens: &[String]| -> Result<Ideal, SystemError> {
        let polys = gens
            .iter()
            .map(|g| ring.parse(g))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Ideal::new(ring, polys)?)
    };
    match expr {
        SystemExpr::Quotient { j } => FGradedSystem::quotient(parse_all(j)?),
        SystemExpr::Pair { a, t } => FGradedSystem::pair_with(parse_all(a)?, t.clone(), convention),
        SystemExpr::Product(parts) => {
            let factors = parts
                .iter()
                .map(|p| make_system(p, ring, convention))
                .collect::<Result<Vec<_>, _>>()?;
            FGradedSystem::product(factors)
        }
    }
}
