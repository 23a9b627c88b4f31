//! Splitting ideals, splitting numbers, F-signature sequences, F-purity,
//! splitting-prime candidates and F-splitting ratios of an F-graded system.
//!
//! Everything happens in the regular ambient ring `S = F_p[x_1..x_n]` with
//! `n = <x_1, ..., x_n>`:
//!
//! * `I_e = (n^[p^e] : b_e)` is the splitting ideal at level `e`;
//! * `a_e = length(S / I_e)` is the splitting number;
//! * `s_e = a_e / p^(e d)` approximates the F-signature;
//! * `r_e = a_e / p^(e d')` with `d' = dim S/P` approximates the splitting ratio.
//!
//! `a_e` has two independent routes: the Groebner route (colon ideal, then
//! standard monomials) and the linear route (rank of the multiplication map
//! on the monomial box). [`Method::Both`] insists that they agree.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::groebner::{GroebnerError, Ideal};
use crate::ideals::{bracket_power, colon, ideal_equals, ideal_sum, IdealError};
use crate::linear::{box_colon_basis, multiplication_rank};
use crate::poly::{PolyError, Polynomial};
use crate::systems::{FGradedSystem, SystemError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error(transparent)]
    System(#[from] SystemError),
    #[error("internal error: splitting number at e = {e} is {groebner} by Groebner bases but {linear} by linear algebra")]
    MethodDisagreement {
        e: u32,
        groebner: BigUint,
        linear: BigUint,
    },
    #[error("internal error: the two splitting-ideal routes differ at e = {0}")]
    IdealDisagreement(u32),
    #[error("no splitting-prime candidate: {0}")]
    NoPrimeCandidate(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl From<GroebnerError> for SignatureError {
    fn from(e: GroebnerError) -> Self {
        SignatureError::System(e.into())
    }
}

impl From<PolyError> for SignatureError {
    fn from(e: PolyError) -> Self {
        SignatureError::System(e.into())
    }
}

impl From<IdealError> for SignatureError {
    fn from(e: IdealError) -> Self {
        SignatureError::System(e.into())
    }
}

impl SignatureError {
    pub fn is_resource_cap(&self) -> bool {
        matches!(
            self,
            SignatureError::System(SystemError::Ideal(IdealError::Groebner(
                GroebnerError::ResourceCap { .. }
            )))
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    Groebner,
    #[default]
    Linear,
    Both,
}

/// Tunables shared by the pipeline entry points.
#[derive(Debug, Clone, Default)]
pub struct Options {
    pub method: Method,
    /// Keep generators of degree `< threshold` when extracting the prime
    /// candidate; the default keeps degree `< p^emax / 2`.
    pub threshold_degree: Option<u64>,
    /// Override of the normalization dimension `d`.
    pub dimension: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub e: u32,
    pub a_e: BigUint,
    pub s_e: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioReport {
    pub prime: Vec<Polynomial>,
    pub d_prime: usize,
    pub rows: Vec<(u32, BigRational)>,
    pub estimate: BigRational,
    pub error_envelope: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplittingReport {
    pub p: u64,
    pub vars: Vec<String>,
    pub system: String,
    pub d: usize,
    pub rows: Vec<Row>,
    pub estimate: BigRational,
    pub error_envelope: BigRational,
    /// Levels used by the limit fit are congruent modulo this period.
    pub fit_period: u64,
    pub gamma: Vec<u32>,
    pub index: Option<u64>,
    pub f_pure: bool,
    pub prime_candidate: Option<Vec<Polynomial>>,
    pub ratio: Option<RatioReport>,
    /// Set when a resource cap stopped the computation early.
    pub partial: Option<String>,
}

fn big_pow(p: u64, k: u64) -> BigUint {
    BigUint::from(p).pow(k as u32)
}

fn n_bracket(sys: &FGradedSystem, e: u32) -> Result<Ideal, SignatureError> {
    Ok(bracket_power(&Ideal::maximal(sys.ring()), e)?)
}

/// `I_e = (n^[p^e] : b_e)`.
pub fn splitting_ideal(sys: &FGradedSystem, e: u32, method: Method) -> Result<Ideal, SignatureError> {
    let b = sys.b(e)?;
    let ring = sys.ring();
    let q = ring.characteristic().pow(e);
    match method {
        Method::Groebner => Ok(colon(&n_bracket(sys, e)?, &b)?),
        Method::Linear => Ok(box_colon_basis(ring, q, b.generators())?),
        Method::Both => {
            let reference = colon(&n_bracket(sys, e)?, &b)?;
            let linear = box_colon_basis(ring, q, b.generators())?;
            if !ideal_equals(&reference, &linear)? {
                return Err(SignatureError::IdealDisagreement(e));
            }
            Ok(linear)
        }
    }
}

/// `a_e = length(S / I_e)`.
pub fn splitting_number(sys: &FGradedSystem, e: u32, method: Method) -> Result<BigUint, SignatureError> {
    let by_groebner = || -> Result<BigUint, SignatureError> {
        let ideal = splitting_ideal(sys, e, Method::Groebner)?;
        ideal
            .quotient_length()?
            .finite()
            .cloned()
            .ok_or_else(|| SignatureError::Invariant(format!("I_{e} is not zero-dimensional")))
    };
    let by_linear = || -> Result<BigUint, SignatureError> {
        let b = sys.b(e)?;
        let q = sys.ring().characteristic().pow(e);
        Ok(multiplication_rank(sys.ring(), q, b.generators())?)
    };
    match method {
        Method::Groebner => by_groebner(),
        Method::Linear => by_linear(),
        Method::Both => {
            let (g, l) = (by_groebner()?, by_linear()?);
            if g != l {
                return Err(SignatureError::MethodDisagreement {
                    e,
                    groebner: g,
                    linear: l,
                });
            }
            Ok(g)
        }
    }
}

/// Fit `v_e ≈ v_∞ + c_1 p^-e + c_2 p^-2e` through the last (up to) three
/// values. Returns the limit estimate and the envelope
/// `|c_1| p^-E + |c_2| p^-2E` at the last level `E`. With a single value the
/// envelope is the trivial bound 1.
pub fn fit_limit(values: &[(u32, BigRational)], p: u64) -> (BigRational, BigRational) {
    fit_limit_periodic(values, p, 1)
}

/// [`fit_limit`] restricted to the levels `e ≡ E (mod period)`, where `E` is
/// the last level. Sequences whose correction terms repeat with that period
/// then fit exactly.
pub fn fit_limit_periodic(values: &[(u32, BigRational)], p: u64, period: u64) -> (BigRational, BigRational) {
    let period = period.max(1);
    let Some(&(last, _)) = values.last() else {
        return (BigRational::zero(), BigRational::one());
    };
    let values: Vec<(u32, BigRational)> = values
        .iter()
        .filter(|(e, _)| (last - e) as u64 % period == 0)
        .cloned()
        .collect();
    let k = values.len().min(3);
    if k == 0 {
        return (BigRational::zero(), BigRational::one());
    }
    let tail = &values[values.len() - k..];
    if k == 1 {
        return (tail[0].1.clone(), BigRational::one());
    }
    let x = |e: u32| BigRational::new(BigInt::one(), BigInt::from(p).pow(e));
    // rows [1, x, x^2][..k] · coeffs = v
    let mut m: Vec<Vec<BigRational>> = tail
        .iter()
        .map(|(e, v)| {
            let xe = x(*e);
            let mut row = vec![BigRational::one(), xe.clone()];
            if k == 3 {
                row.push(&xe * &xe);
            }
            row.push(v.clone());
            row
        })
        .collect();
    for col in 0..k {
        let piv = (col..k).find(|&r| !m[r][col].is_zero()).expect("distinct levels");
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for c in col..=k {
            m[col][c] = &m[col][c] * &inv;
        }
        for r in 0..k {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..=k {
                    let delta = &factor * &m[col][c];
                    m[r][c] = &m[r][c] - delta;
                }
            }
        }
    }
    let coeffs: Vec<BigRational> = m.iter().map(|row| row[k].clone()).collect();
    let last = x(tail[k - 1].0);
    let mut envelope = coeffs[1].abs() * &last;
    if k == 3 {
        envelope += coeffs[2].abs() * &last * &last;
    }
    (coeffs[0].clone(), envelope)
}

/// Observed `Γ ∩ [1, emax]` and its gcd.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Semigroup {
    pub gamma: Vec<u32>,
    pub index: Option<u64>,
    /// `e, e' ∈ Γ` with `e + e' <= emax` implies `e + e' ∈ Γ`.
    pub closed: bool,
}

pub fn semigroup_data(rows: &[Row]) -> Semigroup {
    let gamma: Vec<u32> = rows.iter().filter(|r| !r.a_e.is_zero()).map(|r| r.e).collect();
    let index = gamma.iter().fold(None, |acc: Option<u64>, &e| {
        Some(match acc {
            None => e as u64,
            Some(g) => g.gcd(&(e as u64)),
        })
    });
    let emax = rows.iter().map(|r| r.e).max().unwrap_or(0);
    let set: BTreeSet<u32> = gamma.iter().copied().collect();
    let closed = gamma.iter().all(|&a| {
        gamma
            .iter()
            .all(|&b| a + b > emax || set.contains(&(a + b)))
    });
    Semigroup { gamma, index, closed }
}

/// Splitting numbers and normalized signatures for `e = 1..=emax`.
pub fn signature_sequence(sys: &FGradedSystem, emax: u32, opts: &Options) -> Result<SplittingReport, SignatureError> {
    let ring = sys.ring();
    let p = ring.characteristic();
    let n = ring.nvars() as u64;
    let d = match opts.dimension {
        Some(d) => d,
        None => sys.dimension()?,
    };
    let mut rows = Vec::new();
    let mut partial = None;
    for e in 1..=emax {
        let a_e = match splitting_number(sys, e, opts.method) {
            Ok(a) => a,
            Err(err) if err.is_resource_cap() => {
                partial = Some(format!("{err}; largest completed e = {}", e - 1));
                break;
            }
            Err(err) => return Err(err),
        };
        if a_e > big_pow(p, e as u64 * n) {
            return Err(SignatureError::Invariant(format!("a_{e} = {a_e} exceeds p^(e n)")));
        }
        let s_e = BigRational::new(a_e.clone().into(), big_pow(p, e as u64 * d as u64).into());
        if s_e > BigRational::one() {
            return Err(SignatureError::Invariant(format!(
                "s_{e} = {s_e} exceeds 1; d = {d} is too small"
            )));
        }
        rows.push(Row { e, a_e, s_e });
    }
    let values: Vec<(u32, BigRational)> = rows.iter().map(|r| (r.e, r.s_e.clone())).collect();
    let fit_period = sys.period();
    let (estimate, error_envelope) = fit_limit_periodic(&values, p, fit_period);
    let semigroup = semigroup_data(&rows);
    Ok(SplittingReport {
        p,
        vars: ring.vars().to_vec(),
        system: sys.describe(),
        d,
        f_pure: !semigroup.gamma.is_empty(),
        gamma: semigroup.gamma,
        index: semigroup.index,
        rows,
        estimate,
        error_envelope,
        fit_period,
        prime_candidate: None,
        ratio: None,
        partial,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FPurity {
    pub f_pure: bool,
    /// Smallest `e` with `a_e != 0`.
    pub witness: Option<u32>,
    pub checked_up_to: u32,
}

/// Sound when positive; a negative answer only covers `e <= emax`.
pub fn is_f_pure(sys: &FGradedSystem, emax: u32, method: Method) -> Result<FPurity, SignatureError> {
    for e in 1..=emax {
        if !splitting_number(sys, e, method)?.is_zero() {
            return Ok(FPurity {
                f_pure: true,
                witness: Some(e),
                checked_up_to: e,
            });
        }
    }
    Ok(FPurity {
        f_pure: false,
        witness: None,
        checked_up_to: emax,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Compatibility {
    pub compatible: bool,
    /// `(e, b_e ⊆ (C^[p^e] : C))` for each level checked.
    pub transcript: Vec<(u32, bool)>,
    pub note: Option<String>,
}

/// Check `b_e ⊆ (C^[p^e] : C)` for `1 <= e <= emax`.
pub fn compatibility_check(sys: &FGradedSystem, c: &Ideal, emax: u32) -> Result<Compatibility, SignatureError> {
    if c.is_zero() {
        return Ok(Compatibility {
            compatible: true,
            transcript: Vec::new(),
            note: Some("zero ideal is compatible in a domain; nothing to check".into()),
        });
    }
    let mut transcript = Vec::new();
    for e in 1..=emax {
        let target = colon(&bracket_power(c, e)?, c)?;
        let ok = sys.b(e)?.is_subset_of(&target)?;
        transcript.push((e, ok));
        if !ok {
            return Ok(Compatibility {
                compatible: false,
                transcript,
                note: None,
            });
        }
    }
    Ok(Compatibility {
        compatible: true,
        transcript,
        note: None,
    })
}

#[derive(Debug, Clone)]
pub struct PrimeCandidate {
    pub ideal: Option<Ideal>,
    pub compatibility: Option<Compatibility>,
    pub diagnostics: Vec<String>,
}

/// Heuristic splitting-prime candidate: low-degree generators of the reduced
/// basis of `I_emax`, accepted only if proper and compatible up to `emax`.
pub fn splitting_prime_candidate(
    sys: &FGradedSystem,
    emax: u32,
    opts: &Options,
) -> Result<PrimeCandidate, SignatureError> {
    let ring = sys.ring();
    let p = ring.characteristic();
    let mut diagnostics = Vec::new();
    let purity = is_f_pure(sys, emax, opts.method)?;
    if !purity.f_pure {
        diagnostics.push(format!("not F-pure up to e = {emax}"));
        return Ok(PrimeCandidate {
            ideal: None,
            compatibility: None,
            diagnostics,
        });
    }
    let ie = splitting_ideal(sys, emax, opts.method)?;
    let q = p.pow(emax);
    let keep = |deg: u64| match opts.threshold_degree {
        Some(t) => deg < t,
        None => 2 * deg < q,
    };
    let mut kept = Vec::new();
    for g in ie.groebner()?.elements() {
        let deg = g.total_degree().unwrap_or(0);
        if keep(deg) {
            kept.push(g.clone());
        } else {
            diagnostics.push(format!("dropped {g} (degree {deg})"));
        }
    }
    let candidate = Ideal::new(ring, kept)?;
    if candidate.is_unit()? {
        diagnostics.push("candidate is the unit ideal".into());
        return Ok(PrimeCandidate {
            ideal: None,
            compatibility: None,
            diagnostics,
        });
    }
    let compat = compatibility_check(sys, &candidate, emax)?;
    if !compat.compatible {
        diagnostics.push("candidate failed the compatibility check".into());
        return Ok(PrimeCandidate {
            ideal: None,
            compatibility: Some(compat),
            diagnostics,
        });
    }
    Ok(PrimeCandidate {
        ideal: Some(candidate),
        compatibility: Some(compat),
        diagnostics,
    })
}

/// `r_e = a_e / p^(e d')` from already computed rows, where
/// `d' = dim S/(C + J)` (or `dim S/C` for pair systems).
pub fn splitting_ratio(sys: &FGradedSystem, rows: &[Row], prime: &Ideal) -> Result<RatioReport, SignatureError> {
    let p = sys.ring().characteristic();
    let full = match sys.quotient_ideal()? {
        Some(j) => ideal_sum(prime, &j)?,
        None => prime.clone(),
    };
    let d_prime = full.krull_dimension()?;
    let mut ratio_rows = Vec::new();
    for row in rows {
        let r = BigRational::new(row.a_e.clone().into(), big_pow(p, row.e as u64 * d_prime as u64).into());
        if !row.a_e.is_zero() && (r > BigRational::one() || !r.is_positive()) {
            return Err(SignatureError::Invariant(format!("r_{} = {r} is outside (0, 1]", row.e)));
        }
        ratio_rows.push((row.e, r));
    }
    let (estimate, error_envelope) = fit_limit_periodic(&ratio_rows, p, sys.period());
    Ok(RatioReport {
        prime: prime.generators().to_vec(),
        d_prime,
        rows: ratio_rows,
        estimate,
        error_envelope,
    })
}

/// Signature sequence plus splitting-prime candidate and ratio rows.
pub fn ratio_report(sys: &FGradedSystem, emax: u32, opts: &Options) -> Result<SplittingReport, SignatureError> {
    let mut report = signature_sequence(sys, emax, opts)?;
    if report.partial.is_some() || !report.f_pure {
        return Ok(report);
    }
    let cand = splitting_prime_candidate(sys, emax, opts)?;
    let prime = cand
        .ideal
        .ok_or_else(|| SignatureError::NoPrimeCandidate(cand.diagnostics.join("; ")))?;
    report.ratio = Some(splitting_ratio(sys, &report.rows, &prime)?);
    report.prime_candidate = Some(prime.generators().to_vec());
    Ok(report)
}
