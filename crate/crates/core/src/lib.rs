//! Splitting numbers, F-signatures, splitting primes and F-splitting ratios
//! of pairs over prime fields, computed in a regular ambient polynomial ring.

pub mod cli;
pub mod field;
pub mod groebner;
pub mod ideals;
pub mod linear;
pub mod newton;
pub mod poly;
pub mod signature;
pub mod systems;

pub use field::PrimeField;
pub use groebner::{buchberger, GroebnerBasis, GroebnerError, Ideal, Limits, QuotientLength};
pub use poly::{Monomial, Polynomial, Ring, TermOrder};
