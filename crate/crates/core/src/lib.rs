//! Exact-arithmetic toolkit for deciding when two circle subgroups of SU(3)
//! can be amalgamated at the level of characters.
//!
//! A circle subgroup is recorded by its exponent vector `v = (v1, v2, v3)`
//! (integers summing to zero with gcd 1).  Restricting a polynomial character
//! `P` of SU(3) to such a circle turns each Schur polynomial `s_λ(x1, x2, x3)`
//! into a Laurent polynomial in one variable `z`.  The central question: given
//! `v` and `w`, is there a pair of Schur-positive characters `P`, `Q`, both
//! injective on their circles, with `P_v = Q_w` as Laurent polynomials?
//!
//! The crate answers this exactly.  [`symfunc`] supplies Schur polynomials and
//! the fixed enumeration of SU(3) shapes, [`laurent`] the Laurent-polynomial
//! and cyclotomic machinery, [`polyhedra`] the rational linear programs whose
//! lattice points are the matching pairs, [`ilp`] an exact branch-and-bound
//! and a direct lattice enumerator, [`lattice`] a Hermite/LLL engine for pure
//! integer feasibility, [`search`] the user-facing solver and certificate
//! checker, and [`relaxed`] the variant where injectivity is dropped and the
//! image curve itself becomes the object of study.
//!
//! All arithmetic is over `BigRational`/`BigInt`; no floating point is used
//! anywhere, so every feasibility verdict and every certificate is exact.

pub mod error;
pub mod ilp;
pub mod lattice;
pub mod laurent;
pub mod polyhedra;
pub mod relaxed;
pub mod search;
pub mod symfunc;

mod bivar;
mod simplex;

pub use error::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
