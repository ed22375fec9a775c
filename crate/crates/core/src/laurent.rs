//! Laurent polynomials in one variable, restriction of symmetric polynomials
//! to a circle subgroup, and cyclotomic utilities.
//!
//! A circle subgroup of SU(3) is the image of `z ↦ diag(z^{v1}, z^{v2},
//! z^{v3})` for an exponent vector `v` with `v1+v2+v3 = 0` and `gcd = 1`.
//! Restricting a polynomial character along that map sends the monomial
//! `x^m` to `z^{m·v}`, so characters become Laurent polynomials.  This module
//! implements that substitution plus the small amount of univariate algebra
//! the rest of the crate needs: derivatives, evaluation at 1 and at the
//! central cube roots of unity, cyclotomic polynomials, and monic gcds.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::symfunc::SymPoly;
use crate::{Error, Result};

/// Integer exponents of a circle subgroup: sum zero, gcd one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector {
    entries: [i64; 3],
}

impl ExponentVector {
    pub fn new(entries: [i64; 3]) -> Result<Self> {
        let reject = |reason: &str| Error::InvalidExponentVector {
            vector: entries,
            reason: reason.to_string(),
        };
        if entries.iter().sum::<i64>() != 0 {
            return Err(reject("entries must sum to zero"));
        }
        let gcd = entries
            .iter()
            .fold(0u64, |g, &e| num_integer::gcd(g, e.unsigned_abs()));
        if gcd != 1 {
            return Err(reject("entries must have gcd 1"));
        }
        Ok(ExponentVector { entries })
    }

    pub fn entries(&self) -> [i64; 3] {
        self.entries
    }

    pub fn negated(&self) -> Self {
        ExponentVector {
            entries: [-self.entries[0], -self.entries[1], -self.entries[2]],
        }
    }

    /// Whether no entry vanishes; the curve-side constructions require this.
    pub fn all_nonzero(&self) -> bool {
        self.entries.iter().all(|&e| e != 0)
    }

    /// Entries sorted descending; exponent vectors that differ only by a
    /// coordinate permutation define the same subgroup.
    pub fn canonical(&self) -> Self {
        let mut sorted = self.entries;
        sorted.sort_unstable_by(|x, y| y.cmp(x));
        ExponentVector { entries: sorted }
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{})",
            self.entries[0], self.entries[1], self.entries[2]
        )
    }
}

impl FromStr for ExponentVector {
    type Err = Error;

    /// Parses `"a,b,c"`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let fail = || Error::InvalidParameter {
            name: "exponent vector",
            reason: format!("expected three comma-separated integers, got {s:?}"),
        };
        if parts.len() != 3 {
            return Err(fail());
        }
        let mut entries = [0i64; 3];
        for (slot, part) in entries.iter_mut().zip(parts) {
            *slot = part.parse().map_err(|_| fail())?;
        }
        ExponentVector::new(entries)
    }
}

/// Sparse Laurent polynomial over the rationals.  The map holds no zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, BigRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(0, BigRational::one())
    }

    pub fn monomial(exponent: i64, coeff: BigRational) -> Self {
        let mut out = LaurentPoly::zero();
        out.add_term(exponent, coeff);
        out
    }

    /// Builds from `(exponent, integer coefficient)` pairs.
    pub fn from_integer_terms<I: IntoIterator<Item = (i64, i64)>>(terms: I) -> Self {
        let mut out = LaurentPoly::zero();
        for (e, c) in terms {
            out.add_term(e, BigRational::from(BigInt::from(c)));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &BigRational)> {
        self.coeffs.iter()
    }

    pub fn coefficient(&self, exponent: i64) -> BigRational {
        self.coeffs
            .get(&exponent)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn add_term(&mut self, exponent: i64, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self
            .coeffs
            .entry(exponent)
            .or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.coeffs.remove(&exponent);
        }
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in other.coeffs.iter() {
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in other.coeffs.iter() {
            out.add_term(e, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, -c.clone())).collect(),
        }
    }

    pub fn scale(&self, factor: &BigRational) -> LaurentPoly {
        if factor.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&e, c)| (e, c * factor))
                .collect(),
        }
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&ea, ca) in self.coeffs.iter() {
            for (&eb, cb) in other.coeffs.iter() {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> LaurentPoly {
        let mut out = LaurentPoly::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Multiplies by `z^shift`.
    pub fn shifted(&self, shift: i64) -> LaurentPoly {
        LaurentPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&e, c)| (e + shift, c.clone()))
                .collect(),
        }
    }

    /// Strips the power of `z` dividing the polynomial, leaving a nonzero
    /// constant term (the zero polynomial is returned unchanged).
    pub fn to_ordinary(&self) -> LaurentPoly {
        match self.min_exponent() {
            Some(min) => self.shifted(-min),
            None => LaurentPoly::zero(),
        }
    }

    pub fn derivative(&self) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&e, c) in self.coeffs.iter() {
            out.add_term(e - 1, c * BigRational::from(BigInt::from(e)));
        }
        out
    }

    pub fn eval_at_one(&self) -> BigRational {
        self.coeffs.values().sum()
    }

    /// True if every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer())
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, coeff) in self.coeffs.iter() {
            let abs = coeff.abs();
            if first {
                if coeff.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if coeff.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if e == 0 {
                write!(f, "{abs}")?;
            } else {
                let var = if e == 1 {
                    "z".to_string()
                } else {
                    format!("z^{e}")
                };
                if abs.is_one() {
                    write!(f, "{var}")?;
                } else {
                    write!(f, "{abs}*{var}")?;
                }
            }
        }
        Ok(())
    }
}

/// Restriction along the circle with exponent vector `v`: the monomial
/// `x1^{m1} x2^{m2} x3^{m3}` maps to `z^{m·v}`.
pub fn substitute(poly: &SymPoly, v: &ExponentVector) -> LaurentPoly {
    let [v1, v2, v3] = v.entries();
    let mut out = LaurentPoly::zero();
    for (&m, c) in poly.terms() {
        let e = i128::from(m[0]) * i128::from(v1)
            + i128::from(m[1]) * i128::from(v2)
            + i128::from(m[2]) * i128::from(v3);
        let e = i64::try_from(e).expect("substituted exponent fits in i64");
        out.add_term(e, BigRational::from(c.clone()));
    }
    out
}

/// An element of `Q[ξ]` where `ξ` is a primitive cube root of unity
/// (`ξ² = -1 - ξ`), written `a + b·ξ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicValue {
    pub rational_part: BigRational,
    pub xi_part: BigRational,
}

impl CyclotomicValue {
    pub fn zero() -> Self {
        CyclotomicValue {
            rational_part: BigRational::zero(),
            xi_part: BigRational::zero(),
        }
    }

    pub fn from_rational(r: BigRational) -> Self {
        CyclotomicValue {
            rational_part: r,
            xi_part: BigRational::zero(),
        }
    }

    pub fn add(&self, other: &CyclotomicValue) -> CyclotomicValue {
        CyclotomicValue {
            rational_part: &self.rational_part + &other.rational_part,
            xi_part: &self.xi_part + &other.xi_part,
        }
    }

    pub fn scale(&self, factor: &BigRational) -> CyclotomicValue {
        CyclotomicValue {
            rational_part: &self.rational_part * factor,
            xi_part: &self.xi_part * factor,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.xi_part.is_zero()
    }
}

impl fmt::Display for CyclotomicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.xi_part.is_zero() {
            write!(f, "{}", self.rational_part)
        } else {
            write!(f, "{} + ({})*xi", self.rational_part, self.xi_part)
        }
    }
}

/// Value of a symmetric polynomial at the central element `(ξ, ξ, ξ)`:
/// a monomial of total degree `d` contributes `ξ^{d mod 3}` times its
/// coefficient.  For a Schur-positive `P` this differs from `P(1,1,1)`
/// exactly when some shape of total degree not divisible by three occurs,
/// which is the injectivity criterion for every restriction `P_v`.
pub fn eval_at_center(poly: &SymPoly) -> CyclotomicValue {
    let mut out = CyclotomicValue::zero();
    for (&m, c) in poly.terms() {
        let d = (u64::from(m[0]) + u64::from(m[1]) + u64::from(m[2])) % 3;
        let c = BigRational::from(c.clone());
        match d {
            0 => out.rational_part += c,
            1 => out.xi_part += c,
            _ => {
                // ξ² = -1 - ξ
                out.rational_part -= &c;
                out.xi_part -= c;
            }
        }
    }
    out
}

/// Quotient and remainder of ordinary polynomials (nonnegative exponents,
/// nonzero divisor).
pub fn div_rem(num: &LaurentPoly, den: &LaurentPoly) -> (LaurentPoly, LaurentPoly) {
    assert!(!den.is_zero(), "division by zero polynomial");
    assert!(
        num.min_exponent().unwrap_or(0) >= 0 && den.min_exponent().unwrap_or(0) >= 0,
        "div_rem expects ordinary polynomials"
    );
    let den_deg = den.max_exponent().expect("nonzero divisor");
    let den_lead = den.coefficient(den_deg);
    let mut rem = num.clone();
    let mut quot = LaurentPoly::zero();
    while let Some(deg) = rem.max_exponent() {
        if deg < den_deg {
            break;
        }
        let factor = rem.coefficient(deg) / &den_lead;
        let shift = deg - den_deg;
        quot.add_term(shift, factor.clone());
        rem = rem.sub(&den.shifted(shift).scale(&factor));
    }
    (quot, rem)
}

/// Exact division; panics on a nonzero remainder.
pub fn exact_div(num: &LaurentPoly, den: &LaurentPoly) -> LaurentPoly {
    let (q, r) = div_rem(num, den);
    assert!(r.is_zero(), "inexact polynomial division");
    q
}

/// True when `den` divides `num` after both are stripped to ordinary form.
pub fn divides(den: &LaurentPoly, num: &LaurentPoly) -> bool {
    if num.is_zero() {
        return true;
    }
    let (_, r) = div_rem(&num.to_ordinary(), &den.to_ordinary());
    r.is_zero()
}

/// The `n`-th cyclotomic polynomial, computed as `(z^n - 1)` divided by the
/// cyclotomic polynomials of the proper divisors of `n`.
pub fn cyclotomic(n: u32) -> LaurentPoly {
    assert!(n >= 1, "cyclotomic index starts at 1");
    let mut poly = LaurentPoly::from_integer_terms([(i64::from(n), 1), (0, -1)]);
    for d in 1..n {
        if n % d == 0 {
            poly = exact_div(&poly, &cyclotomic(d));
        }
    }
    poly
}

/// Monic gcd.  Laurent inputs are first stripped of their power-of-`z`
/// content, so the result is an ordinary polynomial with nonzero constant
/// term (or zero if both inputs are zero).
pub fn gcd(f: &LaurentPoly, g: &LaurentPoly) -> LaurentPoly {
    let mut a = f.to_ordinary();
    let mut b = g.to_ordinary();
    while !b.is_zero() {
        let (_, r) = div_rem(&a, &b);
        a = b;
        b = r;
    }
    match a.max_exponent() {
        Some(deg) => {
            let lead = a.coefficient(deg);
            a.scale(&lead.recip())
        }
        None => a,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symfunc::{schur, Partition};

    fn ev(entries: [i64; 3]) -> ExponentVector {
        ExponentVector::new(entries).unwrap()
    }

    #[test]
    fn exponent_vector_validation() {
        assert!(ExponentVector::new([-1, 0, 1]).is_ok());
        assert!(ExponentVector::new([1, 1, 1]).is_err());
        assert!(ExponentVector::new([2, 0, -2]).is_err());
        assert!(ExponentVector::new([0, 0, 0]).is_err());
        assert_eq!("1, 2,-3".parse::<ExponentVector>().unwrap(), ev([1, 2, -3]));
        assert!("1,2".parse::<ExponentVector>().is_err());
        assert!("1,2,x".parse::<ExponentVector>().is_err());
        assert_eq!(ev([-1, 0, 1]).canonical(), ev([1, 0, -1]));
        assert_eq!(ev([1, 2, -3]).negated(), ev([-1, -2, 3]));
    }

    #[test]
    fn substitution_of_small_schur_polynomials() {
        let v = ev([1, 1, -2]);
        let s1 = substitute(&schur(&Partition::new(&[1]).unwrap()), &v);
        assert_eq!(s1, LaurentPoly::from_integer_terms([(1, 2), (-2, 1)]));
        let s11 = substitute(&schur(&Partition::new(&[1, 1]).unwrap()), &v);
        assert_eq!(s11, LaurentPoly::from_integer_terms([(2, 1), (-1, 2)]));
        let s111 = substitute(&schur(&Partition::new(&[1, 1, 1]).unwrap()), &v);
        assert_eq!(s111, LaurentPoly::one());
    }

    /// The motivating example: P = s_{1,1} + s_2 on (-1,0,1) matches
    /// Q = 3 s_{1,1,1} + s_1 + s_{1,1} on (-2,1,1).
    #[test]
    fn matching_pair_of_characters() {
        let p = |parts: &[u32]| schur(&Partition::new(parts).unwrap());
        let v = ev([-1, 0, 1]);
        let w = ev([-2, 1, 1]);
        let lhs = substitute(&p(&[1, 1]), &v).add(&substitute(&p(&[2]), &v));
        let rhs = substitute(&p(&[1, 1, 1]), &w)
            .scale(&BigRational::from(BigInt::from(3)))
            .add(&substitute(&p(&[1]), &w))
            .add(&substitute(&p(&[1, 1]), &w));
        assert_eq!(
            lhs,
            LaurentPoly::from_integer_terms([(-2, 1), (-1, 2), (0, 3), (1, 2), (2, 1)])
        );
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.eval_at_one(), BigRational::from(BigInt::from(9)));
    }

    #[test]
    fn derivative_and_eval() {
        let f = LaurentPoly::from_integer_terms([(-2, 1), (-1, 2), (0, 3), (1, 2), (2, 1)]);
        let df = f.derivative();
        assert_eq!(
            df,
            LaurentPoly::from_integer_terms([(-3, -2), (-2, -2), (0, 2), (1, 2)])
        );
        assert!(df.eval_at_one().is_zero());
    }

    #[test]
    fn center_evaluation() {
        let p = |parts: &[u32]| schur(&Partition::new(parts).unwrap());
        let rational = |n: i64| BigRational::from(BigInt::from(n));
        // s_1 has all monomials in degree 1: value 3ξ.
        let s1 = eval_at_center(&p(&[1]));
        assert_eq!(s1.rational_part, rational(0));
        assert_eq!(s1.xi_part, rational(3));
        // s_{1,1,1} has degree 3: value 1.
        let s111 = eval_at_center(&p(&[1, 1, 1]));
        assert!(s111.is_rational());
        assert_eq!(s111.rational_part, rational(1));
        // P = s_{1,1} + s_2 is concentrated in degree 2: value 9ξ² = -9 - 9ξ,
        // different from P(1,1,1) = 9, so every restriction is injective.
        let combined = p(&[1, 1]).add(&p(&[2]));
        let at_center = eval_at_center(&combined);
        assert_eq!(at_center.rational_part, rational(-9));
        assert_eq!(at_center.xi_part, rational(-9));
        assert_ne!(at_center.rational_part, combined.eval_at_ones().into());
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic(1), LaurentPoly::from_integer_terms([(1, 1), (0, -1)]));
        assert_eq!(cyclotomic(2), LaurentPoly::from_integer_terms([(1, 1), (0, 1)]));
        assert_eq!(
            cyclotomic(3),
            LaurentPoly::from_integer_terms([(2, 1), (1, 1), (0, 1)])
        );
        assert_eq!(
            cyclotomic(6),
            LaurentPoly::from_integer_terms([(2, 1), (1, -1), (0, 1)])
        );
        // Independent route: z^8 - 1 = (z^4 - 1)(z^4 + 1) and the divisors
        // 1, 2, 4 of 8 contribute exactly z^4 - 1.
        let z8 = LaurentPoly::from_integer_terms([(8, 1), (0, -1)]);
        let z4 = LaurentPoly::from_integer_terms([(4, 1), (0, -1)]);
        assert_eq!(cyclotomic(8), exact_div(&z8, &z4));
        // Product over all divisors of 12 reassembles z^12 - 1.
        let product = [1u32, 2, 3, 4, 6, 12]
            .iter()
            .fold(LaurentPoly::one(), |acc, &d| acc.mul(&cyclotomic(d)));
        assert_eq!(
            product,
            LaurentPoly::from_integer_terms([(12, 1), (0, -1)])
        );
    }

    #[test]
    fn gcd_is_monic_with_nonzero_constant_term() {
        let phi1 = cyclotomic(1);
        let phi2 = cyclotomic(2);
        let phi3 = cyclotomic(3);
        let a = phi3.mul(&phi2).shifted(-1); // Laurent input
        let b = phi3.mul(&phi1);
        let g = gcd(&a, &b);
        assert_eq!(g, phi3);
        assert_eq!(g.min_exponent(), Some(0));
        let z2m1 = LaurentPoly::from_integer_terms([(2, 1), (0, -1)]);
        let z3m1 = LaurentPoly::from_integer_terms([(3, 1), (0, -1)]);
        assert_eq!(gcd(&z2m1, &z3m1), phi1);
        assert!(gcd(&LaurentPoly::zero(), &LaurentPoly::zero()).is_zero());
        assert_eq!(gcd(&LaurentPoly::zero(), &z2m1.scale(&BigRational::from(BigInt::from(7)))),
            z2m1);
        assert!(divides(&phi3, &z3m1));
        assert!(!divides(&phi2, &z3m1));
    }
}
