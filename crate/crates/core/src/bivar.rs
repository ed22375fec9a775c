//! Bivariate integer polynomials and fraction-free determinants.
//!
//! Just enough arithmetic in `Z[x, y]` to carry Sylvester-matrix entries:
//! ring operations, exact division, and the Bareiss determinant, whose
//! intermediate divisions are guaranteed exact by the Sylvester identity.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Sparse polynomial in two variables, keyed by `(x-degree, y-degree)`.
/// The map holds no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub(crate) struct Poly2 {
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2::default()
    }

    pub fn constant(c: BigInt) -> Self {
        Poly2::monomial(0, 0, c)
    }

    pub fn monomial(dx: u32, dy: u32, c: BigInt) -> Self {
        let mut out = Poly2::zero();
        out.add_term(dx, dy, c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigInt)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, dx: u32, dy: u32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((dx, dy)).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(dx, dy));
        }
    }

    pub fn add(&self, other: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (&(dx, dy), c) in other.terms.iter() {
            out.add_term(dx, dy, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (&(dx, dy), c) in other.terms.iter() {
            out.add_term(dx, dy, -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(ax, ay), ac) in self.terms.iter() {
            for (&(bx, by), bc) in other.terms.iter() {
                out.add_term(ax + bx, ay + by, ac * bc);
            }
        }
        out
    }

    pub fn neg(&self) -> Poly2 {
        Poly2 {
            terms: self
                .terms
                .iter()
                .map(|(&k, c)| (k, -c.clone()))
                .collect(),
        }
    }

    /// Leading term under graded lexicographic order with `x > y`.
    pub fn leading(&self) -> Option<((u32, u32), &BigInt)> {
        self.terms
            .iter()
            .max_by_key(|(&(dx, dy), _)| (dx + dy, dx))
            .map(|(&k, c)| (k, c))
    }

    /// Nonnegative gcd of the coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn min_degrees(&self) -> (u32, u32) {
        let mut min_x = u32::MAX;
        let mut min_y = u32::MAX;
        for &(dx, dy) in self.terms.keys() {
            min_x = min_x.min(dx);
            min_y = min_y.min(dy);
        }
        if self.terms.is_empty() {
            (0, 0)
        } else {
            (min_x, min_y)
        }
    }

    /// Divides by `c · x^dx · y^dy`, which must divide every term.
    pub fn divide_monomial(&self, dx: u32, dy: u32, c: &BigInt) -> Poly2 {
        assert!(!c.is_zero());
        Poly2 {
            terms: self
                .terms
                .iter()
                .map(|(&(ax, ay), ac)| {
                    let (q, r) = ac.div_rem(c);
                    assert!(r.is_zero(), "monomial division left a remainder");
                    assert!(ax >= dx && ay >= dy, "monomial division underflow");
                    ((ax - dx, ay - dy), q)
                })
                .collect(),
        }
    }

    /// Exact division: panics if `divisor` does not divide `self`.  Runs
    /// graded-lex long division, which cannot stall when the quotient
    /// exists because leading terms are multiplicative over a domain.
    pub fn div_exact(&self, divisor: &Poly2) -> Poly2 {
        let ((dx, dy), dc) = divisor.leading().expect("division by zero polynomial");
        let mut rem = self.clone();
        let mut quot = Poly2::zero();
        while let Some(((rx, ry), rc)) = rem.leading() {
            assert!(
                rx >= dx && ry >= dy,
                "exact polynomial division left a remainder; this is a bug"
            );
            let (q, r) = rc.div_rem(dc);
            assert!(
                r.is_zero(),
                "exact polynomial division left a remainder; this is a bug"
            );
            let step = Poly2::monomial(rx - dx, ry - dy, q);
            rem = rem.sub(&step.mul(divisor));
            quot = quot.add(&step);
        }
        quot
    }
}

/// Determinant by fraction-free Gaussian elimination.  Every division is
/// by the previous pivot and is exact over `Z[x, y]`.
pub(crate) fn determinant_bareiss(mut m: Vec<Vec<Poly2>>) -> Poly2 {
    let n = m.len();
    if n == 0 {
        return Poly2::constant(BigInt::one());
    }
    for row in &m {
        assert_eq!(row.len(), n, "determinant of a non-square matrix");
    }
    let mut sign = 1i8;
    let mut prev = Poly2::constant(BigInt::one());
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return Poly2::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        let pivot = m[k][k].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let numer = pivot.mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = numer.div_exact(&prev);
            }
            m[i][k] = Poly2::zero();
        }
        prev = pivot;
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        det.neg()
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn c(n: i64) -> Poly2 {
        Poly2::constant(int(n))
    }

    #[test]
    fn arithmetic_and_leading_terms() {
        // (x + y)(x - y) = x^2 - y^2
        let x = Poly2::monomial(1, 0, int(1));
        let y = Poly2::monomial(0, 1, int(1));
        let product = x.add(&y).mul(&x.sub(&y));
        let mut expected = Poly2::monomial(2, 0, int(1));
        expected.add_term(0, 2, int(-1));
        assert_eq!(product, expected);
        assert_eq!(product.leading(), Some(((2, 0), &int(1))));
        assert_eq!(product.content(), int(1));
    }

    #[test]
    fn exact_division_recovers_factors() {
        let x = Poly2::monomial(1, 0, int(1));
        let y = Poly2::monomial(0, 1, int(1));
        let x_minus_y = x.sub(&y);
        // x^3 - y^3 = (x - y)(x^2 + xy + y^2)
        let mut cube_diff = Poly2::monomial(3, 0, int(1));
        cube_diff.add_term(0, 3, int(-1));
        let quotient = cube_diff.div_exact(&x_minus_y);
        let mut expected = Poly2::monomial(2, 0, int(1));
        expected.add_term(1, 1, int(1));
        expected.add_term(0, 2, int(1));
        assert_eq!(quotient, expected);
        assert_eq!(quotient.mul(&x_minus_y), cube_diff);
    }

    #[test]
    #[should_panic(expected = "left a remainder")]
    fn inexact_division_panics() {
        let x = Poly2::monomial(1, 0, int(1));
        let y = Poly2::monomial(0, 1, int(1));
        let _ = x.mul(&x).div_exact(&x.add(&y));
    }

    #[test]
    fn determinant_of_integer_matrices() {
        // det [[1,2,3],[4,5,6],[7,8,10]] = -3.
        let m = vec![
            vec![c(1), c(2), c(3)],
            vec![c(4), c(5), c(6)],
            vec![c(7), c(8), c(10)],
        ];
        assert_eq!(determinant_bareiss(m), c(-3));
        // Singular matrix.
        let s = vec![
            vec![c(1), c(2), c(3)],
            vec![c(2), c(4), c(6)],
            vec![c(0), c(1), c(1)],
        ];
        assert_eq!(determinant_bareiss(s), Poly2::zero());
    }

    #[test]
    fn determinant_with_polynomial_entries() {
        // det [[x, y], [y, x]] = x^2 - y^2
        let x = Poly2::monomial(1, 0, int(1));
        let y = Poly2::monomial(0, 1, int(1));
        let d = determinant_bareiss(vec![vec![x.clone(), y.clone()], vec![y.clone(), x.clone()]]);
        let mut expected = Poly2::monomial(2, 0, int(1));
        expected.add_term(0, 2, int(-1));
        assert_eq!(d, expected);
    }

    #[test]
    fn determinant_needing_a_row_swap() {
        let zero = Poly2::zero();
        let x = Poly2::monomial(1, 0, int(1));
        // det [[0, 1], [x, 0]] = -x
        let d = determinant_bareiss(vec![vec![zero, c(1)], vec![x.clone(), c(0)]]);
        assert_eq!(d, x.neg());
    }

    #[test]
    fn monomial_content_stripping() {
        // 2x^2y + 4xy^2 has content 2 and monomial content xy.
        let mut p = Poly2::monomial(2, 1, int(2));
        p.add_term(1, 2, int(4));
        assert_eq!(p.content(), int(2));
        assert_eq!(p.min_degrees(), (1, 1));
        let stripped = p.divide_monomial(1, 1, &int(2));
        let mut expected = Poly2::monomial(1, 0, int(1));
        expected.add_term(0, 1, int(2));
        assert_eq!(stripped, expected);
    }
}
