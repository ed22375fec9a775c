//! Schur polynomials in three variables and the fixed enumeration of shapes.
//!
//! The irreducible polynomial characters of SU(3) that matter here are indexed
//! by the partitions `(1,1,1)` and `(a,b)` with `a >= b >= 0`, `a >= 1`.  The
//! module fixes a bijection between those shapes and the positive integers
//! (the `lex-v1` ordering used in certificates), computes Schur polynomials
//! exactly via the bialternant formula, and exposes the two quantities the
//! rest of the crate keys on: the dimension `s_λ(1,1,1)` and whether the total
//! degree of the shape is divisible by three (shapes where it is not "see"
//! the center of SU(3) and certify injectivity).

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, LazyLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// A shape admissible for the SU(3) character basis: `(1,1,1)` or a two-row
/// partition `(a, b)` with `a >= b >= 0` and `a >= 1`.  Stored trimmed and
/// weakly decreasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Canonicalizes (sorts descending, trims zeros) and validates.
    pub fn new(parts: &[u32]) -> Result<Self> {
        let mut sorted: Vec<u32> = parts.to_vec();
        sorted.sort_unstable_by(|x, y| y.cmp(x));
        while sorted.last() == Some(&0) {
            sorted.pop();
        }
        let reject = |reason: &str| Error::InvalidPartition {
            parts: parts.to_vec(),
            reason: reason.to_string(),
        };
        match sorted.len() {
            0 => Err(reject("empty partition is not in the basis")),
            1 | 2 => Ok(Partition { parts: sorted }),
            3 => {
                if sorted == [1, 1, 1] {
                    Ok(Partition { parts: sorted })
                } else {
                    Err(reject("the only admissible three-row shape is (1,1,1)"))
                }
            }
            _ => Err(reject("more than three rows")),
        }
    }

    /// The trimmed, weakly decreasing parts.
    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Parts padded to exactly three entries.
    pub fn padded(&self) -> [u32; 3] {
        let mut out = [0u32; 3];
        for (slot, &p) in out.iter_mut().zip(self.parts.iter()) {
            *slot = p;
        }
        out
    }

    /// Sum of the parts.
    pub fn total_degree(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    /// True when the total degree is not divisible by three, i.e. the
    /// character is nontrivial on the center of SU(3).
    pub fn is_center_detecting(&self) -> bool {
        self.total_degree() % 3 != 0
    }

    /// Position of this shape in the fixed enumeration (starting at 1).
    pub fn index(&self) -> usize {
        if self.parts == [1, 1, 1] {
            return 1;
        }
        let a = self.parts[0] as usize;
        let b = *self.parts.get(1).unwrap_or(&0) as usize;
        (a - 1) * (a + 2) / 2 + b + 2
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (n, p) in self.parts.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Inverse of [`Partition::index`].  Index 1 is `(1,1,1)`; from index 2 on,
/// the two-row shapes `(a, b)` appear ordered by `a` ascending, then `b`
/// ascending, starting with `(1,0)`.
pub fn partition_by_index(index: usize) -> Result<Partition> {
    if index == 0 {
        return Err(Error::InvalidIndex(0));
    }
    if index == 1 {
        return Partition::new(&[1, 1, 1]);
    }
    let j = index - 2;
    // Shapes with first part at most a occupy the first a(a+3)/2 slots.
    let mut a = 1usize;
    while a * (a + 3) / 2 <= j {
        a += 1;
    }
    let b = j - (a - 1) * (a + 2) / 2;
    Partition::new(&[a as u32, b as u32])
}

/// The first `k` shapes of the enumeration.
pub fn first_partitions(k: usize) -> Vec<Partition> {
    (1..=k)
        .map(|i| partition_by_index(i).expect("positive index"))
        .collect()
}

/// A polynomial in `x1, x2, x3` with integer coefficients, stored sparsely.
/// Keys are exponent triples; the map never holds zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SymPoly {
    terms: BTreeMap<[u32; 3], BigInt>,
}

impl SymPoly {
    pub fn zero() -> Self {
        SymPoly::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 3], &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: [u32; 3]) -> BigInt {
        self.terms.get(&exps).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = ([u32; 3], C)>,
        C: Into<BigInt>,
    {
        let mut out = SymPoly::zero();
        for (exps, c) in terms {
            out.add_term(exps, c.into());
        }
        out
    }

    pub fn add_term(&mut self, exps: [u32; 3], coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn add(&self, other: &SymPoly) -> SymPoly {
        let mut out = self.clone();
        for (&exps, c) in other.terms.iter() {
            out.add_term(exps, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &SymPoly) -> SymPoly {
        let mut out = self.clone();
        for (&exps, c) in other.terms.iter() {
            out.add_term(exps, -c.clone());
        }
        out
    }

    pub fn scale(&self, factor: &BigInt) -> SymPoly {
        if factor.is_zero() {
            return SymPoly::zero();
        }
        SymPoly {
            terms: self
                .terms
                .iter()
                .map(|(&e, c)| (e, c * factor))
                .collect(),
        }
    }

    pub fn mul(&self, other: &SymPoly) -> SymPoly {
        let mut out = SymPoly::zero();
        for (ea, ca) in self.terms.iter() {
            for (eb, cb) in other.terms.iter() {
                let exps = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                out.add_term(exps, ca * cb);
            }
        }
        out
    }

    /// Value at `x1 = x2 = x3 = 1`, i.e. the sum of the coefficients.
    pub fn eval_at_ones(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// True if invariant under all six permutations of the variables.
    pub fn is_symmetric(&self) -> bool {
        self.terms.iter().all(|(&e, c)| {
            let mut sorted = e;
            sorted.sort_unstable();
            let perms = [
                [sorted[0], sorted[1], sorted[2]],
                [sorted[0], sorted[2], sorted[1]],
                [sorted[1], sorted[0], sorted[2]],
                [sorted[1], sorted[2], sorted[0]],
                [sorted[2], sorted[0], sorted[1]],
                [sorted[2], sorted[1], sorted[0]],
            ];
            perms.iter().all(|p| self.coefficient(*p) == *c)
        })
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&exps, coeff) in self.terms.iter().rev() {
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
            let mut monomial = String::new();
            for (var, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !monomial.is_empty() {
                    monomial.push('*');
                }
                monomial.push_str(&format!("x{}", var + 1));
                if e > 1 {
                    monomial.push_str(&format!("^{e}"));
                }
            }
            if monomial.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{monomial}")?;
            } else {
                write!(f, "{abs}*{monomial}")?;
            }
        }
        Ok(())
    }
}

/// `Σ_{σ ∈ S3} sgn(σ) x_{σ(1)}^{e0} x_{σ(2)}^{e1} x_{σ(3)}^{e2}`.
fn alternant(exps: [u32; 3]) -> SymPoly {
    const PERMS: [([usize; 3], i64); 6] = [
        ([0, 1, 2], 1),
        ([1, 2, 0], 1),
        ([2, 0, 1], 1),
        ([0, 2, 1], -1),
        ([2, 1, 0], -1),
        ([1, 0, 2], -1),
    ];
    let mut out = SymPoly::zero();
    for (perm, sign) in PERMS {
        let e = [exps[perm[0]], exps[perm[1]], exps[perm[2]]];
        out.add_term(e, BigInt::from(sign));
    }
    out
}

/// Exact division by `x_i - x_j`, viewing the polynomial as univariate in
/// `x_i` with coefficients in the remaining variables.  Panics if the
/// division leaves a remainder, which cannot happen for alternants.
fn divide_by_var_difference(poly: &SymPoly, i: usize, j: usize) -> SymPoly {
    let mut by_degree: BTreeMap<u32, SymPoly> = BTreeMap::new();
    for (&exps, c) in poly.terms.iter() {
        let mut rest = exps;
        let d = rest[i];
        rest[i] = 0;
        by_degree
            .entry(d)
            .or_insert_with(SymPoly::zero)
            .add_term(rest, c.clone());
    }
    let top = match by_degree.keys().next_back() {
        Some(&d) => d,
        None => return SymPoly::zero(),
    };
    let coeff_at = |m: &BTreeMap<u32, SymPoly>, d: u32| m.get(&d).cloned().unwrap_or_default();
    // Synthetic division: q_{e-1} = p_e + x_j * q_e, descending from e = top.
    let mut quotient: BTreeMap<u32, SymPoly> = BTreeMap::new();
    let mut carry = SymPoly::zero(); // q_e shifted by x_j, for the next step
    for e in (1..=top).rev() {
        let q = coeff_at(&by_degree, e).add(&carry);
        carry = SymPoly {
            terms: q
                .terms
                .iter()
                .map(|(&exps, c)| {
                    let mut shifted = exps;
                    shifted[j] += 1;
                    (shifted, c.clone())
                })
                .collect(),
        };
        quotient.insert(e - 1, q);
    }
    let remainder = coeff_at(&by_degree, 0).add(&carry);
    assert!(remainder.is_zero(), "inexact division by variable difference");
    let mut out = SymPoly::zero();
    for (e, part) in quotient {
        for (&exps, c) in part.terms.iter() {
            let mut full = exps;
            full[i] = e;
            out.add_term(full, c.clone());
        }
    }
    out
}

fn schur_uncached(p: &Partition) -> SymPoly {
    let lambda = p.padded();
    let numerator = alternant([lambda[0] + 2, lambda[1] + 1, lambda[2]]);
    let d1 = divide_by_var_difference(&numerator, 0, 1);
    let d2 = divide_by_var_difference(&d1, 0, 2);
    divide_by_var_difference(&d2, 1, 2)
}

static SCHUR_CACHE: LazyLock<RwLock<HashMap<Partition, Arc<SymPoly>>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

/// The Schur polynomial `s_λ(x1, x2, x3)`, memoized process-wide.
pub fn schur(p: &Partition) -> Arc<SymPoly> {
    if let Some(hit) = SCHUR_CACHE.read().expect("cache lock").get(p) {
        return Arc::clone(hit);
    }
    let computed = Arc::new(schur_uncached(p));
    let mut cache = SCHUR_CACHE.write().expect("cache lock");
    Arc::clone(cache.entry(p.clone()).or_insert(computed))
}

/// `s_λ(1,1,1)`, the dimension of the corresponding representation.
pub fn dimension(p: &Partition) -> u64 {
    let value = schur(p).eval_at_ones();
    u64::try_from(&value).expect("dimension fits in u64")
}
