//! Dense two-phase simplex over exact rational arithmetic.
//!
//! The tableau is generic over a scalar type.  The default run uses
//! `Ratio<i128>` with checked arithmetic; if any operation overflows, the
//! whole solve is retried over `BigRational`, which cannot overflow.  Columns
//! enter by Dantzig's rule; rows leave by the lexicographic ratio test, which
//! makes every phase finite.  The matching systems solved here are extremely
//! degenerate (almost every right-hand side is zero), and simpler anti-cycling
//! devices crawl through tens of thousands of degenerate pivots on them.
//!
//! Two structural passes run before the tableau is built.  A presolve
//! exploits nonnegativity: a homogeneous row whose coefficients share one
//! sign forces its support to zero, and propagating that observation settles
//! many infeasible probes without any pivoting.  Gaussian elimination then
//! strips linearly dependent equality rows, which otherwise enter phase one
//! as artificials stuck at zero.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub};

use crate::polyhedra::RationalLP;
use crate::{Error, Result};

/// Exact field the tableau can run on.  Operations return `None` on
/// overflow, which aborts the fast path.
pub(crate) trait Scalar: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_positive(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn neg(&self) -> Self;
    fn add(&self, other: &Self) -> Option<Self>;
    fn sub(&self, other: &Self) -> Option<Self>;
    fn mul(&self, other: &Self) -> Option<Self>;
    fn div(&self, other: &Self) -> Option<Self>;
    fn compare(&self, other: &Self) -> Ordering;
    fn from_rational(r: &BigRational) -> Option<Self>;
    fn to_rational(&self) -> BigRational;
}

impl Scalar for Ratio<i128> {
    fn zero() -> Self {
        <Ratio<i128> as num_traits::Zero>::zero()
    }
    fn one() -> Self {
        <Ratio<i128> as num_traits::One>::one()
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn is_positive(&self) -> bool {
        num_traits::Signed::is_positive(self)
    }
    fn is_negative(&self) -> bool {
        num_traits::Signed::is_negative(self)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn add(&self, other: &Self) -> Option<Self> {
        self.checked_add(other)
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        self.checked_sub(other)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(other)
    }
    fn div(&self, other: &Self) -> Option<Self> {
        self.checked_div(other)
    }
    fn compare(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
    fn from_rational(r: &BigRational) -> Option<Self> {
        let numer = i128::try_from(r.numer()).ok()?;
        let denom = i128::try_from(r.denom()).ok()?;
        Some(Ratio::new(numer, denom))
    }
    fn to_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        <BigRational as num_traits::Zero>::zero()
    }
    fn one() -> Self {
        <BigRational as num_traits::One>::one()
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn is_positive(&self) -> bool {
        num_traits::Signed::is_positive(self)
    }
    fn is_negative(&self) -> bool {
        num_traits::Signed::is_negative(self)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn div(&self, other: &Self) -> Option<Self> {
        Some(self / other)
    }
    fn compare(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
    fn from_rational(r: &BigRational) -> Option<Self> {
        Some(r.clone())
    }
    fn to_rational(&self) -> BigRational {
        self.clone()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum LpVerdict {
    Infeasible,
    Unbounded,
    /// For feasibility-only runs the value is zero and the point is any
    /// feasible point.
    Optimal {
        value: BigRational,
        point: Vec<BigRational>,
    },
}

enum RunErr {
    Overflow,
    PivotCap(u64),
}

/// Minimizes `objective · x` (or just finds a feasible point) over
/// `{x >= 0 : equalities, inequalities}`.
pub(crate) fn solve_lp(lp: &RationalLP, objective: Option<&[BigRational]>) -> Result<LpVerdict> {
    if let Some(c) = objective {
        assert_eq!(c.len(), lp.num_vars, "objective length mismatch");
    }
    let pre = match presolve(lp) {
        Presolved::Infeasible => return Ok(LpVerdict::Infeasible),
        Presolved::Reduced(p) => p,
    };
    let reduced_obj: Option<Vec<BigRational>> =
        objective.map(|c| pre.keep.iter().map(|&j| c[j].clone()).collect());
    if pre.lp.num_vars == 0 {
        // Everything was forced to zero and all rows checked out.
        let point = vec![BigRational::zero(); lp.num_vars];
        let value = objective
            .map(|c| dot_dense(c, &point))
            .unwrap_or_else(BigRational::zero);
        return Ok(LpVerdict::Optimal { value, point });
    }
    let Some(reduced) = reduce_equalities(&pre.lp) else {
        return Ok(LpVerdict::Infeasible);
    };
    let verdict = match run::<Ratio<i128>>(&reduced, reduced_obj.as_deref()) {
        Ok(v) => v,
        Err(RunErr::Overflow) => match run::<BigRational>(&reduced, reduced_obj.as_deref()) {
            Ok(v) => v,
            Err(RunErr::Overflow) => unreachable!("big rationals do not overflow"),
            Err(RunErr::PivotCap(n)) => return Err(Error::PivotLimit(n)),
        },
        Err(RunErr::PivotCap(n)) => return Err(Error::PivotLimit(n)),
    };
    Ok(match verdict {
        LpVerdict::Optimal { point, .. } => {
            let full = pre.expand(lp.num_vars, &point);
            let value = objective
                .map(|c| dot_dense(c, &full))
                .unwrap_or_else(BigRational::zero);
            LpVerdict::Optimal { value, point: full }
        }
        other => other,
    })
}

fn dot_dense(c: &[BigRational], x: &[BigRational]) -> BigRational {
    c.iter().zip(x).map(|(a, b)| a * b).sum()
}

struct Reduced {
    lp: RationalLP,
    /// Original index of each kept variable.
    keep: Vec<usize>,
}

impl Reduced {
    fn expand(&self, full_len: usize, point: &[BigRational]) -> Vec<BigRational> {
        let mut full = vec![BigRational::zero(); full_len];
        for (new, &old) in self.keep.iter().enumerate() {
            full[old] = point[new].clone();
        }
        full
    }
}

enum Presolved {
    Infeasible,
    Reduced(Reduced),
}

/// Fixes variables that every feasible point must set to zero and detects
/// trivially impossible rows.  Only sound implications are used:
/// a homogeneous equality with single-signed coefficients forces its support
/// to zero, as does `a·x >= 0` with all-negative coefficients, and a row
/// whose attainable maximum is below its right-hand side is infeasible.
fn presolve(lp: &RationalLP) -> Presolved {
    let mut fixed = vec![false; lp.num_vars];
    loop {
        let mut changed = false;
        for row in &lp.equalities {
            let live: Vec<&(usize, BigRational)> = row
                .coeffs
                .iter()
                .filter(|(j, c)| !fixed[*j] && !c.is_zero())
                .collect();
            let has_pos = live.iter().any(|(_, c)| c.is_positive());
            let has_neg = live.iter().any(|(_, c)| c.is_negative());
            if row.rhs.is_zero() {
                if !(has_pos && has_neg) {
                    for (j, _) in &live {
                        fixed[*j] = true;
                        changed = true;
                    }
                }
            } else if (row.rhs.is_positive() && !has_pos)
                || (row.rhs.is_negative() && !has_neg)
            {
                return Presolved::Infeasible;
            }
        }
        for row in &lp.inequalities {
            let live: Vec<&(usize, BigRational)> = row
                .coeffs
                .iter()
                .filter(|(j, c)| !fixed[*j] && !c.is_zero())
                .collect();
            let has_pos = live.iter().any(|(_, c)| c.is_positive());
            if has_pos {
                continue;
            }
            if row.rhs.is_positive() {
                return Presolved::Infeasible;
            }
            if row.rhs.is_zero() {
                for (j, _) in &live {
                    fixed[*j] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }

    let keep: Vec<usize> = (0..lp.num_vars).filter(|&j| !fixed[j]).collect();
    let remap: std::collections::HashMap<usize, usize> =
        keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
    let mut out = RationalLP::new(keep.len());
    for row in &lp.equalities {
        let coeffs: Vec<(usize, BigRational)> = row
            .coeffs
            .iter()
            .filter(|(j, c)| !fixed[*j] && !c.is_zero())
            .map(|(j, c)| (remap[j], c.clone()))
            .collect();
        if coeffs.is_empty() && row.rhs.is_zero() {
            continue;
        }
        out.add_equality(coeffs, row.rhs.clone());
    }
    for row in &lp.inequalities {
        let coeffs: Vec<(usize, BigRational)> = row
            .coeffs
            .iter()
            .filter(|(j, c)| !fixed[*j] && !c.is_zero())
            .map(|(j, c)| (remap[j], c.clone()))
            .collect();
        if coeffs.is_empty() && !row.rhs.is_positive() {
            continue;
        }
        out.add_inequality(coeffs, row.rhs.clone());
    }
    Presolved::Reduced(Reduced { lp: out, keep })
}

/// Gaussian elimination on the equality rows: returns an equivalent system
/// whose equality rows are linearly independent (reduced row echelon form),
/// or `None` when the equalities are inconsistent.  Inequality rows pass
/// through untouched.  Without this, every redundant row enters phase one as
/// an artificial pinned at zero and multiplies the degeneracy.  The pass is
/// idempotent, so re-reducing inside the integer search costs only a scan.
pub(crate) fn reduce_equalities(lp: &RationalLP) -> Option<RationalLP> {
    let n = lp.num_vars;
    let mut rows: Vec<Vec<BigRational>> = lp
        .equalities
        .iter()
        .map(|row| {
            let mut dense = vec![BigRational::zero(); n + 1];
            for (j, c) in &row.coeffs {
                dense[*j] = &dense[*j] + c;
            }
            dense[n] = row.rhs.clone();
            dense
        })
        .collect();
    let mut rank = 0;
    for col in 0..n {
        let Some(r) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, r);
        let inv = rows[rank][col].clone();
        for cell in rows[rank].iter_mut() {
            if !cell.is_zero() {
                *cell = &*cell / &inv;
            }
        }
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (cell, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *cell = &*cell - &(&factor * p);
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    let mut out = RationalLP::new(n);
    for row in &rows {
        let coeffs: Vec<(usize, BigRational)> = row[..n]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| (j, c.clone()))
            .collect();
        if coeffs.is_empty() {
            if !row[n].is_zero() {
                return None;
            }
            continue;
        }
        out.add_equality(coeffs, row[n].clone());
    }
    for row in &lp.inequalities {
        out.add_inequality(row.coeffs.clone(), row.rhs.clone());
    }
    Some(out)
}

struct Tableau<S> {
    /// `m` rows of length `ncols + 1`; the last entry is the right-hand side.
    rows: Vec<Vec<S>>,
    basis: Vec<usize>,
    ncols: usize,
    nstruct: usize,
    artificial_start: usize,
    pivots: u64,
    pivot_cap: u64,
    /// Columns whose submatrix was the identity when the current phase
    /// started; the lexicographic ratio test compares rows over them.
    lex_cols: Vec<usize>,
}

impl<S: Scalar> Tableau<S> {
    fn build(lp: &RationalLP) -> std::result::Result<Self, RunErr> {
        let nstruct = lp.num_vars;
        let n_ineq = lp.inequalities.len();
        let m = lp.equalities.len() + n_ineq;
        // Raw rows over structural + slack columns, equalities first.
        let width = nstruct + n_ineq;
        let mut raw: Vec<(Vec<S>, S, bool)> = Vec::with_capacity(m);
        let conv =
            |r: &BigRational| -> std::result::Result<S, RunErr> {
                S::from_rational(r).ok_or(RunErr::Overflow)
            };
        for row in &lp.equalities {
            let mut dense = vec![S::zero(); width];
            for (j, c) in &row.coeffs {
                dense[*j] = dense[*j].add(&conv(c)?).ok_or(RunErr::Overflow)?;
            }
            raw.push((dense, conv(&row.rhs)?, false));
        }
        for (i, row) in lp.inequalities.iter().enumerate() {
            let mut dense = vec![S::zero(); width];
            for (j, c) in &row.coeffs {
                dense[*j] = dense[*j].add(&conv(c)?).ok_or(RunErr::Overflow)?;
            }
            dense[nstruct + i] = S::one().neg(); // surplus: a·x - s = b
            raw.push((dense, conv(&row.rhs)?, true));
        }
        // Normalize signs.  Inequality rows with nonpositive rhs are negated
        // so their surplus column can start basic; all other rows get an
        // artificial column.
        let mut needs_artificial = Vec::with_capacity(m);
        for (dense, rhs, is_ineq) in raw.iter_mut() {
            let slack_starts = *is_ineq && !rhs.is_positive();
            if slack_starts || rhs.is_negative() {
                for cell in dense.iter_mut() {
                    *cell = cell.neg();
                }
                *rhs = rhs.neg();
            }
            needs_artificial.push(!slack_starts);
        }
        let nart = needs_artificial.iter().filter(|a| **a).count();
        let ncols = width + nart;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut art_col = width;
        for (idx, (dense, rhs, _)) in raw.into_iter().enumerate() {
            let mut full = vec![S::zero(); ncols + 1];
            full[..width].clone_from_slice(&dense);
            full[ncols] = rhs;
            if needs_artificial[idx] {
                full[art_col] = S::one();
                basis.push(art_col);
                art_col += 1;
            } else {
                // The surplus column has coefficient +1 after negation.
                let slack = nstruct
                    + (idx - lp.equalities.len());
                debug_assert!(full[slack] == S::one());
                basis.push(slack);
            }
            rows.push(full);
        }
        let pivot_cap = 20_000 + 100 * (m as u64 + ncols as u64);
        Ok(Tableau {
            rows,
            basis,
            ncols,
            nstruct,
            artificial_start: width,
            pivots: 0,
            pivot_cap,
            lex_cols: Vec::new(),
        })
    }

    fn m(&self) -> usize {
        self.rows.len()
    }

    /// Reduced-cost row for the given objective relative to the current
    /// basis: `r = c - c_B B^{-1} A`, with the negated objective value in the
    /// rhs slot.
    fn reduced_costs(&self, cost: &[S]) -> std::result::Result<Vec<S>, RunErr> {
        let mut r = cost.to_vec();
        r.push(S::zero());
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &cost[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for j in 0..=self.ncols {
                if row[j].is_zero() {
                    continue;
                }
                let prod = cb.mul(&row[j]).ok_or(RunErr::Overflow)?;
                r[j] = r[j].sub(&prod).ok_or(RunErr::Overflow)?;
            }
        }
        Ok(r)
    }

    fn pivot(&mut self, p: usize, q: usize, cost_row: &mut Vec<S>) -> std::result::Result<(), RunErr> {
        let pivot_val = self.rows[p][q].clone();
        debug_assert!(!pivot_val.is_zero());
        for j in 0..=self.ncols {
            if self.rows[p][j].is_zero() {
                continue;
            }
            self.rows[p][j] = self.rows[p][j].div(&pivot_val).ok_or(RunErr::Overflow)?;
        }
        let pivot_row = self.rows[p].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == p || row[q].is_zero() {
                continue;
            }
            let factor = row[q].clone();
            for j in 0..=self.ncols {
                if pivot_row[j].is_zero() {
                    continue;
                }
                let prod = factor.mul(&pivot_row[j]).ok_or(RunErr::Overflow)?;
                row[j] = row[j].sub(&prod).ok_or(RunErr::Overflow)?;
            }
        }
        if !cost_row[q].is_zero() {
            let factor = cost_row[q].clone();
            for j in 0..=self.ncols {
                if pivot_row[j].is_zero() {
                    continue;
                }
                let prod = factor.mul(&pivot_row[j]).ok_or(RunErr::Overflow)?;
                cost_row[j] = cost_row[j].sub(&prod).ok_or(RunErr::Overflow)?;
            }
        }
        self.basis[p] = q;
        self.pivots += 1;
        Ok(())
    }

    /// Runs the simplex loop for one phase.  `allowed` bounds the entering
    /// columns (artificials are banned in phase two).  Returns false if the
    /// objective is unbounded below.
    fn optimize(&mut self, cost_row: &mut Vec<S>, allowed: usize) -> std::result::Result<bool, RunErr> {
        // The current basis columns form an identity, so every row starts
        // lexicographically positive over (rhs, lex_cols) and the ratio test
        // below keeps it that way; no basis can repeat within the phase.
        self.lex_cols = {
            let mut cols = self.basis.clone();
            cols.sort_unstable();
            cols
        };
        loop {
            if self.pivots > self.pivot_cap {
                return Err(RunErr::PivotCap(self.pivots));
            }
            let mut entering: Option<usize> = None;
            for j in 0..allowed {
                if cost_row[j].is_negative()
                    && entering.is_none_or(|b| {
                        cost_row[j].compare(&cost_row[b]) == Ordering::Less
                    })
                {
                    entering = Some(j);
                }
            }
            let Some(q) = entering else {
                return Ok(true);
            };
            let mut leaving: Option<(usize, S)> = None;
            for i in 0..self.m() {
                if !self.rows[i][q].is_positive() {
                    continue;
                }
                let ratio = self.rows[i][self.ncols]
                    .div(&self.rows[i][q])
                    .ok_or(RunErr::Overflow)?;
                let better = match &leaving {
                    None => true,
                    Some((p, best)) => match ratio.compare(best) {
                        Ordering::Less => true,
                        Ordering::Greater => false,
                        Ordering::Equal => self.lex_smaller(i, *p, q)?,
                    },
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            let Some((p, _)) = leaving else {
                return Ok(false);
            };
            self.pivot(p, q, cost_row)?;
        }
    }

    /// Whether row `i` beats the current candidate `p` in the lexicographic
    /// ratio test for entering column `q` (both attain the minimal ratio):
    /// compares the rows scaled by their entries in column `q` over the
    /// phase's starting identity columns.  Those scaled rows are pairwise
    /// distinct, so the comparison always resolves.
    fn lex_smaller(&self, i: usize, p: usize, q: usize) -> std::result::Result<bool, RunErr> {
        for &c in &self.lex_cols {
            let a = self.rows[i][c].div(&self.rows[i][q]).ok_or(RunErr::Overflow)?;
            let b = self.rows[p][c].div(&self.rows[p][q]).ok_or(RunErr::Overflow)?;
            match a.compare(&b) {
                Ordering::Less => return Ok(true),
                Ordering::Greater => return Ok(false),
                Ordering::Equal => {}
            }
        }
        Ok(i < p)
    }

    /// After phase one, pivots any artificial still in the basis out of it,
    /// or drops its row when the row carries no information.
    fn flush_artificials(&mut self, cost_row: &mut Vec<S>) -> std::result::Result<(), RunErr> {
        let mut i = 0;
        while i < self.m() {
            if self.basis[i] < self.artificial_start {
                i += 1;
                continue;
            }
            let col = (0..self.artificial_start).find(|&j| !self.rows[i][j].is_zero());
            match col {
                Some(q) => {
                    self.pivot(i, q, cost_row)?;
                    i += 1;
                }
                None => {
                    // Redundant constraint; the artificial sits at zero.
                    debug_assert!(self.rows[i][self.ncols].is_zero());
                    self.rows.swap_remove(i);
                    self.basis.swap_remove(i);
                }
            }
        }
        Ok(())
    }

    /// Drops artificial columns entirely.  Only valid after
    /// `flush_artificials`.
    fn strip_artificials(&mut self) {
        for row in &mut self.rows {
            let rhs = row.pop().expect("rhs present");
            row.truncate(self.artificial_start);
            row.push(rhs);
        }
        self.ncols = self.artificial_start;
    }

    fn extract(&self) -> Vec<BigRational> {
        let mut x = vec![BigRational::zero(); self.nstruct];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.nstruct {
                x[b] = self.rows[i][self.ncols].to_rational();
            }
        }
        x
    }
}

fn run<S: Scalar>(
    lp: &RationalLP,
    objective: Option<&[BigRational]>,
) -> std::result::Result<LpVerdict, RunErr> {
    let mut t = Tableau::<S>::build(lp)?;
    // Phase one: minimize the sum of artificials.
    let mut phase1_cost = vec![S::zero(); t.ncols];
    for j in t.artificial_start..t.ncols {
        phase1_cost[j] = S::one();
    }
    let mut cost_row = t.reduced_costs(&phase1_cost)?;
    let bounded = t.optimize(&mut cost_row, t.ncols)?;
    debug_assert!(bounded, "phase one is bounded below by zero");
    // Objective value is -cost_row[ncols].
    if cost_row[t.ncols].is_negative() {
        return Ok(LpVerdict::Infeasible);
    }
    t.flush_artificials(&mut cost_row)?;
    t.strip_artificials();
    let point = match objective {
        None => t.extract(),
        Some(c) => {
            let mut phase2_cost = vec![S::zero(); t.ncols];
            for (j, cj) in c.iter().enumerate() {
                phase2_cost[j] = S::from_rational(cj).ok_or(RunErr::Overflow)?;
            }
            let mut cost_row = t.reduced_costs(&phase2_cost)?;
            if !t.optimize(&mut cost_row, t.ncols)? {
                return Ok(LpVerdict::Unbounded);
            }
            t.extract()
        }
    };
    Ok(LpVerdict::Optimal {
        value: BigRational::zero(), // recomputed exactly by the caller
        point,
    })
}
