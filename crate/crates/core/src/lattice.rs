//! Integer feasibility of bounded linear systems through lattice reduction.
//!
//! Pure feasibility instances are the worst case for branch and bound: with
//! a constant objective the relaxation bound never prunes anything and the
//! search drifts through the polytope.  This module takes the classical
//! lattice route instead.  A column-style Hermite form produces one integer
//! solution of `A·x = c` together with a basis of the integer kernel of `A`,
//! refuting instances with divisibility obstructions outright.  The kernel
//! basis is then LLL-reduced, so the solution polytope is thin along the
//! late basis directions, and a depth-first search over those directions
//! with exact interval propagation visits few nodes.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::polyhedra::{lp_optimize, LpOutcome, RationalLP};
use crate::{Error, Result};

/// A bounded integer-feasibility instance: `rows·x = rhs` with
/// `0 ≤ x ≤ caps` componentwise.
#[derive(Clone, Debug)]
pub struct BoundedSystem {
    /// Dense equality rows, each of length `caps.len()`.
    pub rows: Vec<Vec<BigInt>>,
    pub rhs: Vec<BigInt>,
    pub caps: Vec<BigInt>,
}

/// `cols[j] -= q · cols[p]`.
fn col_sub(cols: &mut [Vec<BigInt>], j: usize, p: usize, q: &BigInt) {
    let delta: Vec<BigInt> = cols[p].iter().map(|x| q * x).collect();
    for (t, d) in cols[j].iter_mut().zip(delta) {
        *t -= d;
    }
}

fn negate(col: &mut [BigInt]) {
    for x in col {
        *x = -std::mem::take(x);
    }
}

/// Column echelon form over the integers.  Returns `(pivots, h, u)` with
/// `u` unimodular and `h` the columns of `a·u`: pivot `s` sits at row
/// `pivots[s]` of column `s`, pivot rows strictly increase, columns past
/// the last pivot are zero, and every pivot is positive with the entries
/// to its left reduced modulo it.
fn column_echelon(
    a: &[Vec<BigInt>],
) -> (Vec<usize>, Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut h: Vec<Vec<BigInt>> = (0..n)
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect();
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    for row in 0..m {
        let pc = pivots.len();
        if pc == n {
            break;
        }
        loop {
            let nz: Vec<usize> = (pc..n).filter(|&j| !h[j][row].is_zero()).collect();
            match nz.len() {
                0 => break,
                1 => {
                    let j = nz[0];
                    h.swap(pc, j);
                    u.swap(pc, j);
                    if h[pc][row].is_negative() {
                        negate(&mut h[pc]);
                        negate(&mut u[pc]);
                    }
                    let pivot = h[pc][row].clone();
                    for j in 0..pc {
                        let q = h[j][row].div_floor(&pivot);
                        if !q.is_zero() {
                            col_sub(&mut h, j, pc, &q);
                            col_sub(&mut u, j, pc, &q);
                        }
                    }
                    pivots.push(row);
                    break;
                }
                _ => {
                    // Euclidean cascade: reduce every entry of the row by
                    // the smallest one; the minimum shrinks each pass.
                    let &jm = nz.iter().min_by_key(|&&j| h[j][row].abs()).unwrap();
                    let pivot = h[jm][row].clone();
                    for &j in &nz {
                        if j == jm {
                            continue;
                        }
                        let q = &h[j][row] / &pivot;
                        col_sub(&mut h, j, jm, &q);
                        col_sub(&mut u, j, jm, &q);
                    }
                }
            }
        }
    }
    (pivots, h, u)
}

/// Integer solutions of `rows·x = rhs`: one particular solution together
/// with a basis of the integer kernel, or `None` when the system has no
/// integer solution at all.
pub fn solve_diophantine(
    rows: &[Vec<BigInt>],
    rhs: &[BigInt],
) -> Option<(Vec<BigInt>, Vec<Vec<BigInt>>)> {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    debug_assert_eq!(rhs.len(), m);
    let (pivots, h, u) = column_echelon(rows);
    let r = pivots.len();
    let mut t: Vec<BigInt> = Vec::with_capacity(r);
    for row in 0..m {
        let mut rem = rhs[row].clone();
        for (j, tj) in t.iter().enumerate() {
            if !tj.is_zero() && !h[j][row].is_zero() {
                rem -= &h[j][row] * tj;
            }
        }
        let s = t.len();
        if s < r && pivots[s] == row {
            let (q, leftover) = rem.div_rem(&h[s][row]);
            if !leftover.is_zero() {
                return None;
            }
            t.push(q);
        } else if !rem.is_zero() {
            return None;
        }
    }
    let x0: Vec<BigInt> = (0..n)
        .map(|i| t.iter().enumerate().map(|(j, tj)| &u[j][i] * tj).sum())
        .collect();
    let kernel: Vec<Vec<BigInt>> = u[r..].to_vec();
    Some((x0, kernel))
}

/// In-place LLL reduction of an independent lattice basis, with the
/// classical parameter `δ = 3/4` and exact rational Gram-Schmidt data.
pub fn lll_reduce(basis: &mut [Vec<BigInt>]) {
    let n = basis.len();
    if n <= 1 {
        return;
    }
    let rational_dot = |a: &[BigRational], b: &[BigRational]| -> BigRational {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    };
    // One full Gram-Schmidt pass; afterwards `mu` and `bsq` are maintained
    // incrementally and the starred vectors are never needed again.
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut bsq = vec![BigRational::zero(); n];
    {
        let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut s: Vec<BigRational> = basis[i]
                .iter()
                .map(|x| BigRational::from(x.clone()))
                .collect();
            for j in 0..i {
                let num: BigRational = basis[i]
                    .iter()
                    .zip(&star[j])
                    .map(|(x, y)| BigRational::from(x.clone()) * y)
                    .sum();
                mu[i][j] = num / &bsq[j];
                for (sv, tv) in s.iter_mut().zip(&star[j]) {
                    *sv -= &mu[i][j] * tv;
                }
            }
            bsq[i] = rational_dot(&s, &s);
            debug_assert!(bsq[i].is_positive(), "basis vectors must be independent");
            star.push(s);
        }
    }

    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let delta = BigRational::new(BigInt::from(3), BigInt::from(4));
    // Size-reduce b_k against b_l and keep the Gram-Schmidt data in step.
    macro_rules! reduce {
        ($k:expr, $l:expr) => {{
            let (k, l) = ($k, $l);
            if mu[k][l].abs() > half {
                let q = mu[k][l].round().to_integer();
                let shift: Vec<BigInt> = basis[l].iter().map(|x| &q * x).collect();
                for (t, d) in basis[k].iter_mut().zip(shift) {
                    *t -= d;
                }
                let qr = BigRational::from(q);
                for j in 0..l {
                    let d = &qr * &mu[l][j];
                    mu[k][j] -= d;
                }
                mu[k][l] -= qr;
            }
        }};
    }

    let mut k = 1;
    while k < n {
        reduce!(k, k - 1);
        let lhs = &bsq[k];
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &bsq[k - 1];
        if *lhs < rhs {
            basis.swap(k, k - 1);
            let muk = mu[k][k - 1].clone();
            let bt = &bsq[k] + &muk * &muk * &bsq[k - 1];
            mu[k][k - 1] = &muk * &bsq[k - 1] / &bt;
            bsq[k] = &bsq[k - 1] * &bsq[k] / &bt;
            bsq[k - 1] = bt;
            for j in 0..k - 1 {
                let t = mu[k][j].clone();
                mu[k][j] = mu[k - 1][j].clone();
                mu[k - 1][j] = t;
            }
            for i in k + 1..n {
                let t = mu[i][k].clone();
                mu[i][k] = &mu[i][k - 1] - &muk * &t;
                mu[i][k - 1] = &t + &mu[k][k - 1] * &mu[i][k];
            }
            k = std::cmp::max(1, k - 1);
        } else {
            for l in (0..k.saturating_sub(1)).rev() {
                reduce!(k, l);
            }
            k += 1;
        }
    }
}

/// Exact coordinate bounds of the polytope `{y : 0 ≤ x0 + K·y ≤ caps}`,
/// rounded inward to integers.  `None` when the polytope has no integer
/// box at all (empty relaxation or an out-of-bounds fixed row).
fn coordinate_boxes(
    x0: &[BigInt],
    kernel: &[Vec<BigInt>],
    caps: &[BigInt],
) -> Result<Option<Vec<(BigInt, BigInt)>>> {
    let n = x0.len();
    let k = kernel.len();
    // Free coordinates split into positive and negative parts.
    let mut lp = RationalLP::new(2 * k);
    for r in 0..n {
        let mut coeffs = Vec::new();
        for (j, col) in kernel.iter().enumerate() {
            if !col[r].is_zero() {
                let c = BigRational::from(col[r].clone());
                coeffs.push((j, c.clone()));
                coeffs.push((k + j, -c));
            }
        }
        if coeffs.is_empty() {
            if x0[r].is_negative() || x0[r] > caps[r] {
                return Ok(None);
            }
            continue;
        }
        let negated: Vec<(usize, BigRational)> =
            coeffs.iter().map(|(j, c)| (*j, -c)).collect();
        lp.add_inequality(coeffs, BigRational::from(-x0[r].clone()));
        lp.add_inequality(negated, BigRational::from(&x0[r] - &caps[r]));
    }
    let mut boxes = Vec::with_capacity(k);
    for i in 0..k {
        let extreme = |sign: i64| -> Result<Option<BigRational>> {
            let mut obj = vec![BigRational::zero(); 2 * k];
            obj[i] = BigRational::from(BigInt::from(sign));
            obj[k + i] = -obj[i].clone();
            match lp_optimize(&lp, &obj)? {
                LpOutcome::Optimal { value, .. } => Ok(Some(value)),
                LpOutcome::Infeasible => Ok(None),
                LpOutcome::Unbounded => {
                    unreachable!("kernel directions are bounded by the caps")
                }
            }
        };
        let Some(min) = extreme(1)? else { return Ok(None) };
        let Some(neg_max) = extreme(-1)? else { return Ok(None) };
        let lo = min.ceil().to_integer();
        let hi = (-neg_max).floor().to_integer();
        if lo > hi {
            return Ok(None);
        }
        boxes.push((lo, hi));
    }
    Ok(Some(boxes))
}

/// Least-squares coordinates of `delta` in the kernel basis; exact when
/// `delta` lies in the rational span, which it does for every relaxation
/// witness of the original system.
fn kernel_coordinates(kernel: &[Vec<BigInt>], delta: &[BigRational]) -> Vec<BigRational> {
    let k = kernel.len();
    let mut g = vec![vec![BigRational::zero(); k + 1]; k];
    for a in 0..k {
        for b in 0..k {
            let dot: BigInt = kernel[a].iter().zip(&kernel[b]).map(|(x, y)| x * y).sum();
            g[a][b] = BigRational::from(dot);
        }
        g[a][k] = kernel[a]
            .iter()
            .zip(delta)
            .map(|(x, d)| BigRational::from(x.clone()) * d)
            .sum();
    }
    // Gaussian elimination; the Gram matrix of an independent basis is
    // positive definite, so a nonzero pivot always exists.
    for col in 0..k {
        let pivot = (col..k).find(|&r| !g[r][col].is_zero()).expect("positive definite");
        g.swap(col, pivot);
        let lead = g[col][col].clone();
        for x in g[col][col..].iter_mut() {
            *x = &*x / &lead;
        }
        for r in 0..k {
            if r == col || g[r][col].is_zero() {
                continue;
            }
            let factor = g[r][col].clone();
            for c in col..=k {
                let d = &factor * &g[col][c];
                g[r][c] -= d;
            }
        }
    }
    (0..k).map(|i| g[i][k].clone()).collect()
}

/// Beyond this range width a branch bisects the range instead of trying
/// each value, so propagation can discard half the values at once.
const ENUMERATE_WIDTH: u32 = 4;

/// Propagation passes per node; narrowing is monotone, so stopping early
/// only costs pruning strength, never correctness.
const PROPAGATE_PASSES: usize = 32;

struct CpSearch<'a> {
    /// Kernel basis vectors, one per free coordinate, each of length `n`.
    kernel: &'a [Vec<BigInt>],
    /// The particular solution: the point searched is `base + Σ y_j·K_j`.
    base: &'a [BigInt],
    caps: &'a [BigInt],
    guide: &'a [BigRational],
    /// Live range of every coordinate; a solved coordinate is a point
    /// range, whether branching fixed it or propagation forced it.
    ranges: Vec<(BigInt, BigInt)>,
    nodes: u64,
    node_limit: u64,
    deadline: Option<Instant>,
}

impl CpSearch<'_> {
    fn charge(&mut self) -> Result<()> {
        self.nodes += 1;
        let out_of_time = self.deadline.is_some_and(|d| Instant::now() >= d);
        if self.nodes > self.node_limit || out_of_time {
            return Err(Error::BudgetExceeded {
                nodes: self.nodes,
                limit: self.node_limit,
            });
        }
        Ok(())
    }

    /// Tightens every live range until nothing moves: each row needs its
    /// interval of possible values to meet `[0, cap]`, which two-sided
    /// bounds every coordinate once the others are summed as intervals.
    /// Returns false when some range or row interval empties out.
    fn propagate(&mut self) -> bool {
        let term = |c: &BigInt, lo: &BigInt, hi: &BigInt| {
            if c.is_negative() {
                (c * hi, c * lo)
            } else {
                (c * lo, c * hi)
            }
        };
        for _ in 0..PROPAGATE_PASSES {
            let mut changed = false;
            for r in 0..self.base.len() {
                let mut tlo = self.base[r].clone();
                let mut thi = self.base[r].clone();
                for (j, col) in self.kernel.iter().enumerate() {
                    if col[r].is_zero() {
                        continue;
                    }
                    let (lo, hi) = &self.ranges[j];
                    let (a, b) = term(&col[r], lo, hi);
                    tlo += a;
                    thi += b;
                }
                if thi.is_negative() || tlo > self.caps[r] {
                    return false;
                }
                for (j, col) in self.kernel.iter().enumerate() {
                    let c = &col[r];
                    if c.is_zero() {
                        continue;
                    }
                    let (lo, hi) = self.ranges[j].clone();
                    if lo == hi {
                        continue;
                    }
                    let (jlo, jhi) = term(c, &lo, &hi);
                    // The rest of the row leaves `c·y_j` a two-sided window.
                    let floor = &tlo - &jlo;
                    let ceil = &thi - &jhi;
                    let a = -ceil;
                    let b = &self.caps[r] - floor;
                    let (nlo, nhi) = if c.is_positive() {
                        (a.div_ceil(c).max(lo.clone()), b.div_floor(c).min(hi.clone()))
                    } else {
                        (b.div_ceil(c).max(lo.clone()), a.div_floor(c).min(hi.clone()))
                    };
                    if nlo > nhi {
                        return false;
                    }
                    if nlo != lo || nhi != hi {
                        let (njlo, njhi) = term(c, &nlo, &nhi);
                        tlo += njlo - jlo;
                        thi += njhi - jhi;
                        self.ranges[j] = (nlo, nhi);
                        changed = true;
                    }
                }
            }
            if !changed {
                return true;
            }
        }
        true
    }

    fn search(&mut self) -> Result<bool> {
        self.charge()?;
        if !self.propagate() {
            return Ok(false);
        }
        // Branch on the narrowest unsolved coordinate; all solved means the
        // point ranges already passed every row check above.
        let mut pick: Option<(usize, BigInt)> = None;
        for (j, (lo, hi)) in self.ranges.iter().enumerate() {
            if lo == hi {
                continue;
            }
            let w = hi - lo;
            if pick.as_ref().is_none_or(|(_, best)| w < *best) {
                pick = Some((j, w));
            }
        }
        let Some((j, width)) = pick else {
            return Ok(true);
        };
        let (lo, hi) = self.ranges[j].clone();
        let center = self.guide[j]
            .round()
            .to_integer()
            .clamp(lo.clone(), hi.clone());
        if width <= BigInt::from(ENUMERATE_WIDTH) {
            if self.descend(j, center.clone(), center.clone())? {
                return Ok(true);
            }
            let mut up: BigInt = &center + 1;
            let mut down: BigInt = &center - 1;
            while up <= hi || down >= lo {
                if up <= hi {
                    if self.descend(j, up.clone(), up.clone())? {
                        return Ok(true);
                    }
                    up += 1;
                }
                if down >= lo {
                    if self.descend(j, down.clone(), down.clone())? {
                        return Ok(true);
                    }
                    down -= 1;
                }
            }
            Ok(false)
        } else {
            let mid = (&lo + &hi).div_floor(&BigInt::from(2));
            let halves = [(lo.clone(), mid.clone()), (&mid + 1, hi.clone())];
            let first = usize::from(center > mid);
            for half in [first, 1 - first] {
                let (a, b) = halves[half].clone();
                if self.descend(j, a, b)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }

    /// Restricts one coordinate, recurses, and restores every range the
    /// subtree narrowed.  On success the ranges are left collapsed, so the
    /// caller can read the solution straight out of them.
    fn descend(&mut self, j: usize, lo: BigInt, hi: BigInt) -> Result<bool> {
        let saved = self.ranges.clone();
        self.ranges[j] = (lo, hi);
        let found = self.search()?;
        if !found {
            self.ranges = saved;
        }
        Ok(found)
    }
}

/// Searches for an integer point of a bounded system.  `guide`, when
/// given, must satisfy the equality rows; each coordinate is then
/// enumerated outward from it, which reaches a nearby integer point fast
/// when one exists.  Exhausting the reduced search space is a proof of
/// infeasibility, and a budget overrun surfaces as an error rather than a
/// verdict.
pub fn bounded_integer_point(
    sys: &BoundedSystem,
    guide: Option<&[BigRational]>,
    node_limit: u64,
    time_limit: Option<Duration>,
) -> Result<Option<Vec<BigInt>>> {
    let n = sys.caps.len();
    debug_assert!(sys.rows.iter().all(|r| r.len() == n));
    let Some((x0, mut kernel)) = solve_diophantine(&sys.rows, &sys.rhs) else {
        return Ok(None);
    };
    if kernel.is_empty() {
        let ok = x0
            .iter()
            .zip(&sys.caps)
            .all(|(x, c)| !x.is_negative() && x <= c);
        return Ok(ok.then_some(x0));
    }
    lll_reduce(&mut kernel);
    let Some(boxes) = coordinate_boxes(&x0, &kernel, &sys.caps)? else {
        return Ok(None);
    };
    let guide: Vec<BigRational> = match guide {
        Some(point) => {
            debug_assert_eq!(point.len(), n);
            let delta: Vec<BigRational> = point
                .iter()
                .zip(&x0)
                .map(|(p, x)| p - BigRational::from(x.clone()))
                .collect();
            kernel_coordinates(&kernel, &delta)
        }
        None => boxes
            .iter()
            .map(|(lo, hi)| BigRational::new(lo + hi, BigInt::from(2)))
            .collect(),
    };
    let mut search = CpSearch {
        kernel: &kernel,
        base: &x0,
        caps: &sys.caps,
        guide: &guide,
        ranges: boxes,
        nodes: 0,
        node_limit,
        deadline: time_limit.map(|d| Instant::now() + d),
    };
    let widths: Vec<String> = search
        .ranges
        .iter()
        .map(|(l, h)| format!("{}", h - l))
        .collect();
    eprintln!("[lattice] n={} k={} widths={}", n, kernel.len(), widths.join(","));
    let t0 = Instant::now();
    let found = match search.search() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("[lattice] FAILED nodes={} in {:?}", search.nodes, t0.elapsed());
            return Err(e);
        }
    };
    eprintln!(
        "[lattice] found={} nodes={} in {:?}",
        found,
        search.nodes,
        t0.elapsed()
    );
    if !found {
        return Ok(None);
    }
    let solved = std::mem::take(&mut search.ranges);
    let mut point = x0;
    for (col, (lo, hi)) in kernel.iter().zip(&solved) {
        debug_assert_eq!(lo, hi);
        if !lo.is_zero() {
            for (p, c) in point.iter_mut().zip(col) {
                *p += lo * c;
            }
        }
    }
    Ok(Some(point))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    fn bigv(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn mat_vec(rows: &[Vec<BigInt>], x: &[BigInt]) -> Vec<BigInt> {
        rows.iter()
            .map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    #[test]
    fn diophantine_solution_and_kernel_check_out() {
        let rows = big(&[&[2, 3, 5, 1], &[1, 0, -1, 2]]);
        let witness = bigv(&[3, 1, 0, 2]);
        let rhs = mat_vec(&rows, &witness);
        let (x0, kernel) = solve_diophantine(&rows, &rhs).unwrap();
        assert_eq!(mat_vec(&rows, &x0), rhs);
        assert_eq!(kernel.len(), 2);
        for col in &kernel {
            assert!(mat_vec(&rows, col).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn divisibility_obstructions_are_refuted() {
        // 2x + 4y = 5 has rational but no integer solutions.
        let rows = big(&[&[2, 4]]);
        assert!(solve_diophantine(&rows, &bigv(&[5])).is_none());
        assert!(solve_diophantine(&rows, &bigv(&[6])).is_some());
        // Inconsistent even over the rationals.
        let rows = big(&[&[1, 1], &[1, 1]]);
        assert!(solve_diophantine(&rows, &bigv(&[1, 2])).is_none());
    }

    #[test]
    fn echelon_identities_hold_on_random_matrices() {
        let mut state = 0x2545f4914f6cdd1du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..50 {
            let m = (next() % 4 + 1) as usize;
            let n = (next() % 5 + 1) as usize;
            let a: Vec<Vec<BigInt>> = (0..m)
                .map(|_| {
                    (0..n)
                        .map(|_| BigInt::from((next() % 11) as i64 - 5))
                        .collect()
                })
                .collect();
            let (pivots, h, u) = column_echelon(&a);
            // h really is a·u, column by column.
            for (j, col) in h.iter().enumerate() {
                let ucol: Vec<BigInt> = u[j].clone();
                assert_eq!(&mat_vec(&a, &ucol), col);
            }
            // Pivot rows strictly increase and trailing columns vanish.
            assert!(pivots.windows(2).all(|w| w[0] < w[1]));
            for col in h.iter().skip(pivots.len()) {
                assert!(col.iter().all(Zero::is_zero));
            }
            // u is unimodular: its echelon has n pivots of product ±1.
            let (up, uh, _) = column_echelon(&u);
            assert_eq!(up.len(), n);
            let det: BigInt = (0..n).map(|s| uh[s][up[s]].clone()).product();
            assert_eq!(det.abs(), BigInt::one());
        }
    }

    #[test]
    fn lll_preserves_the_lattice_and_reduces_it() {
        let mut basis = big(&[&[1, 0, 0, 12], &[0, 1, 0, 45], &[0, 0, 1, 77]]);
        let original = basis.clone();
        lll_reduce(&mut basis);
        // Same lattice: each vector of either basis is an integer
        // combination of the other.
        let as_rows = |cols: &[Vec<BigInt>]| -> Vec<Vec<BigInt>> {
            let n = cols[0].len();
            (0..n)
                .map(|i| cols.iter().map(|c| c[i].clone()).collect())
                .collect()
        };
        for v in &original {
            assert!(solve_diophantine(&as_rows(&basis), v).is_some());
        }
        for v in &basis {
            assert!(solve_diophantine(&as_rows(&original), v).is_some());
        }
        // Reduction really happened: no vector got longer than the
        // originals' worst, and a second pass changes nothing.
        let norm = |v: &[BigInt]| -> BigInt { v.iter().map(|x| x * x).sum() };
        let worst = original.iter().map(|v| norm(v)).max().unwrap();
        assert!(basis.iter().all(|v| norm(v) <= worst));
        let mut check = basis.clone();
        lll_reduce(&mut check);
        assert_eq!(check, basis, "reduction is idempotent");
    }

    #[test]
    fn bounded_point_is_found_and_validated() {
        let rows = big(&[&[1, 2, 1], &[0, 1, 3]]);
        let witness = bigv(&[2, 3, 1]);
        let rhs = mat_vec(&rows, &witness);
        let sys = BoundedSystem {
            rows: rows.clone(),
            rhs: rhs.clone(),
            caps: bigv(&[10, 10, 10]),
        };
        let x = bounded_integer_point(&sys, None, 10_000, None)
            .unwrap()
            .expect("constructed instance is feasible");
        assert_eq!(mat_vec(&rows, &x), rhs);
        assert!(x.iter().all(|v| !v.is_negative() && *v <= BigInt::from(10)));
    }

    #[test]
    fn bounded_point_respects_caps() {
        // x + y = 9 with caps 4: feasible only as (4,5)-style splits; with
        // caps (4,4) it is infeasible.
        let rows = big(&[&[1, 1]]);
        let feasible = BoundedSystem {
            rows: rows.clone(),
            rhs: bigv(&[9]),
            caps: bigv(&[4, 5]),
        };
        let x = bounded_integer_point(&feasible, None, 1_000, None)
            .unwrap()
            .expect("9 = 4 + 5 fits the caps");
        assert_eq!(x, bigv(&[4, 5]));
        let infeasible = BoundedSystem {
            rows,
            rhs: bigv(&[9]),
            caps: bigv(&[4, 4]),
        };
        assert_eq!(bounded_integer_point(&infeasible, None, 1_000, None).unwrap(), None);
    }

    #[test]
    fn fixed_full_rank_systems_skip_the_search() {
        let rows = big(&[&[1, 0], &[0, 1]]);
        let sys = BoundedSystem {
            rows: rows.clone(),
            rhs: bigv(&[3, 4]),
            caps: bigv(&[5, 5]),
        };
        assert_eq!(
            bounded_integer_point(&sys, None, 10, None).unwrap(),
            Some(bigv(&[3, 4]))
        );
        let out_of_caps = BoundedSystem {
            rows,
            rhs: bigv(&[3, 7]),
            caps: bigv(&[5, 5]),
        };
        assert_eq!(bounded_integer_point(&out_of_caps, None, 10, None).unwrap(), None);
    }

    #[test]
    fn verdicts_agree_with_branch_and_bound_on_random_instances() {
        use crate::ilp::{solve_ilp, IlpConfig, IlpOutcome};

        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for round in 0..60 {
            let m = (next() % 3 + 1) as usize;
            let n = (next() % 4 + 2) as usize;
            let rows: Vec<Vec<BigInt>> = (0..m)
                .map(|_| {
                    (0..n)
                        .map(|_| BigInt::from((next() % 9) as i64 - 4))
                        .collect()
                })
                .collect();
            let cap = BigInt::from(next() % 5 + 2);
            let rhs: Vec<BigInt> = if round % 2 == 0 {
                let x: Vec<BigInt> =
                    (0..n).map(|_| BigInt::from(next() % 3)).collect();
                mat_vec(&rows, &x)
            } else {
                (0..m)
                    .map(|_| BigInt::from((next() % 13) as i64 - 6))
                    .collect()
            };
            let sys = BoundedSystem {
                rows: rows.clone(),
                rhs: rhs.clone(),
                caps: vec![cap.clone(); n],
            };
            let lattice_point = bounded_integer_point(&sys, None, 1_000_000, None).unwrap();

            let mut lp = RationalLP::new(n);
            for (row, b) in rows.iter().zip(&rhs) {
                let coeffs: Vec<(usize, BigRational)> = row
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(j, c)| (j, BigRational::from(c.clone())))
                    .collect();
                lp.add_equality(coeffs, BigRational::from(b.clone()));
            }
            for j in 0..n {
                lp.add_inequality(
                    vec![(j, -BigRational::one())],
                    BigRational::from(-cap.clone()),
                );
            }
            let objective = vec![BigRational::zero(); n];
            let reference = solve_ilp(&lp, &objective, &IlpConfig::default()).unwrap();
            match (&lattice_point, &reference) {
                (Some(x), IlpOutcome::Optimal(_)) => {
                    assert_eq!(mat_vec(&rows, x), rhs, "round {round}");
                    assert!(
                        x.iter().all(|v| !v.is_negative() && *v <= cap),
                        "round {round}"
                    );
                }
                (None, IlpOutcome::Infeasible) => {}
                other => panic!("round {round}: verdicts disagree: {other:?}"),
            }
        }
    }
}
