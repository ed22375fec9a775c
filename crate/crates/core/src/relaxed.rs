//! The relaxed matching problem and the geometry behind it.
//!
//! Instead of matching two circles against each other, one can ask which
//! Laurent polynomials arise as a restricted character at all.  The family
//! `f_{a,b} = (1 + z + … + z^{b-1})^a (1 + z^{-1} + … + z^{-(b-1)})^a` is
//! the candidate family: [`conjecture_search`] looks for the smallest
//! multiple `N·f_{a,b}` that is a nonnegative integer combination of
//! restricted Schur polynomials.  The obstruction lives on the plane curve
//! parametrized by `z ↦ (F1(z), F2(z))`: [`implicitize`] computes its
//! defining equation, and [`unity_orders`] finds the orders of the roots of
//! unity where the parametrization ramifies or identifies distinct points.
//! The least common multiple of those orders is the modulus `b` must respect.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bivar::{determinant_bareiss, Poly2};
use crate::ilp::IlpConfig;
use crate::laurent::{
    cyclotomic, divides, exact_div, gcd, substitute, ExponentVector, LaurentPoly,
};
use crate::symfunc::{dimension, schur, Partition};
use crate::{Error, Result};

/// `(1 + z + … + z^{b-1})^a · (1 + z^{-1} + … + z^{-(b-1)})^a`, expanded.
/// Palindromic with support exactly `[-a(b-1), a(b-1)]`.
pub fn f_ab(a: u32, b: u32) -> Result<LaurentPoly> {
    if a == 0 {
        return Err(Error::InvalidParameter {
            name: "a",
            reason: "must be at least 1".to_string(),
        });
    }
    if b == 0 {
        return Err(Error::InvalidParameter {
            name: "b",
            reason: "must be at least 1".to_string(),
        });
    }
    let forward = LaurentPoly::from_integer_terms((0..i64::from(b)).map(|e| (e, 1)));
    let backward = LaurentPoly::from_integer_terms((0..i64::from(b)).map(|e| (-e, 1)));
    Ok(forward.pow(a).mul(&backward.pow(a)))
}

fn require_all_nonzero(v: ExponentVector) -> Result<()> {
    if v.all_nonzero() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "v",
            reason: format!("{v} has a zero entry; this construction needs v1*v2*v3 != 0"),
        })
    }
}

/// The two coordinate functions of the curve map: `F1 = z^{v1}+z^{v2}+z^{v3}`
/// and `F2` the same for `-v` (elementary symmetric pair of the restriction).
pub fn parametrization(v: ExponentVector) -> (LaurentPoly, LaurentPoly) {
    let f1 = LaurentPoly::from_integer_terms(v.entries().map(|e| (e, 1)));
    let f2 = LaurentPoly::from_integer_terms(v.entries().map(|e| (-e, 1)));
    (f1, f2)
}

/// A successful realization `N·f_{a,b} = P_v` with `P` Schur positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjectureHit {
    pub n: u64,
    /// `P(1,1,1) = N·b^{2a}`, forced by evaluating the identity at `z = 1`.
    pub dimension: u64,
    /// Shapes with nonzero multiplicity, in order.
    pub decomposition: Vec<(Partition, u64)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConjectureOutcome {
    Found(ConjectureHit),
    NotFound { n_max: u64 },
}

/// Searches for the smallest `N ≤ n_max` such that `N·f_{a,b}` is a
/// nonnegative integer combination of restricted Schur polynomials.
///
/// Candidate shapes are enumerated in the standard order up to a total
/// degree cap (default `3·a·(b-1)·max|v_i|`) and kept exactly when their
/// restricted support fits inside the support `[-a(b-1), a(b-1)]` of
/// `f_{a,b}`; a shape whose restriction sticks out can never contribute.
/// For each `N` the multiplicities are found by an exact residual-peeling
/// search; evaluating the identity at `z = 1` forces
/// `Σ λ_i dim_i = N·b^(2a)`, so the search space is bounded and every
/// instance reaches a definite verdict within the configured budget.
pub fn conjecture_search(
    v: ExponentVector,
    a: u32,
    b: u32,
    n_max: u64,
    degree_cap: Option<u64>,
    config: &IlpConfig,
) -> Result<ConjectureOutcome> {
    require_all_nonzero(v)?;
    let f = f_ab(a, b)?;
    let m = i64::from(a) * (i64::from(b) - 1);
    let max_abs = v.entries().iter().map(|e| e.unsigned_abs()).max().unwrap();
    let cap = degree_cap
        .unwrap_or_else(|| 3 * u64::from(a) * u64::from(b - 1) * max_abs);

    let mut shapes = Vec::new();
    if cap >= 3 {
        let full = Partition::new(&[1, 1, 1])?;
        if admissible(&full, v, m) {
            shapes.push(full);
        }
    }
    let top = u32::try_from(cap.min(u64::from(u32::MAX))).unwrap();
    for a1 in 1..=top {
        for b1 in 0..=a1 {
            if u64::from(a1) + u64::from(b1) > cap {
                break;
            }
            let parts = if b1 == 0 { vec![a1] } else { vec![a1, b1] };
            let shape = Partition::new(&parts)?;
            if admissible(&shape, v, m) {
                shapes.push(shape);
            }
        }
    }
    if shapes.is_empty() {
        return Err(Error::CapTooSmall {
            cap,
            reason: format!("no shape restricts into the support window [{}, {}]", -m, m),
        });
    }

    let restrictions: Vec<LaurentPoly> =
        shapes.iter().map(|p| substitute(&schur(p), &v)).collect();
    debug_assert!(restrictions
        .iter()
        .all(|r| r.support().all(|e| e.abs() <= m)));
    let dims: Vec<u64> = shapes.iter().map(dimension).collect();

    for n in 1..=n_max {
        let target = f.scale(&BigRational::from(BigInt::from(n)));
        let Some(mults) = decompose_positive(v, &target, &restrictions, config)? else {
            continue;
        };
        let mut dim = 0u64;
        let mut decomposition = Vec::new();
        for ((shape, &mult), &d) in shapes.iter().zip(&mults).zip(&dims) {
            if mult > 0 {
                dim = mult
                    .checked_mul(d)
                    .and_then(|t| dim.checked_add(t))
                    .ok_or(Error::Overflow("dimension out of u64 range"))?;
                decomposition.push((shape.clone(), mult));
            }
        }
        return Ok(ConjectureOutcome::Found(ConjectureHit {
            n,
            dimension: dim,
            decomposition,
        }));
    }
    Ok(ConjectureOutcome::NotFound { n_max })
}

/// Finds nonnegative integers `m_i` with `Σ m_i s_i = target`, if any exist.
///
/// Every coefficient here is nonnegative, which the engine leans on twice.
/// Evaluating at `z = 1` and comparing supports bound each multiplicity,
/// and any partial remainder must stay nonnegative, a prune that cuts deep.
/// The instance first splits into independent components: two exponents
/// belong together when some summand's support covers both, and a summand
/// only interacts with its own component.  Each component then goes through
/// two engines.  Block peeling works inward from the support edges: the
/// summands whose support ends at the residual's extreme exponent must
/// cancel its coefficient exactly, which forces long chains and detects
/// divisibility obstructions a linear relaxation never sees.  When peeling
/// exceeds a modest node allowance the component falls back to a lattice
/// search run on an equivalent sparse form: multiplying the identity by the
/// Weyl denominator of `v` is exact (multiplication by a nonzero Laurent
/// polynomial is injective) and collapses every summand to an alternant
/// with at most six terms while shrinking the target's coefficients to
/// short differences of the originals.  Together the two engines cover each
/// other's bad cases.
fn decompose_positive(
    v: ExponentVector,
    target: &LaurentPoly,
    summands: &[LaurentPoly],
    config: &IlpConfig,
) -> Result<Option<Vec<u64>>> {
    debug_assert!(summands
        .iter()
        .all(|s| !s.is_zero() && s.terms().all(|(_, c)| c.is_integer() && c.is_positive())));
    debug_assert!(target
        .terms()
        .all(|(_, c)| c.is_integer() && !c.is_negative()));

    // Evaluating the identity at z = 1 bounds every multiplicity: the
    // summands have positive coefficients, so m_i can never exceed
    // target(1) / s_i(1).  Comparing coefficients bounds it again, at every
    // exponent the summand touches.  Both bounds stay valid inside any
    // equivalent reformulation of the component.
    let eval_one = |p: &LaurentPoly| -> BigInt {
        p.terms().map(|(_, c)| c).sum::<BigRational>().to_integer()
    };
    let budget = eval_one(target);
    let caps: Vec<BigInt> = summands
        .iter()
        .map(|s| {
            let eval_cap = &budget / eval_one(s);
            s.terms()
                .map(|(&e, c)| target.coefficient(e).to_integer() / c.to_integer())
                .fold(eval_cap, |a, b| a.min(b))
        })
        .collect();

    let kernel = weyl_kernel(v);
    let mut mults = vec![0u64; summands.len()];
    for component in split_components(target, summands) {
        let (class_target, members) = component;
        if class_target.is_zero() {
            continue;
        }
        if members.is_empty() {
            return Ok(None);
        }
        let class_columns: Vec<&LaurentPoly> =
            members.iter().map(|&j| &summands[j]).collect();
        let class_caps: Vec<BigInt> = members.iter().map(|&j| caps[j].clone()).collect();
        match decompose_component(&class_target, &class_columns, &class_caps, &kernel, config)? {
            None => return Ok(None),
            Some(part) => {
                for (&j, m) in members.iter().zip(part) {
                    mults[j] = m;
                }
            }
        }
    }
    Ok(Some(mults))
}

/// The Weyl denominator of the circle `v`, as a Laurent polynomial in `z`.
///
/// For pairwise distinct exponents this is `Π_{i<j} (z^{v_i} - z^{v_j})`.
/// When two exponents coincide the plain product vanishes; the right
/// degenerate kernel, read off from the derivative form of the character,
/// is the square of the one surviving difference.  Multiplying a character
/// restriction by this kernel collapses it to the corresponding alternant.
fn weyl_kernel(v: ExponentVector) -> LaurentPoly {
    let e = v.entries();
    let diff = |a: i64, b: i64| {
        let mut p = LaurentPoly::zero();
        p.add_term(a, BigRational::one());
        p.add_term(b, -BigRational::one());
        p
    };
    let pair = [(0, 1), (0, 2), (1, 2)]
        .into_iter()
        .find(|&(i, j)| e[i] == e[j]);
    match pair {
        Some((i, j)) => {
            let other = 3 - i - j;
            let d = diff(e[i], e[other]);
            d.mul(&d)
        }
        None => diff(e[0], e[1])
            .mul(&diff(e[0], e[2]))
            .mul(&diff(e[1], e[2])),
    }
}

/// Groups the instance into independent subproblems.  Exponents are glued
/// when a single summand reaches both; every summand and every target term
/// then lands in exactly one component.  Target terms no summand can reach
/// at all come back as a component with an empty member list.
fn split_components(
    target: &LaurentPoly,
    summands: &[LaurentPoly],
) -> Vec<(LaurentPoly, Vec<usize>)> {
    let mut exponents: Vec<i64> = target.support().collect();
    exponents.extend(summands.iter().flat_map(|s| s.support()));
    exponents.sort_unstable();
    exponents.dedup();
    let slot = |e: i64| exponents.binary_search(&e).unwrap();

    let mut parent: Vec<usize> = (0..exponents.len()).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for s in summands {
        let mut sup = s.support();
        let first = slot(sup.next().unwrap());
        for e in sup {
            let (a, b) = (root(&mut parent, first), root(&mut parent, slot(e)));
            parent[a] = b;
        }
    }

    let mut components: std::collections::BTreeMap<usize, (LaurentPoly, Vec<usize>)> =
        std::collections::BTreeMap::new();
    for (&e, c) in target.terms() {
        let r = root(&mut parent, slot(e));
        components
            .entry(r)
            .or_default()
            .0
            .add_term(e, c.clone());
    }
    for (j, s) in summands.iter().enumerate() {
        let r = root(&mut parent, slot(s.support().next().unwrap()));
        components.entry(r).or_default().1.push(j);
    }
    components.into_values().collect()
}

/// Node allowance for block peeling before the component is handed to the
/// integer-programming fallback.
const PEEL_NODE_CAP: u64 = 8_000_000;

/// Node allowance for peeling the leftover of a rounded relaxation
/// witness.  The leftover coefficients are small, so this phase either
/// succeeds quickly or proves nothing.
const DIVE_NODE_CAP: u64 = 1_000_000;

/// Rounds of witness rounding before the dive gives up; the residual mass
/// halves every round, so this is never the binding limit in practice.
const DIVE_ROUNDS: usize = 64;

fn decompose_component(
    target: &LaurentPoly,
    summands: &[&LaurentPoly],
    caps: &[BigInt],
    kernel: &LaurentPoly,
    config: &IlpConfig,
) -> Result<Option<Vec<u64>>> {
    // The alternant view: same variables, same solutions, far sparser rows.
    let alt_target = target.mul(kernel);
    let alt_columns: Vec<LaurentPoly> = summands.iter().map(|s| s.mul(kernel)).collect();
    debug_assert!(alt_columns.iter().all(|c| {
        let n = c.terms().count();
        (2..=6).contains(&n)
    }));

    // A relaxation decides the easy direction outright and otherwise hands
    // back a fractional witness worth rounding.
    let alt_refs: Vec<&LaurentPoly> = alt_columns.iter().collect();
    let lp = component_lp(&alt_target, &alt_refs);
    let witness = match crate::polyhedra::lp_feasible(&lp)? {
        crate::polyhedra::FeasibilityResult::Infeasible => return Ok(None),
        crate::polyhedra::FeasibilityResult::Feasible { witness } => witness,
    };
    // Dive: bank half the witness rounded down, re-solve the relaxation on
    // what is left, and repeat.  Banking `floor(w/2)` keeps `w - floor(w/2)`
    // a nonnegative witness of the new residual, so unlike a full rounding
    // the dive can never leave the feasible cone, while the residual mass
    // still halves every round.  When every coordinate drops below one the
    // dive stalls and the leftover is small enough for a quick peel.  A
    // failed dive proves nothing.
    let two = BigRational::from(BigInt::from(2));
    let mut banked = vec![0u64; summands.len()];
    let mut residual = target.clone();
    let mut dive_witness = witness.clone();
    for _ in 0..DIVE_ROUNDS {
        let mut step: Vec<BigInt> =
            dive_witness.iter().map(|w| (w / &two).floor().to_integer()).collect();
        if step.iter().all(BigInt::is_zero) {
            // All below two: fall back to whole parts, which still keeps
            // the remaining witness nonnegative.
            step = dive_witness.iter().map(|w| w.floor().to_integer()).collect();
        }
        if step.iter().all(BigInt::is_zero) {
            break;
        }
        for (j, f) in step.iter().enumerate() {
            if f.is_positive() {
                let f = u64::try_from(f)
                    .map_err(|_| Error::Overflow("multiplicity out of u64 range"))?;
                banked[j] += f;
                residual =
                    residual.sub(&summands[j].scale(&BigRational::from(BigInt::from(f))));
            }
        }
        debug_assert!(residual.terms().all(|(_, c)| !c.is_negative()));
        if residual.is_zero() {
            return Ok(Some(banked));
        }
        let alt_residual = residual.mul(kernel);
        let lp = component_lp(&alt_residual, &alt_refs);
        match crate::polyhedra::lp_feasible(&lp)? {
            crate::polyhedra::FeasibilityResult::Infeasible => {
                debug_assert!(false, "half-rounding kept a feasible witness");
                break;
            }
            crate::polyhedra::FeasibilityResult::Feasible { witness } => dive_witness = witness,
        }
    }
    let dive_caps: Vec<BigInt> = caps
        .iter()
        .zip(&banked)
        .map(|(c, &f)| (c - BigInt::from(f)).max(BigInt::zero()))
        .collect();
    {
        let r1: BigRational = residual.terms().map(|(_, c)| c).sum();
        let wmax = dive_witness
            .iter()
            .map(|w| format!("{:.2}", w.to_integer().to_string().len()))
            .count();
        eprintln!(
            "[dive stall] residual(1)={} support={} nonzero_w={} of {}",
            r1,
            residual.terms().count(),
            dive_witness.iter().filter(|w| !w.is_zero()).count(),
            wmax
        );
    }
    let dive_limit = DIVE_NODE_CAP.min(config.node_limit);
    match peel(&residual, summands, &dive_caps, dive_limit, config) {
        Ok(Some(extra)) => {
            let mults = banked
                .iter()
                .zip(&extra)
                .map(|(&a, &b)| a + b)
                .collect();
            return Ok(Some(mults));
        }
        Ok(None) => {}
        Err(Error::BudgetExceeded { nodes, .. }) if nodes < config.node_limit => {}
        Err(e) => return Err(e),
    }

    let peel_limit = PEEL_NODE_CAP.min(config.node_limit);
    match peel(target, summands, caps, peel_limit, config) {
        Ok(found) => return Ok(found),
        Err(Error::BudgetExceeded { nodes, .. }) if nodes < config.node_limit => {}
        Err(e) => return Err(e),
    }
    // Peeling ran out of its allowance without exhausting the caller's
    // budget: hand the component to the lattice engine.  It runs on the
    // alternant view, whose small coefficients keep the reduced basis
    // short, and its box search handles the dense middle of the window
    // that defeats peeling.
    let mut exponents: Vec<i64> = alt_target.support().collect();
    exponents.extend(alt_refs.iter().flat_map(|s| s.support()));
    exponents.sort_unstable();
    exponents.dedup();
    let sys = crate::lattice::BoundedSystem {
        rows: exponents
            .iter()
            .map(|&e| alt_refs.iter().map(|s| s.coefficient(e).to_integer()).collect())
            .collect(),
        rhs: exponents
            .iter()
            .map(|&e| alt_target.coefficient(e).to_integer())
            .collect(),
        caps: caps.to_vec(),
    };
    let point = crate::lattice::bounded_integer_point(
        &sys,
        Some(&witness),
        config.node_limit,
        config.time_limit,
    )?;
    match point {
        Some(x) => Ok(Some(
            x.iter()
                .map(|m| u64::try_from(m).expect("nonnegative multiplicity"))
                .collect(),
        )),
        None => Ok(None),
    }
}

/// One equality row per exponent the component touches.
fn component_lp(
    target: &LaurentPoly,
    summands: &[&LaurentPoly],
) -> crate::polyhedra::RationalLP {
    let mut lp = crate::polyhedra::RationalLP::new(summands.len());
    let mut exponents: Vec<i64> = target.support().collect();
    exponents.extend(summands.iter().flat_map(|s| s.support()));
    exponents.sort_unstable();
    exponents.dedup();
    for e in exponents {
        let coeffs: Vec<(usize, BigRational)> = summands
            .iter()
            .enumerate()
            .filter_map(|(j, s)| {
                let c = s.coefficient(e);
                (!c.is_zero()).then_some((j, c))
            })
            .collect();
        lp.add_equality(coeffs, target.coefficient(e));
    }
    lp
}

fn peel(
    target: &LaurentPoly,
    summands: &[&LaurentPoly],
    caps: &[BigInt],
    node_limit: u64,
    config: &IlpConfig,
) -> Result<Option<Vec<u64>>> {
    let tops: Vec<i64> = summands.iter().map(|s| s.max_exponent().unwrap()).collect();
    let bottoms: Vec<i64> = summands.iter().map(|s| s.min_exponent().unwrap()).collect();
    let mut by_top: std::collections::HashMap<i64, Vec<usize>> = Default::default();
    let mut by_bottom: std::collections::HashMap<i64, Vec<usize>> = Default::default();
    for j in 0..summands.len() {
        by_top.entry(tops[j]).or_default().push(j);
        by_bottom.entry(bottoms[j]).or_default().push(j);
    }

    // Everything is nonnegative, so each summand's multiplicity is also
    // bounded by the coefficient ratio at every exponent it touches.  For a
    // small target (the dive leftover, say) this collapses most caps to
    // nearly zero.
    let caps: Vec<BigInt> = summands
        .iter()
        .zip(caps)
        .map(|(s, cap)| {
            s.terms()
                .map(|(&e, c)| target.coefficient(e).to_integer() / c.to_integer())
                .fold(cap.clone(), |a, b| a.min(b))
        })
        .collect();

    let mut peeler = Peeler {
        summands,
        caps,
        tops,
        bottoms,
        by_top,
        by_bottom,
        mults: vec![0; summands.len()],
        dead: std::collections::HashSet::new(),
        nodes: 0,
        node_limit,
        deadline: config.time_limit.map(|d| std::time::Instant::now() + d),
    };
    Ok(peeler
        .descend(target.clone())?
        .then_some(peeler.mults))
}

struct Peeler<'a> {
    summands: &'a [&'a LaurentPoly],
    /// Per-summand multiplicity bounds: the `z = 1` budget intersected
    /// with the coefficient ratios over the summand's support.
    caps: Vec<BigInt>,
    tops: Vec<i64>,
    bottoms: Vec<i64>,
    by_top: std::collections::HashMap<i64, Vec<usize>>,
    by_bottom: std::collections::HashMap<i64, Vec<usize>>,
    /// Written only while unwinding a successful path; everything a
    /// solution never touches keeps its initial zero.
    mults: Vec<u64>,
    /// Residuals already proven undecomposable.  A summand is live exactly
    /// when its support fits inside the residual's window, so the residual
    /// alone is a sound memo key.
    dead: std::collections::HashSet<LaurentPoly>,
    nodes: u64,
    node_limit: u64,
    deadline: Option<std::time::Instant>,
}

impl Peeler<'_> {
    fn charge(&mut self) -> Result<()> {
        self.nodes += 1;
        let out_of_time = self
            .deadline
            .is_some_and(|d| std::time::Instant::now() >= d);
        if self.nodes > self.node_limit || out_of_time {
            return Err(Error::BudgetExceeded {
                nodes: self.nodes,
                limit: self.node_limit,
            });
        }
        Ok(())
    }

    /// Summands whose support window ends exactly at `at` (on the side the
    /// map encodes) and still fits inside `[lo, hi]`, with their
    /// coefficient at `at`, sorted by descending magnitude.
    fn live_members(
        &self,
        ids: Option<&Vec<usize>>,
        at: i64,
        lo: i64,
        hi: i64,
    ) -> Vec<(usize, BigInt)> {
        let Some(ids) = ids else { return Vec::new() };
        let mut members: Vec<(usize, BigInt)> = ids
            .iter()
            .filter(|&&j| self.bottoms[j] >= lo && self.tops[j] <= hi)
            .map(|&j| (j, self.summands[j].coefficient(at).to_integer()))
            .collect();
        members.sort_by(|a, b| b.1.abs().cmp(&a.1.abs()).then(a.0.cmp(&b.0)));
        members
    }

    fn remember_dead(&mut self, residual: LaurentPoly) {
        // Cap the memo so a pathological instance degrades to plain search
        // instead of exhausting memory.
        if self.dead.len() < (1 << 22) {
            self.dead.insert(residual);
        }
    }

    /// Plays one block move on the more constrained end of the residual's
    /// window.  Both extreme coefficients must be cancelled exactly by the
    /// summands whose support ends there, so whichever end admits fewer
    /// combinations is resolved first; working both ends keeps the search
    /// pinned to the sparse edges of the window instead of drifting through
    /// its dense middle.
    fn descend(&mut self, residual: LaurentPoly) -> Result<bool> {
        self.charge()?;
        let Some(hi) = residual.max_exponent() else {
            return Ok(true);
        };
        let lo = residual.min_exponent().unwrap();
        if self.dead.contains(&residual) {
            return Ok(false);
        }
        let top = self.live_members(self.by_top.get(&hi), hi, lo, hi);
        let bottom = self.live_members(self.by_bottom.get(&lo), lo, lo, hi);
        if top.is_empty() || bottom.is_empty() {
            self.remember_dead(residual);
            return Ok(false);
        }
        let want_top = residual.coefficient(hi).to_integer();
        let want_bottom = residual.coefficient(lo).to_integer();
        let (members, want) =
            if (want_top.abs(), top.len()) <= (want_bottom.abs(), bottom.len()) {
                (top, want_top)
            } else {
                (bottom, want_bottom)
            };
        if self.play_block(&members, want, &residual)? {
            Ok(true)
        } else {
            self.remember_dead(residual);
            Ok(false)
        }
    }

    /// Enumerates the block's multiplicity vectors that cancel the chosen
    /// extreme coefficient exactly and recurses on each surviving residual.
    ///
    /// At either end of the window every live summand's extreme coefficient
    /// carries the same sign, so the block normalizes to a nonnegative
    /// knapsack.
    fn play_block(
        &mut self,
        members: &[(usize, BigInt)],
        want: BigInt,
        residual: &LaurentPoly,
    ) -> Result<bool> {
        let negate = members[0].1.is_negative();
        debug_assert!(members.iter().all(|(_, c)| c.is_negative() == negate));
        let want = if negate { -want } else { want };
        if want.is_negative() {
            return Ok(false);
        }
        let leads: Vec<BigInt> = members
            .iter()
            .map(|(_, c)| if negate { -c } else { c.clone() })
            .collect();
        let caps: Vec<BigInt> = members.iter().map(|&(j, _)| self.caps[j].clone()).collect();
        // Suffix prunes for the knapsack: what the tail can still divide
        // into and how much of the extreme coefficient it can still cover.
        let k = members.len();
        let mut gcd_rest = vec![BigInt::zero(); k + 1];
        let mut cover_rest = vec![BigInt::zero(); k + 1];
        for i in (0..k).rev() {
            gcd_rest[i] = gcd_rest[i + 1].gcd(&leads[i]);
            cover_rest[i] = &cover_rest[i + 1] + &caps[i] * &leads[i];
        }
        let mut chosen = vec![0u64; k];
        self.knapsack(
            members, &leads, &caps, &gcd_rest, &cover_rest, 0, want, &mut chosen, residual,
        )
    }

    #[allow(clippy::too_many_arguments)]
    fn knapsack(
        &mut self,
        members: &[(usize, BigInt)],
        leads: &[BigInt],
        caps: &[BigInt],
        gcd_rest: &[BigInt],
        cover_rest: &[BigInt],
        mi: usize,
        want: BigInt,
        chosen: &mut Vec<u64>,
        residual: &LaurentPoly,
    ) -> Result<bool> {
        self.charge()?;
        if want.is_zero() && mi == members.len() {
            return self.apply(members, chosen, residual);
        }
        if mi == members.len()
            || !(&want % &gcd_rest[mi]).is_zero()
            || want > cover_rest[mi]
        {
            return Ok(false);
        }
        let lead = &leads[mi];
        let top = (&want / lead).min(caps[mi].clone());
        let mut m = if mi + 1 == members.len() {
            // Last member: only the exact quotient can work; the gcd prune
            // guaranteed divisibility and the cover prune that it fits the
            // cap.
            &want / lead
        } else {
            top.clone()
        };
        loop {
            chosen[mi] = u64::try_from(&m)
                .map_err(|_| Error::Overflow("multiplicity out of u64 range"))?;
            let rest = &want - &m * lead;
            if self.knapsack(
                members, leads, caps, gcd_rest, cover_rest, mi + 1, rest, chosen, residual,
            )? {
                return Ok(true);
            }
            if m.is_zero() || mi + 1 == members.len() {
                return Ok(false);
            }
            m -= 1;
        }
    }

    /// Subtracts the block's choice from the residual and recurses.
    fn apply(
        &mut self,
        members: &[(usize, BigInt)],
        chosen: &[u64],
        residual: &LaurentPoly,
    ) -> Result<bool> {
        self.charge()?;
        let mut next = residual.clone();
        for (&(j, _), &m) in members.iter().zip(chosen) {
            if m > 0 {
                next = next.sub(&self.summands[j].scale(&BigRational::from(BigInt::from(m))));
            }
        }
        // The summands are nonnegative everywhere, so a residual that has
        // gone negative anywhere can never be finished.
        if next.terms().any(|(_, c)| c.is_negative()) {
            return Ok(false);
        }
        if self.descend(next)? {
            for (&(j, _), &m) in members.iter().zip(chosen) {
                self.mults[j] = m;
            }
            return Ok(true);
        }
        Ok(false)
    }
}

/// Whether the restricted support of the shape fits in `[-m, m]`.  The
/// support extremes of a restricted Schur polynomial are attained at
/// extreme weights, which are the coordinate permutations of the padded
/// part vector, so checking the six permutations is exact.
fn admissible(p: &Partition, v: ExponentVector, m: i64) -> bool {
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let parts = p.padded();
    let entries = v.entries();
    PERMS.iter().all(|perm| {
        let dot: i64 = (0..3)
            .map(|i| i64::from(parts[i]) * entries[perm[i]])
            .sum();
        dot.abs() <= m
    })
}

/// Implicit equation of the curve `z ↦ (F1(z), F2(z))`: a primitive,
/// sign-normalized bivariate polynomial with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveEquation {
    terms: std::collections::BTreeMap<(u32, u32), BigInt>,
}

impl CurveEquation {
    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, dx: u32, dy: u32) -> BigInt {
        self.terms.get(&(dx, dy)).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|&(dx, dy)| dx + dy).max().unwrap_or(0)
    }

    pub fn eval(&self, x1: &BigRational, x2: &BigRational) -> BigRational {
        let mut total = BigRational::zero();
        for (&(dx, dy), c) in &self.terms {
            let mut term = BigRational::from(c.clone());
            for _ in 0..dx {
                term *= x1;
            }
            for _ in 0..dy {
                term *= x2;
            }
            total += term;
        }
        total
    }

    /// Substitutes Laurent polynomials for the two coordinates; composing
    /// with the parametrization of the same curve must give zero.
    pub fn compose(&self, f1: &LaurentPoly, f2: &LaurentPoly) -> LaurentPoly {
        let mut total = LaurentPoly::zero();
        for (&(dx, dy), c) in &self.terms {
            let term = f1
                .pow(dx)
                .mul(&f2.pow(dy))
                .scale(&BigRational::from(c.clone()));
            total = total.add(&term);
        }
        total
    }
}

impl fmt::Display for CurveEquation {
    /// Graded-lex descending, `x1`/`x2` naming: the quartic for `(1,1,-2)`
    /// prints as `x1^2*x2^2 - 4*x1^3 - 4*x2^3 + 18*x1*x2 - 27`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut ordered: Vec<(&(u32, u32), &BigInt)> = self.terms.iter().collect();
        ordered.sort_by_key(|(&(dx, dy), _)| (std::cmp::Reverse(dx + dy), std::cmp::Reverse(dx)));
        for (i, (&(dx, dy), coeff)) in ordered.iter().enumerate() {
            let abs = coeff.abs();
            if i == 0 {
                if coeff.is_negative() {
                    write!(f, "-")?;
                }
            } else if coeff.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut monomial = String::new();
            for (var, deg) in [("x1", dx), ("x2", dy)] {
                if deg == 0 {
                    continue;
                }
                if !monomial.is_empty() {
                    monomial.push('*');
                }
                monomial.push_str(var);
                if deg > 1 {
                    monomial.push_str(&format!("^{deg}"));
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

/// Sylvester-matrix determinant of two coefficient lists (ascending degree,
/// nonzero leading entries).
fn sylvester(f: &[Poly2], g: &[Poly2]) -> Poly2 {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    let mut matrix = vec![vec![Poly2::zero(); size]; size];
    for r in 0..n {
        for j in 0..=m {
            matrix[r][r + j] = f[m - j].clone();
        }
    }
    for r in 0..m {
        for j in 0..=n {
            matrix[n + r][r + j] = g[n - j].clone();
        }
    }
    determinant_bareiss(matrix)
}

/// Ascending coefficient lists in `z` for `z^{s}(F - x_i)` where `s` clears
/// the denominator; the unknown enters as the bivariate monomial `var`.
fn cleared_coefficients(f: &LaurentPoly, var: Poly2) -> Vec<Poly2> {
    let shift = -f.min_exponent().expect("nonzero coordinate function");
    assert!(shift > 0, "coordinate function must have a pole at zero");
    let cleared = f.shifted(shift);
    let deg = usize::try_from(cleared.max_exponent().unwrap()).unwrap();
    let mut coeffs = vec![Poly2::zero(); deg + 1];
    for (&e, c) in cleared.terms() {
        assert!(c.is_integer());
        coeffs[usize::try_from(e).unwrap()].add_term(0, 0, c.to_integer());
    }
    coeffs[usize::try_from(shift).unwrap()] = coeffs[usize::try_from(shift).unwrap()]
        .sub(&var);
    coeffs
}

/// Computes the implicit equation of the image of `z ↦ (F1(z), F2(z))` by
/// eliminating `z` from the cleared system with a Sylvester resultant, then
/// stripping integer and monomial content and normalizing the sign of the
/// graded-lex leading coefficient.
pub fn implicitize(v: ExponentVector) -> Result<CurveEquation> {
    require_all_nonzero(v)?;
    let (f1, f2) = parametrization(v);
    let a = cleared_coefficients(&f1, Poly2::monomial(1, 0, BigInt::one()));
    let b = cleared_coefficients(&f2, Poly2::monomial(0, 1, BigInt::one()));
    let resultant = sylvester(&a, &b);
    if resultant.is_zero() {
        return Err(Error::DegenerateResultant {
            vector: v.entries(),
        });
    }
    let (min_x, min_y) = resultant.min_degrees();
    let content = resultant.content();
    let mut primitive = resultant.divide_monomial(min_x, min_y, &content);
    let (_, lead) = primitive.leading().expect("nonzero resultant");
    if lead.is_negative() {
        primitive = primitive.neg();
    }
    Ok(CurveEquation {
        terms: primitive.terms().map(|(&k, c)| (k, c.clone())).collect(),
    })
}

/// Euler's totient by trial division.
fn euler_phi(mut n: u64) -> u64 {
    let mut phi = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            let mut power = 1u64;
            while n % p == 0 {
                power *= p;
                n /= p;
            }
            phi *= power * (p - 1);
        }
        p += 1;
    }
    if n > 1 {
        phi *= n - 1;
    }
    phi
}

/// Every `n ≥ 2` with `Φ_n` dividing the polynomial.  Since `φ(n) ≥ √(n/2)`,
/// scanning `n ≤ 2·deg²` and skipping `n` with `φ(n) > deg` is exhaustive.
fn cyclotomic_orders(poly: &LaurentPoly) -> BTreeSet<u32> {
    let mut orders = BTreeSet::new();
    let ordinary = poly.to_ordinary();
    let Some(deg) = ordinary.max_exponent() else {
        return orders;
    };
    let deg = u64::try_from(deg).unwrap();
    if deg == 0 {
        return orders;
    }
    for n in 2..=2 * deg * deg {
        if euler_phi(n) > deg {
            continue;
        }
        let n = u32::try_from(n).unwrap();
        if divides(&cyclotomic(n), &ordinary) {
            orders.insert(n);
        }
    }
    orders
}

/// Strips every factor of `z - 1`; the parametrization always degenerates
/// at `z = 1` (an ordinary cusp), so that root carries no information.
fn strip_z_minus_one(poly: &LaurentPoly) -> LaurentPoly {
    debug_assert!(!poly.is_zero());
    let phi1 = cyclotomic(1);
    let mut out = poly.to_ordinary();
    while divides(&phi1, &out) {
        out = exact_div(&out, &phi1);
    }
    out
}

/// Orders of the roots of unity (other than 1) where both coordinate
/// functions have vanishing derivative: the ramification points of the
/// curve map.  Computed as the cyclotomic factors of `gcd(F1', F2')`.
pub fn ramification_orders(v: ExponentVector) -> Result<BTreeSet<u32>> {
    require_all_nonzero(v)?;
    let (f1, f2) = parametrization(v);
    let common = gcd(&f1.derivative(), &f2.derivative());
    Ok(cyclotomic_orders(&strip_z_minus_one(&common)))
}

/// Orders of the roots of unity identified with another point by the curve
/// map.  The conditions `F_i(x) = F_i(y)` are cleared of denominators and
/// divided by `x - y`; eliminating `y` by a resultant leaves a univariate
/// polynomial whose cyclotomic factors (after stripping powers of `x` and
/// of `x - 1`) give the orders.
pub fn identification_orders(v: ExponentVector) -> Result<BTreeSet<u32>> {
    require_all_nonzero(v)?;
    let (f1, f2) = parametrization(v);
    let d1 = diagonal_quotient(&f1);
    let d2 = diagonal_quotient(&f2);
    let c1 = y_coefficients(&d1);
    let c2 = y_coefficients(&d2);
    let resultant = sylvester(&c1, &c2);
    if resultant.is_zero() {
        return Err(Error::DegenerateResultant {
            vector: v.entries(),
        });
    }
    let univariate = poly2_to_univariate(&resultant);
    Ok(cyclotomic_orders(&strip_z_minus_one(&univariate)))
}

/// `(O(x)·y^s − O(y)·x^s) / (x − y)` where `F = O(z)/z^s`; its zeros off the
/// diagonal are the parameter pairs the coordinate function cannot tell
/// apart.
fn diagonal_quotient(f: &LaurentPoly) -> Poly2 {
    let shift = -f.min_exponent().expect("nonzero coordinate function");
    assert!(shift > 0, "coordinate function must have a pole at zero");
    let s = u32::try_from(shift).unwrap();
    let cleared = f.shifted(shift);
    let mut pair_difference = Poly2::zero();
    for (&e, c) in cleared.terms() {
        assert!(c.is_integer());
        let e = u32::try_from(e).unwrap();
        pair_difference.add_term(e, s, c.to_integer());
        pair_difference.add_term(s, e, -c.to_integer());
    }
    let mut x_minus_y = Poly2::monomial(1, 0, BigInt::one());
    x_minus_y.add_term(0, 1, BigInt::from(-1));
    pair_difference.div_exact(&x_minus_y)
}

/// Coefficient list in `y`, ascending, trailing zeros trimmed.
fn y_coefficients(p: &Poly2) -> Vec<Poly2> {
    let max_y = p.terms().map(|(&(_, dy), _)| dy).max().expect("nonzero polynomial");
    let mut coeffs = vec![Poly2::zero(); usize::try_from(max_y).unwrap() + 1];
    for (&(dx, dy), c) in p.terms() {
        coeffs[usize::try_from(dy).unwrap()].add_term(dx, 0, c.clone());
    }
    while coeffs.len() > 1 && coeffs.last().unwrap().is_zero() {
        coeffs.pop();
    }
    coeffs
}

/// Reads a `y`-free bivariate polynomial as a univariate one in `x`.
fn poly2_to_univariate(p: &Poly2) -> LaurentPoly {
    let mut out = LaurentPoly::zero();
    for (&(dx, dy), c) in p.terms() {
        assert_eq!(dy, 0, "resultant should have eliminated y");
        out.add_term(i64::from(dx), BigRational::from(c.clone()));
    }
    out
}

/// The combined cyclotomic diagnosis of a curve map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnityOrders {
    pub ramification: BTreeSet<u32>,
    pub identification: BTreeSet<u32>,
    /// Union of the two.
    pub all: BTreeSet<u32>,
    /// Least common multiple of `all`; 1 when the set is empty.
    pub b0: u64,
}

/// Runs both diagnostics and combines them; `b0` is the least common
/// multiple of every detected order.
pub fn unity_orders(v: ExponentVector) -> Result<UnityOrders> {
    let ramification = ramification_orders(v)?;
    let identification = identification_orders(v)?;
    let all: BTreeSet<u32> = ramification.union(&identification).copied().collect();
    let b0 = all.iter().fold(1u64, |acc, &n| acc.lcm(&u64::from(n)));
    Ok(UnityOrders {
        ramification,
        identification,
        all,
        b0,
    })
}
