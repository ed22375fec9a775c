//! Rational linear programs whose lattice points are matching character
//! pairs.
//!
//! For exponent vectors `v`, `w` and a truncation level `k`, the system has
//! variables `λ_1..λ_k, μ_1..μ_k` (multiplicities of the first `k` shapes in
//! `P` and `Q`), one homogeneous equality per exponent forcing
//! `P_v - Q_w = 0` coefficientwise, and two inequalities asking each side to
//! put weight at least 1 on center-detecting shapes, which is exactly
//! injectivity of the restricted characters.  Everything is kept over
//! `BigRational`; scaling a rational solution by a common denominator turns
//! it into an integer one, so LP feasibility already decides the lattice
//! problem.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::laurent::{substitute, ExponentVector, LaurentPoly};
use crate::simplex::{solve_lp, LpVerdict};
use crate::symfunc::{dimension, first_partitions, schur, Partition};
use crate::{Error, Result};

/// One linear constraint: `coeffs · x = rhs` or `coeffs · x >= rhs`.
/// Coefficients are sparse `(variable, value)` pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub coeffs: Vec<(usize, BigRational)>,
    pub rhs: BigRational,
}

/// A linear program over nonnegative variables.
#[derive(Clone, Debug, Default)]
pub struct RationalLP {
    pub num_vars: usize,
    pub equalities: Vec<Row>,
    pub inequalities: Vec<Row>,
}

impl RationalLP {
    pub fn new(num_vars: usize) -> Self {
        RationalLP {
            num_vars,
            equalities: Vec::new(),
            inequalities: Vec::new(),
        }
    }

    pub fn add_equality(&mut self, coeffs: Vec<(usize, BigRational)>, rhs: BigRational) {
        debug_assert!(coeffs.iter().all(|(j, _)| *j < self.num_vars));
        self.equalities.push(Row { coeffs, rhs });
    }

    pub fn add_inequality(&mut self, coeffs: Vec<(usize, BigRational)>, rhs: BigRational) {
        debug_assert!(coeffs.iter().all(|(j, _)| *j < self.num_vars));
        self.inequalities.push(Row { coeffs, rhs });
    }

    /// Checks a point exactly against every constraint, including
    /// nonnegativity.  Returns a description of the first violation.
    pub fn validate_point(&self, point: &[BigRational]) -> std::result::Result<(), String> {
        if point.len() != self.num_vars {
            return Err(format!(
                "point has {} entries, system has {} variables",
                point.len(),
                self.num_vars
            ));
        }
        for (j, x) in point.iter().enumerate() {
            if x.is_negative() {
                return Err(format!("variable {j} is negative: {x}"));
            }
        }
        for (i, row) in self.equalities.iter().enumerate() {
            let lhs = sparse_dot(&row.coeffs, point);
            if lhs != row.rhs {
                return Err(format!(
                    "equality {i} violated: {lhs} != {}",
                    row.rhs
                ));
            }
        }
        for (i, row) in self.inequalities.iter().enumerate() {
            let lhs = sparse_dot(&row.coeffs, point);
            if lhs < row.rhs {
                return Err(format!(
                    "inequality {i} violated: {lhs} < {}",
                    row.rhs
                ));
            }
        }
        Ok(())
    }
}

fn sparse_dot(coeffs: &[(usize, BigRational)], point: &[BigRational]) -> BigRational {
    coeffs.iter().map(|(j, c)| c * &point[*j]).sum()
}

/// Which linear functional a search minimizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objective {
    /// Sum of the dimensions on both sides; half of it is the dimension of
    /// the representation carrying the matched character.
    Dimension,
    /// Sum of the total degrees of the shapes used.
    TotalDegree,
}

impl Objective {
    pub fn name(&self) -> &'static str {
        match self {
            Objective::Dimension => "dimension",
            Objective::TotalDegree => "total-degree",
        }
    }
}

impl std::str::FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dimension" | "dim" => Ok(Objective::Dimension),
            "total-degree" | "tdeg" => Ok(Objective::TotalDegree),
            other => Err(Error::InvalidParameter {
                name: "objective",
                reason: format!("unknown objective {other:?} (use dim or tdeg)"),
            }),
        }
    }
}

/// The structured matching system for a pair of circles at truncation `k`.
#[derive(Clone, Debug)]
pub struct AmalgamSystem {
    pub v: ExponentVector,
    pub w: ExponentVector,
    pub k: usize,
    /// Shapes 1..=k of the fixed enumeration.
    pub partitions: Vec<Partition>,
    pub dims: Vec<u64>,
    /// Indices (0-based) of center-detecting shapes.
    pub center_detecting: Vec<usize>,
    /// Restrictions of the Schur polynomials along `v` and `w`.
    pub restricted_v: Vec<LaurentPoly>,
    pub restricted_w: Vec<LaurentPoly>,
    /// Exponents carrying at least one nonzero coefficient, ascending; the
    /// equality rows of `lp` follow this order.
    pub exponents: Vec<i64>,
    pub lp: RationalLP,
}

impl AmalgamSystem {
    /// Variables `0..k` are `λ`, `k..2k` are `μ`.
    pub fn build(v: ExponentVector, w: ExponentVector, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter {
                name: "k",
                reason: "truncation level must be at least 1".to_string(),
            });
        }
        let partitions = first_partitions(k);
        let dims: Vec<u64> = partitions.iter().map(dimension).collect();
        let center_detecting: Vec<usize> = partitions
            .iter()
            .enumerate()
            .filter(|(_, p)| p.is_center_detecting())
            .map(|(i, _)| i)
            .collect();
        let restricted_v: Vec<LaurentPoly> =
            partitions.iter().map(|p| substitute(&schur(p), &v)).collect();
        let restricted_w: Vec<LaurentPoly> =
            partitions.iter().map(|p| substitute(&schur(p), &w)).collect();
        let mut exponents: Vec<i64> = restricted_v
            .iter()
            .chain(restricted_w.iter())
            .flat_map(|poly| poly.support().collect::<Vec<_>>())
            .collect();
        exponents.sort_unstable();
        exponents.dedup();

        let mut lp = RationalLP::new(2 * k);
        for &e in &exponents {
            let mut coeffs = Vec::new();
            for (i, poly) in restricted_v.iter().enumerate() {
                let c = poly.coefficient(e);
                if !c.is_zero() {
                    coeffs.push((i, c));
                }
            }
            for (i, poly) in restricted_w.iter().enumerate() {
                let c = poly.coefficient(e);
                if !c.is_zero() {
                    coeffs.push((k + i, -c));
                }
            }
            lp.add_equality(coeffs, BigRational::zero());
        }
        for offset in [0, k] {
            let coeffs: Vec<(usize, BigRational)> = center_detecting
                .iter()
                .map(|&i| (offset + i, BigRational::one()))
                .collect();
            lp.add_inequality(coeffs, BigRational::one());
        }
        Ok(AmalgamSystem {
            v,
            w,
            k,
            partitions,
            dims,
            center_detecting,
            restricted_v,
            restricted_w,
            exponents,
            lp,
        })
    }

    /// Objective vector of length `2k`.
    pub fn objective(&self, which: Objective) -> Vec<BigRational> {
        let per_shape: Vec<u64> = match which {
            Objective::Dimension => self.dims.clone(),
            Objective::TotalDegree => {
                self.partitions.iter().map(|p| p.total_degree()).collect()
            }
        };
        per_shape
            .iter()
            .chain(per_shape.iter())
            .map(|&d| BigRational::from(BigInt::from(d)))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FeasibilityResult {
    Feasible { witness: Vec<BigRational> },
    Infeasible,
}

/// Decides feasibility exactly; a returned witness always re-validates.
pub fn lp_feasible(lp: &RationalLP) -> Result<FeasibilityResult> {
    match solve_lp(lp, None)? {
        LpVerdict::Infeasible => Ok(FeasibilityResult::Infeasible),
        LpVerdict::Optimal { point, .. } => {
            if let Err(err) = lp.validate_point(&point) {
                panic!("solver returned an invalid witness ({err}); this is a bug");
            }
            Ok(FeasibilityResult::Feasible { witness: point })
        }
        LpVerdict::Unbounded => unreachable!("feasibility runs have no objective"),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal {
        value: BigRational,
        point: Vec<BigRational>,
    },
    Infeasible,
    Unbounded,
}

/// Minimizes `objective · x` exactly over the feasible region.
pub fn lp_optimize(lp: &RationalLP, objective: &[BigRational]) -> Result<LpOutcome> {
    if objective.len() != lp.num_vars {
        return Err(Error::InvalidParameter {
            name: "objective",
            reason: format!(
                "objective has {} entries, system has {} variables",
                objective.len(),
                lp.num_vars
            ),
        });
    }
    match solve_lp(lp, Some(objective))? {
        LpVerdict::Infeasible => Ok(LpOutcome::Infeasible),
        LpVerdict::Unbounded => Ok(LpOutcome::Unbounded),
        LpVerdict::Optimal { value, point } => {
            if let Err(err) = lp.validate_point(&point) {
                panic!("solver returned an invalid optimum ({err}); this is a bug");
            }
            Ok(LpOutcome::Optimal { value, point })
        }
    }
}

/// Clears denominators of a feasible rational point and reduces by the gcd
/// when the reduced point still satisfies the system.  For the matching
/// systems this always succeeds: the equalities are homogeneous, and the
/// inequality right-hand sides are 0 or 1, so multiplying by a positive
/// integer preserves feasibility.  The scaled point is re-validated, so a
/// system where scaling is unsound yields an error instead of a bad point.
pub fn scale_to_integral(lp: &RationalLP, point: &[BigRational]) -> Result<Vec<BigInt>> {
    lp.validate_point(point)
        .map_err(Error::PointNotFeasible)?;
    let mut lcm = BigInt::one();
    for x in point {
        lcm = lcm.lcm(x.denom());
    }
    let scaled: Vec<BigInt> = point
        .iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect();
    let as_rationals = |ints: &[BigInt]| -> Vec<BigRational> {
        ints.iter().map(|n| BigRational::from(n.clone())).collect()
    };
    lp.validate_point(&as_rationals(&scaled))
        .map_err(|e| Error::PointNotFeasible(format!("after clearing denominators: {e}")))?;
    let gcd = scaled
        .iter()
        .fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if gcd > BigInt::one() {
        let reduced: Vec<BigInt> = scaled.iter().map(|x| x / &gcd).collect();
        if lp.validate_point(&as_rationals(&reduced)).is_ok() {
            return Ok(reduced);
        }
    }
    Ok(scaled)
}

/// Dimension of the affine hull of the feasible region: the number of
/// variables minus the rank of the explicit equalities together with the
/// inequalities (including nonnegativity) that hold with equality on the
/// whole region.  Each candidate inequality is tested with one capped
/// auxiliary program maximizing its slack.
pub fn affine_dimension(lp: &RationalLP) -> Result<usize> {
    match lp_feasible(lp)? {
        FeasibilityResult::Feasible { .. } => {}
        FeasibilityResult::Infeasible => {
            return Err(Error::InvalidParameter {
                name: "system",
                reason: "the feasible region is empty".to_string(),
            })
        }
    }
    let mut candidates: Vec<Vec<(usize, BigRational)>> = Vec::new();
    let mut rhs_list: Vec<BigRational> = Vec::new();
    for row in &lp.inequalities {
        candidates.push(row.coeffs.clone());
        rhs_list.push(row.rhs.clone());
    }
    for j in 0..lp.num_vars {
        candidates.push(vec![(j, BigRational::one())]);
        rhs_list.push(BigRational::zero());
    }
    let mut tight_rows: Vec<Vec<(usize, BigRational)>> = Vec::new();
    for (cand, rhs) in candidates.iter().zip(&rhs_list) {
        if max_slack_is_zero(lp, cand, rhs)? {
            tight_rows.push(cand.clone());
        }
    }
    let mut all_rows: Vec<Vec<(usize, BigRational)>> = lp
        .equalities
        .iter()
        .map(|r| r.coeffs.clone())
        .collect();
    all_rows.extend(tight_rows);
    Ok(lp.num_vars - rank(lp.num_vars, &all_rows))
}

/// Maximizes `min(1, a·x - rhs)` over the region; zero means the inequality
/// is an implicit equality.
fn max_slack_is_zero(
    lp: &RationalLP,
    coeffs: &[(usize, BigRational)],
    rhs: &BigRational,
) -> Result<bool> {
    let t = lp.num_vars;
    let mut aux = RationalLP::new(t + 1);
    for row in &lp.equalities {
        aux.add_equality(row.coeffs.clone(), row.rhs.clone());
    }
    for row in &lp.inequalities {
        aux.add_inequality(row.coeffs.clone(), row.rhs.clone());
    }
    let mut slack_row = coeffs.to_vec();
    slack_row.push((t, -BigRational::one()));
    aux.add_inequality(slack_row, rhs.clone());
    aux.add_inequality(vec![(t, -BigRational::one())], -BigRational::one());
    let mut objective = vec![BigRational::zero(); t + 1];
    objective[t] = -BigRational::one();
    match lp_optimize(&aux, &objective)? {
        LpOutcome::Optimal { value, .. } => Ok(value.is_zero()),
        LpOutcome::Infeasible => unreachable!("region is nonempty and t = 0 is feasible"),
        LpOutcome::Unbounded => unreachable!("t is capped at 1"),
    }
}

/// Rank of a sparse row list via Gaussian elimination over the rationals.
fn rank(num_vars: usize, rows: &[Vec<(usize, BigRational)>]) -> usize {
    let mut dense: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|row| {
            let mut d = vec![BigRational::zero(); num_vars];
            for (j, c) in row {
                d[*j] = &d[*j] + c;
            }
            d
        })
        .collect();
    let mut rank = 0;
    for col in 0..num_vars {
        let Some(pivot) = (rank..dense.len()).find(|&i| !dense[i][col].is_zero()) else {
            continue;
        };
        dense.swap(rank, pivot);
        let lead = dense[rank][col].clone();
        for j in col..num_vars {
            dense[rank][j] = &dense[rank][j] / &lead;
        }
        let pivot_row = dense[rank].clone();
        for (i, row) in dense.iter_mut().enumerate() {
            if i == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for j in col..num_vars {
                let delta = &factor * &pivot_row[j];
                row[j] = &row[j] - &delta;
            }
        }
        rank += 1;
        if rank == dense.len() {
            break;
        }
    }
    rank
}
