//! Exact integer solving.
//!
//! Two independent routes are provided.  [`solve_ilp`] is a branch-and-bound
//! over the exact rational relaxation: no floating point, no cutting planes,
//! every bound and every incumbent exact.  [`enumerate_integral`] lists all
//! lattice points of a matching system below a dimension cap by enumerating
//! each side separately and joining on the restricted Laurent polynomial;
//! it never touches the simplex, which makes it a genuine cross-check for
//! the branch-and-bound.

use std::collections::BTreeMap;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::laurent::LaurentPoly;
use crate::polyhedra::{lp_optimize, scale_to_integral, AmalgamSystem, LpOutcome, RationalLP};
use crate::{Error, Result};

/// Budgets for the exact searches.
#[derive(Clone, Debug)]
pub struct IlpConfig {
    /// Maximum number of branch-and-bound nodes (relaxations solved).
    pub node_limit: u64,
    /// Optional wall-clock budget; `None` keeps runs deterministic.
    pub time_limit: Option<std::time::Duration>,
}

impl Default for IlpConfig {
    fn default() -> Self {
        IlpConfig {
            node_limit: 10_000_000,
            time_limit: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerSolution {
    pub point: Vec<BigInt>,
    pub objective: BigInt,
    pub nodes_explored: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IlpOutcome {
    Optimal(IntegerSolution),
    Infeasible,
    /// The node budget ran out; the incumbent, if any, is feasible but not
    /// proven optimal.
    BudgetExceeded {
        nodes: u64,
        incumbent: Option<IntegerSolution>,
    },
}

#[derive(Clone, Debug, Default)]
struct Bounds {
    by_var: BTreeMap<usize, (Option<BigInt>, Option<BigInt>)>,
}

impl Bounds {
    fn with_lower(&self, var: usize, bound: BigInt) -> Bounds {
        let mut next = self.clone();
        let entry = next.by_var.entry(var).or_default();
        entry.0 = Some(match entry.0.take() {
            Some(old) => old.max(bound),
            None => bound,
        });
        next
    }

    fn with_upper(&self, var: usize, bound: BigInt) -> Bounds {
        let mut next = self.clone();
        let entry = next.by_var.entry(var).or_default();
        entry.1 = Some(match entry.1.take() {
            Some(old) => old.min(bound),
            None => bound,
        });
        next
    }

    fn apply(&self, base: &RationalLP) -> RationalLP {
        let mut lp = base.clone();
        for (&var, (lower, upper)) in &self.by_var {
            if let Some(l) = lower {
                lp.add_inequality(
                    vec![(var, BigRational::from(BigInt::from(1)))],
                    BigRational::from(l.clone()),
                );
            }
            if let Some(u) = upper {
                lp.add_inequality(
                    vec![(var, BigRational::from(BigInt::from(-1)))],
                    BigRational::from(-u.clone()),
                );
            }
        }
        lp
    }
}

/// Minimizes an integral linear objective over the lattice points of the
/// region.  Depth-first branch-and-bound, exploring the branch nearest the
/// relaxed optimum first; the branching variable is the fractional variable
/// with the largest objective coefficient (ties: fractional part closest to
/// 1/2, then lowest index), which on these systems confines the search to a
/// few hundred nodes where more common rules wander for tens of thousands.
pub fn solve_ilp(
    lp: &RationalLP,
    objective: &[BigRational],
    config: &IlpConfig,
) -> Result<IlpOutcome> {
    if objective.len() != lp.num_vars {
        return Err(Error::InvalidParameter {
            name: "objective",
            reason: "length must match the variable count".to_string(),
        });
    }
    if objective.iter().any(|c| !c.is_integer()) {
        return Err(Error::InvalidParameter {
            name: "objective",
            reason: "integer programming requires an integral objective".to_string(),
        });
    }

    // Reducing the equality rows once up front keeps every node relaxation
    // from redoing the same elimination.
    let Some(lp) = &crate::simplex::reduce_equalities(lp) else {
        return Ok(IlpOutcome::Infeasible);
    };

    let started = std::time::Instant::now();
    let mut nodes: u64 = 0;
    let mut incumbent: Option<(Vec<BigInt>, BigInt)> = None;
    let mut stack: Vec<Bounds> = vec![Bounds::default()];

    while let Some(bounds) = stack.pop() {
        let out_of_time = config
            .time_limit
            .is_some_and(|limit| started.elapsed() > limit);
        if nodes >= config.node_limit || out_of_time {
            return Ok(IlpOutcome::BudgetExceeded {
                nodes,
                incumbent: incumbent.map(|(point, objective)| IntegerSolution {
                    point,
                    objective,
                    nodes_explored: nodes,
                }),
            });
        }
        nodes += 1;
        let node_lp = bounds.apply(lp);
        let (value, point) = match lp_optimize(&node_lp, objective)? {
            LpOutcome::Infeasible => continue,
            LpOutcome::Unbounded => {
                return Err(Error::InvalidParameter {
                    name: "objective",
                    reason: "objective is unbounded below on the region".to_string(),
                })
            }
            LpOutcome::Optimal { value, point } => (value, point),
        };
        // Any lattice point in this subtree costs at least ceil(value).
        let floor_of_bound = value.ceil().to_integer();
        if let Some((_, best)) = &incumbent {
            if floor_of_bound >= *best {
                continue;
            }
        }
        // A scaled copy of the relaxed optimum is often a good incumbent;
        // validity is checked against the base system, not the node bounds.
        if let Ok(candidate) = scale_to_integral(lp, &point) {
            let cand_obj = integral_objective(objective, &candidate);
            if incumbent
                .as_ref()
                .is_none_or(|(_, best)| cand_obj < *best)
            {
                incumbent = Some((candidate, cand_obj));
            }
        }
        let fractional: Vec<usize> = (0..point.len())
            .filter(|&j| !point[j].is_integer())
            .collect();
        if fractional.is_empty() {
            let int_point: Vec<BigInt> = point.iter().map(|x| x.to_integer()).collect();
            let obj = integral_objective(objective, &int_point);
            if incumbent
                .as_ref()
                .is_none_or(|(_, best)| obj < *best)
            {
                incumbent = Some((int_point, obj));
            }
            continue;
        }
        let branch = *fractional
            .iter()
            .max_by(|&&a, &&b| {
                objective[a]
                    .cmp(&objective[b])
                    .then_with(|| half_distance(&point[b]).cmp(&half_distance(&point[a])))
                    .then_with(|| b.cmp(&a))
            })
            .expect("nonempty fractional set");
        let frac = &point[branch] - point[branch].floor();
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let floor = point[branch].floor().to_integer();
        let up = bounds.with_lower(branch, &floor + 1);
        let down = bounds.with_upper(branch, floor);
        // Following the relaxed optimum reaches an integral point sooner.
        if frac >= half {
            stack.push(down);
            stack.push(up);
        } else {
            stack.push(up);
            stack.push(down);
        }
    }

    Ok(match incumbent {
        Some((point, objective)) => IlpOutcome::Optimal(IntegerSolution {
            point,
            objective,
            nodes_explored: nodes,
        }),
        None => IlpOutcome::Infeasible,
    })
}

fn integral_objective(objective: &[BigRational], point: &[BigInt]) -> BigInt {
    let total: BigRational = objective
        .iter()
        .zip(point)
        .map(|(c, x)| c * BigRational::from(x.clone()))
        .sum();
    debug_assert!(total.is_integer());
    total.to_integer()
}

/// Distance of the fractional part from 1/2; smaller means more fractional.
fn half_distance(x: &BigRational) -> BigRational {
    let frac = x - x.floor();
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    (frac - half).abs()
}

/// One lattice point of a matching system: multiplicities for both sides
/// and the common dimension `Σ λ_i d_i = Σ μ_i d_i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LatticePoint {
    pub lambda: Vec<u64>,
    pub mu: Vec<u64>,
    pub dimension: u64,
}

/// Lists every lattice point of the matching system whose dimension is at
/// most `dim_cap`, by exhausting each side independently and joining pairs
/// whose restrictions agree.  `budget` caps the number of enumeration steps.
/// The result is sorted by `(lambda, mu)`.
pub fn enumerate_integral(
    system: &AmalgamSystem,
    dim_cap: u64,
    budget: u64,
) -> Result<Vec<LatticePoint>> {
    let mut steps: u64 = 0;
    let lambda_side = enumerate_side(
        &system.restricted_v,
        &system.dims,
        &system.center_detecting,
        dim_cap,
        budget,
        &mut steps,
    )?;
    let mu_side = enumerate_side(
        &system.restricted_w,
        &system.dims,
        &system.center_detecting,
        dim_cap,
        budget,
        &mut steps,
    )?;
    let mut points = Vec::new();
    for (poly, lambdas) in &lambda_side {
        let Some(mus) = mu_side.get(poly) else {
            continue;
        };
        for lambda in lambdas {
            for mu in mus {
                steps += 1;
                if steps > budget {
                    return Err(Error::BudgetExceeded {
                        nodes: steps,
                        limit: budget,
                    });
                }
                let dimension: u64 = lambda
                    .iter()
                    .zip(&system.dims)
                    .map(|(&m, &d)| m * d)
                    .sum();
                points.push(LatticePoint {
                    lambda: lambda.clone(),
                    mu: mu.clone(),
                    dimension,
                });
            }
        }
    }
    points.sort();
    Ok(points)
}

/// All multiplicity vectors with `Σ m_i d_i <= cap` and positive weight on a
/// center-detecting shape, grouped by their restricted Laurent polynomial.
fn enumerate_side(
    restrictions: &[LaurentPoly],
    dims: &[u64],
    center_detecting: &[usize],
    cap: u64,
    budget: u64,
    steps: &mut u64,
) -> Result<HashMap<LaurentPoly, Vec<Vec<u64>>>> {
    let mut groups: HashMap<LaurentPoly, Vec<Vec<u64>>> = HashMap::new();
    let is_detecting: Vec<bool> = {
        let mut flags = vec![false; dims.len()];
        for &i in center_detecting {
            flags[i] = true;
        }
        flags
    };
    let mut current = vec![0u64; dims.len()];
    let mut poly_stack: Vec<LaurentPoly> = vec![LaurentPoly::zero()];
    rec_side(
        restrictions,
        dims,
        &is_detecting,
        cap,
        budget,
        steps,
        0,
        false,
        &mut current,
        &mut poly_stack,
        &mut groups,
    )?;
    Ok(groups)
}

#[allow(clippy::too_many_arguments)]
fn rec_side(
    restrictions: &[LaurentPoly],
    dims: &[u64],
    is_detecting: &[bool],
    cap: u64,
    budget: u64,
    steps: &mut u64,
    index: usize,
    has_detecting: bool,
    current: &mut Vec<u64>,
    poly_stack: &mut Vec<LaurentPoly>,
    groups: &mut HashMap<LaurentPoly, Vec<Vec<u64>>>,
) -> Result<()> {
    *steps += 1;
    if *steps > budget {
        return Err(Error::BudgetExceeded {
            nodes: *steps,
            limit: budget,
        });
    }
    if index == dims.len() {
        if has_detecting {
            let poly = poly_stack.last().expect("base poly").clone();
            groups.entry(poly).or_default().push(current.clone());
        }
        return Ok(());
    }
    let used: u64 = current
        .iter()
        .zip(dims)
        .take(index)
        .map(|(&m, &d)| m * d)
        .sum();
    let max_mult = (cap - used) / dims[index];
    let base = poly_stack.last().expect("base poly").clone();
    for mult in 0..=max_mult {
        current[index] = mult;
        let poly = if mult == 0 {
            base.clone()
        } else {
            base.add(
                &restrictions[index]
                    .scale(&BigRational::from(BigInt::from(mult))),
            )
        };
        poly_stack.push(poly);
        rec_side(
            restrictions,
            dims,
            is_detecting,
            cap,
            budget,
            steps,
            index + 1,
            has_detecting || (mult > 0 && is_detecting[index]),
            current,
            poly_stack,
            groups,
        )?;
        poly_stack.pop();
    }
    current[index] = 0;
    Ok(())
}
