//! Top-level questions and answers.
//!
//! This module turns the machinery below it into the three operations a
//! user actually asks for: find the smallest truncation level at which two
//! circles admit a matching pair, produce a minimal matching pair as a
//! self-contained certificate, and re-verify such a certificate from
//! scratch.  Verification deliberately recomputes everything through two
//! independent routes where the theory offers two; a certificate that
//! passes was checked, not trusted.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::ilp::{solve_ilp, IlpConfig, IlpOutcome};
use crate::laurent::{eval_at_center, substitute, CyclotomicValue, ExponentVector, LaurentPoly};
use crate::polyhedra::{lp_feasible, AmalgamSystem, FeasibilityResult, Objective};
use crate::symfunc::{dimension, first_partitions, schur, Partition, SymPoly};
use crate::{Error, Result};

/// Bumped whenever the certificate layout changes incompatibly.
pub const CERTIFICATE_SCHEMA_VERSION: u32 = 1;

/// Identifies the shape ordering the multiplicity vectors refer to.
pub const ORDERING_ID: &str = "lex-v1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinKOutcome {
    /// Smallest `k` at which a matching pair supported on the first `k`
    /// shapes exists.
    Found(usize),
    /// No feasible truncation up to and including `k_max`.
    NotFound { k_max: usize },
}

/// Whether some matching pair is supported on the first `k` shapes.
pub fn is_feasible(v: ExponentVector, w: ExponentVector, k: usize) -> Result<bool> {
    let system = AmalgamSystem::build(v, w, k)?;
    Ok(matches!(
        lp_feasible(&system.lp)?,
        FeasibilityResult::Feasible { .. }
    ))
}

/// Finds the least feasible truncation level by doubling from `k_start`
/// and then bisecting.  Feasibility is monotone in `k` (adding shapes only
/// relaxes the system), so bisection is sound; the lower end of the bracket
/// starts at the empty truncation, which lets the search settle below
/// `k_start` when the caller guessed high.
pub fn min_feasible_k(
    v: ExponentVector,
    w: ExponentVector,
    k_start: usize,
    k_max: usize,
) -> Result<MinKOutcome> {
    if k_max == 0 {
        return Err(Error::InvalidParameter {
            name: "k_max",
            reason: "must be at least 1".to_string(),
        });
    }
    let mut lo = 0usize;
    let mut probe = k_start.clamp(1, k_max);
    let mut hi = None;
    loop {
        if is_feasible(v, w, probe)? {
            hi = Some(probe);
            break;
        }
        lo = probe;
        if probe == k_max {
            break;
        }
        probe = (probe * 2).min(k_max);
    }
    let Some(mut hi) = hi else {
        return Ok(MinKOutcome::NotFound { k_max });
    };
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if is_feasible(v, w, mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(MinKOutcome::Found(hi))
}

/// One irreducible summand of a character.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionEntry {
    pub partition: Vec<u32>,
    pub multiplicity: u64,
}

/// A self-contained, re-checkable description of a matching pair.
///
/// `lambda` and `mu` are multiplicities over the first `k` shapes in the
/// ordering named by `ordering`; the decompositions repeat the nonzero
/// entries with explicit partitions for human consumption.  The certificate
/// carries everything needed for verification without access to the solver
/// that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub ordering: String,
    pub v: [i64; 3],
    pub w: [i64; 3],
    pub k: usize,
    pub objective: String,
    pub lambda: Vec<u64>,
    pub mu: Vec<u64>,
    pub dimension: u64,
    /// False when a search budget ran out: the pair is feasible and fully
    /// verified, but a smaller one might exist.
    pub proven_optimal: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub p_decomposition: Vec<DecompositionEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub q_decomposition: Vec<DecompositionEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Solved(Certificate),
    /// No matching pair is supported on the first `k` shapes.
    Infeasible,
}

/// Finds a minimal matching pair at truncation level `k` and packages it
/// as a certificate.  If the node budget runs out but an incumbent exists,
/// the incumbent is returned with `proven_optimal` false; running out with
/// no incumbent at all is an error.
pub fn solve(
    v: ExponentVector,
    w: ExponentVector,
    k: usize,
    objective: Objective,
    config: &IlpConfig,
) -> Result<SolveOutcome> {
    let system = AmalgamSystem::build(v, w, k)?;
    let coeffs = system.objective(objective);
    let (solution, proven_optimal) = match solve_ilp(&system.lp, &coeffs, config)? {
        IlpOutcome::Optimal(sol) => (sol, true),
        IlpOutcome::Infeasible => return Ok(SolveOutcome::Infeasible),
        IlpOutcome::BudgetExceeded { nodes, incumbent } => match incumbent {
            Some(sol) => (sol, false),
            None => {
                return Err(Error::BudgetExceeded {
                    nodes,
                    limit: config.node_limit,
                })
            }
        },
    };
    let multiplicities: Vec<u64> = solution
        .point
        .iter()
        .map(|b| {
            u64::try_from(b).map_err(|_| Error::Overflow("multiplicity out of u64 range"))
        })
        .collect::<Result<_>>()?;
    let (lambda, mu) = multiplicities.split_at(k);
    let dim: u64 = lambda
        .iter()
        .zip(&system.dims)
        .map(|(&m, &d)| m * d)
        .sum();
    Ok(SolveOutcome::Solved(Certificate {
        schema_version: CERTIFICATE_SCHEMA_VERSION,
        ordering: ORDERING_ID.to_string(),
        v: v.entries(),
        w: w.entries(),
        k,
        objective: objective.name().to_string(),
        lambda: lambda.to_vec(),
        mu: mu.to_vec(),
        dimension: dim,
        proven_optimal,
        p_decomposition: decomposition(&system.partitions, lambda),
        q_decomposition: decomposition(&system.partitions, mu),
    }))
}

fn decomposition(partitions: &[Partition], mults: &[u64]) -> Vec<DecompositionEntry> {
    partitions
        .iter()
        .zip(mults)
        .filter(|&(_, &m)| m > 0)
        .map(|(p, &m)| DecompositionEntry {
            partition: p.parts().to_vec(),
            multiplicity: m,
        })
        .collect()
}

/// Outcome of one verification check.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    /// True iff every check passed.
    pub passed: bool,
}

/// Re-verifies a certificate from first principles.
///
/// Structural problems (wrong schema version, unknown ordering, mismatched
/// lengths, invalid exponent vectors) are errors: such a certificate cannot
/// be meaningfully checked.  A well-formed certificate always produces a
/// report; a failing check means the claimed pair is wrong, not that the
/// input was garbled.
///
/// The injectivity of each character is confirmed twice, by independent
/// routes: once by locating a center-detecting shape with positive
/// multiplicity, and once by evaluating the character at a nontrivial
/// central element and comparing with its value at the identity.  The two
/// must agree for Schur-positive characters; checking both guards the
/// implementation as much as the certificate.
pub fn verify(cert: &Certificate) -> Result<VerificationReport> {
    if cert.schema_version != CERTIFICATE_SCHEMA_VERSION {
        return Err(Error::MalformedCertificate(format!(
            "schema version {} is not supported (expected {})",
            cert.schema_version, CERTIFICATE_SCHEMA_VERSION
        )));
    }
    if cert.ordering != ORDERING_ID {
        return Err(Error::MalformedCertificate(format!(
            "unknown shape ordering {:?} (expected {:?})",
            cert.ordering, ORDERING_ID
        )));
    }
    if cert.k == 0 {
        return Err(Error::MalformedCertificate(
            "truncation level k must be at least 1".to_string(),
        ));
    }
    if cert.lambda.len() != cert.k || cert.mu.len() != cert.k {
        return Err(Error::MalformedCertificate(format!(
            "multiplicity vectors must have length k = {} (got {} and {})",
            cert.k,
            cert.lambda.len(),
            cert.mu.len()
        )));
    }
    if cert.objective.parse::<Objective>().is_err() {
        return Err(Error::MalformedCertificate(format!(
            "unknown objective {:?}",
            cert.objective
        )));
    }
    let v = ExponentVector::new(cert.v)
        .map_err(|e| Error::MalformedCertificate(e.to_string()))?;
    let w = ExponentVector::new(cert.w)
        .map_err(|e| Error::MalformedCertificate(e.to_string()))?;

    let partitions = first_partitions(cert.k);
    let mut checks = Vec::new();

    // Route one: the two restrictions must cancel exactly.
    let restricted =
        |vec: &ExponentVector, mults: &[u64]| -> LaurentPoly {
            let mut acc = LaurentPoly::zero();
            for (p, &m) in partitions.iter().zip(mults) {
                if m > 0 {
                    let factor = BigRational::from(BigInt::from(m));
                    acc = acc.add(&substitute(&schur(p), vec).scale(&factor));
                }
            }
            acc
        };
    let difference = restricted(&v, &cert.lambda).sub(&restricted(&w, &cert.mu));
    checks.push(Check {
        name: "restriction-difference-vanishes",
        passed: difference.is_zero(),
        detail: if difference.is_zero() {
            "the two characters restrict to the same Laurent polynomial".to_string()
        } else {
            format!("restrictions differ by {difference}")
        },
    });

    // Injectivity, combinatorial route: a shape of total degree not
    // divisible by three must carry positive multiplicity.
    for (name, mults) in [
        ("p-weights-center-detecting-shape", &cert.lambda),
        ("q-weights-center-detecting-shape", &cert.mu),
    ] {
        let witness = partitions
            .iter()
            .zip(mults.iter())
            .find(|(p, &m)| m > 0 && p.is_center_detecting());
        checks.push(Check {
            name,
            passed: witness.is_some(),
            detail: match witness {
                Some((p, _)) => format!("shape {p} has total degree {}", p.total_degree()),
                None => "no center-detecting shape has positive multiplicity".to_string(),
            },
        });
    }

    // Injectivity, evaluation route: the character must separate a
    // nontrivial central element from the identity.
    for (name, mults) in [
        ("p-separates-center", &cert.lambda),
        ("q-separates-center", &cert.mu),
    ] {
        let mut character = SymPoly::zero();
        for (p, &m) in partitions.iter().zip(mults.iter()) {
            if m > 0 {
                character = character.add(&schur(p).scale(&BigInt::from(m)));
            }
        }
        let at_center = eval_at_center(&character);
        let at_identity = CyclotomicValue::from_rational(BigRational::from(
            character.eval_at_ones(),
        ));
        let passed = at_center != at_identity;
        checks.push(Check {
            name,
            passed,
            detail: format!(
                "value at a nontrivial central element is {at_center}, at the identity {}",
                character.eval_at_ones()
            ),
        });
    }

    // Both sides must have the stated dimension.
    let dims: Vec<u128> = partitions.iter().map(|p| u128::from(dimension(p))).collect();
    let side_dim = |mults: &[u64]| -> u128 {
        mults
            .iter()
            .zip(&dims)
            .map(|(&m, &d)| u128::from(m) * d)
            .sum()
    };
    let p_dim = side_dim(&cert.lambda);
    let q_dim = side_dim(&cert.mu);
    let claimed = u128::from(cert.dimension);
    checks.push(Check {
        name: "dimension-consistent",
        passed: p_dim == claimed && q_dim == claimed,
        detail: format!("P has dimension {p_dim}, Q has dimension {q_dim}, certificate claims {claimed}"),
    });

    // The human-readable decompositions, when present, must match the
    // multiplicity vectors exactly.
    for (name, mults, listed) in [
        ("p-decomposition-consistent", &cert.lambda, &cert.p_decomposition),
        ("q-decomposition-consistent", &cert.mu, &cert.q_decomposition),
    ] {
        let (passed, detail) = if listed.is_empty() {
            (true, "no decomposition supplied".to_string())
        } else {
            let expected = decomposition(&partitions, mults);
            if *listed == expected {
                (true, format!("{} summands match", expected.len()))
            } else {
                (false, "listed summands disagree with the multiplicity vector".to_string())
            }
        };
        checks.push(Check { name, passed, detail });
    }

    let passed = checks.iter().all(|c| c.passed);
    Ok(VerificationReport { checks, passed })
}
