//! Cross-module property and oracle suites.
//!
//! Everything here checks the library against something independent of it:
//! a closed-form dimension count, a tableau enumerator written only for these
//! tests, algebraic identities forced by symmetry, and exhaustive lattice
//! enumeration as a counterweight to branch-and-bound.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use amalgam_core::ilp::{enumerate_integral, solve_ilp, IlpConfig, IlpOutcome};
use amalgam_core::laurent::{
    eval_at_center, substitute, CyclotomicValue, ExponentVector, LaurentPoly,
};
use amalgam_core::polyhedra::{
    lp_feasible, scale_to_integral, AmalgamSystem, FeasibilityResult, Objective,
};
use amalgam_core::relaxed::{f_ab, implicitize, parametrization};
use amalgam_core::search::{
    is_feasible, min_feasible_k, solve, verify, Certificate, MinKOutcome, SolveOutcome,
};
use amalgam_core::symfunc::{
    dimension, partition_by_index, schur, Partition, SymPoly,
};

fn vector(entries: [i64; 3]) -> ExponentVector {
    ExponentVector::new(entries).unwrap()
}

fn rational(n: u64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

/// Every admissible shape with total degree at most `cap`.
fn shapes_up_to(cap: u64) -> Vec<Partition> {
    let mut shapes = Vec::new();
    if cap >= 3 {
        shapes.push(Partition::new(&[1, 1, 1]).unwrap());
    }
    for a in 1..=u32::try_from(cap).unwrap() {
        for b in 0..=a {
            if u64::from(a) + u64::from(b) <= cap {
                shapes.push(Partition::new(&[a, b]).unwrap());
            }
        }
    }
    shapes
}

/// Monomial expansion of `s_λ` by direct enumeration of semistandard
/// tableaux with entries in {1, 2, 3}: rows weakly increase left to right,
/// columns strictly increase top to bottom.  Independent of the bialternant
/// route used by the library.
fn tableau_expansion(shape: &Partition) -> SymPoly {
    fn fill(cells: &[(usize, usize)], at: usize, grid: &mut [Vec<u8>], out: &mut SymPoly) {
        if at == cells.len() {
            let mut exps = [0u32; 3];
            for &(r, c) in cells {
                exps[usize::from(grid[r][c]) - 1] += 1;
            }
            out.add_term(exps, BigInt::one());
            return;
        }
        let (r, c) = cells[at];
        let left = if c > 0 { grid[r][c - 1] } else { 1 };
        let above = if r > 0 { grid[r - 1][c] + 1 } else { 1 };
        for entry in left.max(above)..=3 {
            grid[r][c] = entry;
            fill(cells, at + 1, grid, out);
        }
    }

    let rows: Vec<usize> = shape.parts().iter().map(|&p| p as usize).collect();
    let mut cells = Vec::new();
    for (r, &len) in rows.iter().enumerate() {
        for c in 0..len {
            cells.push((r, c));
        }
    }
    let mut grid: Vec<Vec<u8>> = rows.iter().map(|&len| vec![0u8; len]).collect();
    let mut out = SymPoly::zero();
    fill(&cells, 0, &mut grid, &mut out);
    out
}

#[test]
fn schur_polynomials_are_symmetric_with_positive_coefficients() {
    for shape in shapes_up_to(12) {
        let s = schur(&shape);
        assert!(s.is_symmetric(), "s_{shape} is not symmetric");
        assert!(
            s.terms().all(|(_, c)| c.is_positive()),
            "s_{shape} has a nonpositive coefficient"
        );
    }
}

#[test]
fn closed_form_dimension_count_agrees() {
    // For shape (λ1, λ2, λ3) put m = λ1-λ2, n = λ2-λ3; the number of
    // semistandard tableaux is (m+1)(n+1)(m+n+2)/2.
    for shape in shapes_up_to(12) {
        let [l1, l2, l3] = shape.padded();
        let m = u64::from(l1 - l2);
        let n = u64::from(l2 - l3);
        let expected = (m + 1) * (n + 1) * (m + n + 2) / 2;
        assert_eq!(dimension(&shape), expected, "shape {shape}");
        assert_eq!(schur(&shape).eval_at_ones(), BigInt::from(expected));
    }
}

#[test]
fn shape_indexing_is_a_bijection() {
    for index in 1..=500 {
        let shape = partition_by_index(index).unwrap();
        assert_eq!(shape.index(), index, "shape {shape}");
    }
}

#[test]
fn tableau_enumeration_reproduces_every_schur_polynomial() {
    for shape in shapes_up_to(10) {
        assert_eq!(*schur(&shape), tableau_expansion(&shape), "shape {shape}");
    }
}

/// A random primitive zero-sum exponent vector with entries in [-8, 8].
fn exponent_vectors() -> impl Strategy<Value = ExponentVector> {
    (-8i64..=8, -8i64..=8).prop_filter_map("needs zero sum and gcd one", |(v1, v2)| {
        ExponentVector::new([v1, v2, -v1 - v2]).ok()
    })
}

/// A random Schur-positive polynomial along with its support shapes.
fn schur_positive() -> impl Strategy<Value = (SymPoly, Vec<Partition>)> {
    proptest::collection::vec((1usize..=25, 1u64..=3), 1..=4).prop_map(|mults| {
        let mut poly = SymPoly::zero();
        let mut shapes = Vec::new();
        for (index, mult) in mults {
            let shape = partition_by_index(index).unwrap();
            poly = poly.add(&schur(&shape).scale(&BigInt::from(mult)));
            shapes.push(shape);
        }
        (poly, shapes)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn substitution_is_linear_and_multiplicative(
        (p, _) in schur_positive(),
        (q, _) in schur_positive(),
        v in exponent_vectors(),
    ) {
        let pv = substitute(&p, &v);
        let qv = substitute(&q, &v);
        prop_assert_eq!(substitute(&p.add(&q), &v), pv.add(&qv));
        prop_assert_eq!(substitute(&p.mul(&q), &v), pv.mul(&qv));
    }

    #[test]
    fn substitution_ignores_entry_order(
        (p, _) in schur_positive(),
        v in exponent_vectors(),
    ) {
        let [a, b, c] = v.entries();
        let base = substitute(&p, &v);
        for perm in [[a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
            let u = ExponentVector::new(perm).unwrap();
            prop_assert_eq!(substitute(&p, &u), base.clone());
        }
    }

    #[test]
    fn value_at_one_is_the_value_at_the_identity(
        (p, _) in schur_positive(),
        v in exponent_vectors(),
    ) {
        prop_assert_eq!(
            substitute(&p, &v).eval_at_one(),
            BigRational::from(p.eval_at_ones())
        );
    }

    #[test]
    fn restricted_characters_have_a_critical_point_at_one(
        (p, _) in schur_positive(),
        v in exponent_vectors(),
    ) {
        // d/dz P(z^{v1}, z^{v2}, z^{v3}) at z = 1 is (Σ v_i) ∂P/∂x1 (1,1,1)
        // by symmetry, and the exponents sum to zero.
        let restricted = substitute(&p, &v);
        prop_assert_eq!(restricted.derivative().eval_at_one(), BigRational::zero());
    }

    #[test]
    fn center_separation_equals_the_combinatorial_criterion(
        (p, shapes) in schur_positive(),
    ) {
        let at_center = eval_at_center(&p);
        let at_identity = CyclotomicValue::from_rational(BigRational::from(p.eval_at_ones()));
        let separates = at_center != at_identity;
        let detecting = shapes.iter().any(Partition::is_center_detecting);
        prop_assert_eq!(separates, detecting);
    }
}

/// The ten pairs of the small survey region and their minimal levels.
fn survey_pairs() -> Vec<(ExponentVector, ExponentVector, usize)> {
    [
        ([1, 0, -1], [1, 1, -2], 4),
        ([1, 1, -2], [1, 2, -3], 13),
        ([1, 0, -1], [1, 2, -3], 16),
        ([1, 2, -3], [1, 3, -4], 21),
        ([1, 3, -4], [1, 4, -5], 28),
        ([1, 1, -2], [1, 3, -4], 33),
        ([1, 4, -5], [1, 5, -6], 44),
        ([1, 2, -3], [1, 4, -5], 50),
        ([1, 5, -6], [1, 6, -7], 61),
        ([1, 3, -4], [1, 5, -6], 66),
    ]
    .into_iter()
    .map(|(v, w, k)| (vector(v), vector(w), k))
    .collect()
}

#[test]
fn feasibility_brackets_each_minimal_level() {
    for (v, w, k) in survey_pairs() {
        assert!(
            !is_feasible(v, w, k - 1).unwrap(),
            "({v}, {w}) should be infeasible at {}",
            k - 1
        );
        assert!(is_feasible(v, w, k).unwrap(), "({v}, {w}) should be feasible at {k}");
    }
}

#[test]
fn feasibility_is_monotone_in_the_truncation_level() {
    for (v, w, k) in survey_pairs() {
        assert!(is_feasible(v, w, k + 1).unwrap(), "({v}, {w}) at {}", k + 1);
    }
    for (v, w, k) in survey_pairs().into_iter().take(4) {
        assert!(is_feasible(v, w, k + 5).unwrap(), "({v}, {w}) at {}", k + 5);
    }
}

#[test]
fn rational_witnesses_scale_to_balanced_lattice_points() {
    for (v, w, k) in survey_pairs() {
        let system = AmalgamSystem::build(v, w, k).unwrap();
        let witness = match lp_feasible(&system.lp).unwrap() {
            FeasibilityResult::Feasible { witness } => witness,
            FeasibilityResult::Infeasible => panic!("({v}, {w}) must be feasible at {k}"),
        };
        let dims: Vec<BigRational> = system.dims.iter().map(|&d| rational(d)).collect();
        let left: BigRational = witness[..k].iter().zip(&dims).map(|(x, d)| x * d).sum();
        let right: BigRational = witness[k..].iter().zip(&dims).map(|(x, d)| x * d).sum();
        assert_eq!(left, right, "({v}, {w}): sides carry different dimensions");

        // Clearing denominators of a feasible point keeps it feasible, so a
        // rational solution always certifies an integral one.
        let integral = scale_to_integral(&system.lp, &witness).unwrap();
        assert!(integral.iter().all(|x| !x.is_negative()));
        assert!(integral.iter().any(|x| x.is_positive()));
        let as_rationals: Vec<BigRational> =
            integral.iter().map(|x| BigRational::from(x.clone())).collect();
        system.lp.validate_point(&as_rationals).unwrap();
    }
}

#[test]
fn branch_and_bound_agrees_with_exhaustive_enumeration() {
    let config = IlpConfig::default();
    let v1 = vector([1, 0, -1]);
    let w1 = vector([1, 1, -2]);
    let mut cases = Vec::new();
    for k in 4..=6 {
        cases.push((v1, w1, k));
    }
    for k in 2..=4 {
        cases.push((v1, v1, k));
        cases.push((w1, w1, k));
    }
    for (v, w, k) in cases {
        let system = AmalgamSystem::build(v, w, k).unwrap();
        let objective = system.objective(Objective::Dimension);
        let solution = match solve_ilp(&system.lp, &objective, &config).unwrap() {
            IlpOutcome::Optimal(solution) => solution,
            other => panic!("({v}, {w}, {k}): expected an optimum, got {other:?}"),
        };
        let doubled = u64::try_from(&solution.objective).unwrap();
        assert_eq!(doubled % 2, 0, "({v}, {w}, {k}): odd objective");
        let dim = doubled / 2;
        assert!(dim <= 30, "({v}, {w}, {k}): case is meant to stay small");

        let points = enumerate_integral(&system, dim, 50_000_000).unwrap();
        let best = points.iter().map(|p| p.dimension).min().unwrap();
        assert_eq!(best, dim, "({v}, {w}, {k}): enumeration found a smaller point");
        let lambda: Vec<u64> = solution.point[..k]
            .iter()
            .map(|x| u64::try_from(x).unwrap())
            .collect();
        let mu: Vec<u64> = solution.point[k..]
            .iter()
            .map(|x| u64::try_from(x).unwrap())
            .collect();
        assert!(
            points.iter().any(|p| p.lambda == lambda && p.mu == mu),
            "({v}, {w}, {k}): solver point missing from the enumeration"
        );
    }
}

#[test]
fn adding_the_trivial_shape_extends_any_solution() {
    // Shape 1 is (1,1,1), the one-dimensional determinant character; bumping
    // its multiplicity on both sides keeps the identity and the injectivity
    // rows intact and grows the dimension by exactly one.
    let system = AmalgamSystem::build(vector([1, 0, -1]), vector([1, 1, -2]), 4).unwrap();
    assert_eq!(system.dims[0], 1);
    let points = enumerate_integral(&system, 10, 1_000_000).unwrap();
    assert!(!points.is_empty());
    for point in points {
        let mut bumped: Vec<BigRational> = point
            .lambda
            .iter()
            .chain(point.mu.iter())
            .map(|&x| rational(x))
            .collect();
        bumped[0] += BigRational::one();
        bumped[4] += BigRational::one();
        system.lp.validate_point(&bumped).unwrap();
        let grown: BigRational = bumped[..4]
            .iter()
            .zip(&system.dims)
            .map(|(x, &d)| x * rational(d))
            .sum();
        assert_eq!(grown, rational(point.dimension + 1));
    }
}

#[test]
fn minimal_level_ignores_entry_order_of_both_vectors() {
    fn orderings(e: [i64; 3]) -> [[i64; 3]; 6] {
        let [a, b, c] = e;
        [
            [a, b, c],
            [a, c, b],
            [b, a, c],
            [b, c, a],
            [c, a, b],
            [c, b, a],
        ]
    }
    for pv in orderings([1, 0, -1]) {
        for pw in orderings([1, 1, -2]) {
            let outcome = min_feasible_k(vector(pv), vector(pw), 4, 16).unwrap();
            assert_eq!(outcome, MinKOutcome::Found(4), "{pv:?} / {pw:?}");
        }
    }
}

#[test]
fn verification_reports_survive_certificate_round_trips() {
    let outcome = solve(
        vector([1, 0, -1]),
        vector([1, 1, -2]),
        4,
        Objective::Dimension,
        &IlpConfig::default(),
    )
    .unwrap();
    let SolveOutcome::Solved(certificate) = outcome else {
        panic!("the base pair must solve at level 4");
    };
    let json = serde_json::to_string(&certificate).unwrap();
    let reparsed: Certificate = serde_json::from_str(&json).unwrap();
    assert_eq!(certificate, reparsed);

    let before = verify(&certificate).unwrap();
    let after = verify(&reparsed).unwrap();
    assert!(before.passed);
    assert_eq!(
        serde_json::to_value(&before).unwrap(),
        serde_json::to_value(&after).unwrap()
    );
}

#[test]
fn window_polynomials_are_palindromic_and_flat_at_one() {
    for a in 1..=4u32 {
        for b in 1..=12u32 {
            let f = f_ab(a, b).unwrap();
            let m = i64::from(a) * (i64::from(b) - 1);
            if b == 1 {
                assert_eq!(f, LaurentPoly::one());
            } else {
                assert_eq!(f.min_exponent(), Some(-m));
                assert_eq!(f.max_exponent(), Some(m));
            }
            let mut mirrored = LaurentPoly::zero();
            for (&e, c) in f.terms() {
                mirrored.add_term(-e, c.clone());
            }
            assert_eq!(mirrored, f, "f_{{{a},{b}}} is not palindromic");
            let value = BigRational::from(BigInt::from(b).pow(2 * a));
            assert_eq!(f.eval_at_one(), value);
            assert_eq!(f.derivative().eval_at_one(), BigRational::zero());
        }
    }
}

#[test]
fn curve_equation_annihilates_a_wider_parametrization() {
    let v = vector([2, 3, -5]);
    let equation = implicitize(v).unwrap();
    let (f1, f2) = parametrization(v);
    assert!(equation.compose(&f1, &f2).is_zero());
}
