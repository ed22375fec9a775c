use std::time::Instant;

use amalgam_core::ilp::IlpConfig;
use amalgam_core::laurent::ExponentVector;
use amalgam_core::relaxed::{conjecture_search, ConjectureOutcome};
use amalgam_core::search::{min_feasible_k, MinKOutcome};

fn vector(entries: [i64; 3]) -> ExponentVector {
    ExponentVector::new(entries).unwrap()
}

#[test]
fn probe_mink_all_pairs() {
    let rows: [([i64; 3], [i64; 3], usize); 10] = [
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
    ];
    for (v, w, k) in rows {
        let start = Instant::now();
        let outcome = min_feasible_k(vector(v), vector(w), 4, 128).unwrap();
        println!("{v:?} {w:?} -> {outcome:?} (expected {k}) in {:.2?}", start.elapsed());
        assert_eq!(outcome, MinKOutcome::Found(k));
    }
}

#[test]
fn probe_table3_grid() {
    let expected: [(u32, u32, u64, u64); 12] = [
        (1, 3, 1, 9),
        (1, 6, 2, 72),
        (1, 9, 3, 243),
        (1, 12, 4, 576),
        (1, 15, 5, 1125),
        (2, 3, 1, 81),
        (2, 6, 1, 1296),
        (2, 9, 1, 6561),
        (2, 12, 1, 20736),
        (3, 3, 1, 729),
        (3, 6, 2, 93312),
        (3, 9, 1, 531441),
    ];
    let v = vector([1, 1, -2]);
    let config = IlpConfig::default();
    for (a, b, n, dim) in expected {
        let start = Instant::now();
        let outcome = conjecture_search(v, a, b, 16, None, &config).unwrap();
        println!("a={a} b={b} -> {:?} in {:.2?}", summarize(&outcome), start.elapsed());
        match outcome {
            ConjectureOutcome::Found(hit) => {
                assert_eq!((hit.n, hit.dimension), (n, dim), "a={a} b={b}");
            }
            ConjectureOutcome::NotFound { .. } => panic!("a={a} b={b} not found"),
        }
    }
}

#[test]
fn probe_table3_heaviest() {
    // a=3, b=12: the largest cell.
    let v = vector([1, 1, -2]);
    let config = IlpConfig::default();
    let start = Instant::now();
    let outcome = conjecture_search(v, 3, 12, 16, None, &config).unwrap();
    println!("a=3 b=12 -> {:?} in {:.2?}", summarize(&outcome), start.elapsed());
    match outcome {
        ConjectureOutcome::Found(hit) => {
            assert_eq!((hit.n, hit.dimension), (2, 5_971_968));
        }
        ConjectureOutcome::NotFound { .. } => panic!("not found"),
    }
}

fn summarize(outcome: &ConjectureOutcome) -> String {
    match outcome {
        ConjectureOutcome::Found(hit) => {
            format!("N={} dim={} shapes={}", hit.n, hit.dimension, hit.decomposition.len())
        }
        ConjectureOutcome::NotFound { n_max } => format!("not found up to {n_max}"),
    }
}
