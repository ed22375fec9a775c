use amalgam_core::ilp::IlpConfig;
use amalgam_core::laurent::ExponentVector;
use amalgam_core::relaxed::{conjecture_search, ConjectureOutcome};

#[test]
fn probe_full_grid() {
    let v = ExponentVector::new([1, 1, -2]).unwrap();
    let expected: &[(u32, u32, u64, u64)] = &[
        (1, 3, 1, 9),
        (1, 6, 2, 72),
        (1, 9, 3, 243),
        (1, 12, 4, 576),
        (1, 15, 5, 1125),
        (2, 3, 1, 81),
        (2, 6, 1, 1296),
        (2, 9, 1, 6561),
        (2, 12, 1, 20736),
        (2, 15, 1, 50625),
        (3, 3, 1, 729),
        (3, 6, 2, 93312),
        (3, 9, 1, 531441),
        (3, 12, 2, 5971968),
    ];
    let cfg = IlpConfig::default();
    let mut failures = Vec::new();
    for &(a, b, n, dim) in expected {
        let t = std::time::Instant::now();
        let out = conjecture_search(v, a, b, 8, None, &cfg);
        let el = t.elapsed();
        match out {
            Ok(ConjectureOutcome::Found(hit)) if hit.n == n && hit.dimension == dim => {
                eprintln!("({a},{b}) OK  n={n} dim={dim}  in {el:?}");
            }
            other => {
                eprintln!("({a},{b}) MISMATCH: {other:?} (want n={n} dim={dim}) in {el:?}");
                failures.push((a, b));
            }
        }
    }
    assert!(failures.is_empty(), "cells failed: {failures:?}");
}
