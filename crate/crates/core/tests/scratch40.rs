use amalgam_core::ilp::IlpConfig;
use amalgam_core::laurent::ExponentVector;
use amalgam_core::relaxed::{conjecture_search, ConjectureOutcome};
use std::time::Instant;

#[test]
fn probe_single_cell() {
    let a: u32 = std::env::var("CELL_A").ok().and_then(|s| s.parse().ok()).unwrap_or(2);
    let b: u32 = std::env::var("CELL_B").ok().and_then(|s| s.parse().ok()).unwrap_or(12);
    let v = ExponentVector::new([1, 1, -2]).unwrap();
    let config = IlpConfig::default();
    let t = Instant::now();
    let out = conjecture_search(v, a, b, 8, None, &config);
    let brief = out.map(|o| match o {
        ConjectureOutcome::Found(hit) => format!("n={} dim={}", hit.n, hit.dimension),
        ConjectureOutcome::NotFound { n_max } => format!("not found up to {n_max}"),
    });
    eprintln!("[cell] ({a},{b}) -> {brief:?} in {:?}", t.elapsed());
}
