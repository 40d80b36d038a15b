use std::sync::Arc;

use jones_core::algorithms::{
    approx_jones, approx_jones_plat, approx_jones_trace, exact_reference, EstimatorConfig, Mode, PathSampler,
};
use jones_core::braid::{BraidWord, ClosureKind};
use jones_core::bracket::jones_value;
use jones_core::laurent::unit_a;
use jones_core::path_model::{diagonal_amplitude, phi_braid, CoefficientTable, PathBasis};
use jones_core::tl::{jones_via_trace, Tangle};
use num_complex::Complex64;

fn b(text: &str) -> BraidWord {
    BraidWord::parse(text).unwrap()
}

#[test]
fn sampling_mixture_equals_weighted_trace() {
    for (text, k) in [("2: 1 1 1", 5), ("3: 1 -2 1 2", 4), ("5: 1 2 -3 4 -2", 6), ("6: 1 3 5 -2 4 -1", 7)] {
        let braid = b(text);
        let n = braid.strands();
        let basis = Arc::new(PathBasis::enumerate(n, k).unwrap());
        let table = CoefficientTable::new(k).unwrap();
        let sampler = PathSampler::new(n, k).unwrap();
        let mixture: Complex64 = (0..basis.len())
            .map(|p| {
                sampler.path_probability(basis.endpoint(p)) * diagonal_amplitude(&braid, &basis, &table, p).unwrap()
            })
            .sum();
        let trace = phi_braid(&braid, &basis, &table).unwrap().weighted_trace(&table);
        assert!((mixture - trace).norm() < 1e-10, "{text}");
        let total: f64 = (0..basis.len()).map(|p| sampler.path_probability(basis.endpoint(p))).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}

#[test]
fn seeded_runs_are_reproducible() {
    let cfg = EstimatorConfig::new(0.2, 0.05, 77, Mode::Sampled).unwrap();
    for (text, closure) in [("3: 1 -2 1", ClosureKind::Trace), ("4: 2 -1 3", ClosureKind::Plat)] {
        let x = approx_jones(&b(text), 5, closure, &cfg).unwrap();
        let y = approx_jones(&b(text), 5, closure, &cfg).unwrap();
        assert_eq!(x, y);
        assert_eq!(serde_json::to_string(&x).unwrap(), serde_json::to_string(&y).unwrap());
        let other = approx_jones(&b(text), 5, closure, &EstimatorConfig { seed: 78, ..cfg }).unwrap();
        assert_ne!(x.mean_re, other.mean_re);
    }
}

#[test]
fn trace_estimates_concentrate() {
    let suite = ["2: 1 1 1", "3: 1 -2 1 -2", "4: 1 2 3 -2"];
    let mut misses = 0;
    let mut runs = 0;
    for text in suite {
        let braid = b(text);
        let basis = Arc::new(PathBasis::enumerate(braid.strands(), 5).unwrap());
        let table = CoefficientTable::new(5).unwrap();
        let exact_r = phi_braid(&braid, &basis, &table).unwrap().weighted_trace(&table);
        for seed in 0..200 / suite.len() as u64 + 1 {
            let cfg = EstimatorConfig::new(0.1, 0.01, seed, Mode::Sampled).unwrap();
            let r = approx_jones_trace(&braid, 5, &cfg).unwrap();
            runs += 1;
            if (Complex64::new(r.mean_re, r.mean_im) - exact_r).norm() > 0.1 {
                misses += 1;
            }
        }
    }
    assert!(misses as f64 <= 0.03 * runs as f64, "{misses} of {runs} runs outside epsilon");
}

#[test]
fn exact_mode_matches_oracle() {
    for k in [3, 4, 5, 7, 10] {
        for text in ["2: 1 1 1", "3: 1 -2 1", "4: 1 2 3 1 2 3", "4: 2 -1 -3 2"] {
            let braid = b(text);
            let cfg = EstimatorConfig::new(0.1, 0.01, 0, Mode::Exact).unwrap();
            let r = approx_jones_trace(&braid, k, &cfg).unwrap();
            let v = jones_value(&braid, ClosureKind::Trace, k).unwrap();
            assert!((r.estimate - v).norm() < 1e-9, "{text} k={k}");
            assert_eq!(r.samples_per_part, 0);
            if braid.strands() % 2 == 0 {
                let p = approx_jones_plat(&braid, k, &cfg).unwrap();
                let v = jones_value(&braid, ClosureKind::Plat, k).unwrap();
                assert!((p.estimate - v).norm() < 1e-9, "{text} plat k={k}");
            }
        }
    }
}

#[test]
fn plat_estimate_matches_capcup_tangle_trace() {
    for (text, k) in [("4: 2", 5), ("4: 1 -2 3 2", 4), ("6: 2 4 -3 1 5", 7), ("2: 1 1 1", 3)] {
        let braid = b(text);
        let cfg = EstimatorConfig::new(0.1, 0.01, 0, Mode::Exact).unwrap();
        let est = approx_jones_plat(&braid, k, &cfg).unwrap().estimate;
        let (_, w) = braid.close(ClosureKind::Plat).unwrap().orient_and_writhe();
        let tl = jones_via_trace(&Tangle::capcups_then(&braid).unwrap(), w).unwrap();
        let tl = tl.eval(unit_a(k).unwrap()).unwrap();
        assert!((est - tl).norm() < 1e-9, "{text} k={k}");
    }
}

#[test]
fn conjugated_words_share_reference_values() {
    let x = exact_reference(&b("4: 1 2 -3 2"), 5, ClosureKind::Trace).unwrap();
    let y = exact_reference(&b("4: -1 1 2 -3 2 1"), 5, ClosureKind::Trace).unwrap();
    assert!((x - y).norm() < 1e-12);
}

#[test]
fn result_serializes_complex_as_re_im() {
    let cfg = EstimatorConfig::new(0.1, 0.01, 0, Mode::Exact).unwrap();
    let r = approx_jones_trace(&b("2: 1"), 5, &cfg).unwrap();
    let json: serde_json::Value = serde_json::to_value(&r).unwrap();
    assert!(json["estimate"]["re"].is_f64());
    assert!(json["estimate"]["im"].is_f64());
    assert_eq!(json["closure"], "trace");
    assert_eq!(json["mode"], "exact");
}
