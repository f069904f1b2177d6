//! The HCIZ closed form against its Haar Monte-Carlo oracle.

use kfold_core::hc::{hciz_exact, hciz_monte_carlo, HcizProblem};
use kfold_core::seed::rng;
use rand::Rng as _;

#[test]
fn random_three_by_three_problems() {
    let mut r = rng(1);
    for case in 0..4u64 {
        let a: Vec<f64> = (0..3).map(|_| r.random_range(-1.0..1.0)).collect();
        let b: Vec<f64> = (0..3).map(|_| r.random_range(-1.0..1.0)).collect();
        let p = HcizProblem::new(a, b, 0.5).unwrap();
        let exact = hciz_exact(&p).unwrap().value;
        let mc = hciz_monte_carlo(&p, 20_000, 100 + case).unwrap();
        assert!((exact - mc.estimate).abs() < 3.0 * mc.std_error, "{exact} vs {mc:?}");
    }
}

#[test]
fn coalescing_eigenvalues_match_monte_carlo() {
    let p = HcizProblem::new(vec![0.4, 0.4, -0.8], vec![1.0, -0.3, 0.6], 1.2).unwrap();
    let exact = hciz_exact(&p).unwrap();
    assert!(exact.extrapolated);
    assert!(exact.error_estimate < 1e-6);
    let mc = hciz_monte_carlo(&p, 50_000, 7).unwrap();
    assert!((exact.value - mc.estimate).abs() < 3.0 * mc.std_error, "{exact:?} vs {mc:?}");
}
