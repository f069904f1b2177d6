//! Level statistics against simulation-derived reference values.

use kfold_core::ensembles::sample_gue;
use kfold_core::seed::rng;
use kfold_core::spectra::{
    chi_square_gof, eigh, schmidt_overlap_stat, spacing_ratios, unfold, wigner_surmise_cdf, POISSON_MEAN_RATIO,
};
use kfold_core::tensor::TensorOperator;
use rand::Rng as _;

/// Large-N mean of r̃ for the GUE from extensive simulation.
const GUE_MEAN_RATIO: f64 = 0.5996;

#[test]
fn poisson_mean_ratio() {
    let mut r = rng(1);
    let mut e: Vec<f64> = (0..100_000).map(|_| r.random::<f64>()).collect();
    e.sort_by(f64::total_cmp);
    let s = spacing_ratios(&e).unwrap();
    assert!((s.mean - POISSON_MEAN_RATIO).abs() < 0.01, "{}", s.mean);
}

#[test]
fn gue_mean_ratio_and_unfolded_spacings() {
    let mut r = rng(2);
    let n = 200;
    let mut ratios = Vec::new();
    let mut unfolded = Vec::new();
    for _ in 0..200 {
        let e = eigh(&sample_gue(n, 1.0, &mut r).unwrap()).unwrap().values;
        ratios.extend(spacing_ratios(&e).unwrap().ratios);
        let s = unfold(&e, 9).unwrap();
        // Central half of the spectrum, away from the soft edges.
        unfolded.extend_from_slice(&s[n / 4..3 * n / 4]);
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    assert!((mean - GUE_MEAN_RATIO).abs() < 0.01, "{mean}");
    let mean_s = unfolded.iter().sum::<f64>() / unfolded.len() as f64;
    assert!((mean_s - 1.0).abs() < 0.05);
    // Thin the pooled spacings so the 2×2 surmise's small deviation from the
    // large-N law stays below the test's resolution.
    let thinned: Vec<f64> = unfolded.iter().step_by(4).copied().collect();
    let edges: Vec<f64> = (1..14).map(|i| 0.2 * i as f64).collect();
    let test = chi_square_gof(&thinned, wigner_surmise_cdf, &edges).unwrap();
    assert!(test.p_value > 0.05, "{test:?}");
}

#[test]
fn overlap_statistic_decays_like_inverse_dimension() {
    let mut r = rng(3);
    let mut points = Vec::new();
    for d in [2usize, 4, 8] {
        let reps = 40;
        let mut acc = 0.0;
        for _ in 0..reps {
            let h = TensorOperator::new(sample_gue(d * d, 1.0, &mut r).unwrap(), d, 2).unwrap();
            acc += schmidt_overlap_stat(&h, d).unwrap();
        }
        points.push(((d as f64).ln(), (acc / reps as f64).ln()));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let slope = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / points.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    assert!((slope + 1.0).abs() < 0.3, "slope {slope}");
}
