use crate::error::{invalid, Error, Result};
use crate::RMat;
use serde::Serialize;

/// Spacings below this fraction of the spectral width are treated as exact
/// degeneracies and merged before ratios are formed.
pub const MERGE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, Serialize)]
pub struct SpacingRatios {
    pub ratios: Vec<f64>,
    pub mean: f64,
    /// Number of spacings removed as degenerate.
    pub merged: usize,
}

/// Consecutive spacings of a sorted spectrum.
pub fn spacings(eigenvalues: &[f64]) -> Vec<f64> {
    eigenvalues.windows(2).map(|w| w[1] - w[0]).collect()
}

/// r̃_i = min(s_i, s_{i+1}) / max(s_i, s_{i+1}) over the spacings left after
/// merging degenerate levels.
pub fn spacing_ratios(eigenvalues: &[f64]) -> Result<SpacingRatios> {
    if eigenvalues.len() < 3 {
        return invalid("spacing ratios need at least 3 eigenvalues");
    }
    if eigenvalues.windows(2).any(|w| !(w[0] <= w[1])) {
        return invalid("eigenvalues must be finite and ascending");
    }
    let width = eigenvalues[eigenvalues.len() - 1] - eigenvalues[0];
    let all = spacings(eigenvalues);
    let kept: Vec<f64> = all.iter().copied().filter(|&s| s >= MERGE_TOL * width && s > 0.0).collect();
    let merged = all.len() - kept.len();
    if kept.len() < 2 {
        return Err(Error::NumericalDegeneracy(format!("only {} nondegenerate spacings after merging", kept.len())));
    }
    let ratios: Vec<f64> = kept.windows(2).map(|w| w[0].min(w[1]) / w[0].max(w[1])).collect();
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    Ok(SpacingRatios { ratios, mean, merged })
}

fn chebyshev_row(x: f64, degree: usize) -> Vec<f64> {
    let mut row = vec![1.0; degree + 1];
    if degree >= 1 {
        row[1] = x;
    }
    for j in 2..=degree {
        row[j] = 2.0 * x * row[j - 1] - row[j - 2];
    }
    row
}

/// Unfolds a sorted spectrum by a least-squares polynomial fit (Chebyshev
/// basis on the spectral range) to the staircase N(E_i) = i + ½, returning
/// the spacings of the fitted values.
pub fn unfold(eigenvalues: &[f64], poly_degree: usize) -> Result<Vec<f64>> {
    let n = eigenvalues.len();
    if n < 10 {
        return invalid("unfolding needs at least 10 eigenvalues");
    }
    if !(3..=15).contains(&poly_degree) {
        return invalid(format!("polynomial degree must lie in 3..=15, got {poly_degree}"));
    }
    if eigenvalues.windows(2).any(|w| !(w[0] <= w[1])) {
        return invalid("eigenvalues must be finite and ascending");
    }
    let (lo, hi) = (eigenvalues[0], eigenvalues[n - 1]);
    if hi - lo <= 0.0 {
        return Err(Error::NumericalDegeneracy("spectrum has zero width".into()));
    }
    let map = |e: f64| 2.0 * (e - lo) / (hi - lo) - 1.0;
    let design = RMat::from_fn(n, poly_degree + 1, |i, j| chebyshev_row(map(eigenvalues[i]), poly_degree)[j]);
    let target = nalgebra::DVector::from_fn(n, |i, _| i as f64 + 0.5);
    let svd = design.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smin <= 1e-12 * smax {
        return Err(Error::NumericalDegeneracy(format!(
            "staircase fit is rank deficient (condition {:.3e})",
            smax / smin.max(f64::MIN_POSITIVE)
        )));
    }
    let coef = svd.solve(&target, 0.0).map_err(|e| Error::NumericalDegeneracy(format!("staircase fit failed: {e}")))?;
    let fitted = design * coef;
    Ok(fitted.as_slice().windows(2).map(|w| w[1] - w[0]).collect())
}
