use crate::error::{invalid, Result};
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use statrs::function::erf::erf;
use std::f64::consts::PI;

/// Mean spacing ratio for uncorrelated (Poisson) levels, 2 ln 2 − 1.
pub const POISSON_MEAN_RATIO: f64 = 0.386_294_361_119_890_6;

/// Unitary-class Wigner surmise density (32/π²) s² exp(−4s²/π).
pub fn wigner_surmise_pdf(s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    32.0 / (PI * PI) * s * s * (-4.0 * s * s / PI).exp()
}

/// CDF of the unitary Wigner surmise: erf(2s/√π) − (4s/π) exp(−4s²/π).
pub fn wigner_surmise_cdf(s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    erf(2.0 * s / PI.sqrt()) - 4.0 * s / PI * (-4.0 * s * s / PI).exp()
}

pub fn poisson_spacing_pdf(s: f64) -> f64 {
    if s < 0.0 {
        0.0
    } else {
        (-s).exp()
    }
}

pub fn poisson_spacing_cdf(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else {
        1.0 - (-s).exp()
    }
}

/// Density of r̃ for Poisson levels, 2/(1 + r)².
pub fn poisson_ratio_pdf(r: f64) -> f64 {
    if (0.0..=1.0).contains(&r) {
        2.0 / ((1.0 + r) * (1.0 + r))
    } else {
        0.0
    }
}

/// Surmise for the r̃ density in the unitary class,
/// (81√3/2π)·2·(r + r²)²/(1 + r + r²)^4 restricted to [0, 1].
pub fn gue_ratio_surmise_pdf(r: f64) -> f64 {
    if !(0.0..=1.0).contains(&r) {
        return 0.0;
    }
    let z = 81.0 * 3f64.sqrt() / (4.0 * PI);
    2.0 * z * (r + r * r).powi(2) / (1.0 + r + r * r).powi(4)
}

#[derive(Clone, Debug, Serialize)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub bins: usize,
}

/// Pearson χ² goodness of fit of `data` against a continuous CDF.
///
/// `edges` are interior bin boundaries; the outer bins extend to ±∞.
/// Adjacent bins are merged until every expected count is at least 5.
pub fn chi_square_gof(data: &[f64], cdf: impl Fn(f64) -> f64, edges: &[f64]) -> Result<ChiSquareTest> {
    if data.len() < 10 {
        return invalid("χ² test needs at least 10 observations");
    }
    if edges.windows(2).any(|w| !(w[0] < w[1])) {
        return invalid("bin edges must be strictly increasing");
    }
    let n = data.len() as f64;
    let mut observed = vec![0.0; edges.len() + 1];
    for &x in data {
        observed[edges.partition_point(|&e| e <= x)] += 1.0;
    }
    let mut cuts = vec![0.0];
    cuts.extend(edges.iter().map(|&e| cdf(e)));
    cuts.push(1.0);
    let expected: Vec<f64> = cuts.windows(2).map(|w| n * (w[1] - w[0])).collect();

    let mut bins: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0, 0.0);
    for (o, e) in observed.into_iter().zip(expected) {
        acc = (acc.0 + o, acc.1 + e);
        if acc.1 >= 5.0 {
            bins.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if acc.1 > 0.0 || acc.0 > 0.0 {
        match bins.last_mut() {
            Some(last) => {
                last.0 += acc.0;
                last.1 += acc.1;
            }
            None => bins.push(acc),
        }
    }
    if bins.len() < 2 {
        return invalid("too few populated bins for a χ² test");
    }
    let statistic: f64 = bins.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let dof = bins.len() - 1;
    let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
    Ok(ChiSquareTest { statistic, dof, p_value: dist.sf(statistic), bins: bins.len() })
}

#[derive(Clone, Debug, Serialize)]
pub struct KsTest {
    pub statistic: f64,
    pub p_value: f64,
}

/// Complementary Kolmogorov distribution Q(λ) = 2 Σ (−1)^{j−1} e^{−2j²λ²}.
fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for j in 1..=100 {
        let term = (-2.0 * (j * j) as f64 * lambda * lambda).exp();
        sum += if j % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Two-sample Kolmogorov–Smirnov test with the asymptotic p-value
/// Q((√n_e + 0.12 + 0.11/√n_e)·D), n_e = n₁n₂/(n₁+n₂).
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsTest> {
    if a.is_empty() || b.is_empty() {
        return invalid("KS test needs two nonempty samples");
    }
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    if x.iter().chain(&y).any(|v| !v.is_finite()) {
        return invalid("KS test samples must be finite");
    }
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    let (n1, n2) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < x.len() && j < y.len() {
        let v = x[i].min(y[j]);
        while i < x.len() && x[i] <= v {
            i += 1;
        }
        while j < y.len() && y[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n1 - j as f64 / n2).abs());
    }
    let ne = n1 * n2 / (n1 + n2);
    let p_value = kolmogorov_q((ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d);
    Ok(KsTest { statistic: d, p_value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng;
    use rand::Rng as _;

    fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        let m = 20_000;
        let h = (b - a) / m as f64;
        (0..m).map(|i| f(a + (i as f64 + 0.5) * h)).sum::<f64>() * h
    }

    #[test]
    fn densities_are_normalized_with_unit_mean() {
        assert!((integrate(wigner_surmise_pdf, 0.0, 10.0) - 1.0).abs() < 1e-8);
        assert!((integrate(|s| s * wigner_surmise_pdf(s), 0.0, 10.0) - 1.0).abs() < 1e-8);
        assert!((integrate(poisson_ratio_pdf, 0.0, 1.0) - 1.0).abs() < 1e-8);
        assert!((integrate(gue_ratio_surmise_pdf, 0.0, 1.0) - 1.0).abs() < 1e-8);
        let mean_r = integrate(|r| r * poisson_ratio_pdf(r), 0.0, 1.0);
        assert!((mean_r - POISSON_MEAN_RATIO).abs() < 1e-8);
        for s in [0.1, 0.7, 1.5, 3.0] {
            assert!((integrate(wigner_surmise_pdf, 0.0, s) - wigner_surmise_cdf(s)).abs() < 1e-8);
        }
    }

    #[test]
    fn chi_square_accepts_true_model_and_rejects_wrong_one() {
        let mut r = rng(3);
        let data: Vec<f64> = (0..5000).map(|_| -(1.0 - r.random::<f64>()).ln()).collect();
        let edges: Vec<f64> = (1..16).map(|i| 0.25 * i as f64).collect();
        let ok = chi_square_gof(&data, poisson_spacing_cdf, &edges).unwrap();
        assert!(ok.p_value > 0.001, "{ok:?}");
        let bad = chi_square_gof(&data, wigner_surmise_cdf, &edges).unwrap();
        assert!(bad.p_value < 1e-10);
    }

    #[test]
    fn ks_distinguishes_shifted_samples() {
        let mut r = rng(4);
        let a: Vec<f64> = (0..2000).map(|_| r.random::<f64>()).collect();
        let b: Vec<f64> = (0..2000).map(|_| r.random::<f64>()).collect();
        let c: Vec<f64> = (0..2000).map(|_| r.random::<f64>() + 0.1).collect();
        assert!(ks_two_sample(&a, &b).unwrap().p_value > 0.001);
        assert!(ks_two_sample(&a, &c).unwrap().p_value < 1e-6);
        assert_eq!(ks_two_sample(&a, &a).unwrap().statistic, 0.0);
    }
}
