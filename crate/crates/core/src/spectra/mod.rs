//! Spectral and entanglement diagnostics for Hermitian samples.

mod eigen;
mod levels;
mod stats;
mod words;

pub use eigen::{eigh, Eigh};
pub use levels::{spacing_ratios, spacings, unfold, SpacingRatios, MERGE_TOL};
pub use stats::{
    chi_square_gof, gue_ratio_surmise_pdf, ks_two_sample, poisson_ratio_pdf, poisson_spacing_cdf, poisson_spacing_pdf,
    wigner_surmise_cdf, wigner_surmise_pdf, ChiSquareTest, KsTest, POISSON_MEAN_RATIO,
};
pub use words::{
    conjugate_by_permutation, entanglement_spectrum, enumerate_words, invariant_word_trace, schmidt_overlap_stat,
    schmidt_quadruple_sum, WordFactor, WordSpec,
};

use crate::error::{invalid, Result};
use crate::tensor::TensorOperator;
use crate::{CMat, C64};
use serde::Serialize;

/// What [`summarize`] computes beyond eigenvalues and spacing ratios.
#[derive(Clone, Debug, Default)]
pub struct SummaryOptions {
    /// Fraction of levels [lo, hi) kept for spacings and ratios, counted
    /// from the bottom of the spectrum. `None` keeps all levels.
    pub window: Option<(f64, f64)>,
    /// Split (d_L, d_R) for eigenvector entanglement spectra.
    pub entanglement_split: Option<(usize, usize)>,
    /// Local dimension and leg count for invariant words.
    pub legs: Option<(usize, usize)>,
    pub words: Vec<WordSpec>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WordTrace {
    pub word: String,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralSummary {
    /// Full spectrum, ascending.
    pub eigenvalues: Vec<f64>,
    /// Index range of the analysis window.
    pub window: (usize, usize),
    pub spacings: Vec<f64>,
    pub ratios: Vec<f64>,
    pub mean_ratio: f64,
    pub merged_spacings: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entanglement: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub word_traces: Vec<WordTrace>,
}

fn window_range(n: usize, window: Option<(f64, f64)>) -> Result<(usize, usize)> {
    let Some((lo, hi)) = window else {
        return Ok((0, n));
    };
    if !(0.0..1.0).contains(&lo) || !(lo < hi && hi <= 1.0) {
        return invalid(format!("window ({lo}, {hi}) must satisfy 0 ≤ lo < hi ≤ 1"));
    }
    Ok(((lo * n as f64).floor() as usize, ((hi * n as f64).ceil() as usize).min(n)))
}

/// Eigenvalues, spacing statistics and the optional diagnostics for `h`.
pub fn summarize(h: &CMat, options: &SummaryOptions) -> Result<SpectralSummary> {
    let Eigh { values: eigenvalues, vectors } = eigh(h)?;
    let (a, b) = window_range(eigenvalues.len(), options.window)?;
    let levels = &eigenvalues[a..b];
    let r = spacing_ratios(levels)?;
    let entanglement = match options.entanglement_split {
        Some((dl, dr)) => Some(
            (0..vectors.ncols())
                .map(|m| entanglement_spectrum(&vectors.column(m).into_owned(), dl, dr))
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    let mut word_traces = Vec::new();
    if !options.words.is_empty() {
        let Some((d, k)) = options.legs else {
            return invalid("invariant words need the local dimension and leg count");
        };
        let op = TensorOperator::new(h.clone(), d, k)?;
        for w in &options.words {
            let t: C64 = invariant_word_trace(&op, w)?;
            word_traces.push(WordTrace { word: w.to_string(), re: t.re, im: t.im });
        }
    }
    Ok(SpectralSummary {
        spacings: spacings(levels),
        eigenvalues,
        window: (a, b),
        ratios: r.ratios,
        mean_ratio: r.mean,
        merged_spacings: r.merged,
        entanglement,
        word_traces,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::sample_gue;
    use crate::seed::rng;

    #[test]
    fn summary_respects_window_and_options() {
        let mut r = rng(1);
        let h = sample_gue(16, 1.0, &mut r).unwrap();
        let opts = SummaryOptions {
            window: Some((0.0, 0.5)),
            entanglement_split: Some((4, 4)),
            legs: Some((4, 2)),
            words: vec![WordSpec::parse(2, "(12)*e").unwrap()],
        };
        let s = summarize(&h, &opts).unwrap();
        assert_eq!(s.window, (0, 8));
        assert_eq!(s.spacings.len(), 7);
        assert_eq!(s.ratios.len(), 6);
        assert!(s.ratios.iter().all(|x| (0.0..=1.0).contains(x)));
        for spec in s.entanglement.as_ref().unwrap() {
            let total: f64 = spec.iter().map(|x| x * x).sum();
            assert!((total - 1.0).abs() < 1e-10);
        }
        assert_eq!(s.word_traces.len(), 1);
        assert!(summarize(&h, &SummaryOptions { window: Some((0.5, 0.2)), ..Default::default() }).is_err());
    }
}
