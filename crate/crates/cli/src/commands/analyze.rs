//! `kfold analyze`: level statistics of a batch, reference comparisons and
//! histograms.

use crate::config::{AnalysisConfig, Reference, CONFIG_VERSION};
use crate::output::{num, OutputSink};
use crate::svg::{density_histogram, Curve, HistogramPlot};
use anyhow::{Context, Result};
use kfold_core::ensembles::{EnsembleSpec, SampleBatch, Sampler};
use kfold_core::seed::stage_seed;
use kfold_core::spectra::{
    chi_square_gof, gue_ratio_surmise_pdf, ks_two_sample, poisson_ratio_pdf, poisson_spacing_cdf, poisson_spacing_pdf,
    summarize, unfold, wigner_surmise_cdf, wigner_surmise_pdf, ChiSquareTest, KsTest, SpectralSummary, SummaryOptions,
};
use rayon::prelude::*;
use serde::Serialize;

/// Interior bin edges for the spacing goodness-of-fit tests.
fn spacing_edges() -> Vec<f64> {
    (1..14).map(|i| 0.2 * i as f64).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleStats {
    pub index: usize,
    pub seed: u64,
    pub levels: usize,
    pub window: (usize, usize),
    pub mean_ratio: f64,
    pub merged_spacings: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct UnfoldedStats {
    /// Pooled spacings after edge trimming and thinning.
    pub count: usize,
    pub mean: f64,
    pub wigner: ChiSquareTest,
    pub poisson: ChiSquareTest,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReferenceComparison {
    pub ensemble: EnsembleSpec,
    pub seed: u64,
    pub samples: usize,
    pub mean_ratio: f64,
    /// Two-sample KS test of the pooled r̃ values.
    pub ks: KsTest,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub version: u32,
    pub ensemble: EnsembleSpec,
    pub master_seed: u64,
    pub samples: usize,
    pub window: Option<[f64; 2]>,
    pub ratio_count: usize,
    pub mean_ratio: f64,
    /// Standard error of the mean r̃ from the spread of per-sample means.
    pub ratio_std_error: f64,
    pub merged_spacings: usize,
    pub unfolded: Option<UnfoldedStats>,
    pub reference: Option<ReferenceComparison>,
    pub per_sample: Vec<SampleStats>,
    #[serde(skip)]
    pub summaries: Vec<SpectralSummary>,
    #[serde(skip)]
    pub unfolded_spacings: Vec<f64>,
    #[serde(skip)]
    pub raw_spacings: Vec<f64>,
    #[serde(skip)]
    pub ratios: Vec<f64>,
}

fn options(cfg: &AnalysisConfig) -> Result<SummaryOptions> {
    Ok(SummaryOptions {
        window: cfg.window.map(|[a, b]| (a, b)),
        entanglement_split: cfg.entanglement_split.map(|[a, b]| (a, b)),
        legs: cfg.legs.map(|[d, k]| (d, k)),
        words: cfg.parsed_words()?,
    })
}

fn summaries(batch: &SampleBatch, opts: &SummaryOptions) -> Result<Vec<SpectralSummary>> {
    batch
        .samples
        .par_iter()
        .enumerate()
        .map(|(i, h)| summarize(h, opts).with_context(|| format!("sample {i}")))
        .collect()
}

fn pooled_ratios(s: &[SpectralSummary]) -> Vec<f64> {
    s.iter().flat_map(|x| x.ratios.iter().copied()).collect()
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len().max(1) as f64
}

/// Analyses `batch`; `reference_seed` seeds the comparison ensemble.
pub fn run(batch: &SampleBatch, cfg: &AnalysisConfig) -> Result<AnalysisReport> {
    if batch.samples.is_empty() {
        return Err(kfold_core::Error::InvalidArgument("the batch is empty".into()).into());
    }
    let opts = options(cfg)?;
    let summaries = summaries(batch, &opts)?;
    let ratios = pooled_ratios(&summaries);
    let per_sample_means: Vec<f64> = summaries.iter().map(|s| s.mean_ratio).collect();
    let m = mean(&per_sample_means);
    let ratio_std_error = if per_sample_means.len() > 1 {
        let var = per_sample_means.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (per_sample_means.len() - 1) as f64;
        (var / per_sample_means.len() as f64).sqrt()
    } else {
        f64::NAN
    };

    let mut raw_spacings = Vec::new();
    for s in &summaries {
        let ms = mean(&s.spacings);
        if ms > 0.0 {
            raw_spacings.extend(s.spacings.iter().map(|x| x / ms));
        }
    }

    let (unfolded, unfolded_spacings) = if cfg.spacings {
        let mut pooled = Vec::new();
        for (i, s) in summaries.iter().enumerate() {
            let levels = &s.eigenvalues[s.window.0..s.window.1];
            let sp = unfold(levels, cfg.unfold_degree).with_context(|| format!("unfolding sample {i}"))?;
            let cut = (cfg.edge_trim * sp.len() as f64).floor() as usize;
            pooled.extend_from_slice(&sp[cut..sp.len() - cut]);
        }
        let thinned: Vec<f64> = pooled.iter().step_by(cfg.thin).copied().collect();
        let edges = spacing_edges();
        let stats = UnfoldedStats {
            count: thinned.len(),
            mean: mean(&thinned),
            wigner: chi_square_gof(&thinned, wigner_surmise_cdf, &edges)?,
            poisson: chi_square_gof(&thinned, poisson_spacing_cdf, &edges)?,
        };
        (Some(stats), pooled)
    } else {
        (None, Vec::new())
    };

    let reference = match cfg.reference {
        Some(Reference::Gue) => Some(gue_reference(batch, &opts, &ratios)?),
        None => None,
    };

    let per_sample = summaries
        .iter()
        .enumerate()
        .map(|(i, s)| SampleStats {
            index: i,
            seed: batch.seeds[i],
            levels: s.eigenvalues.len(),
            window: s.window,
            mean_ratio: s.mean_ratio,
            merged_spacings: s.merged_spacings,
        })
        .collect();

    Ok(AnalysisReport {
        version: CONFIG_VERSION,
        ensemble: batch.spec.clone(),
        master_seed: batch.master_seed,
        samples: batch.samples.len(),
        window: cfg.window,
        ratio_count: ratios.len(),
        mean_ratio: mean(&ratios),
        ratio_std_error,
        merged_spacings: summaries.iter().map(|s| s.merged_spacings).sum(),
        unfolded,
        reference,
        per_sample,
        summaries,
        unfolded_spacings,
        raw_spacings,
        ratios,
    })
}

/// A GUE batch of the same size and matrix dimension, analysed with the
/// same window.
fn gue_reference(batch: &SampleBatch, opts: &SummaryOptions, ratios: &[f64]) -> Result<ReferenceComparison> {
    let n = batch.samples[0].nrows();
    let spec = EnsembleSpec::Gue { n, scale: 1.0 };
    let seed = stage_seed(batch.master_seed, "gue-reference");
    let reference = Sampler::new(spec.clone())?.batch(seed, batch.samples.len())?;
    let plain = SummaryOptions { window: opts.window, ..SummaryOptions::default() };
    let ref_ratios = pooled_ratios(&summaries(&reference, &plain)?);
    Ok(ReferenceComparison {
        ensemble: spec,
        seed,
        samples: reference.samples.len(),
        mean_ratio: mean(&ref_ratios),
        ks: ks_two_sample(ratios, &ref_ratios)?,
    })
}

pub fn write(report: &AnalysisReport, cfg: &AnalysisConfig, sink: &mut OutputSink) -> Result<()> {
    sink.json("analysis.json", report)?;

    let mut rows = Vec::new();
    for (i, s) in report.summaries.iter().enumerate() {
        for (level, e) in s.eigenvalues.iter().enumerate() {
            let w = level.checked_sub(s.window.0).filter(|_| level < s.window.1);
            let spacing = w.and_then(|j| s.spacings.get(j)).map_or(String::new(), |x| num(*x));
            let ratio = w.and_then(|j| s.ratios.get(j)).map_or(String::new(), |x| num(*x));
            rows.push(vec![i.to_string(), level.to_string(), num(*e), spacing, ratio]);
        }
    }
    sink.csv("summary.csv", &["sample", "level", "eigenvalue", "spacing", "ratio"], rows)?;

    let has_words = report.summaries.iter().any(|s| !s.word_traces.is_empty());
    if has_words {
        let rows = report.summaries.iter().enumerate().flat_map(|(i, s)| {
            s.word_traces.iter().map(move |w| vec![i.to_string(), w.word.clone(), num(w.re), num(w.im)])
        });
        sink.csv("word_traces.csv", &["sample", "word", "re", "im"], rows)?;
    }
    if report.summaries.iter().any(|s| s.entanglement.is_some()) {
        let mut rows = Vec::new();
        for (i, s) in report.summaries.iter().enumerate() {
            for (m, spec) in s.entanglement.iter().flatten().enumerate() {
                for (l, v) in spec.iter().enumerate() {
                    rows.push(vec![i.to_string(), m.to_string(), l.to_string(), num(*v)]);
                }
            }
        }
        sink.csv("entanglement.csv", &["sample", "eigenvector", "index", "schmidt_value"], rows)?;
    }

    let title = report.ensemble.name();
    let (edges, densities) = density_histogram(&report.ratios, 0.0, 1.0, 25);
    let plot = HistogramPlot {
        title: format!("{title}: spacing ratio"),
        x_label: "r".into(),
        y_label: "density".into(),
        edges,
        densities,
        curves: vec![
            Curve::sampled("GUE surmise", "#d62728", 0.0, 1.0, 200, gue_ratio_surmise_pdf),
            Curve::sampled("Poisson", "#2ca02c", 0.0, 1.0, 200, poisson_ratio_pdf),
        ],
    };
    sink.svg("ratio_hist.svg", &plot.render())?;

    if cfg.spacings {
        sink.svg(
            "unfolded_spacing_hist.svg",
            &spacing_plot(&format!("{title}: unfolded spacing"), &report.unfolded_spacings),
        )?;
    }
    if cfg.raw_histograms {
        sink.svg(
            "raw_spacing_hist.svg",
            &spacing_plot(&format!("{title}: spacing / mean spacing"), &report.raw_spacings),
        )?;
    }
    Ok(())
}

fn spacing_plot(title: &str, data: &[f64]) -> String {
    let (edges, densities) = density_histogram(data, 0.0, 4.0, 40);
    HistogramPlot {
        title: title.into(),
        x_label: "s".into(),
        y_label: "density".into(),
        edges,
        densities,
        curves: vec![
            Curve::sampled("Wigner surmise", "#d62728", 0.0, 4.0, 200, wigner_surmise_pdf),
            Curve::sampled("Poisson", "#2ca02c", 0.0, 4.0, 200, poisson_spacing_pdf),
        ],
    }
    .render()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poisson_batch_has_poisson_ratio() {
        let batch = Sampler::new(EnsembleSpec::PoissonDiagonal { n: 400 }).unwrap().batch(1, 20).unwrap();
        let report = run(&batch, &AnalysisConfig::default()).unwrap();
        assert!((report.mean_ratio - kfold_core::spectra::POISSON_MEAN_RATIO).abs() < 0.02);
        assert_eq!(report.per_sample.len(), 20);
        assert_eq!(report.ratio_count, 20 * 398);
    }

    #[test]
    fn writes_requested_files() {
        let batch = Sampler::new(EnsembleSpec::Gue { n: 24, scale: 1.0 }).unwrap().batch(2, 6).unwrap();
        let mut cfg = AnalysisConfig { raw_histograms: true, reference: Some(Reference::Gue), ..Default::default() };
        cfg.unfold_degree = 5;
        let report = run(&batch, &cfg).unwrap();
        assert!(report.reference.is_some());
        let dir = tempfile::tempdir().unwrap();
        let mut sink = OutputSink::new(dir.path(), &[crate::Format::Csv, crate::Format::Svg]).unwrap();
        write(&report, &cfg, &mut sink).unwrap();
        for f in ["summary.csv", "ratio_hist.svg", "unfolded_spacing_hist.svg", "raw_spacing_hist.svg"] {
            assert!(dir.path().join(f).exists(), "{f}");
        }
        assert!(!dir.path().join("analysis.json").exists());
    }
}
