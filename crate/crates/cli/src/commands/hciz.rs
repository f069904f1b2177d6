//! `kfold hciz`: exact evaluation of the HCIZ integral, optionally checked
//! against Monte Carlo.

use crate::output::{num, OutputSink};
use anyhow::Result;
use kfold_core::hc::{hciz_exact, hciz_monte_carlo, weyl_ratio, weyl_sum, HcizMonteCarlo, HcizProblem, HcizValue};
use serde::Serialize;

/// Largest n for which the Weyl-group sum is reported.
const MAX_WEYL_N: usize = 8;

#[derive(Clone, Debug, Serialize)]
pub struct HcizReport {
    pub problem: HcizProblem,
    pub exact: HcizValue,
    /// Bare alternating sum over S_n with t folded into a (n ≤ 8 only).
    pub weyl_sum: Option<f64>,
    /// Exact value divided by `weyl_sum`.
    pub weyl_ratio: Option<f64>,
    pub monte_carlo: Option<HcizMonteCarlo>,
    /// |exact − MC| in Monte-Carlo standard errors.
    pub sigmas: Option<f64>,
}

pub fn run(a: Vec<f64>, b: Vec<f64>, t: f64, samples: Option<usize>, seed: u64) -> Result<HcizReport> {
    let problem = HcizProblem::new(a, b, t)?;
    let exact = hciz_exact(&problem)?;
    let scaled: Vec<f64> = problem.a.iter().map(|x| x * t).collect();
    let (weyl_sum, weyl_ratio) = if problem.n() <= MAX_WEYL_N {
        (Some(weyl_sum(&scaled, &problem.b)?), weyl_ratio(&scaled, &problem.b).ok())
    } else {
        (None, None)
    };
    let monte_carlo = samples.map(|s| hciz_monte_carlo(&problem, s, seed)).transpose()?;
    let sigmas = monte_carlo.as_ref().map(|mc| (exact.value - mc.estimate).abs() / mc.std_error.max(1e-300));
    Ok(HcizReport { problem, exact, weyl_sum, weyl_ratio, monte_carlo, sigmas })
}

pub fn write(report: &HcizReport, sink: &mut OutputSink) -> Result<()> {
    sink.json("hciz.json", report)?;
    let mc = report.monte_carlo.as_ref();
    sink.csv(
        "hciz.csv",
        &["n", "t", "exact", "error_estimate", "mc_estimate", "mc_std_error", "sigmas"],
        [vec![
            report.problem.n().to_string(),
            num(report.problem.t),
            num(report.exact.value),
            num(report.exact.error_estimate),
            mc.map_or(String::new(), |m| num(m.estimate)),
            mc.map_or(String::new(), |m| num(m.std_error)),
            report.sigmas.map_or(String::new(), num),
        ]],
    )
}
