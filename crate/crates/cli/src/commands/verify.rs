//! `kfold verify`: the statistical and exact self-checks, as one
//! deterministic JSON report.

use crate::config::{RunConfig, VerifyConfig, CONFIG_VERSION};
use crate::output::OutputSink;
use anyhow::Result;
use kfold_core::commutant::schur_weyl_residual;
use kfold_core::ensembles::{
    covariance_invariance_streaming, haar_orthogonal3, haar_unitary, quantum_double, sample_gue, sample_heisenberg,
    sample_o3, EnsembleSpec, FiniteGroup, GaugeRelabel, Graph, O3Coupling, Sampler, Torus,
};
use kfold_core::hc::{hciz_exact, hciz_monte_carlo, HcizProblem};
use kfold_core::seed::{rng, sample_rng, stage_seed};
use kfold_core::spectra::{enumerate_words, invariant_word_trace, schmidt_quadruple_sum, WordSpec};
use kfold_core::tensor::kron_power;
use kfold_core::{TensorOperator, C64};
use rand::Rng as _;
use serde::Serialize;
use serde_json::{json, Value};

/// Relative tolerance of the Schmidt-expanded trace identity.
pub const TRACE_IDENTITY_TOL: f64 = 1e-8;
/// Relative tolerance for invariant words under 2-fold conjugation.
pub const WORD_INVARIANCE_TOL: f64 = 1e-9;
/// Relative Schur-Weyl projection residual.
pub const SCHUR_WEYL_TOL: f64 = 1e-6;
pub const SCHUR_WEYL_TWIRLS: usize = 200;
/// Absolute tolerance for the quantum-double commutators and gauge defects.
pub const QUANTUM_DOUBLE_TOL: f64 = 1e-12;
/// Exact and Monte-Carlo HCIZ values must agree within this many standard errors.
pub const HCIZ_SIGMAS: f64 = 3.0;
const HCIZ_PROBLEMS_PER_N: usize = 3;
const HEISENBERG_NOISE: f64 = 0.8;
const O3_SITES: usize = 3;

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub details: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub version: u32,
    pub seed: u64,
    pub config: VerifyConfig,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn failed(&self) -> Vec<String> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect()
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn check(name: &str, passed: bool, details: Value) -> CheckResult {
    CheckResult { name: name.to_string(), passed, details }
}

pub fn run(cfg: &RunConfig) -> Result<VerifyReport> {
    let v = &cfg.verify;
    let seed = cfg.seed;
    let checks = vec![
        kfold_invariance(v, seed)?,
        heisenberg_invariance(v, seed)?,
        o3_invariance(v, seed)?,
        trace_identity(seed)?,
        schur_weyl(seed)?,
        quantum_double_gauge()?,
        hciz(v, seed)?,
    ];
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport { version: CONFIG_VERSION, seed, config: v.clone(), checks, passed })
}

pub fn to_json(report: &VerifyReport) -> Result<String> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    Ok(text)
}

pub fn write(report: &VerifyReport, sink: &mut OutputSink) -> Result<()> {
    sink.json("verify.json", report)
}

fn kfold_invariance(v: &VerifyConfig, seed: u64) -> Result<CheckResult> {
    let c = v.kfold_constraints;
    let sampler = Sampler::new(EnsembleSpec::Kfold { constraints: c, precision: v.kfold_precision.clone() })?;
    let w = kron_power(&haar_unitary(c.d, &mut rng(stage_seed(seed, "kfold-conjugator")))?, c.k)?;
    let master = stage_seed(seed, "kfold-samples");
    let t = covariance_invariance_streaming(
        v.invariance_samples,
        |i| sampler.sample(master, i as u64),
        &w,
        v.bootstrap,
        &mut rng(stage_seed(seed, "kfold-bootstrap")),
    )?;
    Ok(check("kfold_invariance", t.passed, json!({ "constraints": c, "precision": v.kfold_precision, "test": t })))
}

fn heisenberg_invariance(v: &VerifyConfig, seed: u64) -> Result<CheckResult> {
    let graph = Graph::chain(v.heisenberg_sites, 1.0, true);
    let w = kron_power(&haar_unitary(2, &mut rng(stage_seed(seed, "heisenberg-conjugator")))?, graph.sites)?;
    let master = stage_seed(seed, "heisenberg-samples");
    let t = covariance_invariance_streaming(
        v.invariance_samples,
        |i| sample_heisenberg(&graph, HEISENBERG_NOISE, &mut sample_rng(master, i as u64)),
        &w,
        v.bootstrap,
        &mut rng(stage_seed(seed, "heisenberg-bootstrap")),
    )?;
    Ok(check(
        "heisenberg_invariance",
        t.passed,
        json!({ "sites": graph.sites, "noise_scale": HEISENBERG_NOISE, "test": t }),
    ))
}

fn o3_invariance(v: &VerifyConfig, seed: u64) -> Result<CheckResult> {
    let graph = Graph::chain(O3_SITES, 1.0, false);
    let rot = haar_orthogonal3(&mut rng(stage_seed(seed, "o3-conjugator"))).map(|x| C64::new(x, 0.0));
    let w = kron_power(&rot, O3_SITES)?;
    let master = stage_seed(seed, "o3-samples");
    let t = covariance_invariance_streaming(
        v.invariance_samples,
        |i| sample_o3(&graph, O3Coupling::Haar, &mut sample_rng(master, i as u64)),
        &w,
        v.bootstrap,
        &mut rng(stage_seed(seed, "o3-bootstrap")),
    )?;
    Ok(check("o3_invariance", t.passed, json!({ "sites": O3_SITES, "test": t })))
}

fn relative(a: C64, b: C64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1.0)
}

/// Tr[H_S²H²] against its Schmidt expansion, and invariance of every word of
/// degree ≤ 4 under 2-fold conjugations.
fn trace_identity(seed: u64) -> Result<CheckResult> {
    let mut r = rng(stage_seed(seed, "trace-identity"));
    let word = WordSpec::parse(2, "(12)^2*e^2")?;
    let words = enumerate_words(2, 4)?;
    let mut worst_identity = 0.0f64;
    let mut worst_word = 0.0f64;
    for d in [2usize, 3] {
        for i in 0..50 {
            let h = TensorOperator::new(sample_gue(d * d, 1.0, &mut r)?, d, 2)?;
            let direct = invariant_word_trace(&h, &word)?;
            let expanded = schmidt_quadruple_sum(&h)?;
            worst_identity = worst_identity.max(relative(direct, C64::new(expanded, 0.0)));
            if i < 10 {
                let u = kron_power(&haar_unitary(d, &mut r)?, 2)?;
                let moved = TensorOperator::new(&u * h.matrix() * u.adjoint(), d, 2)?;
                for w in &words {
                    let a = invariant_word_trace(&h, w)?;
                    let b = invariant_word_trace(&moved, w)?;
                    worst_word = worst_word.max(relative(a, b));
                }
            }
        }
    }
    let passed = worst_identity < TRACE_IDENTITY_TOL && worst_word < WORD_INVARIANCE_TOL;
    Ok(check(
        "trace_identity",
        passed,
        json!({
            "matrices_per_d": 50,
            "max_relative_identity_error": worst_identity,
            "identity_tolerance": TRACE_IDENTITY_TOL,
            "words": words.len(),
            "conjugations_per_d": 10,
            "max_relative_word_change": worst_word,
            "word_tolerance": WORD_INVARIANCE_TOL,
        }),
    ))
}

fn schur_weyl(seed: u64) -> Result<CheckResult> {
    let mut cases = Vec::new();
    let mut passed = true;
    for (k, d) in [(2usize, 2usize), (2, 3), (3, 3)] {
        let mut r = rng(stage_seed(seed, &format!("schur-weyl-{k}-{d}")));
        let c = schur_weyl_residual(k, d, SCHUR_WEYL_TWIRLS, &mut r)?;
        passed &= c.relative_residual < SCHUR_WEYL_TOL;
        cases.push(c);
    }
    Ok(check("schur_weyl", passed, json!({ "tolerance": SCHUR_WEYL_TOL, "cases": cases })))
}

fn quantum_double_gauge() -> Result<CheckResult> {
    let qd = quantum_double(&FiniteGroup::cyclic(2)?, Torus { width: 2, height: 2 })?;
    let commutator = qd.max_commutator();
    let gauge = qd.gauge_defect(GaugeRelabel::Left(1))?;
    let (e0, degeneracy) = qd.brute_force_ground(1e-9);
    let predicted = qd.predicted_ground_energy();
    let passed = commutator < QUANTUM_DOUBLE_TOL && gauge < QUANTUM_DOUBLE_TOL && (e0 - predicted).abs() < 1e-9;
    Ok(check(
        "quantum_double",
        passed,
        json!({
            "group_order": 2,
            "torus": [2, 2],
            "max_commutator": commutator,
            "gauge_defect": gauge,
            "ground_energy": e0,
            "predicted_ground_energy": predicted,
            "ground_degeneracy": degeneracy,
        }),
    ))
}

fn hciz(v: &VerifyConfig, seed: u64) -> Result<CheckResult> {
    let mut r = rng(stage_seed(seed, "hciz-problems"));
    let mut cases = Vec::new();
    let mut passed = true;
    for n in [2usize, 3] {
        for i in 0..HCIZ_PROBLEMS_PER_N {
            let a: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..1.0)).collect();
            let b: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..1.0)).collect();
            let p = HcizProblem::new(a, b, 1.0)?;
            let exact = hciz_exact(&p)?;
            let mc = hciz_monte_carlo(&p, v.hciz_samples, stage_seed(seed, &format!("hciz-mc-{n}-{i}")))?;
            let sigmas = (exact.value - mc.estimate).abs() / mc.std_error.max(1e-300);
            passed &= sigmas < HCIZ_SIGMAS;
            cases.push(json!({ "problem": p, "exact": exact, "monte_carlo": mc, "sigmas": sigmas }));
        }
    }
    let closed = hciz_exact(&HcizProblem::new(vec![0.0, 1.0], vec![0.0, 1.0], 1.0)?)?.value;
    let closed_error = (closed - (std::f64::consts::E - 1.0)).abs();
    passed &= closed_error < 1e-10;
    Ok(check("hciz", passed, json!({ "sigma_limit": HCIZ_SIGMAS, "cases": cases, "closed_form_error": closed_error })))
}
