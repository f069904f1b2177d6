//! Serializable ensemble descriptions and deterministic batch generation.

use super::quantum_double::{quantum_double, FiniteGroup, Torus};
use super::spin::{sample_heisenberg, sample_o3, Graph, O3Coupling};
use super::{sample_goe, sample_gue, sample_kfold, sample_power_fold, sample_tensor_product};
use crate::commutant::{build_precision, generic_precision, symmetrized_family, ConstraintSet, PrecisionForm};
use crate::error::{invalid, Result};
use crate::seed::{rng, sample_rng, sample_seed};
use crate::tensor::MAX_DENSE_DIM;
use crate::{CMat, RMat, RVec, C64};
use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// How the precision matrix Δ of a k-fold ensemble is chosen.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PrecisionSpec {
    /// Explicit coefficients in the family's orthonormal basis.
    Coefficients(Vec<f64>),
    /// Δ = λ·I, the GUE with scale 1/√λ.
    Identity { lambda: f64 },
    /// Identity form plus a random unit-norm invariant perturbation.
    Generic { strength: f64, seed: u64 },
    /// Δ = I − strength·v vᵀ for a random unit coordinate vector v. Not
    /// invariant; used as a negative control.
    RankOneDefect { strength: f64, seed: u64 },
}

/// A random-matrix ensemble.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EnsembleSpec {
    Gue {
        n: usize,
        scale: f64,
    },
    Goe {
        n: usize,
        scale: f64,
    },
    Kfold {
        constraints: ConstraintSet,
        precision: PrecisionSpec,
    },
    TensorProductGue {
        dims: Vec<usize>,
        scale: f64,
    },
    PowerFold {
        n: usize,
        k: usize,
        scale: f64,
    },
    Heisenberg {
        graph: Graph,
        noise_scale: f64,
    },
    O3Model {
        graph: Graph,
        #[serde(default)]
        coupling: O3Coupling,
        /// Concentration of the coupling distribution around the identity.
        /// Only the Haar limit (0) is implemented.
        #[serde(default)]
        concentration: f64,
    },
    QuantumDouble {
        group: FiniteGroup,
        torus: Torus,
    },
    /// Diagonal matrix of i.i.d. uniform [0, 1) entries (Poisson level
    /// statistics).
    PoissonDiagonal {
        n: usize,
    },
}

impl EnsembleSpec {
    pub fn name(&self) -> &'static str {
        match self {
            EnsembleSpec::Gue { .. } => "gue",
            EnsembleSpec::Goe { .. } => "goe",
            EnsembleSpec::Kfold { .. } => "kfold",
            EnsembleSpec::TensorProductGue { .. } => "tensor_product_gue",
            EnsembleSpec::PowerFold { .. } => "power_fold",
            EnsembleSpec::Heisenberg { .. } => "heisenberg",
            EnsembleSpec::O3Model { .. } => "o3_model",
            EnsembleSpec::QuantumDouble { .. } => "quantum_double",
            EnsembleSpec::PoissonDiagonal { .. } => "poisson_diagonal",
        }
    }
}

enum Prepared {
    Direct,
    Precision(Box<PrecisionForm>),
    Fixed(CMat),
}

/// An ensemble with any expensive setup (Δ, fixed Hamiltonians) done once.
pub struct Sampler {
    spec: EnsembleSpec,
    prepared: Prepared,
}

/// Samples drawn with per-sample seeds derived from one master seed.
#[derive(Clone, Debug)]
pub struct SampleBatch {
    pub spec: EnsembleSpec,
    pub master_seed: u64,
    pub seeds: Vec<u64>,
    pub samples: Vec<CMat>,
}

impl SampleBatch {
    /// Largest ‖H − H†‖_max over the batch.
    pub fn hermiticity_defect(&self) -> f64 {
        self.samples.iter().map(|h| (h - h.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)).fold(0.0, f64::max)
    }
}

fn unit_vector(len: usize, seed: u64) -> RVec {
    let mut r = rng(seed);
    let v = RVec::from_fn(len, |_, _| StandardNormal.sample(&mut r));
    let n = v.norm();
    v / n
}

fn prepare_precision(constraints: &ConstraintSet, spec: &PrecisionSpec) -> Result<PrecisionForm> {
    let family = symmetrized_family(*constraints)?;
    match spec {
        PrecisionSpec::Coefficients(c) => build_precision(&family, c),
        PrecisionSpec::Identity { lambda } => {
            if !(*lambda > 0.0 && lambda.is_finite()) {
                return invalid(format!("lambda must be positive, got {lambda}"));
            }
            let c: Vec<f64> = family.identity_coefficients().iter().map(|x| x * lambda).collect();
            build_precision(&family, &c)
        }
        PrecisionSpec::Generic { strength, seed } => generic_precision(&family, *strength, &mut rng(*seed)),
        PrecisionSpec::RankOneDefect { strength, seed } => {
            if !(0.0..1.0).contains(strength) {
                return invalid(format!("defect strength must lie in [0, 1), got {strength}"));
            }
            let n = family.matrix_dim() * family.matrix_dim();
            let v = unit_vector(n, *seed);
            PrecisionForm::from_matrix(RMat::identity(n, n) - &v * v.transpose() * *strength)
        }
    }
}

impl Sampler {
    pub fn new(spec: EnsembleSpec) -> Result<Self> {
        let prepared = match &spec {
            EnsembleSpec::Kfold { constraints, precision } => {
                Prepared::Precision(Box::new(prepare_precision(constraints, precision)?))
            }
            EnsembleSpec::QuantumDouble { group, torus } => Prepared::Fixed(quantum_double(group, *torus)?.hamiltonian),
            EnsembleSpec::O3Model { concentration, .. } if *concentration != 0.0 => {
                return invalid("only concentration 0 (Haar couplings) is supported");
            }
            EnsembleSpec::PoissonDiagonal { n } if *n == 0 || *n > MAX_DENSE_DIM => {
                return invalid(format!("dimension must lie in 1..={MAX_DENSE_DIM}"));
            }
            _ => Prepared::Direct,
        };
        let sampler = Sampler { spec, prepared };
        // Validate every remaining parameter with one throwaway draw.
        sampler.draw(&mut rng(0))?;
        Ok(sampler)
    }

    pub fn spec(&self) -> &EnsembleSpec {
        &self.spec
    }

    pub fn precision(&self) -> Option<&PrecisionForm> {
        match &self.prepared {
            Prepared::Precision(p) => Some(p),
            _ => None,
        }
    }

    fn draw(&self, r: &mut crate::seed::Rng) -> Result<CMat> {
        match (&self.spec, &self.prepared) {
            (_, Prepared::Fixed(h)) => Ok(h.clone()),
            (_, Prepared::Precision(p)) => sample_kfold(p, r),
            (EnsembleSpec::Gue { n, scale }, _) => sample_gue(*n, *scale, r),
            (EnsembleSpec::Goe { n, scale }, _) => sample_goe(*n, *scale, r),
            (EnsembleSpec::TensorProductGue { dims, scale }, _) => sample_tensor_product(dims, *scale, r),
            (EnsembleSpec::PowerFold { n, k, scale }, _) => sample_power_fold(*n, *k, *scale, r),
            (EnsembleSpec::Heisenberg { graph, noise_scale }, _) => sample_heisenberg(graph, *noise_scale, r),
            (EnsembleSpec::O3Model { graph, coupling, .. }, _) => sample_o3(graph, *coupling, r),
            (EnsembleSpec::PoissonDiagonal { n }, _) => {
                let mut h = CMat::zeros(*n, *n);
                for i in 0..*n {
                    h[(i, i)] = C64::new(r.random::<f64>(), 0.0);
                }
                Ok(h)
            }
            (EnsembleSpec::Kfold { .. } | EnsembleSpec::QuantumDouble { .. }, Prepared::Direct) => {
                unreachable!("prepared in Sampler::new")
            }
        }
    }

    /// Sample `index` of the batch seeded with `master_seed`.
    pub fn sample(&self, master_seed: u64, index: u64) -> Result<CMat> {
        self.draw(&mut sample_rng(master_seed, index))
    }

    /// `count` samples generated in parallel; the result does not depend on
    /// the number of threads.
    pub fn batch(&self, master_seed: u64, count: usize) -> Result<SampleBatch> {
        let samples =
            (0..count as u64).into_par_iter().map(|i| self.sample(master_seed, i)).collect::<Result<Vec<_>>>()?;
        Ok(SampleBatch {
            spec: self.spec.clone(),
            master_seed,
            seeds: (0..count as u64).map(|i| sample_seed(master_seed, i)).collect(),
            samples,
        })
    }
}
