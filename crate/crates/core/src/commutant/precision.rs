use super::family::{InvariantFamily, PermutationSign};
use super::sparse::SparseOp;
use crate::ensembles::haar_unitary;
use crate::error::{invalid, too_big, Error, Result};
use crate::perm::Permutation;
use crate::seed::Rng;
use crate::tensor::{adjoint_action_matrix, kron_power, permutation_operator, transpose_action_signs};
use crate::{RMat, RVec};

/// Largest coordinate dimension for which Δ is realized densely.
pub const MAX_PRECISION_DIM: usize = 4096;

/// A positive-definite precision matrix on Hermitian coordinates, with its
/// eigendecomposition cached for sampling.
#[derive(Clone, Debug)]
pub struct PrecisionForm {
    /// Coefficients over the family basis (empty for a form given directly).
    pub coefficients: Vec<f64>,
    pub matrix: RMat,
    pub eigenvalues: RVec,
    pub eigenvectors: RMat,
    /// The smallest eigenvalue, strictly positive.
    pub eigenvalue_floor: f64,
}

impl PrecisionForm {
    /// Wraps an arbitrary symmetric matrix, checking positive definiteness.
    pub fn from_matrix(matrix: RMat) -> Result<Self> {
        Self::with_coefficients(matrix, Vec::new())
    }

    fn with_coefficients(matrix: RMat, coefficients: Vec<f64>) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return invalid("precision matrix must be square and nonempty");
        }
        if matrix.nrows() > MAX_PRECISION_DIM {
            return too_big(format!("precision matrix of dimension {}", matrix.nrows()));
        }
        let matrix = (&matrix + matrix.transpose()) * 0.5;
        let eig = matrix.clone().symmetric_eigen();
        let min = eig.eigenvalues.min();
        let max = eig.eigenvalues.amax();
        if !(min > 1e-10 * max) {
            return Err(Error::NotPositiveDefinite { min_eigenvalue: min });
        }
        Ok(PrecisionForm {
            coefficients,
            matrix,
            eigenvalues: eig.eigenvalues,
            eigenvectors: eig.eigenvectors,
            eigenvalue_floor: min,
        })
    }

    /// Number of Hermitian coordinates.
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Maps a standard normal vector z to Q Λ^{-1/2} z ~ N(0, Δ⁻¹).
    pub fn sample_coordinates(&self, z: &RVec) -> RVec {
        let scaled = RVec::from_fn(z.len(), |i, _| z[i] / self.eigenvalues[i].sqrt());
        &self.eigenvectors * scaled
    }

    /// Δ⁻¹.
    pub fn covariance(&self) -> RMat {
        let inv = self.eigenvalues.map(|x| 1.0 / x);
        &self.eigenvectors * RMat::from_diagonal(&inv) * self.eigenvectors.transpose()
    }
}

/// Δ = Σ cᵢ·basisᵢ, required to be positive definite.
pub fn build_precision(family: &InvariantFamily, coefficients: &[f64]) -> Result<PrecisionForm> {
    if coefficients.len() != family.hermitian_dim() {
        return invalid(format!("expected {} coefficients, got {}", family.hermitian_dim(), coefficients.len()));
    }
    let n = family.coord_dim();
    if n > MAX_PRECISION_DIM {
        return too_big(format!("precision matrix of dimension {n}"));
    }
    let mut m = RMat::zeros(n, n);
    for (b, &c) in family.basis.iter().zip(coefficients) {
        for &(r, col, v) in &b.entries {
            m[(r, col)] += c * v;
        }
    }
    PrecisionForm::with_coefficients(m, coefficients.to_vec())
}

/// Largest relative commutator defect of the family's real forms.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct CommutationDefect {
    pub unitary: f64,
    pub permutation: f64,
    pub half_swap: f64,
}

/// Checks ‖R E − s·E R‖_F ≤ tol·‖E‖_F for every family element E against
/// `haar_samples` adjoint actions of U^{⊗k}, all enabled permutation
/// conjugations (s = sign(σ) for the twisted family) and the transpose map.
pub fn commutation_defect(family: &InvariantFamily, haar_samples: usize, rng: &mut Rng) -> Result<CommutationDefect> {
    let c = family.constraints;
    let dense: Vec<RMat> = family.basis.iter().map(SparseOp::to_dense).collect();
    let worst = |r: &RMat, sign: f64| -> f64 {
        dense.iter().map(|e| (r * e - e * r * sign).norm() / e.norm().max(1e-300)).fold(0.0, f64::max)
    };
    let mut out = CommutationDefect { unitary: 0.0, permutation: 0.0, half_swap: 0.0 };
    for _ in 0..haar_samples {
        let u = kron_power(&haar_unitary(c.d, rng)?, c.k)?;
        out.unitary = out.unitary.max(worst(&adjoint_action_matrix(&u)?, 1.0));
    }
    if c.include_permutation_symmetry {
        for s in Permutation::all(c.k) {
            let p = permutation_operator(&s, c.d)?;
            let sign = match c.permutation_sign {
                PermutationSign::Trivial => 1.0,
                PermutationSign::Sign => s.sign() as f64,
            };
            out.permutation = out.permutation.max(worst(&adjoint_action_matrix(p.matrix())?, sign));
        }
    }
    if c.include_half_swap {
        let t = RMat::from_diagonal(&transpose_action_signs(family.matrix_dim()));
        out.half_swap = worst(&t, 1.0);
    }
    Ok(out)
}

/// A generic positive-definite element of the family: the identity form
/// plus `strength` times a random unit-norm combination of the basis.
///
/// The basis is Frobenius-orthonormal, so the perturbation has operator
/// norm at most `strength`; any `strength < 1` keeps Δ positive definite.
pub fn generic_precision(family: &InvariantFamily, strength: f64, rng: &mut Rng) -> Result<PrecisionForm> {
    use rand_distr::{Distribution, StandardNormal};
    if !(0.0..1.0).contains(&strength) {
        return invalid(format!("generic_precision strength must lie in [0, 1), got {strength}"));
    }
    let g: Vec<f64> = (0..family.hermitian_dim()).map(|_| StandardNormal.sample(rng)).collect();
    let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
    let coeffs: Vec<f64> =
        family.identity_coefficients().iter().zip(&g).map(|(i, x)| i + strength * x / norm).collect();
    build_precision(family, &coeffs)
}
