//! Haar first moment of U ⊗ U† and its fit onto the identity and the
//! partially transposed swap.

use super::haar_unitary;
use crate::error::{invalid, Result};
use crate::seed::sample_rng;
use crate::tensor::{partial_transpose, TensorOperator};
use crate::{CMat, C64};
use rayon::prelude::*;
use serde::Serialize;

pub const MAX_UNITARY_DOUBLE_DIM: usize = 8;
pub const MIN_UNITARY_DOUBLE_SAMPLES: usize = 1000;
const CHUNK: usize = 1024;

/// Monte-Carlo estimate of E_U[U ⊗ U†] and its least-squares fit.
///
/// Transposing the second leg turns U ⊗ U† into U ⊗ Ū, and the fit
/// E[U ⊗ Ū] ≈ α·I + β·S^Γ is done in that picture (S^Γ = Σ_ab |aa⟩⟨bb|).
/// The realignment is a Frobenius isometry, so α and β are also the
/// coefficients of I and of the swap S in E[U ⊗ U†].
#[derive(Clone, Debug, Serialize)]
pub struct UnitaryDoubleFit {
    pub d: usize,
    pub samples: usize,
    #[serde(skip)]
    pub estimate: TensorOperator,
    #[serde(skip)]
    pub realigned: TensorOperator,
    pub alpha: f64,
    pub beta: f64,
    pub alpha_stderr: f64,
    pub beta_stderr: f64,
    /// ‖E[U⊗Ū] − (αI + βS^Γ)‖₂ / ‖E[U⊗Ū]‖₂ in spectral norm.
    pub relative_residual: f64,
}

fn spectral_norm(m: &CMat) -> f64 {
    m.singular_values().iter().copied().fold(0.0, f64::max)
}

/// S^Γ = Σ_ab |aa⟩⟨bb| on C^d ⊗ C^d.
pub fn transposed_swap(d: usize) -> CMat {
    let mut m = CMat::zeros(d * d, d * d);
    for a in 0..d {
        for b in 0..d {
            m[(a * d + a, b * d + b)] = C64::new(1.0, 0.0);
        }
    }
    m
}

pub fn unitary_double_first_moment(d: usize, mc_samples: usize, seed: u64) -> Result<UnitaryDoubleFit> {
    if d == 0 || d > MAX_UNITARY_DOUBLE_DIM {
        return invalid(format!("d must lie in 1..={MAX_UNITARY_DOUBLE_DIM}, got {d}"));
    }
    if mc_samples < MIN_UNITARY_DOUBLE_SAMPLES {
        return invalid(format!("at least {MIN_UNITARY_DOUBLE_SAMPLES} samples are required"));
    }
    let n = d * d;
    // Fixed chunking keeps the summation order independent of thread count.
    let chunks: Vec<(CMat, f64, f64)> = (0..mc_samples.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| -> Result<(CMat, f64, f64)> {
            let mut acc = CMat::zeros(n, n);
            let (mut t2, mut t4) = (0.0, 0.0);
            for i in c * CHUNK..((c + 1) * CHUNK).min(mc_samples) {
                let u = haar_unitary(d, &mut sample_rng(seed, i as u64))?;
                acc += u.kronecker(&u.adjoint());
                let tr = u.trace().norm_sqr();
                t2 += tr;
                t4 += tr * tr;
            }
            Ok((acc, t2, t4))
        })
        .collect::<Result<_>>()?;
    let mut sum = CMat::zeros(n, n);
    let (mut t2, mut t4) = (0.0, 0.0);
    for (m, a, b) in chunks {
        sum += m;
        t2 += a;
        t4 += b;
    }
    let count = mc_samples as f64;
    let estimate = TensorOperator::new(sum / C64::new(count, 0.0), d, 2)?;
    let realigned = partial_transpose(&estimate, &[1])?;

    // Per-sample normal equations with Gram [[d², d], [d, d²]]:
    // ⟨I, U⊗Ū⟩ = |Tr U|², ⟨S^Γ, U⊗Ū⟩ = Σ|U_ab|² = d.
    let mean_t2 = t2 / count;
    let var_t2 = ((t4 / count - mean_t2 * mean_t2) * count / (count - 1.0)).max(0.0);
    let (alpha, beta, alpha_stderr, beta_stderr) = if d == 1 {
        // I and S^Γ coincide; the moment is the scalar 1.
        (0.0, 1.0, 0.0, 0.0)
    } else {
        let df = d as f64;
        let den = df * df - 1.0;
        let se = (var_t2 / count).sqrt();
        ((mean_t2 - 1.0) / den, (df * df - mean_t2) / (df * den), se / den, se / (df * den))
    };
    let fit = CMat::identity(n, n) * C64::new(alpha, 0.0) + transposed_swap(d) * C64::new(beta, 0.0);
    let relative_residual = spectral_norm(&(realigned.matrix() - fit)) / spectral_norm(realigned.matrix());
    Ok(UnitaryDoubleFit {
        d,
        samples: mc_samples,
        estimate,
        realigned,
        alpha,
        beta,
        alpha_stderr,
        beta_stderr,
        relative_residual,
    })
}

impl UnitaryDoubleFit {
    /// ‖[E[U⊗Ū], V⊗V̄]‖_F for a unitary V.
    pub fn twisted_commutator(&self, v: &CMat) -> f64 {
        let w = v.kronecker(&v.conjugate());
        let e = self.realigned.matrix();
        (e * &w - &w * e).norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng;

    #[test]
    fn d_one_is_exactly_one() {
        let fit = unitary_double_first_moment(1, 1000, 3).unwrap();
        assert!((fit.estimate.matrix()[(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-14);
        assert_eq!(fit.relative_residual, 0.0);
    }

    #[test]
    fn fit_recovers_weingarten_coefficients() {
        let fit = unitary_double_first_moment(3, 20_000, 11).unwrap();
        assert!(fit.alpha.abs() < 5.0 * fit.alpha_stderr);
        assert!((fit.beta - 1.0 / 3.0).abs() < 5.0 * fit.beta_stderr);
        assert!(fit.relative_residual < 0.05);
        let v = haar_unitary(3, &mut rng(4)).unwrap();
        assert!(fit.twisted_commutator(&v) < 0.1);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(unitary_double_first_moment(9, 1000, 0).is_err());
        assert!(unitary_double_first_moment(2, 10, 0).is_err());
    }
}
