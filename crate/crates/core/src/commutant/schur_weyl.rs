use crate::ensembles::haar_unitary;
use crate::error::{invalid, too_big, Error, Result};
use crate::perm::Permutation;
use crate::seed::Rng;
use crate::tensor::{complex_vec, kron_power, permutation_operator};
use crate::{CMat, CVec, C64};
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

/// Number of Haar unitaries whose joint commutant defines the refinement.
const REFINEMENT_UNITARIES: usize = 5;

/// Outcome of the Schur-Weyl projection test.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SchurWeylCheck {
    pub k: usize,
    pub d: usize,
    pub twirl_samples: usize,
    /// Relative distance of the raw twirl from span{Ŝ_σ}.
    pub twirl_residual: f64,
    /// Dimension of the numerically computed commutant.
    pub commutant_dim: usize,
    /// Relative distance of the refined operator from span{Ŝ_σ}.
    pub relative_residual: f64,
}

fn residual_from_span(x: &CVec, span: &[CVec]) -> f64 {
    let m = span.len();
    let gram = CMat::from_fn(m, m, |i, j| span[i].dotc(&span[j]));
    let rhs = CVec::from_fn(m, |i, _| span[i].dotc(x));
    let coef = gram.pseudo_inverse(1e-12).expect("pseudo-inverse") * rhs;
    let mut fit = CVec::zeros(x.len());
    for (c, s) in coef.iter().zip(span) {
        fit += s * *c;
    }
    (x - fit).norm() / x.norm().max(1e-300)
}

/// Builds an operator commuting with V^{⊗k}: a Haar twirl of a random
/// matrix over `twirl_samples` unitaries, followed by orthogonal projection
/// onto the null space of X ↦ [W_m, X] for several independent W_m = V_m^{⊗k}.
/// Reports how far the result lies from the span of permutation operators.
pub fn schur_weyl_residual(k: usize, d: usize, twirl_samples: usize, rng: &mut Rng) -> Result<SchurWeylCheck> {
    if k == 0 || d == 0 || twirl_samples == 0 {
        return invalid("schur_weyl_residual needs k, d, samples >= 1");
    }
    let n = d.pow(k as u32);
    if n > 32 {
        return too_big(format!("Schur-Weyl check on dimension {n} (limit 32)"));
    }
    let normal = |rng: &mut Rng| C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng));
    let a = CMat::from_fn(n, n, |_, _| normal(rng));
    let mut twirl = CMat::zeros(n, n);
    for _ in 0..twirl_samples {
        let w = kron_power(&haar_unitary(d, rng)?, k)?;
        twirl += &w * &a * w.adjoint();
    }
    twirl /= C64::new(twirl_samples as f64, 0.0);

    // Σ_m L_m†L_m with L_m = I⊗W − Wᵀ⊗I acting on vec(X); this equals
    // Σ_m (2I − Wᵀ⊗W† − W̄⊗W).
    let n2 = n * n;
    let mut gram = CMat::zeros(n2, n2);
    for _ in 0..REFINEMENT_UNITARIES {
        let w = kron_power(&haar_unitary(d, rng)?, k)?;
        gram += CMat::identity(n2, n2) * C64::new(2.0, 0.0);
        gram -= w.transpose().kronecker(&w.adjoint());
        gram -= w.conjugate().kronecker(&w);
    }
    let eig = gram.symmetric_eigen();
    let top = eig.eigenvalues.amax();
    let null: Vec<usize> = (0..n2).filter(|&i| eig.eigenvalues[i] < 1e-8 * top).collect();
    if null.is_empty() {
        return Err(Error::NumericalDegeneracy("commutant null space is empty".into()));
    }
    let q = CMat::from_fn(n2, null.len(), |r, j| eig.eigenvectors[(r, null[j])]);
    let x = complex_vec(&twirl);
    let refined = &q * (q.adjoint() * &x);

    let span: Vec<CVec> = Permutation::all(k)
        .iter()
        .map(|s| permutation_operator(s, d).map(|p| complex_vec(p.matrix())))
        .collect::<Result<_>>()?;
    Ok(SchurWeylCheck {
        k,
        d,
        twirl_samples,
        twirl_residual: residual_from_span(&x, &span),
        commutant_dim: null.len(),
        relative_residual: residual_from_span(&refined, &span),
    })
}
