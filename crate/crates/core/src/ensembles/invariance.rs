//! Statistical test of conjugation invariance for a batch of samples.
//!
//! The batch's Hermitian coordinates are projected onto the subspace they
//! span (found by streaming Gram–Schmidt), so ensembles confined to a few
//! directions, such as the Heisenberg model, stay cheap. With P the
//! orthonormal basis of that subspace, R the adjoint action of the
//! conjugating unitary and C the empirical covariance in P-coordinates,
//!
//!   ‖P C Pᵀ − R P C Pᵀ Rᵀ‖²_F = 2‖C‖² − 2 tr(C G C Gᵀ),  G = Pᵀ R P.
//!
//! The same functional applied to bootstrap deviations C* − C gives the
//! scale of Monte-Carlo fluctuation.

use crate::error::{invalid, too_big, Result};
use crate::seed::Rng;
use crate::tensor::{unvec_h, vec_h_unchecked};
use crate::{CMat, RMat, RVec};
use rand::Rng as _;
use rayon::prelude::*;
use serde::Serialize;

/// Largest coordinate subspace the test will handle.
pub const MAX_INVARIANCE_RANK: usize = 1024;
/// The test passes when distance < FACTOR · bootstrap RMS.
pub const INVARIANCE_FACTOR: f64 = 3.0;

#[derive(Clone, Debug, Serialize)]
pub struct CovarianceInvariance {
    pub samples: usize,
    pub coordinate_rank: usize,
    pub bootstrap: usize,
    pub distance: f64,
    pub bootstrap_rms: f64,
    pub ratio: f64,
    pub passed: bool,
}

fn span_basis<F>(count: usize, sample: &F) -> Result<Vec<RVec>>
where
    F: Fn(usize) -> Result<CMat>,
{
    let mut basis: Vec<RVec> = Vec::new();
    for i in 0..count {
        let v = vec_h_unchecked(&sample(i)?);
        if basis.len() == v.len() {
            break;
        }
        let norm = v.norm();
        if norm == 0.0 {
            continue;
        }
        let mut r = v;
        for _ in 0..2 {
            for p in &basis {
                let c = p.dot(&r);
                r.axpy(-c, p, 1.0);
            }
        }
        let rn = r.norm();
        if rn > 1e-9 * norm {
            if basis.len() == MAX_INVARIANCE_RANK {
                return too_big(format!("sample span exceeds {MAX_INVARIANCE_RANK} coordinates"));
            }
            basis.push(r / rn);
        }
    }
    Ok(basis)
}

fn mismatch(a: &RMat, g: &RMat) -> f64 {
    let x = a * g;
    let y = a * g.transpose();
    // tr(X Y) = Σ X_ij Y_ji
    let cross = x.dot(&y.transpose());
    2.0 * a.norm_squared() - 2.0 * cross
}

fn weighted_covariance(y: &RMat, weights: &[f64]) -> RMat {
    let n: f64 = weights.iter().sum();
    let mut mean = RVec::zeros(y.ncols());
    let mut scaled = y.clone();
    for (i, &w) in weights.iter().enumerate() {
        mean.axpy(w / n, &y.row(i).transpose(), 1.0);
        scaled.row_mut(i).scale_mut(w);
    }
    let second = scaled.transpose() * y;
    (second - &mean * mean.transpose() * n) / (n - 1.0)
}

/// Tests whether the empirical covariance of `samples` is invariant under
/// H → W H W† for the unitary `conjugator`.
pub fn covariance_invariance_test(
    samples: &[CMat],
    conjugator: &CMat,
    bootstrap: usize,
    rng: &mut Rng,
) -> Result<CovarianceInvariance> {
    covariance_invariance_streaming(samples.len(), |i| Ok(samples[i].clone()), conjugator, bootstrap, rng)
}

/// Streaming form of [`covariance_invariance_test`]: `sample(i)` must return
/// the same matrix every time it is called with the same index. Samples are
/// produced twice and never held in memory together.
pub fn covariance_invariance_streaming<F>(
    count: usize,
    sample: F,
    conjugator: &CMat,
    bootstrap: usize,
    rng: &mut Rng,
) -> Result<CovarianceInvariance>
where
    F: Fn(usize) -> Result<CMat> + Sync,
{
    if count < 3 {
        return invalid("the invariance test needs at least 3 samples");
    }
    if bootstrap < 2 {
        return invalid("the invariance test needs at least 2 bootstrap replicates");
    }
    let n = conjugator.nrows();
    if conjugator.ncols() != n {
        return invalid("conjugator must be square");
    }
    if (conjugator.adjoint() * conjugator - CMat::identity(n, n)).norm() > 1e-10 * (n as f64) {
        return invalid("conjugator is not unitary");
    }
    let checked = |i: usize| -> Result<CMat> {
        let h = sample(i)?;
        if h.shape() != (n, n) {
            return invalid("samples and conjugator must share one square shape");
        }
        Ok(h)
    };
    let basis = span_basis(count, &checked)?;
    let r = basis.len();
    if r == 0 {
        return Ok(CovarianceInvariance {
            samples: count,
            coordinate_rank: 0,
            bootstrap,
            distance: 0.0,
            bootstrap_rms: 0.0,
            ratio: 0.0,
            passed: true,
        });
    }
    let p = RMat::from_columns(&basis);
    let rows: Vec<RVec> =
        (0..count).into_par_iter().map(|i| Ok(p.tr_mul(&vec_h_unchecked(&checked(i)?)))).collect::<Result<_>>()?;
    let mut y = RMat::zeros(count, r);
    for (i, row) in rows.iter().enumerate() {
        y.row_mut(i).tr_copy_from(row);
    }
    let wd = conjugator.adjoint();
    let mut q = RMat::zeros(p.nrows(), r);
    for (j, col) in basis.iter().enumerate() {
        let m = unvec_h(col)?;
        q.set_column(j, &vec_h_unchecked(&(conjugator * m * &wd)));
    }
    let g = p.transpose() * q;

    let ones = vec![1.0; count];
    let c = weighted_covariance(&y, &ones);
    let distance = mismatch(&c, &g).max(0.0).sqrt();

    let mut acc = 0.0;
    let mut weights = vec![0.0; count];
    for _ in 0..bootstrap {
        weights.iter_mut().for_each(|w| *w = 0.0);
        for _ in 0..count {
            weights[rng.random_range(0..count)] += 1.0;
        }
        let dev = weighted_covariance(&y, &weights) - &c;
        acc += mismatch(&dev, &g).max(0.0);
    }
    let bootstrap_rms = (acc / bootstrap as f64).sqrt();
    let ratio = if bootstrap_rms > 0.0 {
        distance / bootstrap_rms
    } else if distance > 0.0 {
        f64::INFINITY
    } else {
        0.0
    };
    Ok(CovarianceInvariance {
        samples: count,
        coordinate_rank: r,
        bootstrap,
        distance,
        bootstrap_rms,
        ratio,
        passed: ratio < INVARIANCE_FACTOR,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{haar_unitary, sample_gue};
    use crate::seed::rng;
    use crate::C64;

    #[test]
    fn mismatch_matches_direct_computation() {
        let mut r = rng(1);
        let samples: Vec<CMat> = (0..40).map(|_| sample_gue(3, 1.0, &mut r).unwrap()).collect();
        let w = haar_unitary(3, &mut r).unwrap();
        let basis = span_basis(samples.len(), &|i| Ok(samples[i].clone())).unwrap();
        assert_eq!(basis.len(), 9);
        let p = RMat::from_columns(&basis);
        let rot = crate::tensor::adjoint_action_matrix(&w).unwrap();
        let c = RMat::from_fn(9, 9, |i, j| ((i * 7 + j * 3) % 5) as f64 + if i == j { 4.0 } else { 0.0 });
        let c = &c + c.transpose();
        let full = &p * &c * p.transpose();
        let direct = (&full - &rot * &full * rot.transpose()).norm_squared();
        let g = p.transpose() * &rot * &p;
        assert!((mismatch(&c, &g) - direct).abs() < 1e-9 * direct.max(1.0));
    }

    #[test]
    fn gue_is_invariant_and_skewed_ensemble_is_not() {
        let mut r = rng(2);
        let w = haar_unitary(3, &mut r).unwrap();
        let gue: Vec<CMat> = (0..3000).map(|_| sample_gue(3, 1.0, &mut r).unwrap()).collect();
        let t = covariance_invariance_test(&gue, &w, 32, &mut r).unwrap();
        assert!(t.passed, "{t:?}");
        // Inflating one diagonal entry breaks unitary invariance.
        let skewed: Vec<CMat> = gue
            .iter()
            .map(|h| {
                let mut h = h.clone();
                h[(0, 0)] *= C64::new(3.0, 0.0);
                h
            })
            .collect();
        let t = covariance_invariance_test(&skewed, &w, 32, &mut r).unwrap();
        assert!(!t.passed, "{t:?}");
    }
}
