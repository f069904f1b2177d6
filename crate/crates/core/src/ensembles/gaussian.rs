use crate::commutant::PrecisionForm;
use crate::error::{invalid, too_big, Result};
use crate::seed::Rng;
use crate::tensor::{unvec_h, MAX_DENSE_DIM};
use crate::{CMat, RVec, C64};
use rand_distr::{Distribution, StandardNormal};

fn normal(rng: &mut Rng) -> f64 {
    StandardNormal.sample(rng)
}

fn check_scale(scale: f64) -> Result<()> {
    if !(scale > 0.0 && scale.is_finite()) {
        return invalid(format!("scale must be positive and finite, got {scale}"));
    }
    Ok(())
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 {
        return invalid("matrix dimension must be at least 1");
    }
    if n > MAX_DENSE_DIM {
        return too_big(format!("dimension {n} exceeds {MAX_DENSE_DIM}"));
    }
    Ok(())
}

/// GUE draw: diagonal N(0, s²); off-diagonal real and imaginary parts
/// independently N(0, s²/2). Density ∝ exp(−Tr H² / 2s²).
pub fn sample_gue(n: usize, scale: f64, rng: &mut Rng) -> Result<CMat> {
    check_dim(n)?;
    check_scale(scale)?;
    let off = scale * std::f64::consts::FRAC_1_SQRT_2;
    let mut h = CMat::zeros(n, n);
    for i in 0..n {
        h[(i, i)] = C64::new(scale * normal(rng), 0.0);
        for j in i + 1..n {
            let z = C64::new(off * normal(rng), off * normal(rng));
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    Ok(h)
}

/// GOE draw (A + Aᵀ)/√2 with A_ij ~ N(0, s²): off-diagonal variance s²,
/// diagonal variance 2s².
pub fn sample_goe(n: usize, scale: f64, rng: &mut Rng) -> Result<CMat> {
    check_dim(n)?;
    check_scale(scale)?;
    let mut h = CMat::zeros(n, n);
    for i in 0..n {
        h[(i, i)] = C64::new(std::f64::consts::SQRT_2 * scale * normal(rng), 0.0);
        for j in i + 1..n {
            let x = C64::new(scale * normal(rng), 0.0);
            h[(i, j)] = x;
            h[(j, i)] = x;
        }
    }
    Ok(h)
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the
/// phases of R's diagonal moved into Q.
pub fn haar_unitary(n: usize, rng: &mut Rng) -> Result<CMat> {
    check_dim(n)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut g = CMat::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            g[(i, j)] = C64::new(s * normal(rng), s * normal(rng));
        }
    }
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    Ok(q)
}

/// A draw from the k-fold Gaussian ensemble with precision Δ: Hermitian
/// coordinates distributed as N(0, Δ⁻¹).
pub fn sample_kfold(precision: &PrecisionForm, rng: &mut Rng) -> Result<CMat> {
    let coords = precision.dim();
    let z = RVec::from_fn(coords, |_, _| normal(rng));
    unvec_h(&precision.sample_coordinates(&z))
}

/// H₁ ⊗ H₂ ⊗ … of independent GUE draws of the given sizes.
pub fn sample_tensor_product(dims: &[usize], scale: f64, rng: &mut Rng) -> Result<CMat> {
    if dims.is_empty() {
        return invalid("tensor product needs at least one factor");
    }
    let total = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d));
    match total {
        Some(t) if t <= MAX_DENSE_DIM => {}
        _ => return too_big(format!("tensor product of {dims:?} exceeds {MAX_DENSE_DIM}")),
    }
    let mut out = sample_gue(dims[0], scale, rng)?;
    for &d in &dims[1..] {
        out = out.kronecker(&sample_gue(d, scale, rng)?);
    }
    Ok(out)
}

/// H^{⊗k}.
pub fn power_fold(h: &CMat, k: usize) -> Result<CMat> {
    crate::tensor::kron_power(h, k)
}

/// A GUE draw of size n raised to H^{⊗k}.
pub fn sample_power_fold(n: usize, k: usize, scale: f64, rng: &mut Rng) -> Result<CMat> {
    if n.checked_pow(k as u32).is_none_or(|m| m > MAX_DENSE_DIM) {
        return too_big(format!("{n}^{k} exceeds {MAX_DENSE_DIM}"));
    }
    power_fold(&sample_gue(n, scale, rng)?, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng;

    #[test]
    fn gue_entry_variances() {
        let mut r = rng(1);
        let n = 3;
        let draws = 20_000;
        let (mut diag, mut off) = (0.0, 0.0);
        for _ in 0..draws {
            let h = sample_gue(n, 2.0, &mut r).unwrap();
            assert_eq!(h, h.adjoint());
            diag += h[(0, 0)].re.powi(2);
            off += h[(0, 1)].norm_sqr();
        }
        // Both second moments equal s² = 4; relative MC error ~ √(2/N) ≈ 1%.
        assert!((diag / draws as f64 - 4.0).abs() < 0.2);
        assert!((off / draws as f64 - 4.0).abs() < 0.2);
        assert!(sample_gue(3, 0.0, &mut r).is_err());
    }

    #[test]
    fn haar_is_unitary() {
        let mut r = rng(2);
        for n in [1, 2, 5, 16] {
            let u = haar_unitary(n, &mut r).unwrap();
            assert!((u.adjoint() * &u - CMat::identity(n, n)).norm() < 1e-12);
        }
    }

    #[test]
    fn tensor_product_spectrum_is_pairwise_products() {
        let mut r = rng(3);
        let a = sample_gue(2, 1.0, &mut r).unwrap();
        let b = sample_gue(3, 1.0, &mut r).unwrap();
        let ea = a.clone().symmetric_eigen().eigenvalues;
        let eb = b.clone().symmetric_eigen().eigenvalues;
        let mut expected: Vec<f64> = ea.iter().flat_map(|x| eb.iter().map(move |y| x * y)).collect();
        let mut got: Vec<f64> = a.kronecker(&b).symmetric_eigen().eigenvalues.iter().copied().collect();
        expected.sort_by(f64::total_cmp);
        got.sort_by(f64::total_cmp);
        for (x, y) in expected.iter().zip(&got) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn haar_trace_second_moment_is_one() {
        let mut r = rng(4);
        let draws = 100_000;
        let (mut m, mut m2) = (0.0, 0.0);
        for _ in 0..draws {
            let t = haar_unitary(3, &mut r).unwrap().trace().norm_sqr();
            m += t;
            m2 += t * t;
        }
        let mean = m / draws as f64;
        let se = ((m2 / draws as f64 - mean * mean) / draws as f64).sqrt();
        assert!((mean - 1.0).abs() < 5.0 * se, "mean {mean} se {se}");
        // n = 1 is a uniform phase.
        let z = haar_unitary(1, &mut r).unwrap()[(0, 0)];
        assert!((z.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn gue_edge_follows_semicircle() {
        let mut r = rng(5);
        let n = 200;
        let h = sample_gue(n, 1.5, &mut r).unwrap();
        let top = h.symmetric_eigen().eigenvalues.iter().copied().fold(f64::MIN, f64::max);
        let edge = 2.0 * 1.5 * (n as f64).sqrt();
        assert!((top / edge - 1.0).abs() < 0.05, "{top} vs {edge}");
    }

    #[test]
    fn power_fold_spectrum_is_k_fold_products() {
        let mut r = rng(6);
        let h = sample_gue(3, 1.0, &mut r).unwrap();
        let e: Vec<f64> = h.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
        let mut expected: Vec<f64> = e.iter().flat_map(|x| e.iter().map(move |y| x * y)).collect();
        let mut got: Vec<f64> = power_fold(&h, 2).unwrap().symmetric_eigen().eigenvalues.iter().copied().collect();
        expected.sort_by(f64::total_cmp);
        got.sort_by(f64::total_cmp);
        for (x, y) in expected.iter().zip(&got) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!(sample_power_fold(5, 6, 1.0, &mut r).is_err());
    }
}
