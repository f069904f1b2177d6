//! Real coordinates for Hermitian matrices.
//!
//! The orthonormal basis (under ⟨A, B⟩ = Tr[A†B]) is ordered as: the n
//! diagonal units E_ii; then (E_ij + E_ji)/√2 for the pairs i < j in
//! row-major order; then (iE_ij − iE_ji)/√2 for the same pairs. The
//! coordinates of H are therefore H_ii, √2·Re H_ij and √2·Im H_ij.

use crate::error::{invalid, too_big, Result};
use crate::{CMat, CVec, RMat, RVec, C64};
use std::f64::consts::FRAC_1_SQRT_2;

/// Which of the three families a basis element belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HermitianKind {
    Diagonal(usize),
    Symmetric(usize, usize),
    Antisymmetric(usize, usize),
}

/// The fixed orthonormal Hermitian basis of n×n matrices.
///
/// Elements are generated on demand; only their (at most two) nonzero
/// entries are ever needed by the numerical code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HermitianBasis {
    n: usize,
}

impl HermitianBasis {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return invalid("hermitian_basis requires n >= 1");
        }
        Ok(HermitianBasis { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of elements, n².
    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn pairs(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    /// Position of the pair (i, j), i < j, in row-major order.
    pub fn pair_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.n);
        i * self.n - i * (i + 1) / 2 + (j - i - 1)
    }

    pub fn kind(&self, a: usize) -> HermitianKind {
        let n = self.n;
        if a < n {
            return HermitianKind::Diagonal(a);
        }
        let p = (a - n) % self.pairs().max(1);
        let symmetric = a - n < self.pairs();
        // Invert the row-major pair numbering.
        let mut i = 0;
        let mut start = 0;
        while start + (n - i - 1) <= p {
            start += n - i - 1;
            i += 1;
        }
        let j = i + 1 + (p - start);
        if symmetric {
            HermitianKind::Symmetric(i, j)
        } else {
            HermitianKind::Antisymmetric(i, j)
        }
    }

    /// Nonzero entries (row, col, value) of element `a`.
    pub fn entries(&self, a: usize) -> Vec<(usize, usize, C64)> {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        let ih = C64::new(0.0, FRAC_1_SQRT_2);
        match self.kind(a) {
            HermitianKind::Diagonal(i) => vec![(i, i, C64::new(1.0, 0.0))],
            HermitianKind::Symmetric(i, j) => vec![(i, j, h), (j, i, h)],
            HermitianKind::Antisymmetric(i, j) => vec![(i, j, ih), (j, i, -ih)],
        }
    }

    /// Nonzero entries of complex_vec(element a): (vec index, value).
    pub fn vec_entries(&self, a: usize) -> Vec<(usize, C64)> {
        self.entries(a).into_iter().map(|(r, c, v)| (c * self.n + r, v)).collect()
    }

    pub fn element(&self, a: usize) -> CMat {
        let mut m = CMat::zeros(self.n, self.n);
        for (r, c, v) in self.entries(a) {
            m[(r, c)] = v;
        }
        m
    }

    /// All n² elements as dense matrices (n ≤ 32).
    pub fn matrices(&self) -> Result<Vec<CMat>> {
        if self.n > 32 {
            return too_big(format!("dense Hermitian basis for n = {} (limit 32)", self.n));
        }
        Ok((0..self.len()).map(|a| self.element(a)).collect())
    }
}

fn hermiticity_defect(h: &CMat) -> f64 {
    let scale = h.iter().map(|z| z.norm()).fold(1.0, f64::max);
    (h - h.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max) / scale
}

/// Coordinates of a Hermitian matrix in the fixed basis.
pub fn vec_h(h: &CMat) -> Result<RVec> {
    if !h.is_square() {
        return invalid("vec_h: matrix is not square");
    }
    let defect = hermiticity_defect(h);
    if defect > 1e-10 {
        return invalid(format!("vec_h: matrix is not Hermitian (relative defect {defect:e})"));
    }
    Ok(vec_h_unchecked(h))
}

/// [`vec_h`] without the Hermiticity check; reads the diagonal and the
/// upper triangle only.
pub fn vec_h_unchecked(h: &CMat) -> RVec {
    let n = h.nrows();
    let pairs = n * (n - 1) / 2;
    let mut v = RVec::zeros(n * n);
    for i in 0..n {
        v[i] = h[(i, i)].re;
    }
    let s2 = std::f64::consts::SQRT_2;
    let mut p = 0;
    for i in 0..n {
        for j in i + 1..n {
            v[n + p] = s2 * h[(i, j)].re;
            v[n + pairs + p] = s2 * h[(i, j)].im;
            p += 1;
        }
    }
    v
}

/// Inverse of [`vec_h`].
pub fn unvec_h(v: &RVec) -> Result<CMat> {
    let len = v.len();
    let n = (len as f64).sqrt().round() as usize;
    if n * n != len || n == 0 {
        return invalid(format!("unvec_h: length {len} is not a positive square"));
    }
    let pairs = n * (n - 1) / 2;
    let mut h = CMat::zeros(n, n);
    for i in 0..n {
        h[(i, i)] = C64::new(v[i], 0.0);
    }
    let mut p = 0;
    for i in 0..n {
        for j in i + 1..n {
            let z = C64::new(v[n + p], v[n + pairs + p]) * FRAC_1_SQRT_2;
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
            p += 1;
        }
    }
    Ok(h)
}

/// Column-stacking vectorization: vec(H)[c·n + r] = H[r, c], so that
/// vec(ABC) = (Cᵀ ⊗ A)·vec(B).
pub fn complex_vec(h: &CMat) -> CVec {
    CVec::from_column_slice(h.as_slice())
}

/// Inverse of [`complex_vec`] for an n×n matrix.
pub fn unvec_c(v: &CVec, n: usize) -> Result<CMat> {
    if v.len() != n * n {
        return invalid(format!("unvec_c: length {} is not {n}²", v.len()));
    }
    Ok(CMat::from_column_slice(n, n, v.as_slice()))
}

/// The real orthogonal matrix R with vec_h(U H U†) = R·vec_h(H).
pub fn adjoint_action_matrix(u: &CMat) -> Result<RMat> {
    let n = u.nrows();
    if !u.is_square() || n == 0 {
        return invalid("adjoint_action_matrix: U must be square and nonempty");
    }
    if n * n > super::MAX_DENSE_DIM {
        return too_big(format!("adjoint action on {n}x{n} matrices exceeds the coordinate cap"));
    }
    let defect = (u.adjoint() * u - CMat::identity(n, n)).norm();
    if defect > 1e-10 * (n as f64).sqrt() {
        return invalid(format!("adjoint_action_matrix: U is not unitary (defect {defect:e})"));
    }
    let basis = HermitianBasis::new(n)?;
    let mut r = RMat::zeros(n * n, n * n);
    for b in 0..n * n {
        let mut img = CMat::zeros(n, n);
        for (row, col, v) in basis.entries(b) {
            // v · U e_row e_colᵀ U† = v · u_row ⊗ conj(u_col)ᵀ
            img.ger(v, &u.column(row), &u.column(col).map(|z| z.conj()), C64::new(1.0, 0.0));
        }
        r.set_column(b, &vec_h_unchecked(&img));
    }
    Ok(r)
}

/// The action of H → Hᵀ on coordinates: +1 on diagonal and symmetric
/// elements, −1 on antisymmetric ones.
pub fn transpose_action_signs(n: usize) -> RVec {
    let pairs = n * (n - 1) / 2;
    RVec::from_fn(n * n, |a, _| if a >= n + pairs { -1.0 } else { 1.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng;
    use rand::Rng as _;

    fn random_hermitian(n: usize, seed: u64) -> CMat {
        let mut r = rng(seed);
        let a = CMat::from_fn(n, n, |_, _| C64::new(r.random::<f64>() - 0.5, r.random::<f64>() - 0.5));
        (&a + a.adjoint()) * C64::new(0.5, 0.0)
    }

    #[test]
    fn basis_is_orthonormal_and_hermitian() {
        for n in 1..=5 {
            let b = HermitianBasis::new(n).unwrap();
            let mats = b.matrices().unwrap();
            assert_eq!(mats.len(), n * n);
            for (i, x) in mats.iter().enumerate() {
                assert_eq!(x, &x.adjoint());
                for (j, y) in mats.iter().enumerate() {
                    let g = (x.adjoint() * y).trace();
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!((g - C64::new(expected, 0.0)).norm() < 1e-12);
                }
            }
        }
        assert!(HermitianBasis::new(0).is_err());
    }

    #[test]
    fn kinds_invert_the_pair_numbering() {
        let b = HermitianBasis::new(5).unwrap();
        for i in 0..5 {
            for j in i + 1..5 {
                let p = b.pair_index(i, j);
                assert_eq!(b.kind(5 + p), HermitianKind::Symmetric(i, j));
                assert_eq!(b.kind(5 + 10 + p), HermitianKind::Antisymmetric(i, j));
            }
        }
    }

    #[test]
    fn coordinates_round_trip_and_are_isometric() {
        for n in [1, 2, 3, 7] {
            let h = random_hermitian(n, n as u64);
            let v = vec_h(&h).unwrap();
            assert!((unvec_h(&v).unwrap() - &h).norm() < 1e-12);
            let tr = (&h * &h).trace().re;
            assert!((v.norm_squared() - tr).abs() < 1e-12);
            // Coordinates are the inner products with the basis elements.
            let b = HermitianBasis::new(n).unwrap();
            for a in 0..n * n {
                let c = (b.element(a) * &h).trace();
                assert!((c.re - v[a]).abs() < 1e-12 && c.im.abs() < 1e-12);
            }
        }
        let mut bad = CMat::identity(2, 2);
        bad[(0, 1)] = C64::new(1.0, 0.0);
        assert!(vec_h(&bad).is_err());
    }

    #[test]
    fn vectorization_identity() {
        let mut r = rng(9);
        let mut m = || CMat::from_fn(3, 3, |_, _| C64::new(r.random::<f64>(), r.random::<f64>()));
        let (a, b, c) = (m(), m(), m());
        let lhs = complex_vec(&(&a * &b * &c));
        let rhs = c.transpose().kronecker(&a) * complex_vec(&b);
        assert!((lhs - rhs).norm() < 1e-12);
        assert_eq!(unvec_c(&complex_vec(&a), 3).unwrap(), a);
    }

    #[test]
    fn adjoint_action_is_orthogonal() {
        let n = 3;
        let h = random_hermitian(n, 11);
        let x = random_hermitian(n, 12);
        // A unitary from the exponential of a Hermitian generator.
        let eig = x.clone().symmetric_eigen();
        let phases = eig.eigenvalues.map(|t| C64::from_polar(1.0, t));
        let u = &eig.eigenvectors * CMat::from_diagonal(&phases) * eig.eigenvectors.adjoint();
        let r = adjoint_action_matrix(&u).unwrap();
        assert!((r.transpose() * &r - RMat::identity(9, 9)).norm() < 1e-10);
        let lhs = vec_h(&(&u * &h * u.adjoint())).unwrap();
        assert!((lhs - &r * vec_h(&h).unwrap()).norm() < 1e-12);
        assert!((adjoint_action_matrix(&CMat::identity(n, n)).unwrap() - RMat::identity(9, 9)).norm() < 1e-14);
        assert!(adjoint_action_matrix(&(CMat::identity(2, 2) * C64::new(2.0, 0.0))).is_err());
    }

    #[test]
    fn transpose_signs_match_conjugation() {
        let h = random_hermitian(4, 13);
        let lhs = vec_h(&h.transpose()).unwrap();
        let rhs = vec_h(&h).unwrap().component_mul(&transpose_action_signs(4));
        assert!((lhs - rhs).norm() < 1e-14);
    }
}
