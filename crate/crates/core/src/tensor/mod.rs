//! Dense operators on tensor-product spaces (C^d)^{⊗legs}.
//!
//! Basis states |i₁…i_m⟩ are indexed by Σ_l i_l·d^{m-1-l}: leg 0 is the
//! slowest-varying digit. Matrices are nalgebra `DMatrix<Complex64>`, so
//! `as_slice()` of an operator is its column-stacked vectorization.

mod hermitian;
mod schmidt;

pub use hermitian::{
    adjoint_action_matrix, complex_vec, transpose_action_signs, unvec_c, unvec_h, vec_h, vec_h_unchecked,
    HermitianBasis, HermitianKind,
};
pub use schmidt::{operator_schmidt, SchmidtDecomposition};

use crate::error::{invalid, too_big, Error, Result};
use crate::perm::Permutation;
use crate::{CMat, C64};

/// Largest operator dimension handled densely.
pub const MAX_DENSE_DIM: usize = 4096;

/// d^legs with overflow and size checks.
pub fn tensor_dim(d: usize, legs: usize) -> Result<usize> {
    if d == 0 || legs == 0 {
        return invalid(format!("tensor dimension needs d >= 1 and legs >= 1 (got d={d}, legs={legs})"));
    }
    let n = d.checked_pow(legs as u32).ok_or_else(|| Error::ResourceLimit(format!("{d}^{legs} overflows")))?;
    Ok(n)
}

/// Digits of `index` in base `d`, leg 0 first.
pub fn digits(mut index: usize, d: usize, legs: usize) -> Vec<usize> {
    let mut out = vec![0; legs];
    for l in (0..legs).rev() {
        out[l] = index % d;
        index /= d;
    }
    out
}

pub fn index_of(digits: &[usize], d: usize) -> usize {
    digits.iter().fold(0, |acc, &x| acc * d + x)
}

/// Index map of Ŝ_σ: Ŝ_σ e_i = e_{map[i]}, where the output digits are
/// j_l = i_{σ(l)}.
pub fn leg_permutation_map(sigma: &Permutation, d: usize) -> Result<Vec<usize>> {
    let k = sigma.degree();
    let n = tensor_dim(d, k)?;
    Ok((0..n)
        .map(|i| {
            let di = digits(i, d, k);
            let dj: Vec<usize> = (0..k).map(|l| di[sigma.image(l)]).collect();
            index_of(&dj, d)
        })
        .collect())
}

/// A dense square operator on (C^d)^{⊗legs}.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorOperator {
    matrix: CMat,
    local_dim: usize,
    legs: usize,
}

impl TensorOperator {
    pub fn new(matrix: CMat, local_dim: usize, legs: usize) -> Result<Self> {
        let n = tensor_dim(local_dim, legs)?;
        if matrix.nrows() != n || matrix.ncols() != n {
            return invalid(format!(
                "operator of shape {}x{} does not act on ({local_dim})^{legs} = {n}",
                matrix.nrows(),
                matrix.ncols()
            ));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NumericalDegeneracy("operator has non-finite entries".into()));
        }
        Ok(TensorOperator { matrix, local_dim, legs })
    }

    pub fn identity(local_dim: usize, legs: usize) -> Result<Self> {
        let n = tensor_dim(local_dim, legs)?;
        Ok(TensorOperator { matrix: CMat::identity(n, n), local_dim, legs })
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMat {
        self.matrix
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn legs(&self) -> usize {
        self.legs
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn adjoint(&self) -> Self {
        TensorOperator { matrix: self.matrix.adjoint(), ..*self }
    }

    fn same_space(&self, other: &Self, what: &str) -> Result<()> {
        if self.local_dim != other.local_dim || self.legs != other.legs {
            return invalid(format!(
                "{what}: operators act on ({})^{} and ({})^{}",
                self.local_dim, self.legs, other.local_dim, other.legs
            ));
        }
        Ok(())
    }

    /// Operator product `self · other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.same_space(other, "compose")?;
        Ok(TensorOperator { matrix: &self.matrix * &other.matrix, ..*self })
    }

    /// `self ⊗ other`; both factors must share the local dimension.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        if self.local_dim != other.local_dim {
            return invalid("kron: local dimensions differ");
        }
        let n = self.dim() * other.dim();
        if n > MAX_DENSE_DIM {
            return too_big(format!("kron result of dimension {n} exceeds {MAX_DENSE_DIM}"));
        }
        Ok(TensorOperator {
            matrix: self.matrix.kronecker(&other.matrix),
            local_dim: self.local_dim,
            legs: self.legs + other.legs,
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.norm()
    }

    /// ‖[self, other]‖_F.
    pub fn commutator_norm(&self, other: &Self) -> Result<f64> {
        self.same_space(other, "commutator")?;
        Ok((&self.matrix * &other.matrix - &other.matrix * &self.matrix).norm())
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }
}

/// The permutation operator Ŝ_σ|i₁…i_k⟩ = |i_{σ(1)}…i_{σ(k)}⟩ on (C^d)^{⊗k}.
///
/// With the left-to-right product of [`Permutation::then`],
/// Ŝ_a·Ŝ_b = Ŝ_{a.then(b)}.
pub fn permutation_operator(sigma: &Permutation, d: usize) -> Result<TensorOperator> {
    let k = sigma.degree();
    let n = tensor_dim(d, k)?;
    if n > MAX_DENSE_DIM {
        return too_big(format!("permutation operator of dimension {n} exceeds {MAX_DENSE_DIM}"));
    }
    let map = leg_permutation_map(sigma, d)?;
    let mut m = CMat::zeros(n, n);
    for (i, &j) in map.iter().enumerate() {
        m[(j, i)] = C64::new(1.0, 0.0);
    }
    TensorOperator::new(m, d, k)
}

/// The operator T̂ on (C^d)^{⊗2k} exchanging legs 0..k with legs k..2k.
pub fn half_swap(k: usize, d: usize) -> Result<TensorOperator> {
    if k == 0 {
        return invalid("half_swap requires k >= 1");
    }
    let tau = Permutation::from_images((0..2 * k).map(|l| (l + k) % (2 * k)).collect())?;
    permutation_operator(&tau, d)
}

/// U^{⊗k} for a square matrix U.
pub fn kron_power(u: &CMat, k: usize) -> Result<CMat> {
    if k == 0 {
        return invalid("kron_power requires k >= 1");
    }
    let n = u
        .nrows()
        .checked_pow(k as u32)
        .filter(|&n| n <= MAX_DENSE_DIM)
        .ok_or_else(|| Error::ResourceLimit(format!("{}^{k} exceeds {MAX_DENSE_DIM}", u.nrows())))?;
    let mut out = u.clone();
    for _ in 1..k {
        out = out.kronecker(u);
    }
    debug_assert_eq!(out.nrows(), n);
    Ok(out)
}

fn validate_legs(legs: &[usize], total: usize, what: &str) -> Result<Vec<bool>> {
    let mut mask = vec![false; total];
    for &l in legs {
        if l >= total || mask[l] {
            return invalid(format!("{what}: leg list {legs:?} invalid for {total} legs"));
        }
        mask[l] = true;
    }
    Ok(mask)
}

/// Splits every basis index into the compact indices of its `mask` legs
/// and of the remaining legs (both in leg order).
fn split_indices(d: usize, legs: usize, mask: &[bool]) -> Vec<(usize, usize)> {
    let n = d.pow(legs as u32);
    (0..n)
        .map(|i| {
            let di = digits(i, d, legs);
            let (mut a, mut b) = (0, 0);
            for (l, &x) in di.iter().enumerate() {
                if mask[l] {
                    a = a * d + x;
                } else {
                    b = b * d + x;
                }
            }
            (a, b)
        })
        .collect()
}

/// Traces out every leg not listed in `kept`; the result acts on the kept
/// legs in increasing leg order.
pub fn partial_trace(op: &TensorOperator, kept: &[usize]) -> Result<TensorOperator> {
    if kept.is_empty() {
        return invalid("partial_trace: the kept subset is empty");
    }
    let (d, legs) = (op.local_dim, op.legs);
    let mask = validate_legs(kept, legs, "partial_trace")?;
    let nk = d.pow(kept.len() as u32);
    let nt = op.dim() / nk;
    // Group the full indices by their traced part.
    let mut by_traced = vec![Vec::with_capacity(nk); nt];
    for (i, (a, b)) in split_indices(d, legs, &mask).into_iter().enumerate() {
        by_traced[b].push((i, a));
    }
    let m = &op.matrix;
    let mut out = CMat::zeros(nk, nk);
    for group in &by_traced {
        for &(i, a) in group {
            for &(j, c) in group {
                out[(a, c)] += m[(i, j)];
            }
        }
    }
    TensorOperator::new(out, d, kept.len())
}

/// Transposes the listed legs only (row and column digits exchanged on them).
pub fn partial_transpose(op: &TensorOperator, legs_t: &[usize]) -> Result<TensorOperator> {
    let (d, legs) = (op.local_dim, op.legs);
    let mask = validate_legs(legs_t, legs, "partial_transpose")?;
    // index = a-part + b-part with the a-part carried by the transposed legs.
    let parts: Vec<(usize, usize)> = (0..op.dim())
        .map(|i| {
            let di = digits(i, d, legs);
            let mut a = 0;
            let mut place = 1;
            for l in (0..legs).rev() {
                if mask[l] {
                    a += di[l] * place;
                }
                place *= d;
            }
            (a, i - a)
        })
        .collect();
    let n = op.dim();
    let m = &op.matrix;
    let out = CMat::from_fn(n, n, |i, j| {
        let (ai, bi) = parts[i];
        let (aj, bj) = parts[j];
        m[(bi + aj, bj + ai)]
    });
    TensorOperator::new(out, d, legs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng;
    use rand::Rng as _;

    fn random_op(n: usize, seed: u64) -> CMat {
        let mut r = rng(seed);
        CMat::from_fn(n, n, |_, _| C64::new(r.random::<f64>() - 0.5, r.random::<f64>() - 0.5))
    }

    #[test]
    fn swap_acts_on_basis_states() {
        let s = permutation_operator(&Permutation::transposition(2, 0, 1).unwrap(), 2).unwrap();
        // e0⊗e1 has index 1, e1⊗e0 has index 2.
        let mut v = crate::CVec::zeros(4);
        v[1] = C64::new(1.0, 0.0);
        let w = s.matrix() * v;
        assert_eq!(w[2], C64::new(1.0, 0.0));
        assert_eq!(w.iter().filter(|z| z.norm() > 0.0).count(), 1);
    }

    #[test]
    fn traces_count_cycles() {
        for k in 1..=4 {
            for d in 1..=4 {
                for s in Permutation::all(k) {
                    let op = permutation_operator(&s, d).unwrap();
                    let expected = (d as f64).powi(s.cycle_count() as i32);
                    assert!((op.trace().re - expected).abs() < 1e-12);
                    let u = op.matrix() * op.matrix().adjoint();
                    assert!((u - CMat::identity(op.dim(), op.dim())).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn representation_property() {
        let all = Permutation::all(3);
        for a in &all {
            for b in &all {
                let lhs = permutation_operator(a, 2).unwrap().compose(&permutation_operator(b, 2).unwrap()).unwrap();
                let rhs = permutation_operator(&a.then(b), 2).unwrap();
                assert!((lhs.matrix() - rhs.matrix()).norm() < 1e-12, "{a} {b}");
            }
        }
        assert_eq!(permutation_operator(&Permutation::identity(3), 2).unwrap().matrix(), &CMat::identity(8, 8));
    }

    #[test]
    fn half_swap_is_an_involution() {
        let t = half_swap(2, 2).unwrap();
        let tt = t.compose(&t).unwrap();
        assert!((tt.matrix() - CMat::identity(16, 16)).norm() < 1e-12);
        let s = permutation_operator(&Permutation::transposition(2, 0, 1).unwrap(), 3).unwrap();
        assert_eq!(half_swap(1, 3).unwrap(), s);
    }

    #[test]
    fn partial_trace_of_product() {
        let a = TensorOperator::new(random_op(3, 1), 3, 1).unwrap();
        let b = TensorOperator::new(random_op(3, 2), 3, 1).unwrap();
        let ab = a.kron(&b).unwrap();
        let ta = partial_trace(&ab, &[0]).unwrap();
        let expected = a.matrix() * b.trace();
        assert!((ta.matrix() - expected).norm() < 1e-12);
        let tb = partial_trace(&ab, &[1]).unwrap();
        assert!((tb.matrix() - b.matrix() * a.trace()).norm() < 1e-12);
        assert!((partial_trace(&ab, &[0, 1]).unwrap().matrix() - ab.matrix()).norm() < 1e-14);
        assert!(partial_trace(&ab, &[]).is_err());
        assert!(partial_trace(&ab, &[2]).is_err());
    }

    #[test]
    fn partial_trace_of_maximally_entangled_state() {
        // |Ω⟩ = (|00⟩ + |11⟩)/√2, contracted index by index.
        let mut v = crate::CVec::zeros(4);
        v[0] = C64::new(0.5f64.sqrt(), 0.0);
        v[3] = C64::new(0.5f64.sqrt(), 0.0);
        let rho = TensorOperator::new(&v * v.adjoint(), 2, 2).unwrap();
        let red = partial_trace(&rho, &[1]).unwrap();
        assert!((red.matrix() - CMat::identity(2, 2) * C64::new(0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn partial_trace_is_adjoint_of_tensoring_identity() {
        let o = TensorOperator::new(random_op(8, 3), 2, 3).unwrap();
        let x = random_op(4, 4);
        let lhs = (partial_trace(&o, &[0, 1]).unwrap().matrix() * &x).trace();
        let rhs = (o.matrix() * x.kronecker(&CMat::identity(2, 2))).trace();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn partial_transpose_bookkeeping() {
        let a = random_op(2, 5);
        let b = random_op(3, 6);
        let ab = TensorOperator::new(a.kronecker(&b), 1, 1);
        assert!(ab.is_err());
        let a = random_op(3, 5);
        let ab = TensorOperator::new(a.kronecker(&b), 3, 2).unwrap();
        let pt = partial_transpose(&ab, &[1]).unwrap();
        assert!((pt.matrix() - a.kronecker(&b.transpose())).norm() < 1e-14);
        let full = partial_transpose(&ab, &[0, 1]).unwrap();
        assert!((full.matrix() - ab.matrix().transpose()).norm() < 1e-14);
        let back = partial_transpose(&pt, &[1]).unwrap();
        assert_eq!(back, ab);
        assert!(partial_transpose(&ab, &[1, 1]).is_err());
    }
}
