use crate::error::{invalid, Error, Result};
use crate::{CMat, C64};

/// Eigenvalues in ascending order with the matching orthonormal
/// eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

/// Relative gap below which neighbouring eigenvalues count as degenerate
/// for eigenvector tie-breaking.
const TIE_TOL: f64 = 1e-9;

/// Hermitian eigendecomposition with deterministic eigenvectors.
///
/// Each eigenvector has its largest-modulus entry real and positive (the
/// first such entry on ties). Inside a degenerate eigenspace the basis
/// diagonalizes the fixed perturbation diag(1, 2, …, n) restricted to it.
pub fn eigh(h: &CMat) -> Result<Eigh> {
    let n = h.nrows();
    if n == 0 || h.ncols() != n {
        return invalid("eigh needs a nonempty square matrix");
    }
    if h.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return invalid("matrix has non-finite entries");
    }
    let scale = h.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    let defect = (h - h.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if defect > 1e-10 * scale {
        return invalid(format!("matrix is not Hermitian (defect {defect:.3e})"));
    }
    let herm = (h + h.adjoint()) * C64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMat::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);

    let width = (values[n - 1] - values[0]).abs().max(values[n - 1].abs()).max(values[0].abs());
    let tol = TIE_TOL * width.max(f64::MIN_POSITIVE);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[end] - values[end - 1] <= tol {
            end += 1;
        }
        if end - start > 1 {
            resolve_degenerate(&mut vectors, start, end)?;
        }
        start = end;
    }
    for c in 0..n {
        fix_phase(&mut vectors, c);
    }
    Ok(Eigh { values, vectors })
}

fn resolve_degenerate(vectors: &mut CMat, start: usize, end: usize) -> Result<()> {
    let n = vectors.nrows();
    let q = vectors.columns(start, end - start).into_owned();
    let weights = CMat::from_diagonal(&nalgebra::DVector::from_fn(n, |i, _| C64::new((i + 1) as f64, 0.0)));
    let inner = q.adjoint() * weights * &q;
    let inner = (&inner + inner.adjoint()) * C64::new(0.5, 0.0);
    let sub = inner.symmetric_eigen();
    let mut order: Vec<usize> = (0..end - start).collect();
    order.sort_by(|&a, &b| sub.eigenvalues[a].total_cmp(&sub.eigenvalues[b]));
    let rot = CMat::from_fn(end - start, end - start, |r, c| sub.eigenvectors[(r, order[c])]);
    let rotated = q * rot;
    if rotated.iter().any(|z| !z.re.is_finite()) {
        return Err(Error::NumericalDegeneracy("degenerate eigenspace rotation failed".into()));
    }
    vectors.columns_mut(start, end - start).copy_from(&rotated);
    Ok(())
}

fn fix_phase(vectors: &mut CMat, c: usize) {
    let mut best = 0;
    let mut best_mod = -1.0;
    for r in 0..vectors.nrows() {
        let m = vectors[(r, c)].norm();
        // Ties within rounding go to the first index.
        if m > best_mod * (1.0 + 1e-12) {
            best = r;
            best_mod = m;
        }
    }
    if best_mod > 0.0 {
        let phase = vectors[(best, c)].conj() / best_mod;
        for r in 0..vectors.nrows() {
            vectors[(r, c)] *= phase;
        }
        vectors[(best, c)] = C64::new(vectors[(best, c)].norm(), 0.0);
    }
}
