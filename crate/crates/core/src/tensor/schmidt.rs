use super::{digits, TensorOperator};
use crate::error::{invalid, Result};
use crate::{CMat, C64};

/// O = Σ_ℓ p_ℓ A_ℓ ⊗ B_ℓ with Tr[A_ℓ†A_m] = Tr[B_ℓ†B_m] = δ_ℓm.
///
/// A_ℓ acts on `left_legs`, B_ℓ on `right_legs`, each in increasing leg order.
#[derive(Clone, Debug)]
pub struct SchmidtDecomposition {
    pub values: Vec<f64>,
    pub left: Vec<CMat>,
    pub right: Vec<CMat>,
    pub left_legs: Vec<usize>,
    pub right_legs: Vec<usize>,
    pub local_dim: usize,
}

impl SchmidtDecomposition {
    /// Number of values above `rel_tol` times the largest.
    pub fn schmidt_number(&self, rel_tol: f64) -> usize {
        let top = self.values.first().copied().unwrap_or(0.0);
        self.values.iter().filter(|&&p| p > rel_tol * top).count()
    }

    pub fn reconstruct(&self) -> Result<TensorOperator> {
        let d = self.local_dim;
        let legs = self.left_legs.len() + self.right_legs.len();
        let (lpart, rpart) = part_indices(d, legs, &self.left_legs);
        let n = lpart.len();
        let m = CMat::from_fn(n, n, |i, j| {
            self.values
                .iter()
                .zip(self.left.iter().zip(&self.right))
                .map(|(&p, (a, b))| a[(lpart[i], lpart[j])] * b[(rpart[i], rpart[j])] * p)
                .sum::<C64>()
        });
        TensorOperator::new(m, d, legs)
    }
}

fn part_indices(d: usize, legs: usize, left: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let n = d.pow(legs as u32);
    let mut lp = Vec::with_capacity(n);
    let mut rp = Vec::with_capacity(n);
    for i in 0..n {
        let di = digits(i, d, legs);
        let (mut a, mut b) = (0, 0);
        for (l, &x) in di.iter().enumerate() {
            if left.contains(&l) {
                a = a * d + x;
            } else {
                b = b * d + x;
            }
        }
        lp.push(a);
        rp.push(b);
    }
    (lp, rp)
}

/// Operator Schmidt decomposition across the bipartition `left_legs` |
/// (the remaining legs), via the SVD of the realigned matrix.
pub fn operator_schmidt(op: &TensorOperator, left_legs: &[usize]) -> Result<SchmidtDecomposition> {
    let (d, legs) = (op.local_dim(), op.legs());
    let mut left: Vec<usize> = left_legs.to_vec();
    left.sort_unstable();
    left.dedup();
    if left.len() != left_legs.len() || left.is_empty() || left.len() >= legs || left.iter().any(|&l| l >= legs) {
        return invalid(format!("operator_schmidt: {left_legs:?} is not a proper bipartition of {legs} legs"));
    }
    let right: Vec<usize> = (0..legs).filter(|l| !left.contains(l)).collect();
    let dl = d.pow(left.len() as u32);
    let dr = d.pow(right.len() as u32);
    let (lpart, rpart) = part_indices(d, legs, &left);
    let m = op.matrix();
    let mut realigned = CMat::zeros(dl * dl, dr * dr);
    for i in 0..op.dim() {
        for j in 0..op.dim() {
            realigned[(lpart[i] * dl + lpart[j], rpart[i] * dr + rpart[j])] = m[(i, j)];
        }
    }
    let svd = realigned.svd(true, true);
    let u = svd.u.expect("u requested");
    let vt = svd.v_t.expect("v_t requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let mut out = SchmidtDecomposition {
        values: Vec::new(),
        left: Vec::new(),
        right: Vec::new(),
        left_legs: left,
        right_legs: right,
        local_dim: d,
    };
    for l in order {
        out.values.push(svd.singular_values[l]);
        out.left.push(CMat::from_fn(dl, dl, |r, c| u[(r * dl + c, l)]));
        out.right.push(CMat::from_fn(dr, dr, |r, c| vt[(l, r * dr + c)]));
    }
    Ok(out)
}
