use super::sparse::{brauer_operator, key, span_basis, unkey, LegGroup, SpanRank, SparseOp};
use crate::error::{invalid, too_big, Result};
use crate::perm::Permutation;
use crate::tensor::{tensor_dim, HermitianBasis, TensorOperator};
use crate::{CMat, C64};
use serde::{Deserialize, Serialize};

/// Largest d^{2k} accepted by the commutant constructions.
pub const MAX_VEC_DIM: usize = 4096;

/// Weighting of the diagonal permutation conjugations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PermutationSign {
    #[default]
    Trivial,
    Sign,
}

/// Which symmetries the precision matrix must respect, on top of the
/// k-fold unitary invariance that is always imposed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintSet {
    pub k: usize,
    pub d: usize,
    #[serde(default)]
    pub include_permutation_symmetry: bool,
    #[serde(default)]
    pub permutation_sign: PermutationSign,
    #[serde(default)]
    pub include_half_swap: bool,
}

impl ConstraintSet {
    /// Unitary invariance only.
    pub fn unitary(k: usize, d: usize) -> Self {
        ConstraintSet {
            k,
            d,
            include_permutation_symmetry: false,
            permutation_sign: PermutationSign::Trivial,
            include_half_swap: false,
        }
    }

    /// Unitary invariance, diagonal permutation symmetry and the half swap.
    pub fn all(k: usize, d: usize) -> Self {
        ConstraintSet { include_permutation_symmetry: true, include_half_swap: true, ..ConstraintSet::unitary(k, d) }
    }

    pub fn with_permutations(mut self, sign: PermutationSign) -> Self {
        self.include_permutation_symmetry = true;
        self.permutation_sign = sign;
        self
    }

    pub fn with_half_swap(mut self) -> Self {
        self.include_half_swap = true;
        self
    }

    /// Short label such as `U+S+T` or `U+S(sign)`.
    pub fn label(&self) -> String {
        let mut s = String::from("U");
        if self.include_permutation_symmetry {
            s.push_str(match self.permutation_sign {
                PermutationSign::Trivial => "+S",
                PermutationSign::Sign => "+S(sign)",
            });
        }
        if self.include_half_swap {
            s.push_str("+T");
        }
        s
    }

    pub fn validate(&self) -> Result<usize> {
        if self.k == 0 || self.d == 0 {
            return invalid("constraint set needs k >= 1 and d >= 1");
        }
        if self.permutation_sign == PermutationSign::Sign && !self.include_permutation_symmetry {
            return invalid("permutation_sign = sign requires include_permutation_symmetry");
        }
        let n2 = tensor_dim(self.d, 2 * self.k)?;
        if n2 > MAX_VEC_DIM {
            return too_big(format!("d^(2k) = {n2} exceeds {MAX_VEC_DIM}"));
        }
        Ok(n2)
    }

    pub(crate) fn group(&self) -> Result<LegGroup> {
        LegGroup::new(
            self.k,
            self.d,
            self.include_permutation_symmetry,
            self.permutation_sign == PermutationSign::Sign,
            self.include_half_swap,
        )
    }
}

/// The mixed-commutant operators Ŝ_π^Γ (π ∈ S_{2k}, Γ = transpose of legs
/// k..2k) as sparse matrices, in the order of [`Permutation::all`].
pub fn mixed_commutant_sparse(k: usize, d: usize) -> Result<Vec<SparseOp>> {
    ConstraintSet::unitary(k, d).validate()?;
    Permutation::all(2 * k).iter().map(|pi| brauer_operator(pi, d, true)).collect()
}

/// Dense form of [`mixed_commutant_sparse`]. Each operator commutes with
/// U^{⊗k} ⊗ Ū^{⊗k} (and with Ū^{⊗k} ⊗ U^{⊗k}) for every unitary U.
pub fn mixed_commutant_basis(k: usize, d: usize) -> Result<Vec<TensorOperator>> {
    let n2 = ConstraintSet::unitary(k, d).validate()?;
    let count = crate::repcore::factorial(2 * k)? as usize;
    let bytes = count.saturating_mul(n2 * n2).saturating_mul(16);
    if bytes > 1 << 30 {
        return too_big(format!("{count} dense operators of dimension {n2} need {bytes} bytes"));
    }
    mixed_commutant_sparse(k, d)?
        .into_iter()
        .map(|op| TensorOperator::new(op.to_dense().map(|x| C64::new(x, 0.0)), d, 2 * k))
        .collect()
}

/// A symmetrized commutant: its complex span and the real-symmetric
/// quadratic forms it induces on Hermitian coordinates.
#[derive(Clone, Debug)]
pub struct InvariantFamily {
    pub constraints: ConstraintSet,
    /// Orthonormal (Frobenius) real basis of the complex span, acting on
    /// the column-stacked vectorization space C^{d^{2k}}.
    pub complex_basis: Vec<SparseOp>,
    pub complex_rank: SpanRank,
    /// Orthonormal real-symmetric forms on the d^{2k} Hermitian coordinates.
    pub basis: Vec<SparseOp>,
    pub hermitian_rank: SpanRank,
}

impl InvariantFamily {
    pub fn complex_commutant_dim(&self) -> usize {
        self.complex_rank.rank
    }

    pub fn hermitian_dim(&self) -> usize {
        self.hermitian_rank.rank
    }

    /// Number of Hermitian coordinates, d^{2k}.
    pub fn coord_dim(&self) -> usize {
        self.constraints.d.pow(2 * self.constraints.k as u32)
    }

    /// Operator dimension of the ensemble's matrices, d^k.
    pub fn matrix_dim(&self) -> usize {
        self.constraints.d.pow(self.constraints.k as u32)
    }

    /// Coefficients of the orthogonal projection of a symmetric form onto
    /// the family, and the relative residual.
    pub fn project(&self, form: &SparseOp) -> (Vec<f64>, f64) {
        let c: Vec<f64> = self.basis.iter().map(|b| b.dot(form)).collect();
        let norm2 = form.dot(form);
        let kept: f64 = c.iter().map(|x| x * x).sum();
        let residual = if norm2 > 0.0 { ((norm2 - kept).max(0.0) / norm2).sqrt() } else { 0.0 };
        (c, residual)
    }

    /// Coefficients reproducing the identity form (the GUE precision).
    pub fn identity_coefficients(&self) -> Vec<f64> {
        let n = self.coord_dim();
        let id = SparseOp::from_triplets(n, (0..n).map(|i| (i, i, 1.0)).collect(), 0.0);
        self.project(&id).0
    }

    /// Dense generic element Σ c_i X_i of the complex span.
    pub fn complex_element(&self, coefficients: &[C64]) -> CMat {
        let n = self.coord_dim();
        let mut m = CMat::zeros(n, n);
        for (b, &c) in self.complex_basis.iter().zip(coefficients) {
            for &(r, col, v) in &b.entries {
                m[(r, col)] += c * v;
            }
        }
        m
    }
}

/// Symmetrizes every mixed-commutant operator over the group generated by
/// the enabled constraints and measures the resulting spans.
pub fn symmetrized_family(constraints: ConstraintSet) -> Result<InvariantFamily> {
    let n2 = constraints.validate()?;
    let group = constraints.group()?;
    let averaged: Vec<SparseOp> =
        mixed_commutant_sparse(constraints.k, constraints.d)?.iter().map(|op| group.average(op)).collect();
    let vectors: Vec<Vec<(u64, f64)>> =
        averaged.iter().map(|op| op.entries.iter().map(|&(r, c, v)| (key(n2, r, c), v)).collect()).collect();
    let (complex_rank, complex_vecs) = span_basis(&vectors)?;
    let complex_basis: Vec<SparseOp> = complex_vecs
        .iter()
        .map(|v| {
            let t = v
                .iter()
                .map(|&(kk, x)| {
                    let (r, c) = unkey(n2, kk);
                    (r, c, x)
                })
                .collect();
            SparseOp::from_triplets(n2, t, 0.0)
        })
        .collect();

    let n = constraints.d.pow(constraints.k as u32);
    let forms = hermitian_forms(&complex_basis, n)?;
    let (hermitian_rank, form_vecs) = span_basis(&forms)?;
    let basis = form_vecs.iter().map(|v| unpack_symmetric(n2, v)).collect();
    Ok(InvariantFamily { constraints, complex_basis, complex_rank, basis, hermitian_rank })
}

/// For each complex-span element X, the real-symmetric forms induced by X
/// and iX on Hermitian coordinates: M(X)_ab = Re(e_a† X e_b) with e_a the
/// vectorized basis elements, symmetrized and packed as upper triangles
/// (off-diagonal entries weighted by √2 so packing is an isometry).
fn hermitian_forms(complex_basis: &[SparseOp], n: usize) -> Result<Vec<Vec<(u64, f64)>>> {
    let hb = HermitianBasis::new(n)?;
    let n2 = n * n;
    let mut coords_of: Vec<Vec<(usize, C64)>> = vec![Vec::new(); n2];
    for a in 0..n2 {
        for (r, v) in hb.vec_entries(a) {
            coords_of[r].push((a, v));
        }
    }
    let s2 = std::f64::consts::SQRT_2;
    let mut out = Vec::with_capacity(2 * complex_basis.len());
    for x in complex_basis {
        let mut acc: Vec<(usize, usize, C64)> = Vec::new();
        for &(r, c, v) in &x.entries {
            for &(a, ea) in &coords_of[r] {
                for &(b, eb) in &coords_of[c] {
                    let z = ea.conj() * eb * v;
                    // Symmetrize into the upper triangle.
                    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                    acc.push((lo, hi, z));
                }
            }
        }
        acc.sort_by_key(|p| (p.0, p.1));
        let mut re: Vec<(u64, f64)> = Vec::new();
        let mut im: Vec<(u64, f64)> = Vec::new();
        let mut i = 0;
        while i < acc.len() {
            let (a, b) = (acc[i].0, acc[i].1);
            let mut z = C64::new(0.0, 0.0);
            while i < acc.len() && acc[i].0 == a && acc[i].1 == b {
                z += acc[i].2;
                i += 1;
            }
            // Diagonal: M_aa. Off-diagonal: the sum holds M_ab + M_ba, so the
            // symmetrized entry is half of it; pack with weight √2.
            let w = if a == b { 1.0 } else { s2 / 2.0 };
            let kk = key(n2, a, b);
            if z.re.abs() > 1e-14 {
                re.push((kk, w * z.re));
            }
            if z.im.abs() > 1e-14 {
                im.push((kk, -w * z.im));
            }
        }
        out.push(re);
        out.push(im);
    }
    Ok(out)
}

fn unpack_symmetric(n2: usize, packed: &[(u64, f64)]) -> SparseOp {
    let s2 = std::f64::consts::SQRT_2;
    let mut t = Vec::with_capacity(2 * packed.len());
    for &(kk, x) in packed {
        let (a, b) = unkey(n2, kk);
        if a == b {
            t.push((a, a, x));
        } else {
            t.push((a, b, x / s2));
            t.push((b, a, x / s2));
        }
    }
    SparseOp::from_triplets(n2, t, 0.0)
}

/// Dimension of the span of the symmetrized plain permutation operators
/// Ŝ_π (no partial transpose), i.e. the commutant of U^{⊗2k} restricted by
/// the same diagonal-permutation and half-swap symmetries.
pub fn unmixed_commutant_rank(constraints: ConstraintSet) -> Result<SpanRank> {
    let n2 = constraints.validate()?;
    let group = constraints.group()?;
    let vectors: Vec<Vec<(u64, f64)>> = Permutation::all(2 * constraints.k)
        .iter()
        .map(|pi| {
            let op = group.average(&brauer_operator(pi, constraints.d, false)?);
            Ok(op.entries.iter().map(|&(r, c, v)| (key(n2, r, c), v)).collect())
        })
        .collect::<Result<_>>()?;
    Ok(span_basis(&vectors)?.0)
}
