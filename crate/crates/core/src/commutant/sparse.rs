//! Sparse real operators and rank-revealing span computations.
//!
//! Every element of the mixed commutant is a 0/1 matrix with d^{2k}
//! nonzeros, and averaging over a finite group of index permutations keeps
//! it sparse. Spans are measured by the SVD of the stacked vectors
//! restricted to their union support.

use crate::error::{too_big, Result};
use crate::perm::Permutation;
use crate::tensor::leg_permutation_map;
use crate::RMat;
use serde::{Deserialize, Serialize};

/// A real square matrix stored as sorted, merged (row, col, value) triplets.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOp {
    pub dim: usize,
    pub entries: Vec<(usize, usize, f64)>,
}

impl SparseOp {
    /// Sorts, merges duplicate positions and drops entries below `drop_tol`.
    pub fn from_triplets(dim: usize, mut entries: Vec<(usize, usize, f64)>, drop_tol: f64) -> Self {
        entries.sort_by_key(|e| (e.0, e.1));
        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(entries.len());
        for (r, c, v) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        merged.retain(|e| e.2.abs() > drop_tol);
        SparseOp { dim, entries: merged }
    }

    pub fn to_dense(&self) -> RMat {
        let mut m = RMat::zeros(self.dim, self.dim);
        for &(r, c, v) in &self.entries {
            m[(r, c)] += v;
        }
        m
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|e| e.2 * e.2).sum::<f64>().sqrt()
    }

    pub fn transpose(&self) -> SparseOp {
        SparseOp::from_triplets(self.dim, self.entries.iter().map(|&(r, c, v)| (c, r, v)).collect(), 0.0)
    }

    /// P_g · self · P_gᵀ for the index permutation `map` (P_g e_i = e_{map[i]}).
    pub fn conjugate_by<'a>(&'a self, map: &'a [usize]) -> impl Iterator<Item = (usize, usize, f64)> + 'a {
        self.entries.iter().map(move |&(r, c, v)| (map[r], map[c], v))
    }

    /// Frobenius inner product.
    pub fn dot(&self, other: &SparseOp) -> f64 {
        let (mut i, mut j, mut s) = (0, 0, 0.0);
        let (a, b) = (&self.entries, &other.entries);
        while i < a.len() && j < b.len() {
            match (a[i].0, a[i].1).cmp(&(b[j].0, b[j].1)) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    s += a[i].2 * b[j].2;
                    i += 1;
                    j += 1;
                }
            }
        }
        s
    }
}

/// Ŝ_π on (C^d)^{⊗2k} as a sparse 0/1 matrix, optionally partially
/// transposed on legs k..2k.
pub fn brauer_operator(pi: &Permutation, d: usize, partial_transpose: bool) -> Result<SparseOp> {
    let legs = pi.degree();
    let map = leg_permutation_map(pi, d)?;
    let n_half = d.pow((legs / 2) as u32);
    let dim = map.len();
    let entries = map
        .iter()
        .enumerate()
        .map(|(col, &row)| {
            if partial_transpose {
                // The last k legs are the fastest digits: x = hi + lo with lo = x mod d^k.
                let (rl, cl) = (row % n_half, col % n_half);
                (row - rl + cl, col - cl + rl, 1.0)
            } else {
                (row, col, 1.0)
            }
        })
        .collect();
    Ok(SparseOp::from_triplets(dim, entries, 0.0))
}

/// Index maps and weights of a finite group acting by leg permutations.
#[derive(Clone, Debug)]
pub struct LegGroup {
    pub elements: Vec<(Vec<usize>, f64)>,
}

impl LegGroup {
    /// The group {(σ⊕σ)·τ^t} on 2k legs; S_k part present when
    /// `diagonal_perms`, τ (half swap) part when `half_swap`. Weights are
    /// sign(σ) when `signed`, else 1.
    pub fn new(k: usize, d: usize, diagonal_perms: bool, signed: bool, half_swap: bool) -> Result<Self> {
        let sigmas = if diagonal_perms { Permutation::all(k) } else { vec![Permutation::identity(k)] };
        let tau = Permutation::from_images((0..2 * k).map(|l| (l + k) % (2 * k)).collect())?;
        let mut elements = Vec::new();
        for s in &sigmas {
            let diag = s.direct_sum(s);
            let w = if signed { s.sign() as f64 } else { 1.0 };
            elements.push((leg_permutation_map(&diag, d)?, w));
            if half_swap {
                elements.push((leg_permutation_map(&diag.then(&tau), d)?, w));
            }
        }
        Ok(LegGroup { elements })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// (1/|G|) Σ_g w_g P_g X P_gᵀ.
    pub fn average(&self, op: &SparseOp) -> SparseOp {
        let scale = 1.0 / self.order() as f64;
        let mut all = Vec::with_capacity(op.entries.len() * self.order());
        for (map, w) in &self.elements {
            all.extend(op.conjugate_by(map).map(|(r, c, v)| (r, c, v * w * scale)));
        }
        SparseOp::from_triplets(op.dim, all, 1e-14)
    }
}

/// Result of a rank computation on a set of sparse vectors.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpanRank {
    pub rank: usize,
    /// Full singular spectrum, descending.
    pub singular_values: Vec<f64>,
    /// σ_rank / σ_{rank+1}; absent when nothing was discarded.
    pub gap: Option<f64>,
}

/// Relative singular-value cutoff for rank decisions.
pub const RANK_CUTOFF: f64 = 1e-8;

/// Largest dense matrix (entries) used for a span SVD.
const MAX_SPAN_ENTRIES: usize = 1 << 26;

/// Rank of the span of sparse vectors keyed by `u64` positions, and an
/// orthonormal basis of that span (as sparse vectors).
pub fn span_basis(vectors: &[Vec<(u64, f64)>]) -> Result<(SpanRank, Vec<Vec<(u64, f64)>>)> {
    let mut support: Vec<u64> = vectors.iter().flat_map(|v| v.iter().map(|e| e.0)).collect();
    support.sort_unstable();
    support.dedup();
    if vectors.is_empty() || support.is_empty() {
        let rank = SpanRank { rank: 0, singular_values: vec![], gap: None };
        return Ok((rank, vec![]));
    }
    if vectors.len() * support.len() > MAX_SPAN_ENTRIES {
        return too_big(format!("span of {} vectors over {} positions", vectors.len(), support.len()));
    }
    let mut m = RMat::zeros(vectors.len(), support.len());
    for (i, v) in vectors.iter().enumerate() {
        for &(key, x) in v {
            let j = support.binary_search(&key).expect("key in support");
            m[(i, j)] += x;
        }
    }
    let svd = m.svd(false, true);
    let values: Vec<f64> = svd.singular_values.iter().copied().collect();
    let top = values.first().copied().unwrap_or(0.0);
    let rank = values.iter().filter(|&&s| s > RANK_CUTOFF * top).count();
    let gap = (rank < values.len() && rank > 0).then(|| values[rank - 1] / values[rank]);
    let vt = svd.v_t.expect("v_t requested");
    let basis = (0..rank)
        .map(|r| {
            support
                .iter()
                .enumerate()
                .filter_map(|(j, &key)| {
                    let x = vt[(r, j)];
                    (x.abs() > 1e-15).then_some((key, x))
                })
                .collect()
        })
        .collect();
    Ok((SpanRank { rank, singular_values: values, gap }, basis))
}

/// Keys a square-matrix entry as a span position.
pub fn key(dim: usize, r: usize, c: usize) -> u64 {
    (r as u64) * dim as u64 + c as u64
}

pub fn unkey(dim: usize, key: u64) -> (usize, usize) {
    ((key / dim as u64) as usize, (key % dim as u64) as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{partial_transpose, permutation_operator};

    #[test]
    fn brauer_matches_dense_partial_transpose() {
        for pi in Permutation::all(4) {
            let dense = permutation_operator(&pi, 2).unwrap();
            let pt = partial_transpose(&dense, &[2, 3]).unwrap();
            let sparse = brauer_operator(&pi, 2, true).unwrap();
            assert_eq!(sparse.entries.len(), 16);
            let diff = pt.matrix().map(|z| z.re) - sparse.to_dense();
            assert!(diff.norm() < 1e-15, "{pi}");
            let plain = brauer_operator(&pi, 2, false).unwrap();
            assert!((dense.matrix().map(|z| z.re) - plain.to_dense()).norm() < 1e-15);
        }
    }

    #[test]
    fn span_rank_detects_dependence() {
        let v = vec![vec![(0, 1.0), (1, 1.0)], vec![(1, 1.0), (2, 1.0)], vec![(0, 1.0), (2, -1.0)]];
        let (rank, basis) = span_basis(&v).unwrap();
        assert_eq!(rank.rank, 2);
        assert_eq!(basis.len(), 2);
        assert!(rank.gap.unwrap() > 1e10);
    }

    #[test]
    fn group_average_is_idempotent() {
        let g = LegGroup::new(2, 2, true, false, true).unwrap();
        assert_eq!(g.order(), 4);
        let pi = Permutation::from_images(vec![1, 2, 3, 0]).unwrap();
        let x = brauer_operator(&pi, 2, true).unwrap();
        let once = g.average(&x);
        let twice = g.average(&once);
        let diff: f64 = (once.to_dense() - twice.to_dense()).norm();
        assert!(diff < 1e-14);
    }
}
