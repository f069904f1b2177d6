use super::family::{InvariantFamily, PermutationSign};
use crate::error::{invalid, too_big, Error, Result};
use crate::seed::Rng;
use crate::{CMat, C64};
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

/// Eigenvalues closer than this (relative to the spectral radius) are
/// treated as one cluster.
pub const CLUSTER_TOL: f64 = 1e-7;

/// Off-sector weight (relative) below which two clusters are unlinked.
const LINK_TOL: f64 = 1e-6;

/// Largest vectorization dimension handled by the dense decomposition.
pub const MAX_BLOCK_DIM: usize = 1024;

/// One isotypic sector: the algebra acts as M_m ⊗ I_n on it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sector {
    pub multiplicity: usize,
    pub identity_dim: usize,
}

/// Simultaneous block structure of a commutant algebra.
#[derive(Clone, Debug)]
pub struct BlockStructure {
    /// Sorted by (multiplicity, identity_dim).
    pub sectors: Vec<Sector>,
    /// Unitary whose columns, grouped by sector in the order of `sectors`,
    /// block-diagonalize every element of the family.
    pub change_of_basis: CMat,
    /// Largest relative off-sector Frobenius weight over the family basis.
    pub max_off_block: f64,
}

impl BlockStructure {
    /// Multiplicities in ascending order.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut m: Vec<usize> = self.sectors.iter().map(|s| s.multiplicity).collect();
        m.sort_unstable();
        m
    }

    /// Σ m², the dimension of the algebra.
    pub fn algebra_dim(&self) -> usize {
        self.sectors.iter().map(|s| s.multiplicity * s.multiplicity).sum()
    }
}

fn generic_hermitian(family: &InvariantFamily, rng: &mut Rng) -> CMat {
    let coeffs: Vec<C64> = (0..family.complex_basis.len())
        .map(|_| C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect();
    let x = family.complex_element(&coeffs);
    (&x + x.adjoint()) * C64::new(0.5, 0.0)
}

/// Block-decomposes the complex span of a family with trivial permutation
/// sign (which is then a *-algebra).
///
/// A generic Hermitian element is diagonalized; its eigenvalues come in
/// clusters of size n (the identity factor of a sector) and each sector of
/// multiplicity m contributes m clusters. A second generic element links
/// clusters that belong to the same sector.
pub fn block_decompose(family: &InvariantFamily, rng: &mut Rng) -> Result<BlockStructure> {
    if family.complex_basis.is_empty() {
        return invalid("block_decompose: empty family");
    }
    if family.constraints.permutation_sign == PermutationSign::Sign {
        return invalid("block_decompose: a sign-twisted family is not an algebra");
    }
    let n = family.coord_dim();
    if n > MAX_BLOCK_DIM {
        return too_big(format!("block decomposition on dimension {n} (limit {MAX_BLOCK_DIM})"));
    }
    let a = generic_hermitian(family, rng);
    let b = generic_hermitian(family, rng);
    let eig = a.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let radius = eig.eigenvalues.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-300);

    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for &i in &order {
        let lam = eig.eigenvalues[i];
        if clusters.is_empty() || lam - last > CLUSTER_TOL * radius {
            clusters.push(Vec::new());
        }
        clusters.last_mut().expect("nonempty").push(i);
        last = lam;
    }
    let q = &eig.eigenvectors;
    let cols = |c: &[usize]| CMat::from_fn(n, c.len(), |r, j| q[(r, c[j])]);
    let blocks: Vec<CMat> = clusters.iter().map(|c| cols(c)).collect();
    let bq: Vec<CMat> = blocks.iter().map(|qc| &b * qc).collect();

    // Union-find over clusters linked by the second element.
    let nc = clusters.len();
    let mut parent: Vec<usize> = (0..nc).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let bnorm = b.norm().max(1e-300);
    for i in 0..nc {
        for j in i + 1..nc {
            let w = (blocks[i].adjoint() * &bq[j]).norm();
            if w > LINK_TOL * bnorm {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri] = rj;
            }
        }
    }
    let mut components: Vec<Vec<usize>> = Vec::new();
    let mut root_slot: Vec<Option<usize>> = vec![None; nc];
    for i in 0..nc {
        let r = find(&mut parent, i);
        let slot = *root_slot[r].get_or_insert_with(|| {
            components.push(Vec::new());
            components.len() - 1
        });
        components[slot].push(i);
    }

    let mut sectors = Vec::new();
    let mut columns: Vec<(Sector, Vec<usize>)> = Vec::new();
    for comp in &components {
        let size = clusters[comp[0]].len();
        if comp.iter().any(|&c| clusters[c].len() != size) {
            let sizes: Vec<usize> = comp.iter().map(|&c| clusters[c].len()).collect();
            return Err(Error::NumericalDegeneracy(format!("linked eigenvalue clusters have unequal sizes {sizes:?}")));
        }
        let sector = Sector { multiplicity: comp.len(), identity_dim: size };
        let idx: Vec<usize> = comp.iter().flat_map(|&c| clusters[c].iter().copied()).collect();
        sectors.push(sector.clone());
        columns.push((sector, idx));
    }
    columns.sort_by_key(|x| (x.0.multiplicity, x.0.identity_dim));
    sectors.sort_by_key(|x| (x.multiplicity, x.identity_dim));
    let all_idx: Vec<usize> = columns.iter().flat_map(|(_, idx)| idx.iter().copied()).collect();
    let change_of_basis = cols(&all_idx);

    // Validate: every basis element is block diagonal by sector.
    let label: Vec<usize> =
        columns.iter().enumerate().flat_map(|(s, (_, idx))| std::iter::repeat_n(s, idx.len())).collect();
    let mut max_off_block = 0.0f64;
    for x in &family.complex_basis {
        let mut xq = CMat::zeros(n, n);
        for &(r, c, v) in &x.entries {
            for j in 0..n {
                xq[(r, j)] += change_of_basis[(c, j)] * v;
            }
        }
        let y = change_of_basis.adjoint() * xq;
        let mut off = 0.0;
        for j in 0..n {
            for i in 0..n {
                if label[i] != label[j] {
                    off += y[(i, j)].norm_sqr();
                }
            }
        }
        let rel = off.sqrt() / x.frobenius_norm().max(1e-300);
        max_off_block = max_off_block.max(rel);
    }
    if max_off_block > 1e-8 {
        return Err(Error::NumericalDegeneracy(format!(
            "block structure not reached: relative off-block weight {max_off_block:e} over {} clusters",
            clusters.len()
        )));
    }
    Ok(BlockStructure { sectors, change_of_basis, max_off_block })
}
