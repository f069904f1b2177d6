//! Disordered spin models: the spin-1/2 Heisenberg model with isotropic
//! Gaussian fields and the spin-1 O(3) model with random orthogonal couplings.

use crate::error::{invalid, too_big, Result};
use crate::seed::Rng;
use crate::{CMat, RMat, C64};
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

pub const MAX_HEISENBERG_SITES: usize = 12;
pub const MAX_O3_SITES: usize = 6;

/// An interaction graph with one coupling per edge.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Graph {
    pub sites: usize,
    /// (i, j, J_ij), 0-based sites.
    pub edges: Vec<(usize, usize, f64)>,
}

impl Graph {
    /// Nearest-neighbour chain with uniform coupling.
    pub fn chain(sites: usize, coupling: f64, periodic: bool) -> Self {
        let mut edges: Vec<(usize, usize, f64)> = (0..sites.saturating_sub(1)).map(|i| (i, i + 1, coupling)).collect();
        if periodic && sites > 2 {
            edges.push((sites - 1, 0, coupling));
        }
        Graph { sites, edges }
    }

    fn validate(&self, max_sites: usize) -> Result<()> {
        if self.sites == 0 {
            return invalid("graph has no sites");
        }
        if self.sites > max_sites {
            return too_big(format!("{} sites exceed the limit of {max_sites}", self.sites));
        }
        for &(i, j, c) in &self.edges {
            if i >= self.sites || j >= self.sites || i == j || !c.is_finite() {
                return invalid(format!("invalid edge ({i}, {j}, {c})"));
            }
        }
        Ok(())
    }
}

fn normal(rng: &mut Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// H = Σ J_ij Ŝ_i·Ŝ_j + Σ n̂_i·Ŝ_i with spin-1/2 operators Ŝ = σ/2 and
/// n̂_i ~ N(0, noise_scale²·I₃) independently per site.
///
/// Site 0 is the slowest-varying tensor leg; |0⟩ is spin up.
pub fn sample_heisenberg(graph: &Graph, noise_scale: f64, rng: &mut Rng) -> Result<CMat> {
    graph.validate(MAX_HEISENBERG_SITES)?;
    if !(noise_scale >= 0.0 && noise_scale.is_finite()) {
        return invalid(format!("noise scale must be nonnegative, got {noise_scale}"));
    }
    let n = graph.sites;
    let fields: Vec<[f64; 3]> =
        (0..n).map(|_| [noise_scale * normal(rng), noise_scale * normal(rng), noise_scale * normal(rng)]).collect();
    heisenberg_with_fields(graph, &fields)
}

/// The Heisenberg Hamiltonian for given site fields (x, y, z components).
pub fn heisenberg_with_fields(graph: &Graph, fields: &[[f64; 3]]) -> Result<CMat> {
    graph.validate(MAX_HEISENBERG_SITES)?;
    let n = graph.sites;
    if fields.len() != n {
        return invalid("one field vector per site is required");
    }
    let dim = 1usize << n;
    let bit = |s: usize, i: usize| (s >> (n - 1 - i)) & 1;
    let flip = |s: usize, i: usize| s ^ (1 << (n - 1 - i));
    let sz = |b: usize| if b == 0 { 0.5 } else { -0.5 };
    let mut h = CMat::zeros(dim, dim);
    for s in 0..dim {
        for &(i, j, c) in &graph.edges {
            let (bi, bj) = (bit(s, i), bit(s, j));
            h[(s, s)] += C64::new(c * sz(bi) * sz(bj), 0.0);
            if bi != bj {
                // ½(S⁺S⁻ + S⁻S⁺) exchanges antiparallel spins.
                h[(flip(flip(s, i), j), s)] += C64::new(0.5 * c, 0.0);
            }
        }
        for (i, f) in fields.iter().enumerate() {
            let b = bit(s, i);
            h[(s, s)] += C64::new(f[2] * sz(b), 0.0);
            // ⟨s'|S^x|s⟩ = ½, ⟨s'|S^y|s⟩ = ±i/2 (i/2 for up → down).
            let y = if b == 0 { 0.5 } else { -0.5 };
            h[(flip(s, i), s)] += C64::new(0.5 * f[0], y * f[1]);
        }
    }
    Ok(h)
}

/// Spin-1/2 total spin components Σ_i S_i^α on `sites` sites.
pub fn total_spin_half(sites: usize) -> Result<[CMat; 3]> {
    let g = Graph { sites, edges: vec![] };
    let unit = |a: usize| {
        let mut f = vec![[0.0; 3]; sites];
        for v in f.iter_mut() {
            v[a] = 1.0;
        }
        heisenberg_with_fields(&g, &f)
    };
    Ok([unit(0)?, unit(1)?, unit(2)?])
}

/// Spin-1 operators in the real Cartesian basis: (S^a)_{bc} = −i ε_{abc}.
pub fn spin_one_cartesian() -> [CMat; 3] {
    let eps = |a: usize, b: usize, c: usize| -> f64 {
        match (a, b, c) {
            (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
            (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
            _ => 0.0,
        }
    };
    [0, 1, 2].map(|a| CMat::from_fn(3, 3, |b, c| C64::new(0.0, -eps(a, b, c))))
}

/// Haar-distributed element of O(3).
pub fn haar_orthogonal3(rng: &mut Rng) -> RMat {
    let g = RMat::from_fn(3, 3, |_, _| normal(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..3 {
        if r[(j, j)] < 0.0 {
            for i in 0..3 {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q
}

/// How the O(3) coupling matrices are drawn.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum O3Coupling {
    /// O_ij Haar-uniform on O(3).
    #[default]
    Haar,
    /// O_ij = identity (the clean O(3)-symmetric model).
    Identity,
}

/// Ĥ = Σ J_ij Σ_ab (O_ij)_ab S_i^a S_j^b for spin-1 sites. The Cartesian
/// spin-1 basis makes every term real.
pub fn sample_o3(graph: &Graph, coupling: O3Coupling, rng: &mut Rng) -> Result<CMat> {
    graph.validate(MAX_O3_SITES)?;
    let mats: Vec<RMat> = graph
        .edges
        .iter()
        .map(|_| match coupling {
            O3Coupling::Haar => haar_orthogonal3(rng),
            O3Coupling::Identity => RMat::identity(3, 3),
        })
        .collect();
    o3_with_couplings(graph, &mats)
}

/// The O(3) model for explicit coupling matrices, one per edge.
pub fn o3_with_couplings(graph: &Graph, couplings: &[RMat]) -> Result<CMat> {
    graph.validate(MAX_O3_SITES)?;
    if couplings.len() != graph.edges.len() {
        return invalid("one coupling matrix per edge is required");
    }
    let n = graph.sites;
    let dim = 3usize.pow(n as u32);
    let s = spin_one_cartesian();
    let mut h = CMat::zeros(dim, dim);
    for (&(i, j, c), o) in graph.edges.iter().zip(couplings) {
        // Two-site block T = Σ_ab O_ab S^a ⊗ S^b (9×9, real).
        let mut t = CMat::zeros(9, 9);
        for a in 0..3 {
            for b in 0..3 {
                if o[(a, b)] != 0.0 {
                    t += s[a].kronecker(&s[b]) * C64::new(o[(a, b)], 0.0);
                }
            }
        }
        let pi = 3usize.pow((n - 1 - i) as u32);
        let pj = 3usize.pow((n - 1 - j) as u32);
        for st in 0..dim {
            let (di, dj) = ((st / pi) % 3, (st / pj) % 3);
            let base = st - di * pi - dj * pj;
            for ci in 0..3 {
                for cj in 0..3 {
                    let v = t[(di * 3 + dj, ci * 3 + cj)];
                    if v.norm() > 0.0 {
                        h[(base + ci * pi + cj * pj, st)] += v * c;
                    }
                }
            }
        }
    }
    // Entries are real by construction; drop rounding in the imaginary part.
    Ok(h.map(|z| C64::new(z.re, 0.0)))
}
