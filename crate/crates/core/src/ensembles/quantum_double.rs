//! Quantum double lattice models on a periodic square lattice.
//!
//! Every edge carries a group element. Horizontal edge h(x, y) points from
//! vertex (x, y) to (x+1, y); vertical edge v(x, y) points from (x, y) to
//! (x, y+1). Edge indices are h(x, y) = y·Lx + x and v(x, y) = Lx·Ly + y·Lx + x,
//! and edge 0 is the slowest-varying tensor leg.

use crate::error::{invalid, too_big, Result};
use crate::tensor::MAX_DENSE_DIM;
use crate::{CMat, C64};
use serde::{Deserialize, Serialize};

/// A finite group given by its multiplication table `table[a][b] = a·b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl TryFrom<Vec<Vec<usize>>> for FiniteGroup {
    type Error = crate::Error;
    fn try_from(table: Vec<Vec<usize>>) -> Result<Self> {
        FiniteGroup::new(table)
    }
}

impl From<FiniteGroup> for Vec<Vec<usize>> {
    fn from(g: FiniteGroup) -> Self {
        g.table
    }
}

impl FiniteGroup {
    /// Validates closure, identity, inverses and associativity.
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return invalid("group table is empty");
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return invalid("group table must be square with entries in 0..n");
        }
        let Some(identity) = (0..n).find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a)) else {
            return invalid("group table has no identity element");
        };
        let mut inverses = Vec::with_capacity(n);
        for a in 0..n {
            match (0..n).find(|&b| table[a][b] == identity && table[b][a] == identity) {
                Some(b) => inverses.push(b),
                None => return invalid(format!("element {a} has no inverse")),
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return invalid(format!("table is not associative at ({a}, {b}, {c})"));
                    }
                }
            }
        }
        Ok(FiniteGroup { table, identity, inverses })
    }

    /// Z_n with a·b = a + b mod n.
    pub fn cyclic(n: usize) -> Result<Self> {
        Self::new((0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect())
    }

    /// S₃ with elements ordered as permutations of (0, 1, 2) in lexicographic
    /// order and (a·b)(i) = a(b(i)).
    pub fn symmetric3() -> Self {
        let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let table = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| {
                        let c = [a[b[0]], a[b[1]], a[b[2]]];
                        perms.iter().position(|p| *p == c).unwrap()
                    })
                    .collect()
            })
            .collect();
        Self::new(table).expect("S3 table is a group")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.table[a][b] == self.table[b][a]))
    }
}

/// A torus of `width × height` vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Torus {
    pub width: usize,
    pub height: usize,
}

impl Torus {
    pub fn vertices(&self) -> usize {
        self.width * self.height
    }

    pub fn edges(&self) -> usize {
        2 * self.vertices()
    }

    pub fn h(&self, x: usize, y: usize) -> usize {
        (y % self.height) * self.width + x % self.width
    }

    pub fn v(&self, x: usize, y: usize) -> usize {
        self.vertices() + (y % self.height) * self.width + x % self.width
    }
}

/// Assembled vertex operators, plaquette operators and H = −ΣA(v) − ΣB(p).
#[derive(Clone, Debug)]
pub struct QuantumDouble {
    pub group: FiniteGroup,
    pub torus: Torus,
    /// A(v) = Σ_g A_v^g, indexed by vertex y·width + x.
    pub vertex_ops: Vec<CMat>,
    /// B(p) projects onto trivial holonomy around the plaquette whose
    /// lower-left corner is (x, y), indexed by y·width + x.
    pub plaquette_ops: Vec<CMat>,
    pub hamiltonian: CMat,
}

fn encode(config: &[usize], g: usize) -> usize {
    config.iter().fold(0, |acc, &x| acc * g + x)
}

fn decode(mut index: usize, g: usize, edges: usize) -> Vec<usize> {
    let mut out = vec![0; edges];
    for slot in out.iter_mut().rev() {
        *slot = index % g;
        index /= g;
    }
    out
}

/// Builds the model on `torus`, refusing Hilbert spaces beyond 4096 states.
pub fn quantum_double(group: &FiniteGroup, torus: Torus) -> Result<QuantumDouble> {
    if torus.width == 0 || torus.height == 0 {
        return invalid("torus dimensions must be positive");
    }
    let g = group.order();
    let edges = torus.edges();
    let dim = (0..edges).try_fold(1usize, |acc, _| acc.checked_mul(g).filter(|&d| d <= MAX_DENSE_DIM));
    let Some(dim) = dim else {
        return too_big(format!("|G|^edges = {g}^{edges} exceeds {MAX_DENSE_DIM}"));
    };
    let configs: Vec<Vec<usize>> = (0..dim).map(|i| decode(i, g, edges)).collect();

    let mut vertex_ops = Vec::with_capacity(torus.vertices());
    for y in 0..torus.height {
        for x in 0..torus.width {
            let outgoing = [torus.h(x, y), torus.v(x, y)];
            let incoming = [torus.h(x + torus.width - 1, y), torus.v(x, y + torus.height - 1)];
            let mut a = CMat::zeros(dim, dim);
            for (col, cfg) in configs.iter().enumerate() {
                for h in 0..g {
                    let mut next = cfg.clone();
                    for &e in &outgoing {
                        next[e] = group.mul(h, next[e]);
                    }
                    for &e in &incoming {
                        next[e] = group.mul(next[e], group.inv(h));
                    }
                    a[(encode(&next, g), col)] += C64::new(1.0, 0.0);
                }
            }
            vertex_ops.push(a);
        }
    }

    let mut plaquette_ops = Vec::with_capacity(torus.vertices());
    for y in 0..torus.height {
        for x in 0..torus.width {
            let mut b = CMat::zeros(dim, dim);
            for (col, cfg) in configs.iter().enumerate() {
                let hol = [
                    cfg[torus.h(x, y)],
                    cfg[torus.v(x + 1, y)],
                    group.inv(cfg[torus.h(x, y + 1)]),
                    group.inv(cfg[torus.v(x, y)]),
                ]
                .into_iter()
                .fold(group.identity(), |acc, z| group.mul(acc, z));
                if hol == group.identity() {
                    b[(col, col)] = C64::new(1.0, 0.0);
                }
            }
            plaquette_ops.push(b);
        }
    }

    let mut hamiltonian = CMat::zeros(dim, dim);
    for op in vertex_ops.iter().chain(&plaquette_ops) {
        hamiltonian -= op;
    }
    Ok(QuantumDouble { group: group.clone(), torus, vertex_ops, plaquette_ops, hamiltonian })
}

/// A global relabeling of every edge's group element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GaugeRelabel {
    /// |g⟩ → |qg⟩. A symmetry of the model when the group is abelian.
    Left(usize),
    /// |g⟩ → |q g q⁻¹⟩, a symmetry for any group.
    Conjugate(usize),
}

impl QuantumDouble {
    pub fn dim(&self) -> usize {
        self.hamiltonian.nrows()
    }

    /// Largest Frobenius norm of [X, Y] over all pairs of vertex and
    /// plaquette operators, and of [H, X] over all of them.
    pub fn max_commutator(&self) -> f64 {
        let ops: Vec<&CMat> = self.vertex_ops.iter().chain(&self.plaquette_ops).collect();
        let mut worst = 0.0f64;
        for (i, a) in ops.iter().enumerate() {
            for b in &ops[i + 1..] {
                worst = worst.max((*a * *b - *b * *a).norm());
            }
            worst = worst.max((&self.hamiltonian * *a - *a * &self.hamiltonian).norm());
        }
        worst
    }

    /// The permutation matrix implementing `relabel` on every edge.
    pub fn relabel_operator(&self, relabel: GaugeRelabel) -> Result<CMat> {
        let g = self.group.order();
        let map: Vec<usize> = match relabel {
            GaugeRelabel::Left(q) | GaugeRelabel::Conjugate(q) if q >= g => {
                return invalid(format!("group element {q} out of range"));
            }
            GaugeRelabel::Left(q) => (0..g).map(|x| self.group.mul(q, x)).collect(),
            GaugeRelabel::Conjugate(q) => {
                (0..g).map(|x| self.group.mul(self.group.mul(q, x), self.group.inv(q))).collect()
            }
        };
        let edges = self.torus.edges();
        let dim = self.dim();
        let mut p = CMat::zeros(dim, dim);
        for col in 0..dim {
            let cfg: Vec<usize> = decode(col, g, edges).into_iter().map(|x| map[x]).collect();
            p[(encode(&cfg, g), col)] = C64::new(1.0, 0.0);
        }
        Ok(p)
    }

    /// Largest ‖P X P† − X‖_F over all vertex and plaquette operators.
    pub fn gauge_defect(&self, relabel: GaugeRelabel) -> Result<f64> {
        let p = self.relabel_operator(relabel)?;
        let pt = p.adjoint();
        Ok(self.vertex_ops.iter().chain(&self.plaquette_ops).map(|x| (&p * x * &pt - x).norm()).fold(0.0, f64::max))
    }

    /// −(#vertices·|G| + #plaquettes): every A(v)/|G| and B(p) is a commuting
    /// projector and the constraints are simultaneously satisfiable.
    pub fn predicted_ground_energy(&self) -> f64 {
        -((self.torus.vertices() * self.group.order() + self.torus.vertices()) as f64)
    }

    /// Ground energy and degeneracy by dense diagonalization.
    pub fn brute_force_ground(&self, tol: f64) -> (f64, usize) {
        let eig = self.hamiltonian.clone().symmetric_eigen();
        let e0 = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        let deg = eig.eigenvalues.iter().filter(|&&e| e - e0 < tol).count();
        (e0, deg)
    }
}
