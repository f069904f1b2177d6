//! The Harish-Chandra–Itzykson–Zuber integral over U(n).
//!
//! For diagonal A = diag(a) and B = diag(b),
//!
//!   ∫ dU exp(t Tr[A U B U†]) = (∏_{p=1}^{n−1} p!) det[e^{t aᵢ bⱼ}] / (t^{n(n−1)/2} Δ(a) Δ(b))
//!
//! with Δ(a) = ∏_{i<j} (a_j − a_i) and Haar measure normalized to 1.

use crate::ensembles::haar_unitary;
use crate::error::{invalid, Error, Result};
use crate::perm::Permutation;
use crate::seed::sample_rng;
use crate::RMat;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Entries closer than this are treated as coincident.
pub const DEGENERACY_TOL: f64 = 1e-8;
/// Spread used to separate coincident entries before extrapolation.
pub const DEGENERACY_EPS: f64 = 1e-5;
pub const MAX_MC_N: usize = 6;
pub const MIN_MC_SAMPLES: usize = 1000;
const CHUNK: usize = 1024;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HcizProblem {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub t: f64,
}

impl HcizProblem {
    pub fn new(a: Vec<f64>, b: Vec<f64>, t: f64) -> Result<Self> {
        let p = HcizProblem { a, b, t };
        p.validate()?;
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    fn validate(&self) -> Result<()> {
        if self.a.is_empty() || self.a.len() != self.b.len() {
            return invalid("a and b must be nonempty and of equal length");
        }
        if self.a.iter().chain(&self.b).chain([&self.t]).any(|x| !x.is_finite()) {
            return invalid("HCIZ inputs must be finite");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HcizValue {
    pub value: f64,
    /// Estimated absolute error of the degenerate path (0 otherwise).
    pub error_estimate: f64,
    pub extrapolated: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HcizMonteCarlo {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: usize,
}

fn factorial_product(n: usize) -> f64 {
    (1..n).map(|p| (1..=p).map(|q| q as f64).product::<f64>()).product()
}

/// Upper bidiagonal matrix with `x` on the diagonal and ones above it.
fn bidiagonal(x: &[f64]) -> RMat {
    let n = x.len();
    RMat::from_fn(n, n, |i, j| {
        if i == j {
            x[i]
        } else if j == i + 1 {
            1.0
        } else {
            0.0
        }
    })
}

/// Determinantal formula evaluated without cancellation.
///
/// Row and column reduction turn det[e^{xᵢ yⱼ}] / (Δ(x)Δ(y)) into det H with
/// H_ij the mixed divided difference of e^{xy} over x₁..xᵢ and y₁..yⱼ. Since
/// e^{xy} = Σ_k x^k y^k / k!, these are the entries
/// H_ij = [exp(J_x ⊗ J_y)]_{(1,1),(i,j)} for the bidiagonal J matrices.
/// With x = t·a the factors t^{n(n−1)/2} Δ(a) cancel exactly.
fn determinantal(a: &[f64], b: &[f64], t: f64) -> Result<f64> {
    let n = a.len();
    let x: Vec<f64> = a.iter().map(|v| t * v).collect();
    let big = bidiagonal(&x).kronecker(&bidiagonal(b));
    let peak = x.iter().flat_map(|xi| b.iter().map(move |bj| (xi * bj).abs())).fold(0.0, f64::max);
    if peak > 700.0 {
        return Err(Error::Overflow(format!("exponent {peak:.1} is too large for f64")));
    }
    let e = big.exp();
    let h = RMat::from_fn(n, n, |i, j| e[(0, i * n + j)]);
    let value = factorial_product(n) * h.determinant();
    if !value.is_finite() {
        return Err(Error::Overflow("HCIZ value overflowed".into()));
    }
    Ok(value)
}

/// Offsets that split clusters of nearly equal entries symmetrically.
fn cluster_offsets(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&i, &j| x[i].total_cmp(&x[j]));
    let mut offsets = vec![0.0; x.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && x[order[end]] - x[order[end - 1]] < DEGENERACY_TOL {
            end += 1;
        }
        let m = end - start;
        for (pos, &i) in order[start..end].iter().enumerate() {
            offsets[i] = pos as f64 - (m as f64 - 1.0) / 2.0;
        }
        start = end;
    }
    offsets
}

/// Exact value of the HCIZ integral.
///
/// Coincident entries (closer than [`DEGENERACY_TOL`]) are separated by
/// ε·offsets with ε = [`DEGENERACY_EPS`]; the value is even in ε, so the
/// Richardson combination (4f(ε) − f(2ε))/3 removes the leading error.
pub fn hciz_exact(p: &HcizProblem) -> Result<HcizValue> {
    p.validate()?;
    let n = p.n();
    if n == 1 {
        return Ok(HcizValue { value: (p.t * p.a[0] * p.b[0]).exp(), error_estimate: 0.0, extrapolated: false });
    }
    let flat = |x: &[f64]| x.iter().all(|&v| (v - x[0]).abs() < DEGENERACY_TOL);
    // Tr[A U B U†] is constant when either matrix is a multiple of identity.
    let constant = if p.t == 0.0 {
        Some(1.0)
    } else if flat(&p.a) {
        Some((p.t * p.a[0] * p.b.iter().sum::<f64>()).exp())
    } else if flat(&p.b) {
        Some((p.t * p.b[0] * p.a.iter().sum::<f64>()).exp())
    } else {
        None
    };
    if let Some(value) = constant {
        return Ok(HcizValue { value, error_estimate: 0.0, extrapolated: false });
    }
    let oa = cluster_offsets(&p.a);
    let ob = cluster_offsets(&p.b);
    if oa.iter().chain(&ob).all(|&o| o == 0.0) {
        let value = determinantal(&p.a, &p.b, p.t)?;
        return Ok(HcizValue { value, error_estimate: 0.0, extrapolated: false });
    }
    let at = |eps: f64| {
        let a: Vec<f64> = p.a.iter().zip(&oa).map(|(x, o)| x + eps * o).collect();
        let b: Vec<f64> = p.b.iter().zip(&ob).map(|(x, o)| x + eps * o).collect();
        determinantal(&a, &b, p.t)
    };
    let f1 = at(DEGENERACY_EPS)?;
    let f2 = at(2.0 * DEGENERACY_EPS)?;
    let value = (4.0 * f1 - f2) / 3.0;
    Ok(HcizValue { value, error_estimate: (f1 - f2).abs() / 3.0, extrapolated: true })
}

/// Sample mean and standard error of exp(t Tr[A U B U†]) over Haar U.
pub fn hciz_monte_carlo(p: &HcizProblem, samples: usize, seed: u64) -> Result<HcizMonteCarlo> {
    p.validate()?;
    let n = p.n();
    if n > MAX_MC_N {
        return invalid(format!("Monte-Carlo HCIZ supports n ≤ {MAX_MC_N}"));
    }
    if samples < MIN_MC_SAMPLES {
        return invalid(format!("at least {MIN_MC_SAMPLES} samples are required"));
    }
    let chunks: Vec<(f64, f64)> = (0..samples.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| -> Result<(f64, f64)> {
            let (mut s1, mut s2) = (0.0, 0.0);
            for i in c * CHUNK..((c + 1) * CHUNK).min(samples) {
                let u = haar_unitary(n, &mut sample_rng(seed, i as u64))?;
                let mut tr = 0.0;
                for r in 0..n {
                    for c in 0..n {
                        tr += p.a[r] * p.b[c] * u[(r, c)].norm_sqr();
                    }
                }
                let x = (p.t * tr).exp();
                s1 += x;
                s2 += x * x;
            }
            Ok((s1, s2))
        })
        .collect::<Result<_>>()?;
    let (s1, s2) = chunks.iter().fold((0.0, 0.0), |acc, c| (acc.0 + c.0, acc.1 + c.1));
    let m = samples as f64;
    let mean = s1 / m;
    let var = ((s2 / m - mean * mean) * m / (m - 1.0)).max(0.0);
    // t = 0 gives exactly 1 with zero variance.
    let (estimate, std_error) = if p.t == 0.0 { (1.0, 0.0) } else { (mean, (var / m).sqrt()) };
    Ok(HcizMonteCarlo { estimate, std_error, samples })
}

/// (1/n!) Σ_{w ∈ S_n} sign(w) exp(⟨w(x), y⟩), the bare alternating sum.
pub fn weyl_sum(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.is_empty() || x.len() != y.len() {
        return invalid("x and y must be nonempty and of equal length");
    }
    if x.len() > 8 {
        return invalid("weyl_sum enumerates S_n and supports n ≤ 8");
    }
    let perms = Permutation::all(x.len());
    let total: f64 = perms
        .iter()
        .map(|w| {
            let dot: f64 = (0..x.len()).map(|i| x[w.image(i)] * y[i]).sum();
            w.sign() as f64 * dot.exp()
        })
        .sum();
    Ok(total / perms.len() as f64)
}

/// hciz_exact with t = 1 divided by weyl_sum, for comparing the bare
/// alternating sum with the normalized integral.
pub fn weyl_ratio(x: &[f64], y: &[f64]) -> Result<f64> {
    let exact = hciz_exact(&HcizProblem::new(x.to_vec(), y.to_vec(), 1.0)?)?;
    Ok(exact.value / weyl_sum(x, y)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn small_cases() {
        let one = hciz_exact(&HcizProblem::new(vec![2.0], vec![0.5], 0.3).unwrap()).unwrap();
        assert!((one.value - 0.3f64.exp()).abs() < 1e-15);
        let two = hciz_exact(&HcizProblem::new(vec![0.0, 1.0], vec![0.0, 1.0], 1.0).unwrap()).unwrap();
        assert!((two.value - (E - 1.0)).abs() < 1e-14);
        let zero_a = hciz_exact(&HcizProblem::new(vec![0.0; 3], vec![1.0, 2.0, 5.0], 0.7).unwrap()).unwrap();
        assert_eq!(zero_a.value, 1.0);
        let t0 = hciz_exact(&HcizProblem::new(vec![1.0, 2.0], vec![3.0, 4.0], 0.0).unwrap()).unwrap();
        assert_eq!(t0.value, 1.0);
    }

    #[test]
    fn small_t_limit_and_symmetries() {
        let a = vec![0.3, -1.2, 2.0];
        let b = vec![1.5, 0.1, -0.4];
        let v = hciz_exact(&HcizProblem::new(a.clone(), b.clone(), 1e-6).unwrap()).unwrap().value;
        assert!((v - 1.0).abs() < 1e-4);
        let base = hciz_exact(&HcizProblem::new(a.clone(), b.clone(), 0.8).unwrap()).unwrap().value;
        let swapped = hciz_exact(&HcizProblem::new(b.clone(), a.clone(), 0.8).unwrap()).unwrap().value;
        let permuted =
            hciz_exact(&HcizProblem::new(vec![a[2], a[0], a[1]], vec![b[1], b[2], b[0]], 0.8).unwrap()).unwrap().value;
        assert!((base - swapped).abs() < 1e-12 * base);
        assert!((base - permuted).abs() < 1e-12 * base);
    }

    #[test]
    fn degenerate_path_is_continuous() {
        let b = vec![0.2, 1.0, -0.7];
        let exact = hciz_exact(&HcizProblem::new(vec![0.5, 0.5, 1.5], b.clone(), 1.0).unwrap()).unwrap();
        assert!(exact.extrapolated);
        let near = hciz_exact(&HcizProblem::new(vec![0.5 - 1e-3, 0.5 + 1e-3, 1.5], b, 1.0).unwrap()).unwrap();
        assert!((exact.value - near.value).abs() < 1e-5, "{} vs {}", exact.value, near.value);
    }

    #[test]
    fn monte_carlo_agrees_with_exact() {
        let p = HcizProblem::new(vec![0.0, 1.0], vec![0.0, 1.0], 1.0).unwrap();
        let mc = hciz_monte_carlo(&p, 20_000, 5).unwrap();
        assert!((mc.estimate - (E - 1.0)).abs() < 3.0 * mc.std_error + 1e-12);
        let t0 = hciz_monte_carlo(&HcizProblem::new(vec![1.0, 2.0], vec![0.0, 1.0], 0.0).unwrap(), 1000, 1).unwrap();
        assert_eq!((t0.estimate, t0.std_error), (1.0, 0.0));
    }

    #[test]
    fn weyl_sum_properties() {
        assert!((weyl_sum(&[0.7], &[2.0]).unwrap() - 1.4f64.exp()).abs() < 1e-14);
        assert!((weyl_sum(&[0.0, 1.0], &[0.0, 1.0]).unwrap() - (E - 1.0) / 2.0).abs() < 1e-14);
        let x = [0.1, 0.9, -0.4];
        let y = [1.0, 0.3, 0.5];
        let s = weyl_sum(&x, &y).unwrap();
        assert!((weyl_sum(&[0.9, 0.1, -0.4], &y).unwrap() + s).abs() < 1e-14);
        assert!((weyl_sum(&x, &[0.3, 1.0, 0.5]).unwrap() + s).abs() < 1e-14);
        assert!((weyl_ratio(&[0.0, 1.0], &[0.0, 1.0]).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn divided_differences_match_naive_determinant() {
        // Well-separated inputs, where the textbook ratio is accurate.
        let a: [f64; 4] = [-1.0, 0.5, 2.0, 3.5];
        let b: [f64; 4] = [0.25, 1.0, -2.0, 0.75];
        let t: f64 = 0.6;
        let n = a.len();
        let m = RMat::from_fn(n, n, |i, j| (t * a[i] * b[j]).exp());
        let vdm = |x: &[f64]| {
            let mut v = 1.0;
            for i in 0..x.len() {
                for j in i + 1..x.len() {
                    v *= x[j] - x[i];
                }
            }
            v
        };
        let naive = 12.0 * m.determinant() / (t.powi(6) * vdm(&a) * vdm(&b));
        let stable = determinantal(&a, &b, t).unwrap();
        assert!((naive - stable).abs() < 1e-9 * naive.abs(), "{naive} vs {stable}");
    }
}
