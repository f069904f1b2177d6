use super::eigh;
use crate::error::{invalid, Result};
use crate::perm::Permutation;
use crate::tensor::{leg_permutation_map, TensorOperator};
use crate::{CMat, CVec, C64};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Schmidt coefficients of a unit vector on C^{d_L} ⊗ C^{d_R}, descending.
/// The left factor is the slowly varying index.
pub fn entanglement_spectrum(psi: &CVec, d_left: usize, d_right: usize) -> Result<Vec<f64>> {
    if d_left == 0 || d_right == 0 || d_left * d_right != psi.len() {
        return invalid(format!("cannot split a vector of length {} as {d_left}×{d_right}", psi.len()));
    }
    if (psi.norm() - 1.0).abs() > 1e-10 {
        return invalid(format!("vector norm {} is not 1", psi.norm()));
    }
    let m = reshape(psi, d_left, d_right);
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

fn reshape(psi: &CVec, d_left: usize, d_right: usize) -> CMat {
    CMat::from_fn(d_left, d_right, |a, b| psi[a * d_right + b])
}

/// One factor (Ŝ_σ H Ŝ_σ†)^p of an invariant word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordFactor {
    pub sigma: Permutation,
    pub power: u32,
}

/// An ordered product of conjugated powers of H.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<WordFactor>", into = "Vec<WordFactor>")]
pub struct WordSpec {
    factors: Vec<WordFactor>,
}

impl TryFrom<Vec<WordFactor>> for WordSpec {
    type Error = crate::Error;
    fn try_from(factors: Vec<WordFactor>) -> Result<Self> {
        WordSpec::new(factors)
    }
}

impl From<WordSpec> for Vec<WordFactor> {
    fn from(w: WordSpec) -> Self {
        w.factors
    }
}

impl WordSpec {
    pub fn new(factors: Vec<WordFactor>) -> Result<Self> {
        let Some(first) = factors.first() else {
            return invalid("a word needs at least one factor");
        };
        let k = first.sigma.degree();
        if factors.iter().any(|f| f.power == 0 || f.sigma.degree() != k) {
            return invalid("word factors need powers ≥ 1 and permutations of one degree");
        }
        Ok(WordSpec { factors })
    }

    /// Parses `*`-separated factors such as `(12)^2*e^2`; a missing power
    /// means 1.
    pub fn parse(k: usize, text: &str) -> Result<Self> {
        let mut factors = Vec::new();
        for part in text.split('*') {
            let part = part.trim();
            let (perm, power) = match part.rsplit_once('^') {
                Some((p, e)) => (
                    p,
                    e.trim()
                        .parse::<u32>()
                        .map_err(|_| crate::Error::InvalidArgument(format!("bad power in {part:?}")))?,
                ),
                None => (part, 1),
            };
            factors.push(WordFactor { sigma: Permutation::parse_cycles(k, perm)?, power });
        }
        Self::new(factors)
    }

    pub fn factors(&self) -> &[WordFactor] {
        &self.factors
    }

    pub fn k(&self) -> usize {
        self.factors[0].sigma.degree()
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|f| f.power).sum()
    }
}

impl fmt::Display for WordSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{}^{}", factor.sigma, factor.power)?;
        }
        Ok(())
    }
}

/// Every word on `k` legs of total degree 1..=`max_degree`, with no two
/// adjacent factors sharing a permutation (those would merge into one
/// factor). Ordered by degree, then by composition, then by permutation.
pub fn enumerate_words(k: usize, max_degree: u32) -> Result<Vec<WordSpec>> {
    if k == 0 || max_degree == 0 {
        return invalid("enumerate_words needs k >= 1 and max_degree >= 1");
    }
    let perms = Permutation::all(k);
    let mut out = Vec::new();
    let mut stack: Vec<WordFactor> = Vec::new();
    fn extend(
        remaining: u32,
        perms: &[Permutation],
        stack: &mut Vec<WordFactor>,
        out: &mut Vec<WordSpec>,
    ) -> Result<()> {
        if remaining == 0 {
            out.push(WordSpec::new(stack.clone())?);
            return Ok(());
        }
        for power in 1..=remaining {
            for sigma in perms {
                if stack.last().is_some_and(|f| &f.sigma == sigma) {
                    continue;
                }
                stack.push(WordFactor { sigma: sigma.clone(), power });
                extend(remaining - power, perms, stack, out)?;
                stack.pop();
            }
        }
        Ok(())
    }
    for degree in 1..=max_degree {
        extend(degree, &perms, &mut stack, &mut out)?;
    }
    Ok(out)
}

/// H_σ = Ŝ_σ H Ŝ_σ†, computed by index relabeling.
pub fn conjugate_by_permutation(h: &TensorOperator, sigma: &Permutation) -> Result<CMat> {
    if sigma.degree() != h.legs() {
        return invalid(format!("permutation of {} legs applied to {} legs", sigma.degree(), h.legs()));
    }
    let map = leg_permutation_map(sigma, h.local_dim())?;
    let m = h.matrix();
    let n = h.dim();
    let mut out = CMat::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            out[(map[i], map[j])] = m[(i, j)];
        }
    }
    Ok(out)
}

/// Tr[∏ᵢ (Ŝ_σᵢ H Ŝ_σᵢ†)^{pᵢ}].
pub fn invariant_word_trace(h: &TensorOperator, word: &WordSpec) -> Result<C64> {
    if word.k() != h.legs() {
        return invalid(format!("word on {} legs applied to an operator on {}", word.k(), h.legs()));
    }
    let n = h.dim();
    let mut acc = CMat::identity(n, n);
    for f in word.factors() {
        let hs = conjugate_by_permutation(h, &f.sigma)?;
        for _ in 0..f.power {
            acc = &acc * &hs;
        }
    }
    Ok(acc.trace())
}

struct SchmidtData {
    values: Vec<f64>,
    left: CMat,
    right: CMat,
}

/// Schmidt data of ψ on C^d ⊗ C^d: ψ = Σ_k s_k ψ^L_k ⊗ ψ^R_k with the
/// columns of `left` and `right` holding ψ^L_k and ψ^R_k.
fn schmidt_data(psi: &CVec, d: usize) -> SchmidtData {
    let svd = reshape(psi, d, d).svd(true, true);
    let u = svd.u.expect("requested");
    let v_t = svd.v_t.expect("requested");
    // ψ_{ab} = Σ s_k U_{ak} (V†)_{kb}, so ψ^R_k has entries (V†)_{kb}.
    let right = v_t.transpose();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    SchmidtData {
        values: order.iter().map(|&k| svd.singular_values[k]).collect(),
        left: CMat::from_fn(d, d, |r, c| u[(r, order[c])]),
        right: CMat::from_fn(d, d, |r, c| right[(r, order[c])]),
    }
}

fn bipartite_dim(h: &TensorOperator) -> Result<usize> {
    if h.legs() != 2 {
        return invalid("operator must act on two legs");
    }
    Ok(h.local_dim())
}

/// Tr[H_S² H²] for k = 2 evaluated through eigenvectors and their Schmidt
/// data:
///
///   Σ_{m,m'} λ_m² λ_{m'}² |Σ_{k,k'} s_{m'k'} s_{mk} ⟨ψ^L_{m'k'}|ψ^R_{mk}⟩⟨ψ^R_{m'k'}|ψ^L_{mk}⟩|².
///
/// Agreement with [`invariant_word_trace`] checks the expansion.
pub fn schmidt_quadruple_sum(h: &TensorOperator) -> Result<f64> {
    let d = bipartite_dim(h)?;
    let e = eigh(h.matrix())?;
    let n = d * d;
    let data: Vec<SchmidtData> = (0..n).map(|m| schmidt_data(&e.vectors.column(m).into_owned(), d)).collect();
    let mut total = 0.0;
    for (m, dm) in data.iter().enumerate() {
        for (mp, dp) in data.iter().enumerate() {
            // Gram blocks ⟨L'_k'|R_k⟩ and ⟨R'_k'|L_k⟩.
            let lr = dp.left.adjoint() * &dm.right;
            let rl = dp.right.adjoint() * &dm.left;
            let mut amp = C64::new(0.0, 0.0);
            for kp in 0..d {
                for k in 0..d {
                    amp += lr[(kp, k)] * rl[(kp, k)] * (dp.values[kp] * dm.values[k]);
                }
            }
            total += e.values[m].powi(2) * e.values[mp].powi(2) * amp.norm_sqr();
        }
    }
    Ok(total)
}

/// Mean of |⟨ψ^L_{m,0}|ψ^R_{m',0}⟩|² over all ordered pairs (m, m') of the
/// `top_m` highest-eigenvalue eigenvectors, using each vector's leading
/// Schmidt pair.
pub fn schmidt_overlap_stat(h: &TensorOperator, top_m: usize) -> Result<f64> {
    let d = bipartite_dim(h)?;
    let n = d * d;
    if top_m == 0 || top_m > n {
        return invalid(format!("top_m must lie in 1..={n}"));
    }
    let e = eigh(h.matrix())?;
    let data: Vec<SchmidtData> = (n - top_m..n).map(|m| schmidt_data(&e.vectors.column(m).into_owned(), d)).collect();
    let mut sum = 0.0;
    for a in &data {
        for b in &data {
            sum += a.left.column(0).dotc(&b.right.column(0)).norm_sqr();
        }
    }
    Ok(sum / (top_m * top_m) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{haar_unitary, sample_gue};
    use crate::seed::rng;
    use crate::tensor::kron_power;

    #[test]
    fn product_and_maximally_entangled_spectra() {
        let d = 3;
        let mut psi = CVec::zeros(d * d);
        psi[4] = C64::new(1.0, 0.0);
        let s = entanglement_spectrum(&psi, d, d).unwrap();
        assert!((s[0] - 1.0).abs() < 1e-14 && s[1].abs() < 1e-14);
        let mut bell = CVec::zeros(d * d);
        for a in 0..d {
            bell[a * d + a] = C64::new(1.0 / (d as f64).sqrt(), 0.0);
        }
        let s = entanglement_spectrum(&bell, d, d).unwrap();
        assert!(s.iter().all(|x| (x - 1.0 / 3f64.sqrt()).abs() < 1e-12));
        assert!(entanglement_spectrum(&bell, 2, 4).is_err());
    }

    #[test]
    fn word_parsing_round_trips() {
        let w = WordSpec::parse(2, "(12)^2*e^2").unwrap();
        assert_eq!(w.to_string(), "(12)^2*e^2");
        assert_eq!(w.degree(), 4);
        assert!(WordSpec::parse(2, "(12)^0").is_err());
        assert!(WordSpec::parse(2, "(13)").is_err());
        let json = serde_json::to_string(&w).unwrap();
        assert_eq!(serde_json::from_str::<WordSpec>(&json).unwrap(), w);
    }

    #[test]
    fn word_enumeration_counts() {
        // k = 1: only e^p, one per degree.
        assert_eq!(enumerate_words(1, 4).unwrap().len(), 4);
        // k = 2: alternating words; degree D has Σ_m C(D−1, m−1)·2 of them,
        // i.e. 2^D, so degrees 1..=4 give 2 + 4 + 8 + 16.
        let words = enumerate_words(2, 4).unwrap();
        assert_eq!(words.len(), 30);
        assert!(words.iter().all(|w| w.degree() <= 4));
        let mut text: Vec<String> = words.iter().map(|w| w.to_string()).collect();
        text.sort();
        text.dedup();
        assert_eq!(text.len(), 30);
    }

    #[test]
    fn identity_word_is_a_power_sum() {
        let mut r = rng(1);
        let h = TensorOperator::new(sample_gue(9, 1.0, &mut r).unwrap(), 3, 2).unwrap();
        let w = WordSpec::parse(2, "e^3").unwrap();
        let p3: f64 = eigh(h.matrix()).unwrap().values.iter().map(|x| x.powi(3)).sum();
        assert!((invariant_word_trace(&h, &w).unwrap() - C64::new(p3, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn swap_word_is_two_fold_invariant_only() {
        let mut r = rng(2);
        let d = 3;
        let h = sample_gue(d * d, 1.0, &mut r).unwrap();
        let w = WordSpec::parse(2, "(12)^2*e^2").unwrap();
        let base = invariant_word_trace(&TensorOperator::new(h.clone(), d, 2).unwrap(), &w).unwrap();
        let v = kron_power(&haar_unitary(d, &mut r).unwrap(), 2).unwrap();
        let moved = TensorOperator::new(&v * &h * v.adjoint(), d, 2).unwrap();
        assert!((invariant_word_trace(&moved, &w).unwrap() - base).norm() < 1e-10 * base.norm());
        // A generic U(d²) rotation changes it.
        let g = haar_unitary(d * d, &mut r).unwrap();
        let rotated = TensorOperator::new(&g * &h * g.adjoint(), d, 2).unwrap();
        assert!((invariant_word_trace(&rotated, &w).unwrap() - base).norm() > 1e-3 * base.norm());
    }

    #[test]
    fn quadruple_sum_matches_trace() {
        let mut r = rng(3);
        for d in [2, 3] {
            let h = TensorOperator::new(sample_gue(d * d, 1.0, &mut r).unwrap(), d, 2).unwrap();
            let w = WordSpec::parse(2, "(12)^2*e^2").unwrap();
            let direct = invariant_word_trace(&h, &w).unwrap();
            let expanded = schmidt_quadruple_sum(&h).unwrap();
            assert!(direct.im.abs() < 1e-10);
            assert!((direct.re - expanded).abs() < 1e-8 * direct.re.abs().max(1.0), "{direct} vs {expanded}");
        }
    }

    #[test]
    fn separable_overlaps_are_zero_or_one() {
        let d = 3;
        let a = CMat::from_diagonal(&nalgebra::DVector::from_vec(
            [0.3, 1.1, 2.9].iter().map(|&x| C64::new(x, 0.0)).collect(),
        ));
        let id = CMat::identity(d, d);
        let h = TensorOperator::new(a.kronecker(&id) + id.kronecker(&a), d, 2).unwrap();
        let e = eigh(h.matrix()).unwrap();
        for m in 0..d * d {
            let data = schmidt_data(&e.vectors.column(m).into_owned(), d);
            for other in 0..d * d {
                let o = schmidt_data(&e.vectors.column(other).into_owned(), d);
                let x = data.left.column(0).dotc(&o.right.column(0)).norm_sqr();
                assert!(x.abs() < 1e-12 || (x - 1.0).abs() < 1e-12);
            }
        }
        let s = schmidt_overlap_stat(&h, d * d).unwrap();
        assert!((0.0..=1.0).contains(&s));
        // Fully degenerate input still gives a deterministic answer.
        let i = TensorOperator::identity(d, 2).unwrap();
        assert_eq!(schmidt_overlap_stat(&i, 4).unwrap(), schmidt_overlap_stat(&i, 4).unwrap());
    }
}
