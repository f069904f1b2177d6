use super::character::{character, character_on_cycles, conjugacy_classes, hook_dimension};
use super::exact::{checked_imul, exact_div, factorial};
use super::partition::{enumerate_partitions, Partition};
use crate::error::{invalid, Result};
use crate::perm::Permutation;
use serde::{Deserialize, Serialize};

/// One nonzero branching multiplicity B^{λλ'}_μ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchingEntry {
    pub lambda: Partition,
    pub lambda_prime: Partition,
    pub multiplicity: u64,
}

/// Restriction of the S_{k+k'} irreducible μ to S_k × S_{k'}.
///
/// Returns the nonzero multiplicities, ordered by (λ, λ') in
/// reverse-lexicographic order.
pub fn branching(mu: &Partition, k: usize, k_prime: usize) -> Result<Vec<BranchingEntry>> {
    if mu.weight() != k + k_prime || k == 0 || k_prime == 0 {
        return invalid(format!("branching: {mu} is not a partition of {k}+{k_prime}"));
    }
    let classes_a = conjugacy_classes(k)?;
    let classes_b = conjugacy_classes(k_prime)?;
    // χ_μ on every merged class, computed once.
    let mut chi_mu = vec![vec![0i64; classes_b.len()]; classes_a.len()];
    for (i, ca) in classes_a.iter().enumerate() {
        for (j, cb) in classes_b.iter().enumerate() {
            let mut cycles = ca.lengths.parts().to_vec();
            cycles.extend_from_slice(cb.lengths.parts());
            chi_mu[i][j] = character_on_cycles(mu, &cycles)?;
        }
    }
    let order = (factorial(k)? * factorial(k_prime)?) as i128;
    let mut out = Vec::new();
    for lam in enumerate_partitions(k, None)? {
        let chi_l: Vec<i64> = classes_a.iter().map(|c| character(&lam, c)).collect::<Result<_>>()?;
        for lamp in enumerate_partitions(k_prime, None)? {
            let chi_lp: Vec<i64> = classes_b.iter().map(|c| character(&lamp, c)).collect::<Result<_>>()?;
            let mut sum: i128 = 0;
            for (i, ca) in classes_a.iter().enumerate() {
                for (j, cb) in classes_b.iter().enumerate() {
                    let size = checked_imul(ca.class_size as i128, cb.class_size as i128)?;
                    let chars = chi_l[i] as i128 * chi_lp[j] as i128 * chi_mu[i][j] as i128;
                    sum += checked_imul(size, chars)?;
                }
            }
            let b = exact_div(sum, order, "branching multiplicity")?;
            if b != 0 {
                out.push(BranchingEntry { lambda: lam.clone(), lambda_prime: lamp, multiplicity: b as u64 });
            }
        }
    }
    Ok(out)
}

/// Kronecker coefficient: multiplicity of μ in λ ⊗ λ' as S_k representations.
pub fn kronecker(lambda: &Partition, lambda_prime: &Partition, mu: &Partition) -> Result<u64> {
    let k = lambda.weight();
    if lambda_prime.weight() != k || mu.weight() != k {
        return invalid(format!("kronecker: weights of {lambda}, {lambda_prime}, {mu} differ"));
    }
    let mut sum: i128 = 0;
    for c in conjugacy_classes(k)? {
        let chars = character(lambda, &c)? as i128 * character(lambda_prime, &c)? as i128 * character(mu, &c)? as i128;
        sum += checked_imul(c.class_size as i128, chars)?;
    }
    Ok(exact_div(sum, factorial(k)? as i128, "kronecker coefficient")? as u64)
}

/// Multiplicity of the S_k irreducible λ in the permutation representation
/// on (C^d)^{⊗k}: (1/k!) Σ_σ χ_λ(σ)·d^{cycles(σ)}.
pub fn perm_rep_multiplicity(lambda: &Partition, d: usize) -> Result<u128> {
    if d == 0 {
        return invalid("perm_rep_multiplicity requires d >= 1");
    }
    let k = lambda.weight();
    let mut sum: i128 = 0;
    for c in conjugacy_classes(k)? {
        let power = (d as i128)
            .checked_pow(c.cycles() as u32)
            .ok_or_else(|| crate::Error::Overflow(format!("{d}^{}", c.cycles())))?;
        let term = checked_imul(checked_imul(c.class_size as i128, character(lambda, &c)? as i128)?, power)?;
        sum += term;
    }
    Ok(exact_div(sum, factorial(k)? as i128, "permutation-representation multiplicity")? as u128)
}

/// Dimension of the U(d) irreducible with highest weight λ (hook-content
/// formula); zero when λ has more than d rows.
pub fn unitary_irrep_dim(lambda: &Partition, d: usize) -> Result<u128> {
    if d == 0 {
        return invalid("unitary_irrep_dim requires d >= 1");
    }
    if lambda.rows() > d {
        return Ok(0);
    }
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for (i, j) in lambda.cells() {
        num = checked_imul(num, d as i128 + j as i128 - i as i128)?;
        den = checked_imul(den, lambda.hook(i, j) as i128)?;
    }
    Ok(exact_div(num, den, "hook-content dimension")? as u128)
}

/// Dimension of the S_k irreducible (re-exported for convenience).
pub fn sk_dimension(lambda: &Partition) -> Result<u128> {
    hook_dimension(lambda)
}

/// Label of the half-swap eigenvalue in the refined coefficient table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
pub enum SwapSign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl SwapSign {
    pub fn value(self) -> i64 {
        match self {
            SwapSign::Plus => 1,
            SwapSign::Minus => -1,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            SwapSign::Plus => "+",
            SwapSign::Minus => "-",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CEntry {
    pub mu: Partition,
    pub mu_prime: Partition,
    /// Present only in the half-swap-refined table.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub swap: Option<SwapSign>,
    pub count: u64,
}

/// Bipartite multiplicity table: how often V_μ ⊗ (μ' of the diagonal S_k)
/// occurs in V^{⊗2k}, for U(d) irreducibles μ ⊢ 2k and S_k irreducibles μ'.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CTable {
    pub k: usize,
    pub d: usize,
    pub entries: Vec<CEntry>,
}

impl CTable {
    pub fn get(&self, mu: &Partition, mu_prime: &Partition) -> u64 {
        self.entries.iter().filter(|e| &e.mu == mu && &e.mu_prime == mu_prime).map(|e| e.count).sum()
    }

    pub fn get_signed(&self, mu: &Partition, mu_prime: &Partition, s: SwapSign) -> u64 {
        self.entries
            .iter()
            .filter(|e| &e.mu == mu && &e.mu_prime == mu_prime && e.swap == Some(s))
            .map(|e| e.count)
            .sum()
    }

    /// Σ C², the dimension of the matching endomorphism algebra.
    pub fn sum_of_squares(&self) -> u64 {
        self.entries.iter().map(|e| e.count * e.count).sum()
    }

    /// Multiset of nonzero entries, sorted ascending.
    pub fn multiplicities(&self) -> Vec<u64> {
        let mut m: Vec<u64> = self.entries.iter().map(|e| e.count).filter(|&c| c > 0).collect();
        m.sort_unstable();
        m
    }
}

/// C_{μμ'} = Σ_{λ,λ'} B^μ_{λλ'} · c^{μ'}_{λλ'} with Kronecker coefficients c,
/// over μ ⊢ 2k with at most d rows (so λ, λ' have at most d rows too).
pub fn c_coefficients(k: usize, d: usize) -> Result<CTable> {
    if k == 0 || d == 0 {
        return invalid("c_coefficients requires k >= 1 and d >= 1");
    }
    let lambdas = enumerate_partitions(k, Some(d))?;
    let mut kron = Vec::new();
    let mu_primes = enumerate_partitions(k, None)?;
    for l in &lambdas {
        for lp in &lambdas {
            for m in &mu_primes {
                kron.push(((l.clone(), lp.clone(), m.clone()), kronecker(l, lp, m)?));
            }
        }
    }
    let mut entries = Vec::new();
    for mu in enumerate_partitions(2 * k, Some(d))? {
        let br = branching(&mu, k, k)?;
        for mp in &mu_primes {
            let mut total = 0u64;
            for b in &br {
                let c = kron
                    .iter()
                    .find(|((l, lp, m), _)| l == &b.lambda && lp == &b.lambda_prime && m == mp)
                    .map(|(_, c)| *c)
                    .unwrap_or(0);
                total += b.multiplicity * c;
            }
            if total > 0 {
                entries.push(CEntry { mu: mu.clone(), mu_prime: mp.clone(), swap: None, count: total });
            }
        }
    }
    Ok(CTable { k, d, entries })
}

/// Refinement of [`c_coefficients`] by the eigenvalue s of the half swap.
///
/// The diagonal S_k and the half swap τ (exchanging the two blocks of k
/// points) generate a subgroup H ≅ S_k × Z₂ of S_{2k}; each entry is the
/// multiplicity of μ' ⊠ s in the restriction of μ to H:
/// (1/2k!) Σ_{σ, t} χ_μ((σ⊕σ)τ^t)·χ_{μ'}(σ)·s^t.
/// Summing over s recovers the unrefined table.
pub fn signed_c_coefficients(k: usize, d: usize) -> Result<CTable> {
    if k == 0 || d == 0 {
        return invalid("signed_c_coefficients requires k >= 1 and d >= 1");
    }
    let perms = Permutation::all(k);
    let tau = Permutation::from_images((0..2 * k).map(|l| (l + k) % (2 * k)).collect())?;
    let mu_primes = enumerate_partitions(k, None)?;
    let order = 2 * factorial(k)? as i128;
    let mut entries = Vec::new();
    for mu in enumerate_partitions(2 * k, Some(d))? {
        // χ_μ on (σ⊕σ) and (σ⊕σ)τ for every σ.
        let mut chi_plain = Vec::with_capacity(perms.len());
        let mut chi_swapped = Vec::with_capacity(perms.len());
        for s in &perms {
            let diag = s.direct_sum(s);
            chi_plain.push(character_on_cycles(&mu, &diag.cycle_lengths())?);
            chi_swapped.push(character_on_cycles(&mu, &diag.then(&tau).cycle_lengths())?);
        }
        for mp in &mu_primes {
            for sign in [SwapSign::Plus, SwapSign::Minus] {
                let mut sum: i128 = 0;
                for (i, s) in perms.iter().enumerate() {
                    let chi_mp = character_on_cycles(mp, &s.cycle_lengths())? as i128;
                    sum += chi_mp * (chi_plain[i] as i128 + sign.value() as i128 * chi_swapped[i] as i128);
                }
                let c = exact_div(sum, order, "signed C coefficient")?;
                if c > 0 {
                    entries.push(CEntry { mu: mu.clone(), mu_prime: mp.clone(), swap: Some(sign), count: c as u64 });
                }
            }
        }
    }
    Ok(CTable { k, d, entries })
}
