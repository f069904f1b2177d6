use super::exact::{checked_mul, factorial};
use super::partition::{enumerate_partitions, Partition};
use crate::error::{invalid, Result};
use serde::{Deserialize, Serialize};

/// A conjugacy class of S_k: its cycle lengths and the number of elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleType {
    pub lengths: Partition,
    pub class_size: u128,
}

impl CycleType {
    /// Class with the given cycle lengths; size k!/(∏ lengths · ∏ m_i!).
    pub fn new(lengths: Partition) -> Result<Self> {
        let k = lengths.weight();
        let mut denom: u128 = 1;
        for &l in lengths.parts() {
            denom = checked_mul(denom, l as u128)?;
        }
        for &m in &lengths.multiplicities() {
            denom = checked_mul(denom, factorial(m)?)?;
        }
        let class_size = factorial(k)? / denom;
        Ok(CycleType { lengths, class_size })
    }

    pub fn weight(&self) -> usize {
        self.lengths.weight()
    }

    pub fn identity(k: usize) -> Result<Self> {
        CycleType::new(Partition::new(vec![1; k])?)
    }

    /// Number of cycles (fixed points included).
    pub fn cycles(&self) -> usize {
        self.lengths.rows()
    }
}

/// All conjugacy classes of S_k in reverse-lexicographic order of cycle type.
pub fn conjugacy_classes(k: usize) -> Result<Vec<CycleType>> {
    enumerate_partitions(k, None)?.into_iter().map(CycleType::new).collect()
}

/// Irreducible character χ_λ on the class with the given cycle type,
/// computed by the Murnaghan-Nakayama rule on beta-sets.
pub fn character(lambda: &Partition, class: &CycleType) -> Result<i64> {
    if lambda.weight() != class.weight() {
        return invalid(format!("character: weight of {lambda} differs from class {}", class.lengths));
    }
    Ok(mn(lambda.parts(), class.lengths.parts()))
}

/// Character evaluated directly on cycle lengths (any order).
pub fn character_on_cycles(lambda: &Partition, cycles: &[usize]) -> Result<i64> {
    if lambda.weight() != cycles.iter().sum::<usize>() {
        return invalid(format!("character: weight of {lambda} differs from cycles {cycles:?}"));
    }
    Ok(mn(lambda.parts(), cycles))
}

/// Murnaghan-Nakayama recursion. A rim hook of length r corresponds to moving
/// one bead of the beta-set down by r onto a free position; the height of
/// the hook is the number of beads jumped over.
fn mn(parts: &[usize], cycles: &[usize]) -> i64 {
    let Some((&r, rest)) = cycles.split_first() else {
        return if parts.is_empty() { 1 } else { 0 };
    };
    let len = parts.len();
    let beta: Vec<usize> = parts.iter().enumerate().map(|(i, &p)| p + len - 1 - i).collect();
    let mut total = 0i64;
    for (idx, &b) in beta.iter().enumerate() {
        if b < r {
            continue;
        }
        let target = b - r;
        if beta.contains(&target) {
            continue;
        }
        let jumped = beta.iter().filter(|&&x| x > target && x < b).count();
        let sign = if jumped % 2 == 0 { 1 } else { -1 };
        let mut moved = beta.clone();
        moved[idx] = target;
        moved.sort_unstable_by(|a, b| b.cmp(a));
        let n = moved.len();
        let mut new_parts: Vec<usize> = moved.iter().enumerate().map(|(i, &x)| x - (n - 1 - i)).collect();
        while new_parts.last() == Some(&0) {
            new_parts.pop();
        }
        total += sign * mn(&new_parts, rest);
    }
    total
}

/// Dimension of the S_k irreducible λ via the hook-length formula.
pub fn hook_dimension(lambda: &Partition) -> Result<u128> {
    let mut hooks: u128 = 1;
    for (i, j) in lambda.cells() {
        hooks = checked_mul(hooks, lambda.hook(i, j) as u128)?;
    }
    Ok(factorial(lambda.weight())? / hooks)
}

/// Integer character table of S_k.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CharacterTable {
    pub k: usize,
    pub irreps: Vec<Partition>,
    pub classes: Vec<CycleType>,
    /// `values[i][j]` = χ_{irreps[i]}(classes[j]).
    pub values: Vec<Vec<i64>>,
}

impl CharacterTable {
    pub fn new(k: usize) -> Result<Self> {
        let irreps = enumerate_partitions(k, None)?;
        let classes = conjugacy_classes(k)?;
        let values = irreps
            .iter()
            .map(|l| classes.iter().map(|c| character(l, c)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(CharacterTable { k, irreps, classes, values })
    }

    pub fn value(&self, lambda: &Partition, class: &Partition) -> Option<i64> {
        let i = self.irreps.iter().position(|p| p == lambda)?;
        let j = self.classes.iter().position(|c| &c.lengths == class)?;
        Some(self.values[i][j])
    }

    /// k!·⟨χ_a, χ_b⟩ = Σ_classes size·χ_a·χ_b, exact.
    pub fn scaled_inner_product(&self, a: usize, b: usize) -> i128 {
        self.classes
            .iter()
            .enumerate()
            .map(|(j, c)| c.class_size as i128 * self.values[a][j] as i128 * self.values[b][j] as i128)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn class(v: &[usize]) -> CycleType {
        CycleType::new(p(v)).unwrap()
    }

    #[test]
    fn s4_examples() {
        assert_eq!(character(&p(&[2, 2]), &class(&[3, 1])).unwrap(), -1);
        assert_eq!(character(&p(&[1, 1, 1, 1]), &class(&[2, 1, 1])).unwrap(), -1);
        assert_eq!(character(&p(&[2, 1, 1]), &class(&[1, 1, 1, 1])).unwrap(), 3);
        assert!(character(&p(&[2, 1]), &class(&[2, 2])).is_err());
    }

    #[test]
    fn standard_representation_counts_fixed_points() {
        // Oracle: χ_(k-1,1)(σ) = #fixed points − 1, from the permutation
        // representation minus the trivial one.
        for k in 2..=7 {
            let lam = p(&[k - 1, 1]);
            for c in conjugacy_classes(k).unwrap() {
                let fixed = c.lengths.parts().iter().filter(|&&l| l == 1).count() as i64;
                assert_eq!(character(&lam, &c).unwrap(), fixed - 1);
            }
        }
    }

    #[test]
    fn sign_character_and_conjugation() {
        // χ_{λ'} = sign · χ_λ.
        for k in 1..=7 {
            for lam in enumerate_partitions(k, None).unwrap() {
                for c in conjugacy_classes(k).unwrap() {
                    let even = c.lengths.parts().iter().filter(|&&l| l % 2 == 0).count();
                    let sign = if even % 2 == 0 { 1 } else { -1 };
                    assert_eq!(character(&lam.conjugate(), &c).unwrap(), sign * character(&lam, &c).unwrap());
                }
            }
        }
    }

    #[test]
    fn class_sizes_sum_to_factorial() {
        for k in 1..=8 {
            let total: u128 = conjugacy_classes(k).unwrap().iter().map(|c| c.class_size).sum();
            assert_eq!(total, factorial(k).unwrap());
        }
        assert_eq!(class(&[2, 2]).class_size, 3);
        assert_eq!(class(&[3, 1]).class_size, 8);
    }

    #[test]
    fn orthogonality_and_hook_dimension() {
        for k in 1..=7 {
            let t = CharacterTable::new(k).unwrap();
            let kf = factorial(k).unwrap() as i128;
            let id = t.classes.iter().position(|c| c.lengths.rows() == k).unwrap();
            for a in 0..t.irreps.len() {
                assert_eq!(t.values[a][id] as u128, hook_dimension(&t.irreps[a]).unwrap());
                for b in 0..t.irreps.len() {
                    let expect = if a == b { kf } else { 0 };
                    assert_eq!(t.scaled_inner_product(a, b), expect, "k={k} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn squares_of_dimensions_sum_to_factorial() {
        for k in 1..=6 {
            let s: u128 =
                enumerate_partitions(k, None).unwrap().iter().map(|l| hook_dimension(l).unwrap().pow(2)).sum();
            assert_eq!(s, factorial(k).unwrap());
        }
    }
}
