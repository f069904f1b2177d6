use crate::error::{invalid, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A weakly decreasing sequence of positive integers.
///
/// Partitions of the same weight are listed in reverse-lexicographic order
/// everywhere in the crate: (4), (3,1), (2,2), (2,1,1), (1,1,1,1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Validates and wraps `parts`; trailing zeros are dropped.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.contains(&0) {
            return invalid(format!("partition {parts:?} has an interior zero"));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return invalid(format!("partition {parts:?} is not weakly decreasing"));
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of nonzero parts (rows of the Young diagram).
    pub fn rows(&self) -> usize {
        self.parts.len()
    }

    /// Conjugate partition (transpose of the Young diagram).
    pub fn conjugate(&self) -> Partition {
        let cols = self.parts.first().copied().unwrap_or(0);
        let parts = (0..cols).map(|j| self.parts.iter().filter(|&&p| p > j).count()).collect();
        Partition { parts }
    }

    /// Multiplicities m_i of each part size i ≥ 1 (index 0 unused).
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut m = vec![0; self.parts.first().copied().unwrap_or(0) + 1];
        for &p in &self.parts {
            m[p] += 1;
        }
        m
    }

    /// Hook length of cell (i, j), 0-based.
    pub fn hook(&self, i: usize, j: usize) -> usize {
        let arm = self.parts[i] - j - 1;
        let leg = self.parts[i + 1..].iter().filter(|&&p| p > j).count();
        arm + leg + 1
    }

    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts.iter().enumerate().flat_map(|(i, &p)| (0..p).map(move |j| (i, j)))
    }

    /// Display form, e.g. `(3,1)`.
    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = crate::Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Vec<usize> {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl std::str::FromStr for Partition {
    type Err = crate::Error;
    /// Accepts `(3,1)`, `3,1`, `3 1`, and the shorthands `+` = (2), `-` = (1,1).
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "+" => return Partition::new(vec![2]),
            "-" => return Partition::new(vec![1, 1]),
            _ => {}
        }
        let body = t.trim_start_matches('(').trim_end_matches(')');
        let parts = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|x| !x.is_empty())
            .map(|x| x.parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| crate::Error::InvalidArgument(format!("cannot parse partition {s:?}")))?;
        Partition::new(parts)
    }
}

/// All partitions of `k` with at most `max_rows` parts, reverse-lexicographic.
pub fn enumerate_partitions(k: usize, max_rows: Option<usize>) -> Result<Vec<Partition>> {
    if k == 0 {
        return invalid("enumerate_partitions requires k >= 1");
    }
    let cap = max_rows.unwrap_or(k);
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fill(k, k, cap, &mut cur, &mut out);
    Ok(out)
}

fn fill(remaining: usize, largest: usize, rows_left: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition { parts: cur.clone() });
        return;
    }
    if rows_left == 0 {
        return;
    }
    for p in (1..=largest.min(remaining)).rev() {
        cur.push(p);
        fill(remaining - p, p, rows_left - 1, cur, out);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_brute_force() {
        // Oracle: count weakly decreasing compositions by direct search over
        // all compositions of k (2^(k-1) of them).
        fn brute(k: usize) -> usize {
            (0u32..1 << (k - 1))
                .filter(|mask| {
                    let mut parts = Vec::new();
                    let mut run = 1;
                    for bit in 0..k - 1 {
                        if mask & (1 << bit) != 0 {
                            parts.push(run);
                            run = 1;
                        } else {
                            run += 1;
                        }
                    }
                    parts.push(run);
                    parts.windows(2).all(|w| w[0] >= w[1])
                })
                .count()
        }
        for k in 1..=10 {
            assert_eq!(enumerate_partitions(k, None).unwrap().len(), brute(k), "k={k}");
        }
        assert_eq!(enumerate_partitions(4, None).unwrap().len(), 5);
        assert_eq!(enumerate_partitions(6, None).unwrap().len(), 11);
    }

    #[test]
    fn order_is_reverse_lexicographic() {
        let got: Vec<String> = enumerate_partitions(4, None).unwrap().iter().map(|p| p.to_string()).collect();
        assert_eq!(got, ["(4)", "(3,1)", "(2,2)", "(2,1,1)", "(1,1,1,1)"]);
        assert_eq!(enumerate_partitions(1, None).unwrap()[0].parts(), &[1]);
    }

    #[test]
    fn row_cap_and_errors() {
        let two_rows = enumerate_partitions(4, Some(2)).unwrap();
        assert_eq!(two_rows.len(), 3);
        assert!(enumerate_partitions(0, None).is_err());
        assert!(Partition::new(vec![1, 2]).is_err());
    }

    #[test]
    fn parse_and_conjugate() {
        let p: Partition = "(3,1)".parse().unwrap();
        assert_eq!(p.conjugate().parts(), &[2, 1, 1]);
        assert_eq!("+".parse::<Partition>().unwrap().parts(), &[2]);
        assert_eq!("-".parse::<Partition>().unwrap().parts(), &[1, 1]);
    }
}
