//! Permutations of `{0, …, k-1}` stored as image vectors.
//!
//! `p.image(l)` is σ(l). Products compose left to right: `a.then(&b)` is the
//! permutation l ↦ b(a(l)), i.e. "apply a, then b". With this convention the
//! tensor permutation operators satisfy Ŝ_a Ŝ_b = Ŝ_{a.then(b)}.

use crate::error::{invalid, Result};
use crate::repcore::Partition;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(k: usize) -> Self {
        Permutation { images: (0..k).collect() }
    }

    /// Builds a permutation from its image vector, rejecting non-bijections.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let k = images.len();
        let mut seen = vec![false; k];
        for &i in &images {
            if i >= k || seen[i] {
                return invalid(format!("{images:?} is not a permutation of 0..{k}"));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// Transposition of `a` and `b` in S_k.
    pub fn transposition(k: usize, a: usize, b: usize) -> Result<Self> {
        if a >= k || b >= k {
            return invalid(format!("transposition ({a} {b}) outside S_{k}"));
        }
        let mut images: Vec<usize> = (0..k).collect();
        images.swap(a, b);
        Ok(Permutation { images })
    }

    /// Parses 1-based cycle notation such as `(12)(34)` or `(1 3 2)`;
    /// `e` or `()` is the identity. Multi-digit points need spaces.
    pub fn parse_cycles(k: usize, text: &str) -> Result<Self> {
        let t = text.trim();
        let mut images: Vec<usize> = (0..k).collect();
        if t == "e" || t.is_empty() {
            return Ok(Permutation { images });
        }
        let mut rest = t;
        let mut used = vec![false; k];
        while !rest.is_empty() {
            let open =
                rest.find('(').ok_or_else(|| crate::Error::InvalidArgument(format!("bad cycle text {text:?}")))?;
            let close =
                rest.find(')').ok_or_else(|| crate::Error::InvalidArgument(format!("bad cycle text {text:?}")))?;
            if close < open || !rest[..open].trim().is_empty() {
                return invalid(format!("bad cycle text {text:?}"));
            }
            let body = &rest[open + 1..close];
            let points: Vec<usize> = if body.contains(char::is_whitespace) || body.contains(',') {
                body.split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<usize>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| crate::Error::InvalidArgument(format!("bad cycle text {text:?}")))?
            } else {
                body.chars()
                    .map(|c| c.to_digit(10).map(|d| d as usize))
                    .collect::<Option<_>>()
                    .ok_or_else(|| crate::Error::InvalidArgument(format!("bad cycle text {text:?}")))?
            };
            for &p in &points {
                if p == 0 || p > k || used[p - 1] {
                    return invalid(format!("cycle point {p} invalid in {text:?} for S_{k}"));
                }
                used[p - 1] = true;
            }
            for w in 0..points.len() {
                let from = points[w] - 1;
                let to = points[(w + 1) % points.len()] - 1;
                images[from] = to;
            }
            rest = rest[close + 1..].trim_start();
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, l: usize) -> usize {
        self.images[l]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Left-to-right product: l ↦ other(self(l)).
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch in product");
        Permutation { images: self.images.iter().map(|&i| other.images[i]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (l, &i) in self.images.iter().enumerate() {
            inv[i] = l;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(l, &i)| l == i)
    }

    /// Cycle lengths sorted in weakly decreasing order (fixed points included).
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let k = self.degree();
        let mut seen = vec![false; k];
        let mut lengths = Vec::new();
        for start in 0..k {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut l = start;
            while !seen[l] {
                seen[l] = true;
                l = self.images[l];
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths
    }

    pub fn cycle_type(&self) -> Partition {
        Partition::new(self.cycle_lengths()).expect("cycle lengths form a partition")
    }

    pub fn cycle_count(&self) -> usize {
        self.cycle_lengths().len()
    }

    pub fn sign(&self) -> i64 {
        let even_cycles = self.cycle_lengths().iter().filter(|&&c| c % 2 == 0).count();
        if even_cycles % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Block-diagonal embedding: `self` on the first block, `other` shifted
    /// onto the points after it.
    pub fn direct_sum(&self, other: &Permutation) -> Permutation {
        let shift = self.degree();
        let mut images = self.images.clone();
        images.extend(other.images.iter().map(|&i| i + shift));
        Permutation { images }
    }

    /// All k! permutations in lexicographic order of image vectors.
    pub fn all(k: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..k).collect();
        loop {
            out.push(Permutation { images: cur.clone() });
            // next lexicographic permutation
            let Some(i) = (1..k).rev().find(|&i| cur[i - 1] < cur[i]) else {
                break;
            };
            let j = (i..k).rev().find(|&j| cur[j] > cur[i - 1]).expect("pivot exists");
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = crate::Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Permutation::from_images(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Vec<usize> {
        p.images
    }
}

impl fmt::Display for Permutation {
    /// 1-based cycle notation without fixed points; `e` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "e");
        }
        let k = self.degree();
        let sep = if k > 9 { " " } else { "" };
        let mut seen = vec![false; k];
        for start in 0..k {
            if seen[start] || self.images[start] == start {
                continue;
            }
            write!(f, "(")?;
            let mut l = start;
            let mut first = true;
            while !seen[l] {
                seen[l] = true;
                if !first {
                    write!(f, "{sep}")?;
                }
                write!(f, "{}", l + 1)?;
                first = false;
                l = self.images[l];
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}
