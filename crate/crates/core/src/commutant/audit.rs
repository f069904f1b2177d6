use super::family::{symmetrized_family, unmixed_commutant_rank, ConstraintSet, PermutationSign};
use crate::error::{invalid, Result};
use crate::repcore::{c_coefficients, reference, signed_c_coefficients};
use serde::{Deserialize, Serialize};

/// Dimensions measured for one constraint subset at one d.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubsetDims {
    pub label: String,
    pub constraints: ConstraintSet,
    pub complex_dim: usize,
    pub hermitian_dim: usize,
    pub complex_gap: Option<f64>,
    pub hermitian_gap: Option<f64>,
    pub complex_singular_values: Vec<f64>,
    pub hermitian_singular_values: Vec<f64>,
}

/// Span dimension of the symmetrized plain permutation operators.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UnmixedDims {
    pub label: String,
    pub complex_dim: usize,
    pub gap: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AuditRow {
    pub d: usize,
    pub subsets: Vec<SubsetDims>,
    pub unmixed: Vec<UnmixedDims>,
    /// Σ C² of the combinatorial table (equals the U+S complex dimension).
    pub c_sum_of_squares: u64,
    /// Σ C² of the half-swap-refined table.
    pub signed_c_sum_of_squares: u64,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReferenceDims {
    pub complex_dim: usize,
    pub hermitian_dim: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AuditReport {
    pub k: usize,
    pub rows: Vec<AuditRow>,
    /// Reference k = 2 counts, present only for k = 2.
    pub reference: Option<ReferenceDims>,
    /// Human-readable list of disagreements with the reference counts and
    /// of d-dependence.
    pub deviations: Vec<String>,
}

impl AuditReport {
    pub fn row(&self, d: usize) -> Option<&AuditRow> {
        self.rows.iter().find(|r| r.d == d)
    }
}

impl AuditRow {
    pub fn subset(&self, label: &str) -> Option<&SubsetDims> {
        self.subsets.iter().find(|s| s.label == label)
    }
}

/// The constraint subsets reported by the audit, in order.
pub fn audit_subsets(k: usize, d: usize) -> Vec<ConstraintSet> {
    let u = ConstraintSet::unitary(k, d);
    vec![
        u,
        u.with_permutations(PermutationSign::Trivial),
        u.with_half_swap(),
        ConstraintSet::all(k, d),
        u.with_permutations(PermutationSign::Sign),
    ]
}

/// Measures every constraint subset for each d and compares with the
/// reference k = 2 counts.
pub fn dimension_audit(k: usize, ds: &[usize]) -> Result<AuditReport> {
    if !(1..=2).contains(&k) {
        return invalid("dimension_audit supports k = 1 and k = 2");
    }
    if ds.is_empty() {
        return invalid("dimension_audit needs at least one d");
    }
    let mut rows = Vec::new();
    let mut deviations = Vec::new();
    for &d in ds {
        let mut subsets = Vec::new();
        for c in audit_subsets(k, d) {
            let f = symmetrized_family(c)?;
            subsets.push(SubsetDims {
                label: c.label(),
                constraints: c,
                complex_dim: f.complex_commutant_dim(),
                hermitian_dim: f.hermitian_dim(),
                complex_gap: f.complex_rank.gap,
                hermitian_gap: f.hermitian_rank.gap,
                complex_singular_values: f.complex_rank.singular_values.clone(),
                hermitian_singular_values: f.hermitian_rank.singular_values.clone(),
            });
        }
        let mut unmixed = Vec::new();
        for c in [ConstraintSet::unitary(k, d).with_permutations(PermutationSign::Trivial), ConstraintSet::all(k, d)] {
            let r = unmixed_commutant_rank(c)?;
            unmixed.push(UnmixedDims { label: c.label(), complex_dim: r.rank, gap: r.gap });
        }
        let mut warnings = Vec::new();
        if d < 2 * k {
            warnings.push(format!(
                "d = {d} < 2k = {}: partitions with more than d rows vanish, so the dimensions fall below their large-d values",
                2 * k
            ));
        }
        rows.push(AuditRow {
            d,
            subsets,
            unmixed,
            c_sum_of_squares: c_coefficients(k, d)?.sum_of_squares(),
            signed_c_sum_of_squares: signed_c_coefficients(k, d)?.sum_of_squares(),
            warnings,
        });
    }

    let reference = (k == 2).then_some(ReferenceDims {
        complex_dim: reference::BIPARTITE_COMPLEX_DIM,
        hermitian_dim: reference::BIPARTITE_HERMITIAN_DIM,
    });
    if let Some(r) = &reference {
        for row in &rows {
            let all = row.subset("U+S+T").expect("audited");
            if all.complex_dim != r.complex_dim || all.hermitian_dim != r.hermitian_dim {
                deviations.push(format!(
                    "d = {}: all constraints give complex {} / Hermitian {}, reference {} / {}",
                    row.d, all.complex_dim, all.hermitian_dim, r.complex_dim, r.hermitian_dim
                ));
            }
            for s in &row.subsets {
                if s.complex_dim == r.complex_dim && s.hermitian_dim == r.hermitian_dim {
                    deviations.push(format!("d = {}: subset {} matches the reference pair", row.d, s.label));
                }
            }
        }
    }
    // d-dependence among the d >= 2k rows.
    let stable: Vec<&AuditRow> = rows.iter().filter(|r| r.d >= 2 * k).collect();
    if let Some(first) = stable.first() {
        for r in &stable[1..] {
            let same = r
                .subsets
                .iter()
                .zip(&first.subsets)
                .all(|(a, b)| a.complex_dim == b.complex_dim && a.hermitian_dim == b.hermitian_dim);
            if !same {
                deviations.push(format!("dimensions at d = {} differ from d = {}", r.d, first.d));
            }
        }
    }
    for r in &rows {
        if r.d < 2 * k {
            deviations.push(format!("d = {} is below 2k; dimensions are d-dependent there", r.d));
        }
    }
    Ok(AuditReport { k, rows, reference, deviations })
}
