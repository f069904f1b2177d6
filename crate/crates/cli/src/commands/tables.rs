//! `kfold tables`: character, branching, Kronecker and C-coefficient tables.

use crate::output::OutputSink;
use anyhow::Result;
use kfold_core::repcore::{
    branching, c_coefficients, enumerate_partitions, kronecker, reference, signed_c_coefficients, CTable,
};
use kfold_core::{CharacterTable, Partition};
use serde::Serialize;

/// Largest S_k handled by the command.
pub const MAX_TABLE_K: usize = 4;

#[derive(Clone, Debug, Serialize)]
pub struct CharacterRow {
    pub irrep: String,
    pub values: Vec<i64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CharacterReport {
    pub classes: Vec<String>,
    pub class_sizes: Vec<u128>,
    pub rows: Vec<CharacterRow>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchingRow {
    pub mu: String,
    pub lambda: String,
    pub lambda_prime: String,
    pub multiplicity: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct KroneckerRow {
    pub lambda: String,
    pub lambda_prime: String,
    pub mu: String,
    pub coefficient: u64,
}

/// One entry where the computed table and the reference values differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub table: String,
    pub entry: String,
    pub computed: i64,
    pub reference: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TablesReport {
    pub k: usize,
    pub d: usize,
    pub characters: CharacterReport,
    /// Restriction S_k → S_{k/2} × S_{k/2}; empty for odd k.
    pub branching: Vec<BranchingRow>,
    /// Kronecker coefficients of S_{k/2}; empty for odd k.
    pub kronecker: Vec<KroneckerRow>,
    /// Bipartite C table for k/2-fold invariance at local dimension d.
    pub c_table: Option<CTable>,
    /// The same table refined by the half-swap eigenvalue.
    pub signed_c_table: Option<CTable>,
    pub c_sum_of_squares: Option<u64>,
    /// Present only for k = 4, where reference values exist.
    pub discrepancies: Option<Vec<Discrepancy>>,
}

fn p(parts: &[usize]) -> Partition {
    Partition::new(parts.to_vec()).expect("reference partitions are valid")
}

pub fn run(k: usize, d: usize) -> Result<TablesReport> {
    if k == 0 || d == 0 {
        return Err(kfold_core::Error::InvalidArgument("tables need k >= 1 and d >= 1".into()).into());
    }
    if k > MAX_TABLE_K {
        return Err(kfold_core::Error::ResourceLimit(format!("tables support k <= {MAX_TABLE_K}, got {k}")).into());
    }
    let table = CharacterTable::new(k)?;
    let characters = CharacterReport {
        classes: table.classes.iter().map(|c| c.lengths.label()).collect(),
        class_sizes: table.classes.iter().map(|c| c.class_size).collect(),
        rows: table
            .irreps
            .iter()
            .zip(&table.values)
            .map(|(l, v)| CharacterRow { irrep: l.label(), values: v.clone() })
            .collect(),
    };

    let mut branching_rows = Vec::new();
    let mut kronecker_rows = Vec::new();
    let (mut c_table, mut signed_c_table) = (None, None);
    if k % 2 == 0 {
        let h = k / 2;
        for mu in enumerate_partitions(k, None)? {
            for e in branching(&mu, h, h)? {
                branching_rows.push(BranchingRow {
                    mu: mu.label(),
                    lambda: e.lambda.label(),
                    lambda_prime: e.lambda_prime.label(),
                    multiplicity: e.multiplicity,
                });
            }
        }
        let parts = enumerate_partitions(h, None)?;
        for l in &parts {
            for lp in &parts {
                for mu in &parts {
                    let c = kronecker(l, lp, mu)?;
                    if c > 0 {
                        kronecker_rows.push(KroneckerRow {
                            lambda: l.label(),
                            lambda_prime: lp.label(),
                            mu: mu.label(),
                            coefficient: c,
                        });
                    }
                }
            }
        }
        c_table = Some(c_coefficients(h, d)?);
        signed_c_table = Some(signed_c_coefficients(h, d)?);
    }
    let discrepancies =
        if k == 4 { Some(compare_with_reference(&table, c_table.as_ref().expect("k = 4 is even"))?) } else { None };
    Ok(TablesReport {
        k,
        d,
        characters,
        branching: branching_rows,
        kronecker: kronecker_rows,
        c_sum_of_squares: c_table.as_ref().map(CTable::sum_of_squares),
        c_table,
        signed_c_table,
        discrepancies,
    })
}

/// Entry-by-entry comparison of the S₄ / k = 2 tables with the reference
/// values. Entries are matched by label, never by position.
pub fn compare_with_reference(table: &CharacterTable, c: &CTable) -> Result<Vec<Discrepancy>> {
    let mut out = Vec::new();
    for (irrep, values) in reference::S4_CHARACTERS.iter() {
        let lam = p(irrep);
        for (cls, &expected) in reference::S4_CLASSES.iter().zip(values) {
            let computed = table.value(&lam, &p(cls)).expect("S4 table covers every class");
            if computed != expected {
                out.push(Discrepancy {
                    table: "character".into(),
                    entry: format!("chi_{}{}", lam.label(), p(cls).label()),
                    computed,
                    reference: expected,
                });
            }
        }
    }

    let refs: Vec<(Partition, Partition, Partition, u64)> =
        reference::S4_BRANCHING.iter().map(|(m, l, lp, b)| (p(m), p(l), p(lp), *b)).collect();
    for mu in enumerate_partitions(4, None)? {
        let computed = branching(&mu, 2, 2)?;
        for lam in enumerate_partitions(2, None)? {
            for lamp in enumerate_partitions(2, None)? {
                let c =
                    computed.iter().find(|e| e.lambda == lam && e.lambda_prime == lamp).map_or(0, |e| e.multiplicity);
                let r = refs.iter().find(|(m, l, lp, _)| *m == mu && *l == lam && *lp == lamp).map_or(0, |e| e.3);
                if c != r {
                    out.push(Discrepancy {
                        table: "branching".into(),
                        entry: format!("B^{}{}_{}", lam.label(), lamp.label(), mu.label()),
                        computed: c as i64,
                        reference: r as i64,
                    });
                }
            }
        }
    }

    let parts2 = enumerate_partitions(2, None)?;
    for l in &parts2 {
        for lp in &parts2 {
            for mu in &parts2 {
                let c = kronecker(l, lp, mu)?;
                let r = reference::S2_KRONECKER
                    .iter()
                    .find(|(a, b, m, _)| {
                        // Listed once per unordered pair; c is symmetric in λ, λ'.
                        let (a, b) = (p(a), p(b));
                        ((a == *l && b == *lp) || (a == *lp && b == *l)) && p(m) == *mu
                    })
                    .map_or(0, |e| e.3);
                if c != r {
                    out.push(Discrepancy {
                        table: "kronecker".into(),
                        entry: format!("c^{}_{}{}", mu.label(), l.label(), lp.label()),
                        computed: c as i64,
                        reference: r as i64,
                    });
                }
            }
        }
    }

    if c.k == 2 {
        for mu in enumerate_partitions(4, None)? {
            for mp in &parts2 {
                let computed = c.get(&mu, mp);
                let r = reference::BIPARTITE_C.iter().find(|(m, q, _)| p(m) == mu && p(q) == *mp).map_or(0, |e| e.2);
                if computed != r {
                    out.push(Discrepancy {
                        table: "c_coefficients".into(),
                        entry: format!("C_{}{}", mu.label(), mp.label()),
                        computed: computed as i64,
                        reference: r as i64,
                    });
                }
            }
        }
        let total = c.sum_of_squares() as i64;
        if total != reference::BIPARTITE_COMPLEX_DIM as i64 {
            out.push(Discrepancy {
                table: "c_coefficients".into(),
                entry: "sum_of_squares".into(),
                computed: total,
                reference: reference::BIPARTITE_COMPLEX_DIM as i64,
            });
        }
    }
    Ok(out)
}

pub fn write(report: &TablesReport, sink: &mut OutputSink) -> Result<()> {
    let k = report.k;
    sink.json(&format!("tables_k{k}_d{}.json", report.d), report)?;
    let mut header = vec!["irrep".to_string()];
    header.extend(report.characters.classes.iter().cloned());
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    sink.csv(
        &format!("characters_s{k}.csv"),
        &header_refs,
        report.characters.rows.iter().map(|r| {
            std::iter::once(r.irrep.clone()).chain(r.values.iter().map(|v| v.to_string())).collect::<Vec<_>>()
        }),
    )?;
    if k % 2 == 0 {
        sink.csv(
            &format!("branching_s{k}.csv"),
            &["mu", "lambda", "lambda_prime", "multiplicity"],
            report
                .branching
                .iter()
                .map(|b| vec![b.mu.clone(), b.lambda.clone(), b.lambda_prime.clone(), b.multiplicity.to_string()]),
        )?;
        sink.csv(
            &format!("kronecker_s{}.csv", k / 2),
            &["lambda", "lambda_prime", "mu", "coefficient"],
            report
                .kronecker
                .iter()
                .map(|r| vec![r.lambda.clone(), r.lambda_prime.clone(), r.mu.clone(), r.coefficient.to_string()]),
        )?;
        let rows = |t: &CTable| -> Vec<Vec<String>> {
            t.entries
                .iter()
                .map(|e| {
                    vec![
                        e.mu.label(),
                        e.mu_prime.label(),
                        e.swap.map_or(String::new(), |s| s.symbol().to_string()),
                        e.count.to_string(),
                    ]
                })
                .collect()
        };
        let header = ["mu", "mu_prime", "swap", "count"];
        if let Some(t) = &report.c_table {
            sink.csv(&format!("c_coefficients_k{}_d{}.csv", k / 2, report.d), &header, rows(t))?;
        }
        if let Some(t) = &report.signed_c_table {
            sink.csv(&format!("c_coefficients_signed_k{}_d{}.csv", k / 2, report.d), &header, rows(t))?;
        }
    }
    if let Some(ds) = &report.discrepancies {
        sink.csv(
            "discrepancies.csv",
            &["table", "entry", "computed", "reference"],
            ds.iter().map(|d| vec![d.table.clone(), d.entry.clone(), d.computed.to_string(), d.reference.to_string()]),
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s4_report_flags_the_known_disagreements() {
        let r = run(4, 4).unwrap();
        assert_eq!(r.characters.rows.len(), 5);
        assert_eq!(r.c_sum_of_squares, Some(16));
        let ds = r.discrepancies.unwrap();
        let c22 = ds.iter().find(|d| d.entry == "C_(2,2)(2)").unwrap();
        assert_eq!((c22.computed, c22.reference), (2, 1));
        assert!(ds.iter().any(|d| d.table == "character"));
        // Kronecker coefficients of S₂ agree with the reference values.
        assert!(ds.iter().all(|d| d.table != "kronecker"));
    }

    #[test]
    fn caps_and_odd_k() {
        let err = run(5, 2).unwrap_err();
        assert_eq!(crate::exit_code(&err), crate::exit::RESOURCE);
        let r = run(3, 2).unwrap();
        assert!(r.branching.is_empty() && r.c_table.is_none() && r.discrepancies.is_none());
    }
}
