//! `kfold audit`: measured parameter counts per constraint subset.

use crate::output::{num, OutputSink};
use anyhow::Result;
use kfold_core::commutant::{dimension_audit, AuditReport};

pub fn run(k: usize, ds: &[usize]) -> Result<AuditReport> {
    Ok(dimension_audit(k, ds)?)
}

fn gap(g: Option<f64>) -> String {
    g.map_or(String::new(), num)
}

pub fn write(report: &AuditReport, sink: &mut OutputSink) -> Result<()> {
    sink.json(&format!("audit_k{}.json", report.k), report)?;
    let mut rows = Vec::new();
    for row in &report.rows {
        for s in &row.subsets {
            rows.push(vec![
                row.d.to_string(),
                s.label.clone(),
                s.complex_dim.to_string(),
                s.hermitian_dim.to_string(),
                gap(s.complex_gap),
                gap(s.hermitian_gap),
            ]);
        }
        for u in &row.unmixed {
            rows.push(vec![
                row.d.to_string(),
                format!("unmixed {}", u.label),
                u.complex_dim.to_string(),
                String::new(),
                gap(u.gap),
                String::new(),
            ]);
        }
    }
    sink.csv(
        &format!("audit_k{}.csv", report.k),
        &["d", "subset", "complex_dim", "hermitian_dim", "complex_gap", "hermitian_gap"],
        rows,
    )
}
