//! File emission shared by the subcommands.

use crate::config::Format;
use anyhow::{Context, Result};
use kfold_core::{CMat, C64};
use serde::Serialize;
use std::path::{Path, PathBuf};

/// An output directory plus the formats the user asked for.
pub struct OutputSink {
    dir: PathBuf,
    formats: Vec<Format>,
    written: Vec<PathBuf>,
}

impl OutputSink {
    pub fn new(dir: impl Into<PathBuf>, formats: &[Format]) -> Result<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(OutputSink { dir, formats: formats.to_vec(), written: Vec::new() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn wants(&self, format: Format) -> bool {
        self.formats.contains(&format)
    }

    /// Files written so far, in order.
    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    fn path(&mut self, name: &str) -> PathBuf {
        let p = self.dir.join(name);
        self.written.push(p.clone());
        p
    }

    /// Pretty JSON with a trailing newline. Skipped unless JSON was requested.
    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        if !self.wants(Format::Json) {
            return Ok(());
        }
        let path = self.path(name);
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
    }

    /// CSV with a header row. Skipped unless CSV was requested.
    pub fn csv<I, R>(&mut self, name: &str, header: &[&str], rows: I) -> Result<()>
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator<Item = String>,
    {
        if !self.wants(Format::Csv) {
            return Ok(());
        }
        let path = self.path(name);
        let mut w = csv::Writer::from_path(&path).with_context(|| format!("writing {}", path.display()))?;
        w.write_record(header)?;
        for row in rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// An SVG document. Skipped unless SVG was requested.
    pub fn svg(&mut self, name: &str, document: &str) -> Result<()> {
        if !self.wants(Format::Svg) {
            return Ok(());
        }
        let path = self.path(name);
        std::fs::write(&path, document).with_context(|| format!("writing {}", path.display()))
    }
}

/// Complex matrix as rows of `[re, im]` pairs.
pub fn complex_rows(m: &CMat) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

/// Inverse of [`complex_rows`]; rows must be non-empty and of equal length.
pub fn matrix_from_rows(rows: &[Vec<[f64; 2]>]) -> Result<CMat> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if n == 0 || m == 0 || rows.iter().any(|r| r.len() != m) {
        anyhow::bail!("matrix rows are empty or ragged");
    }
    Ok(CMat::from_fn(n, m, |i, j| C64::new(rows[i][j][0], rows[i][j][1])))
}

/// Shortest round-trip decimal text of a float.
pub fn num(x: f64) -> String {
    format!("{x}")
}
