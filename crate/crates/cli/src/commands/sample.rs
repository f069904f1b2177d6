//! `kfold sample`: deterministic batches written as JSON and CSV.

use crate::config::{pointer_from_path, ConfigError, RunConfig, CONFIG_VERSION};
use crate::output::{complex_rows, matrix_from_rows, num, OutputSink};
use anyhow::{Context, Result};
use kfold_core::ensembles::{EnsembleSpec, SampleBatch, Sampler};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Largest Hermitian defect accepted when reading a batch back.
const HERMITIAN_TOL: f64 = 1e-9;

/// On-disk batch: each sample is a matrix of `[re, im]` pairs.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BatchFile {
    pub version: u32,
    pub ensemble: EnsembleSpec,
    pub master_seed: u64,
    pub seeds: Vec<u64>,
    pub samples: Vec<Vec<Vec<[f64; 2]>>>,
}

impl BatchFile {
    pub fn from_batch(batch: &SampleBatch) -> Self {
        BatchFile {
            version: CONFIG_VERSION,
            ensemble: batch.spec.clone(),
            master_seed: batch.master_seed,
            seeds: batch.seeds.clone(),
            samples: batch.samples.iter().map(complex_rows).collect(),
        }
    }

    pub fn into_batch(self) -> Result<SampleBatch> {
        if self.version != CONFIG_VERSION {
            return Err(ConfigError::new("/version", format!("unsupported batch version {}", self.version)).into());
        }
        if self.seeds.len() != self.samples.len() {
            return Err(ConfigError::new("/seeds", "one seed per sample is required").into());
        }
        let mut samples = Vec::with_capacity(self.samples.len());
        for (i, rows) in self.samples.iter().enumerate() {
            let m = matrix_from_rows(rows).map_err(|e| ConfigError::new(format!("/samples/{i}"), e.to_string()))?;
            let scale = m.norm().max(1.0);
            if m.nrows() != m.ncols() || (&m - m.adjoint()).norm() > HERMITIAN_TOL * scale {
                return Err(ConfigError::new(format!("/samples/{i}"), "sample is not a Hermitian square matrix").into());
            }
            samples.push(m);
        }
        Ok(SampleBatch { spec: self.ensemble, master_seed: self.master_seed, seeds: self.seeds, samples })
    }
}

pub fn load(path: &Path) -> Result<SampleBatch> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    let file: BatchFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let pointer = pointer_from_path(e.path());
        ConfigError::new(pointer, e.into_inner().to_string())
    })?;
    file.into_batch()
}

pub fn run(cfg: &RunConfig) -> Result<SampleBatch> {
    let spec = cfg.ensemble()?.clone();
    let count = cfg.sample_count()?;
    let sampler = Sampler::new(spec)?;
    Ok(sampler.batch(cfg.seed, count)?)
}

pub fn write(batch: &SampleBatch, sink: &mut OutputSink) -> Result<()> {
    sink.json("batch.json", &BatchFile::from_batch(batch))?;
    let mut rows = Vec::new();
    for (s, (h, seed)) in batch.samples.iter().zip(&batch.seeds).enumerate() {
        for i in 0..h.nrows() {
            for j in 0..h.ncols() {
                let z = h[(i, j)];
                rows.push(vec![s.to_string(), seed.to_string(), i.to_string(), j.to_string(), num(z.re), num(z.im)]);
            }
        }
    }
    sink.csv("batch.csv", &["sample", "seed", "row", "col", "re", "im"], rows)
}
