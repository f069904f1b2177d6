//! Run configuration files.
//!
//! A configuration is a JSON object with a `version` field and no unknown
//! keys. The deserializer is the validator: a failure reports the JSON
//! pointer of the offending value, and nothing is computed before the whole
//! document has been accepted. The accepted shape is documented in
//! `docs/config-schema.md`.

use kfold_core::commutant::{ConstraintSet, PermutationSign};
use kfold_core::ensembles::{EnsembleSpec, PrecisionSpec};
use kfold_core::spectra::WordSpec;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::{Path, PathBuf};

pub const CONFIG_VERSION: u32 = 1;

/// A configuration problem, located by a JSON pointer into the document.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub pointer: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError { pointer: pointer.into(), message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pointer = if self.pointer.is_empty() { "/" } else { &self.pointer };
        write!(f, "config error at {pointer}: {}", self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommandKind {
    Sample,
    Analyze,
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

/// Ensemble whose r̃ distribution the analysis is compared against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reference {
    Gue,
}

fn default_true() -> bool {
    true
}

fn default_unfold_degree() -> usize {
    9
}

fn default_edge_trim() -> f64 {
    0.25
}

fn default_thin() -> usize {
    4
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    #[serde(default = "default_true")]
    pub spacings: bool,
    #[serde(default = "default_unfold_degree")]
    pub unfold_degree: usize,
    /// Fraction of levels [lo, hi) kept for spacing statistics.
    #[serde(default)]
    pub window: Option<[f64; 2]>,
    /// Fraction of unfolded spacings discarded at each spectral edge before
    /// the goodness-of-fit tests.
    #[serde(default = "default_edge_trim")]
    pub edge_trim: f64,
    /// Only every `thin`-th pooled unfolded spacing enters the
    /// goodness-of-fit tests, which keeps the small-matrix surmise within
    /// their resolution.
    #[serde(default = "default_thin")]
    pub thin: usize,
    #[serde(default)]
    pub entanglement_split: Option<[usize; 2]>,
    /// Local dimension and leg count, required by `words`.
    #[serde(default)]
    pub legs: Option<[usize; 2]>,
    #[serde(default)]
    pub words: Vec<String>,
    #[serde(default)]
    pub raw_histograms: bool,
    #[serde(default)]
    pub reference: Option<Reference>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            spacings: true,
            unfold_degree: default_unfold_degree(),
            window: None,
            edge_trim: default_edge_trim(),
            thin: default_thin(),
            entanglement_split: None,
            legs: None,
            words: Vec::new(),
            raw_histograms: false,
            reference: None,
        }
    }
}

impl AnalysisConfig {
    pub fn parsed_words(&self) -> Result<Vec<WordSpec>, ConfigError> {
        if self.words.is_empty() {
            return Ok(Vec::new());
        }
        let Some([_, k]) = self.legs else {
            return Err(ConfigError::new("/analysis/legs", "invariant words need [d, k] legs"));
        };
        self.words
            .iter()
            .enumerate()
            .map(|(i, w)| {
                WordSpec::parse(k, w).map_err(|e| ConfigError::new(format!("/analysis/words/{i}"), e.to_string()))
            })
            .collect()
    }
}

fn default_formats() -> Vec<Format> {
    vec![Format::Csv, Format::Json, Format::Svg]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub dir: Option<PathBuf>,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { dir: None, formats: default_formats() }
    }
}

fn default_invariance_samples() -> usize {
    4000
}

fn default_bootstrap() -> usize {
    24
}

fn default_hciz_samples() -> usize {
    20_000
}

fn default_kfold_constraints() -> ConstraintSet {
    ConstraintSet::unitary(2, 3).with_half_swap()
}

fn default_kfold_precision() -> PrecisionSpec {
    PrecisionSpec::Generic { strength: 0.7, seed: 5 }
}

fn default_heisenberg_sites() -> usize {
    4
}

/// Sizes of the checks run by `verify`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    #[serde(default = "default_invariance_samples")]
    pub invariance_samples: usize,
    #[serde(default = "default_bootstrap")]
    pub bootstrap: usize,
    #[serde(default = "default_kfold_constraints")]
    pub kfold_constraints: ConstraintSet,
    /// Δ used by the k-fold invariance check. Setting a non-invariant
    /// precision here turns the check into a negative control.
    #[serde(default = "default_kfold_precision")]
    pub kfold_precision: PrecisionSpec,
    #[serde(default = "default_heisenberg_sites")]
    pub heisenberg_sites: usize,
    #[serde(default = "default_hciz_samples")]
    pub hciz_samples: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            invariance_samples: default_invariance_samples(),
            bootstrap: default_bootstrap(),
            kfold_constraints: default_kfold_constraints(),
            kfold_precision: default_kfold_precision(),
            heisenberg_sites: default_heisenberg_sites(),
            hciz_samples: default_hciz_samples(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub version: u32,
    #[serde(default)]
    pub command: Option<CommandKind>,
    #[serde(default)]
    pub ensemble: Option<EnsembleSpec>,
    #[serde(default)]
    pub samples: Option<usize>,
    pub seed: u64,
    #[serde(default)]
    pub analysis: AnalysisConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub verify: VerifyConfig,
}

impl RunConfig {
    /// A configuration with every optional section at its default.
    pub fn with_seed(seed: u64) -> Self {
        RunConfig {
            version: CONFIG_VERSION,
            command: None,
            ensemble: None,
            samples: None,
            seed,
            analysis: AnalysisConfig::default(),
            output: OutputConfig::default(),
            verify: VerifyConfig::default(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let pointer = pointer_from_path(e.path());
            ConfigError::new(pointer, e.into_inner().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new("", format!("cannot read {}: {e}", path.display())))?;
        RunConfig::parse(&text)
    }

    /// Checks that serde cannot express.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.version != CONFIG_VERSION {
            return Err(ConfigError::new(
                "/version",
                format!("unsupported version {} (expected {CONFIG_VERSION})", self.version),
            ));
        }
        if self.samples == Some(0) {
            return Err(ConfigError::new("/samples", "must be at least 1"));
        }
        let a = &self.analysis;
        if let Some([lo, hi]) = a.window {
            if !(0.0..1.0).contains(&lo) || !(lo < hi && hi <= 1.0) {
                return Err(ConfigError::new("/analysis/window", "must satisfy 0 <= lo < hi <= 1"));
            }
        }
        if !(0.0..0.5).contains(&a.edge_trim) {
            return Err(ConfigError::new("/analysis/edge_trim", "must lie in [0, 0.5)"));
        }
        if a.thin == 0 {
            return Err(ConfigError::new("/analysis/thin", "must be at least 1"));
        }
        if !(3..=15).contains(&a.unfold_degree) {
            return Err(ConfigError::new("/analysis/unfold_degree", "must lie in 3..=15"));
        }
        a.parsed_words()?;
        if self.output.formats.is_empty() {
            return Err(ConfigError::new("/output/formats", "at least one format is required"));
        }
        let v = &self.verify;
        if v.invariance_samples < 100 {
            return Err(ConfigError::new("/verify/invariance_samples", "must be at least 100"));
        }
        if v.bootstrap < 2 {
            return Err(ConfigError::new("/verify/bootstrap", "must be at least 2"));
        }
        if !(2..=8).contains(&v.heisenberg_sites) {
            return Err(ConfigError::new("/verify/heisenberg_sites", "must lie in 2..=8"));
        }
        if v.hciz_samples < 1000 {
            return Err(ConfigError::new("/verify/hciz_samples", "must be at least 1000"));
        }
        if v.kfold_constraints.k != 2 || v.kfold_constraints.permutation_sign == PermutationSign::Sign {
            return Err(ConfigError::new(
                "/verify/kfold_constraints",
                "the verify suite uses k = 2 with trivial permutation sign",
            ));
        }
        Ok(())
    }

    pub fn ensemble(&self) -> Result<&EnsembleSpec, ConfigError> {
        self.ensemble.as_ref().ok_or_else(|| ConfigError::new("/ensemble", "this command needs an ensemble"))
    }

    pub fn sample_count(&self) -> Result<usize, ConfigError> {
        self.samples.ok_or_else(|| ConfigError::new("/samples", "this command needs a sample count"))
    }
}

/// Converts a serde path such as `analysis.window[1]` into `/analysis/window/1`.
pub(crate) fn pointer_from_path(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1"))),
            Segment::Enum { variant } => out.push_str(&format!("/{variant}")),
            Segment::Unknown => {}
        }
    }
    out
}
