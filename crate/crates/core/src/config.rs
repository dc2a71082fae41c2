//! Per-dataset configuration, read from a TOML document with one
//! `[[dataset]]` table per log source.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::merging::HttpChatSettings;
use crate::preprocessing::{compile_mask_rules, default_mask_rule_specs, HeaderPattern, MaskRuleSpec};
use crate::sampling::{SamplingConfig, SamplingStrategy};
use crate::scalar::Scalar;
use crate::template::LowEntropyPolicy;

pub const DEFAULT_N_LAYERS: usize = 3;
pub const DEFAULT_CANDIDATE_MIN_SIMILARITY: f64 = 0.7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CotMode {
    Off,
    #[default]
    Offline,
    Remote,
}

impl fmt::Display for CotMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CotMode::Off => "off",
            CotMode::Offline => "offline",
            CotMode::Remote => "remote",
        })
    }
}

impl FromStr for CotMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "off" => Ok(CotMode::Off),
            "offline" => Ok(CotMode::Offline),
            "remote" => Ok(CotMode::Remote),
            other => Err(format!(
                "unknown merge mode {other:?} (expected off, offline or remote)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound(deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct DatasetConfig<T> {
    pub name: String,
    /// Relative paths are resolved against the config file's directory.
    pub log_file: PathBuf,
    /// Defaults to `<log_file>_structured.csv`.
    #[serde(default)]
    pub ground_truth: Option<PathBuf>,
    pub header_pattern: String,
    /// Extra single-character delimiters on top of whitespace.
    #[serde(default)]
    pub split_tokens: Vec<String>,
    pub k: usize,
    pub jaccard_threshold: T,
    pub theta: T,
    /// Handling of positions that hold several tokens but are not variable.
    #[serde(default)]
    pub low_entropy_positions: LowEntropyPolicy,
    /// Fold templates into strictly more general templates of their bucket.
    #[serde(default = "default_true")]
    pub consolidate: bool,
    #[serde(default = "default_mask_rule_specs")]
    pub mask_rules: Vec<MaskRuleSpec>,
    #[serde(default)]
    pub cot: CotMode,
    #[serde(default)]
    pub remote: Option<HttpChatSettings>,
    #[serde(default = "default_candidate_min_similarity")]
    pub candidate_min_similarity: T,
    #[serde(default = "default_n_layers")]
    pub n_layers: usize,
    #[serde(default, with = "strategy_string")]
    pub sampling: SamplingStrategy,
}

fn default_candidate_min_similarity<T: Scalar>() -> T {
    T::lit(DEFAULT_CANDIDATE_MIN_SIMILARITY)
}

fn default_true() -> bool {
    true
}

fn default_n_layers() -> usize {
    DEFAULT_N_LAYERS
}

mod strategy_string {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::sampling::SamplingStrategy;

    pub fn serialize<S: Serializer>(s: &SamplingStrategy, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&s.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<SamplingStrategy, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl<T: Scalar> DatasetConfig<T> {
    /// Checks every field contract, naming the dataset and field on failure.
    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, msg: String| Err(Error::config(&self.name, field, msg));
        if self.name.trim().is_empty() {
            return bad("name", "must not be empty".into());
        }
        if self.k < 1 {
            return bad("k", format!("must be at least 1, got {}", self.k));
        }
        if self.n_layers < 1 {
            return bad("n_layers", format!("must be at least 1, got {}", self.n_layers));
        }
        let unit = |x: T| x >= T::zero() && x <= T::one();
        if !unit(self.jaccard_threshold) {
            return bad(
                "jaccard_threshold",
                format!("must lie in [0, 1], got {}", self.jaccard_threshold),
            );
        }
        if !unit(self.candidate_min_similarity) {
            return bad(
                "candidate_min_similarity",
                format!("must lie in [0, 1], got {}", self.candidate_min_similarity),
            );
        }
        if !self.theta.is_finite() || self.theta < T::zero() {
            return bad("theta", format!("must be a finite value >= 0, got {}", self.theta));
        }
        for t in &self.split_tokens {
            if t.chars().count() != 1 {
                return bad("split_tokens", format!("entries must be single characters, got {t:?}"));
            }
        }
        if let Err(e) = HeaderPattern::compile(&self.header_pattern) {
            return bad("header_pattern", e.to_string());
        }
        if let Err(e) = compile_mask_rules(&self.mask_rules) {
            return bad("mask_rules", e.to_string());
        }
        if self.cot == CotMode::Remote && self.remote.is_none() {
            return bad("remote", "cot = \"remote\" needs a [dataset.remote] table".into());
        }
        Ok(())
    }

    pub fn split_chars(&self) -> Vec<char> {
        self.split_tokens.iter().filter_map(|t| t.chars().next()).collect()
    }

    pub fn sampling_config(&self) -> SamplingConfig {
        SamplingConfig {
            k: self.k,
            n_layers: self.n_layers,
            strategy: self.sampling,
        }
    }

    pub fn ground_truth_path(&self) -> PathBuf {
        self.ground_truth.clone().unwrap_or_else(|| {
            let mut s = self.log_file.clone().into_os_string();
            s.push("_structured.csv");
            PathBuf::from(s)
        })
    }

    /// A config with the documented defaults, for programmatic use.
    pub fn new(name: &str, header_pattern: &str, k: usize, jaccard_threshold: T, theta: T) -> Self {
        DatasetConfig {
            name: name.to_string(),
            log_file: PathBuf::new(),
            ground_truth: None,
            header_pattern: header_pattern.to_string(),
            split_tokens: Vec::new(),
            k,
            jaccard_threshold,
            theta,
            low_entropy_positions: LowEntropyPolicy::default(),
            consolidate: true,
            mask_rules: default_mask_rule_specs(),
            cot: CotMode::default(),
            remote: None,
            candidate_min_similarity: default_candidate_min_similarity(),
            n_layers: DEFAULT_N_LAYERS,
            sampling: SamplingStrategy::default(),
        }
    }

    pub fn with_split_tokens(mut self, tokens: &[&str]) -> Self {
        self.split_tokens = tokens.iter().map(|s| s.to_string()).collect();
        self
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, bound(deserialize = "T: Scalar + Deserialize<'de>"))]
struct ConfigFile<T> {
    #[serde(default = "Vec::new")]
    dataset: Vec<DatasetConfig<T>>,
}

/// Parses and validates a config document. Relative paths are resolved
/// against `base_dir`.
pub fn parse_config<T: Scalar + for<'de> Deserialize<'de>>(
    text: &str,
    base_dir: &Path,
) -> Result<Vec<DatasetConfig<T>>> {
    let file: ConfigFile<T> = toml::from_str(text).map_err(|e| Error::config("", "<document>", e.to_string()))?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(file.dataset.len());
    for mut ds in file.dataset {
        ds.validate()?;
        if !seen.insert(ds.name.clone()) {
            return Err(Error::config(&ds.name, "name", "duplicate dataset name"));
        }
        if ds.log_file.is_relative() {
            ds.log_file = base_dir.join(&ds.log_file);
        }
        if let Some(gt) = ds.ground_truth.as_mut().filter(|p| p.is_relative()) {
            *gt = base_dir.join(&*gt);
        }
        out.push(ds);
    }
    Ok(out)
}

pub fn load_config<T: Scalar + for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<DatasetConfig<T>>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    parse_config(&text, base)
}
