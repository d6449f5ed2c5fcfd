//! TOML description of a matrix run.
//!
//! ```toml
//! candidate = "candidate.txt"
//! corpus = "corpus"            # corpus/<author>/<doc>.txt
//! reference = ["extra.txt"]    # optional AUTHOR=FILE or FILE entries
//! seed = 7
//! payload = "HIDDEN"
//! configs = [3, 8, 10]         # default: 1 to 15
//! k = 50
//! strip = false
//! chain = ["de", "ja"]
//!
//! [backends]
//! translation = "cmd:./translate.sh"
//!
//! [seeds]
//! 10 = 99
//! ```
//!
//! Relative paths are resolved against the directory of the file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use inkveil_core::pipeline::{ConfigId, PipelineConfig, Stage};
use inkveil_core::transforms::{BackendSpec, ObfuscationOptions, TransformSeed};
use serde::Deserialize;

use crate::backend::parse_backend_spec;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub candidate: PathBuf,
    #[serde(default)]
    pub corpus: Option<PathBuf>,
    #[serde(default)]
    pub reference: Vec<String>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub payload: String,
    #[serde(default)]
    pub configs: Option<Vec<u8>>,
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub strip: bool,
    #[serde(default)]
    pub chain: Vec<String>,
    #[serde(default)]
    pub imitation_ratio: Option<f64>,
    #[serde(default)]
    pub obfuscation: Option<ObfuscationOptions>,
    /// Stage name → backend spec string, applied to every configuration.
    #[serde(default)]
    pub backends: BTreeMap<String, String>,
    /// Per-configuration seed overrides, keyed by configuration number.
    #[serde(default)]
    pub seeds: BTreeMap<String, u64>,
    /// Seconds before an external backend is abandoned.
    #[serde(default)]
    pub timeout_secs: Option<u64>,
    #[serde(default)]
    pub format: Option<String>,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{0}")]
    Invalid(String),
}

impl MatrixFile {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_owned(),
            source,
        })?;
        let mut file: MatrixFile = toml::from_str(&text).map_err(|e| ConfigError::Parse {
            path: path.to_owned(),
            message: e.to_string(),
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        file.resolve_paths(base);
        Ok(file)
    }

    fn resolve_paths(&mut self, base: &Path) {
        let join = |p: &Path| {
            if p.is_absolute() || p == Path::new("-") {
                p.to_owned()
            } else {
                base.join(p)
            }
        };
        self.candidate = join(&self.candidate);
        self.corpus = self.corpus.as_deref().map(join);
        self.output = self.output.as_deref().map(join);
        for r in &mut self.reference {
            *r = match r.split_once('=') {
                Some((author, p)) if !author.is_empty() => {
                    format!("{author}={}", join(Path::new(p)).display())
                }
                _ => join(Path::new(r.as_str())).display().to_string(),
            };
        }
    }

    pub fn backend_map(&self) -> Result<BTreeMap<Stage, BackendSpec>, ConfigError> {
        self.backends
            .iter()
            .map(|(stage, spec)| {
                let stage = Stage::parse(stage)
                    .ok_or_else(|| ConfigError::Invalid(format!("unknown stage `{stage}`")))?;
                let mut spec = parse_backend_spec(spec).map_err(ConfigError::Invalid)?;
                if let Some(t) = self.timeout_secs {
                    spec.timeout_secs = t;
                }
                Ok((stage, spec))
            })
            .collect()
    }

    pub fn pipeline_configs(&self) -> Result<Vec<PipelineConfig>, ConfigError> {
        let backends = self.backend_map()?;
        let mut overrides = BTreeMap::new();
        for (id, seed) in &self.seeds {
            let id: u8 = id
                .parse()
                .map_err(|_| ConfigError::Invalid(format!("bad configuration number `{id}`")))?;
            overrides.insert(id, *seed);
        }
        let ids: Vec<ConfigId> = match &self.configs {
            Some(ids) => ids
                .iter()
                .map(|&id| ConfigId::new(id).map_err(|e| ConfigError::Invalid(e.to_string())))
                .collect::<Result<_, _>>()?,
            None => ConfigId::all().collect(),
        };
        Ok(ids
            .into_iter()
            .map(|id| {
                let seed = overrides.get(&id.get()).copied().unwrap_or(self.seed);
                let mut config =
                    PipelineConfig::preset(id, TransformSeed(seed), self.payload.clone());
                config.backends = backends
                    .iter()
                    .filter(|(s, _)| id.stages().contains(s))
                    .map(|(s, b)| (*s, b.clone()))
                    .collect();
                config
            })
            .collect())
    }
}
