//! The fifteen stage combinations and the evaluation matrix.
//!
//! Stages always run in the order translation → imitation → obfuscation →
//! steganography, whatever order a configuration lists them in. Each run is
//! scored with Burrows' Delta against a fixed reference corpus, next to the
//! score of the untransformed candidate.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use sha2::{Digest, Sha256};

use crate::styloscope::{
    burrows_delta, Corpus, DeltaError, DeltaReport, Document, FunctionWords, Preprocess,
};
use crate::text::{join_lines, split_lines};
use crate::transforms::{
    imitate, obfuscate, round_trip_translate, train_style_model, BackendSpec, ObfuscationOptions,
    StyleModel, SynonymDrift, SynonymTable, TransformError, TransformSeed, TranslationBackend,
};
use crate::weaver::{embed_linewise, WeaveError};
use crate::zwcodec::{strip_zero_width, Codebook, ZeroWidthAlphabet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Stage {
    Translation,
    Imitation,
    Obfuscation,
    Steganography,
}

impl Stage {
    pub const CANONICAL: [Stage; 4] = [
        Stage::Translation,
        Stage::Imitation,
        Stage::Obfuscation,
        Stage::Steganography,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Translation => "translation",
            Stage::Imitation => "imitation",
            Stage::Obfuscation => "obfuscation",
            Stage::Steganography => "steganography",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::CANONICAL
            .into_iter()
            .find(|s| s.name().eq_ignore_ascii_case(name))
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

use Stage::{Imitation as I, Obfuscation as O, Steganography as S, Translation as T};

/// Stage sets by configuration number; index 0 is the untransformed
/// baseline.
const PRESETS: [&[Stage]; 16] = [
    &[],
    &[I],
    &[T],
    &[O],
    &[T, I],
    &[I, O],
    &[T, O],
    &[T, I, O],
    &[S],
    &[I, S],
    &[T, S],
    &[O, S],
    &[T, I, S],
    &[I, O, S],
    &[T, O, S],
    &[T, I, O, S],
];

/// Configuration number: 1–15 for the stage combinations, 0 for the
/// baseline that runs no stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "u8", into = "u8"))]
pub struct ConfigId(u8);

impl ConfigId {
    pub const BASELINE: Self = Self(0);

    pub fn new(id: u8) -> Result<Self, PipelineError> {
        if usize::from(id) < PRESETS.len() {
            Ok(Self(id))
        } else {
            Err(PipelineError::UnknownConfig(id))
        }
    }

    pub fn all() -> impl Iterator<Item = ConfigId> {
        (1..PRESETS.len() as u8).map(ConfigId)
    }

    pub fn get(self) -> u8 {
        self.0
    }

    pub fn stages(self) -> &'static [Stage] {
        PRESETS[usize::from(self.0)]
    }

    /// The configuration whose stage set equals `stages`.
    pub fn for_stages(stages: &[Stage]) -> Option<Self> {
        let wanted = canonical(stages);
        PRESETS
            .iter()
            .position(|p| *p == wanted.as_slice())
            .map(|i| Self(i as u8))
    }
}

impl TryFrom<u8> for ConfigId {
    type Error = PipelineError;

    fn try_from(id: u8) -> Result<Self, Self::Error> {
        Self::new(id)
    }
}

impl From<ConfigId> for u8 {
    fn from(id: ConfigId) -> u8 {
        id.0
    }
}

impl fmt::Display for ConfigId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn canonical(stages: &[Stage]) -> Vec<Stage> {
    Stage::CANONICAL
        .into_iter()
        .filter(|s| stages.contains(s))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PipelineConfig {
    pub id: ConfigId,
    pub seed: TransformSeed,
    /// Letters hidden by the steganography stage.
    pub payload: String,
    /// Stages missing from the map use the built-in implementation.
    #[cfg_attr(feature = "serde", serde(default))]
    pub backends: BTreeMap<Stage, BackendSpec>,
}

impl PipelineConfig {
    pub fn preset(id: ConfigId, seed: TransformSeed, payload: impl Into<String>) -> Self {
        Self {
            id,
            seed,
            payload: payload.into(),
            backends: BTreeMap::new(),
        }
    }

    /// Looks up the configuration number for a stage list given in any order.
    pub fn from_stages(
        stages: &[Stage],
        seed: TransformSeed,
        payload: impl Into<String>,
    ) -> Result<Self, PipelineError> {
        let id = ConfigId::for_stages(stages).ok_or(PipelineError::NoSuchCombination)?;
        Ok(Self::preset(id, seed, payload))
    }

    pub fn with_backend(mut self, stage: Stage, spec: BackendSpec) -> Self {
        self.backends.insert(stage, spec);
        self
    }

    /// Stages in execution order.
    pub fn stages(&self) -> &'static [Stage] {
        self.id.stages()
    }

    pub fn backend(&self, stage: Stage) -> BackendSpec {
        self.backends.get(&stage).cloned().unwrap_or_default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PipelineError {
    #[error("configuration {0} does not exist (valid: 0-15)")]
    UnknownConfig(u8),
    #[error("no configuration runs exactly that set of stages")]
    NoSuchCombination,
    #[error("{stage} stage failed: {source}")]
    Stage { stage: Stage, source: StageFailure },
    #[error(transparent)]
    Delta(#[from] DeltaError),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StageFailure {
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Weave(#[from] WeaveError),
}

impl PipelineError {
    fn stage(stage: Stage, source: impl Into<StageFailure>) -> Self {
        Self::Stage {
            stage,
            source: source.into(),
        }
    }

    /// True when an external backend could not be reached.
    pub fn is_backend_failure(&self) -> bool {
        matches!(
            self,
            Self::Stage {
                source: StageFailure::Transform(
                    TransformError::BackendUnavailable(_) | TransformError::Timeout(_)
                ),
                ..
            }
        )
    }
}

/// Turns backend specs into runnable backends. The built-in resolver only
/// knows the offline implementations and reports external specs as
/// unavailable.
pub trait BackendResolver {
    fn resolve(
        &self,
        stage: Stage,
        spec: &BackendSpec,
    ) -> Result<Box<dyn TranslationBackend + '_>, TransformError>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct OfflineResolver;

impl BackendResolver for OfflineResolver {
    fn resolve(
        &self,
        _stage: Stage,
        spec: &BackendSpec,
    ) -> Result<Box<dyn TranslationBackend + '_>, TransformError> {
        Err(TransformError::BackendUnavailable(format!(
            "no runtime for backend {spec}"
        )))
    }
}

/// Shared inputs of every stage.
pub struct StageContext<'a> {
    pub codebook: Codebook,
    pub alphabet: ZeroWidthAlphabet,
    pub synonyms: SynonymTable,
    pub drift: SynonymDrift,
    /// Pivot languages handed to external translation backends.
    pub chain: Vec<String>,
    /// Model used for imitation. When absent, one of order
    /// [`StyleModel::DEFAULT_ORDER`] is trained on the stage input.
    pub style_model: Option<StyleModel>,
    /// Length of appended imitation text relative to the input length.
    pub imitation_ratio: f64,
    pub obfuscation: ObfuscationOptions,
    pub resolver: &'a dyn BackendResolver,
}

impl Default for StageContext<'_> {
    fn default() -> Self {
        Self {
            codebook: Codebook::default(),
            alphabet: ZeroWidthAlphabet::STANDARD,
            drift: SynonymDrift::default(),
            synonyms: SynonymTable::english_with_function_words(),
            chain: Vec::new(),
            style_model: None,
            imitation_ratio: 0.25,
            obfuscation: ObfuscationOptions::default(),
            resolver: &OfflineResolver,
        }
    }
}

impl<'a> StageContext<'a> {
    pub fn with_resolver(resolver: &'a dyn BackendResolver) -> Self {
        Self {
            resolver,
            ..StageContext::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transformed {
    pub text: String,
    pub stages_run: Vec<Stage>,
    /// Payload letters that found no carrier line.
    pub payload_overflow: usize,
}

/// Runs the configured stages over `text` in canonical order.
pub fn apply_config(
    text: &str,
    config: &PipelineConfig,
    ctx: &StageContext<'_>,
) -> Result<Transformed, PipelineError> {
    let mut current = String::from(text);
    let mut stages_run = Vec::new();
    let mut payload_overflow = 0;
    for &stage in config.stages() {
        let seed = config.seed.derive(stage.name());
        let spec = config.backend(stage);
        current = if spec.is_external() {
            if stage == Stage::Steganography {
                return Err(PipelineError::stage(
                    stage,
                    TransformError::BackendUnavailable("steganography is builtin only".into()),
                ));
            }
            let backend = ctx
                .resolver
                .resolve(stage, &spec)
                .map_err(|e| PipelineError::stage(stage, e))?;
            let result = if stage == Stage::Translation {
                round_trip_translate(&current, &ctx.chain, backend.as_ref(), seed)
            } else {
                backend.translate(&strip_zero_width(&current).clean, &[], seed)
            };
            result.map_err(|e| PipelineError::stage(stage, e))?
        } else {
            match stage {
                Stage::Translation => round_trip_translate(&current, &ctx.chain, &ctx.drift, seed)
                    .map_err(|e| PipelineError::stage(stage, e))?,
                Stage::Imitation => imitation_stage(&current, seed, ctx)
                    .map_err(|e| PipelineError::stage(stage, e))?,
                Stage::Obfuscation => obfuscate(&current, seed, &ctx.obfuscation, &ctx.synonyms),
                Stage::Steganography => {
                    let lines = split_lines(&current);
                    let contents: Vec<&str> = lines.iter().map(|l| l.content).collect();
                    let embedded =
                        embed_linewise(&contents, &config.payload, &ctx.codebook, &ctx.alphabet)
                            .map_err(|e| PipelineError::stage(stage, e))?;
                    payload_overflow = embedded.overflow;
                    join_lines(&embedded.lines, &lines)
                }
            }
        };
        stages_run.push(stage);
    }
    Ok(Transformed {
        text: current,
        stages_run,
        payload_overflow,
    })
}

fn imitation_stage(
    text: &str,
    seed: TransformSeed,
    ctx: &StageContext<'_>,
) -> Result<String, TransformError> {
    let trained;
    let model = match &ctx.style_model {
        Some(m) => m,
        None => {
            trained = train_style_model(text, StyleModel::DEFAULT_ORDER, "input")?;
            &trained
        }
    };
    let length = libm::ceil(text.chars().count() as f64 * ctx.imitation_ratio.max(0.0)) as usize;
    let generated = imitate(model, length, seed);
    let mut out = String::from(text);
    if !generated.is_empty() {
        out.push_str(if text.ends_with('\n') { "\n" } else { "\n\n" });
        out.push_str(&generated);
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct MatrixSettings {
    pub k: usize,
    pub preprocess: Preprocess,
    pub function_words: FunctionWords,
}

impl Default for MatrixSettings {
    fn default() -> Self {
        Self {
            k: crate::styloscope::DEFAULT_K,
            preprocess: Preprocess::RAW,
            function_words: FunctionWords::english(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "status", rename_all = "snake_case"))]
pub enum RowStatus {
    Ok,
    Aborted {
        stage: Option<Stage>,
        reason: String,
        backend_failure: bool,
    },
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MatrixRow {
    pub config: ConfigId,
    pub author: String,
    pub delta_adversarial: Option<f64>,
    pub delta_reference: f64,
    pub probability_adversarial: Option<f64>,
    pub probability_reference: f64,
    /// `delta_reference - delta_adversarial`.
    pub delta_change: Option<f64>,
    pub status: RowStatus,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ReportMetadata {
    pub k: usize,
    pub strip_zero_width: bool,
    pub function_words_used: Vec<String>,
    pub reference_digest: String,
    pub candidate_digest: String,
    pub seeds: BTreeMap<ConfigId, TransformSeed>,
    pub backends: BTreeMap<ConfigId, BTreeMap<Stage, String>>,
    pub payload_overflow: BTreeMap<ConfigId, usize>,
    #[cfg_attr(
        feature = "serde",
        serde(default, skip_serializing_if = "Option::is_none")
    )]
    pub generated_at: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MatrixReport {
    pub rows: Vec<MatrixRow>,
    pub metadata: ReportMetadata,
}

impl MatrixReport {
    pub fn rows_for(&self, config: ConfigId) -> impl Iterator<Item = &MatrixRow> {
        self.rows.iter().filter(move |r| r.config == config)
    }
}

/// Transforms `candidate` under every configuration and scores original and
/// transformed text against `reference`. A failing configuration is recorded
/// as aborted rows; the rest of the matrix still runs.
pub fn run_matrix(
    candidate: &Document,
    reference: &Corpus,
    configs: &[PipelineConfig],
    settings: &MatrixSettings,
    ctx: &StageContext<'_>,
) -> Result<MatrixReport, PipelineError> {
    let score = |text: &str, id: &str| -> Result<DeltaReport, DeltaError> {
        let doc = Document::prepared(id, None, text, settings.preprocess);
        burrows_delta(reference, &doc, settings.k, &settings.function_words)
    };
    let original = score(candidate.text(), candidate.id())?;

    let mut rows = Vec::new();
    let mut metadata = ReportMetadata {
        k: settings.k,
        strip_zero_width: settings.preprocess.strip_zero_width,
        function_words_used: original.function_words_used.clone(),
        reference_digest: corpus_digest(reference),
        candidate_digest: hex_digest(candidate.text().as_bytes()),
        seeds: BTreeMap::new(),
        backends: BTreeMap::new(),
        payload_overflow: BTreeMap::new(),
        generated_at: None,
    };

    for config in configs {
        metadata.seeds.insert(config.id, config.seed);
        let backends = config
            .stages()
            .iter()
            .map(|&s| (s, config.backend(s).to_string()))
            .collect();
        metadata.backends.insert(config.id, backends);

        let outcome = apply_config(candidate.text(), config, ctx).and_then(|t| {
            let report = score(&t.text, candidate.id())?;
            Ok((t, report))
        });
        for (author, &delta_reference) in &original.deltas {
            let probability_reference = original.probabilities[author];
            let row = match &outcome {
                Ok((_, adv)) => {
                    let delta = adv.deltas[author];
                    MatrixRow {
                        config: config.id,
                        author: author.clone(),
                        delta_adversarial: Some(delta),
                        delta_reference,
                        probability_adversarial: Some(adv.probabilities[author]),
                        probability_reference,
                        delta_change: Some(delta_reference - delta),
                        status: RowStatus::Ok,
                    }
                }
                Err(e) => MatrixRow {
                    config: config.id,
                    author: author.clone(),
                    delta_adversarial: None,
                    delta_reference,
                    probability_adversarial: None,
                    probability_reference,
                    delta_change: None,
                    status: RowStatus::Aborted {
                        stage: match e {
                            PipelineError::Stage { stage, .. } => Some(*stage),
                            _ => None,
                        },
                        reason: e.to_string(),
                        backend_failure: e.is_backend_failure(),
                    },
                },
            };
            rows.push(row);
        }
        if let Ok((t, _)) = &outcome {
            if config.stages().contains(&Stage::Steganography) {
                metadata
                    .payload_overflow
                    .insert(config.id, t.payload_overflow);
            }
        }
    }
    Ok(MatrixReport { rows, metadata })
}

/// SHA-256 over the corpus documents in (author, id) order.
pub fn corpus_digest(corpus: &Corpus) -> String {
    let mut docs: Vec<&Document> = corpus.documents().iter().collect();
    docs.sort_by(|a, b| (a.author(), a.id()).cmp(&(b.author(), b.id())));
    let mut hasher = Sha256::new();
    for d in docs {
        hasher.update(d.author().unwrap_or("").as_bytes());
        hasher.update([0]);
        hasher.update(d.id().as_bytes());
        hasher.update([0]);
        hasher.update(d.text().as_bytes());
        hasher.update([0]);
    }
    to_hex(&hasher.finalize())
}

pub fn hex_digest(bytes: &[u8]) -> String {
    to_hex(&Sha256::digest(bytes))
}

fn to_hex(bytes: &[u8]) -> String {
    use core::fmt::Write;
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        let _ = write!(s, "{b:02x}");
    }
    s
}
