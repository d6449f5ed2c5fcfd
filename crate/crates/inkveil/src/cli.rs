//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 backend failure.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use inkveil_core::pipeline::{
    apply_config, run_matrix, MatrixSettings, PipelineConfig, PipelineError, RowStatus, Stage,
    StageContext,
};
use inkveil_core::styloscope::{
    burrows_delta, extract_features, Corpus, DeltaError, Document, FeatureConfig, FeatureError,
    NgramRange, Preprocess, DEFAULT_K,
};
use inkveil_core::text::split_lines;
use inkveil_core::transforms::{
    train_style_model, BackendSpec, StyleModel, TransformError, TransformSeed,
};
use inkveil_core::weaver::{
    embed_linewise, extract_linewise, weave_into_unigram, Placement, WeaveError,
};
use inkveil_core::zwcodec::{
    build_codebook, decode_stream, encode_message, is_zero_width, scan_text, strip_zero_width,
    CodecError, ZeroWidthAlphabet,
};
use serde_json::json;

use crate::backend::{parse_backend_spec, RuntimeResolver};
use crate::config::{ConfigError, MatrixFile};
use crate::io::{
    load_candidate, load_corpus, load_labeled, read_text, write_file, write_text, IoError,
};
use crate::report::{code_point, emit_delta, emit_report, emit_scan, to_json, Format, ReportError};

#[derive(Debug, Parser)]
#[command(
    name = "inkveil",
    version,
    about = "Zero-width steganography and stylometric evasion toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for every randomized step.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// TOML run description (matrix).
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Remove zero-width code points before stylometric analysis.
    #[arg(long, global = true)]
    pub strip: bool,
    /// Output format: json, csv or markdown.
    #[arg(long, global = true, value_name = "FORMAT")]
    pub format: Option<String>,
    /// Show zero-width code points as U+XXXX, and accept that notation on input.
    #[arg(long, global = true)]
    pub escaped: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encode letters A-Z as a zero-width stream.
    Encode(PayloadArgs),
    /// Decode the zero-width stream found in the input.
    Decode(InputArg),
    /// Remove zero-width code points, printing the visible text.
    Strip(InputArg),
    /// Report zero-width code points with their offsets.
    Scan(InputArg),
    /// Weave a payload between the characters of one word.
    Weave {
        #[arg(long)]
        word: String,
        #[command(flatten)]
        payload: PayloadArgs,
        #[arg(long, value_enum, default_value_t = PlacementArg::RoundRobin)]
        placement: PlacementArg,
    },
    /// Hide one letter per line in the first word of each line.
    EmbedLines {
        #[command(flatten)]
        payload: PayloadArgs,
        #[command(flatten)]
        input: InputArg,
    },
    /// Recover letters hidden with embed-lines.
    ExtractLines(InputArg),
    /// Run adversarial stages over a text.
    Transform {
        /// Stages to run; order is irrelevant.
        #[arg(long = "stage", value_enum, value_delimiter = ',', required = true)]
        stages: Vec<StageArg>,
        /// `SPEC` for translation, or `STAGE=SPEC`; SPEC is builtin, cmd:<command> or a URL.
        #[arg(long = "backend", value_name = "SPEC")]
        backends: Vec<String>,
        /// Pivot languages for external translation.
        #[arg(long, value_delimiter = ',')]
        chain: Vec<String>,
        /// Text whose style the imitation stage copies; defaults to the input.
        #[arg(long, value_name = "FILE")]
        style: Option<PathBuf>,
        #[command(flatten)]
        payload: PayloadArgs,
        #[command(flatten)]
        input: InputArg,
    },
    /// Extract lexical features.
    Features {
        #[command(flatten)]
        sources: SourceArgs,
        #[arg(long, value_name = "MIN..MAX")]
        ngrams: Option<String>,
    },
    /// Burrows' Delta of a candidate against a reference corpus.
    Delta {
        #[command(flatten)]
        sources: SourceArgs,
        /// Number of most frequent function words (default 50).
        #[arg(long)]
        k: Option<usize>,
    },
    /// Run configurations 1-15 and compare Delta before and after.
    Matrix {
        #[command(flatten)]
        sources: SourceArgs,
        /// Number of most frequent function words (default 50).
        #[arg(long)]
        k: Option<usize>,
        /// Configuration numbers to run (default 1-15).
        #[arg(long, value_delimiter = ',')]
        configs: Vec<u8>,
        #[command(flatten)]
        payload: PayloadArgs,
        /// `SPEC` for translation, or `STAGE=SPEC`; SPEC is builtin, cmd:<command> or a URL.
        #[arg(long = "backend", value_name = "SPEC")]
        backends: Vec<String>,
        /// Pivot languages for external translation.
        #[arg(long, value_delimiter = ',')]
        chain: Vec<String>,
        /// Write the report here instead of standard output.
        #[arg(long, value_name = "FILE")]
        output: Option<PathBuf>,
        /// Leave the generation time out of the report.
        #[arg(long)]
        no_timestamp: bool,
    },
}

#[derive(Debug, Clone, Args)]
pub struct PayloadArgs {
    /// Letters to hide.
    #[arg(long, conflicts_with = "payload_file")]
    pub message: Option<String>,
    /// File holding the letters to hide.
    #[arg(long, value_name = "FILE")]
    pub payload_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct InputArg {
    /// Input file; `-` reads standard input.
    #[arg(default_value = "-")]
    pub input: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// Reference corpus laid out as DIR/<author>/<doc>.txt.
    #[arg(long, value_name = "DIR")]
    pub corpus: Option<PathBuf>,
    /// Extra reference document, `AUTHOR=FILE` or `FILE`.
    #[arg(long, value_name = "FILE")]
    pub reference: Vec<String>,
    /// Text under examination; `-` reads standard input.
    #[arg(long, value_name = "FILE")]
    pub candidate: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PlacementArg {
    RoundRobin,
    AfterFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StageArg {
    Translation,
    Imitation,
    Obfuscation,
    Steganography,
}

impl From<StageArg> for Stage {
    fn from(s: StageArg) -> Self {
        match s {
            StageArg::Translation => Stage::Translation,
            StageArg::Imitation => Stage::Imitation,
            StageArg::Obfuscation => Stage::Obfuscation,
            StageArg::Steganography => Stage::Steganography,
        }
    }
}

/// Subcommand names paired with the library operation each one exposes.
pub const COMMAND_TABLE: [(&str, &str); 11] = [
    ("encode", "zwcodec::encode_message"),
    ("decode", "zwcodec::decode_stream"),
    ("strip", "zwcodec::strip_zero_width"),
    ("scan", "zwcodec::scan_text"),
    ("weave", "weaver::weave_into_unigram"),
    ("embed-lines", "weaver::embed_linewise"),
    ("extract-lines", "weaver::extract_linewise"),
    ("transform", "pipeline::apply_config"),
    ("features", "styloscope::extract_features"),
    ("delta", "styloscope::burrows_delta"),
    ("matrix", "pipeline::run_matrix"),
];

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Backend(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 1,
            Self::Data(_) => 2,
            Self::Backend(_) => 3,
        }
    }
}

macro_rules! data_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                Self::Data(e.to_string())
            }
        }
    )*};
}
data_error!(IoError, CodecError, WeaveError, DeltaError);

impl From<ReportError> for CliError {
    fn from(e: ReportError) -> Self {
        Self::Usage(e.to_string())
    }
}

impl From<FeatureError> for CliError {
    fn from(e: FeatureError) -> Self {
        Self::Usage(e.to_string())
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        Self::Usage(e.to_string())
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        if e.is_backend_failure() {
            Self::Backend(e.to_string())
        } else {
            Self::Data(e.to_string())
        }
    }
}

impl From<TransformError> for CliError {
    fn from(e: TransformError) -> Self {
        match e {
            TransformError::BackendUnavailable(_) | TransformError::Timeout(_) => {
                Self::Backend(e.to_string())
            }
            _ => Self::Data(e.to_string()),
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = write!(stderr, "{e}");
            return 1;
        }
        Err(e) => {
            let _ = write!(stdout, "{e}");
            return 0;
        }
    };
    match dispatch(&cli, stdin, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

fn dispatch(
    cli: &Cli,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32, CliError> {
    let mut io = Io {
        stdin,
        stdout,
        stderr,
    };
    let format = cli
        .format
        .as_deref()
        .map(str::parse::<Format>)
        .transpose()?;
    let tabular = matches!(
        cli.command,
        Command::Scan(_)
            | Command::Features { .. }
            | Command::Delta { .. }
            | Command::Matrix { .. }
    );
    if !tabular {
        text_format(format)?;
    }
    let codebook = build_codebook();
    let alphabet = ZeroWidthAlphabet::STANDARD;
    let seed = TransformSeed(cli.seed.unwrap_or(0));
    let preprocess = Preprocess {
        strip_zero_width: cli.strip,
    };

    match &cli.command {
        Command::Encode(payload) => {
            let message = payload.read()?;
            let stream = encode_message(&message, &codebook, &alphabet)?;
            match text_format(format)? {
                Some(_) => out(
                    &mut io,
                    &to_json(&json!({ "stream": stream.escaped(), "units": stream.len() })),
                )?,
                None if cli.escaped => out(&mut io, &format!("{}\n", stream.escaped()))?,
                None => write_text(io.stdout, &stream.to_string())?,
            }
        }
        Command::Decode(input) => {
            let text = input_text(cli, input, &mut io)?;
            let stripped = strip_zero_width(&text);
            let message = decode_stream(stripped.extracted.units(), &codebook, &alphabet)?;
            match text_format(format)? {
                Some(_) => out(&mut io, &to_json(&json!({ "message": message })))?,
                None => out(&mut io, &format!("{message}\n"))?,
            }
        }
        Command::Strip(input) => {
            let text = input_text(cli, input, &mut io)?;
            let stripped = strip_zero_width(&text);
            match text_format(format)? {
                Some(_) => out(
                    &mut io,
                    &to_json(&json!({
                        "clean": stripped.clean,
                        "extracted": stripped.extracted.escaped(),
                        "offsets": stripped.offsets,
                    })),
                )?,
                None => write_text(io.stdout, &stripped.clean)?,
            }
        }
        Command::Scan(input) => {
            let text = input_text(cli, input, &mut io)?;
            out(
                &mut io,
                &emit_scan(&scan_text(&text), format.unwrap_or_default())?,
            )?;
        }
        Command::Weave {
            word,
            payload,
            placement,
        } => {
            let stream = encode_message(&payload.read()?, &codebook, &alphabet)?;
            let placement = match placement {
                PlacementArg::RoundRobin => Placement::RoundRobin,
                PlacementArg::AfterFirst => Placement::AfterFirst,
            };
            let woven = weave_into_unigram(word, &stream, placement)?;
            match text_format(format)? {
                Some(_) => out(
                    &mut io,
                    &to_json(&json!({
                        "surface": escape_invisibles(&woven.surface),
                        "origin": woven.origin,
                        "payload": woven.payload.escaped(),
                    })),
                )?,
                None => emit_text(cli, &mut io, &woven.surface)?,
            }
        }
        Command::EmbedLines { payload, input } => {
            let secret = payload.read()?;
            let text = input_text(cli, input, &mut io)?;
            let lines = split_lines(&text);
            let contents: Vec<&str> = lines.iter().map(|l| l.content).collect();
            let embedded = embed_linewise(&contents, &secret, &codebook, &alphabet)?;
            let result = inkveil_core::text::join_lines(&embedded.lines, &lines);
            if embedded.overflow > 0 {
                let _ = writeln!(
                    io.stderr,
                    "warning: {} letter(s) did not fit; add more lines",
                    embedded.overflow
                );
            }
            match text_format(format)? {
                Some(_) => out(
                    &mut io,
                    &to_json(&json!({
                        "text": escape_invisibles(&result),
                        "modified": embedded.modified,
                        "overflow": embedded.overflow,
                    })),
                )?,
                None => emit_text(cli, &mut io, &result)?,
            }
        }
        Command::ExtractLines(input) => {
            let text = input_text(cli, input, &mut io)?;
            let lines: Vec<&str> = split_lines(&text).iter().map(|l| l.content).collect();
            let message = extract_linewise(&lines, &codebook, &alphabet)?;
            match text_format(format)? {
                Some(_) => out(&mut io, &to_json(&json!({ "message": message })))?,
                None => out(&mut io, &format!("{message}\n"))?,
            }
        }
        Command::Transform {
            stages,
            backends,
            chain,
            style,
            payload,
            input,
        } => {
            let stages: Vec<Stage> = stages.iter().map(|&s| s.into()).collect();
            let secret = if stages.contains(&Stage::Steganography) {
                payload.read()?
            } else {
                String::new()
            };
            let mut config = PipelineConfig::from_stages(&stages, seed, secret)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            for (stage, spec) in parse_backends(backends)? {
                config = config.with_backend(stage, spec);
            }
            let text = input_text(cli, input, &mut io)?;
            let resolver = RuntimeResolver;
            let mut ctx = StageContext::with_resolver(&resolver);
            ctx.chain = chain.clone();
            if let Some(path) = style {
                let style_text = read_text(path, io.stdin)?;
                ctx.style_model = Some(train_style_model(
                    &style_text,
                    StyleModel::DEFAULT_ORDER,
                    &path.display().to_string(),
                )?);
            }
            let transformed = apply_config(&text, &config, &ctx)?;
            match text_format(format)? {
                Some(_) => out(
                    &mut io,
                    &to_json(&json!({
                        "config": config.id.get(),
                        "stages": transformed.stages_run,
                        "seed": seed.0,
                        "text": escape_invisibles(&transformed.text),
                        "payload_overflow": transformed.payload_overflow,
                    })),
                )?,
                None => emit_text(cli, &mut io, &transformed.text)?,
            }
        }
        Command::Features { sources, ngrams } => {
            let mut docs: Vec<Document> = match load_reference(sources, preprocess, false) {
                Ok(c) => c.documents().to_vec(),
                Err(_) if sources.candidate.is_some() => Vec::new(),
                Err(e) => return Err(e),
            };
            if let Some(path) = &sources.candidate {
                docs.push(load_candidate(path, io.stdin, preprocess)?);
            }
            let config = FeatureConfig {
                ngrams: ngrams
                    .as_deref()
                    .map(parse_ngrams)
                    .transpose()?
                    .unwrap_or_default(),
                ..FeatureConfig::default()
            };
            let features = extract_features(&docs, &config)?;
            match format.unwrap_or_default() {
                Format::Json => {
                    let entries: Vec<_> = docs
                        .iter()
                        .zip(&features)
                        .map(|(d, f)| json!({ "id": d.id(), "author": d.author(), "features": f }))
                        .collect();
                    out(&mut io, &to_json(&entries))?;
                }
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record([
                        "id",
                        "author",
                        "avg_chars_per_token",
                        "vocab_richness",
                        "char_ngram_terms",
                        "special_char_terms",
                    ])
                    .expect("in-memory write");
                    for (d, f) in docs.iter().zip(&features) {
                        w.write_record([
                            d.id().to_owned(),
                            d.author().unwrap_or("").to_owned(),
                            f.avg_chars_per_token.to_string(),
                            f.vocab_richness.to_string(),
                            f.char_ngram_tfidf.len().to_string(),
                            f.special_char_tfidf.len().to_string(),
                        ])
                        .expect("in-memory write");
                    }
                    out(
                        &mut io,
                        &String::from_utf8(w.into_inner().expect("in-memory flush"))
                            .expect("UTF-8"),
                    )?;
                }
                Format::Markdown => return Err(ReportError::NotAvailable("markdown").into()),
            }
        }
        Command::Delta { sources, k } => {
            let reference = load_reference(sources, preprocess, true)?;
            let path = sources
                .candidate
                .as_deref()
                .ok_or_else(|| CliError::Usage("--candidate is required".into()))?;
            let candidate = load_candidate(path, io.stdin, preprocess)?;
            let fw = inkveil_core::styloscope::FunctionWords::english();
            let report = burrows_delta(&reference, &candidate, k.unwrap_or(DEFAULT_K), &fw)?;
            out(&mut io, &emit_delta(&report, format.unwrap_or_default()))?;
        }
        Command::Matrix {
            sources,
            k,
            configs,
            payload,
            backends,
            chain,
            output,
            no_timestamp,
        } => {
            return matrix(
                cli,
                &mut io,
                MatrixFlags {
                    sources,
                    k: *k,
                    configs,
                    payload,
                    backends,
                    chain,
                    output,
                    no_timestamp: *no_timestamp,
                },
                format,
            );
        }
    }
    Ok(0)
}

struct MatrixFlags<'a> {
    sources: &'a SourceArgs,
    k: Option<usize>,
    configs: &'a [u8],
    payload: &'a PayloadArgs,
    backends: &'a [String],
    chain: &'a [String],
    output: &'a Option<PathBuf>,
    no_timestamp: bool,
}

fn matrix(
    cli: &Cli,
    io: &mut Io<'_>,
    flags: MatrixFlags<'_>,
    format: Option<Format>,
) -> Result<i32, CliError> {
    let mut file = match &cli.config {
        Some(path) => MatrixFile::load(path)?,
        None => {
            let candidate = flags
                .sources
                .candidate
                .clone()
                .ok_or_else(|| CliError::Usage("--candidate or --config is required".into()))?;
            MatrixFile {
                candidate,
                corpus: None,
                reference: Vec::new(),
                seed: 0,
                payload: String::new(),
                configs: None,
                k: None,
                strip: false,
                chain: Vec::new(),
                imitation_ratio: None,
                obfuscation: None,
                backends: Default::default(),
                seeds: Default::default(),
                timeout_secs: None,
                format: None,
                output: None,
            }
        }
    };
    // flags given on the command line win over the file
    if let Some(c) = &flags.sources.candidate {
        file.candidate = c.clone();
    }
    if flags.sources.corpus.is_some() {
        file.corpus = flags.sources.corpus.clone();
    }
    file.reference
        .extend(flags.sources.reference.iter().cloned());
    if let Some(seed) = cli.seed {
        file.seed = seed;
    }
    if flags.payload.message.is_some() || flags.payload.payload_file.is_some() {
        file.payload = flags.payload.read()?;
    }
    if !flags.configs.is_empty() {
        file.configs = Some(flags.configs.to_vec());
    }
    if flags.k.is_some() {
        file.k = flags.k;
    }
    file.strip |= cli.strip;
    if !flags.chain.is_empty() {
        file.chain = flags.chain.to_vec();
    }
    if flags.output.is_some() {
        file.output = flags.output.clone();
    }
    for (stage, spec) in parse_backends(flags.backends)? {
        file.backends
            .insert(stage.name().to_owned(), spec.to_string());
    }
    let format = match format {
        Some(f) => f,
        None => file
            .format
            .as_deref()
            .map(str::parse)
            .transpose()?
            .unwrap_or_default(),
    };

    let preprocess = Preprocess {
        strip_zero_width: file.strip,
    };
    let sources = SourceArgs {
        corpus: file.corpus.clone(),
        reference: file.reference.clone(),
        candidate: None,
    };
    let reference = load_reference(&sources, preprocess, true)?;
    let candidate = load_candidate(&file.candidate, io.stdin, Preprocess::RAW)?;
    let configs = file.pipeline_configs()?;

    let resolver = RuntimeResolver;
    let mut ctx = StageContext::with_resolver(&resolver);
    ctx.chain = file.chain.clone();
    if let Some(r) = file.imitation_ratio {
        ctx.imitation_ratio = r;
    }
    if let Some(o) = file.obfuscation {
        ctx.obfuscation = o;
    }
    let settings = MatrixSettings {
        k: file.k.unwrap_or(DEFAULT_K),
        preprocess,
        ..MatrixSettings::default()
    };
    let mut report = run_matrix(&candidate, &reference, &configs, &settings, &ctx)?;
    if !flags.no_timestamp {
        report.metadata.generated_at =
            Some(chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true));
    }

    let rendered = emit_report(&report, format);
    match &file.output {
        Some(path) => {
            write_file(path, &rendered)?;
            let _ = writeln!(io.stderr, "wrote {}", path.display());
        }
        None => out(io, &rendered)?,
    }
    let mut backend_failed = false;
    for row in &report.rows {
        if let RowStatus::Aborted {
            reason,
            backend_failure,
            ..
        } = &row.status
        {
            backend_failed |= *backend_failure;
            let _ = writeln!(io.stderr, "config {} aborted: {reason}", row.config);
        }
    }
    Ok(if backend_failed { 3 } else { 0 })
}

impl PayloadArgs {
    fn read(&self) -> Result<String, CliError> {
        match (&self.message, &self.payload_file) {
            (Some(m), _) => Ok(m.clone()),
            (None, Some(path)) => {
                let text = read_text(path, &mut std::io::empty())?;
                Ok(text.trim_end_matches(['\n', '\r']).to_owned())
            }
            (None, None) => Err(CliError::Usage(
                "--message or --payload-file is required".into(),
            )),
        }
    }
}

fn load_reference(
    sources: &SourceArgs,
    preprocess: Preprocess,
    required: bool,
) -> Result<Corpus, CliError> {
    let mut docs = Vec::new();
    if let Some(dir) = &sources.corpus {
        docs.extend(load_corpus(dir, preprocess)?.documents().iter().cloned());
    }
    docs.extend(load_labeled(&sources.reference, preprocess)?);
    if docs.is_empty() {
        let msg = "a reference corpus is required (--corpus DIR or --reference FILE)";
        return Err(if required {
            CliError::Usage(msg.into())
        } else {
            CliError::Data(msg.into())
        });
    }
    Ok(Corpus::new(docs))
}

fn parse_backends(specs: &[String]) -> Result<Vec<(Stage, BackendSpec)>, CliError> {
    specs
        .iter()
        .map(|s| {
            let (stage, spec) = match s.split_once('=') {
                Some((name, rest)) if Stage::parse(name).is_some() => {
                    (Stage::parse(name).expect("checked"), rest)
                }
                _ => (Stage::Translation, s.as_str()),
            };
            parse_backend_spec(spec)
                .map(|b| (stage, b))
                .map_err(CliError::Usage)
        })
        .collect()
}

/// Parses `MIN..MAX` (or `MIN..=MAX`) into an n-gram range.
pub fn parse_ngrams(s: &str) -> Result<NgramRange, CliError> {
    let bad = || CliError::Usage(format!("bad n-gram range `{s}` (expected MIN..MAX)"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let min = a.trim().parse().map_err(|_| bad())?;
    let max = b.trim().parse().map_err(|_| bad())?;
    Ok(NgramRange::new(min, max)?)
}

/// Only JSON is offered for plain text results.
fn text_format(format: Option<Format>) -> Result<Option<Format>, CliError> {
    match format {
        None => Ok(None),
        Some(Format::Json) => Ok(Some(Format::Json)),
        Some(f) => Err(ReportError::NotAvailable(f.name()).into()),
    }
}

fn out(io: &mut Io<'_>, text: &str) -> Result<(), CliError> {
    io.stdout
        .write_all(text.as_bytes())
        .map_err(IoError::from)?;
    Ok(())
}

fn emit_text(cli: &Cli, io: &mut Io<'_>, text: &str) -> Result<(), CliError> {
    if cli.escaped {
        out(io, &escape_invisibles(text))
    } else {
        Ok(write_text(io.stdout, text)?)
    }
}

fn input_text(cli: &Cli, input: &InputArg, io: &mut Io<'_>) -> Result<String, CliError> {
    let text = read_text(&input.input, io.stdin)?;
    Ok(if cli.escaped {
        unescape_invisibles(&text)
    } else {
        text
    })
}

/// Writes each zero-width code point as `{U+XXXX}`.
pub fn escape_invisibles(text: &str) -> String {
    let mut s = String::with_capacity(text.len());
    for c in text.chars() {
        if is_zero_width(c) {
            s.push('{');
            s.push_str(&code_point(c));
            s.push('}');
        } else {
            s.push(c);
        }
    }
    s
}

/// Inverse of [`escape_invisibles`]. Input made only of whitespace
/// separated `U+XXXX` tokens is read as a bare stream.
pub fn unescape_invisibles(text: &str) -> String {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if !tokens.is_empty() {
        let stream: Option<String> = tokens.iter().map(|t| parse_code_point(t)).collect();
        if let Some(stream) = stream {
            return stream;
        }
    }
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    while let Some(start) = rest.find("{U+") {
        out.push_str(&rest[..start]);
        let tail = &rest[start + 1..];
        match tail
            .find('}')
            .and_then(|end| parse_code_point(&tail[..end]).map(|c| (end, c)))
        {
            Some((end, c)) => {
                out.push_str(&c);
                rest = &tail[end + 1..];
            }
            None => {
                out.push('{');
                rest = tail;
            }
        }
    }
    out.push_str(rest);
    out
}

fn parse_code_point(token: &str) -> Option<String> {
    let hex = token
        .strip_prefix("U+")
        .or_else(|| token.strip_prefix("u+"))?;
    let c = char::from_u32(u32::from_str_radix(hex, 16).ok()?)?;
    is_zero_width(c).then(|| c.to_string())
}
