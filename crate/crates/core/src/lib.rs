//! Invisible-payload text steganography and adversarial stylometry.
//!
//! The crate is `no_std` and only needs an allocator. It covers four areas:
//!
//! * [`zwcodec`]: letters to zero-width code point streams and back, plus
//!   stripping and scanning of carrier text.
//! * [`weaver`]: placement of streams inside words and across lines.
//! * [`styloscope`]: lexical feature extraction and Burrows' Delta.
//! * [`transforms`] and [`pipeline`]: seeded imitation, round-trip
//!   translation and obfuscation stages, and the fifteen stage
//!   combinations evaluated against a reference corpus.
//!
//! File IO, corpus loading, report serialization and the command line live
//! in the `inkveil` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod pipeline;
pub mod styloscope;
pub mod text;
pub mod transforms;
pub mod weaver;
pub mod zwcodec;

pub use pipeline::{
    apply_config, run_matrix, ConfigId, MatrixReport, MatrixRow, MatrixSettings, PipelineConfig,
    PipelineError, RowStatus, Stage, StageContext,
};
pub use styloscope::{
    author_probabilities, burrows_delta, Corpus, DeltaReport, Document, FeatureVector, Preprocess,
};
pub use transforms::{BackendKind, BackendSpec, StyleModel, TransformSeed};
pub use weaver::{embed_linewise, extract_linewise, weave_into_unigram, Placement, WovenWord};
pub use zwcodec::{
    build_codebook, decode_stream, encode_message, scan_text, strip_zero_width, Codebook,
    ScanReport, StegoStream, ZeroWidthAlphabet,
};
