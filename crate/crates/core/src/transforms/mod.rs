//! Adversarial text stages: round-trip translation, imitation and
//! obfuscation.
//!
//! Every built-in stage is a pure function of its input, a
//! [`TransformSeed`] and its options. Stages strip zero-width payload code
//! points on entry so they never disturb a payload added later.

use alloc::string::String;
use core::fmt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

mod imitation;
mod obfuscate;
mod synonyms;
mod translate;

pub use imitation::{imitate, imitate_traced, train_style_model, Imitation, StyleModel};
pub use obfuscate::{obfuscate, ObfuscationOptions};
pub use synonyms::SynonymTable;
pub use translate::{round_trip_translate, SynonymDrift, TranslationBackend};

use crate::zwcodec::strip_zero_width;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct TransformSeed(pub u64);

impl TransformSeed {
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }

    /// Independent seed for a named sub-step.
    pub fn derive(self, salt: &str) -> Self {
        // FNV-1a over the salt, folded into the seed
        let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ self.0;
        for b in salt.bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        Self(h)
    }
}

impl fmt::Display for TransformSeed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum BackendKind {
    #[default]
    Builtin,
    ExternalCommand,
    Http,
}

/// Where a stage gets its heavy lifting done. External kinds are never
/// chosen implicitly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BackendSpec {
    pub kind: BackendKind,
    /// Command line for `external-command`, URL for `http`, empty for
    /// `builtin`.
    #[cfg_attr(feature = "serde", serde(default))]
    pub endpoint: String,
    #[cfg_attr(feature = "serde", serde(default = "default_timeout"))]
    pub timeout_secs: u64,
}

#[cfg(feature = "serde")]
fn default_timeout() -> u64 {
    BackendSpec::DEFAULT_TIMEOUT_SECS
}

impl Default for BackendSpec {
    fn default() -> Self {
        Self::builtin()
    }
}

impl BackendSpec {
    pub const DEFAULT_TIMEOUT_SECS: u64 = 30;

    pub fn builtin() -> Self {
        Self {
            kind: BackendKind::Builtin,
            endpoint: String::new(),
            timeout_secs: Self::DEFAULT_TIMEOUT_SECS,
        }
    }

    pub fn command(command: impl Into<String>) -> Self {
        Self {
            kind: BackendKind::ExternalCommand,
            endpoint: command.into(),
            timeout_secs: Self::DEFAULT_TIMEOUT_SECS,
        }
    }

    pub fn http(url: impl Into<String>) -> Self {
        Self {
            kind: BackendKind::Http,
            endpoint: url.into(),
            timeout_secs: Self::DEFAULT_TIMEOUT_SECS,
        }
    }

    pub fn is_external(&self) -> bool {
        self.kind != BackendKind::Builtin
    }
}

impl fmt::Display for BackendSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            BackendKind::Builtin => f.write_str("builtin"),
            BackendKind::ExternalCommand => write!(f, "cmd:{}", self.endpoint),
            BackendKind::Http => f.write_str(&self.endpoint),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransformError {
    #[error("backend unavailable: {0}")]
    BackendUnavailable(String),
    #[error("backend timed out after {0} s")]
    Timeout(u64),
    #[error("training text has {chars} characters, need more than the order {order}")]
    CorpusTooSmall { chars: usize, order: usize },
    #[error("style model order must be at least 1")]
    InvalidOrder,
    #[error("a pivot language chain is required for external translation")]
    EmptyChain,
}

pub(crate) fn clean_input(text: &str) -> String {
    strip_zero_width(text).clean
}

pub(crate) fn shuffle<T>(items: &mut [T], rng: &mut ChaCha8Rng) {
    use rand::seq::SliceRandom;
    items.shuffle(rng);
}
