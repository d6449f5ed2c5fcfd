//! Lexical stylometry: tokenization, the feature battery, and Burrows' Delta
//! attribution against per-author reference corpora.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

mod delta;
mod features;
mod tokenize;

pub use delta::{author_probabilities, burrows_delta, DeltaError, DeltaReport, DEFAULT_K};
pub use features::{
    char_ngram_tfidf, extract_features, function_word_frequencies, special_char_tfidf,
    token_length_stats, vocabulary_richness, FeatureConfig, FeatureError, FeatureVector,
    FunctionWords, NgramRange, SparseVector, SymbolSet, TokenLengthStats,
};
pub use tokenize::tokenize;

use crate::zwcodec::strip_zero_width;

/// Text preparation applied before any feature is computed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Preprocess {
    /// Remove zero-width payload code points first. Off by default so that
    /// hidden payloads register in the features.
    pub strip_zero_width: bool,
}

impl Preprocess {
    pub const RAW: Self = Self {
        strip_zero_width: false,
    };
    pub const STRIPPED: Self = Self {
        strip_zero_width: true,
    };

    pub fn apply(&self, text: &str) -> String {
        if self.strip_zero_width {
            strip_zero_width(text).clean
        } else {
            String::from(text)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    id: String,
    author: Option<String>,
    text: String,
    tokens: Vec<String>,
}

impl Document {
    pub fn new(id: impl Into<String>, author: Option<String>, text: impl Into<String>) -> Self {
        let text = text.into();
        let tokens = tokenize(&text);
        Self {
            id: id.into(),
            author,
            text,
            tokens,
        }
    }

    /// Builds a document from `text` after applying `preprocess`.
    pub fn prepared(
        id: impl Into<String>,
        author: Option<String>,
        text: &str,
        preprocess: Preprocess,
    ) -> Self {
        Self::new(id, author, preprocess.apply(text))
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn author(&self) -> Option<&str> {
        self.author.as_deref()
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }
}

/// Documents grouped by author label.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Corpus {
    documents: Vec<Document>,
    authors: BTreeSet<String>,
}

impl Corpus {
    pub fn new(documents: Vec<Document>) -> Self {
        let authors = documents.iter().filter_map(|d| d.author.clone()).collect();
        Self { documents, authors }
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn authors(&self) -> &BTreeSet<String> {
        &self.authors
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn by_author(&self) -> BTreeMap<&str, Vec<&Document>> {
        let mut groups: BTreeMap<&str, Vec<&Document>> = BTreeMap::new();
        for doc in &self.documents {
            if let Some(author) = doc.author() {
                groups.entry(author).or_default().push(doc);
            }
        }
        groups
    }

    /// All of one author's documents joined with newlines, in corpus order.
    pub fn concatenated(&self, author: &str) -> String {
        let texts: Vec<&str> = self
            .documents
            .iter()
            .filter(|d| d.author() == Some(author))
            .map(Document::text)
            .collect();
        texts.join("\n")
    }
}
