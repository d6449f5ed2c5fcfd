//! Burrows' Delta.
//!
//! The `k` most frequent function words of the reference corpus are the
//! feature set. Per-1000 frequencies are taken per reference document to get
//! a corpus mean and (sample) standard deviation per word. Each author's
//! pooled frequencies and the candidate's are z-scored against those, and
//! the Delta for an author is the mean absolute z difference to the
//! candidate. Words whose standard deviation is zero carry no information
//! and are left out of the mean.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::features::{per_thousand, FunctionWords};
use super::{Corpus, Document};

pub const DEFAULT_K: usize = 50;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DeltaError {
    #[error("insufficient reference corpus: {0}")]
    InsufficientCorpus(&'static str),
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DeltaReport {
    pub deltas: BTreeMap<String, f64>,
    pub probabilities: BTreeMap<String, f64>,
    /// Words that entered the mean, most frequent first.
    pub function_words_used: Vec<String>,
    /// Per-author z-scores, aligned with `function_words_used`.
    pub author_z: BTreeMap<String, Vec<f64>>,
    pub candidate_z: Vec<f64>,
}

impl DeltaReport {
    /// Author with the smallest Delta; ties go to the first name.
    pub fn closest_author(&self) -> Option<&str> {
        let mut best: Option<(&str, f64)> = None;
        for (author, &d) in &self.deltas {
            if best.is_none_or(|(_, b)| d < b) {
                best = Some((author, d));
            }
        }
        best.map(|(a, _)| a)
    }

    /// Author with the largest probability; ties fall back to the smaller
    /// Delta.
    pub fn most_probable_author(&self) -> Option<&str> {
        let mut best: Option<(&str, f64, f64)> = None;
        for (author, &p) in &self.probabilities {
            let d = self.deltas.get(author).copied().unwrap_or(f64::INFINITY);
            if best.is_none_or(|(_, bp, bd)| p > bp || (p == bp && d < bd)) {
                best = Some((author, p, d));
            }
        }
        best.map(|(a, _, _)| a)
    }
}

/// Distance of `candidate` from each author of `reference`, using the `k`
/// most frequent words of `function_words` in the reference corpus.
///
/// Unlabeled reference documents count towards the corpus statistics but do
/// not form an author profile.
pub fn burrows_delta(
    reference: &Corpus,
    candidate: &Document,
    k: usize,
    function_words: &FunctionWords,
) -> Result<DeltaReport, DeltaError> {
    if k == 0 {
        return Err(DeltaError::InsufficientCorpus("k must be at least 1"));
    }
    if reference.authors().is_empty() {
        return Err(DeltaError::InsufficientCorpus("no labeled authors"));
    }
    if reference.len() < 2 {
        return Err(DeltaError::InsufficientCorpus(
            "fewer than two reference documents",
        ));
    }

    let vocabulary = most_frequent(reference, function_words, k);
    let doc_freqs: Vec<BTreeMap<String, f64>> = reference
        .documents()
        .iter()
        .map(|d| per_thousand(d.tokens(), &vocabulary))
        .collect();

    let n = doc_freqs.len() as f64;
    let mut used = Vec::new();
    let mut moments = Vec::new();
    for word in &vocabulary {
        let mean = doc_freqs.iter().map(|f| f[word]).sum::<f64>() / n;
        let var = doc_freqs
            .iter()
            .map(|f| (f[word] - mean) * (f[word] - mean))
            .sum::<f64>()
            / (n - 1.0);
        let std = libm::sqrt(var);
        if std > 0.0 && std.is_finite() {
            used.push(word.clone());
            moments.push((mean, std));
        }
    }
    if used.is_empty() {
        return Err(DeltaError::InsufficientCorpus(
            "no function word varies across documents",
        ));
    }

    let z_scores = |tokens: &[String]| -> Vec<f64> {
        let freqs = per_thousand(tokens, &used);
        used.iter()
            .zip(&moments)
            .map(|(w, (mean, std))| (freqs[w] - mean) / std)
            .collect()
    };
    let candidate_z = z_scores(candidate.tokens());

    let mut author_z = BTreeMap::new();
    let mut deltas = BTreeMap::new();
    for (author, docs) in reference.by_author() {
        let pooled: Vec<String> = docs
            .iter()
            .flat_map(|d| d.tokens().iter().cloned())
            .collect();
        let z = z_scores(&pooled);
        let delta = z
            .iter()
            .zip(&candidate_z)
            .map(|(a, c)| libm::fabs(a - c))
            .sum::<f64>()
            / z.len() as f64;
        deltas.insert(String::from(author), delta);
        author_z.insert(String::from(author), z);
    }

    Ok(DeltaReport {
        probabilities: author_probabilities(&deltas),
        deltas,
        function_words_used: used,
        author_z,
        candidate_z,
    })
}

/// Up to `k` function words that occur in the reference corpus, by total
/// count then alphabetically.
fn most_frequent(reference: &Corpus, function_words: &FunctionWords, k: usize) -> Vec<String> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for doc in reference.documents() {
        for t in doc.tokens() {
            if function_words.contains(t) {
                *counts.entry(t.as_str()).or_default() += 1;
            }
        }
    }
    let mut ranked: Vec<(&str, usize)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    ranked
        .into_iter()
        .take(k)
        .map(|(w, _)| String::from(w))
        .collect()
}

/// Softmax over negative Deltas: `p(a) = exp(-Δa) / Σ exp(-Δb)`.
pub fn author_probabilities(deltas: &BTreeMap<String, f64>) -> BTreeMap<String, f64> {
    let Some(min) = deltas.values().copied().reduce(f64::min) else {
        return BTreeMap::new();
    };
    let weights: Vec<f64> = deltas.values().map(|d| libm::exp(min - d)).collect();
    let total: f64 = weights.iter().sum();
    deltas
        .keys()
        .cloned()
        .zip(weights.into_iter().map(|w| w / total))
        .collect()
}
