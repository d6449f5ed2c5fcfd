use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::Document;

pub type SparseVector = BTreeMap<String, f64>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FeatureError {
    #[error("invalid n-gram range {min}..{max}")]
    InvalidRange { min: usize, max: usize },
    #[error("symbol set is empty")]
    EmptySymbolSet,
    #[error("function word list is empty")]
    EmptyFunctionWords,
}

/// Inclusive character n-gram length range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NgramRange {
    min: usize,
    max: usize,
}

impl Default for NgramRange {
    fn default() -> Self {
        Self { min: 2, max: 4 }
    }
}

impl NgramRange {
    pub fn new(min: usize, max: usize) -> Result<Self, FeatureError> {
        if min == 0 || max < min {
            return Err(FeatureError::InvalidRange { min, max });
        }
        Ok(Self { min, max })
    }

    pub fn min(&self) -> usize {
        self.min
    }

    pub fn max(&self) -> usize {
        self.max
    }
}

/// Symbols whose frequencies form the special-character feature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolSet(BTreeSet<char>);

impl Default for SymbolSet {
    /// ASCII punctuation plus a handful of mathematical symbols.
    fn default() -> Self {
        let mut set: BTreeSet<char> = (0x21u8..0x7f)
            .map(char::from)
            .filter(char::is_ascii_punctuation)
            .collect();
        set.extend(['∃', 'Δ', '∞', '∀', '∅']);
        Self(set)
    }
}

impl SymbolSet {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self, FeatureError> {
        let set: BTreeSet<char> = symbols.into_iter().collect();
        if set.is_empty() {
            return Err(FeatureError::EmptySymbolSet);
        }
        Ok(Self(set))
    }

    pub fn contains(&self, c: char) -> bool {
        self.0.contains(&c)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Ordered, de-duplicated function word list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionWords(Vec<String>);

static ENGLISH: &str = include_str!("../../data/stopwords_en.txt");

impl Default for FunctionWords {
    fn default() -> Self {
        Self::english()
    }
}

impl FunctionWords {
    /// The bundled 175-word English list.
    pub fn english() -> Self {
        Self::parse(ENGLISH).expect("bundled list is non-empty")
    }

    /// One word per line; blank lines and `#` comments are skipped.
    pub fn parse(list: &str) -> Result<Self, FeatureError> {
        Self::new(
            list.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#')),
        )
    }

    pub fn new<I, S>(words: I) -> Result<Self, FeatureError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut seen = BTreeSet::new();
        let mut list = Vec::new();
        for w in words {
            let w = w.as_ref().to_lowercase();
            if seen.insert(w.clone()) {
                list.push(w);
            }
        }
        if list.is_empty() {
            return Err(FeatureError::EmptyFunctionWords);
        }
        Ok(Self(list))
    }

    pub fn words(&self) -> &[String] {
        &self.0
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.iter().any(|w| w == word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `count × ln(N / df)` for each term of each document.
fn tfidf(counts: Vec<BTreeMap<String, usize>>) -> Vec<SparseVector> {
    let n = counts.len() as f64;
    let mut df: BTreeMap<&str, usize> = BTreeMap::new();
    for doc in &counts {
        for term in doc.keys() {
            *df.entry(term.as_str()).or_default() += 1;
        }
    }
    let idf: BTreeMap<&str, f64> = df
        .into_iter()
        .map(|(t, d)| (t, libm::log(n / d as f64)))
        .collect();
    counts
        .iter()
        .map(|doc| {
            doc.iter()
                .map(|(t, &c)| (t.clone(), c as f64 * idf[t.as_str()]))
                .collect()
        })
        .collect()
}

/// Character n-gram TF-IDF over the lowercased raw text, spaces included.
pub fn char_ngram_tfidf(
    docs: &[Document],
    range: NgramRange,
) -> Result<Vec<SparseVector>, FeatureError> {
    NgramRange::new(range.min, range.max)?;
    let counts = docs
        .iter()
        .map(|doc| {
            let chars: Vec<char> = doc.text().chars().flat_map(char::to_lowercase).collect();
            let mut grams: BTreeMap<String, usize> = BTreeMap::new();
            for n in range.min..=range.max {
                for window in chars.windows(n) {
                    *grams.entry(window.iter().collect()).or_default() += 1;
                }
            }
            grams
        })
        .collect();
    Ok(tfidf(counts))
}

/// TF-IDF over single symbols drawn from `symbols`.
pub fn special_char_tfidf(
    docs: &[Document],
    symbols: &SymbolSet,
) -> Result<Vec<SparseVector>, FeatureError> {
    if symbols.is_empty() {
        return Err(FeatureError::EmptySymbolSet);
    }
    let counts = docs
        .iter()
        .map(|doc| {
            let mut found: BTreeMap<String, usize> = BTreeMap::new();
            for c in doc.text().chars().filter(|&c| symbols.contains(c)) {
                *found.entry(c.to_string()).or_default() += 1;
            }
            found
        })
        .collect();
    Ok(tfidf(counts))
}

/// Occurrences of each function word per 1000 tokens. Every listed word is
/// present in the result; an empty document maps everything to zero.
pub fn function_word_frequencies(doc: &Document, words: &FunctionWords) -> BTreeMap<String, f64> {
    per_thousand(doc.tokens(), words.words())
}

pub(crate) fn per_thousand(tokens: &[String], words: &[String]) -> BTreeMap<String, f64> {
    let mut counts: BTreeMap<&str, usize> = words.iter().map(|w| (w.as_str(), 0)).collect();
    for t in tokens {
        if let Some(c) = counts.get_mut(t.as_str()) {
            *c += 1;
        }
    }
    let total = tokens.len();
    counts
        .into_iter()
        .map(|(w, c)| {
            let f = if total == 0 {
                0.0
            } else {
                c as f64 * 1000.0 / total as f64
            };
            (String::from(w), f)
        })
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TokenLengthStats {
    pub avg_chars_per_token: f64,
    /// Token length in code points → share of tokens.
    pub histogram: BTreeMap<usize, f64>,
}

pub fn token_length_stats(doc: &Document) -> TokenLengthStats {
    let tokens = doc.tokens();
    if tokens.is_empty() {
        return TokenLengthStats::default();
    }
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    let mut total_chars = 0;
    for t in tokens {
        let len = t.chars().count();
        total_chars += len;
        *counts.entry(len).or_default() += 1;
    }
    let n = tokens.len() as f64;
    TokenLengthStats {
        avg_chars_per_token: total_chars as f64 / n,
        histogram: counts
            .into_iter()
            .map(|(len, c)| (len, c as f64 / n))
            .collect(),
    }
}

/// Hapax-to-dis-legomena ratio divided by the token count. A document with
/// no dis legomena uses 1 as the denominator.
pub fn vocabulary_richness(doc: &Document) -> f64 {
    let tokens = doc.tokens();
    if tokens.is_empty() {
        return 0.0;
    }
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for t in tokens {
        *counts.entry(t.as_str()).or_default() += 1;
    }
    let hapax = counts.values().filter(|&&c| c == 1).count();
    let dis = counts.values().filter(|&&c| c == 2).count().max(1);
    (hapax as f64 / dis as f64) / tokens.len() as f64
}

#[derive(Debug, Clone, Default)]
pub struct FeatureConfig {
    pub ngrams: NgramRange,
    pub symbols: SymbolSet,
    pub function_words: FunctionWords,
}

/// The lexical feature bundle for one document.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FeatureVector {
    pub char_ngram_tfidf: SparseVector,
    pub special_char_tfidf: SparseVector,
    pub function_word_freq: BTreeMap<String, f64>,
    pub avg_chars_per_token: f64,
    pub token_length_histogram: BTreeMap<usize, f64>,
    pub vocab_richness: f64,
}

/// Features for every document. TF-IDF terms use the given documents as the
/// idf population.
pub fn extract_features(
    docs: &[Document],
    config: &FeatureConfig,
) -> Result<Vec<FeatureVector>, FeatureError> {
    let ngrams = char_ngram_tfidf(docs, config.ngrams)?;
    let specials = special_char_tfidf(docs, &config.symbols)?;
    Ok(docs
        .iter()
        .zip(ngrams)
        .zip(specials)
        .map(|((doc, char_ngram_tfidf), special_char_tfidf)| {
            let lengths = token_length_stats(doc);
            FeatureVector {
                char_ngram_tfidf,
                special_char_tfidf,
                function_word_freq: function_word_frequencies(doc, &config.function_words),
                avg_chars_per_token: lengths.avg_chars_per_token,
                token_length_histogram: lengths.histogram,
                vocab_richness: vocabulary_richness(doc),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    const LN2: f64 = core::f64::consts::LN_2;

    fn doc(text: &str) -> Document {
        Document::new("d", None, text)
    }

    fn close(a: f64, b: f64) -> bool {
        libm::fabs(a - b) < 1e-12
    }

    #[test]
    fn ngram_single_document_is_all_zero() {
        let v = char_ngram_tfidf(&[doc("hello there")], NgramRange::default()).unwrap();
        assert!(!v[0].is_empty());
        assert!(v[0].values().all(|&w| w == 0.0));
    }

    #[test]
    fn ngram_two_document_weights() {
        let docs = [doc("abab"), doc("ab")];
        let v = char_ngram_tfidf(&docs, NgramRange::new(2, 2).unwrap()).unwrap();
        // "ab" occurs in both, "ba" only in the first (once)
        assert_eq!(v[0]["ab"], 0.0);
        assert!(close(v[0]["ba"], LN2));
        assert!(!v[1].contains_key("ba"));
    }

    #[test]
    fn ngram_lowercases_and_keeps_spaces() {
        let v = char_ngram_tfidf(&[doc("A b"), doc("zz")], NgramRange::new(2, 2).unwrap()).unwrap();
        assert!(close(v[0]["a "], LN2));
        assert!(close(v[0][" b"], LN2));
    }

    #[test]
    fn ngram_range_errors() {
        assert_eq!(
            NgramRange::new(0, 2),
            Err(FeatureError::InvalidRange { min: 0, max: 2 })
        );
        assert_eq!(
            NgramRange::new(3, 2),
            Err(FeatureError::InvalidRange { min: 3, max: 2 })
        );
    }

    #[test]
    fn special_char_examples() {
        let set = SymbolSet::default();
        let v = special_char_tfidf(&[doc("plain words"), doc("more words")], &set).unwrap();
        assert!(v[0].is_empty());
        let v = special_char_tfidf(&[doc("wow!!"), doc("calm")], &set).unwrap();
        assert!(close(v[0]["!"], 2.0 * LN2));
        let v = special_char_tfidf(&[doc("a, b"), doc("c, d")], &set).unwrap();
        assert_eq!(v[0][","], 0.0);
        assert!(set.contains('∞') && set.contains('?') && !set.contains('a'));
        assert_eq!(SymbolSet::new([]), Err(FeatureError::EmptySymbolSet));
    }

    #[test]
    fn function_word_examples() {
        let fw = FunctionWords::english();
        assert_eq!(fw.len(), 175);
        let f = function_word_frequencies(&doc("the the cat"), &fw);
        assert!(close(f["the"], 2000.0 / 3.0));
        assert_eq!(f.len(), 175);
        assert!(function_word_frequencies(&doc("cat dog"), &fw)
            .values()
            .all(|&v| v == 0.0));
        assert!(function_word_frequencies(&doc(""), &fw)
            .values()
            .all(|&v| v == 0.0));
    }

    #[test]
    fn token_length_examples() {
        let s = token_length_stats(&doc("aa bbb"));
        assert_eq!(s.avg_chars_per_token, 2.5);
        assert_eq!(s.histogram, BTreeMap::from([(2, 0.5), (3, 0.5)]));
        let s = token_length_stats(&doc("a"));
        assert_eq!(
            (s.avg_chars_per_token, s.histogram),
            (1.0, BTreeMap::from([(1, 1.0)]))
        );
        let s = token_length_stats(&doc("aa aa"));
        assert_eq!(
            (s.avg_chars_per_token, s.histogram),
            (2.0, BTreeMap::from([(2, 1.0)]))
        );
        assert_eq!(token_length_stats(&doc("")), TokenLengthStats::default());
    }

    #[test]
    fn richness_examples() {
        assert!(close(vocabulary_richness(&doc("a a b")), 1.0 / 3.0));
        assert!(close(vocabulary_richness(&doc("a b c")), 1.0));
        assert_eq!(vocabulary_richness(&doc("")), 0.0);
    }

    #[test]
    fn feature_bundle() {
        let docs = vec![doc("The cat sat; the dog ran!"), doc("A bird flew.")];
        let fv = extract_features(&docs, &FeatureConfig::default()).unwrap();
        assert_eq!(fv.len(), 2);
        let total: f64 = fv[0].token_length_histogram.values().sum();
        assert!(close(total, 1.0));
        assert!(fv[0].special_char_tfidf.contains_key(";"));
    }
}
