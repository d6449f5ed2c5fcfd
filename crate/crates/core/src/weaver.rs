//! Placement of zero-width streams inside carrier text.
//!
//! A stream is woven between the grapheme clusters of a single word, never
//! before the first one, so the visible word is unchanged and no payload
//! sits at a word boundary where whitespace canonicalization could drop it.
//! [`embed_linewise`] hides one secret letter per carrier line.

use alloc::string::String;
use alloc::vec::Vec;
use unicode_segmentation::UnicodeSegmentation;

use crate::zwcodec::{
    decode_stream, encode_message, strip_with, Codebook, CodecError, StegoStream, ZeroWidthAlphabet,
};

/// How payload units are spread over the gaps after each grapheme cluster.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Placement {
    /// Units are dealt over the gaps left to right; each gap receives a
    /// contiguous run so the stream order is kept.
    #[default]
    RoundRobin,
    /// The whole stream follows the first cluster.
    AfterFirst,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WovenWord {
    pub surface: String,
    pub origin: String,
    pub payload: StegoStream,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeaveError {
    #[error("word has no visible characters")]
    EmptyWord,
    #[error("word already carries zero-width code points")]
    DirtyCarrier,
    #[error("payload contains a code point outside the alphabet")]
    ForeignPayload,
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error("line {line}: {source}")]
    Line { line: usize, source: CodecError },
}

pub fn weave_into_unigram(
    word: &str,
    payload: &StegoStream,
    placement: Placement,
) -> Result<WovenWord, WeaveError> {
    weave_with(word, payload, placement, &ZeroWidthAlphabet::STANDARD)
}

pub fn weave_with(
    word: &str,
    payload: &StegoStream,
    placement: Placement,
    alphabet: &ZeroWidthAlphabet,
) -> Result<WovenWord, WeaveError> {
    if word.chars().any(|c| alphabet.contains(c)) {
        return Err(WeaveError::DirtyCarrier);
    }
    if !payload.units().iter().all(|&c| alphabet.contains(c)) {
        return Err(WeaveError::ForeignPayload);
    }
    let clusters: Vec<&str> = word.graphemes(true).collect();
    if clusters.is_empty() {
        return Err(WeaveError::EmptyWord);
    }
    let units = payload.units();
    let gaps = match placement {
        Placement::RoundRobin => clusters.len(),
        Placement::AfterFirst => 1,
    };
    let (base, extra) = (units.len() / gaps, units.len() % gaps);

    let mut surface = String::with_capacity(word.len() + units.len() * 3);
    let mut next = 0;
    for (i, cluster) in clusters.iter().enumerate() {
        surface.push_str(cluster);
        if i < gaps {
            let take = base + usize::from(i < extra);
            surface.extend(&units[next..next + take]);
            next += take;
        }
    }
    Ok(WovenWord {
        surface,
        origin: String::from(word),
        payload: payload.clone(),
    })
}

/// Result of [`embed_linewise`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinewiseEmbedding {
    pub lines: Vec<String>,
    /// Indices of the lines that received a unit.
    pub modified: Vec<usize>,
    /// Secret letters that found no carrier line.
    pub overflow: usize,
}

/// Hides `secret` one letter per line, weaving each letter's stream into the
/// first word of the line. Lines without a word are passed through and do
/// not consume a letter. Letters left over once the lines run out are
/// counted in [`LinewiseEmbedding::overflow`].
pub fn embed_linewise<S: AsRef<str>>(
    lines: &[S],
    secret: &str,
    codebook: &Codebook,
    alphabet: &ZeroWidthAlphabet,
) -> Result<LinewiseEmbedding, WeaveError> {
    let units = secret_units(secret, codebook, alphabet)?;
    let mut pending = units.into_iter();
    let mut unit = pending.next();
    let mut out = Vec::with_capacity(lines.len());
    let mut modified = Vec::new();

    for (index, line) in lines.iter().enumerate() {
        let line = line.as_ref();
        let span = first_word(line);
        match (unit.take(), span) {
            (Some(stream), Some((start, end))) => {
                let woven =
                    weave_with(&line[start..end], &stream, Placement::RoundRobin, alphabet)?;
                let mut encoded = String::with_capacity(line.len() + woven.surface.len());
                encoded.push_str(&line[..start]);
                encoded.push_str(&woven.surface);
                encoded.push_str(&line[end..]);
                out.push(encoded);
                modified.push(index);
                unit = pending.next();
            }
            (held, _) => {
                unit = held;
                out.push(String::from(line));
            }
        }
    }
    let overflow = usize::from(unit.is_some()) + pending.len();
    Ok(LinewiseEmbedding {
        lines: out,
        modified,
        overflow,
    })
}

/// One single-letter stream per secret letter.
pub fn secret_units(
    secret: &str,
    codebook: &Codebook,
    alphabet: &ZeroWidthAlphabet,
) -> Result<Vec<StegoStream>, CodecError> {
    // validate the whole secret first so positions refer to the full input
    encode_message(secret, codebook, alphabet)?;
    let mut units = Vec::new();
    let mut buf = [0u8; 4];
    for c in secret.chars().flat_map(char::to_uppercase) {
        units.push(encode_message(c.encode_utf8(&mut buf), codebook, alphabet)?);
    }
    Ok(units)
}

/// Decodes the letters hidden by [`embed_linewise`], in line order. Lines
/// without zero-width content contribute nothing.
pub fn extract_linewise<S: AsRef<str>>(
    lines: &[S],
    codebook: &Codebook,
    alphabet: &ZeroWidthAlphabet,
) -> Result<String, WeaveError> {
    let mut secret = String::new();
    for (line, text) in lines.iter().enumerate() {
        let stripped = strip_with(text.as_ref(), alphabet);
        if stripped.extracted.is_empty() {
            continue;
        }
        let letters = decode_stream(stripped.extracted.units(), codebook, alphabet)
            .map_err(|source| WeaveError::Line { line, source })?;
        secret.push_str(&letters);
    }
    Ok(secret)
}

/// Byte span of the first run of non-whitespace characters.
fn first_word(line: &str) -> Option<(usize, usize)> {
    let start = line.find(|c: char| !c.is_whitespace())?;
    let end = line[start..]
        .find(char::is_whitespace)
        .map_or(line.len(), |i| start + i);
    Some((start, end))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zwcodec::{build_codebook, strip_zero_width};
    use alloc::vec;

    const Z0: char = '\u{200B}';
    const END: char = '\u{FEFF}';

    fn stream(units: &[char]) -> StegoStream {
        StegoStream::from_units(units.to_vec(), &ZeroWidthAlphabet::STANDARD).unwrap()
    }

    fn enc(s: &str) -> StegoStream {
        encode_message(s, &build_codebook(), &ZeroWidthAlphabet::STANDARD).unwrap()
    }

    #[test]
    fn weave_examples() {
        let w = weave_into_unigram("a", &stream(&[END]), Placement::RoundRobin).unwrap();
        assert_eq!(w.surface, "a\u{FEFF}");
        let w = weave_into_unigram("ab", &stream(&[Z0, END]), Placement::RoundRobin).unwrap();
        assert_eq!(w.surface, "a\u{200B}b\u{FEFF}");
        let w = weave_into_unigram("ab", &stream(&[Z0, END]), Placement::AfterFirst).unwrap();
        assert_eq!(w.surface, "a\u{200B}\u{FEFF}b");
    }

    #[test]
    fn weave_spreads_long_payloads_in_order() {
        let payload = enc("ZZ");
        let w = weave_into_unigram("cat", &payload, Placement::RoundRobin).unwrap();
        let s = strip_zero_width(&w.surface);
        assert_eq!(s.clean, "cat");
        assert_eq!(s.extracted, payload);
        assert!(w.surface.starts_with('c'));
    }

    #[test]
    fn weave_keeps_grapheme_clusters_whole() {
        // e + combining acute is one cluster
        let word = "e\u{301}x";
        let w = weave_into_unigram(word, &stream(&[Z0, END]), Placement::RoundRobin).unwrap();
        assert_eq!(w.surface, "e\u{301}\u{200B}x\u{FEFF}");
    }

    #[test]
    fn weave_errors() {
        assert_eq!(
            weave_into_unigram("", &stream(&[END]), Placement::RoundRobin),
            Err(WeaveError::EmptyWord)
        );
        assert_eq!(
            weave_into_unigram("a\u{200B}", &stream(&[END]), Placement::RoundRobin),
            Err(WeaveError::DirtyCarrier)
        );
    }

    #[test]
    fn embed_examples() {
        let cb = build_codebook();
        let a = ZeroWidthAlphabet::STANDARD;
        let empty: [&str; 0] = [];
        let r = embed_linewise(&empty, "ABC", &cb, &a).unwrap();
        assert!(r.lines.is_empty());
        assert_eq!(r.overflow, 3);

        let r = embed_linewise(&["x", "y"], "A", &cb, &a).unwrap();
        let expected = weave_into_unigram("x", &enc("A"), Placement::RoundRobin)
            .unwrap()
            .surface;
        assert_eq!(r.lines, vec![expected, String::from("y")]);
        assert_eq!(r.modified, vec![0]);
        assert_eq!(r.overflow, 0);

        let lines = ["one two", "three"];
        let r = embed_linewise(&lines, "", &cb, &a).unwrap();
        assert_eq!(r.lines, lines);
        assert!(r.modified.is_empty());
    }

    #[test]
    fn embed_targets_first_word_and_skips_blank_lines() {
        let cb = build_codebook();
        let a = ZeroWidthAlphabet::STANDARD;
        let lines = ["", "  hello world", "   ", "bye"];
        let r = embed_linewise(&lines, "BA", &cb, &a).unwrap();
        assert_eq!(r.modified, vec![1, 3]);
        assert_eq!(r.lines[0], "");
        assert_eq!(r.lines[2], "   ");
        assert!(r.lines[1].starts_with("  h"));
        assert!(r.lines[1].ends_with(" world"));
        assert_eq!(extract_linewise(&r.lines, &cb, &a).unwrap(), "BA");
    }

    #[test]
    fn extract_examples() {
        let cb = build_codebook();
        let a = ZeroWidthAlphabet::STANDARD;
        let r = embed_linewise(&["x", "y"], "AB", &cb, &a).unwrap();
        assert_eq!(extract_linewise(&r.lines, &cb, &a).unwrap(), "AB");
        assert_eq!(extract_linewise(&["plain", "text"], &cb, &a).unwrap(), "");
        let r = embed_linewise(&["x"], "AB", &cb, &a).unwrap();
        assert_eq!(r.overflow, 1);
        assert_eq!(extract_linewise(&r.lines, &cb, &a).unwrap(), "A");
    }

    #[test]
    fn extract_reports_line() {
        let cb = build_codebook();
        let a = ZeroWidthAlphabet::STANDARD;
        let err = extract_linewise(&["ok", "b\u{200B}ad"], &cb, &a).unwrap_err();
        assert!(matches!(err, WeaveError::Line { line: 1, .. }));
    }

    #[test]
    fn embed_rejects_bad_secret() {
        let cb = build_codebook();
        let err = embed_linewise(&["x"], "A1", &cb, &ZeroWidthAlphabet::STANDARD).unwrap_err();
        assert!(matches!(
            err,
            WeaveError::Codec(CodecError::UnsupportedCharacter { position: 1, .. })
        ));
    }
}
