//! Line and sentence segmentation shared by the weaver and the transforms.

use alloc::string::String;
use alloc::vec::Vec;

/// One line of text and the terminator that followed it (`"\n"`,
/// `"\r\n"` or `""` for a final unterminated line).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Line<'a> {
    pub content: &'a str,
    pub terminator: &'a str,
}

/// Splits `text` into lines, keeping terminators so that concatenating
/// `content + terminator` over all lines gives back `text` exactly.
pub fn split_lines(text: &str) -> Vec<Line<'_>> {
    let mut lines = Vec::new();
    let mut rest = text;
    while !rest.is_empty() {
        match rest.find('\n') {
            Some(i) => {
                let (content, terminator) = if i > 0 && rest.as_bytes()[i - 1] == b'\r' {
                    (&rest[..i - 1], &rest[i - 1..=i])
                } else {
                    (&rest[..i], &rest[i..=i])
                };
                lines.push(Line {
                    content,
                    terminator,
                });
                rest = &rest[i + 1..];
            }
            None => {
                lines.push(Line {
                    content: rest,
                    terminator: "",
                });
                rest = "";
            }
        }
    }
    lines
}

pub fn join_lines<S: AsRef<str>>(contents: &[S], lines: &[Line<'_>]) -> String {
    let mut out = String::new();
    for (content, line) in contents.iter().zip(lines) {
        out.push_str(content.as_ref());
        out.push_str(line.terminator);
    }
    out
}

fn is_terminal(c: char) -> bool {
    matches!(c, '.' | '?' | '!')
}

/// A sentence body and the whitespace that separates it from the next one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sentence<'a> {
    pub body: &'a str,
    pub gap: &'a str,
}

/// Splits text into sentences on `.`, `?` or `!` followed by whitespace.
/// Returns the leading whitespace and the sentences; abbreviations are not
/// special-cased.
pub fn split_sentences(text: &str) -> (&str, Vec<Sentence<'_>>) {
    let body_start = text.len() - text.trim_start().len();
    let lead = &text[..body_start];
    let mut sentences = Vec::new();
    let mut start = body_start;
    let mut chars = text[body_start..]
        .char_indices()
        .map(|(i, c)| (i + body_start, c))
        .peekable();
    while let Some((i, c)) = chars.next() {
        if !is_terminal(c) {
            continue;
        }
        let end = i + c.len_utf8();
        let mut gap_end = end;
        while let Some(&(j, w)) = chars.peek() {
            if !w.is_whitespace() {
                break;
            }
            gap_end = j + w.len_utf8();
            chars.next();
        }
        if gap_end > end {
            sentences.push(Sentence {
                body: &text[start..end],
                gap: &text[end..gap_end],
            });
            start = gap_end;
        }
    }
    if start < text.len() {
        let tail = &text[start..];
        let body = tail.trim_end();
        sentences.push(Sentence {
            body,
            gap: &tail[body.len()..],
        });
    }
    (lead, sentences)
}

/// Number of sentences by the [`split_sentences`] rule.
pub fn sentence_count(text: &str) -> usize {
    split_sentences(text).1.len()
}

/// Byte range of each maximal run of alphabetic characters.
pub fn word_spans(text: &str) -> Vec<(usize, usize)> {
    let mut spans = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        match (c.is_alphabetic(), start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                spans.push((s, i));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        spans.push((s, text.len()));
    }
    spans
}

/// Re-applies the capitalization pattern of `model` to `word`.
pub fn match_case(model: &str, word: &str) -> String {
    let mut letters = model.chars().filter(|c| c.is_alphabetic());
    let first_upper = letters.next().is_some_and(char::is_uppercase);
    let rest: Vec<char> = letters.collect();
    let all_upper = first_upper && !rest.is_empty() && rest.iter().all(|c| c.is_uppercase());
    if all_upper {
        word.chars().flat_map(char::to_uppercase).collect()
    } else if first_upper {
        let mut chars = word.chars();
        match chars.next() {
            Some(f) => f.to_uppercase().chain(chars).collect(),
            None => String::new(),
        }
    } else {
        String::from(word)
    }
}
