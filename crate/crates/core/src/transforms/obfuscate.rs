use alloc::string::String;
use alloc::vec::Vec;
use rand::Rng;

use super::translate::substitute;
use super::{clean_input, shuffle, SynonymTable, TransformSeed};
use crate::text::split_sentences;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct ObfuscationOptions {
    pub shuffle_sentences: bool,
    /// Chance that a content word with synonyms is replaced.
    pub substitution_rate: f64,
    /// Randomly insert a space before `,`, `;` and `:`.
    pub punctuation_jitter: bool,
}

impl Default for ObfuscationOptions {
    fn default() -> Self {
        Self {
            shuffle_sentences: true,
            substitution_rate: 0.3,
            punctuation_jitter: false,
        }
    }
}

/// Shuffles sentence order, substitutes synonyms and optionally jitters
/// punctuation spacing. Every word with an entry in `table` is eligible,
/// function words included. The whitespace between sentences stays in place
/// and a trailing sentence without a terminator is never moved, so the
/// sentence count is unchanged.
pub fn obfuscate(
    text: &str,
    seed: TransformSeed,
    options: &ObfuscationOptions,
    table: &SynonymTable,
) -> String {
    let text = clean_input(text);
    let shuffled = if options.shuffle_sentences {
        shuffle_sentences(&text, seed.derive("shuffle"))
    } else {
        text
    };
    let rate = options.substitution_rate.clamp(0.0, 1.0);
    let substituted = substitute(&shuffled, table, None, rate, seed.derive("substitute"));
    if options.punctuation_jitter {
        jitter(&substituted, seed.derive("jitter"))
    } else {
        substituted
    }
}

fn shuffle_sentences(text: &str, seed: TransformSeed) -> String {
    let (lead, sentences) = split_sentences(text);
    let movable = match sentences.last() {
        Some(last) if !last.body.ends_with(['.', '?', '!']) => sentences.len() - 1,
        _ => sentences.len(),
    };
    let mut bodies: Vec<&str> = sentences.iter().map(|s| s.body).collect();
    let mut head: Vec<&str> = bodies.drain(..movable).collect();
    shuffle(&mut head, &mut seed.rng());
    head.extend(bodies);

    let mut out = String::with_capacity(text.len());
    out.push_str(lead);
    for (body, slot) in head.iter().zip(&sentences) {
        out.push_str(body);
        out.push_str(slot.gap);
    }
    out
}

fn jitter(text: &str, seed: TransformSeed) -> String {
    let mut rng = seed.rng();
    let mut out = String::with_capacity(text.len() + text.len() / 16);
    let mut prev: Option<char> = None;
    for c in text.chars() {
        if matches!(c, ',' | ';' | ':')
            && prev.is_some_and(|p| !p.is_whitespace())
            && rng.gen_bool(0.5)
        {
            out.push(' ');
        }
        out.push(c);
        prev = Some(c);
    }
    out
}
