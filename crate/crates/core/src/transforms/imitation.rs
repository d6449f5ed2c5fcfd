use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use rand::Rng;

use super::{clean_input, TransformError, TransformSeed};

/// Character-level Markov chain of a fixed context length.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StyleModel {
    order: usize,
    /// Context → successors with their probabilities, ordered by character.
    transitions: BTreeMap<String, Vec<(char, f64)>>,
    trained_on: String,
}

impl StyleModel {
    /// Order used by the pipeline's imitation stage.
    pub const DEFAULT_ORDER: usize = 3;

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn trained_on(&self) -> &str {
        &self.trained_on
    }

    pub fn transitions(&self) -> &BTreeMap<String, Vec<(char, f64)>> {
        &self.transitions
    }

    pub fn probability(&self, context: &str, next: char) -> f64 {
        self.transitions
            .get(context)
            .and_then(|d| d.iter().find(|(c, _)| *c == next))
            .map_or(0.0, |(_, p)| *p)
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }
}

/// Counts successors over every window of `order + 1` characters.
pub fn train_style_model(
    text: &str,
    order: usize,
    trained_on: &str,
) -> Result<StyleModel, TransformError> {
    if order == 0 {
        return Err(TransformError::InvalidOrder);
    }
    let chars: Vec<char> = clean_input(text).chars().collect();
    if chars.len() <= order {
        return Err(TransformError::CorpusTooSmall {
            chars: chars.len(),
            order,
        });
    }
    let mut counts: BTreeMap<String, BTreeMap<char, usize>> = BTreeMap::new();
    for window in chars.windows(order + 1) {
        let context: String = window[..order].iter().collect();
        *counts
            .entry(context)
            .or_default()
            .entry(window[order])
            .or_default() += 1;
    }
    let transitions = counts
        .into_iter()
        .map(|(context, next)| {
            let total = next.values().sum::<usize>() as f64;
            (
                context,
                next.into_iter()
                    .map(|(c, n)| (c, n as f64 / total))
                    .collect(),
            )
        })
        .collect();
    Ok(StyleModel {
        order,
        transitions,
        trained_on: String::from(trained_on),
    })
}

/// Generated text plus the character offsets where sampling restarted from
/// a fresh context after reaching a dead end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Imitation {
    pub text: String,
    pub restarts: Vec<usize>,
}

/// Samples about `length` characters from `model`, cut back to the last
/// whole word. Output without any whitespace is kept as is.
pub fn imitate(model: &StyleModel, length: usize, seed: TransformSeed) -> String {
    imitate_traced(model, length, seed).text
}

pub fn imitate_traced(model: &StyleModel, length: usize, seed: TransformSeed) -> Imitation {
    if length == 0 || model.is_empty() {
        return Imitation {
            text: String::new(),
            restarts: Vec::new(),
        };
    }
    let mut rng = seed.rng();
    let contexts: Vec<&String> = model.transitions.keys().collect();
    let mut out: Vec<char> = contexts[rng.gen_range(0..contexts.len())].chars().collect();
    let mut restarts = Vec::new();

    // one character past `length` decides whether the last word is whole
    while out.len() <= length {
        let context: String = out[out.len() - model.order..].iter().collect();
        match model.transitions.get(&context) {
            Some(dist) => {
                let r: f64 = rng.gen();
                let mut acc = 0.0;
                let mut pick = dist[dist.len() - 1].0;
                for &(c, p) in dist {
                    acc += p;
                    if r < acc {
                        pick = c;
                        break;
                    }
                }
                out.push(pick);
            }
            None => {
                restarts.push(out.len());
                out.extend(contexts[rng.gen_range(0..contexts.len())].chars());
            }
        }
    }

    let head = &out[..length];
    let cut = if out[length].is_whitespace() {
        length
    } else {
        match head.iter().rposition(|c| c.is_whitespace()) {
            Some(i) => i,
            None => length,
        }
    };
    let text: String = out[..cut].iter().collect();
    let text = String::from(text.trim_end());
    let kept = text.chars().count();
    restarts.retain(|&r| r < kept);
    Imitation { text, restarts }
}
