use alloc::string::String;
use rand::Rng;

use super::{clean_input, SynonymTable, TransformError, TransformSeed};
use crate::styloscope::FunctionWords;
use crate::text::{match_case, word_spans};

/// Sends text through a pivot language chain and back.
pub trait TranslationBackend {
    fn translate(
        &self,
        text: &str,
        chain: &[String],
        seed: TransformSeed,
    ) -> Result<String, TransformError>;

    /// External backends need a non-empty chain.
    fn is_external(&self) -> bool {
        true
    }
}

/// Offline stand-in for machine translation. Each content word with an
/// entry in the synonym table is swapped for a seeded pick among its
/// synonyms, imitating the lexical drift of a translation round trip.
/// The pivot chain is ignored.
#[derive(Debug, Clone)]
pub struct SynonymDrift {
    table: SynonymTable,
    function_words: FunctionWords,
}

impl Default for SynonymDrift {
    fn default() -> Self {
        Self::new(SynonymTable::english())
    }
}

impl SynonymDrift {
    pub fn new(table: SynonymTable) -> Self {
        Self {
            table,
            function_words: FunctionWords::english(),
        }
    }

    pub fn table(&self) -> &SynonymTable {
        &self.table
    }
}

impl TranslationBackend for SynonymDrift {
    fn translate(
        &self,
        text: &str,
        _chain: &[String],
        seed: TransformSeed,
    ) -> Result<String, TransformError> {
        Ok(substitute(
            text,
            &self.table,
            Some(&self.function_words),
            1.0,
            seed,
        ))
    }

    fn is_external(&self) -> bool {
        false
    }
}

/// Replaces words that have synonyms, each with probability `rate`. Words
/// in `skip` are left alone.
pub(crate) fn substitute(
    text: &str,
    table: &SynonymTable,
    skip: Option<&FunctionWords>,
    rate: f64,
    seed: TransformSeed,
) -> String {
    let mut rng = seed.rng();
    let mut out = String::with_capacity(text.len());
    let mut last = 0;
    for (start, end) in word_spans(text) {
        let word = &text[start..end];
        let lower = word.to_lowercase();
        if skip.is_some_and(|fw| fw.contains(&lower)) {
            continue;
        }
        let Some(choices) = table.lookup(&lower) else {
            continue;
        };
        if rate <= 0.0 || (rate < 1.0 && !rng.gen_bool(rate)) {
            continue;
        }
        let pick = &choices[rng.gen_range(0..choices.len())];
        out.push_str(&text[last..start]);
        out.push_str(&match_case(word, pick));
        last = end;
    }
    out.push_str(&text[last..]);
    out
}

/// Round-trip translation through `backend`. Zero-width code points are
/// removed first. Backend failures are returned, never papered over.
pub fn round_trip_translate(
    text: &str,
    chain: &[String],
    backend: &dyn TranslationBackend,
    seed: TransformSeed,
) -> Result<String, TransformError> {
    if backend.is_external() && chain.is_empty() {
        return Err(TransformError::EmptyChain);
    }
    backend.translate(&clean_input(text), chain, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::sentence_count;
    use alloc::vec;
    use alloc::vec::Vec;

    fn drift() -> SynonymDrift {
        SynonymDrift::new(SynonymTable::from_entries([("big", ["large"])]))
    }

    #[test]
    fn table_lookup() {
        let out = round_trip_translate("big house", &[], &drift(), TransformSeed(7)).unwrap();
        assert_eq!(out, "large house");
        let out =
            round_trip_translate("A Big house. BIG!", &[], &drift(), TransformSeed(7)).unwrap();
        assert_eq!(out, "A Large house. LARGE!");
    }

    #[test]
    fn no_hits_is_identity() {
        let text = "zebra quokka, the axolotl.";
        assert_eq!(
            round_trip_translate(text, &[], &drift(), TransformSeed(1)).unwrap(),
            text
        );
    }

    #[test]
    fn strips_payload_on_entry() {
        let out = round_trip_translate("qu\u{200B}ick", &[], &drift(), TransformSeed(1)).unwrap();
        assert_eq!(out, "quick");
    }

    #[test]
    fn bundled_drift_is_seeded() {
        let d = SynonymDrift::default();
        let text = "The big house stood near the old road. It was quiet and dark!";
        let a = round_trip_translate(text, &[], &d, TransformSeed(3)).unwrap();
        let b = round_trip_translate(text, &[], &d, TransformSeed(3)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, text);
        assert_eq!(sentence_count(&a), sentence_count(text));
        let outs: Vec<String> = (0..8)
            .map(|s| round_trip_translate(text, &[], &d, TransformSeed(s)).unwrap())
            .collect();
        assert!(outs.iter().any(|o| o != &outs[0]));
    }

    struct Refusing;

    impl TranslationBackend for Refusing {
        fn translate(
            &self,
            _: &str,
            _: &[String],
            _: TransformSeed,
        ) -> Result<String, TransformError> {
            Err(TransformError::BackendUnavailable("down".into()))
        }
    }

    #[test]
    fn external_backend_errors_surface() {
        assert_eq!(
            round_trip_translate("x", &[], &Refusing, TransformSeed(0)),
            Err(TransformError::EmptyChain)
        );
        let chain = vec![String::from("de")];
        assert!(matches!(
            round_trip_translate("x", &chain, &Refusing, TransformSeed(0)),
            Err(TransformError::BackendUnavailable(_))
        ));
    }
}
