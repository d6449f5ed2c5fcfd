use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::styloscope::FunctionWords;

static ENGLISH_GROUPS: &str = include_str!("../../data/synonyms_en.txt");
static FUNCTION_ALTERNATES: &str = include_str!("../../data/function_alternates_en.txt");

/// Word → candidate replacements, all lowercase single words.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SynonymTable {
    entries: BTreeMap<String, Vec<String>>,
}

impl SynonymTable {
    /// The bundled English table with function words removed.
    pub fn english() -> Self {
        Self::from_groups(ENGLISH_GROUPS, Some(&FunctionWords::english()))
    }

    /// The bundled English table plus interchangeable function words such
    /// as `while`/`whilst`. Used by obfuscation, where shifting function
    /// word rates is the point.
    pub fn english_with_function_words() -> Self {
        let mut table = Self::english();
        table.merge(Self::from_groups(FUNCTION_ALTERNATES, None));
        table
    }

    /// Adds the entries of `other`, keeping existing synonyms first.
    pub fn merge(&mut self, other: SynonymTable) {
        for (word, syns) in other.entries {
            let list = self.entries.entry(word).or_default();
            for s in syns {
                if !list.contains(&s) {
                    list.push(s);
                }
            }
        }
    }

    /// Parses synonym groups, one whitespace-separated group per line. Each
    /// member maps to the other members of every group it appears in.
    /// Words in `exclude` are dropped.
    pub fn from_groups(text: &str, exclude: Option<&FunctionWords>) -> Self {
        let mut sets: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let group: Vec<String> = line
                .split_whitespace()
                .map(str::to_lowercase)
                .filter(|w| !exclude.is_some_and(|fw| fw.contains(w)))
                .collect();
            for word in &group {
                let others = group.iter().filter(|o| *o != word).cloned();
                sets.entry(word.clone()).or_default().extend(others);
            }
        }
        let entries = sets
            .into_iter()
            .filter(|(_, s)| !s.is_empty())
            .map(|(w, s)| (w, s.into_iter().collect()))
            .collect();
        Self { entries }
    }

    /// Builds a table from explicit directed entries.
    pub fn from_entries<I, W, S>(entries: I) -> Self
    where
        I: IntoIterator<Item = (W, S)>,
        W: AsRef<str>,
        S: IntoIterator,
        S::Item: AsRef<str>,
    {
        let mut map: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (word, syns) in entries {
            let list = map.entry(word.as_ref().to_lowercase()).or_default();
            for s in syns {
                let s = s.as_ref().to_lowercase();
                if !list.contains(&s) {
                    list.push(s);
                }
            }
        }
        map.retain(|_, v| !v.is_empty());
        Self { entries: map }
    }

    pub fn lookup(&self, word: &str) -> Option<&[String]> {
        self.entries.get(word).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Every character that can appear in a replacement.
    pub fn alphabet(&self) -> BTreeSet<char> {
        self.entries
            .values()
            .flatten()
            .flat_map(|w| w.chars())
            .collect()
    }
}
