#![allow(dead_code)]

use std::fs;
use std::path::Path;

use inkveil_core::styloscope::{Corpus, Document, Preprocess};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const AUTHORS: [&str; 2] = ["lincoln", "roosevelt"];

pub fn desk_text(author: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures/desk")
        .join(format!("{author}.txt"));
    fs::read_to_string(path).expect("desk fixture")
}

/// Largest char boundary at or before `i` that follows whitespace.
fn word_boundary(text: &str, mut i: usize) -> usize {
    i = i.min(text.len());
    while i > 0 && !(text.is_char_boundary(i) && text[..i].ends_with(char::is_whitespace)) {
        i -= 1;
    }
    i
}

/// Consecutive pieces of about `size` bytes, cut at whitespace.
pub fn chunks(text: &str, size: usize) -> Vec<&str> {
    let mut out = Vec::new();
    let mut start = 0;
    while text.len() - start > size / 2 {
        let end = if text.len() - start < size * 3 / 2 {
            text.len()
        } else {
            word_boundary(text, start + size)
        };
        let end = if end <= start { text.len() } else { end };
        out.push(&text[start..end]);
        start = end;
    }
    out
}

/// A held-out window of about `size` bytes at a random position, and the
/// text before and after it.
pub fn hold_out<'a>(
    text: &'a str,
    size: usize,
    rng: &mut ChaCha8Rng,
) -> (&'a str, &'a str, &'a str) {
    let start = word_boundary(text, rng.gen_range(0..text.len() - size));
    let end = word_boundary(text, start + size);
    (&text[..start], &text[start..end], &text[end..])
}

pub fn labeled_docs(author: &str, parts: &[&str], size: usize) -> Vec<Document> {
    parts
        .iter()
        .flat_map(|p| chunks(p, size))
        .enumerate()
        .map(|(i, c)| {
            Document::prepared(
                format!("{author}/{i:02}"),
                Some(author.to_owned()),
                c,
                Preprocess::RAW,
            )
        })
        .collect()
}

/// Reference corpus of both desk authors in ~5 KB documents.
pub fn desk_corpus() -> Corpus {
    let docs = AUTHORS
        .iter()
        .flat_map(|a| labeled_docs(a, &[&desk_text(a)], 5_000))
        .collect();
    Corpus::new(docs)
}

/// Candidate held out of `author`, with the corpus built from the rest.
pub fn desk_split(author: &str, seed: u64) -> (Document, Corpus) {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut docs = Vec::new();
    let mut candidate = None;
    for a in AUTHORS {
        let text = desk_text(a);
        if a == author {
            let (before, held, after) = hold_out(&text, 5_000, &mut rng);
            candidate = Some(Document::new(format!("{a}-heldout"), None, held));
            docs.extend(labeled_docs(a, &[before, after], 5_000));
        } else {
            docs.extend(labeled_docs(a, &[&text], 5_000));
        }
    }
    (
        candidate.expect("author is a desk author"),
        Corpus::new(docs),
    )
}

/// Writes `corpus` as DIR/<author>/<doc>.txt.
pub fn write_corpus(dir: &Path, corpus: &Corpus) {
    for d in corpus.documents() {
        let path = dir.join(format!("{}.txt", d.id()));
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(path, d.text()).unwrap();
    }
}
