//! UTF-8 file and stream IO, and corpus loading.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use inkveil_core::styloscope::{Corpus, Document, Preprocess};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("{path}: not valid UTF-8")]
    NotUtf8 { path: PathBuf },
    #[error("refusing to write U+FEFF at the start of output; it would read as a byte-order mark (try --escaped)")]
    LeadingBom,
    #[error("{0}: no .txt documents found")]
    EmptyCorpus(PathBuf),
    #[error("write failed: {0}")]
    Write(#[from] io::Error),
}

/// Reads a UTF-8 file, or standard input for `-`.
pub fn read_text(path: &Path, stdin: &mut dyn Read) -> Result<String, IoError> {
    let mut bytes = Vec::new();
    let result = if path == Path::new("-") {
        stdin.read_to_end(&mut bytes).map(|_| ())
    } else {
        fs::read(path).map(|b| bytes = b)
    };
    result.map_err(|source| IoError::Read {
        path: path.to_owned(),
        source,
    })?;
    String::from_utf8(bytes).map_err(|_| IoError::NotUtf8 {
        path: path.to_owned(),
    })
}

/// Writes `text` unchanged. Text starting with U+FEFF is refused.
pub fn write_text(out: &mut dyn Write, text: &str) -> Result<(), IoError> {
    if text.starts_with('\u{FEFF}') {
        return Err(IoError::LeadingBom);
    }
    out.write_all(text.as_bytes())?;
    Ok(())
}

pub fn write_file(path: &Path, text: &str) -> Result<(), IoError> {
    let mut file = fs::File::create(path).map_err(|source| IoError::Read {
        path: path.to_owned(),
        source,
    })?;
    write_text(&mut file, text)
}

/// Loads `dir/<author>/<doc>.txt`. Documents are ordered by author, then
/// file name, and get the id `<author>/<stem>`.
pub fn load_corpus(dir: &Path, preprocess: Preprocess) -> Result<Corpus, IoError> {
    let read_dir = |p: &Path| -> Result<Vec<PathBuf>, IoError> {
        let mut entries = fs::read_dir(p)
            .and_then(|rd| {
                rd.map(|e| e.map(|e| e.path()))
                    .collect::<Result<Vec<_>, _>>()
            })
            .map_err(|source| IoError::Read {
                path: p.to_owned(),
                source,
            })?;
        entries.sort();
        Ok(entries)
    };
    let mut documents = Vec::new();
    for author_dir in read_dir(dir)?.into_iter().filter(|p| p.is_dir()) {
        let author = file_name(&author_dir);
        for file in read_dir(&author_dir)?.into_iter().filter(|p| is_txt(p)) {
            let text = read_file(&file)?;
            let id = format!("{author}/{}", stem(&file));
            documents.push(Document::prepared(
                id,
                Some(author.clone()),
                &text,
                preprocess,
            ));
        }
    }
    if documents.is_empty() {
        return Err(IoError::EmptyCorpus(dir.to_owned()));
    }
    Ok(Corpus::new(documents))
}

/// Loads labeled documents given as `AUTHOR=FILE`, or `FILE` labeled with
/// its stem.
pub fn load_labeled(specs: &[String], preprocess: Preprocess) -> Result<Vec<Document>, IoError> {
    specs
        .iter()
        .map(|spec| {
            let (author, path) = match spec.split_once('=') {
                Some((a, p)) if !a.is_empty() => (a.to_owned(), PathBuf::from(p)),
                _ => {
                    let p = PathBuf::from(spec);
                    (stem(&p), p)
                }
            };
            let text = read_file(&path)?;
            Ok(Document::prepared(
                format!("{author}/{}", stem(&path)),
                Some(author),
                &text,
                preprocess,
            ))
        })
        .collect()
}

pub fn load_candidate(
    path: &Path,
    stdin: &mut dyn Read,
    preprocess: Preprocess,
) -> Result<Document, IoError> {
    let text = read_text(path, stdin)?;
    let id = if path == Path::new("-") {
        "stdin".to_owned()
    } else {
        stem(path)
    };
    Ok(Document::prepared(id, None, &text, preprocess))
}

fn read_file(path: &Path) -> Result<String, IoError> {
    read_text(path, &mut io::empty())
}

fn is_txt(p: &Path) -> bool {
    p.is_file() && p.extension().is_some_and(|e| e == "txt")
}

fn file_name(p: &Path) -> String {
    p.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn stem(p: &Path) -> String {
    p.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}
