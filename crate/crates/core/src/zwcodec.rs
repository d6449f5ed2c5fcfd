//! Letter ↔ zero-width code point codec.
//!
//! Each letter `A`–`Z` maps to the binary form of its alphabet index. Bits are
//! written as two invisible code points, letters are joined by a third and a
//! message is closed by a fourth:
//!
//! | role  | code point | name                      |
//! |-------|------------|---------------------------|
//! | `0`   | U+200B     | ZERO WIDTH SPACE          |
//! | `1`   | U+200C     | ZERO WIDTH NON-JOINER     |
//! | sep   | U+200D     | ZERO WIDTH JOINER         |
//! | end   | U+FEFF     | ZERO WIDTH NO-BREAK SPACE |
//!
//! No Unicode normalization is ever applied; carrier and stream text are
//! treated as raw code point sequences.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Code points that render without advance width.
pub const ZERO_WIDTH_SET: [char; 8] = [
    '\u{200B}', '\u{200C}', '\u{200D}', '\u{200E}', '\u{200F}', '\u{2060}', '\u{2061}', '\u{FEFF}',
];

pub fn is_zero_width(c: char) -> bool {
    ZERO_WIDTH_SET.contains(&c)
}

/// Role of a code point inside a [`StegoStream`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Zero,
    One,
    Sep,
    End,
}

/// The four code points used to carry a payload.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ZeroWidthAlphabet {
    bit0: char,
    bit1: char,
    sep: char,
    end: char,
}

impl Default for ZeroWidthAlphabet {
    fn default() -> Self {
        Self::STANDARD
    }
}

impl ZeroWidthAlphabet {
    pub const STANDARD: Self = Self {
        bit0: '\u{200B}',
        bit1: '\u{200C}',
        sep: '\u{200D}',
        end: '\u{FEFF}',
    };

    /// Builds a custom alphabet. All four code points must be distinct
    /// members of [`ZERO_WIDTH_SET`].
    pub fn new(bit0: char, bit1: char, sep: char, end: char) -> Result<Self, CodecError> {
        let all = [bit0, bit1, sep, end];
        for (i, &c) in all.iter().enumerate() {
            if !is_zero_width(c) {
                return Err(CodecError::VisibleAlphabetMember(c));
            }
            if all[..i].contains(&c) {
                return Err(CodecError::DuplicateAlphabetMember(c));
            }
        }
        Ok(Self {
            bit0,
            bit1,
            sep,
            end,
        })
    }

    pub fn bit0(&self) -> char {
        self.bit0
    }

    pub fn bit1(&self) -> char {
        self.bit1
    }

    pub fn sep(&self) -> char {
        self.sep
    }

    pub fn end(&self) -> char {
        self.end
    }

    pub fn members(&self) -> [char; 4] {
        [self.bit0, self.bit1, self.sep, self.end]
    }

    pub fn symbol_of(&self, c: char) -> Option<Symbol> {
        match c {
            c if c == self.bit0 => Some(Symbol::Zero),
            c if c == self.bit1 => Some(Symbol::One),
            c if c == self.sep => Some(Symbol::Sep),
            c if c == self.end => Some(Symbol::End),
            _ => None,
        }
    }

    pub fn char_of(&self, symbol: Symbol) -> char {
        match symbol {
            Symbol::Zero => self.bit0,
            Symbol::One => self.bit1,
            Symbol::Sep => self.sep,
            Symbol::End => self.end,
        }
    }

    pub fn contains(&self, c: char) -> bool {
        self.symbol_of(c).is_some()
    }
}

/// Letter → bit-string table and its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codebook {
    forward: BTreeMap<char, String>,
    reverse: BTreeMap<String, char>,
}

impl Default for Codebook {
    fn default() -> Self {
        build_codebook()
    }
}

impl Codebook {
    /// Builds a codebook from explicit pairs, rejecting empty or non-binary
    /// codes and duplicate letters or codes.
    pub fn from_pairs<I, S>(pairs: I) -> Result<Self, CodecError>
    where
        I: IntoIterator<Item = (char, S)>,
        S: Into<String>,
    {
        let mut forward = BTreeMap::new();
        let mut reverse = BTreeMap::new();
        for (letter, code) in pairs {
            let code = code.into();
            if code.is_empty() || !code.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(CodecError::InvalidCode { letter, code });
            }
            if forward.insert(letter, code.clone()).is_some() {
                return Err(CodecError::DuplicateLetter(letter));
            }
            if reverse.insert(code.clone(), letter).is_some() {
                return Err(CodecError::InvalidCode { letter, code });
            }
        }
        Ok(Self { forward, reverse })
    }

    pub fn code(&self, letter: char) -> Option<&str> {
        self.forward.get(&letter).map(String::as_str)
    }

    pub fn letter(&self, code: &str) -> Option<char> {
        self.reverse.get(code).copied()
    }

    pub fn forward(&self) -> &BTreeMap<char, String> {
        &self.forward
    }

    pub fn reverse(&self) -> &BTreeMap<String, char> {
        &self.reverse
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }
}

/// Canonical codebook: the letter at alphabet index `i` maps to `i` in binary
/// without leading zeros (`A` = `"0"`, `Z` = `"11001"`).
pub fn build_codebook() -> Codebook {
    let pairs = (b'A'..=b'Z').map(|b| {
        let index = u32::from(b - b'A');
        (char::from(b), alloc::format!("{index:b}"))
    });
    Codebook::from_pairs(pairs).expect("binary indices are distinct")
}

/// A sequence of code points drawn only from a [`ZeroWidthAlphabet`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct StegoStream(Vec<char>);

impl StegoStream {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    /// Wraps raw units, checking that each belongs to `alphabet`.
    pub fn from_units(units: Vec<char>, alphabet: &ZeroWidthAlphabet) -> Result<Self, CodecError> {
        if let Some((position, &c)) = units
            .iter()
            .enumerate()
            .find(|(_, c)| !alphabet.contains(**c))
        {
            return Err(CodecError::Malformed(MalformedStream::ForeignCodePoint {
                position,
                found: c,
            }));
        }
        Ok(Self(units))
    }

    pub fn units(&self) -> &[char] {
        &self.0
    }

    pub fn into_units(self) -> Vec<char> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True when every unit is in `alphabet` and the stream ends with
    /// exactly one terminating `end`.
    pub fn is_well_formed(&self, alphabet: &ZeroWidthAlphabet) -> bool {
        match self.0.split_last() {
            Some((&last, rest)) => {
                last == alphabet.end()
                    && rest
                        .iter()
                        .all(|&c| alphabet.contains(c) && c != alphabet.end())
            }
            None => false,
        }
    }

    /// Renders units as space-separated `U+XXXX` escapes.
    pub fn escaped(&self) -> String {
        use core::fmt::Write;
        let mut out = String::with_capacity(self.0.len() * 7);
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "U+{:04X}", u32::from(*c));
        }
        out
    }

    pub(crate) fn push(&mut self, c: char) {
        self.0.push(c);
    }
}

impl fmt::Display for StegoStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.0 {
            fmt::Write::write_char(f, *c)?;
        }
        Ok(())
    }
}

/// Why a stream could not be decoded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MalformedStream {
    UnknownBitGroup(String),
    MissingEnd,
    ForeignCodePoint { position: usize, found: char },
}

impl fmt::Display for MalformedStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::UnknownBitGroup(bits) if bits.is_empty() => f.write_str("empty bit group"),
            Self::UnknownBitGroup(bits) => write!(f, "unknown bit group {bits:?}"),
            Self::MissingEnd => f.write_str("stream has no end marker"),
            Self::ForeignCodePoint { position, found } => {
                write!(
                    f,
                    "code point U+{:04X} at unit {position} is not in the alphabet",
                    u32::from(*found)
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodecError {
    #[error("unsupported character U+{:04X} at position {position}", u32::from(*found))]
    UnsupportedCharacter { position: usize, found: char },
    #[error("malformed stream: {0}")]
    Malformed(MalformedStream),
    #[error("invalid code {code:?} for letter {letter:?}")]
    InvalidCode { letter: char, code: String },
    #[error("letter {0:?} appears twice in codebook")]
    DuplicateLetter(char),
    #[error("U+{:04X} is not a zero-width code point", u32::from(*.0))]
    VisibleAlphabetMember(char),
    #[error("U+{:04X} is used for two roles", u32::from(*.0))]
    DuplicateAlphabetMember(char),
}

/// A character skipped by lenient encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dropped {
    pub position: usize,
    pub found: char,
}

/// Encodes `plaintext` after uppercase folding, failing on the first
/// character outside `A`–`Z`.
pub fn encode_message(
    plaintext: &str,
    codebook: &Codebook,
    alphabet: &ZeroWidthAlphabet,
) -> Result<StegoStream, CodecError> {
    let (stream, dropped) = encode_lenient(plaintext, codebook, alphabet);
    match dropped.first() {
        Some(d) => Err(CodecError::UnsupportedCharacter {
            position: d.position,
            found: d.found,
        }),
        None => Ok(stream),
    }
}

/// Encodes `plaintext`, skipping characters the codebook cannot represent
/// and reporting them. Positions are character indices into `plaintext`.
pub fn encode_lenient(
    plaintext: &str,
    codebook: &Codebook,
    alphabet: &ZeroWidthAlphabet,
) -> (StegoStream, Vec<Dropped>) {
    let mut stream = StegoStream::new();
    let mut dropped = Vec::new();
    let mut first = true;
    for (position, c) in plaintext.chars().enumerate() {
        for folded in c.to_uppercase() {
            let Some(code) = codebook.code(folded) else {
                dropped.push(Dropped { position, found: c });
                break;
            };
            if !first {
                stream.push(alphabet.sep());
            }
            first = false;
            for bit in code.bytes() {
                stream.push(if bit == b'0' {
                    alphabet.bit0()
                } else {
                    alphabet.bit1()
                });
            }
        }
    }
    stream.push(alphabet.end());
    (stream, dropped)
}

/// Decodes the first message in `units`. Anything after the first `end` is
/// ignored.
pub fn decode_stream(
    units: &[char],
    codebook: &Codebook,
    alphabet: &ZeroWidthAlphabet,
) -> Result<String, CodecError> {
    let malformed = |m| Err(CodecError::Malformed(m));
    let mut out = String::new();
    let mut group = String::new();
    let mut any = false;
    for (position, &c) in units.iter().enumerate() {
        match alphabet.symbol_of(c) {
            Some(Symbol::Zero) => group.push('0'),
            Some(Symbol::One) => group.push('1'),
            Some(Symbol::Sep) | Some(Symbol::End) => {
                let is_end = c == alphabet.end();
                // a bare `end` is the empty message
                if !(is_end && !any && group.is_empty()) {
                    match codebook.letter(&group) {
                        Some(letter) => out.push(letter),
                        None => return malformed(MalformedStream::UnknownBitGroup(group)),
                    }
                }
                group.clear();
                any = true;
                if is_end {
                    return Ok(out);
                }
            }
            None => return malformed(MalformedStream::ForeignCodePoint { position, found: c }),
        }
    }
    malformed(MalformedStream::MissingEnd)
}

/// Carrier text split into visible text and the alphabet code points it
/// contained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stripped {
    pub clean: String,
    pub extracted: StegoStream,
    /// Byte offset in the original text of each extracted unit.
    pub offsets: Vec<usize>,
}

impl Stripped {
    /// Re-inserts the extracted units at their original offsets.
    pub fn reconstruct(&self) -> String {
        let mut out = String::with_capacity(self.clean.len() + self.extracted.len() * 3);
        let mut clean = self.clean.chars();
        let mut units = self.extracted.units().iter().zip(&self.offsets).peekable();
        loop {
            if let Some((&c, _)) = units.next_if(|(_, &offset)| offset == out.len()) {
                out.push(c);
                continue;
            }
            match clean.next() {
                Some(c) => out.push(c),
                None => break,
            }
        }
        out.extend(units.map(|(&c, _)| c));
        out
    }
}

/// Removes the standard alphabet's code points from `text`.
pub fn strip_zero_width(text: &str) -> Stripped {
    strip_with(text, &ZeroWidthAlphabet::STANDARD)
}

pub fn strip_with(text: &str, alphabet: &ZeroWidthAlphabet) -> Stripped {
    let mut clean = String::with_capacity(text.len());
    let mut extracted = StegoStream::new();
    let mut offsets = Vec::new();
    for (offset, c) in text.char_indices() {
        if alphabet.contains(c) {
            extracted.push(c);
            offsets.push(offset);
        } else {
            clean.push(c);
        }
    }
    Stripped {
        clean,
        extracted,
        offsets,
    }
}

/// Occurrences of alphabet code points in a text.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScanReport {
    /// Count per alphabet member; all four members are always present.
    pub counts: BTreeMap<char, usize>,
    /// `(byte offset, code point)` in increasing offset order.
    pub offsets: Vec<(usize, char)>,
    pub verdict: bool,
}

impl ScanReport {
    pub fn total(&self) -> usize {
        self.offsets.len()
    }
}

pub fn scan_text(text: &str) -> ScanReport {
    scan_with(text, &ZeroWidthAlphabet::STANDARD)
}

pub fn scan_with(text: &str, alphabet: &ZeroWidthAlphabet) -> ScanReport {
    let mut counts: BTreeMap<char, usize> = alphabet.members().iter().map(|&c| (c, 0)).collect();
    let offsets: Vec<(usize, char)> = text
        .char_indices()
        .filter(|(_, c)| alphabet.contains(*c))
        .collect();
    for (_, c) in &offsets {
        *counts.entry(*c).or_default() += 1;
    }
    ScanReport {
        verdict: !offsets.is_empty(),
        counts,
        offsets,
    }
}
