//! Document loading and tokenization.
//!
//! A document is a sequence of Unicode scalar values addressed by 1-based
//! coordinates. A token is a maximal run of non-separator symbols.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::model::{ModelError, TextFragment};

/// ASCII punctuation treated as separators unless overridden.
pub const DEFAULT_PUNCTUATION: &str = ".,;:!?()[]{}<>\"'`/\\|=+-*&^%$#@~";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IngestError {
    #[error("input is not valid UTF-8 (first invalid byte at offset {valid_up_to})")]
    Encoding { valid_up_to: usize },
}

/// Opaque identifier tagging every fragment taken from a document.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DocId(pub u32);

impl fmt::Display for DocId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "doc#{}", self.0)
    }
}

/// The set of symbols that split tokens.
///
/// Unicode whitespace always separates; the punctuation part is configurable.
#[derive(Clone, PartialEq, Eq)]
pub struct SeparatorSet {
    ascii: [bool; 128],
    other: Vec<char>,
    punctuation: String,
}

impl SeparatorSet {
    /// Whitespace plus the given punctuation symbols.
    pub fn with_punctuation(punctuation: &str) -> Self {
        let mut ascii = [false; 128];
        let mut other = Vec::new();
        let mut kept = String::new();
        for c in punctuation.chars() {
            if c.is_whitespace() {
                continue;
            }
            let fresh = if c.is_ascii() {
                !core::mem::replace(&mut ascii[c as usize], true)
            } else if other.contains(&c) {
                false
            } else {
                other.push(c);
                true
            };
            if fresh {
                kept.push(c);
            }
        }
        other.sort_unstable();
        SeparatorSet { ascii, other, punctuation: kept }
    }

    #[inline]
    pub fn is_separator(&self, c: char) -> bool {
        if c.is_ascii() {
            self.ascii[c as usize] || c.is_ascii_whitespace()
        } else {
            c.is_whitespace() || self.other.binary_search(&c).is_ok()
        }
    }

    /// The punctuation symbols in this set, deduplicated, in the order given.
    pub fn punctuation(&self) -> &str {
        &self.punctuation
    }
}

impl Default for SeparatorSet {
    fn default() -> Self {
        SeparatorSet::with_punctuation(DEFAULT_PUNCTUATION)
    }
}

impl fmt::Debug for SeparatorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("SeparatorSet").field(&self.punctuation).finish()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IngestOptions {
    /// Blank out `<...>` markup tags with spaces before tokenizing.
    pub strip_markup: bool,
    pub separators: SeparatorSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    /// Coordinate of the first symbol (1-based).
    pub begin: usize,
    /// Coordinate of the last symbol (1-based, inclusive).
    pub end: usize,
    /// Position in the token stream (0-based).
    pub index: usize,
}

/// Normalized document text plus its token stream. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    id: DocId,
    name: String,
    symbols: Vec<char>,
    tokens: Vec<Token>,
}

impl Document {
    pub fn with_id(mut self, id: DocId) -> Self {
        self.id = id;
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn id(&self) -> DocId {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of symbols.
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    /// Text at the closed interval `[begin, end]`. An interval with
    /// `end == begin - 1` is empty; anything else out of range is clipped.
    pub fn slice(&self, begin: usize, end: usize) -> String {
        let lo = begin.max(1) - 1;
        let hi = end.min(self.symbols.len());
        if lo >= hi {
            return String::new();
        }
        self.symbols[lo..hi].iter().collect()
    }

    /// Text of a fragment of this document.
    pub fn text_of(&self, fragment: &TextFragment) -> String {
        self.slice(fragment.begin(), fragment.end())
    }

    /// A fragment of this document, checked against its bounds.
    pub fn fragment(&self, begin: usize, end: usize) -> Result<TextFragment, ModelError> {
        if end > self.len() {
            return Err(ModelError::OutOfBounds { begin, end, length: self.len() });
        }
        TextFragment::new(self.id, begin, end)
    }
}

/// Decode, normalize and tokenize a document.
///
/// CR LF pairs become LF and a leading byte-order mark is dropped; all
/// coordinates refer to the normalized text.
pub fn load_document(source: &[u8], options: &IngestOptions) -> Result<Document, IngestError> {
    let text = core::str::from_utf8(source).map_err(|e| IngestError::Encoding { valid_up_to: e.valid_up_to() })?;
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);

    let mut symbols = Vec::with_capacity(text.len());
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        if c == '\r' && chars.peek() == Some(&'\n') {
            continue;
        }
        symbols.push(c);
    }
    if options.strip_markup {
        strip_markup(&mut symbols);
    }
    let tokens = tokenize(&symbols, &options.separators);
    Ok(Document { id: DocId::default(), name: String::new(), symbols, tokens })
}

/// Split symbols into maximal runs of non-separators.
pub fn tokenize(symbols: &[char], separators: &SeparatorSet) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut start: Option<usize> = None;
    for (i, &c) in symbols.iter().enumerate() {
        match (separators.is_separator(c), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                push_token(&mut tokens, symbols, s, i);
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        push_token(&mut tokens, symbols, s, symbols.len());
    }
    tokens
}

fn push_token(tokens: &mut Vec<Token>, symbols: &[char], from: usize, to: usize) {
    let index = tokens.len();
    tokens.push(Token { text: symbols[from..to].iter().collect(), begin: from + 1, end: to, index });
}

/// Replace every `<tag ...>` with spaces of the same length so coordinates
/// still map to the source. Only `<` followed by a letter, `/`, `!` or `?`
/// and closed by a later `>` counts as a tag.
pub fn strip_markup(symbols: &mut [char]) {
    let mut i = 0;
    while i < symbols.len() {
        if symbols[i] == '<' && symbols.get(i + 1).is_some_and(|&c| c.is_alphabetic() || matches!(c, '/' | '!' | '?')) {
            if let Some(close) = symbols[i + 1..].iter().position(|&c| c == '>' || c == '<') {
                let close = i + 1 + close;
                if symbols[close] == '>' {
                    for s in &mut symbols[i..=close] {
                        if *s != '\n' {
                            *s = ' ';
                        }
                    }
                    i = close + 1;
                    continue;
                }
            }
        }
        i += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn load(text: &str) -> Document {
        load_document(text.as_bytes(), &IngestOptions::default()).unwrap()
    }

    fn texts(doc: &Document) -> Vec<&str> {
        doc.tokens().iter().map(|t| t.text.as_str()).collect()
    }

    #[test]
    fn empty_input() {
        let doc = load("");
        assert_eq!(doc.len(), 0);
        assert!(doc.tokens().is_empty());
    }

    #[test]
    fn fm_registers() {
        let doc = load("FM registers");
        assert_eq!(doc.len(), 12);
        assert_eq!(texts(&doc), vec!["FM", "registers"]);
        assert_eq!((doc.tokens()[1].begin, doc.tokens()[1].end), (4, 12));
    }

    #[test]
    fn punctuation_splits() {
        assert_eq!(texts(&load("a.b(c)")), vec!["a", "b", "c"]);
        assert!(load("  ").tokens().is_empty());
        assert_eq!(texts(&load("snake_case x")), vec!["snake_case", "x"]);
    }

    #[test]
    fn crlf_is_normalized() {
        let doc = load("a\r\nb\rc");
        assert_eq!(doc.symbols(), &['a', '\n', 'b', '\r', 'c']);
        assert_eq!(doc.tokens()[1].begin, 3);
    }

    #[test]
    fn coordinates_are_symbols_not_bytes() {
        let doc = load("héllo wörld");
        assert_eq!(doc.len(), 11);
        assert_eq!((doc.tokens()[1].begin, doc.tokens()[1].end), (7, 11));
        assert_eq!(doc.slice(7, 11), "wörld");
    }

    #[test]
    fn invalid_utf8() {
        let err = load_document(b"ok\xff", &IngestOptions::default()).unwrap_err();
        assert_eq!(err, IngestError::Encoding { valid_up_to: 2 });
    }

    #[test]
    fn separator_override_keeps_whitespace() {
        let opts = IngestOptions { separators: SeparatorSet::with_punctuation("-"), ..Default::default() };
        let doc = load_document(b"a-b.c d", &opts).unwrap();
        assert_eq!(texts(&doc), vec!["a", "b.c", "d"]);
        assert_eq!(opts.separators.punctuation(), "-");
    }

    #[test]
    fn markup_is_blanked_in_place() {
        let opts = IngestOptions { strip_markup: true, ..Default::default() };
        let doc = load_document(b"<para>FM <b>registers</b></para> a < b", &opts).unwrap();
        assert_eq!(doc.len(), 38);
        assert_eq!(texts(&doc), vec!["FM", "registers", "a", "b"]);
        assert_eq!(doc.slice(7, 9), "FM ");
        assert_eq!(doc.slice(10, 12), "   ");
    }

    #[test]
    fn slice_handles_empty_interval() {
        let doc = load("abc");
        assert_eq!(doc.slice(2, 1), "");
        assert_eq!(doc.slice(1, 3), "abc");
    }
}
