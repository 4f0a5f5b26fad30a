//! Output alphabets and the words spelled over them.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Separator used when printing words over multi-character symbols.
pub const SYMBOL_SEPARATOR: char = '·';

/// Ordered set of measurement outcomes. The null symbol is never a member;
/// unmeasured steps simply emit nothing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Result<Self> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet is empty".into()));
        }
        for (i, s) in symbols.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::InvalidAlphabet(format!("symbol {i} is empty")));
            }
            if s.contains(SYMBOL_SEPARATOR) {
                return Err(Error::InvalidAlphabet(format!(
                    "symbol `{s}` contains the separator `{SYMBOL_SEPARATOR}`"
                )));
            }
            if symbols[..i].contains(s) {
                return Err(Error::InvalidAlphabet(format!("duplicate symbol `{s}`")));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// The binary alphabet `{0, 1}` used by every built-in machine.
    pub fn binary() -> Self {
        Alphabet {
            symbols: vec!["0".into(), "1".into()],
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, index: usize) -> &str {
        &self.symbols[index]
    }

    pub fn index_of(&self, symbol: &str) -> Result<usize> {
        self.symbols
            .iter()
            .position(|s| s == symbol)
            .ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))
    }

    fn compact(&self) -> bool {
        self.symbols.iter().all(|s| s.chars().count() == 1)
    }

    /// Parses a word in the printed form produced by [`Alphabet::format_word`].
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        if text.is_empty() {
            return Ok(Word::empty());
        }
        let symbols = if self.compact() {
            text.chars()
                .map(|c| self.index_of(c.encode_utf8(&mut [0; 4])))
                .collect::<Result<Vec<_>>>()?
        } else {
            text.split(SYMBOL_SEPARATOR)
                .map(|s| self.index_of(s))
                .collect::<Result<Vec<_>>>()?
        };
        Ok(Word(symbols))
    }

    pub fn format_word(&self, word: &Word) -> String {
        let parts = word.symbols().iter().map(|&i| self.symbol(i));
        if self.compact() {
            parts.collect()
        } else {
            parts.collect::<Vec<_>>().join(&SYMBOL_SEPARATOR.to_string())
        }
    }

    /// All words of exactly `len` symbols, in lexicographic order.
    pub fn words_of_length(&self, len: usize) -> Vec<Word> {
        let mut words = vec![Word::empty()];
        for _ in 0..len {
            words = words
                .iter()
                .flat_map(|w| (0..self.len()).map(move |y| w.extended(y)))
                .collect();
        }
        words
    }
}

impl TryFrom<Vec<String>> for Alphabet {
    type Error = Error;
    fn try_from(symbols: Vec<String>) -> Result<Self> {
        Alphabet::new(symbols)
    }
}

impl From<Alphabet> for Vec<String> {
    fn from(a: Alphabet) -> Self {
        a.symbols
    }
}

/// A finite sequence of symbol indices. Words order by length first, then
/// lexicographically, which is the order languages are listed in.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(symbols: Vec<usize>) -> Self {
        Word(symbols)
    }

    pub fn symbols(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn extended(&self, symbol: usize) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.extend_from_slice(&self.0);
        v.push(symbol);
        Word(v)
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len].to_vec())
    }

    pub fn subword(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }
}

impl From<Vec<usize>> for Word {
    fn from(v: Vec<usize>) -> Self {
        Word(v)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}
