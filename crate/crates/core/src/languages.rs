//! Finite-horizon stochastic and formal languages.
//!
//! A [`StochasticLanguage`] stores every word up to `max_length` whose
//! probability exceeds the pruning threshold; absent words have probability
//! zero. All comparisons are relative to that horizon.

use std::collections::{BTreeMap, BTreeSet};

use crate::alphabet::{Alphabet, Word};
use crate::error::{Error, Result};

/// Decimal digits kept by [`canonical_key`].
pub const KEY_DIGITS: i32 = 9;

#[derive(Debug, Clone, PartialEq)]
pub struct StochasticLanguage {
    alphabet: Alphabet,
    max_length: usize,
    words: BTreeMap<Word, f64>,
}

impl StochasticLanguage {
    /// Wraps a word map. Words longer than `max_length` or with symbols
    /// outside the alphabet are rejected; probabilities are not checked here,
    /// see [`StochasticLanguage::check_normalization`].
    pub fn new(alphabet: Alphabet, max_length: usize, words: BTreeMap<Word, f64>) -> Result<Self> {
        for (w, &p) in &words {
            if w.len() > max_length || w.is_empty() {
                return Err(Error::InvalidConfig(format!(
                    "word of length {} outside horizon 1..={max_length}",
                    w.len()
                )));
            }
            if let Some(&y) = w.symbols().iter().find(|&&y| y >= alphabet.len()) {
                return Err(Error::UnknownSymbol(format!("#{y}")));
            }
            if !p.is_finite() || p < 0.0 {
                return Err(Error::InvalidConfig(format!("invalid probability {p}")));
            }
        }
        Ok(StochasticLanguage {
            alphabet,
            max_length,
            words,
        })
    }

    /// Builds a language from printed words, e.g. `[("0", 1.0), ("00", 1.0)]`.
    pub fn from_pairs(alphabet: Alphabet, max_length: usize, pairs: &[(&str, f64)]) -> Result<Self> {
        let words = pairs
            .iter()
            .map(|(w, p)| Ok((alphabet.parse_word(w)?, *p)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Self::new(alphabet, max_length, words)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn max_length(&self) -> usize {
        self.max_length
    }

    pub fn words(&self) -> &BTreeMap<Word, f64> {
        &self.words
    }

    /// Probability of `w`; zero for absent words.
    pub fn probability(&self, w: &Word) -> f64 {
        self.words.get(w).copied().unwrap_or(0.0)
    }

    pub fn words_of_length(&self, len: usize) -> impl Iterator<Item = (&Word, &f64)> {
        self.words.iter().filter(move |(w, _)| w.len() == len)
    }

    /// Largest deviation of `Σ_{|w|=L} Pr(w)` from one over `1..=max_length`.
    pub fn normalization_error(&self) -> f64 {
        (1..=self.max_length)
            .map(|len| (self.words_of_length(len).map(|(_, p)| p).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn check_normalization(&self, tol: f64) -> std::result::Result<(), String> {
        for len in 1..=self.max_length {
            let total: f64 = self.words_of_length(len).map(|(_, p)| p).sum();
            if (total - 1.0).abs() > tol {
                return Err(format!("length-{len} words sum to {total}"));
            }
        }
        Ok(())
    }

    /// Largest violation of `Pr(w) = Σ_y Pr(wy)` for `|w| < max_length`,
    /// taking `Pr(ε) = 1`.
    pub fn prefix_consistency_error(&self) -> f64 {
        let mut children: BTreeMap<Word, f64> = BTreeMap::new();
        for (w, p) in &self.words {
            *children.entry(w.prefix(w.len() - 1)).or_default() += p;
        }
        let mut worst: f64 = 0.0;
        if self.max_length >= 1 {
            worst = (children.get(&Word::empty()).copied().unwrap_or(0.0) - 1.0).abs();
        }
        for (w, p) in &self.words {
            if w.len() < self.max_length {
                let c = children.get(w).copied().unwrap_or(0.0);
                worst = worst.max((p - c).abs());
            }
        }
        worst
    }

    /// Weighted sum of languages over a shared alphabet and horizon, used
    /// for incoherent ensembles. Entries at or below `prune` are dropped.
    pub fn mixture(parts: &[(f64, StochasticLanguage)], prune: f64) -> Result<Self> {
        let (_, first) = parts
            .first()
            .ok_or_else(|| Error::InvalidConfig("empty mixture".into()))?;
        let mut words: BTreeMap<Word, f64> = BTreeMap::new();
        for (weight, lang) in parts {
            check_comparable(first, lang)?;
            for (w, p) in &lang.words {
                *words.entry(w.clone()).or_default() += weight * p;
            }
        }
        words.retain(|_, p| *p > prune);
        Ok(StochasticLanguage {
            alphabet: first.alphabet.clone(),
            max_length: first.max_length,
            words,
        })
    }

    /// Printed word list in `(length, lexicographic)` order.
    pub fn printed_words(&self) -> Vec<(String, f64)> {
        self.words
            .iter()
            .map(|(w, &p)| (self.alphabet.format_word(w), p))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FormalLanguage {
    alphabet: Alphabet,
    max_length: usize,
    words: BTreeSet<Word>,
}

impl FormalLanguage {
    pub fn new(alphabet: Alphabet, max_length: usize, words: BTreeSet<Word>) -> Self {
        FormalLanguage {
            alphabet,
            max_length,
            words,
        }
    }

    pub fn from_strs(alphabet: Alphabet, max_length: usize, words: &[&str]) -> Result<Self> {
        let words = words
            .iter()
            .map(|w| alphabet.parse_word(w))
            .collect::<Result<BTreeSet<_>>>()?;
        Ok(Self::new(alphabet, max_length, words))
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn max_length(&self) -> usize {
        self.max_length
    }

    pub fn words(&self) -> &BTreeSet<Word> {
        &self.words
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.contains(w)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Hashable rounding of a language's word probabilities; equal keys mean
/// δ-similar at `δ = 10^-KEY_DIGITS`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LanguageKey {
    max_length: usize,
    entries: Vec<(Word, i64)>,
}

impl LanguageKey {
    pub fn entries(&self) -> &[(Word, i64)] {
        &self.entries
    }
}

pub fn support(lang: &StochasticLanguage) -> FormalLanguage {
    FormalLanguage {
        alphabet: lang.alphabet.clone(),
        max_length: lang.max_length,
        words: lang
            .words
            .iter()
            .filter(|(_, &p)| p > 0.0)
            .map(|(w, _)| w.clone())
            .collect(),
    }
}

/// Every contiguous non-empty subword of every member is a member.
pub fn is_subword_closed(lang: &FormalLanguage) -> bool {
    lang.words.iter().all(|w| {
        // checking the two maximal proper subwords suffices by induction
        w.len() <= 1
            || (lang.words.contains(&w.subword(1, w.len()))
                && lang.words.contains(&w.subword(0, w.len() - 1)))
    })
}

fn check_comparable(a: &StochasticLanguage, b: &StochasticLanguage) -> Result<()> {
    if a.alphabet != b.alphabet {
        return Err(Error::AlphabetMismatch);
    }
    if a.max_length != b.max_length {
        return Err(Error::HorizonMismatch(a.max_length, b.max_length));
    }
    Ok(())
}

/// Largest matched-word probability difference, absent words counting as 0.
pub fn max_word_difference(a: &StochasticLanguage, b: &StochasticLanguage) -> Result<f64> {
    check_comparable(a, b)?;
    let keys: BTreeSet<&Word> = a.words.keys().chain(b.words.keys()).collect();
    Ok(keys
        .into_iter()
        .map(|w| (a.probability(w) - b.probability(w)).abs())
        .fold(0.0, f64::max))
}

pub fn delta_similar(a: &StochasticLanguage, b: &StochasticLanguage, delta: f64) -> Result<bool> {
    Ok(max_word_difference(a, b)? <= delta)
}

/// Smallest `N < max_length` such that every support word satisfies
/// `w_i = w_{i+N}` and at least one support word is longer than `N`.
pub fn detect_period(lang: &StochasticLanguage) -> Option<usize> {
    let supp = support(lang);
    (1..lang.max_length).find(|&n| {
        supp.words.iter().any(|w| w.len() > n)
            && supp.words.iter().all(|w| {
                let s = w.symbols();
                (0..s.len().saturating_sub(n)).all(|i| s[i] == s[i + n])
            })
    })
}

pub fn canonical_key(lang: &StochasticLanguage) -> LanguageKey {
    let scale = 10f64.powi(KEY_DIGITS);
    LanguageKey {
        max_length: lang.max_length,
        entries: lang
            .words
            .iter()
            .map(|(w, &p)| (w.clone(), (p * scale).round() as i64))
            .filter(|(_, q)| *q != 0)
            .collect(),
    }
}

/// Short regular-expression style label for common supports, if recognized.
pub fn describe_support(lang: &FormalLanguage) -> Option<String> {
    let a = &lang.alphabet;
    let n = lang.max_length;
    if n == 0 {
        return Some("∅".into());
    }
    let total: usize = (1..=n).map(|l| a.len().pow(l as u32)).sum();
    if lang.words.len() == total {
        let syms = a.symbols().join("+");
        return Some(format!("({syms})*"));
    }
    // words of the longest length determine a cyclic template
    let longest: Vec<&Word> = lang.words.iter().filter(|w| w.len() == n).collect();
    let first = longest.first()?;
    let period = detect_period_of_words(&lang.words, n)?;
    let template = a.format_word(&first.prefix(period.min(first.len())));
    let body = if period == 1 {
        format!("{template}*")
    } else {
        format!("({template})*")
    };
    if longest.len() == 1 {
        return Some(body);
    }
    Some(format!("subw({body})"))
}

fn detect_period_of_words(words: &BTreeSet<Word>, max_length: usize) -> Option<usize> {
    (1..max_length).find(|&n| {
        words.iter().all(|w| {
            let s = w.symbols();
            (0..s.len().saturating_sub(n)).all(|i| s[i] == s[i + n])
        })
    })
}
