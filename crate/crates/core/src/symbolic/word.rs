use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// A finite string over the alphabet `{1, .., N}`, indexing the composition
/// `f_{i_1} ∘ .. ∘ f_{i_k}`. Symbols are stored 1-based.
///
/// The derived ordering is lexicographic with a prefix sorting before its
/// extensions.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<u16>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(symbols: Vec<u16>) -> Self {
        Word(symbols)
    }

    pub fn from_slice(symbols: &[u16]) -> Self {
        Word(symbols.to_vec())
    }

    /// `symbol` repeated `times` times.
    pub fn constant(symbol: u16, times: usize) -> Self {
        Word(alloc::vec![symbol; times])
    }

    pub fn validate(&self, n_symbols: usize) -> Result<()> {
        match self.0.iter().find(|&&s| s == 0 || s as usize > n_symbols) {
            Some(s) => Err(Error::Config(alloc::format!(
                "symbol {s} outside alphabet 1..={n_symbols} in word ({self})"
            ))),
            None => Ok(()),
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[u16] {
        &self.0
    }

    pub fn last(&self) -> Option<u16> {
        self.0.last().copied()
    }

    pub fn child(&self, symbol: u16) -> Word {
        let mut v = self.0.clone();
        v.push(symbol);
        Word(v)
    }

    pub fn push(&mut self, symbol: u16) {
        self.0.push(symbol);
    }

    pub fn parent(&self) -> Option<Word> {
        if self.0.is_empty() {
            None
        } else {
            Some(Word(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    /// Neither word is a prefix of the other.
    pub fn incomparable(&self, other: &Word) -> bool {
        !self.is_prefix_of(other) && !other.is_prefix_of(self)
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n.min(self.0.len())].to_vec())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn strip_prefix(&self, prefix: &Word) -> Option<Word> {
        self.0.strip_prefix(prefix.0.as_slice()).map(|s| Word(s.to_vec()))
    }

    /// Every word of length `k` over `n_symbols` letters, in lexicographic order.
    pub fn all_of_length(n_symbols: usize, k: usize) -> impl Iterator<Item = Word> {
        let total = (n_symbols as u64).checked_pow(k as u32).expect("word count overflows u64");
        (0..total).map(move |mut index| {
            let mut v = alloc::vec![0u16; k];
            for slot in v.iter_mut().rev() {
                *slot = (index % n_symbols as u64) as u16 + 1;
                index /= n_symbols as u64;
            }
            Word(v)
        })
    }
}

impl From<Vec<u16>> for Word {
    fn from(v: Vec<u16>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Comma separated 1-based symbols, e.g. `"1,2,2"`. The empty word is
    /// written as an empty string or `()`.
    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
        if trimmed.is_empty() {
            return Ok(Word::empty());
        }
        trimmed
            .split(',')
            .map(|part| {
                let part = part.trim();
                match part.parse::<u16>() {
                    Ok(v) if v >= 1 => Ok(v),
                    _ => Err(Error::Config(alloc::format!("bad symbol {part:?} in word {s:?}"))),
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

/// An eventually periodic infinite address `prefix · period · period · ..`.
///
/// Representative points of cylinders use the address `w · 1 1 1 ..`, whose
/// point is `f_w` applied to the fixed point of `f_1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Address {
    prefix: Word,
    period: Word,
}

impl Address {
    pub fn new(prefix: Word, period: Word) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Config("address period must be non-empty".to_string()));
        }
        Ok(Address { prefix, period })
    }

    pub fn periodic(period: Word) -> Result<Self> {
        Address::new(Word::empty(), period)
    }

    /// `w · 1^∞`, the address of the representative point of `E_w`.
    pub fn anchored(word: Word) -> Self {
        Address { prefix: word, period: Word::constant(1, 1) }
    }

    pub fn prefix(&self) -> &Word {
        &self.prefix
    }

    pub fn period(&self) -> &Word {
        &self.period
    }

    pub fn symbol(&self, i: usize) -> u16 {
        let p = self.prefix.len();
        if i < p {
            self.prefix.0[i]
        } else {
            self.period.0[(i - p) % self.period.len()]
        }
    }

    pub fn take(&self, n: usize) -> Word {
        Word((0..n).map(|i| self.symbol(i)).collect())
    }

    pub fn starts_with(&self, w: &Word) -> bool {
        w.0.iter().enumerate().all(|(i, &s)| self.symbol(i) == s)
    }

    pub fn prepend(&self, w: &Word) -> Address {
        Address { prefix: w.concat(&self.prefix), period: self.period.clone() }
    }

    /// The tail address after removing `w`, if the address begins with `w`.
    pub fn strip_prefix(&self, w: &Word) -> Option<Address> {
        if !self.starts_with(w) {
            return None;
        }
        let p = self.prefix.len();
        if w.len() <= p {
            return Some(Address { prefix: Word(self.prefix.0[w.len()..].to_vec()), period: self.period.clone() });
        }
        let shift = (w.len() - p) % self.period.len();
        let mut rotated = self.period.0[shift..].to_vec();
        rotated.extend_from_slice(&self.period.0[..shift]);
        Some(Address { prefix: Word::empty(), period: Word(rotated) })
    }

    /// Shortest representation: primitive period, prefix rolled back into
    /// the period as far as possible. Equal infinite sequences have equal
    /// canonical forms.
    pub fn canonical(&self) -> Address {
        let per = &self.period.0;
        let n = per.len();
        let root = (1..=n)
            .find(|&d| n.is_multiple_of(d) && (0..n).all(|i| per[i] == per[i % d]))
            .unwrap_or(n);
        let mut period: Vec<u16> = per[..root].to_vec();
        let mut prefix = self.prefix.0.clone();
        while let (Some(&a), Some(&b)) = (prefix.last(), period.last()) {
            if a != b {
                break;
            }
            prefix.pop();
            period.rotate_right(1);
        }
        Address { prefix: Word(prefix), period: Word(period) }
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|({})", self.prefix, self.period)
    }
}

/// Word rendering helper used in error messages and reports.
pub fn words_to_string(words: &[Word]) -> String {
    let parts: Vec<String> = words.iter().map(|w| alloc::format!("({w})")).collect();
    parts.join(" ")
}
