use alloc::string::ToString;
use alloc::vec::Vec;

use super::word::Word;
use crate::error::{Error, Result};
use crate::ifs::IfsSystem;

/// Finite set of pairwise incomparable words, kept in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Antichain {
    words: Vec<Word>,
}

impl Antichain {
    pub fn new(mut words: Vec<Word>) -> Result<Self> {
        words.sort();
        // in lexicographic order a prefix is followed directly by one of its extensions
        if let Some(p) = words.windows(2).find(|p| p[0].is_prefix_of(&p[1])) {
            return Err(Error::Config(alloc::format!("words ({}) and ({}) are comparable", p[0], p[1])));
        }
        Ok(Antichain { words })
    }

    pub fn root() -> Self {
        Antichain { words: alloc::vec![Word::empty()] }
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Every infinite sequence over `n_symbols` letters has exactly one
    /// prefix in the set.
    pub fn is_covering(&self, n_symbols: usize) -> bool {
        fn covers(words: &[Word], node: &Word, n: usize) -> bool {
            if words.iter().any(|w| w == node) {
                return true;
            }
            if !words.iter().any(|w| node.is_prefix_of(w)) {
                return false;
            }
            (1..=n as u16).all(|s| covers(words, &node.child(s), n))
        }
        !self.words.is_empty() && covers(&self.words, &Word::empty(), n_symbols)
    }
}

/// A union of cylinders `∪ E_w` standing for a positive-measure subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicSubset {
    words: Antichain,
}

impl SymbolicSubset {
    pub fn new(words: Vec<Word>) -> Result<Self> {
        if words.is_empty() {
            return Err(Error::Config("a cylinder union needs at least one word".to_string()));
        }
        Ok(SymbolicSubset { words: Antichain::new(words)? })
    }

    /// The whole attractor.
    pub fn whole() -> Self {
        SymbolicSubset { words: Antichain::root() }
    }

    pub fn words(&self) -> &[Word] {
        self.words.words()
    }

    pub fn validate(&self, n_symbols: usize) -> Result<()> {
        self.words().iter().try_for_each(|w| w.validate(n_symbols))
    }

    /// `E_w` lies inside the union.
    pub fn contains_word(&self, w: &Word) -> bool {
        self.words().iter().any(|u| u.is_prefix_of(w))
    }

    /// `E_w` is partly, but not wholly, inside the union.
    pub fn meets(&self, w: &Word) -> bool {
        !self.contains_word(w) && self.words().iter().any(|u| w.is_prefix_of(u))
    }

    /// `E_w` has a cylinder in common with the union.
    pub fn intersects(&self, w: &Word) -> bool {
        self.words().iter().any(|u| u.is_prefix_of(w) || w.is_prefix_of(u))
    }

    /// Symbolic form of `f_w^{-1}(A ∩ E_w)`; `None` when the intersection is empty.
    pub fn pull_back(&self, w: &Word) -> Option<SymbolicSubset> {
        if self.contains_word(w) {
            return Some(SymbolicSubset::whole());
        }
        let tails: Vec<Word> = self.words().iter().filter_map(|u| u.strip_prefix(w)).collect();
        if tails.is_empty() {
            None
        } else {
            Some(SymbolicSubset { words: Antichain::new(tails).expect("tails of an antichain are incomparable") })
        }
    }
}

/// Result of [`binary_partition`].
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    pub antichain: Antichain,
    /// `c2(m)`: the smallest piece diameter.
    pub min_diameter: f64,
}

/// Covering antichain of exactly `m` words for a two-map system, grown by
/// repeatedly splitting the piece of largest diameter. Ties go to the
/// lexicographically smallest word.
pub fn binary_partition(system: &IfsSystem, m: usize) -> Result<Partition> {
    if system.n_maps() != 2 {
        return Err(Error::Unsupported(alloc::format!(
            "binary partition needs exactly two maps, got {}",
            system.n_maps()
        )));
    }
    if m == 0 {
        return Err(Error::Config("partition size must be at least 1".to_string()));
    }
    let mut pieces: Vec<(Word, f64)> = alloc::vec![(Word::empty(), system.diameter())];
    while pieces.len() < m {
        let mut best = 0;
        for i in 1..pieces.len() {
            let (ref w, d) = pieces[i];
            let (ref bw, bd) = pieces[best];
            let tie = libm::fabs(d - bd) <= 1e-12 * bd;
            if (!tie && d > bd) || (tie && w < bw) {
                best = i;
            }
        }
        let (w, _) = pieces.swap_remove(best);
        for s in [1u16, 2] {
            let c = w.child(s);
            let d = system.diameter_of(&c);
            pieces.push((c, d));
        }
    }
    let min_diameter = pieces.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let antichain = Antichain::new(pieces.into_iter().map(|p| p.0).collect())?;
    Ok(Partition { antichain, min_diameter })
}
