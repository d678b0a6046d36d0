use alloc::string::ToString;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::ifs::{exclusion_holds, strong_separation_gap, Constants, IfsSystem, Separation};
use crate::symbolic::{Address, Word};

/// Depth of the sibling-gap search and of the build-time exclusion check.
const GAP_DEPTH: usize = 6;
const CHECK_DEPTH: usize = 4;

/// The constant `b` with `(E \ E_w) ∩ B(x, b d_w) = ∅` for `x ∈ E_w`.
///
/// Open set condition: `b = c r0 / 2`. Strong separation: `b` is the sibling
/// gap constant, checked at the representative point of every word up to
/// depth 4.
pub fn lemma2_ball_constant(system: &IfsSystem, constants: &Constants) -> Result<f64> {
    match system.separation() {
        Separation::Open(w) => Ok(constants.lower * w.r0 / 2.0),
        Separation::Strong => {
            let gap = strong_separation_gap(system, GAP_DEPTH)
                .map_err(|e| Error::Config(alloc::format!("declared strong separation has no gap: {e}")))?
                .gap_constant;
            if !(gap > 0.0) {
                return Err(Error::Config("declared strong separation has gap 0".to_string()));
            }
            for k in 1..=CHECK_DEPTH {
                for w in Word::all_of_length(system.n_maps(), k) {
                    let x = system.address_point(&Address::anchored(w.clone()))?;
                    // the ball is open: shrink by a hair before the closed test
                    if !exclusion_holds(system, &w, &x, gap * system.diameter_of(&w) * (1.0 - 1e-9)) {
                        return Err(Error::Separation(alloc::format!("gap constant {gap} fails at ({w})")));
                    }
                }
            }
            Ok(gap)
        }
    }
}

/// Prefixes of a point's address checked against the Lemma 2 exclusion.
#[derive(Debug, Clone, PartialEq)]
pub struct Lemma2Indices {
    /// Prefixes passing the exclusion, by increasing length.
    pub verified: Vec<Word>,
    /// Prefixes that failed it.
    pub skipped: Vec<Word>,
}

impl Lemma2Indices {
    /// Shortest verified prefix of length at least `k`.
    pub fn at_least(&self, k: usize) -> Option<&Word> {
        self.verified.iter().find(|w| w.len() >= k)
    }
}

/// Tests the prefixes of lengths `1..=count` of `address`: `j` is kept when
/// `(E \ E_j) ∩ B(y, b d_j) = ∅` for the point `y` of the address.
pub fn lemma2_indices(system: &IfsSystem, address: &Address, count: usize, b: f64) -> Result<Lemma2Indices> {
    if !(b > 0.0) {
        return Err(Error::Config("ball constant must be positive".to_string()));
    }
    let y = system.address_point(address)?;
    let mut out = Lemma2Indices { verified: Vec::new(), skipped: Vec::new() };
    let mut last = f64::INFINITY;
    for k in 1..=count {
        let j = address.take(k);
        let d = system.diameter_of(&j);
        if exclusion_holds(system, &j, &y, b * d * (1.0 - 1e-9)) && d < last {
            last = d;
            out.verified.push(j);
        } else {
            out.skipped.push(j);
        }
    }
    Ok(out)
}
