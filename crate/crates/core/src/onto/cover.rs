use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::extension::AddressTransducer;
use crate::geometry::Point;
use crate::ifs::IfsSystem;
use crate::symbolic::{maximal_cylinders_meeting, Word};

/// Maximal target cylinders below a threshold covering an image, with the
/// sandwich `c d_i / (L C) <= d_l <= d_i` measured on each.
#[derive(Debug, Clone, PartialEq)]
pub struct Cover {
    pub words: Vec<Word>,
    pub diameters: Vec<f64>,
    /// `(c / L) d_i`.
    pub threshold: f64,
    pub lower: f64,
    pub upper: f64,
    /// Relative slack `(d_l / lower - 1, 1 - d_l / upper)` per word.
    pub margins: Vec<(f64, f64)>,
    /// Positions of words breaking the sandwich.
    pub violations: Vec<usize>,
}

impl Cover {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    fn new(dst: &IfsSystem, words: Vec<Word>, d_i: f64, c: f64, big_c: f64, l: f64) -> Self {
        let threshold = c / l * d_i;
        let lower = c * d_i / (l * big_c);
        let diameters: Vec<f64> = words.iter().map(|w| dst.diameter_of(w)).collect();
        let margins: Vec<(f64, f64)> = diameters.iter().map(|d| (d / lower - 1.0, 1.0 - d / d_i)).collect();
        let violations = margins.iter().enumerate().filter(|(_, m)| !(m.0 > 0.0 && m.1 > 0.0)).map(|(i, _)| i).collect();
        Cover { words, diameters, threshold, lower, upper: d_i, margins, violations }
    }
}

/// Cover of a finite image by the maximal cylinders of diameter below
/// `(c / L) d_i` that meet it.
pub fn cover_image(dst: &IfsSystem, points: &[Point], d_i: f64, c: f64, big_c: f64, l: f64) -> Result<Cover> {
    if !(d_i > 0.0 && c > 0.0 && l > 0.0) {
        return Err(Error::Config("cover needs positive d_i, c and L".into()));
    }
    let words = maximal_cylinders_meeting(dst, points, c / l * d_i)?;
    Ok(Cover::new(dst, words, d_i, c, big_c, l))
}

/// Exact cover of `h(∪ E_r)` over the given roots: an input word is refined
/// until its output already fixes a target cylinder below the threshold.
pub fn symbolic_cover(h: &AddressTransducer, dst: &IfsSystem, roots: &[Word], d_i: f64, c: f64, big_c: f64, l: f64) -> Result<Cover> {
    let threshold = c / l * d_i;
    let mut words = Vec::new();
    let mut stack: Vec<Word> = roots.to_vec();
    while let Some(v) = stack.pop() {
        let out = h.apply(&v)?;
        match (0..=out.len()).find(|&k| dst.diameter_of(&out.prefix(k)) < threshold) {
            Some(k) => words.push(out.prefix(k)),
            None => {
                for s in 1..=h.source_symbols() as u16 {
                    stack.push(v.child(s));
                }
            }
        }
    }
    words.sort();
    words.dedup();
    Ok(Cover::new(dst, words, d_i, c, big_c, l))
}
