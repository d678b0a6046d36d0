use alloc::vec::Vec;

use super::word::{Address, Word};
use crate::error::Result;
use crate::geometry::Point;
use crate::ifs::IfsSystem;

/// Representative points of a tree cut: every cylinder in the cut has
/// diameter at most `threshold`, so the points are `threshold`-dense in the
/// union of the roots.
#[derive(Debug, Clone, PartialEq)]
pub struct Net {
    pub words: Vec<Word>,
    pub points: Vec<Point>,
    pub threshold: f64,
}

impl Net {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Diameter threshold at resolution `level`: cylinders of natural measure
/// about `2^{-level}`. For the middle-third Cantor set this is depth `level`.
pub fn moran_threshold(system: &IfsSystem, s: f64, level: usize) -> f64 {
    system.diameter() * libm::exp2(-(level as f64) / s) * (1.0 + 1e-9)
}

/// Cut below each root at `threshold`, in lexicographic order, with the
/// representative points `f_w(fixed point of f_1)`.
pub fn net_below(system: &IfsSystem, roots: &[Word], threshold: f64) -> Result<Net> {
    if !(threshold > 0.0) {
        return Err(crate::error::Error::Config(alloc::string::String::from("net threshold must be positive")));
    }
    let mut words = Vec::new();
    let mut stack: Vec<Word> = roots.iter().rev().cloned().collect();
    while let Some(w) = stack.pop() {
        if system.diameter_of(&w) <= threshold {
            words.push(w);
        } else {
            for s in (1..=system.n_maps() as u16).rev() {
                stack.push(w.child(s));
            }
        }
    }
    let points = words.iter().map(|w| system.address_point(&Address::anchored(w.clone()))).collect::<Result<Vec<_>>>()?;
    Ok(Net { words, points, threshold })
}
