use alloc::string::ToString;
use alloc::vec::Vec;

use super::word::{Address, Word};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::ifs::IfsSystem;
use crate::measure::depth_for_diameter;
use crate::tolerance::{le_rel, TOL_GEOM};

/// Representative point of `E_w` together with `d_w`, the largest distance
/// from it to any point of the cylinder.
pub fn address_to_point(system: &IfsSystem, w: &Word) -> Result<(Point, f64)> {
    system.validate_word(w)?;
    let p = system.address_point(&Address::anchored(w.clone()))?;
    Ok((p, system.diameter_of(w)))
}

/// Fixed point of `f_w`; its address is `w w w ..`.
pub fn fixed_point(system: &IfsSystem, w: &Word) -> Result<Point> {
    system.validate_word(w)?;
    system.fixed_point(w)
}

/// Length-`depth` address of a point of an attractor under strong
/// separation.
pub fn point_to_address(system: &IfsSystem, x: &[f64], depth: usize) -> Result<Word> {
    if !system.separation().is_strong() {
        return Err(Error::Unsupported("point coding needs strong separation".to_string()));
    }
    if x.len() != system.dim() {
        return Err(Error::Domain);
    }
    // Slack scales with the parent cylinder so deep levels stay separated.
    let floor = 16.0 * f64::EPSILON * x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    fn descend(system: &IfsSystem, x: &[f64], w: &mut Word, depth: usize, floor: f64) -> bool {
        if w.len() == depth {
            return true;
        }
        let tol = TOL_GEOM * system.diameter_of(w) + floor;
        for s in 1..=system.n_maps() as u16 {
            w.push(s);
            if system.cylinder_hull(w).min_distance(x) <= tol && descend(system, x, w, depth, floor) {
                return true;
            }
            *w = w.parent().expect("just pushed");
        }
        false
    }
    let mut w = Word::empty();
    if descend(system, x, &mut w, depth, floor) {
        Ok(w)
    } else {
        Err(Error::NotOnAttractor)
    }
}

/// Outcome of [`shortest_index`].
#[derive(Debug, Clone, PartialEq)]
pub struct ShortestIndex {
    pub word: Word,
    pub diameter: f64,
    /// `B / (C L)`, the lower bound `d_i` must respect by minimality.
    pub lower_bound: f64,
}

/// Shortest prefix `i` of `address` with `L d_i <= B`.
///
/// Minimality and `d_parent <= C d_child` give `d_i >= B / (C L)` for a
/// non-empty result; this is checked with `C = upper` and a violation is a
/// certification error.
pub fn shortest_index(system: &IfsSystem, address: &Word, lipschitz: f64, bound: f64, upper: f64) -> Result<ShortestIndex> {
    if !(bound > 0.0 && lipschitz > 0.0) {
        return Err(Error::Config("bound and Lipschitz constant must be positive".to_string()));
    }
    system.validate_word(address)?;
    let lower_bound = bound / (upper * lipschitz);
    for k in 0..=address.len() {
        let w = address.prefix(k);
        let d = system.diameter_of(&w);
        if le_rel(lipschitz * d, bound, TOL_GEOM) {
            if k > 0 && !le_rel(lower_bound, d, TOL_GEOM) {
                return Err(Error::Certification(alloc::format!(
                    "d_({w}) = {d} is below B/(CL) = {lower_bound}; the constant C = {upper} is too small"
                )));
            }
            return Ok(ShortestIndex { word: w, diameter: d, lower_bound });
        }
    }
    Err(Error::InsufficientDepth)
}

/// Shortest prefix of `address` whose cylinder has diameter below `delta`.
pub fn maximal_prefix_below(system: &IfsSystem, address: &Address, delta: f64) -> Word {
    let mut w = Word::empty();
    let mut i = 0;
    while !(system.diameter_of(&w) < delta) {
        w.push(address.symbol(i));
        i += 1;
    }
    w
}

/// Maximal (shortest) words `j` with `d_j < delta` whose cylinders meet the
/// point set, in lexicographic order. Requires strong separation.
pub fn maximal_cylinders_meeting(system: &IfsSystem, points: &[Point], delta: f64) -> Result<Vec<Word>> {
    if points.is_empty() || !(delta > 0.0) {
        return Err(Error::Config("need a non-empty point set and a positive threshold".to_string()));
    }
    if system.diameter() < delta {
        return Ok(alloc::vec![Word::empty()]);
    }
    let depth = depth_for_diameter(system, delta) + 1;
    let mut out: Vec<Word> = Vec::new();
    for x in points {
        let address = point_to_address(system, x, depth)?;
        let k = (0..=depth)
            .find(|&k| system.diameter_of(&address.prefix(k)) < delta)
            .ok_or(Error::InsufficientDepth)?;
        out.push(address.prefix(k));
    }
    out.sort();
    out.dedup();
    Ok(out)
}
