use alloc::string::ToString;

use super::constants::Constants;
use super::system::{IfsSystem, Separation};
use crate::error::{Error, Result};
use crate::geometry::Hull;
use crate::symbolic::Word;
use crate::tolerance::TOL_GEOM;

/// Extra levels the set-distance and exclusion searches may descend.
const SEARCH_DEPTH: usize = 24;

/// Smallest ratio `dist(E_{wi}, E_{wj}) / d_w` over sibling pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    pub gap_constant: f64,
    pub parent: Word,
    pub children: (u16, u16),
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SeparationReport {
    Strong(GapReport),
    /// Open set condition: witness images verified, and the exclusion
    /// `(E \ E_w) ∩ B(f_w(x0), c d_w r0) = ∅` verified on every word up to
    /// `depth`.
    Open { words_checked: usize, depth: usize },
}

/// Bounds `(lo, hi)` for `dist(E_u, E_v)`; exact on the line once the hulls
/// separate.
///
/// The common prefix `w` is factored out: distances are measured between
/// the shallow cylinders and carried through `f_w`, so deep cylinders keep
/// their relative precision.
pub fn set_distance(system: &IfsSystem, u: &Word, v: &Word) -> (f64, f64) {
    let k = u.symbols().iter().zip(v.symbols()).take_while(|(a, b)| a == b).count();
    let w = u.prefix(k);
    let (u1, v1) = (Word::from_slice(&u.symbols()[k..]), Word::from_slice(&v.symbols()[k..]));
    if let (Hull::Interval { lo: a0, hi: a1 }, Hull::Interval { lo: b0, hi: b1 }) =
        (system.cylinder_hull(&u1), system.cylinder_hull(&v1))
    {
        // hull endpoints lie in the attractor, and f_w is monotone
        let facing = if a1 < b0 {
            Some((a1, b0))
        } else if b1 < a0 {
            Some((b1, a0))
        } else {
            None
        };
        if let Some((p, q)) = facing {
            let d = system.word_distance(&w, &[p], &[q]);
            return (d, d);
        }
    }
    if let Some(r) = system.ratio_product(&w) {
        let (lo, hi) = set_distance_rec(system, &u1, &v1, SEARCH_DEPTH / 2, f64::INFINITY);
        return (lo * r, hi * r);
    }
    set_distance_rec(system, u, v, SEARCH_DEPTH / 2, f64::INFINITY)
}

fn set_distance_rec(system: &IfsSystem, u: &Word, v: &Word, budget: usize, cutoff: f64) -> (f64, f64) {
    let hu = system.cylinder_hull(u);
    let hv = system.cylinder_hull(v);
    let lo = hu.min_distance_to(&hv);
    let hi = hu.witness_distance_to(&hv);
    if lo >= hi || lo > cutoff || budget == 0 {
        return (lo, hi);
    }
    let n = system.n_maps() as u16;
    let mut best = (f64::INFINITY, hi);
    for a in 1..=n {
        for b in 1..=n {
            let (l, h) = set_distance_rec(system, &u.child(a), &v.child(b), budget - 1, best.1);
            best.0 = best.0.min(l);
            best.1 = best.1.min(h);
        }
    }
    (best.0.max(lo), best.1)
}

/// Largest `c_gap` with `dist(E_{wi}, E_{wj}) >= c_gap d_w` for all sibling
/// pairs with `|w| < depth`.
pub fn strong_separation_gap(system: &IfsSystem, depth: usize) -> Result<GapReport> {
    if depth == 0 {
        return Err(Error::Config("separation depth must be at least 1".to_string()));
    }
    let n = system.n_maps() as u16;
    let mut best: Option<GapReport> = None;
    for level in 0..depth {
        for w in Word::all_of_length(n as usize, level) {
            let d = system.diameter_of(&w);
            for i in 1..=n {
                for j in i + 1..=n {
                    let (lo, hi) = set_distance(system, &w.child(i), &w.child(j));
                    // gaps at rounding level count as touching
                    if !(lo > TOL_GEOM * d) {
                        return Err(Error::Separation(alloc::format!(
                            "cylinders ({}) and ({}) are not separated (distance bounds [{lo}, {hi}])",
                            w.child(i),
                            w.child(j)
                        )));
                    }
                    let ratio = lo / d;
                    if best.as_ref().is_none_or(|b| ratio < b.gap_constant) {
                        best = Some(GapReport { gap_constant: ratio, parent: w.clone(), children: (i, j), depth });
                    }
                }
            }
        }
    }
    Ok(best.expect("at least one sibling pair"))
}

/// True when no point of `E \ E_keep` lies in the closed ball
/// `B(center, radius)`. Inconclusive searches count as failures.
pub fn exclusion_holds(system: &IfsSystem, keep: &Word, center: &[f64], radius: f64) -> bool {
    exclusion_rec(system, &Word::empty(), keep, center, radius, keep.len() + SEARCH_DEPTH)
}

fn exclusion_rec(system: &IfsSystem, node: &Word, keep: &Word, center: &[f64], radius: f64, max_len: usize) -> bool {
    if keep.is_prefix_of(node) {
        return true;
    }
    let h = system.cylinder_hull(node);
    if h.min_distance(center) > radius {
        return true;
    }
    let on_keep_path = node.is_prefix_of(keep);
    if !on_keep_path && h.witness_distance(center) <= radius {
        return false;
    }
    if node.len() >= max_len {
        return false;
    }
    (1..=system.n_maps() as u16).all(|s| exclusion_rec(system, &node.child(s), keep, center, radius, max_len))
}

/// Separation check in the system's declared mode.
pub fn check_separation(system: &IfsSystem, constants: &Constants, depth: usize) -> Result<SeparationReport> {
    match system.separation() {
        Separation::Strong => strong_separation_gap(system, depth).map(SeparationReport::Strong),
        Separation::Open(witness) => {
            let c = constants.lower;
            let mut words_checked = 0;
            for level in 0..=depth {
                for w in Word::all_of_length(system.n_maps(), level) {
                    let center = system.apply_word(&w, &witness.x0);
                    let radius = c * system.diameter_of(&w) * witness.r0;
                    if !exclusion_holds(system, &w, &center, radius) {
                        return Err(Error::Separation(alloc::format!(
                            "exclusion ball around f_w(x0) meets E \\ E_w for w = ({w})"
                        )));
                    }
                    words_checked += 1;
                }
            }
            Ok(SeparationReport::Open { words_checked, depth })
        }
    }
}
