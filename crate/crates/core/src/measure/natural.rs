use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{Hull, Point};
use crate::ifs::IfsSystem;
use crate::symbolic::{SymbolicSubset, Word};

/// Split weights `d_{wi}^s / Σ_j d_{wj}^s` of the children of `w`.
pub fn child_weights(system: &IfsSystem, w: &Word, s: f64) -> Vec<f64> {
    let n = system.n_maps() as u16;
    let raw: Vec<f64> = (1..=n).map(|i| libm::pow(system.diameter_of(&w.child(i)), s)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// Natural measure of `E_w`, normalised so that `μ(E) = 1`.
///
/// Mass is split from parent to children in proportion to `d^s`, which makes
/// the measure exactly additive over any antichain. For similarities the
/// weights are the Moran weights `r_i^s`.
pub fn cylinder_measure(system: &IfsSystem, w: &Word, s: f64) -> f64 {
    let mut mass = 1.0;
    let mut prefix = Word::empty();
    for &sym in w.symbols() {
        mass *= child_weights(system, &prefix, s)[sym as usize - 1];
        prefix.push(sym);
    }
    mass
}

/// Two-sided bounds for a measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureBounds {
    pub lo: f64,
    pub hi: f64,
    /// Some boundary cylinder at the depth limit was at least `r/4` across.
    pub coarse: bool,
}

/// Smallest depth at which every cylinder has diameter at most `target`.
pub fn depth_for_diameter(system: &IfsSystem, target: f64) -> usize {
    let lambda = system.attractor_contraction();
    let d = system.diameter() + system.diameter_error();
    if d <= target {
        return 0;
    }
    libm::ceil(libm::log(target / d) / libm::log(lambda)).max(0.0) as usize
}

struct BallQuery<'a> {
    system: &'a IfsSystem,
    center: &'a [f64],
    radius: f64,
    s: f64,
    depth: usize,
    exclude: Option<&'a SymbolicSubset>,
}

impl BallQuery<'_> {
    fn run(&self) -> MeasureBounds {
        let mut acc = MeasureBounds { lo: 0.0, hi: 0.0, coarse: false };
        let root = Word::empty();
        let hull = self.system.cylinder_hull(&root);
        self.visit(&root, &hull, 1.0, &mut acc);
        acc
    }

    fn visit(&self, w: &Word, hull: &Hull, mass: f64, acc: &mut MeasureBounds) {
        if let Some(a) = self.exclude {
            if a.contains_word(w) {
                return;
            }
        }
        if hull.min_distance(self.center) > self.radius {
            return;
        }
        let partially_excluded = self.exclude.is_some_and(|a| a.meets(w));
        if !partially_excluded && hull.max_distance(self.center) <= self.radius {
            acc.lo += mass;
            acc.hi += mass;
            return;
        }
        if w.len() >= self.depth {
            acc.hi += mass;
            if hull.diameter() >= self.radius / 4.0 {
                acc.coarse = true;
            }
            return;
        }
        let weights = child_weights(self.system, w, self.s);
        for (i, weight) in weights.iter().enumerate() {
            let c = w.child(i as u16 + 1);
            let h = self.system.cylinder_hull(&c);
            self.visit(&c, &h, mass * weight, acc);
        }
    }
}

/// Bounds for `μ(B(x, r) ∩ E)` from cylinders down to `depth`: `lo` counts
/// cylinders inside the closed ball, `hi` also counts those that meet it.
pub fn ball_measure(system: &IfsSystem, x: &[f64], r: f64, s: f64, depth: usize) -> Result<MeasureBounds> {
    if x.len() != system.dim() || !(r > 0.0) {
        return Err(Error::Domain);
    }
    Ok(BallQuery { system, center: x, radius: r, s, depth, exclude: None }.run())
}

/// Bounds for `r^{-s} μ(B(x, r) ∩ E \ A)`.
pub fn density_defect(
    system: &IfsSystem,
    subset: &SymbolicSubset,
    x: &[f64],
    r: f64,
    s: f64,
    depth: usize,
) -> Result<MeasureBounds> {
    if x.len() != system.dim() || !(r > 0.0) {
        return Err(Error::Domain);
    }
    let m = BallQuery { system, center: x, radius: r, s, depth, exclude: Some(subset) }.run();
    let scale = libm::pow(r, -s);
    Ok(MeasureBounds { lo: m.lo * scale, hi: m.hi * scale, coarse: m.coarse })
}

/// Density-point certificate: defects along a decreasing radius schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityCertificate {
    pub point: Point,
    pub radii: Vec<f64>,
    pub defects: Vec<MeasureBounds>,
}

impl DensityCertificate {
    /// Upper bound of the defect at the smallest radius.
    pub fn final_defect(&self) -> f64 {
        self.defects.last().map_or(f64::INFINITY, |d| d.hi)
    }
}

/// Builds a certificate; radii must be strictly decreasing. Each radius is
/// resolved with cylinders smaller than `r / 64`.
pub fn density_certificate(
    system: &IfsSystem,
    subset: &SymbolicSubset,
    x: &[f64],
    radii: &[f64],
    s: f64,
) -> Result<DensityCertificate> {
    if radii.windows(2).any(|p| !(p[1] < p[0])) {
        return Err(Error::Config(alloc::string::String::from("radii must be strictly decreasing")));
    }
    let defects = radii
        .iter()
        .map(|&r| density_defect(system, subset, x, r, s, depth_for_diameter(system, r / 64.0)))
        .collect::<Result<Vec<_>>>()?;
    Ok(DensityCertificate { point: x.to_vec(), radii: radii.to_vec(), defects })
}
