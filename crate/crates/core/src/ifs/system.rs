use alloc::string::ToString;
use alloc::vec::Vec;

use super::map::ConformalMap;
use crate::error::{Error, Result};
use crate::geometry::{distance, Ball, Hull, Point};
use crate::symbolic::{Address, Word};
use crate::tolerance::{MAX_ITERATIONS, TOL_GEOM};

/// Witness for the open set condition: an open ball `O` with disjoint images
/// inside it, a point `x0` of the attractor in `O` and a radius `r0` with
/// `B(x0, r0) ⊂ O`.
#[derive(Debug, Clone, PartialEq)]
pub struct OpenSetWitness {
    /// Treated as an open ball.
    pub open: Ball,
    pub x0: Point,
    pub r0: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Separation {
    /// First-level cylinders are pairwise disjoint.
    Strong,
    Open(OpenSetWitness),
}

impl Separation {
    pub fn is_strong(&self) -> bool {
        matches!(self, Separation::Strong)
    }
}

/// Distance and derivative summaries computed once when the system is built.
#[derive(Debug, Clone, PartialEq)]
struct Geometry {
    anchor: Point,
    hull: Hull,
    diameter: f64,
    diameter_error: f64,
    contraction: f64,
    derivative_min: f64,
    derivative_max: f64,
    attractor_contraction: f64,
}

/// A conformal iterated function system `{f_1, .., f_N}` on a closed ball `V`.
#[derive(Debug, Clone, PartialEq)]
pub struct IfsSystem {
    maps: Vec<ConformalMap>,
    dim: usize,
    domain: Ball,
    separation: Separation,
    geometry: Geometry,
}

impl IfsSystem {
    /// Builds and validates a system. When `domain` is `None` (similarities
    /// only) a ball containing the attractor with room for radius `d(E)/2`
    /// neighbourhoods is chosen.
    pub fn new(maps: Vec<ConformalMap>, separation: Separation, domain: Option<Ball>) -> Result<Self> {
        if maps.len() < 2 {
            return Err(Error::Config("a system needs at least two maps".to_string()));
        }
        if maps.len() > u16::MAX as usize {
            return Err(Error::Config("too many maps".to_string()));
        }
        let dim = maps[0].dim();
        if maps.iter().any(|m| m.dim() != dim) {
            return Err(Error::Config("maps act on different dimensions".to_string()));
        }
        let all_similar = maps.iter().all(ConformalMap::is_similarity);
        if !all_similar && dim != 1 {
            return Err(Error::Unsupported("Möbius generators are one-dimensional".to_string()));
        }
        if !all_similar && domain.is_none() {
            return Err(Error::Config("systems with Möbius maps need an explicit domain".to_string()));
        }
        if let Some(d) = &domain {
            if d.dim() != dim || !(d.radius > 0.0) {
                return Err(Error::Config("domain must be a ball of positive radius in the ambient space".to_string()));
            }
        }

        let start = domain.as_ref().map(|d| d.center.clone()).unwrap_or_else(|| alloc::vec![0.0; dim]);
        let anchor = iterate_to_fixed_point(|x| maps[0].apply(x), start)?;
        let (hull, diameter, diameter_error) = attractor_hull(&maps, &anchor)?;
        let domain = match domain {
            Some(d) => d,
            None => default_domain(&maps, &hull, diameter + diameter_error),
        };

        let mut system = IfsSystem {
            maps,
            dim,
            domain,
            separation,
            geometry: Geometry {
                anchor,
                hull,
                diameter,
                diameter_error,
                contraction: 0.0,
                derivative_min: 0.0,
                derivative_max: 0.0,
                attractor_contraction: 0.0,
            },
        };
        system.validate_domain()?;
        system.derive_contraction()?;
        if let Separation::Open(w) = &system.separation {
            system.validate_witness(w)?;
        }
        Ok(system)
    }

    fn validate_domain(&self) -> Result<()> {
        let v = &self.domain;
        if !v.contains(&self.geometry.anchor, TOL_GEOM) {
            return Err(Error::Config("attractor is not inside the domain".to_string()));
        }
        for (i, m) in self.maps.iter().enumerate() {
            let inside = match m {
                ConformalMap::Similarity { ratio, .. } => {
                    distance(&m.apply(&v.center), &v.center) + ratio * v.radius <= v.radius * (1.0 + TOL_GEOM)
                }
                ConformalMap::Moebius { .. } => {
                    m.derivative_range(v)?;
                    let (lo, hi) = v.bounds_1d();
                    let a = m.apply(&[lo])[0];
                    let b = m.apply(&[hi])[0];
                    v.contains(&[a], TOL_GEOM) && v.contains(&[b], TOL_GEOM)
                }
            };
            if !inside {
                return Err(Error::Config(alloc::format!("map {} does not send the domain into itself", i + 1)));
            }
        }
        Ok(())
    }

    fn derive_contraction(&mut self) -> Result<()> {
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        let mut on_hull: f64 = 0.0;
        let hull_ball = match &self.geometry.hull {
            Hull::Interval { lo, hi } => Ball::interval(*lo, *hi),
            Hull::Ball { center, radius } => Ball::new(center.clone(), *radius),
        };
        for m in &self.maps {
            let (a, b) = m.derivative_range(&self.domain)?;
            lo = lo.min(a);
            hi = hi.max(b);
            on_hull = on_hull.max(m.derivative_range(&hull_ball)?.1);
        }
        if !(hi < 1.0) {
            return Err(Error::Config(alloc::format!("maps are not contractions on the domain (sup |Df| = {hi})")));
        }
        let g = &mut self.geometry;
        g.derivative_min = lo;
        g.derivative_max = hi;
        // |f(x) - f(y)| <= sup|Df| |x - y| on a convex domain.
        g.contraction = hi;
        g.attractor_contraction = on_hull;
        Ok(())
    }

    fn validate_witness(&self, w: &OpenSetWitness) -> Result<()> {
        let o = &w.open;
        if o.dim() != self.dim || w.x0.len() != self.dim {
            return Err(Error::Config("open set witness has the wrong dimension".to_string()));
        }
        if distance(&o.center, &self.domain.center) + o.radius > self.domain.radius * (1.0 + TOL_GEOM) {
            return Err(Error::Config("closure of the open set is not inside the domain".to_string()));
        }
        if !(w.r0 > 0.0 && w.r0 < 1.0) {
            return Err(Error::Config("r0 must lie in (0, 1)".to_string()));
        }
        if distance(&w.x0, &o.center) + w.r0 > o.radius * (1.0 + TOL_GEOM) {
            return Err(Error::Config("B(x0, r0) is not inside the open set".to_string()));
        }
        if self.distance_to_attractor(&w.x0) > crate::tolerance::TOL_SAMPLE {
            return Err(Error::Config("x0 is not on the attractor".to_string()));
        }
        let images: Vec<Ball> = self.maps.iter().map(|m| image_ball(m, o)).collect();
        for (i, b) in images.iter().enumerate() {
            if distance(&b.center, &o.center) + b.radius > o.radius * (1.0 + TOL_GEOM) {
                return Err(Error::Config(alloc::format!("f_{}(O) is not inside O", i + 1)));
            }
            for c in &images[i + 1..] {
                // open balls may touch
                if distance(&b.center, &c.center) < (b.radius + c.radius) * (1.0 - TOL_GEOM) {
                    return Err(Error::Config("images of the open set overlap".to_string()));
                }
            }
        }
        Ok(())
    }

    pub fn maps(&self) -> &[ConformalMap] {
        &self.maps
    }

    pub fn n_maps(&self) -> usize {
        self.maps.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn domain(&self) -> &Ball {
        &self.domain
    }

    pub fn separation(&self) -> &Separation {
        &self.separation
    }

    pub fn is_similarity(&self) -> bool {
        self.maps.iter().all(ConformalMap::is_similarity)
    }

    /// Fixed point of `f_1`; the representative of `E_w` is `f_w(anchor)`.
    pub fn anchor(&self) -> &Point {
        &self.geometry.anchor
    }

    /// `d(E)`.
    pub fn diameter(&self) -> f64 {
        self.geometry.diameter
    }

    /// Bound on the error of [`IfsSystem::diameter`]; zero on the line.
    pub fn diameter_error(&self) -> f64 {
        self.geometry.diameter_error
    }

    pub fn hull(&self) -> &Hull {
        &self.geometry.hull
    }

    /// `L0`: Lipschitz constant of every generator on the domain.
    pub fn contraction(&self) -> f64 {
        self.geometry.contraction
    }

    /// `(c1, C1)`: bracket for `|Df_i|` on the domain.
    pub fn derivative_bounds(&self) -> (f64, f64) {
        (self.geometry.derivative_min, self.geometry.derivative_max)
    }

    /// Lipschitz constant of the generators on the convex hull of the
    /// attractor; controls how fast cylinder diameters shrink.
    pub fn attractor_contraction(&self) -> f64 {
        self.geometry.attractor_contraction
    }

    pub fn validate_word(&self, w: &Word) -> Result<()> {
        w.validate(self.maps.len())
    }

    fn map(&self, symbol: u16) -> &ConformalMap {
        &self.maps[symbol as usize - 1]
    }

    /// `f_w(x)`; the leftmost symbol is applied last.
    pub fn apply_word(&self, w: &Word, x: &[f64]) -> Point {
        let mut p = x.to_vec();
        for &s in w.symbols().iter().rev() {
            p = self.map(s).apply(&p);
        }
        p
    }

    /// `f_w^{-1}(y)`.
    pub fn apply_word_inverse(&self, w: &Word, y: &[f64]) -> Point {
        let mut p = y.to_vec();
        for &s in w.symbols() {
            p = self.map(s).apply_inverse(&p);
        }
        p
    }

    /// `|Df_w(x)|` by the chain rule; conformal norms multiply.
    pub fn word_derivative_norm(&self, w: &Word, x: &[f64]) -> f64 {
        let mut p = x.to_vec();
        let mut norm = 1.0;
        for &s in w.symbols().iter().rev() {
            let m = self.map(s);
            norm *= m.derivative_norm(&p);
            p = m.apply(&p);
        }
        norm
    }

    /// `|f_w(x) - f_w(y)|` by propagating the difference through each map,
    /// which keeps full relative precision on tiny cylinders.
    pub fn word_distance(&self, w: &Word, x: &[f64], y: &[f64]) -> f64 {
        let mut p = x.to_vec();
        let mut q = y.to_vec();
        let mut delta = distance(x, y);
        for &s in w.symbols().iter().rev() {
            let m = self.map(s);
            delta *= match m {
                ConformalMap::Similarity { ratio, .. } => *ratio,
                ConformalMap::Moebius { a, b, c, d } => {
                    libm::fabs(a * d - b * c) / libm::fabs((c * p[0] + d) * (c * q[0] + d))
                }
            };
            p = m.apply(&p);
            q = m.apply(&q);
        }
        delta
    }

    /// Product of similarity ratios along `w`, when every map is a similarity.
    pub fn ratio_product(&self, w: &Word) -> Option<f64> {
        let mut r = 1.0;
        for &s in w.symbols() {
            match self.map(s) {
                ConformalMap::Similarity { ratio, .. } => r *= ratio,
                ConformalMap::Moebius { .. } => return None,
            }
        }
        Some(r)
    }

    /// Conservative hull of the cylinder `E_w`.
    pub fn cylinder_hull(&self, w: &Word) -> Hull {
        match &self.geometry.hull {
            Hull::Interval { lo, hi } => {
                let a = self.apply_word(w, &[*lo])[0];
                let b = self.apply_word(w, &[*hi])[0];
                Hull::Interval { lo: a.min(b), hi: a.max(b) }
            }
            Hull::Ball { .. } => {
                let rho = self.ratio_product(w).unwrap_or(1.0);
                Hull::Ball {
                    center: self.apply_word(w, &self.geometry.anchor),
                    radius: rho * (self.geometry.diameter + self.geometry.diameter_error),
                }
            }
        }
    }

    /// `d_w = d(E_w)`. Exact product of ratios for similarities; the length
    /// of the image of the attractor hull for one-dimensional Möbius maps
    /// (monotone maps send hulls to hulls).
    pub fn diameter_of(&self, w: &Word) -> f64 {
        match self.ratio_product(w) {
            Some(r) => r * self.geometry.diameter,
            None => match self.geometry.hull {
                Hull::Interval { lo, hi } => self.word_distance(w, &[lo], &[hi]),
                _ => self.cylinder_hull(w).diameter(),
            },
        }
    }

    /// Unique fixed point of `f_w`, by iteration.
    pub fn fixed_point(&self, w: &Word) -> Result<Point> {
        if w.is_empty() {
            return Err(Error::Config("fixed point of the empty word is undefined".to_string()));
        }
        if w.symbols().iter().all(|&s| s == 1) {
            return Ok(self.geometry.anchor.clone());
        }
        iterate_to_fixed_point(|x| self.apply_word(w, x), self.geometry.anchor.clone())
    }

    /// The point with the given eventually periodic address.
    pub fn address_point(&self, a: &Address) -> Result<Point> {
        let base = self.fixed_point(a.period())?;
        Ok(self.apply_word(a.prefix(), &base))
    }

    /// Upper bound for the distance from `x` to the attractor, from a pruned
    /// descent through cylinders.
    pub fn distance_to_attractor(&self, x: &[f64]) -> f64 {
        let mut best = self.hull().witness_distance(x);
        let mut frontier = alloc::vec![Word::empty()];
        for _ in 0..48 {
            let mut next = Vec::new();
            for w in &frontier {
                for s in 1..=self.n_maps() as u16 {
                    let c = w.child(s);
                    let h = self.cylinder_hull(&c);
                    best = best.min(h.witness_distance(x));
                    if h.min_distance(x) <= best {
                        next.push(c);
                    }
                }
            }
            if next.is_empty() || best == 0.0 {
                break;
            }
            next.truncate(64);
            frontier = next;
        }
        best
    }
}

/// Image of a ball under a generator (exact for similarities, the image
/// interval for Möbius maps).
fn image_ball(m: &ConformalMap, b: &Ball) -> Ball {
    match m {
        ConformalMap::Similarity { ratio, .. } => Ball::new(m.apply(&b.center), ratio * b.radius),
        ConformalMap::Moebius { .. } => {
            let (lo, hi) = b.bounds_1d();
            let u = m.apply(&[lo])[0];
            let v = m.apply(&[hi])[0];
            Ball::interval(u.min(v), u.max(v))
        }
    }
}

pub(crate) fn iterate_to_fixed_point(f: impl Fn(&[f64]) -> Point, start: Point) -> Result<Point> {
    let mut x = start;
    let mut step = f64::INFINITY;
    for _ in 0..MAX_ITERATIONS {
        let y = f(&x);
        step = distance(&x, &y);
        let scale = 1.0f64.max(crate::geometry::norm(&y));
        x = y;
        if step <= 1e-15 * scale {
            return Ok(x);
        }
    }
    if step < TOL_GEOM / 2.0 {
        Ok(x)
    } else {
        Err(Error::Numeric(alloc::format!("fixed-point iteration stalled at step {step}")))
    }
}

/// Convex hull of the attractor on the line; a bounding ball with a
/// diameter estimate from representative points otherwise.
fn attractor_hull(maps: &[ConformalMap], anchor: &Point) -> Result<(Hull, f64, f64)> {
    if anchor.len() == 1 {
        let (mut lo, mut hi) = (anchor[0], anchor[0]);
        for _ in 0..4 * MAX_ITERATIONS {
            let (mut nlo, mut nhi) = (lo, hi);
            for m in maps {
                let a = m.apply(&[lo])[0];
                let b = m.apply(&[hi])[0];
                nlo = nlo.min(a.min(b));
                nhi = nhi.max(a.max(b));
            }
            let scale = 4.0 * f64::EPSILON * libm::fmax(libm::fabs(nlo), libm::fabs(nhi)).max(f64::MIN_POSITIVE);
            let done = lo - nlo <= scale && nhi - hi <= scale;
            lo = nlo;
            hi = nhi;
            if done {
                return Ok((Hull::Interval { lo, hi }, hi - lo, 0.0));
            }
        }
        return Err(Error::Numeric("attractor hull iteration did not settle".to_string()));
    }
    let n = maps.len();
    let mut depth = 1;
    while (n as u64).pow(depth as u32 + 1) <= 4096 {
        depth += 1;
    }
    let mut points: Vec<Point> = alloc::vec![anchor.clone()];
    for _ in 0..depth {
        points = points.iter().flat_map(|p| maps.iter().map(move |m| m.apply(p))).collect();
    }
    let mut diam: f64 = 0.0;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            diam = diam.max(distance(p, q));
        }
    }
    let rho = maps
        .iter()
        .map(|m| match m {
            ConformalMap::Similarity { ratio, .. } => *ratio,
            ConformalMap::Moebius { .. } => 1.0,
        })
        .fold(0.0, f64::max);
    let shrink = 2.0 * libm::pow(rho, depth as f64);
    if shrink >= 1.0 {
        return Err(Error::Numeric("diameter estimate does not converge".to_string()));
    }
    let upper = diam / (1.0 - shrink);
    Ok((Hull::Ball { center: anchor.clone(), radius: upper }, diam, upper - diam))
}

fn default_domain(maps: &[ConformalMap], hull: &Hull, diameter: f64) -> Ball {
    let (center, base) = match hull {
        Hull::Interval { lo, hi } => (alloc::vec![(lo + hi) / 2.0], diameter),
        Hull::Ball { center, .. } => (center.clone(), 1.5 * diameter),
    };
    let mut radius = base;
    for m in maps {
        if let ConformalMap::Similarity { ratio, .. } = m {
            radius = radius.max(distance(&m.apply(&center), &center) / (1.0 - ratio));
        }
    }
    Ball::new(center, radius * (1.0 + 1e-12))
}

/// Evaluator for a composed word `f_w`.
#[derive(Debug, Clone, Copy)]
pub struct ComposedMap<'a> {
    system: &'a IfsSystem,
    word: &'a Word,
}

impl<'a> ComposedMap<'a> {
    pub fn apply(&self, x: &[f64]) -> Result<Point> {
        if !self.system.domain.contains(x, TOL_GEOM) || x.len() != self.system.dim {
            return Err(Error::Domain);
        }
        Ok(self.system.apply_word(self.word, x))
    }

    pub fn derivative_norm(&self, x: &[f64]) -> Result<f64> {
        if !self.system.domain.contains(x, TOL_GEOM) || x.len() != self.system.dim {
            return Err(Error::Domain);
        }
        Ok(self.system.word_derivative_norm(self.word, x))
    }
}

/// Evaluator for `f_w`; the empty word gives the identity.
pub fn compose_word<'a>(system: &'a IfsSystem, w: &'a Word) -> Result<ComposedMap<'a>> {
    system.validate_word(w)?;
    Ok(ComposedMap { system, word: w })
}

/// A diameter together with a bound on its error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diameter {
    pub value: f64,
    pub error: f64,
}

/// `d_w`, with an error bound. `depth` is the resolution the caller is
/// working at and must be at least `|w|`.
pub fn cylinder_diameter(system: &IfsSystem, w: &Word, depth: usize) -> Result<Diameter> {
    system.validate_word(w)?;
    if depth < w.len() {
        return Err(Error::Config("depth must be at least the word length".to_string()));
    }
    let value = system.diameter_of(w);
    let error = match system.ratio_product(w) {
        Some(r) => r * system.diameter_error(),
        None => 0.0,
    };
    Ok(Diameter { value, error })
}
