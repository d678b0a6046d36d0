use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::sampling;
use super::separation::strong_separation_gap;
use super::system::IfsSystem;
use crate::error::{Error, Result};
use crate::geometry::{distance, Hull, Point};
use crate::measure::{ball_measure, depth_for_diameter, moran_dimension};
use crate::symbolic::Word;
use crate::tolerance::{le_rel, TOL_GEOM, TOL_SAMPLE};

/// Words per level beyond which levels are sampled instead of enumerated.
const WORDS_PER_LEVEL: usize = 1024;
/// Largest number of parent words in the sibling-gap search.
const GAP_WORDS: f64 = 4096.0;
/// Widening applied to the empirical Ahlfors bracket, which comes from a
/// finite design of balls.
pub const DENSITY_SAFETY: f64 = 1.5;

/// Empirical brackets per inequality, before they are merged.
#[derive(Debug, Clone, PartialEq)]
pub struct Brackets {
    /// `|Df_w(x)| / d_w` over the domain.
    pub derivative: (f64, f64),
    /// `|f_w(x) - f_w(y)| / (d_w |x - y|)` over the attractor.
    pub bilipschitz: (f64, f64),
    /// Largest `d_w / d_{wi}`.
    pub parent_child: f64,
    /// `μ(B(x,r)) / r^s` over the ball design.
    pub density: (f64, f64),
    /// Sibling gap constant, under strong separation.
    pub gap: Option<f64>,
}

/// Structural constants of a system, certified on all words up to `depth`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constants {
    /// `c < 1`: lower comparability constant.
    pub lower: f64,
    /// `C >= 1`: upper comparability constant.
    pub upper: f64,
    /// `K`: bounded distortion constant.
    pub distortion: f64,
    /// `L0`.
    pub contraction: f64,
    /// `c1` and `C1`.
    pub derivative_min: f64,
    pub derivative_max: f64,
    /// `R`: radius below which the local statements are made.
    pub local_radius: f64,
    /// `s`: Hausdorff dimension.
    pub dimension: f64,
    pub depth: usize,
    pub seed: u64,
    pub brackets: Brackets,
}

fn extend(b: &mut (f64, f64), v: f64) {
    b.0 = b.0.min(v);
    b.1 = b.1.max(v);
}

fn levels(system: &IfsSystem, depth: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Word>> {
    let n = system.n_maps();
    (0..=depth)
        .map(|k| {
            let count = libm::pow(n as f64, k as f64);
            if count <= WORDS_PER_LEVEL as f64 {
                Word::all_of_length(n, k).collect()
            } else {
                (0..WORDS_PER_LEVEL).map(|_| sampling::random_word(rng, n, k)).collect()
            }
        })
        .collect()
}

/// Points where `|Df_w|` attains its extremes over a ball: the endpoints on
/// the line (a composed Möbius map is Möbius, so `|Df_w|` is monotone), the
/// centre for similarities.
fn extreme_points(system: &IfsSystem, hull: &Hull) -> Vec<Point> {
    match hull {
        Hull::Interval { lo, hi } => alloc::vec![alloc::vec![*lo], alloc::vec![*hi]],
        Hull::Ball { center, .. } => {
            if system.dim() == 1 {
                let (a, b) = system.domain().bounds_1d();
                alloc::vec![alloc::vec![a], alloc::vec![b]]
            } else {
                alloc::vec![center.clone()]
            }
        }
    }
}

/// `R = min(d(E)/2, room)` where `room` keeps `B(x, R)` inside the domain for
/// every `x` in the attractor hull.
pub fn local_radius(system: &IfsSystem) -> Result<f64> {
    let v = system.domain();
    let reach = match system.hull() {
        Hull::Interval { lo, hi } => libm::fmax(libm::fabs(v.center[0] - lo), libm::fabs(v.center[0] - hi)),
        Hull::Ball { center, radius } => distance(&v.center, center) + radius,
    };
    let room = v.radius - reach;
    if !(room > 0.0) {
        return Err(Error::Config("the domain leaves no room around the attractor".to_string()));
    }
    Ok(libm::fmin(system.diameter() / 2.0, room))
}

fn dimension_depth(system: &IfsSystem) -> usize {
    let n = system.n_maps() as f64;
    ((libm::log(4096.0) / libm::log(n)) as usize).clamp(1, 12)
}

/// Ball design for the Ahlfors bracket: representative points of a shallow
/// cut plus random points, each with a geometric ladder of radii.
fn density_bracket(system: &IfsSystem, s: f64, r_max: f64, rng: &mut ChaCha8Rng) -> Result<(f64, f64)> {
    let mut centres: Vec<Point> = Vec::new();
    let n = system.n_maps();
    let mut k = 0;
    while libm::pow(n as f64, k as f64 + 1.0) <= 64.0 {
        k += 1;
    }
    for w in Word::all_of_length(n, k) {
        centres.push(system.address_point(&crate::symbolic::Address::anchored(w))?);
    }
    for _ in 0..64 {
        centres.push(sampling::random_point(system, rng));
    }
    let r_min = libm::pow(system.contraction(), 10.0) * system.diameter();
    let steps = 24;
    let mut bracket = (f64::INFINITY, 0.0f64);
    for x in &centres {
        for j in 0..steps {
            let t = (j as f64 + rng.gen::<f64>()) / steps as f64;
            let r = libm::exp(libm::log(r_max) + t * (libm::log(r_min) - libm::log(r_max)));
            let m = ball_measure(system, x, r, s, depth_for_diameter(system, r / 64.0))?;
            let scale = libm::pow(r, s);
            extend(&mut bracket, m.lo / scale);
            bracket.1 = bracket.1.max(m.hi / scale);
        }
    }
    Ok(bracket)
}

/// Certifies `c`, `C`, `K`, `L0`, `c1`, `C1`, `R` and `s` on every word up
/// to `sample_depth` (levels with more than 1024 words are sampled).
///
/// The derivative, bilipschitz, ball-image and parent/child inequalities are
/// bracketed exactly: on the line `f_w` is monotone with monotone `|Df_w|`,
/// so extremes sit at interval endpoints. The Ahlfors bracket is empirical
/// and widened by [`DENSITY_SAFETY`]. Under strong separation the sibling gap
/// constant also bounds `c`.
pub fn estimate_constants(system: &IfsSystem, sample_depth: usize, seed: u64) -> Result<Constants> {
    if sample_depth < 4 {
        return Err(Error::Config("sample depth must be at least 4".to_string()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = moran_dimension(system, dimension_depth(system))?.s;
    let r = local_radius(system)?;
    let domain_hull = match system.dim() {
        1 => {
            let (a, b) = system.domain().bounds_1d();
            Hull::Interval { lo: a, hi: b }
        }
        _ => Hull::Ball { center: system.domain().center.clone(), radius: system.domain().radius },
    };
    let on_domain = extreme_points(system, &domain_hull);
    let on_attractor = extreme_points(system, system.hull());

    let mut derivative = (f64::INFINITY, 0.0f64);
    let mut bilipschitz = (f64::INFINITY, 0.0f64);
    let mut parent_child: f64 = 0.0;
    let mut distortion: f64 = 1.0;
    let e = system.diameter();
    let l0 = system.contraction();
    for (k, words) in levels(system, sample_depth, &mut rng).iter().enumerate() {
        for w in words {
            let d = system.diameter_of(w);
            if !le_rel(d, libm::pow(l0, k as f64) * (e + system.diameter_error()), TOL_GEOM) {
                return Err(Error::Certification(alloc::format!(
                    "d_({w}) = {d} exceeds L0^k d(E); contraction bound violated"
                )));
            }
            if k < sample_depth {
                for i in 1..=system.n_maps() as u16 {
                    parent_child = parent_child.max(d / system.diameter_of(&w.child(i)));
                }
            }
            if k == 0 {
                continue;
            }
            let dv: Vec<f64> = on_domain.iter().map(|x| system.word_derivative_norm(w, x)).collect();
            let (dmin, dmax) = dv.iter().fold((f64::INFINITY, 0.0f64), |a, &v| (a.0.min(v), a.1.max(v)));
            extend(&mut derivative, dmin / d);
            extend(&mut derivative, dmax / d);
            distortion = distortion.max(dmax / dmin);
            for x in &on_attractor {
                extend(&mut bilipschitz, system.word_derivative_norm(w, x) / d);
            }
        }
    }
    if system.is_similarity() {
        distortion = 1.0;
    }
    let density = density_bracket(system, s, r, &mut rng)?;
    let gap = if system.separation().is_strong() {
        // similar copies share one gap ratio; otherwise search every parent the
        // certificate covers
        let depth = if system.is_similarity() {
            1
        } else {
            let n = system.n_maps() as f64;
            (1..=sample_depth).take_while(|&d| libm::pow(n, d as f64 - 1.0) <= GAP_WORDS).last().unwrap_or(1)
        };
        Some(strong_separation_gap(system, depth)?.gap_constant)
    } else {
        None
    };

    let margin = if system.is_similarity() { TOL_GEOM } else { TOL_SAMPLE };
    // the ball-image ratio of (4) is bounded below by min |Df_w| / d_w (mean value theorem)
    let mut lower = derivative.0.min(bilipschitz.0).min(density.0 / DENSITY_SAFETY);
    if let Some(g) = gap {
        lower = lower.min(g);
    }
    let lower = (lower * (1.0 - margin)).min(1.0 - margin);
    let upper = derivative.1.max(bilipschitz.1).max(parent_child).max(density.1 * DENSITY_SAFETY).max(1.0) * (1.0 + margin);
    let (c1, big_c1) = system.derivative_bounds();
    Ok(Constants {
        lower,
        upper,
        distortion,
        contraction: l0,
        derivative_min: c1,
        derivative_max: big_c1,
        local_radius: r,
        dimension: s,
        depth: sample_depth,
        seed,
        brackets: Brackets { derivative, bilipschitz, parent_child, density, gap },
    })
}

/// Outcome of one sampled inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityCheck {
    pub name: &'static str,
    pub checked: usize,
    pub violations: usize,
    /// Smallest slack seen, relative to the bound (negative on violation).
    pub worst_margin: f64,
    pub witness: Option<String>,
}

impl InequalityCheck {
    fn new(name: &'static str) -> Self {
        InequalityCheck { name, checked: 0, violations: 0, worst_margin: f64::INFINITY, witness: None }
    }

    /// Records `value <= bound`.
    fn record(&mut self, value: f64, bound: f64, witness: impl FnOnce() -> String) {
        self.checked += 1;
        let slack = (bound - value) / libm::fabs(bound).max(f64::MIN_POSITIVE);
        if slack < self.worst_margin {
            self.worst_margin = slack;
        }
        if !le_rel(value, bound, TOL_GEOM) {
            self.violations += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

fn random_domain_point(system: &IfsSystem, rng: &mut ChaCha8Rng) -> Point {
    let v = system.domain();
    loop {
        let p: Point = v.center.iter().map(|c| c + v.radius * (2.0 * rng.gen::<f64>() - 1.0)).collect();
        if v.contains(&p, 0.0) {
            return p;
        }
    }
}

/// Independent sampled check of the structural inequalities with the given
/// constants: `samples` random instances per inequality over words of length
/// up to `depth`, drawn from `seed`.
pub fn check_inequalities(system: &IfsSystem, constants: &Constants, depth: usize, samples: usize, seed: u64) -> Vec<InequalityCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (c, big_c) = (constants.lower, constants.upper);
    let n = system.n_maps();
    let mut out = Vec::new();
    let word = |rng: &mut ChaCha8Rng, min_len: usize| {
        let len = rng.gen_range(min_len..=depth);
        sampling::random_word(rng, n, len)
    };

    let mut derivative = InequalityCheck::new("derivative comparability (3)");
    let mut distortion = InequalityCheck::new("bounded distortion");
    let mut image_ball = InequalityCheck::new("ball image (4)");
    let mut bilip = InequalityCheck::new("cylinder bilipschitz (5)");
    let mut parent = InequalityCheck::new("parent/child diameters (6)");
    let mut contraction = InequalityCheck::new("diameter decay (7)");
    let mut gap = InequalityCheck::new("sibling gap (10)");
    let r_max = constants.local_radius;
    for _ in 0..samples {
        let w = word(&mut rng, 1);
        let d = system.diameter_of(&w);
        let x = random_domain_point(system, &mut rng);
        let y = random_domain_point(system, &mut rng);
        let dx = system.word_derivative_norm(&w, &x);
        let dy = system.word_derivative_norm(&w, &y);
        derivative.record(c * d, dx, || alloc::format!("w=({w}) x={x:?}"));
        derivative.record(dx, big_c * d, || alloc::format!("w=({w}) x={x:?}"));
        distortion.record(dx, constants.distortion * dy, || alloc::format!("w=({w}) x={x:?} y={y:?}"));

        let w = word(&mut rng, 1);
        let d = system.diameter_of(&w);
        let p = sampling::random_point(system, &mut rng);
        let r = r_max * libm::exp(-6.0 * rng.gen::<f64>()) * (1.0 - 1e-12);
        let fx = system.apply_word(&w, &p);
        // radius of the largest ball about f_w(x) inside f_w(B(x,r))
        let inner = if system.dim() == 1 {
            let a = system.apply_word(&w, &[p[0] - r])[0];
            let b = system.apply_word(&w, &[p[0] + r])[0];
            libm::fmin(libm::fabs(fx[0] - a), libm::fabs(b - fx[0]))
        } else {
            system.ratio_product(&w).unwrap_or(0.0) * r
        };
        image_ball.record(c * d * r, inner, || alloc::format!("w=({w}) x={p:?} r={r}"));

        let w = word(&mut rng, 1);
        let d = system.diameter_of(&w);
        let p = sampling::random_point(system, &mut rng);
        let q = sampling::random_point(system, &mut rng);
        let dist = distance(&p, &q);
        if dist > 0.0 {
            let img = distance(&system.apply_word(&w, &p), &system.apply_word(&w, &q));
            bilip.record(c * d * dist, img, || alloc::format!("w=({w}) x={p:?} y={q:?}"));
            bilip.record(img, big_c * d * dist, || alloc::format!("w=({w}) x={p:?} y={q:?}"));
        }

        let w = word(&mut rng, 0);
        let k = w.len();
        let d = system.diameter_of(&w);
        contraction.record(d, libm::pow(constants.contraction, k as f64) * (system.diameter() + system.diameter_error()), || {
            alloc::format!("w=({w})")
        });

        let len = rng.gen_range(0..depth.max(1));
        let w = sampling::random_word(&mut rng, n, len);
        let d = system.diameter_of(&w);
        let i = rng.gen_range(1..=n as u16);
        parent.record(d, big_c * system.diameter_of(&w.child(i)), || alloc::format!("w=({w}) i={i}"));
        if system.separation().is_strong() {
            let j = (i % n as u16) + 1;
            let (lo, _) = super::separation::set_distance(system, &w.child(i), &w.child(j));
            gap.record(c * d, lo, || alloc::format!("w=({w}) i={i} j={j}"));
        }
    }
    out.extend([derivative, distortion, image_ball, bilip, parent, contraction]);
    if system.separation().is_strong() {
        out.push(gap);
    }

    let mut density = InequalityCheck::new("Ahlfors regularity (8)");
    let report = crate::measure::ahlfors_check(system, constants.dimension, r_max, samples, rng.gen());
    for sample in &report.samples {
        let scale = libm::pow(sample.r, constants.dimension);
        let wit = || alloc::format!("x={:?} r={}", sample.x, sample.r);
        density.record(c * scale, sample.measure.lo, wit);
        density.record(sample.measure.hi, big_c * scale, wit);
    }
    out.push(density);
    out
}
