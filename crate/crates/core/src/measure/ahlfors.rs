use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::natural::{ball_measure, depth_for_diameter, MeasureBounds};
use crate::geometry::Point;
use crate::ifs::{sampling, IfsSystem};

#[derive(Debug, Clone, PartialEq)]
pub struct AhlforsSample {
    pub x: Point,
    pub r: f64,
    pub measure: MeasureBounds,
}

impl AhlforsSample {
    pub fn lower_density(&self, s: f64) -> f64 {
        self.measure.lo / libm::pow(self.r, s)
    }

    pub fn upper_density(&self, s: f64) -> f64 {
        self.measure.hi / libm::pow(self.r, s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AhlforsReport {
    pub s: f64,
    pub samples: Vec<AhlforsSample>,
}

impl AhlforsReport {
    /// Tightest empirical `(c, C)` with `c r^s <= lo` and `hi <= C r^s` on
    /// every sample; `None` without samples.
    pub fn bracket(&self) -> Option<(f64, f64)> {
        if self.samples.is_empty() {
            return None;
        }
        let lo = self.samples.iter().map(|x| x.lower_density(self.s)).fold(f64::INFINITY, f64::min);
        let hi = self.samples.iter().map(|x| x.upper_density(self.s)).fold(0.0, f64::max);
        Some((lo, hi))
    }

    /// Samples whose measure interval leaves `[c r^s / margin, C r^s margin]`.
    pub fn violations(&self, c: f64, big_c: f64, margin: f64) -> Vec<&AhlforsSample> {
        self.samples
            .iter()
            .filter(|x| x.lower_density(self.s) < c / margin || x.upper_density(self.s) > big_c * margin)
            .collect()
    }
}

/// Measures `samples` random balls centred on the attractor with radii
/// log-uniform in `(L0^10 d(E), r_max)`. All randomness comes from
/// `ChaCha8Rng::seed_from_u64(seed)`.
pub fn ahlfors_check(system: &IfsSystem, s: f64, r_max: f64, samples: usize, seed: u64) -> AhlforsReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r_min = libm::pow(system.contraction(), 10.0) * system.diameter();
    let (a, b) = (libm::log(r_min), libm::log(r_max));
    let mut out = Vec::with_capacity(samples);
    for _ in 0..samples {
        let x = sampling::random_point(system, &mut rng);
        let r = libm::exp(a + (b - a) * rng.gen::<f64>());
        let depth = depth_for_diameter(system, r / 64.0);
        let measure = ball_measure(system, &x, r, s, depth).expect("sample point has the ambient dimension");
        out.push(AhlforsSample { x, r, measure });
    }
    AhlforsReport { s, samples: out }
}
