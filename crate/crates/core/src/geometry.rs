//! Points, closed balls and conservative hulls for cylinder sets.

use alloc::vec::Vec;

pub type Point = Vec<f64>;

pub fn distance(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    let sum: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    libm::sqrt(sum)
}

pub fn norm(x: &[f64]) -> f64 {
    libm::sqrt(x.iter().map(|a| a * a).sum())
}

/// Closed ball `B(center, radius)`. In one dimension this is an interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Point, radius: f64) -> Self {
        Ball { center, radius }
    }

    pub fn interval(lo: f64, hi: f64) -> Self {
        Ball { center: alloc::vec![(lo + hi) / 2.0], radius: (hi - lo) / 2.0 }
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        distance(&self.center, x) <= self.radius + tol
    }

    /// Endpoints when the ball lives on the line.
    pub fn bounds_1d(&self) -> (f64, f64) {
        (self.center[0] - self.radius, self.center[0] + self.radius)
    }
}

/// A set known to contain a cylinder `E_w`, with some of its points known
/// to lie in `E_w`.
///
/// On the line the hull is the convex hull of the cylinder and both
/// endpoints belong to it, so distances computed from it are exact whenever
/// the query point lies outside. In higher dimensions the hull is a ball
/// whose centre lies in the cylinder.
#[derive(Debug, Clone, PartialEq)]
pub enum Hull {
    Interval { lo: f64, hi: f64 },
    Ball { center: Point, radius: f64 },
}

impl Hull {
    pub fn diameter(&self) -> f64 {
        match self {
            Hull::Interval { lo, hi } => hi - lo,
            Hull::Ball { radius, .. } => *radius,
        }
    }

    /// Lower bound for the distance from `x` to the set.
    pub fn min_distance(&self, x: &[f64]) -> f64 {
        match self {
            Hull::Interval { lo, hi } => {
                let t = x[0];
                if t < *lo {
                    lo - t
                } else if t > *hi {
                    t - hi
                } else {
                    0.0
                }
            }
            Hull::Ball { center, radius } => libm::fmax(distance(center, x) - radius, 0.0),
        }
    }

    /// Upper bound for the distance from `x` to the farthest point of the set.
    pub fn max_distance(&self, x: &[f64]) -> f64 {
        match self {
            Hull::Interval { lo, hi } => libm::fmax(libm::fabs(x[0] - lo), libm::fabs(x[0] - hi)),
            Hull::Ball { center, radius } => distance(center, x) + radius,
        }
    }

    /// Distance from `x` to the nearest point known to be in the set.
    pub fn witness_distance(&self, x: &[f64]) -> f64 {
        match self {
            Hull::Interval { lo, hi } => libm::fmin(libm::fabs(x[0] - lo), libm::fabs(x[0] - hi)),
            Hull::Ball { center, .. } => distance(center, x),
        }
    }

    /// Lower bound for the distance between two sets.
    pub fn min_distance_to(&self, other: &Hull) -> f64 {
        match (self, other) {
            (Hull::Interval { lo: a, hi: b }, Hull::Interval { lo: c, hi: d }) => {
                libm::fmax(libm::fmax(c - b, a - d), 0.0)
            }
            _ => {
                let (c1, r1) = self.bounding_ball();
                let (c2, r2) = other.bounding_ball();
                libm::fmax(distance(&c1, &c2) - r1 - r2, 0.0)
            }
        }
    }

    /// Distance between points known to lie in the two sets (an upper bound
    /// for the set distance).
    pub fn witness_distance_to(&self, other: &Hull) -> f64 {
        match (self, other) {
            (Hull::Interval { lo: a, hi: b }, Hull::Interval { lo: c, hi: d }) => {
                let pairs = [(a, c), (a, d), (b, c), (b, d)];
                pairs.iter().map(|(p, q)| libm::fabs(*p - *q)).fold(f64::INFINITY, libm::fmin)
            }
            (Hull::Ball { center: c1, .. }, Hull::Ball { center: c2, .. }) => distance(c1, c2),
            _ => {
                let (c1, _) = self.bounding_ball();
                let (c2, _) = other.bounding_ball();
                distance(&c1, &c2)
            }
        }
    }

    fn bounding_ball(&self) -> (Point, f64) {
        match self {
            Hull::Interval { lo, hi } => (alloc::vec![(lo + hi) / 2.0], (hi - lo) / 2.0),
            Hull::Ball { center, radius } => (center.clone(), *radius),
        }
    }
}
