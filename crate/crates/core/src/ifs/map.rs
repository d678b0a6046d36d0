use alloc::string::ToString;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{Ball, Point};

/// One generator of a conformal system.
///
/// Similarities `x ↦ ratio · Q x + t` live in any dimension; Möbius maps
/// `x ↦ (a x + b) / (c x + d)` are one-dimensional. Both have closed-form
/// derivative norms, which is all the bounded distortion machinery needs.
#[derive(Debug, Clone, PartialEq)]
pub enum ConformalMap {
    Similarity {
        ratio: f64,
        /// Row-major `n × n` orthogonal matrix.
        orthogonal: Vec<f64>,
        translation: Vec<f64>,
    },
    Moebius { a: f64, b: f64, c: f64, d: f64 },
}

impl ConformalMap {
    pub fn similarity(ratio: f64, orthogonal: Vec<f64>, translation: Vec<f64>) -> Result<Self> {
        let n = translation.len();
        if n == 0 || orthogonal.len() != n * n {
            return Err(Error::Config("orthogonal part must be n x n for an n-vector translation".to_string()));
        }
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::Config(alloc::format!("similarity ratio {ratio} not in (0,1)")));
        }
        for i in 0..n {
            for j in 0..n {
                let dot: f64 = (0..n).map(|k| orthogonal[k * n + i] * orthogonal[k * n + j]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                if libm::fabs(dot - want) > 1e-9 {
                    return Err(Error::Config("linear part is not orthogonal".to_string()));
                }
            }
        }
        Ok(ConformalMap::Similarity { ratio, orthogonal, translation })
    }

    /// `x ↦ ±ratio · x + t` on the line.
    pub fn similarity_1d(ratio: f64, reflect: bool, translation: f64) -> Result<Self> {
        let sign = if reflect { -1.0 } else { 1.0 };
        ConformalMap::similarity(ratio, alloc::vec![sign], alloc::vec![translation])
    }

    pub fn moebius(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        if a * d - b * c == 0.0 {
            return Err(Error::Config("Möbius determinant ad - bc vanishes".to_string()));
        }
        Ok(ConformalMap::Moebius { a, b, c, d })
    }

    pub fn dim(&self) -> usize {
        match self {
            ConformalMap::Similarity { translation, .. } => translation.len(),
            ConformalMap::Moebius { .. } => 1,
        }
    }

    pub fn is_similarity(&self) -> bool {
        matches!(self, ConformalMap::Similarity { .. })
    }

    /// Image of `x`, without a domain check.
    pub fn apply(&self, x: &[f64]) -> Point {
        match self {
            ConformalMap::Similarity { ratio, orthogonal, translation } => {
                let n = translation.len();
                (0..n)
                    .map(|i| {
                        let qx: f64 = (0..n).map(|j| orthogonal[i * n + j] * x[j]).sum();
                        ratio * qx + translation[i]
                    })
                    .collect()
            }
            ConformalMap::Moebius { a, b, c, d } => alloc::vec![(a * x[0] + b) / (c * x[0] + d)],
        }
    }

    /// Image of `x`, rejecting points outside the domain.
    pub fn evaluate(&self, x: &[f64], domain: &Ball) -> Result<Point> {
        if x.len() != self.dim() || !domain.contains(x, crate::tolerance::TOL_GEOM) {
            return Err(Error::Domain);
        }
        Ok(self.apply(x))
    }

    /// Inverse map, used to pull image points back through `g_j^{-1}`.
    pub fn apply_inverse(&self, y: &[f64]) -> Point {
        match self {
            ConformalMap::Similarity { ratio, orthogonal, translation } => {
                let n = translation.len();
                // Q^{-1} = Q^T
                (0..n)
                    .map(|i| (0..n).map(|j| orthogonal[j * n + i] * (y[j] - translation[j])).sum::<f64>() / ratio)
                    .collect()
            }
            ConformalMap::Moebius { a, b, c, d } => alloc::vec![(d * y[0] - b) / (a - c * y[0])],
        }
    }

    /// Operator norm of the derivative at `x`.
    pub fn derivative_norm(&self, x: &[f64]) -> f64 {
        match self {
            ConformalMap::Similarity { ratio, .. } => *ratio,
            ConformalMap::Moebius { a, b, c, d } => {
                let q = c * x[0] + d;
                libm::fabs(a * d - b * c) / (q * q)
            }
        }
    }

    /// Pole of a Möbius map, if any.
    pub fn pole(&self) -> Option<f64> {
        match self {
            ConformalMap::Moebius { c, d, .. } if *c != 0.0 => Some(-d / c),
            _ => None,
        }
    }

    /// Smallest and largest derivative norm over a ball (an interval for
    /// Möbius maps). Errors if a Möbius pole lies in the ball.
    pub fn derivative_range(&self, ball: &Ball) -> Result<(f64, f64)> {
        match self {
            ConformalMap::Similarity { ratio, .. } => Ok((*ratio, *ratio)),
            ConformalMap::Moebius { .. } => {
                let (lo, hi) = ball.bounds_1d();
                if let Some(p) = self.pole() {
                    if p >= lo && p <= hi {
                        return Err(Error::Config(alloc::format!("Möbius pole {p} inside [{lo}, {hi}]")));
                    }
                }
                // |cx + d| is monotone on a pole-free interval, so the extremes sit at the ends.
                let u = self.derivative_norm(&[lo]);
                let v = self.derivative_norm(&[hi]);
                Ok((libm::fmin(u, v), libm::fmax(u, v)))
            }
        }
    }

    /// Derivative norm at `x`, rejecting points outside the domain or at a pole.
    pub fn derivative_norm_checked(&self, x: &[f64], domain: &Ball) -> Result<f64> {
        if x.len() != self.dim() || !domain.contains(x, crate::tolerance::TOL_GEOM) {
            return Err(Error::Domain);
        }
        self.derivative_range(domain)?;
        Ok(self.derivative_norm(x))
    }
}
