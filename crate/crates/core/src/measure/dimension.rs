use alloc::string::ToString;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::ifs::IfsSystem;
use crate::symbolic::Word;
use crate::tolerance::MAX_ITERATIONS;

/// Solution of the Moran equation with its bracket.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionEstimate {
    pub s: f64,
    pub depth: usize,
    pub residual: f64,
    pub lo: f64,
    pub hi: f64,
}

/// Bisection for the root of a decreasing function on `(0, n]`.
fn bisect(n: f64, f: impl Fn(f64) -> f64) -> (f64, f64, f64) {
    let (mut lo, mut hi) = (0.0, n);
    if f(hi) >= 0.0 {
        return (n, n, n);
    }
    for _ in 0..MAX_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi), lo, hi)
}

fn log_level_sum(diams: &[f64], s: f64) -> f64 {
    // sum of d^s computed as exp-sum for stability
    let m = diams.iter().map(|d| s * libm::log(*d)).fold(f64::NEG_INFINITY, f64::max);
    m + libm::log(diams.iter().map(|d| libm::exp(s * libm::log(*d) - m)).sum::<f64>())
}

fn level_diameters(system: &IfsSystem, depth: usize) -> Vec<f64> {
    let d = system.diameter();
    Word::all_of_length(system.n_maps(), depth).map(|w| system.diameter_of(&w) / d).collect()
}

/// Hausdorff dimension of the attractor.
///
/// For similarities this is the root of `Σ r_i^s = 1`. Otherwise the root
/// of `Σ_{|w|=k+1} d_w^s = Σ_{|w|=k} d_w^s` is taken at `k = depth` and
/// `k = depth + 2`; the bracket spans both roots. For similarities the two
/// equations coincide.
pub fn moran_dimension(system: &IfsSystem, depth: usize) -> Result<DimensionEstimate> {
    if depth == 0 {
        return Err(Error::Config("dimension depth must be at least 1".to_string()));
    }
    let n = system.dim() as f64;
    let ratios: Option<Vec<f64>> = (1..=system.n_maps() as u16).map(|i| system.ratio_product(&Word::new(alloc::vec![i]))).collect();
    if let Some(ratios) = ratios {
        if ratios.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
            return Err(Error::Config("similarity ratios must lie in (0,1)".to_string()));
        }
        let moran = |s: f64| ratios.iter().map(|r| libm::pow(*r, s)).sum::<f64>() - 1.0;
        let (s, lo, hi) = bisect(n, moran);
        return Ok(DimensionEstimate { s, depth: 1, residual: libm::fabs(moran(s)), lo, hi });
    }
    if !(system.contraction() < 1.0) {
        return Err(Error::Config("non-contractive system".to_string()));
    }
    let root_at = |k: usize| {
        let coarse = level_diameters(system, k);
        let fine = level_diameters(system, k + 1);
        let f = |s: f64| log_level_sum(&fine, s) - log_level_sum(&coarse, s);
        let (s, _, _) = bisect(n, f);
        (s, libm::fabs(libm::exp(f(s)) - 1.0))
    };
    let (s1, _) = root_at(depth);
    let (s2, residual) = root_at(depth + 2);
    Ok(DimensionEstimate { s: s2, depth: depth + 2, residual, lo: s1.min(s2), hi: s1.max(s2) })
}
