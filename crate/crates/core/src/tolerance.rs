//! Numeric tolerances shared by every module.

/// Assertions on exactly representable families (similarities, hull arithmetic).
pub const TOL_GEOM: f64 = 1e-9;

/// Assertions on sampled quantities (Möbius distortion, densities).
pub const TOL_SAMPLE: f64 = 1e-6;

/// Two attractors are treated as having the same dimension below this gap.
pub const TOL_DIM: f64 = 1e-6;

/// Iteration cap for bisection and fixed-point iteration.
pub const MAX_ITERATIONS: usize = 200;

/// `a <= b` up to a relative tolerance.
pub fn le_rel(a: f64, b: f64, tol: f64) -> bool {
    a <= b + tol * libm::fmax(libm::fabs(a), libm::fabs(b))
}
