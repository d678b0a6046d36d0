//! Dimension, natural measure, ball measures, Ahlfors regularity and density
//! defects.
//!
//! The natural measure stands in for normalised `H^s` restricted to the
//! attractor. For similarity systems with strong separation the two agree.

mod ahlfors;
mod dimension;
mod natural;

pub use ahlfors::{ahlfors_check, AhlforsReport, AhlforsSample};
pub use dimension::{moran_dimension, DimensionEstimate};
pub use natural::{
    ball_measure, child_weights, cylinder_measure, density_certificate, density_defect, depth_for_diameter,
    DensityCertificate, MeasureBounds,
};
