//! Onto extension for two-map targets: the image of a shrinking cylinder is
//! covered by target cylinders, which are redistributed over a partition of
//! the whole target.

mod cover;
mod thm2;

pub use cover::{cover_image, symbolic_cover, Cover};
pub use thm2::{thm2_construct, CoverReport, Thm2Run, Thm2Stage};
