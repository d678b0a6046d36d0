//! Conformal iterated function systems and their structural constants.

mod constants;
mod map;
pub mod sampling;
mod separation;
mod system;

pub use constants::{check_inequalities, estimate_constants, local_radius, Brackets, Constants, InequalityCheck, DENSITY_SAFETY};
pub use map::ConformalMap;
pub use separation::{check_separation, exclusion_holds, set_distance, strong_separation_gap, GapReport, SeparationReport};
pub use system::{compose_word, cylinder_diameter, ComposedMap, Diameter, IfsSystem, OpenSetWitness, Separation};
