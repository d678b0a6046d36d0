//! Conformal iterated function systems and constructive bilipschitz extension.
//!
//! The crate is `no_std` (with `alloc`). It covers four layers:
//!
//! * [`ifs`]: similarity and one-dimensional Möbius generators, systems built
//!   from them, structural constants and separation checks.
//! * [`symbolic`]: words, eventually periodic addresses, antichains (tree cuts)
//!   and the word selection procedures used by the extension pipelines.
//! * [`measure`]: the Moran dimension, the natural measure on cylinders, ball
//!   measure bounds, Ahlfors regularity and density defects.
//! * [`extension`] and [`onto`]: building bilipschitz maps on a whole attractor
//!   from a finite-state map given on a union of cylinders, into and onto.
#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod error;
pub mod extension;
pub mod geometry;
pub mod ifs;
pub mod measure;
pub mod onto;
pub mod symbolic;
pub mod tolerance;

pub use error::{Error, Result};
pub use extension::{AddressTransducer, ExtensionConfig, MapTable, RatioBounds};
pub use geometry::{Ball, Hull, Point};
pub use ifs::{ConformalMap, Constants, IfsSystem, OpenSetWitness, Separation};
pub use symbolic::{Address, Antichain, SymbolicSubset, Word};
