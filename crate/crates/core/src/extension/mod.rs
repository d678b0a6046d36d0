//! Extension of a bilipschitz map from a union of cylinders to the whole
//! attractor.
//!
//! The given map is an [`AddressTransducer`]. The pipeline in [`thm1`]
//! rescales it around a density point into maps `h_k`, each tabulated on a
//! net as a [`MapTable`], and [`extract_limit`] picks a convergent tail.

mod lemma2;
mod limit;
mod oracle;
mod table;
mod thm1;
mod transducer;

pub use lemma2::{lemma2_ball_constant, lemma2_indices, Lemma2Indices};
pub use limit::{extract_limit, LimitReport};
pub use oracle::{certify_transducer, net_dimension, transducer_bilip_estimate, transducer_net, GROWTH_LIMIT};
pub use table::{verify_map_table, MapTable, RatioBounds, TableEntry, Verdict, VerifyMode};
pub use thm1::{dimension_gate, thm1_construct, Thm1Run, Thm1Stage};
pub(crate) use thm1::{check_domain_inside, witness_address};
pub use transducer::{AddressTransducer, Transition};

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::ifs::{Constants, IfsSystem};
use crate::symbolic::Word;

/// A system with its certified constants.
#[derive(Debug, Clone)]
pub struct CertifiedSystem {
    pub system: IfsSystem,
    pub constants: Constants,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionConfig {
    /// Indices `k` to build, strictly increasing.
    pub schedule: Vec<usize>,
    /// Information level of the source nets.
    pub net_level: usize,
    /// Cauchy tolerance for the limit.
    pub epsilon: f64,
    /// Overrides the Lemma 2 constant `b`.
    pub ball_constant: Option<f64>,
    /// Period of the density point `x`, which must lie in the domain.
    pub witness: Word,
    /// Level at which the given map is certified.
    pub oracle_level: usize,
    pub tol_dim: f64,
}

impl ExtensionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.schedule.is_empty() || self.schedule.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::Config("schedule must be non-empty and strictly increasing".to_string()));
        }
        if !(self.epsilon > 0.0) || !(self.tol_dim > 0.0) {
            return Err(Error::Config("epsilon and tol_dim must be positive".to_string()));
        }
        if matches!(self.ball_constant, Some(b) if !(b > 0.0)) {
            return Err(Error::Config("ball constant must be positive".to_string()));
        }
        if self.witness.is_empty() {
            return Err(Error::Config("witness word must be non-empty".to_string()));
        }
        if self.oracle_level < 2 {
            return Err(Error::Config("oracle level must be at least 2".to_string()));
        }
        Ok(())
    }
}
