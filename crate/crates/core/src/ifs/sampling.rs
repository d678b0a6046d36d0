//! Seeded sampling of words and attractor points.

use rand::Rng;

use crate::geometry::Point;
use crate::ifs::IfsSystem;
use crate::symbolic::{Address, Word};

/// Length of random addresses; deep enough that the cylinder is far below
/// any tolerance in use.
pub const ADDRESS_LENGTH: usize = 48;

pub fn random_word<R: Rng>(rng: &mut R, n_symbols: usize, len: usize) -> Word {
    Word::new((0..len).map(|_| rng.gen_range(1..=n_symbols as u16)).collect())
}

/// A point of the attractor with a random address.
pub fn random_point<R: Rng>(system: &IfsSystem, rng: &mut R) -> Point {
    let w = random_word(rng, system.n_maps(), ADDRESS_LENGTH);
    system.address_point(&Address::anchored(w)).expect("anchored addresses have period 1")
}
