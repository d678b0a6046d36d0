//! Words, addresses, antichains and the word selection procedures.

mod antichain;
mod coding;
mod cut;
mod word;

pub use antichain::{binary_partition, Antichain, Partition, SymbolicSubset};
pub use coding::{
    address_to_point, fixed_point, maximal_cylinders_meeting, maximal_prefix_below, point_to_address,
    shortest_index, ShortestIndex,
};
pub use cut::{moran_threshold, net_below, Net};
pub use word::{words_to_string, Address, Word};
