//! Finite probability spaces, partitions as sub-sigma-algebras, and random
//! variables compared up to almost-sure equality.

mod partition;
mod rv;
mod space;

pub use partition::{
    complete_partition, join_partitions, meet_partitions, Partition, PartitionIter,
};
pub(crate) use partition::UnionFind;
pub use rv::{as_equal_rv, ln_norm, measurable_wrt, Exponent, RandomVar, VNorm, VecRandomVar};
pub(crate) use rv::weighted_norm;
pub use space::{make_space, ProbSpace};
