//! Forcing terms of the p-Laplacian hierarchies and a free-space Duhamel oracle.

mod duhamel;
mod forcing;
mod partitions;

pub use duhamel::{duhamel_reference, duhamel_segment, DuhamelOptions};
pub use forcing::{
    plap_forcing, plap_forcing_with, ForcingPlan, GradientTable, DEGENERATE_SQ, NEGLIGIBLE_REL,
};
pub use partitions::{enumerate_partitions, Partition, MAX_PARTITION_ORDER};
