//! Set-partition lattice and cumulant transforms.

pub mod boolean;
pub mod cumulant;
pub mod partition;
pub mod table;

pub use boolean::{boolean_cumulant, boolean_to_classical_coeffs, BooleanExpansion};
pub use cumulant::{
    cumulant_of, cumulant_of_with_guard, leonov_shiryaev, moment_from_cumulants, multiset_partitions,
    MomentOracle, MultisetPartition, ProductCumulant,
};
pub use partition::{bell, enumerate_partitions, join_all, SetPartition};
pub use table::{factorial_moment_table, reduced_factorial_table, scqf_report, MomentTable, ScqfReport};
