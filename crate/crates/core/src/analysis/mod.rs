//! Controllable subspaces, the equitable-partition search over weight
//! patterns, the resulting upper bound, sampled estimates, and duality.

mod duality;
mod ep_search;
mod estimate;
mod krylov;
mod sampling;

pub use duality::{dual_pair, is_self_dual, observability_matrix, observability_rank, reversal_check, DiagonalMismatch, ReversalCheck};
pub use ep_search::{
    build_system, enumerate_feasible_eps, min_cell_ep, set_partitions, ssc_upper_bound, EPConstraintSystem,
    EnumerationMode, SearchConfig, DEFAULT_CAP,
};
pub use estimate::{
    estimate_ssc_dimension, EstimateConfig, SSCReport, SampleRecord, SscVerdict, SystemSummary, Witness,
    DEFAULT_SAMPLES,
};
pub use krylov::{
    controllability_matrix, controllable_dimension, controllable_subspace, is_controllable, ControllableSubspace,
};
pub use sampling::{derive_seed, sample_pattern, sample_system, sample_weights, SAMPLE_ATTEMPTS};
