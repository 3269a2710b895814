//! Parallel transport, loop families and holonomy algebra estimation.

pub mod cone;
pub mod estimate;
pub mod loops;
pub mod matlog;
pub mod parallel;
pub mod transport;

pub use cone::{cone_holonomy_crosscheck, cone_metric, cone_ricci_max, ConeMetric};
pub use estimate::{
    classify, classify_group, estimate_algebra, holonomy_algebra_estimate, invariant_subspaces, HolonomyConfig,
    HolonomyEstimate, InvariantSubspace, NormType,
};
pub use loops::{loop_family, LoopKind, LoopPath, LoopScheme, Region};
pub use matlog::{matrix_exp, matrix_log};
pub use parallel::{solve_parallel_tractor, ParallelTractor};
pub use transport::{
    parallel_transport, Connection, LeviCivitaConnection, Path, Segment, TractorConnection, TransportConfig,
};
