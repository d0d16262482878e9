//! Manufactured-solution convergence studies.
//!
//! Temporal studies refine `N` on the graded mesh with `Mₛ = N^{2−β}`;
//! spatial studies refine `Mₛ` with `N = Mₛ^{2/(2−β)}`. Both record the
//! largest H¹-seminorm error of the recovered solution over all levels.

mod cases;
mod study;

pub use cases::{example1_case, example2_case, Example, ManufacturedCase};
pub use study::{
    bound_study, coupled_divisions, default_error_points, coupled_steps, map_ordered, observed_order, round_even, run_case, run_jobs,
    spatial_jobs, spatial_study, temporal_jobs, temporal_study, BoundRow, CaseRun, ConvergenceReport, ConvergenceRow,
    StudyJob, StudyKind, StudyOptions, MAX_COUPLED_STEPS,
};
