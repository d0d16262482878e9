//! Solver for the time-fractional nonlocal diffusion-wave equation of
//! Kirchhoff type,
//!
//! ```text
//!   D^α u − a(‖∇u‖²) Δu = f   in Ω × (0, T],   1 < α < 2,
//!   u = 0 on ∂Ω,   u(·,0) = u₀,   ∂ₜu(·,0) = u₁,
//! ```
//!
//! discretized by symmetric order reduction into two order-β = α/2 Caputo
//! derivatives, the L1 formula on a graded temporal mesh, a linearized
//! (extrapolated) Kirchhoff coefficient, and P1 finite elements in space.
//!
//! Module map:
//!
//! - [`graded_time`]: power-law graded meshes, extrapolation weights, step
//!   admissibility.
//! - [`caputo_l1`]: L1 coefficients, complementary kernels, Mittag-Leffler.
//! - [`fem_space`]: meshes, CSR assembly, projections, norms, SPD solvers.
//! - [`kirchhoff_solver`]: the time stepping engine.
//! - [`mms_harness`]: manufactured solutions and convergence studies.
//! - [`cli`]: key=value configuration, study execution and report output.

pub mod caputo_l1;
pub mod cli;
pub mod error;
pub mod fem_space;
pub mod graded_time;
pub mod kirchhoff_solver;
pub mod mms_harness;
pub mod special;

pub use error::{Error, Result};
