//! Solving a user-defined Kirchhoff problem with non-zero initial velocity,
//! then inspecting the per-step diagnostics and the stability quantity.
//!
//! cargo run --release --example solve_problem

use std::f64::consts::PI;

use fracwave::fem_space::{Domain, FeSpace, SolverOptions, SpatialMesh};
use fracwave::graded_time::{recommended_grading, TimeMesh};
use fracwave::kirchhoff_solver::{apriori_bound_report, solve_all, InitialDatum, KirchhoffCoefficient, ProblemSpec};

fn main() -> fracwave::Result<()> {
    let alpha = 1.6;
    // a(w) = 1 + w/(1 + w) lies in [1, 2] and is 1-Lipschitz on w >= 0
    let coefficient = KirchhoffCoefficient::new(|w| 1.0 + w / (1.0 + w), 1.0, 2.0, 1.0)?;
    let spec = ProblemSpec::new(
        alpha,
        2.0,
        Domain::Interval { a: 0.0, b: PI },
        coefficient,
        |p, t| (-t).exp() * p[0].sin(),
        InitialDatum::new(|p| p[0].sin(), |p| [p[0].cos(), 0.0]),
        InitialDatum::new(|p| (2.0 * p[0]).sin(), |p| [2.0 * (2.0 * p[0]).cos(), 0.0])
            .with_laplacian(|p| -4.0 * (2.0 * p[0]).sin()),
    )?;

    let time = TimeMesh::graded(spec.final_time(), 64, recommended_grading(spec.beta())?)?;
    let space = FeSpace::new(SpatialMesh::interval(0.0, PI, 128)?)?;
    let traj = solve_all(&spec, &time, &space, SolverOptions::default())?;
    let bound = apriori_bound_report(&traj, &space);

    println!("{:>3} {:>10} {:>10} {:>12} {:>12}", "n", "t_n", "kappa", "|grad U|^2", "bound");
    for n in (0..=time.steps()).step_by(8) {
        let kappa = if n >= 2 {
            format!("{:.6}", traj.diagnostics()[n - 2].kappa)
        } else {
            "-".into()
        };
        let grad_sq = space.grad_norm_sq_of(&traj.u(n));
        println!("{n:>3} {:>10.5} {kappa:>10} {grad_sq:>12.6} {:>12.6}", time.t(n), bound[n]);
    }
    let mid = space.function(traj.u(time.steps()))?.value_at([PI / 2.0, 0.0]).unwrap();
    println!("\nU(pi/2, T) = {mid:.6}");
    Ok(())
}
