//! P1 finite elements: assembly, projections and error norms on the
//! interval and the unit square.
//!
//! cargo run --release --example finite_elements

use std::f64::consts::PI;

use fracwave::fem_space::{FeSpace, Point, QuadratureRule, SolverOptions, SpatialMesh};

fn main() -> fracwave::Result<()> {
    let opts = SolverOptions::default();

    println!("sin x on (0, pi)");
    for ms in [8, 16, 32, 64] {
        let space = FeSpace::new(SpatialMesh::interval(0.0, PI, ms)?)?;
        let ritz = space.ritz_projection(|p| [p[0].cos(), 0.0], &opts)?;
        let l2 = space.l2_projection(|p| p[0].sin(), &opts)?;
        println!(
            "  Ms = {ms:>3}: |grad(u - R_h u)| = {:.3e}, |u - P_h u| = {:.3e}",
            ritz.h1_seminorm_error(|p| [p[0].cos(), 0.0]),
            l2.l2_error(|p| p[0].sin()),
        );
    }

    let psi = |p: Point| (p[0] - p[0] * p[0]) * (p[1] - p[1] * p[1]);
    let grad = |p: Point| [(1.0 - 2.0 * p[0]) * (p[1] - p[1] * p[1]), (p[0] - p[0] * p[0]) * (1.0 - 2.0 * p[1])];
    let centroid = QuadratureRule::triangle(1)?;
    println!("\n(x - x^2)(y - y^2) on the unit square");
    for ms in [8, 16, 32] {
        let space = FeSpace::with_quadrature(SpatialMesh::unit_square(ms)?, 7)?;
        let ritz = space.ritz_projection(grad, &opts)?;
        println!(
            "  Ms = {ms:>2}: dofs {:>4}, |grad(u - R_h u)| = {:.3e} (centroid rule {:.3e}), |grad R_h u|^2 = {:.6} (exact 1/45 = {:.6})",
            space.num_dofs(),
            ritz.h1_seminorm_error(grad),
            space.h1_seminorm_error_with(ritz.coeffs(), grad, &centroid),
            ritz.grad_norm_sq(),
            1.0 / 45.0,
        );
    }
    let space = FeSpace::new(SpatialMesh::unit_square(4)?)?;
    let u = space.interpolate(psi);
    println!("\ninterpolant at (0.3, 0.6): {:.6} (exact {:.6})", u.value_at([0.3, 0.6]).unwrap(), psi([0.3, 0.6]));
    Ok(())
}
