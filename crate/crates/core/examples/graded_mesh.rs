//! Graded temporal meshes and the step-size condition of the discrete
//! Grönwall inequality.
//!
//! cargo run --example graded_mesh

use fracwave::graded_time::{gronwall_max_step, recommended_grading, TimeMesh};

fn main() -> fracwave::Result<()> {
    let beta = 0.7;
    let r = recommended_grading(beta)?;
    let mesh = TimeMesh::graded(1.0, 8, r)?;
    println!("beta = {beta}, r = (2 - beta)/beta = {r:.6}");
    println!("{:>3} {:>14} {:>14}", "n", "t_n", "tau_n");
    for n in 1..=mesh.steps() {
        println!("{n:>3} {:>14.6e} {:>14.6e}", mesh.t(n), mesh.tau(n));
    }

    let (w1, w2) = mesh.extrapolation_weights(4)?;
    println!("\nextrapolation weights at n = 4: w1 = {w1:.6}, w2 = {w2:.6}");

    let lambda = 1.0;
    println!("\nmax step allowed for Lambda = {lambda}: {:.4}", gronwall_max_step(beta, lambda));
    for n in [4, 8, 16, 32] {
        let m = TimeMesh::graded(1.0, n, r)?;
        println!(
            "N = {n:>2}: max tau = {:.4}, condition holds: {}",
            m.max_step(),
            m.satisfies_gronwall_step_condition(beta, lambda)
        );
    }
    Ok(())
}
