//! The L1 approximation of a Caputo derivative of order β ∈ (0, 1) and its
//! truncation error on graded versus uniform meshes.
//!
//! cargo run --release --example caputo_l1

use fracwave::caputo_l1::{exact_caputo_power, truncation_study, L1Row};
use fracwave::graded_time::{recommended_grading, TimeMesh};

fn main() -> fracwave::Result<()> {
    let beta = 0.7;
    let sigma = 1.5;
    let mesh = TimeMesh::graded(1.0, 64, 2.0)?;
    let w: Vec<f64> = mesh.nodes().iter().map(|t| t.powf(sigma)).collect();
    let n = mesh.steps();
    let approx = L1Row::new(&mesh, beta, n)?.apply(&w)?;
    let exact = exact_caputo_power(sigma, beta, 1.0)?;
    println!("D^{beta} t^{sigma} at t = 1: L1 {approx:.8}, exact {exact:.8}");

    // w = t^β is the least regular profile the scheme has to cope with
    let steps = [64, 128, 256, 512, 1024];
    for (label, r) in [("graded", recommended_grading(beta)?), ("uniform", 1.0)] {
        println!("\n{label} mesh, r = {r:.4}");
        for row in truncation_study(beta, beta, &steps, r)? {
            let oc = row.order.map(|o| format!("{o:.4}")).unwrap_or_default();
            println!("  N = {:>5}  weighted error {:.3e}  {oc}", row.steps, row.weighted_error);
        }
    }
    Ok(())
}
