//! Complementary discrete kernels of the L1 scheme and the Mittag-Leffler
//! function that governs fractional Grönwall bounds.
//!
//! cargo run --example kernels

use fracwave::caputo_l1::{mittag_leffler, KernelTriangle, L1Table};
use fracwave::graded_time::TimeMesh;
use fracwave::special::gamma;

fn main() -> fracwave::Result<()> {
    let beta = 0.75;
    let mesh = TimeMesh::graded(1.0, 10, 5.0 / 3.0)?;
    let table = L1Table::new(&mesh, beta, 10)?;
    let q = KernelTriangle::from_table(&table)?;

    let n = 10;
    let defect = (1..=n)
        .map(|k| {
            let s: f64 = (k..=n).map(|j| q.q(n, n - j) * table.d(j, j - k + 1)).sum();
            (s - 1.0).abs()
        })
        .fold(0.0, f64::max);
    println!("complementarity defect at n = {n}: {defect:.2e}");

    println!("\n{:>3} {:>12} {:>12}", "n", "sum Q", "bound");
    for n in 1..=10 {
        let bound = mesh.t(n).powf(beta) / gamma(1.0 + beta);
        println!("{n:>3} {:>12.6} {:>12.6}", q.row_sum(n), bound);
    }

    println!();
    for z in [-2.0, -0.5, 0.5, 2.0, 8.0] {
        println!("E_{beta}({z}) = {:.12}", mittag_leffler(beta, z)?);
    }
    match mittag_leffler(1.0, -30.0) {
        Ok(v) => println!("E_1(-30) = {v}"),
        Err(e) => println!("E_1(-30): {e}"),
    }
    Ok(())
}
