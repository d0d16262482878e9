//! Temporal convergence on the interval example with `Mₛ = N^{2−β}`,
//! using worker threads across independent runs.
//!
//! cargo run --release --example temporal_convergence

use fracwave::mms_harness::{example1_case, temporal_study, StudyOptions};

fn main() -> fracwave::Result<()> {
    let opts = StudyOptions {
        threads: 2,
        ..StudyOptions::default()
    };
    for alpha in [1.4, 1.8] {
        let case = example1_case(alpha)?;
        let report = temporal_study(&case, &[32, 64, 128, 256], &opts)?;
        println!("alpha = {alpha}, expected order 2 - beta = {:.2}", 2.0 - case.beta());
        for row in &report.rows {
            let oc = row.order.map(|o| format!("{o:.4}")).unwrap_or_default();
            println!("  N = {:>4}  Ms = {:>5}  error {:.3e}  {oc}", row.steps, row.divisions, row.error);
        }
    }
    Ok(())
}
