//! Spatial convergence on the unit-square example with
//! `N = Mₛ^{2/(2−β)}`, under both error-norm rules.
//!
//! cargo run --release --example spatial_convergence_2d

use fracwave::mms_harness::{example2_case, spatial_study, StudyOptions};

fn main() -> fracwave::Result<()> {
    let case = example2_case(1.5)?;
    for (label, points) in [("centroid rule", None), ("7-point rule", Some(7))] {
        let opts = StudyOptions {
            error_points: points,
            ..StudyOptions::default()
        };
        let report = spatial_study(&case, &[8, 16, 32], &opts)?;
        println!("{label}");
        for row in &report.rows {
            let oc = row.order.map(|o| format!("{o:.4}")).unwrap_or_default();
            println!("  Ms = {:>3}  N = {:>4}  error {:.3e}  {oc}", row.divisions, row.steps, row.error);
        }
    }
    Ok(())
}
