//! End-to-end behaviour of the time stepper.

use std::f64::consts::PI;

use fracwave::caputo_l1::L1Row;
use fracwave::fem_space::{Domain, FeSpace, SolverOptions, SpatialMesh};
use fracwave::graded_time::TimeMesh;
use fracwave::kirchhoff_solver::{
    apriori_bound_report, solve_all, InitialDatum, KirchhoffCoefficient, ProblemSpec, SolverState,
};
use fracwave::mms_harness::{coupled_divisions, example1_case, run_case, StudyJob, StudyOptions};
use fracwave::special::gamma;

fn wave_problem(u1: InitialDatum) -> ProblemSpec {
    ProblemSpec::new(
        1.6,
        1.0,
        Domain::Interval { a: 0.0, b: PI },
        KirchhoffCoefficient::three_plus_sine(),
        |p, t| (1.0 + t) * (2.0 * p[0]).sin(),
        InitialDatum::new(|p| p[0].sin(), |p| [p[0].cos(), 0.0]),
        u1,
    )
    .unwrap()
}

#[test]
fn zero_velocity_keeps_reduced_and_recovered_equal() {
    let spec = wave_problem(InitialDatum::zero());
    let time = TimeMesh::graded(1.0, 20, 1.5).unwrap();
    let space = FeSpace::new(SpatialMesh::interval(0.0, PI, 24).unwrap()).unwrap();
    let traj = solve_all(&spec, &time, &space, SolverOptions::default()).unwrap();
    for n in 0..=20 {
        assert_eq!(traj.u(n), traj.ubar(n).to_vec());
    }
}

#[test]
fn recovered_solution_adds_projected_velocity() {
    let spec = wave_problem(
        InitialDatum::new(|p| 0.5 * p[0].sin(), |p| [0.5 * p[0].cos(), 0.0]).with_laplacian(|p| -0.5 * p[0].sin()),
    );
    let time = TimeMesh::graded(1.0, 16, 2.0).unwrap();
    let space = FeSpace::new(SpatialMesh::interval(0.0, PI, 16).unwrap()).unwrap();
    let traj = solve_all(&spec, &time, &space, SolverOptions::default()).unwrap();
    for n in 0..=16 {
        let u = traj.u(n);
        for i in 0..u.len() {
            let diff = u[i] - traj.ubar(n)[i] - time.t(n) * traj.velocity()[i];
            assert!(diff.abs() < 1e-14);
        }
    }
    assert!(traj.diagnostics().iter().all(|d| (2.0..=4.0).contains(&d.kappa)));
}

#[test]
fn laplacian_and_gradient_velocity_loads_agree() {
    // (Δu₁, φ) = −(∇u₁, ∇φ) for u₁ ∈ H¹₀, so both paths give the same run up to quadrature
    let with_lap = wave_problem(
        InitialDatum::new(|p| p[0].sin(), |p| [p[0].cos(), 0.0]).with_laplacian(|p| -p[0].sin()),
    );
    let with_grad = wave_problem(InitialDatum::new(|p| p[0].sin(), |p| [p[0].cos(), 0.0]));
    let time = TimeMesh::graded(1.0, 12, 2.0).unwrap();
    let space = FeSpace::with_quadrature(SpatialMesh::interval(0.0, PI, 32).unwrap(), 7).unwrap();
    let a = solve_all(&with_lap, &time, &space, SolverOptions::default()).unwrap();
    let b = solve_all(&with_grad, &time, &space, SolverOptions::default()).unwrap();
    for (x, y) in a.u(12).iter().zip(b.u(12)) {
        assert!((x - y).abs() < 1e-10);
    }
}

#[test]
fn step_matrices_are_positive_definite() {
    let spec = wave_problem(InitialDatum::zero());
    let time = TimeMesh::graded(1.0, 8, 2.0).unwrap();
    let space = FeSpace::new(SpatialMesh::interval(0.0, PI, 10).unwrap()).unwrap();
    let mut state = SolverState::initialize(&spec, &time, &space, SolverOptions::default()).unwrap();
    let x: Vec<f64> = (0..space.num_dofs()).map(|i| ((i * 7 % 5) as f64) - 2.0).collect();
    while !state.is_finished() {
        let n = state.step().unwrap();
        let kappa = state.diagnostics().last().unwrap().kappa;
        let d1 = L1Row::new(&time, spec.beta(), n).unwrap().d(1);
        let form = d1 * space.mass().quad_form(&x) + kappa / d1 * space.stiffness().quad_form(&x);
        assert!(form > 0.0);
    }
}

/// Residual of the first discrete equation with exact data, at `t = T`,
/// scaled by `1/h` so it measures a pointwise defect.
fn consistency_residual(steps: usize) -> f64 {
    let case = example1_case(1.5).unwrap();
    let (alpha, beta) = (case.alpha(), case.beta());
    let time = TimeMesh::graded(1.0, steps, case.default_grading()).unwrap();
    let ms = coupled_divisions(steps, beta);
    let space = FeSpace::with_quadrature(SpatialMesh::interval(0.0, PI, ms).unwrap(), 7).unwrap();
    let v_time = |t: f64| {
        gamma(4.0) / gamma(4.0 - beta) * t.powf(3.0 - beta) + gamma(alpha + 1.0) / gamma(alpha + 1.0 - beta) * t.powf(alpha - beta)
    };
    let u_hist: Vec<Vec<f64>> = (0..=steps)
        .map(|k| space.interpolate(|p| case.exact(p, time.t(k))).into_coeffs())
        .collect();
    let v_hist: Vec<Vec<f64>> = (0..=steps)
        .map(|k| space.interpolate(|p| v_time(time.t(k)) * p[0].sin()).into_coeffs())
        .collect();
    let n = steps;
    let dv = L1Row::new(&time, beta, n).unwrap().apply_vectors(&v_hist[..=n]).unwrap();
    let (w1, w2) = time.extrapolation_weights(n).unwrap();
    let u_hat: Vec<f64> = u_hist[n - 1].iter().zip(&u_hist[n - 2]).map(|(a, b)| w1 * a + w2 * b).collect();
    let kappa = 3.0 + space.stiffness().quad_form(&u_hat).sin();
    let bdv = space.mass().mul_vec(&dv);
    let au = space.stiffness().mul_vec(&u_hist[n]);
    let f = space.load(|p| case.forcing(p, time.t(n)));
    let h = space.mesh().h();
    (0..f.len())
        .map(|i| (bdv[i] + kappa * au[i] - f[i]).abs() / h)
        .fold(0.0, f64::max)
}

#[test]
fn scheme_is_consistent() {
    let r: Vec<f64> = [16, 32, 64, 128].iter().map(|&n| consistency_residual(n)).collect();
    for w in r.windows(2) {
        assert!(w[1] < 0.7 * w[0], "{r:?}");
    }
}

#[test]
fn bound_quantity_does_not_grow_with_n() {
    let case = example1_case(1.5).unwrap();
    let opts = StudyOptions::default();
    let maxima: Vec<f64> = [16, 32, 64]
        .iter()
        .map(|&n| {
            let job = StudyJob::new(&case, n, coupled_divisions(n, case.beta()), None);
            let run = run_case(&job, &opts).unwrap();
            let b = apriori_bound_report(&run.trajectory, &run.space);
            b.into_iter().fold(0.0, f64::max)
        })
        .collect();
    let (lo, hi) = maxima.iter().fold((f64::MAX, 0.0f64), |(lo, hi), &m| (lo.min(m), hi.max(m)));
    assert!((hi - lo) / hi < 0.05, "{maxima:?}");
}
