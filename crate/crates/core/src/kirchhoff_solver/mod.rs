//! Linearized L1 / P1 time stepping for the order-reduced system
//!
//! ```text
//!   D^β v − a(l(u)) Δū = f + t a(l(u)) Δu₁,
//!   D^β ū − v = 0,
//! ```
//!
//! with `ū = u − t u₁` and `β = α/2`. Each level `n ≥ 2` freezes the
//! Kirchhoff coefficient at the two-level extrapolant `Ûⁿ` of the recovered
//! `U`-history, which makes the step a single SPD solve
//!
//! ```text
//!   (d_{n,1} B + κ/d_{n,1} A) αⁿ = Fⁿ/d_{n,1} + tₙ κ E/d_{n,1} − B Gⁿ/d_{n,1} − B Hⁿ,
//!   βⁿ = d_{n,1} αⁿ + Hⁿ,
//! ```
//!
//! where `Gⁿ`, `Hⁿ` are the L1 memory terms of the `V` and `Ū` histories.

mod problem;

pub use problem::{InitialDatum, KirchhoffCoefficient, ProblemSpec, ScalarField, SpaceTimeField, VectorField};

use crate::caputo_l1::L1Row;
use crate::error::{Error, Result};
use crate::fem_space::{spd_solve_with, CsrMatrix, FeSpace, SolverMethod, SolverOptions};
use crate::graded_time::TimeMesh;

/// Per-level record of the linearization and the linear solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepDiagnostics {
    pub level: usize,
    /// `a(l(Ûⁿ))`.
    pub kappa: f64,
    pub method: SolverMethod,
    pub iterations: usize,
    pub relative_residual: f64,
}

/// Time-stepping state: full `Ū` and `V` histories (the L1 memory needs all
/// of them) plus cached data that does not change between levels.
#[derive(Debug)]
pub struct SolverState<'a> {
    spec: &'a ProblemSpec,
    time: &'a TimeMesh,
    space: &'a FeSpace,
    opts: SolverOptions,
    ubar: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
    /// `P_h u₁`.
    velocity: Vec<f64>,
    /// `((Δu₁, φ_i))_i`.
    laplacian_load: Vec<f64>,
    diagnostics: Vec<StepDiagnostics>,
    system: CsrMatrix,
}

impl<'a> SolverState<'a> {
    /// Sets up levels 0 and 1:
    /// `U⁰ = R_h u₀`, `V⁰ = 0`, `U¹ = U⁰ + τ₁ P_h u₁`, `Ū¹ = U¹ − t₁ P_h u₁`,
    /// `V¹ = D_N Ū¹`.
    pub fn initialize(
        spec: &'a ProblemSpec,
        time: &'a TimeMesh,
        space: &'a FeSpace,
        opts: SolverOptions,
    ) -> Result<Self> {
        if space.mesh().domain() != spec.domain() {
            return Err(Error::MeshMismatch);
        }
        if (time.final_time() - spec.final_time()).abs() > 1e-12 * spec.final_time() {
            return Err(Error::invalid("T", "time mesh and problem disagree on the final time"));
        }
        let grad_u0 = spec.u0().gradient.clone();
        let u0 = space.ritz_projection(|p| grad_u0(p), &opts)?.into_coeffs();
        let value_u1 = spec.u1().value.clone();
        let velocity = space.l2_projection(|p| value_u1(p), &opts)?.into_coeffs();
        let laplacian_load = match &spec.u1().laplacian {
            Some(lap) => space.load(|p| lap(p)),
            None => {
                let grad = spec.u1().gradient.clone();
                space.gradient_load(|p| grad(p)).into_iter().map(|v| -v).collect()
            }
        };

        let (tau1, t1) = (time.tau(1), time.t(1));
        let u1: Vec<f64> = u0.iter().zip(&velocity).map(|(a, p)| a + tau1 * p).collect();
        let ubar1: Vec<f64> = u1.iter().zip(&velocity).map(|(a, p)| a - t1 * p).collect();
        let row = L1Row::new(time, spec.beta(), 1)?;
        let mut state = SolverState {
            spec,
            time,
            space,
            opts,
            ubar: Vec::with_capacity(time.steps() + 1),
            v: Vec::with_capacity(time.steps() + 1),
            velocity,
            laplacian_load,
            diagnostics: Vec::with_capacity(time.steps()),
            system: space.mass().clone(),
        };
        state.ubar.push(u0);
        state.v.push(vec![0.0; space.num_dofs()]);
        let v1 = row.apply_vectors(&[&state.ubar[0][..], &ubar1[..]])?;
        state.ubar.push(ubar1);
        state.v.push(v1);
        Ok(state)
    }

    /// Latest computed level.
    pub fn level(&self) -> usize {
        self.ubar.len() - 1
    }

    pub fn is_finished(&self) -> bool {
        self.level() == self.time.steps()
    }

    /// Recovered `Uᵏ = Ūᵏ + tₖ P_h u₁`.
    pub fn recovered(&self, k: usize) -> Vec<f64> {
        recover(&self.ubar[k], &self.velocity, self.time.t(k))
    }

    /// Advances one level; returns the new level.
    pub fn step(&mut self) -> Result<usize> {
        let n = self.level() + 1;
        if n > self.time.steps() {
            return Err(Error::IndexOutOfRange {
                index: n,
                lo: 2,
                hi: self.time.steps(),
            });
        }
        self.advance(n).map_err(|e| Error::StepFailed {
            level: n,
            source: Box::new(e),
        })?;
        Ok(n)
    }

    fn advance(&mut self, n: usize) -> Result<()> {
        let m = self.space.num_dofs();
        let mass = self.space.mass();
        let stiffness = self.space.stiffness();
        let t_n = self.time.t(n);
        let row = L1Row::new(self.time, self.spec.beta(), n)?;
        let d1 = row.d(1);

        // linearized coefficient from the extrapolated recovered solution
        let (w1, w2) = self.time.extrapolation_weights(n)?;
        let (t1, t2) = (self.time.t(n - 1), self.time.t(n - 2));
        let u_hat: Vec<f64> = (0..m)
            .map(|i| {
                let p = self.velocity[i];
                w1 * (self.ubar[n - 1][i] + t1 * p) + w2 * (self.ubar[n - 2][i] + t2 * p)
            })
            .collect();
        let coeff = self.spec.coefficient();
        let kappa = coeff.eval(stiffness.quad_form(&u_hat));
        if !(kappa >= coeff.lower() && kappa <= coeff.upper()) {
            return Err(Error::CoefficientOutOfBounds {
                level: n,
                value: kappa,
                m1: coeff.lower(),
                m2: coeff.upper(),
            });
        }

        let mut g = vec![0.0; m];
        let mut h = vec![0.0; m];
        row.history_term(&self.v[..n], &mut g)?;
        row.history_term(&self.ubar[..n], &mut h)?;

        let forcing = self.space.load(|p| self.spec.forcing(p, t_n));
        let bg = mass.mul_vec(&g);
        let bh = mass.mul_vec(&h);
        let inv = 1.0 / d1;
        let rhs: Vec<f64> = (0..m)
            .map(|i| inv * forcing[i] + t_n * kappa * inv * self.laplacian_load[i] - inv * bg[i] - bh[i])
            .collect();

        self.system.assign_combination(d1, mass, kappa * inv, stiffness);
        let guess: Vec<f64> = (0..m)
            .map(|i| w1 * self.ubar[n - 1][i] + w2 * self.ubar[n - 2][i])
            .collect();
        let (alpha, stats) = spd_solve_with(&self.system, &rhs, Some(&guess), &self.opts)?;
        let beta: Vec<f64> = alpha.iter().zip(&h).map(|(a, hh)| d1 * a + hh).collect();

        self.ubar.push(alpha);
        self.v.push(beta);
        self.diagnostics.push(StepDiagnostics {
            level: n,
            kappa,
            method: stats.method,
            iterations: stats.iterations,
            relative_residual: stats.relative_residual,
        });
        Ok(())
    }

    /// Runs the remaining levels up to `N`.
    pub fn run_to_end(&mut self) -> Result<()> {
        while !self.is_finished() {
            self.step()?;
        }
        Ok(())
    }

    pub fn diagnostics(&self) -> &[StepDiagnostics] {
        &self.diagnostics
    }

    pub fn into_trajectory(self) -> Trajectory {
        Trajectory {
            times: self.time.nodes().to_vec(),
            ubar: self.ubar,
            v: self.v,
            velocity: self.velocity,
            diagnostics: self.diagnostics,
        }
    }
}

fn recover(ubar: &[f64], velocity: &[f64], t: f64) -> Vec<f64> {
    ubar.iter().zip(velocity).map(|(u, p)| u + t * p).collect()
}

/// All computed levels of a run.
#[derive(Debug, Clone)]
pub struct Trajectory {
    times: Vec<f64>,
    ubar: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
    velocity: Vec<f64>,
    diagnostics: Vec<StepDiagnostics>,
}

impl Trajectory {
    /// Index of the last level.
    pub fn last_level(&self) -> usize {
        self.ubar.len() - 1
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Coefficients of `Ūⁿ`.
    pub fn ubar(&self, n: usize) -> &[f64] {
        &self.ubar[n]
    }

    /// Coefficients of `Vⁿ`.
    pub fn v(&self, n: usize) -> &[f64] {
        &self.v[n]
    }

    /// Coefficients of the recovered `Uⁿ = Ūⁿ + tₙ P_h u₁`.
    pub fn u(&self, n: usize) -> Vec<f64> {
        recover(&self.ubar[n], &self.velocity, self.times[n])
    }

    /// `P_h u₁`.
    pub fn velocity(&self) -> &[f64] {
        &self.velocity
    }

    pub fn diagnostics(&self) -> &[StepDiagnostics] {
        &self.diagnostics
    }

    /// Largest CG iteration count over all steps.
    pub fn max_iterations(&self) -> usize {
        self.diagnostics.iter().map(|d| d.iterations).max().unwrap_or(0)
    }
}

/// Runs the scheme from level 0 through `N`.
pub fn solve_all(spec: &ProblemSpec, time: &TimeMesh, space: &FeSpace, opts: SolverOptions) -> Result<Trajectory> {
    let mut state = SolverState::initialize(spec, time, space, opts)?;
    state.run_to_end()?;
    Ok(state.into_trajectory())
}

/// `‖Vⁿ‖ + ‖∇Ūⁿ‖` for every level `n = 0..=N`: the quantity kept bounded
/// independently of `N` by the stability estimate.
pub fn apriori_bound_report(trajectory: &Trajectory, space: &FeSpace) -> Vec<f64> {
    (0..=trajectory.last_level())
        .map(|n| space.l2_norm_of(trajectory.v(n)) + space.grad_norm_sq_of(trajectory.ubar(n)).max(0.0).sqrt())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem_space::{Domain, SpatialMesh};
    use std::f64::consts::PI;

    fn zero_problem(alpha: f64) -> ProblemSpec {
        ProblemSpec::new(
            alpha,
            1.0,
            Domain::Interval { a: 0.0, b: PI },
            KirchhoffCoefficient::constant(2.0).unwrap(),
            |_, _| 0.0,
            InitialDatum::zero(),
            InitialDatum::zero(),
        )
        .unwrap()
    }

    #[test]
    fn zero_solution_preserved() {
        let spec = zero_problem(1.5);
        let time = TimeMesh::graded(1.0, 16, 3.0).unwrap();
        let space = FeSpace::new(SpatialMesh::interval(0.0, PI, 10).unwrap()).unwrap();
        let traj = solve_all(&spec, &time, &space, SolverOptions::default()).unwrap();
        assert_eq!(traj.last_level(), 16);
        for n in 0..=16 {
            assert!(traj.ubar(n).iter().all(|&x| x == 0.0));
            assert!(traj.v(n).iter().all(|&x| x == 0.0));
        }
        assert!(apriori_bound_report(&traj, &space).iter().all(|&b| b == 0.0));
    }

    #[test]
    fn initialization_with_velocity() {
        let u1 = InitialDatum::new(|p| (2.0 * p[0]).sin(), |p| [2.0 * (2.0 * p[0]).cos(), 0.0]);
        let u0 = InitialDatum::new(|p| p[0].sin(), |p| [p[0].cos(), 0.0]);
        let spec = ProblemSpec::new(
            1.4,
            1.0,
            Domain::Interval { a: 0.0, b: PI },
            KirchhoffCoefficient::three_plus_sine(),
            |_, _| 0.0,
            u0,
            u1,
        )
        .unwrap();
        let time = TimeMesh::graded(1.0, 8, 2.0).unwrap();
        let space = FeSpace::with_quadrature(SpatialMesh::interval(0.0, PI, 16).unwrap(), 7).unwrap();
        let state = SolverState::initialize(&spec, &time, &space, SolverOptions::default()).unwrap();
        // U⁰ is the Ritz projection, which in 1D is the nodal interpolant
        let interp = space.interpolate(|p| p[0].sin());
        for (a, b) in state.ubar[0].iter().zip(interp.coeffs()) {
            assert!((a - b).abs() < 1e-11);
        }
        // t₁ = τ₁, so Ū¹ = U⁰ up to rounding and V¹ vanishes
        for (a, b) in state.ubar[1].iter().zip(&state.ubar[0]) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(state.v[1].iter().all(|v| v.abs() < 1e-12));
        let u1 = state.recovered(1);
        for i in 0..u1.len() {
            assert!((u1[i] - state.ubar[0][i] - time.tau(1) * state.velocity[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn smallest_run_is_finite() {
        let spec = ProblemSpec::new(
            1.7,
            1.0,
            Domain::Interval { a: 0.0, b: PI },
            KirchhoffCoefficient::three_plus_sine(),
            |p, t| t * p[0].sin(),
            InitialDatum::new(|p| p[0].sin(), |p| [p[0].cos(), 0.0]),
            InitialDatum::zero(),
        )
        .unwrap();
        let time = TimeMesh::uniform(1.0, 2).unwrap();
        let space = FeSpace::new(SpatialMesh::interval(0.0, PI, 4).unwrap()).unwrap();
        let traj = solve_all(&spec, &time, &space, SolverOptions::default()).unwrap();
        assert_eq!(traj.last_level(), 2);
        assert!(traj.u(2).iter().chain(traj.v(2)).all(|x| x.is_finite()));
        assert_eq!(traj.diagnostics().len(), 1);
    }

    #[test]
    fn single_interior_node_matches_hand_computation() {
        // Ms = 2 on (0, π): one unknown; B = 4h/6, A = 2/h
        let h = PI / 2.0;
        let (b, a) = (4.0 * h / 6.0, 2.0 / h);
        let alpha = 1.6;
        let beta = 0.8;
        let amp = 0.7;
        let spec = ProblemSpec::new(
            alpha,
            1.0,
            Domain::Interval { a: 0.0, b: PI },
            KirchhoffCoefficient::three_plus_sine(),
            |_, t| 1.0 + t,
            InitialDatum::new(move |p| amp * p[0].sin(), move |p| [amp * p[0].cos(), 0.0]),
            InitialDatum::zero(),
        )
        .unwrap();
        let time = TimeMesh::graded(1.0, 2, 2.0).unwrap();
        let space = FeSpace::with_quadrature(SpatialMesh::interval(0.0, PI, 2).unwrap(), 7).unwrap();
        let mut state = SolverState::initialize(&spec, &time, &space, SolverOptions::default()).unwrap();
        state.step().unwrap();

        // hand evaluation
        let (t1, t2) = (0.25, 1.0);
        let g = crate::special::gamma(2.0 - beta);
        let d = |n: usize, k: usize| {
            let t: [f64; 3] = [0.0, t1, t2];
            ((t[n] - t[n - k]).powf(1.0 - beta) - (t[n] - t[n - k + 1]).powf(1.0 - beta)) / (g * (t[n - k + 1] - t[n - k]))
        };
        let u0 = state.ubar[0][0];
        // Ritz projection of amp·sin x at the midpoint node equals amp
        assert!((u0 - amp).abs() < 1e-12);
        let (ub0, ub1, v0, v1) = (u0, u0, 0.0, 0.0);
        let (w1, w2) = ((t1 + (t2 - t1)) / t1, -(t2 - t1) / t1);
        let u_hat = w1 * ub1 + w2 * ub0;
        let kappa = 3.0 + (a * u_hat * u_hat).sin();
        // (1 + t, φ) = (1 + t)·h
        let f = (1.0 + t2) * h;
        let d21 = d(2, 1);
        let gh = -d(2, 2) * v0 + (d(2, 2) - d21) * v1;
        let hh = -d(2, 2) * ub0 + (d(2, 2) - d21) * ub1;
        let lhs = d21 * b + kappa / d21 * a;
        let rhs = f / d21 - b * gh / d21 - b * hh;
        let alpha2 = rhs / lhs;
        let beta2 = d21 * alpha2 + hh;
        assert!((state.ubar[2][0] - alpha2).abs() < 1e-12 * alpha2.abs().max(1.0));
        assert!((state.v[2][0] - beta2).abs() < 1e-12 * beta2.abs().max(1.0));
        assert!((state.diagnostics()[0].kappa - kappa).abs() < 1e-14);
    }

    #[test]
    fn coefficient_outside_declared_bounds_is_reported() {
        // declared [1, 2] but a(w) = 1 + w grows with the solution
        let coeff = KirchhoffCoefficient::new(|w| 1.0 + w, 1.0, 2.0, 1.0).unwrap();
        let spec = ProblemSpec::new(
            1.5,
            1.0,
            Domain::Interval { a: 0.0, b: PI },
            coeff,
            |_, _| 0.0,
            InitialDatum::new(|p| 3.0 * p[0].sin(), |p| [3.0 * p[0].cos(), 0.0]),
            InitialDatum::zero(),
        )
        .unwrap();
        let time = TimeMesh::uniform(1.0, 4).unwrap();
        let space = FeSpace::new(SpatialMesh::interval(0.0, PI, 8).unwrap()).unwrap();
        match solve_all(&spec, &time, &space, SolverOptions::default()) {
            Err(Error::StepFailed { level: 2, source }) => {
                assert!(matches!(*source, Error::CoefficientOutOfBounds { level: 2, .. }))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_mismatched_inputs() {
        let spec = zero_problem(1.5);
        let time = TimeMesh::uniform(2.0, 4).unwrap();
        let space = FeSpace::new(SpatialMesh::interval(0.0, PI, 8).unwrap()).unwrap();
        assert!(SolverState::initialize(&spec, &time, &space, SolverOptions::default()).is_err());
        let time = TimeMesh::uniform(1.0, 4).unwrap();
        let square = FeSpace::new(SpatialMesh::unit_square(4).unwrap()).unwrap();
        assert!(matches!(
            SolverState::initialize(&spec, &time, &square, SolverOptions::default()),
            Err(Error::MeshMismatch)
        ));
        assert!(ProblemSpec::new(
            2.0,
            1.0,
            Domain::UnitSquare,
            KirchhoffCoefficient::constant(1.0).unwrap(),
            |_, _| 0.0,
            InitialDatum::zero(),
            InitialDatum::zero()
        )
        .is_err());
    }
}
