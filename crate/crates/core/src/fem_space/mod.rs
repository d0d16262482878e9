//! P1 finite elements with homogeneous Dirichlet conditions on an interval
//! or on the unit square.
//!
//! Boundary values are eliminated: every matrix and vector lives on the
//! interior vertices only, so mass and stiffness matrices stay SPD.

mod mesh;
mod quadrature;
mod solve;
mod sparse;

pub use mesh::{Cells, Domain, Element, Point, SpatialMesh};
pub use quadrature::{QuadratureRule, DEFAULT_POINTS};
pub use solve::{
    relative_residual, spd_solve, spd_solve_with, BandedCholesky, SolveStats, SolverMethod, SolverOptions,
    AUTO_BANDED_LIMIT, DEFAULT_TOL,
};
pub use sparse::CsrMatrix;

use crate::error::{Error, Result};

fn dof_pairs(mesh: &SpatialMesh, mut local: impl FnMut(&Element, usize, usize) -> f64) -> CsrMatrix {
    let mut triplets = Vec::with_capacity(mesh.num_elements() * 9);
    for e in 0..mesh.num_elements() {
        let el = mesh.element(e);
        for a in 0..el.count {
            let Some(da) = mesh.dof(el.vertices[a]) else { continue };
            for b in 0..el.count {
                let Some(db) = mesh.dof(el.vertices[b]) else { continue };
                triplets.push((da, db, local(&el, a, b)));
            }
        }
    }
    CsrMatrix::from_triplets(mesh.num_dofs(), triplets)
}

/// Mass matrix `B_ij = (φ_j, φ_i)` with exact P1 element integrals.
pub fn assemble_mass(mesh: &SpatialMesh) -> CsrMatrix {
    let d = mesh.dimension() as f64;
    let denom = (d + 1.0) * (d + 2.0);
    dof_pairs(mesh, |el, a, b| {
        let factor = if a == b { 2.0 } else { 1.0 };
        el.measure * factor / denom
    })
}

/// Stiffness matrix `A_ij = (∇φ_j, ∇φ_i)`.
pub fn assemble_stiffness(mesh: &SpatialMesh) -> CsrMatrix {
    dof_pairs(mesh, |el, a, b| {
        let (ga, gb) = (el.grads[a], el.grads[b]);
        el.measure * (ga[0] * gb[0] + ga[1] * gb[1])
    })
}

/// Load vector `(g, φ_i)` by element quadrature.
pub fn assemble_load(mesh: &SpatialMesh, g: impl Fn(Point) -> f64, rule: &QuadratureRule) -> Vec<f64> {
    let mut out = vec![0.0; mesh.num_dofs()];
    for e in 0..mesh.num_elements() {
        let el = mesh.element(e);
        for (bary, w) in rule.points.iter().zip(&rule.weights) {
            let val = w * el.measure * g(el.point(bary));
            for a in 0..el.count {
                if let Some(da) = mesh.dof(el.vertices[a]) {
                    out[da] += val * bary[a];
                }
            }
        }
    }
    out
}

/// `(∇g, ∇φ_i)` by element quadrature.
pub fn assemble_gradient_load(mesh: &SpatialMesh, grad: impl Fn(Point) -> Point, rule: &QuadratureRule) -> Vec<f64> {
    let mut out = vec![0.0; mesh.num_dofs()];
    for e in 0..mesh.num_elements() {
        let el = mesh.element(e);
        let mut avg = [0.0; 2];
        for (bary, w) in rule.points.iter().zip(&rule.weights) {
            let g = grad(el.point(bary));
            avg[0] += w * g[0];
            avg[1] += w * g[1];
        }
        for a in 0..el.count {
            if let Some(da) = mesh.dof(el.vertices[a]) {
                out[da] += el.measure * (avg[0] * el.grads[a][0] + avg[1] * el.grads[a][1]);
            }
        }
    }
    out
}

/// A mesh together with its assembled mass and stiffness matrices and the
/// quadrature rule used for loads and error norms.
#[derive(Debug, Clone)]
pub struct FeSpace {
    mesh: SpatialMesh,
    mass: CsrMatrix,
    stiffness: CsrMatrix,
    rule: QuadratureRule,
}

impl FeSpace {
    pub fn new(mesh: SpatialMesh) -> Result<Self> {
        Self::with_quadrature(mesh, DEFAULT_POINTS)
    }

    pub fn with_quadrature(mesh: SpatialMesh, points: usize) -> Result<Self> {
        let rule = QuadratureRule::for_dimension(mesh.dimension(), points)?;
        let mass = assemble_mass(&mesh);
        let stiffness = assemble_stiffness(&mesh);
        Ok(FeSpace {
            mesh,
            mass,
            stiffness,
            rule,
        })
    }

    pub fn mesh(&self) -> &SpatialMesh {
        &self.mesh
    }

    pub fn mass(&self) -> &CsrMatrix {
        &self.mass
    }

    pub fn stiffness(&self) -> &CsrMatrix {
        &self.stiffness
    }

    pub fn quadrature(&self) -> &QuadratureRule {
        &self.rule
    }

    pub fn num_dofs(&self) -> usize {
        self.mesh.num_dofs()
    }

    pub fn load(&self, g: impl Fn(Point) -> f64) -> Vec<f64> {
        assemble_load(&self.mesh, g, &self.rule)
    }

    pub fn gradient_load(&self, grad: impl Fn(Point) -> Point) -> Vec<f64> {
        assemble_gradient_load(&self.mesh, grad, &self.rule)
    }

    pub fn zero(&self) -> FeFunction<'_> {
        FeFunction {
            space: self,
            coeffs: vec![0.0; self.num_dofs()],
        }
    }

    pub fn function(&self, coeffs: Vec<f64>) -> Result<FeFunction<'_>> {
        if coeffs.len() != self.num_dofs() {
            return Err(Error::LengthMismatch {
                expected: self.num_dofs(),
                actual: coeffs.len(),
            });
        }
        Ok(FeFunction { space: self, coeffs })
    }

    /// Nodal interpolant at the interior vertices.
    pub fn interpolate(&self, g: impl Fn(Point) -> f64) -> FeFunction<'_> {
        let coeffs = (0..self.num_dofs())
            .map(|i| g(self.mesh.vertices()[self.mesh.dof_vertex(i)]))
            .collect();
        FeFunction { space: self, coeffs }
    }

    /// `P_h g`: solves `B x = ((g, φ_i))_i`.
    pub fn l2_projection(&self, g: impl Fn(Point) -> f64, opts: &SolverOptions) -> Result<FeFunction<'_>> {
        let rhs = self.load(g);
        let (coeffs, _) = spd_solve_with(&self.mass, &rhs, None, opts)?;
        Ok(FeFunction { space: self, coeffs })
    }

    /// `R_h g` from the gradient of `g ∈ H¹₀`: solves
    /// `A x = ((∇g, ∇φ_i))_i`.
    pub fn ritz_projection(&self, grad: impl Fn(Point) -> Point, opts: &SolverOptions) -> Result<FeFunction<'_>> {
        let rhs = self.gradient_load(grad);
        let (coeffs, _) = spd_solve_with(&self.stiffness, &rhs, None, opts)?;
        Ok(FeFunction { space: self, coeffs })
    }

    /// `‖∇u‖²` for coefficient vector `coeffs`.
    pub fn grad_norm_sq_of(&self, coeffs: &[f64]) -> f64 {
        self.stiffness.quad_form(coeffs)
    }

    /// `‖u‖` (L²) for coefficient vector `coeffs`.
    pub fn l2_norm_of(&self, coeffs: &[f64]) -> f64 {
        self.mass.quad_form(coeffs).max(0.0).sqrt()
    }

    fn element_values(&self, coeffs: &[f64], el: &Element) -> [f64; 3] {
        let mut vals = [0.0; 3];
        for a in 0..el.count {
            if let Some(d) = self.mesh.dof(el.vertices[a]) {
                vals[a] = coeffs[d];
            }
        }
        vals
    }

    /// `‖∇u_h − g‖` over Ω, where `g` is an exact gradient field.
    pub fn h1_seminorm_error_of(&self, coeffs: &[f64], exact_grad: impl Fn(Point) -> Point) -> f64 {
        self.h1_seminorm_error_with(coeffs, exact_grad, &self.rule)
    }

    /// As [`FeSpace::h1_seminorm_error_of`] with an explicit quadrature rule.
    pub fn h1_seminorm_error_with(
        &self,
        coeffs: &[f64],
        exact_grad: impl Fn(Point) -> Point,
        rule: &QuadratureRule,
    ) -> f64 {
        let mut sum = 0.0;
        for e in 0..self.mesh.num_elements() {
            let el = self.mesh.element(e);
            let vals = self.element_values(coeffs, &el);
            let mut gh = [0.0; 2];
            for a in 0..el.count {
                gh[0] += vals[a] * el.grads[a][0];
                gh[1] += vals[a] * el.grads[a][1];
            }
            for (bary, w) in rule.points.iter().zip(&rule.weights) {
                let g = exact_grad(el.point(bary));
                let (dx, dy) = (gh[0] - g[0], gh[1] - g[1]);
                sum += w * el.measure * (dx * dx + dy * dy);
            }
        }
        sum.sqrt()
    }

    /// `‖u_h − g‖` (L²) over Ω.
    pub fn l2_error_of(&self, coeffs: &[f64], exact: impl Fn(Point) -> f64) -> f64 {
        self.l2_error_with(coeffs, exact, &self.rule)
    }

    pub fn l2_error_with(&self, coeffs: &[f64], exact: impl Fn(Point) -> f64, rule: &QuadratureRule) -> f64 {
        let mut sum = 0.0;
        for e in 0..self.mesh.num_elements() {
            let el = self.mesh.element(e);
            let vals = self.element_values(coeffs, &el);
            for (bary, w) in rule.points.iter().zip(&rule.weights) {
                let uh: f64 = (0..el.count).map(|a| vals[a] * bary[a]).sum();
                let d = uh - exact(el.point(bary));
                sum += w * el.measure * d * d;
            }
        }
        sum.sqrt()
    }
}

/// Element of the P1 space: coefficients over the interior vertices.
#[derive(Debug, Clone)]
pub struct FeFunction<'a> {
    space: &'a FeSpace,
    coeffs: Vec<f64>,
}

impl<'a> FeFunction<'a> {
    pub fn space(&self) -> &'a FeSpace {
        self.space
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    /// `l(u) = ‖∇u‖² = cᵀ A c`.
    pub fn grad_norm_sq(&self) -> f64 {
        self.space.grad_norm_sq_of(&self.coeffs)
    }

    pub fn h1_seminorm_error(&self, exact_grad: impl Fn(Point) -> Point) -> f64 {
        self.space.h1_seminorm_error_of(&self.coeffs, exact_grad)
    }

    pub fn l2_error(&self, exact: impl Fn(Point) -> f64) -> f64 {
        self.space.l2_error_of(&self.coeffs, exact)
    }

    /// `(∇u, ∇w)` for two functions on the same space.
    pub fn grad_inner(&self, other: &FeFunction<'_>) -> Result<f64> {
        if !std::ptr::eq(self.space, other.space) {
            return Err(Error::MeshMismatch);
        }
        Ok(self.space.stiffness.bilinear(&self.coeffs, &other.coeffs))
    }

    /// `(Δ_h u, w)`, which by definition of the discrete Laplacian equals
    /// `−(∇u, ∇w)`.
    pub fn discrete_laplacian_inner(&self, other: &FeFunction<'_>) -> Result<f64> {
        self.grad_inner(other).map(|v| -v)
    }

    /// Value of the P1 interpolation at `p`, `None` outside the domain.
    pub fn value_at(&self, p: Point) -> Option<f64> {
        let mesh = self.space.mesh();
        let (e, bary) = mesh.locate(p)?;
        let el = mesh.element(e);
        let vals = self.space.element_values(&self.coeffs, &el);
        Some((0..el.count).map(|a| vals[a] * bary[a]).sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn space_1d(a: f64, b: f64, ms: usize) -> FeSpace {
        FeSpace::new(SpatialMesh::interval(a, b, ms).unwrap()).unwrap()
    }

    #[test]
    fn one_d_rows_are_closed_form() {
        let ms = 8;
        let s = space_1d(0.0, 2.0, ms);
        let h = 2.0 / ms as f64;
        for i in 1..s.num_dofs() - 1 {
            assert!((s.mass().get(i, i - 1) - h / 6.0).abs() < 1e-15);
            assert!((s.mass().get(i, i) - 4.0 * h / 6.0).abs() < 1e-15);
            assert!((s.mass().get(i, i + 1) - h / 6.0).abs() < 1e-15);
            assert!((s.stiffness().get(i, i - 1) + 1.0 / h).abs() < 1e-12);
            assert!((s.stiffness().get(i, i) - 2.0 / h).abs() < 1e-12);
            assert!((s.stiffness().get(i, i + 1) + 1.0 / h).abs() < 1e-12);
        }
    }

    #[test]
    fn square_single_interior_node() {
        let s = FeSpace::new(SpatialMesh::unit_square(2).unwrap()).unwrap();
        assert_eq!(s.num_dofs(), 1);
        assert!((s.stiffness().get(0, 0) - 4.0).abs() < 1e-14);
        // support of the hat is the hexagon of area 6·(1/8), mass = 2·Σ|T|/12
        assert!((s.mass().get(0, 0) - 6.0 * 0.125 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn matrices_symmetric() {
        for s in [space_1d(0.0, PI, 13), FeSpace::new(SpatialMesh::unit_square(7).unwrap()).unwrap()] {
            assert!(s.mass().is_symmetric(0.0));
            assert!(s.stiffness().is_symmetric(0.0));
        }
    }

    #[test]
    fn load_of_constants_and_zero() {
        let s = space_1d(0.0, 1.0, 10);
        assert!(s.load(|_| 0.0).iter().all(|&v| v == 0.0));
        for v in s.load(|_| 1.0) {
            assert!((v - 0.1).abs() < 1e-15);
        }
    }

    #[test]
    fn load_of_sine_matches_hat_integrals() {
        // ∫ sin x φ_i on (0, π) with Ms = 4, high-precision quadrature oracle
        let s = space_1d(0.0, PI, 4);
        let expect = [0.527_393_087_579_049_5, 0.745_846_457_156_113_2, 0.527_393_087_579_049_5];
        let got = s.load(|p| p[0].sin());
        for (g, e) in got.iter().zip(expect) {
            assert!((g - e).abs() < 1e-5, "{g} vs {e}");
        }
        let fine = FeSpace::with_quadrature(SpatialMesh::interval(0.0, PI, 4).unwrap(), 7).unwrap();
        for (g, e) in fine.load(|p| p[0].sin()).iter().zip(expect) {
            assert!((g - e).abs() < 1e-12);
        }
    }

    #[test]
    fn l2_projection_idempotent_on_p1() {
        let s = FeSpace::new(SpatialMesh::unit_square(5).unwrap()).unwrap();
        let f = s.interpolate(|p| (p[0] * 3.0).sin() * p[1] * (1.0 - p[1]));
        let g = |p: Point| f.value_at(p).unwrap();
        let proj = s.l2_projection(g, &SolverOptions::default()).unwrap();
        for (a, b) in proj.coeffs().iter().zip(f.coeffs()) {
            assert!((a - b).abs() < 1e-12);
        }
        let zero = s.l2_projection(|_| 0.0, &SolverOptions::default()).unwrap();
        assert!(zero.coeffs().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn l2_projection_residual() {
        let s = space_1d(0.0, PI, 64);
        let p = s.l2_projection(|x| x[0].sin(), &SolverOptions::default()).unwrap();
        let lhs = s.mass().mul_vec(p.coeffs());
        let rhs = s.load(|x| x[0].sin());
        for (a, b) in lhs.iter().zip(&rhs) {
            assert!((a - b).abs() <= 1e-10);
        }
    }

    #[test]
    fn ritz_is_interpolant_in_one_dimension() {
        let s = FeSpace::with_quadrature(SpatialMesh::interval(0.0, PI, 20).unwrap(), 7).unwrap();
        let r = s.ritz_projection(|p| [p[0].cos(), 0.0], &SolverOptions::default()).unwrap();
        let i = s.interpolate(|p| p[0].sin());
        for (a, b) in r.coeffs().iter().zip(i.coeffs()) {
            assert!((a - b).abs() < 1e-11);
        }
    }

    #[test]
    fn ritz_reproduces_p1_functions() {
        let s = FeSpace::new(SpatialMesh::unit_square(6).unwrap()).unwrap();
        let f = s.interpolate(|p| p[0] * (1.0 - p[0]) * p[1]);
        let mesh = s.mesh();
        let grad = |p: Point| {
            let (e, _) = mesh.locate(p).unwrap();
            let el = mesh.element(e);
            let mut g = [0.0; 2];
            for a in 0..3 {
                if let Some(d) = mesh.dof(el.vertices[a]) {
                    g[0] += f.coeffs()[d] * el.grads[a][0];
                    g[1] += f.coeffs()[d] * el.grads[a][1];
                }
            }
            g
        };
        let r = s.ritz_projection(grad, &SolverOptions::default()).unwrap();
        for (a, b) in r.coeffs().iter().zip(f.coeffs()) {
            assert!((a - b).abs() < 1e-11);
        }
    }

    #[test]
    fn grad_norm_of_single_hat() {
        let s = space_1d(0.0, 1.0, 2);
        let u = s.function(vec![1.0]).unwrap();
        assert!((u.grad_norm_sq() - 4.0).abs() < 1e-14); // 2/h with h = 1/2
        assert_eq!(s.zero().grad_norm_sq(), 0.0);
        assert!(s.function(vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn grad_norm_of_sine_interpolant() {
        let s = space_1d(0.0, PI, 64);
        let u = s.interpolate(|p| p[0].sin());
        let h = PI / 64.0;
        assert!((u.grad_norm_sq() - PI / 2.0).abs() < h * h);
    }

    #[test]
    fn h1_error_of_zero_function() {
        let s = space_1d(0.0, PI, 32);
        let e = s.zero().h1_seminorm_error(|p| [p[0].cos(), 0.0]);
        assert!((e - (PI / 2.0).sqrt()).abs() < 1e-6);
    }

    #[test]
    fn h1_error_first_order_sweep() {
        let errs: Vec<f64> = [16, 32, 64, 128]
            .iter()
            .map(|&ms| {
                let s = space_1d(0.0, PI, ms);
                s.interpolate(|p| p[0].sin()).h1_seminorm_error(|p| [p[0].cos(), 0.0])
            })
            .collect();
        for w in errs.windows(2) {
            assert!(((w[0] / w[1]).log2() - 1.0).abs() < 0.02);
        }
    }

    #[test]
    fn centroid_error_rule_drops_elementwise_variation() {
        let s = FeSpace::with_quadrature(SpatialMesh::unit_square(8).unwrap(), 7).unwrap();
        let u = s.interpolate(|p| p[0] * (1.0 - p[0]) * p[1] * (1.0 - p[1]));
        let grad = |p: Point| [(1.0 - 2.0 * p[0]) * (p[1] - p[1] * p[1]), (p[0] - p[0] * p[0]) * (1.0 - 2.0 * p[1])];
        let centroid = QuadratureRule::triangle(1).unwrap();
        let full = u.h1_seminorm_error(grad);
        let coarse = s.h1_seminorm_error_with(u.coeffs(), grad, &centroid);
        assert!(coarse < full && coarse > 0.5 * full);
        assert_eq!(s.h1_seminorm_error_with(u.coeffs(), grad, s.quadrature()), full);
    }

    #[test]
    fn discrete_laplacian_identity() {
        let s = FeSpace::new(SpatialMesh::unit_square(4).unwrap()).unwrap();
        let u = s.interpolate(|p| p[0] * p[1]);
        let w = s.interpolate(|p| (p[0] - p[1]).powi(2));
        let lap = u.discrete_laplacian_inner(&w).unwrap();
        assert!((lap + s.stiffness().bilinear(u.coeffs(), w.coeffs())).abs() < 1e-15);
        let other = FeSpace::new(SpatialMesh::unit_square(4).unwrap()).unwrap();
        assert!(matches!(u.grad_inner(&other.zero()), Err(Error::MeshMismatch)));
    }
}
