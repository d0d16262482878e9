use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::caputo_l1::exact_caputo_power;
use crate::error::{Error, Result};
use crate::fem_space::{Domain, Point};
use crate::graded_time::recommended_grading;
use crate::kirchhoff_solver::{InitialDatum, KirchhoffCoefficient, ProblemSpec};

/// The two separable test problems `u = (t³ + t^α) ψ(x)` with
/// `a(w) = 3 + sin w` and `T = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Example {
    /// `Ω = (0, π)`, `ψ = sin x`.
    Interval,
    /// `Ω = (0, 1)²`, `ψ = (x − x²)(y − y²)`.
    Square,
}

impl Example {
    pub fn name(self) -> &'static str {
        match self {
            Example::Interval => "ex1",
            Example::Square => "ex2",
        }
    }

    pub fn domain(self) -> Domain {
        match self {
            Example::Interval => Domain::Interval { a: 0.0, b: PI },
            Example::Square => Domain::UnitSquare,
        }
    }

    /// `ψ(p)`.
    pub fn profile(self, p: Point) -> f64 {
        match self {
            Example::Interval => p[0].sin(),
            Example::Square => (p[0] - p[0] * p[0]) * (p[1] - p[1] * p[1]),
        }
    }

    /// `∇ψ(p)`.
    pub fn profile_gradient(self, p: Point) -> Point {
        match self {
            Example::Interval => [p[0].cos(), 0.0],
            Example::Square => {
                let (x, y) = (p[0], p[1]);
                [(1.0 - 2.0 * x) * (y - y * y), (x - x * x) * (1.0 - 2.0 * y)]
            }
        }
    }

    /// `Δψ(p)`.
    pub fn profile_laplacian(self, p: Point) -> f64 {
        match self {
            Example::Interval => -p[0].sin(),
            Example::Square => -2.0 * ((p[0] - p[0] * p[0]) + (p[1] - p[1] * p[1])),
        }
    }

    /// `‖∇ψ‖²` over Ω.
    pub fn profile_grad_norm_sq(self) -> f64 {
        match self {
            Example::Interval => PI / 2.0,
            Example::Square => 1.0 / 45.0,
        }
    }
}

impl fmt::Display for Example {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Example {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ex1" => Ok(Example::Interval),
            "ex2" => Ok(Example::Square),
            other => Err(Error::invalid("example", format!("expected ex1 or ex2, got {other:?}"))),
        }
    }
}

/// A manufactured solution together with the problem whose forcing it
/// satisfies exactly.
#[derive(Debug, Clone)]
pub struct ManufacturedCase {
    example: Example,
    alpha: f64,
    coefficient: KirchhoffCoefficient,
    problem: ProblemSpec,
}

impl ManufacturedCase {
    pub fn new(example: Example, alpha: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha < 2.0) {
            return Err(Error::invalid("alpha", format!("must lie in (1, 2), got {alpha}")));
        }
        let coefficient = KirchhoffCoefficient::three_plus_sine();
        let a = coefficient.clone();
        let forcing = move |p: Point, t: f64| {
            let phi = temporal(alpha, t);
            let l = phi * phi * example.profile_grad_norm_sq();
            caputo_temporal(alpha, t) * example.profile(p) - a.eval(l) * phi * example.profile_laplacian(p)
        };
        let problem = ProblemSpec::new(
            alpha,
            1.0,
            example.domain(),
            coefficient.clone(),
            forcing,
            InitialDatum::zero(),
            InitialDatum::zero(),
        )?;
        Ok(ManufacturedCase {
            example,
            alpha,
            coefficient,
            problem,
        })
    }

    pub fn example(&self) -> Example {
        self.example
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        0.5 * self.alpha
    }

    pub fn coefficient(&self) -> &KirchhoffCoefficient {
        &self.coefficient
    }

    pub fn problem(&self) -> &ProblemSpec {
        &self.problem
    }

    /// `r = (2 − β)/β`.
    pub fn default_grading(&self) -> f64 {
        recommended_grading(self.beta()).expect("beta in (1/2, 1)")
    }

    /// `t³ + t^α`.
    pub fn temporal(&self, t: f64) -> f64 {
        temporal(self.alpha, t)
    }

    /// Caputo derivative of order α of `t³ + t^α`.
    pub fn caputo_temporal(&self, t: f64) -> f64 {
        caputo_temporal(self.alpha, t)
    }

    pub fn exact(&self, p: Point, t: f64) -> f64 {
        self.temporal(t) * self.example.profile(p)
    }

    pub fn exact_gradient(&self, p: Point, t: f64) -> Point {
        let phi = self.temporal(t);
        let g = self.example.profile_gradient(p);
        [phi * g[0], phi * g[1]]
    }

    pub fn exact_laplacian(&self, p: Point, t: f64) -> f64 {
        self.temporal(t) * self.example.profile_laplacian(p)
    }

    /// `l(u(t)) = ‖∇u(t)‖²`.
    pub fn grad_norm_sq(&self, t: f64) -> f64 {
        let phi = self.temporal(t);
        phi * phi * self.example.profile_grad_norm_sq()
    }

    pub fn forcing(&self, p: Point, t: f64) -> f64 {
        self.problem.forcing(p, t)
    }
}

fn temporal(alpha: f64, t: f64) -> f64 {
    t * t * t + t.powf(alpha)
}

fn caputo_temporal(alpha: f64, t: f64) -> f64 {
    exact_caputo_power(3.0, alpha, t).expect("valid power") + exact_caputo_power(alpha, alpha, t).expect("valid power")
}

/// Example on `(0, π)`.
pub fn example1_case(alpha: f64) -> Result<ManufacturedCase> {
    ManufacturedCase::new(Example::Interval, alpha)
}

/// Example on `(0, 1)²`.
pub fn example2_case(alpha: f64) -> Result<ManufacturedCase> {
    ManufacturedCase::new(Example::Square, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma;

    #[test]
    fn vanishes_at_start() {
        for ex in [example1_case(1.3).unwrap(), example2_case(1.9).unwrap()] {
            assert_eq!(ex.exact([0.4, 0.3], 0.0), 0.0);
            // ∂ₜ(t³ + t^α) = 3t² + α t^{α−1} → 0 like t^{α−1}
            let slope = |h: f64| ex.temporal(h) / h;
            assert!(slope(1e-8) < 0.1 * slope(1e-2));
        }
    }

    #[test]
    fn grad_norm_at_one() {
        assert!((example1_case(1.5).unwrap().grad_norm_sq(1.0) - 2.0 * PI).abs() < 1e-14);
        assert!((example2_case(1.5).unwrap().grad_norm_sq(1.0) - 4.0 / 45.0).abs() < 1e-15);
    }

    #[test]
    fn forcing_at_peak() {
        for alpha in [1.2, 1.4, 1.8] {
            let ex = example1_case(alpha).unwrap();
            let expect = gamma(4.0) / gamma(4.0 - alpha) + gamma(alpha + 1.0) + (3.0 + (2.0 * PI).sin()) * 2.0;
            assert!((ex.forcing([PI / 2.0, 0.0], 1.0) - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn square_values_and_boundary() {
        let ex = example2_case(1.5).unwrap();
        assert!((ex.exact([0.5, 0.5], 1.0) - 0.125).abs() < 1e-15);
        for s in [0.0, 0.25, 0.7, 1.0] {
            for p in [[s, 0.0], [s, 1.0], [0.0, s], [1.0, s]] {
                assert_eq!(ex.exact(p, 0.8), 0.0);
            }
        }
    }

    #[test]
    fn rejects_alpha_outside_range() {
        assert!(example1_case(1.0).is_err());
        assert!(example2_case(2.0).is_err());
        assert!(example1_case(f64::NAN).is_err());
    }

    #[test]
    fn parses_names() {
        assert_eq!("ex1".parse::<Example>().unwrap(), Example::Interval);
        assert_eq!("ex2".parse::<Example>().unwrap(), Example::Square);
        assert!("ex3".parse::<Example>().is_err());
        assert_eq!(Example::Square.to_string(), "ex2");
    }
}
