use crate::error::{Error, Result};

/// Quadrature rule on the reference simplex, stored in barycentric
/// coordinates with weights normalized to sum to one (scale by the element
/// measure).
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

/// Default number of points per element for loads and error norms.
pub const DEFAULT_POINTS: usize = 3;

impl QuadratureRule {
    /// `points`-point Gauss-Legendre rule on an interval, `1 ≤ points ≤ 7`
    /// (exact for degree `2·points − 1`).
    pub fn interval(points: usize) -> Result<Self> {
        if !(1..=7).contains(&points) {
            return Err(Error::invalid("quad", format!("interval rules have 1..=7 points, got {points}")));
        }
        let (nodes, weights) = gauss_legendre(points);
        Ok(QuadratureRule {
            points: nodes.iter().map(|&x| {
                let s = 0.5 * (x + 1.0);
                [1.0 - s, s, 0.0]
            }).collect(),
            weights: weights.iter().map(|w| 0.5 * w).collect(),
        })
    }

    /// Symmetric triangle rules with 1, 3, 4, 6 or 7 points (degrees 1, 2,
    /// 3, 4, 5).
    pub fn triangle(points: usize) -> Result<Self> {
        const THIRD: f64 = 1.0 / 3.0;
        let mut rule = QuadratureRule { points: Vec::new(), weights: Vec::new() };
        let orbit = |a: f64, w: f64, rule: &mut QuadratureRule| {
            let b = 1.0 - 2.0 * a;
            for p in [[b, a, a], [a, b, a], [a, a, b]] {
                rule.points.push(p);
                rule.weights.push(w);
            }
        };
        match points {
            1 => {
                rule.points.push([THIRD; 3]);
                rule.weights.push(1.0);
            }
            3 => orbit(1.0 / 6.0, THIRD, &mut rule),
            4 => {
                rule.points.push([THIRD; 3]);
                rule.weights.push(-27.0 / 48.0);
                orbit(0.2, 25.0 / 48.0, &mut rule);
            }
            6 => {
                orbit(0.445_948_490_915_965, 0.223_381_589_678_011, &mut rule);
                orbit(0.091_576_213_509_771, 0.109_951_743_655_322, &mut rule);
            }
            7 => {
                rule.points.push([THIRD; 3]);
                rule.weights.push(0.225);
                orbit(0.470_142_064_105_115, 0.132_394_152_788_506, &mut rule);
                orbit(0.101_286_507_323_456, 0.125_939_180_544_827, &mut rule);
            }
            _ => {
                return Err(Error::invalid(
                    "quad",
                    format!("triangle rules have 1, 3, 4, 6 or 7 points, got {points}"),
                ))
            }
        }
        Ok(rule)
    }

    /// Rule with `points` points for elements of the given dimension.
    pub fn for_dimension(dimension: usize, points: usize) -> Result<Self> {
        match dimension {
            1 => Self::interval(points),
            2 => Self::triangle(points),
            _ => Err(Error::invalid("dimension", format!("unsupported: {dimension}"))),
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration on
/// `P_n`.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        if n == 1 {
            x = 0.0;
            dp = 1.0;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn integrate_interval(rule: &QuadratureRule, f: impl Fn(f64) -> f64) -> f64 {
        rule.points.iter().zip(&rule.weights).map(|(p, w)| w * f(p[1])).sum()
    }

    #[test]
    fn interval_rules_exact_to_design_degree() {
        for n in 1..=7 {
            let rule = QuadratureRule::interval(n).unwrap();
            assert_eq!(rule.len(), n);
            for deg in 0..2 * n {
                let got = integrate_interval(&rule, |s| s.powi(deg as i32));
                let exact = 1.0 / (deg as f64 + 1.0);
                assert!((got - exact).abs() < 1e-14, "n={n} deg={deg}: {got}");
            }
        }
        assert!(QuadratureRule::interval(0).is_err());
        assert!(QuadratureRule::interval(8).is_err());
    }

    #[test]
    fn triangle_rules_exact_to_design_degree() {
        // ∫_T λ1^i λ2^j dA / |T| = 2 i! j! / (i + j + 2)!
        let fact = |k: usize| (1..=k).product::<usize>() as f64;
        for (n, degree) in [(1, 1), (3, 2), (4, 3), (6, 4), (7, 5)] {
            let rule = QuadratureRule::triangle(n).unwrap();
            assert_eq!(rule.len(), n);
            assert!((rule.weights.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            for i in 0..=degree {
                for j in 0..=(degree - i) {
                    let got: f64 = rule
                        .points
                        .iter()
                        .zip(&rule.weights)
                        .map(|(p, w)| w * p[1].powi(i as i32) * p[2].powi(j as i32))
                        .sum();
                    let exact = 2.0 * fact(i) * fact(j) / fact(i + j + 2);
                    assert!((got - exact).abs() < 1e-12, "n={n} i={i} j={j}");
                }
            }
        }
        assert!(QuadratureRule::triangle(5).is_err());
    }
}
