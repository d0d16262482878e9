//! Power-law graded temporal meshes `tₙ = T (n/N)^r`.
//!
//! Grading clusters nodes near `t = 0`, where solutions of fractional
//! evolution equations are typically weakly singular.

use crate::error::{Error, Result};
use crate::special::gamma;

/// Time grid `0 = t₀ < t₁ < … < t_N = T`, usually graded.
///
/// Step sizes are stored alongside the nodes and every other module reads
/// them from here rather than re-differencing `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeMesh {
    final_time: f64,
    steps: usize,
    grading: Option<f64>,
    t: Vec<f64>,
    tau: Vec<f64>,
}

impl TimeMesh {
    /// Builds `tₙ = T (n/N)^r` for `n = 0..=N`, with the endpoints pinned to
    /// exactly `0` and `T`.
    pub fn graded(final_time: f64, steps: usize, grading: f64) -> Result<Self> {
        if !(final_time > 0.0) || !final_time.is_finite() {
            return Err(Error::invalid("T", format!("must be positive, got {final_time}")));
        }
        if steps < 2 {
            return Err(Error::invalid("N", format!("must be at least 2, got {steps}")));
        }
        if !(grading >= 1.0) || !grading.is_finite() {
            return Err(Error::invalid("r", format!("must be >= 1, got {grading}")));
        }
        let n_f = steps as f64;
        let mut t: Vec<f64> = (0..=steps)
            .map(|n| final_time * (n as f64 / n_f).powf(grading))
            .collect();
        t[0] = 0.0;
        t[steps] = final_time;
        let tau = t.windows(2).map(|w| w[1] - w[0]).collect();
        Ok(TimeMesh {
            final_time,
            steps,
            grading: Some(grading),
            t,
            tau,
        })
    }

    /// Arbitrary strictly increasing nodes starting at `0`.
    pub fn from_nodes(t: Vec<f64>) -> Result<Self> {
        if t.len() < 3 {
            return Err(Error::invalid("N", format!("must be at least 2, got {}", t.len().saturating_sub(1))));
        }
        if t[0] != 0.0 {
            return Err(Error::invalid("t", "first node must be 0"));
        }
        if t.windows(2).any(|w| !(w[1] > w[0]) || !w[1].is_finite()) {
            return Err(Error::invalid("t", "nodes must be finite and strictly increasing"));
        }
        let tau = t.windows(2).map(|w| w[1] - w[0]).collect();
        Ok(TimeMesh {
            final_time: *t.last().expect("non-empty"),
            steps: t.len() - 1,
            grading: None,
            t,
            tau,
        })
    }

    /// Uniform mesh (`r = 1`).
    pub fn uniform(final_time: f64, steps: usize) -> Result<Self> {
        Self::graded(final_time, steps, 1.0)
    }

    pub fn final_time(&self) -> f64 {
        self.final_time
    }

    /// Number of steps `N`.
    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Grading exponent, `None` for meshes built from explicit nodes.
    pub fn grading(&self) -> Option<f64> {
        self.grading
    }

    /// Node `tₙ`, `0 ≤ n ≤ N`.
    #[inline]
    pub fn t(&self, n: usize) -> f64 {
        self.t[n]
    }

    /// Step `τₙ = tₙ − tₙ₋₁`, `1 ≤ n ≤ N`.
    #[inline]
    pub fn tau(&self, n: usize) -> f64 {
        self.tau[n - 1]
    }

    pub fn nodes(&self) -> &[f64] {
        &self.t
    }

    /// All steps `τ₁..τ_N`.
    pub fn step_sizes(&self) -> &[f64] {
        &self.tau
    }

    pub fn max_step(&self) -> f64 {
        self.tau.iter().copied().fold(0.0, f64::max)
    }

    /// Weights `(w1, w2)` of the two-level extrapolation
    /// `ŵⁿ = w1·wⁿ⁻¹ + w2·wⁿ⁻²`, `2 ≤ n ≤ N`.
    ///
    /// Exact on affine functions of `t`.
    pub fn extrapolation_weights(&self, n: usize) -> Result<(f64, f64)> {
        if n < 2 || n > self.steps {
            return Err(Error::IndexOutOfRange {
                index: n,
                lo: 2,
                hi: self.steps,
            });
        }
        let prev = self.tau(n - 1);
        let cur = self.tau(n);
        Ok(((prev + cur) / prev, -cur / prev))
    }

    /// Whether `max τₙ ≤ (4 Γ(2−β) Λ)^(−1/β)`, the step restriction of the
    /// discrete fractional Grönwall inequality.
    pub fn satisfies_gronwall_step_condition(&self, beta: f64, lambda: f64) -> bool {
        gronwall_step_condition(self, beta, lambda)
    }
}

/// Grading exponent `r = (2−β)/β` that balances the L1 truncation error
/// against the initial-layer singularity.
pub fn recommended_grading(beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::invalid("beta", format!("must lie in (0, 1), got {beta}")));
    }
    Ok((2.0 - beta) / beta)
}

/// Largest step admitted by the Grönwall step restriction.
pub fn gronwall_max_step(beta: f64, lambda: f64) -> f64 {
    (4.0 * gamma(2.0 - beta) * lambda).powf(-1.0 / beta)
}

/// See [`TimeMesh::satisfies_gronwall_step_condition`].
pub fn gronwall_step_condition(mesh: &TimeMesh, beta: f64, lambda: f64) -> bool {
    mesh.max_step() <= gronwall_max_step(beta, lambda)
}
