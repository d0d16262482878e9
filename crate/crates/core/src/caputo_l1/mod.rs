//! L1 approximation of the Caputo derivative of order `β ∈ (0, 1)` on a
//! (possibly graded) temporal mesh.
//!
//! At level `n` the approximation is
//!
//! ```text
//!   D_N wⁿ = Σ_{k=1}^{n} d_{n,k} (wⁿ⁻ᵏ⁺¹ − wⁿ⁻ᵏ)
//!          = d_{n,1} wⁿ − d_{n,n} w⁰ + Σ_{k=1}^{n−1} (d_{n,k+1} − d_{n,k}) wⁿ⁻ᵏ
//! ```
//!
//! with `d_{n,k}` the mean of `s^(−β)/Γ(1−β)` over `[tₙ − tₙ₋ₖ₊₁, tₙ − tₙ₋ₖ]`.

mod kernels;
mod mittag_leffler;

pub use kernels::{complementary_kernels, KernelTriangle, L1Table};
pub use mittag_leffler::mittag_leffler;

use crate::error::{Error, Result};
use crate::graded_time::TimeMesh;
use crate::special::gamma;

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid("beta", format!("must lie in (0, 1), got {beta}")))
    }
}

/// The L1 coefficients `d_{n,1}, …, d_{n,n}` of one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct L1Row {
    n: usize,
    beta: f64,
    d: Vec<f64>,
}

impl L1Row {
    /// Coefficients of level `n` (`1 ≤ n ≤ N`).
    pub fn new(mesh: &TimeMesh, beta: f64, n: usize) -> Result<Self> {
        check_beta(beta)?;
        if n == 0 || n > mesh.steps() {
            return Err(Error::IndexOutOfRange {
                index: n,
                lo: 1,
                hi: mesh.steps(),
            });
        }
        let one_minus = 1.0 - beta;
        let scale = gamma(2.0 - beta);
        let t_n = mesh.t(n);
        let d = (1..=n)
            .map(|k| {
                let step = mesh.tau(n - k + 1);
                // near = tₙ − tₙ₋ₖ₊₁, far = near + τₙ₋ₖ₊₁; the difference of
                // powers is formed without cancellation.
                let near = t_n - mesh.t(n - k + 1);
                let diff = if near == 0.0 {
                    step.powf(one_minus)
                } else {
                    near.powf(one_minus) * (one_minus * (step / near).ln_1p()).exp_m1()
                };
                diff / (scale * step)
            })
            .collect();
        Ok(L1Row { n, beta, d })
    }

    pub fn level(&self) -> usize {
        self.n
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `d_{n,k}`, `1 ≤ k ≤ n`.
    #[inline]
    pub fn d(&self, k: usize) -> f64 {
        self.d[k - 1]
    }

    /// Coefficients as a slice, `coefficients()[k−1] = d_{n,k}`.
    pub fn coefficients(&self) -> &[f64] {
        &self.d
    }

    /// `D_N wⁿ` for a scalar history `w⁰, …, wⁿ`.
    pub fn apply(&self, history: &[f64]) -> Result<f64> {
        self.check_len(history.len())?;
        let n = self.n;
        Ok((1..=n)
            .map(|k| self.d(k) * (history[n - k + 1] - history[n - k]))
            .sum())
    }

    /// Componentwise `D_N wⁿ` for a history of coefficient vectors.
    pub fn apply_vectors<V: AsRef<[f64]>>(&self, history: &[V]) -> Result<Vec<f64>> {
        self.check_len(history.len())?;
        let n = self.n;
        let len = history[0].as_ref().len();
        let mut out = vec![0.0; len];
        for k in 1..=n {
            let newer = history[n - k + 1].as_ref();
            let older = history[n - k].as_ref();
            if newer.len() != len || older.len() != len {
                return Err(Error::LengthMismatch {
                    expected: len,
                    actual: newer.len().min(older.len()),
                });
            }
            let c = self.d(k);
            for ((o, a), b) in out.iter_mut().zip(newer).zip(older) {
                *o += c * (a - b);
            }
        }
        Ok(out)
    }

    /// Memory part `−d_{n,n} w⁰ + Σ_{k=1}^{n−1} (d_{n,k+1} − d_{n,k}) wⁿ⁻ᵏ`,
    /// so that `D_N wⁿ = d_{n,1} wⁿ + history_term`.
    ///
    /// `history` holds `w⁰, …, wⁿ⁻¹` (at least `n` entries; extra newer
    /// entries are ignored).
    pub fn history_term<V: AsRef<[f64]>>(&self, history: &[V], out: &mut [f64]) -> Result<()> {
        let n = self.n;
        if history.len() < n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: history.len(),
            });
        }
        let len = out.len();
        let first = history[0].as_ref();
        if first.len() != len {
            return Err(Error::LengthMismatch {
                expected: len,
                actual: first.len(),
            });
        }
        let c0 = -self.d(n);
        for (o, w) in out.iter_mut().zip(first) {
            *o = c0 * w;
        }
        for k in 1..n {
            let w = history[n - k].as_ref();
            if w.len() != len {
                return Err(Error::LengthMismatch {
                    expected: len,
                    actual: w.len(),
                });
            }
            let c = self.d(k + 1) - self.d(k);
            for (o, x) in out.iter_mut().zip(w) {
                *o += c * x;
            }
        }
        Ok(())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n + 1 {
            return Err(Error::LengthMismatch {
                expected: self.n + 1,
                actual: len,
            });
        }
        Ok(())
    }
}

/// Exact Caputo derivative of `t^σ` of order `order ∈ (0, 2)`:
/// `Γ(σ+1)/Γ(σ+1−order) · t^(σ−order)`.
///
/// Requires `σ > ⌈order⌉ − 1` (otherwise the integer-order derivative of
/// `t^σ` inside the Caputo integral is not integrable or vanishes). At
/// `t = 0` the value is `0` for `σ > order`, `Γ(σ+1)` for `σ = order`, and an
/// error for `σ < order`.
pub fn exact_caputo_power(sigma: f64, order: f64, t: f64) -> Result<f64> {
    if !(order > 0.0 && order < 2.0) || order == 1.0 {
        return Err(Error::invalid("order", format!("must lie in (0,1) ∪ (1,2), got {order}")));
    }
    let floor = if order < 1.0 { 0.0 } else { 1.0 };
    if !(sigma > floor) {
        return Err(Error::invalid(
            "sigma",
            format!("must exceed {floor} for a derivative of order {order}, got {sigma}"),
        ));
    }
    if !(t >= 0.0) {
        return Err(Error::invalid("t", format!("must be non-negative, got {t}")));
    }
    let coeff = gamma(sigma + 1.0) / gamma(sigma + 1.0 - order);
    if t == 0.0 {
        return if sigma > order {
            Ok(0.0)
        } else if sigma == order {
            Ok(coeff)
        } else {
            Err(Error::invalid("t", "Caputo derivative of t^sigma is singular at t = 0"))
        };
    }
    Ok(coeff * t.powf(sigma - order))
}

/// One row of a [`truncation_study`].
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationRow {
    pub steps: usize,
    /// `max_{1≤n≤N} tₙ^β |D_N wⁿ − D^β w(tₙ)|`.
    pub weighted_error: f64,
    /// `log₂(E_N / E_{2N})` against the next row, if any.
    pub order: Option<f64>,
}

/// L1 truncation error for `w(t) = t^σ` on `[0, 1]` with grading `r`.
///
/// The pointwise error is weighted by `tₙ^β`, which removes the `tₙ^(−β)`
/// blow-up of the local error near `t = 0` and exposes the global rate
/// `N^(−min{2−β, rσ})`.
pub fn truncation_study(beta: f64, sigma: f64, steps: &[usize], grading: f64) -> Result<Vec<TruncationRow>> {
    check_beta(beta)?;
    let mut rows = Vec::with_capacity(steps.len());
    for &n_steps in steps {
        let mesh = TimeMesh::graded(1.0, n_steps, grading)?;
        let w: Vec<f64> = mesh.nodes().iter().map(|t| t.powf(sigma)).collect();
        let mut worst = 0.0f64;
        for n in 1..=n_steps {
            let row = L1Row::new(&mesh, beta, n)?;
            let approx = row.apply(&w[..=n])?;
            let exact = exact_caputo_power(sigma, beta, mesh.t(n))?;
            worst = worst.max(mesh.t(n).powf(beta) * (approx - exact).abs());
        }
        rows.push(TruncationRow {
            steps: n_steps,
            weighted_error: worst,
            order: None,
        });
    }
    for i in 0..rows.len().saturating_sub(1) {
        let ratio = rows[i].weighted_error / rows[i + 1].weighted_error;
        rows[i].order = Some(ratio.log2());
    }
    Ok(rows)
}
