//! Solvers for symmetric positive definite sparse systems.

use super::sparse::CsrMatrix;
use crate::error::{Error, Result};

/// Default relative residual target.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Half-bandwidth up to which [`SolverMethod::Auto`] factorizes directly.
pub const AUTO_BANDED_LIMIT: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverMethod {
    /// Banded Cholesky for narrow bands, conjugate gradients otherwise.
    #[default]
    Auto,
    /// Jacobi-preconditioned conjugate gradients.
    ConjugateGradient,
    /// Cholesky factorization in band storage.
    BandedCholesky,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub method: SolverMethod,
    /// Relative residual `‖b − Ax‖ / ‖b‖` required of iterative solves.
    pub tol: f64,
    /// Iteration cap for CG; `None` means `max(1000, 10·dim)`.
    pub max_iter: Option<usize>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            method: SolverMethod::Auto,
            tol: DEFAULT_TOL,
            max_iter: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveStats {
    pub method: SolverMethod,
    /// CG iterations; `0` for direct solves.
    pub iterations: usize,
    pub relative_residual: f64,
}

/// Solves `A x = b` by Jacobi-preconditioned CG to relative residual `tol`.
pub fn spd_solve(a: &CsrMatrix, rhs: &[f64], tol: f64) -> Result<Vec<f64>> {
    let opts = SolverOptions {
        method: SolverMethod::ConjugateGradient,
        tol,
        max_iter: None,
    };
    spd_solve_with(a, rhs, None, &opts).map(|(x, _)| x)
}

/// Solves `A x = b` with the method selected in `opts`, optionally starting
/// CG from `guess`.
pub fn spd_solve_with(
    a: &CsrMatrix,
    rhs: &[f64],
    guess: Option<&[f64]>,
    opts: &SolverOptions,
) -> Result<(Vec<f64>, SolveStats)> {
    if rhs.len() != a.dim() {
        return Err(Error::LengthMismatch {
            expected: a.dim(),
            actual: rhs.len(),
        });
    }
    let method = match opts.method {
        SolverMethod::Auto if a.half_bandwidth() <= AUTO_BANDED_LIMIT => SolverMethod::BandedCholesky,
        SolverMethod::Auto => SolverMethod::ConjugateGradient,
        m => m,
    };
    match method {
        SolverMethod::BandedCholesky => {
            let x = BandedCholesky::factor(a)?.solve(rhs);
            let res = relative_residual(a, &x, rhs);
            Ok((
                x,
                SolveStats {
                    method,
                    iterations: 0,
                    relative_residual: res,
                },
            ))
        }
        _ => conjugate_gradient(a, rhs, guess, opts.tol, opts.max_iter),
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn relative_residual(a: &CsrMatrix, x: &[f64], b: &[f64]) -> f64 {
    let ax = a.mul_vec(x);
    let r: f64 = ax.iter().zip(b).map(|(p, q)| (q - p) * (q - p)).sum::<f64>().sqrt();
    let nb = norm(b);
    if nb == 0.0 {
        r
    } else {
        r / nb
    }
}

fn conjugate_gradient(
    a: &CsrMatrix,
    b: &[f64],
    guess: Option<&[f64]>,
    tol: f64,
    max_iter: Option<usize>,
) -> Result<(Vec<f64>, SolveStats)> {
    let n = a.dim();
    let max_iter = max_iter.unwrap_or_else(|| (10 * n).max(1000));
    let b_norm = norm(b);
    let stats = |iterations, relative_residual| SolveStats {
        method: SolverMethod::ConjugateGradient,
        iterations,
        relative_residual,
    };
    if b_norm == 0.0 {
        return Ok((vec![0.0; n], stats(0, 0.0)));
    }
    let inv_diag: Vec<f64> = a
        .diagonal()
        .into_iter()
        .enumerate()
        .map(|(row, d)| {
            if d > 0.0 {
                Ok(1.0 / d)
            } else {
                Err(Error::NotPositiveDefinite { row, pivot: d })
            }
        })
        .collect::<Result<_>>()?;

    let mut x = match guess {
        Some(g) if g.len() == n => g.to_vec(),
        _ => vec![0.0; n],
    };
    let mut r = a.mul_vec(&x);
    for (ri, bi) in r.iter_mut().zip(b) {
        *ri = bi - *ri;
    }
    let mut res = norm(&r) / b_norm;
    if res <= tol {
        return Ok((x, stats(0, res)));
    }
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(ri, di)| ri * di).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz = dot(&r, &z);
    for it in 1..=max_iter {
        a.mul_vec_into(&p, &mut ap);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            return Err(Error::NotPositiveDefinite { row: 0, pivot: pap });
        }
        let step = rz / pap;
        for i in 0..n {
            x[i] += step * p[i];
            r[i] -= step * ap[i];
        }
        res = norm(&r) / b_norm;
        if res <= tol {
            return Ok((x, stats(it, res)));
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::SolverNotConverged {
        iterations: max_iter,
        residual: res,
    })
}

/// Cholesky factor `A = L Lᵀ` of a banded SPD matrix, stored by rows over
/// the band.
#[derive(Debug, Clone)]
pub struct BandedCholesky {
    n: usize,
    bw: usize,
    // row i, column j (i − bw ≤ j ≤ i) at i·(bw+1) + (j + bw − i)
    l: Vec<f64>,
}

impl BandedCholesky {
    pub fn factor(a: &CsrMatrix) -> Result<Self> {
        let n = a.dim();
        let bw = a.half_bandwidth();
        let width = bw + 1;
        let mut l = vec![0.0; n * width];
        for i in 0..n {
            for (j, v) in a.row(i) {
                if j <= i {
                    l[i * width + (j + bw - i)] = v;
                }
            }
        }
        for i in 0..n {
            let lo_i = i.saturating_sub(bw);
            for j in lo_i..=i {
                let lo = lo_i.max(j.saturating_sub(bw));
                let mut s = l[i * width + (j + bw - i)];
                for k in lo..j {
                    s -= l[i * width + (k + bw - i)] * l[j * width + (k + bw - j)];
                }
                if i == j {
                    if !(s > 0.0) {
                        return Err(Error::NotPositiveDefinite { row: i, pivot: s });
                    }
                    l[i * width + bw] = s.sqrt();
                } else {
                    l[i * width + (j + bw - i)] = s / l[j * width + bw];
                }
            }
        }
        Ok(BandedCholesky { n, bw, l })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let (n, bw, width) = (self.n, self.bw, self.bw + 1);
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in i.saturating_sub(bw)..i {
                s -= self.l[i * width + (k + bw - i)] * y[k];
            }
            y[i] = s / self.l[i * width + bw];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..(i + bw + 1).min(n) {
                s -= self.l[k * width + (i + bw - k)] * y[k];
            }
            y[i] = s / self.l[i * width + bw];
        }
        y
    }
}
