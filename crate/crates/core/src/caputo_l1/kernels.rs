use super::L1Row;
use crate::error::{Error, Result};
use crate::graded_time::TimeMesh;

/// L1 rows for levels `1..=levels`, kept together for kernel construction.
#[derive(Debug, Clone)]
pub struct L1Table {
    rows: Vec<L1Row>,
}

impl L1Table {
    pub fn new(mesh: &TimeMesh, beta: f64, levels: usize) -> Result<Self> {
        let rows = (1..=levels)
            .map(|n| L1Row::new(mesh, beta, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(L1Table { rows })
    }

    pub fn levels(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, n: usize) -> &L1Row {
        &self.rows[n - 1]
    }

    /// `d_{n,k}`.
    #[inline]
    pub fn d(&self, n: usize, k: usize) -> f64 {
        self.rows[n - 1].d(k)
    }

    /// Row `n` of the complementary kernels, `out[j] = Q^{(n)}_j`.
    pub fn kernel_row(&self, n: usize) -> Result<Vec<f64>> {
        if n == 0 || n > self.levels() {
            return Err(Error::IndexOutOfRange {
                index: n,
                lo: 1,
                hi: self.levels(),
            });
        }
        let mut q = vec![0.0; n];
        q[0] = 1.0 / self.d(n, 1);
        for i in (1..n).rev() {
            let s: f64 = (i + 1..=n)
                .map(|k| (self.d(k, k - i) - self.d(k, k - i + 1)) * q[n - k])
                .sum();
            q[n - i] = s / self.d(i, 1);
        }
        Ok(q)
    }
}

/// Complementary (discrete convolution inverse) kernels `Q^{(n)}_{n−i}` of
/// the L1 coefficients, for `1 ≤ i ≤ n ≤ levels`.
///
/// They satisfy `Σ_{j=k}^{n} Q^{(n)}_{n−j} d_{j,j−k+1} = 1` for every
/// `1 ≤ k ≤ n`.
#[derive(Debug, Clone)]
pub struct KernelTriangle {
    rows: Vec<Vec<f64>>,
}

impl KernelTriangle {
    pub fn new(mesh: &TimeMesh, beta: f64, levels: usize) -> Result<Self> {
        let table = L1Table::new(mesh, beta, levels)?;
        Self::from_table(&table)
    }

    pub fn from_table(table: &L1Table) -> Result<Self> {
        let rows = (1..=table.levels())
            .map(|n| table.kernel_row(n))
            .collect::<Result<Vec<_>>>()?;
        Ok(KernelTriangle { rows })
    }

    pub fn levels(&self) -> usize {
        self.rows.len()
    }

    /// `Q^{(n)}_j`, `0 ≤ j < n`.
    pub fn q(&self, n: usize, j: usize) -> f64 {
        self.rows[n - 1][j]
    }

    pub fn row(&self, n: usize) -> &[f64] {
        &self.rows[n - 1]
    }

    /// `Σ_{i=1}^{n} Q^{(n)}_{n−i}`.
    pub fn row_sum(&self, n: usize) -> f64 {
        self.rows[n - 1].iter().sum()
    }
}

/// Row `n` of the complementary kernels on `mesh`; `out[j] = Q^{(n)}_j`.
pub fn complementary_kernels(mesh: &TimeMesh, beta: f64, n: usize) -> Result<Vec<f64>> {
    if n == 0 || n > mesh.steps() {
        return Err(Error::IndexOutOfRange {
            index: n,
            lo: 1,
            hi: mesh.steps(),
        });
    }
    L1Table::new(mesh, beta, n)?.kernel_row(n)
}
