//! Small row-major dense matrix used for verification and diagnostics.

use crate::error::{CsError, Result};

/// Largest number of entries a dense matrix may hold.
pub const DENSE_LIMIT: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(CsError::InvalidInput("dense matrix needs positive shape".into()));
        }
        if rows.checked_mul(cols).is_none_or(|len| len > DENSE_LIMIT) {
            return Err(CsError::SizeGuard { rows, cols });
        }
        Ok(DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut out = DenseMatrix::zeros(n, n)?;
        for i in 0..n {
            out.set(i, i, 1.0);
        }
        Ok(out)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut out = DenseMatrix::zeros(r, c)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(CsError::dim("dense rows", c, row.len()));
            }
            out.data[i * c..(i + 1) * c].copy_from_slice(row);
        }
        Ok(out)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Top-left `rows × cols` block.
    pub fn submatrix(&self, rows: usize, cols: usize) -> Result<Self> {
        if rows > self.rows || cols > self.cols {
            return Err(CsError::dim("submatrix", self.rows.min(self.cols), rows.max(cols)));
        }
        let mut out = DenseMatrix::zeros(rows, cols)?;
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, self.get(i, j));
            }
        }
        Ok(out)
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(CsError::dim("matmul", self.cols, other.rows));
        }
        let mut out = DenseMatrix::zeros(self.rows, other.cols)?;
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if self.cols != x.len() {
            return Err(CsError::dim("matvec", self.cols, x.len()));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn sub(&self, other: &DenseMatrix) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(CsError::dim("matrix difference", self.rows * self.cols, other.rows * other.cols));
        }
        Ok(DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    /// `AB − BA` for square matrices of equal size.
    pub fn commutator(&self, other: &DenseMatrix) -> Result<Self> {
        if self.rows != self.cols || other.rows != other.cols || self.rows != other.rows {
            return Err(CsError::dim("commutator", self.rows, other.rows));
        }
        self.matmul(other)?.sub(&other.matmul(self)?)
    }

    /// `A ⊗ B`.
    pub fn kronecker(&self, other: &DenseMatrix) -> Result<Self> {
        let mut out = DenseMatrix::zeros(self.rows * other.rows, self.cols * other.cols)?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                for p in 0..other.rows {
                    for q in 0..other.cols {
                        out.set(i * other.rows + p, j * other.cols + q, a * other.get(p, q));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn row_max_abs(&self, i: usize) -> f64 {
        self.row(i).iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }
}
