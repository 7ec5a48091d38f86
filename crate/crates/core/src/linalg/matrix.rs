use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use crate::error::{Error, Result};

/// Dense real square matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    /// Builds an `n`×`n` matrix from row-major entries. Entries must be finite.
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput(
                "matrix dimension must be at least 1".into(),
            ));
        }
        if data.len() != n * n {
            return Err(Error::InvalidInput(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "entry ({}, {}) is not finite",
                pos / n,
                pos % n
            )));
        }
        Ok(Self { n, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::InvalidInput(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Self::new(n, data)
    }

    /// Skips the finiteness check; used for intermediate results whose
    /// entries are produced by arithmetic on valid matrices.
    pub(crate) fn from_vec_unchecked(n: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), n * n);
        Self { n, data }
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_vec_unchecked(n, vec![0.0; n * n])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n);
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self[(i, i)]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut t = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::from_vec_unchecked(self.n, self.data.iter().map(|v| v * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Self::from_vec_unchecked(self.n, data)
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Self::from_vec_unchecked(self.n, data)
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                let brow = &other.data[k * n..(k + 1) * n];
                let orow = &mut out[i * n..(i + 1) * n];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Self::from_vec_unchecked(n, out)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.n, x.len(), "dimension mismatch");
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// diag(d)·M
    pub fn scale_rows(&self, d: &[f64]) -> Self {
        assert_eq!(self.n, d.len(), "dimension mismatch");
        let mut m = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                m[(i, j)] *= d[i];
            }
        }
        m
    }

    /// M·diag(d)
    pub fn scale_cols(&self, d: &[f64]) -> Self {
        assert_eq!(self.n, d.len(), "dimension mismatch");
        let mut m = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                m[(i, j)] *= d[j];
            }
        }
        m
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self[(i, j)].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest entry in absolute value.
    pub fn norm_max(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn norm_frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// max |M_ij − M_ji|
    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    /// (M + Mᵀ)/2
    pub fn symmetric_part(&self) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let avg = 0.5 * (self[(i, j)] + self[(j, i)]);
                m[(i, j)] = avg;
                m[(j, i)] = avg;
            }
        }
        m
    }

    /// Solves `self · X = rhs` by LU with partial pivoting.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let mut lu = self.data.clone();
        let mut x = rhs.data.clone();
        let scale = self.norm_max().max(f64::MIN_POSITIVE);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&a, &b| lu[a * n + col].abs().total_cmp(&lu[b * n + col].abs()))
                .unwrap_or(col);
            if lu[pivot * n + col].abs() <= 1e-300 * scale {
                return Err(Error::Precondition(
                    "matrix is singular to working precision".into(),
                ));
            }
            if pivot != col {
                for j in 0..n {
                    lu.swap(col * n + j, pivot * n + j);
                    x.swap(col * n + j, pivot * n + j);
                }
            }
            let p = lu[col * n + col];
            for r in (col + 1)..n {
                let f = lu[r * n + col] / p;
                if f == 0.0 {
                    continue;
                }
                lu[r * n + col] = f;
                for j in (col + 1)..n {
                    lu[r * n + j] -= f * lu[col * n + j];
                }
                for j in 0..n {
                    x[r * n + j] -= f * x[col * n + j];
                }
            }
        }
        for col in (0..n).rev() {
            let p = lu[col * n + col];
            for j in 0..n {
                let mut s = x[col * n + j];
                for k in (col + 1)..n {
                    s -= lu[col * n + k] * x[k * n + j];
                }
                x[col * n + j] = s / p;
            }
        }
        Ok(Self::from_vec_unchecked(n, x))
    }
}

impl Index<(usize, usize)> for SquareMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for SquareMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

impl Mul for &SquareMatrix {
    type Output = SquareMatrix;

    fn mul(self, rhs: &SquareMatrix) -> SquareMatrix {
        self.matmul(rhs)
    }
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.n).map(|i| self.row(i)))
            .finish()
    }
}
