use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Relative threshold on the smallest singular value for a matrix to count
/// as a group element.
pub const SINGULAR_TOL: f64 = 1e-12;

/// Dense real `d x d` matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct SquareMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    /// Build from row-major entries. Entries must be finite.
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Dimension("matrix dimension must be at least 1".into()));
        }
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: data.len() });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, data })
    }

    /// Build and additionally require invertibility.
    pub fn group_element(dim: usize, data: Vec<f64>) -> Result<Self> {
        let g = Self::new(dim, data)?;
        g.require_invertible()?;
        Ok(g)
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Dimension("rows must all have length equal to the row count".into()));
        }
        Self::new(dim, rows.iter().flat_map(|r| r.iter().copied()).collect())
    }

    pub fn identity(dim: usize) -> Self {
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = 1.0;
        }
        Self { dim, data }
    }

    pub fn diag(entries: &[f64]) -> Self {
        let dim = entries.len();
        let mut data = vec![0.0; dim * dim];
        for (i, &e) in entries.iter().enumerate() {
            data[i * dim + i] = e;
        }
        Self { dim, data }
    }

    /// Planar rotation by `theta`.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self { dim: 2, data: vec![c, -s, s, c] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim;
        let mut data = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                data[j * d + i] = self.data[i * d + j];
            }
        }
        Self { dim: d, data }
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|v| v * c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in matrix product");
        let d = self.dim;
        let mut data = vec![0.0; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..d {
                    data[i * d + j] += a * other.data[k * d + j];
                }
            }
        }
        Self { dim: d, data }
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        mul_vec_into(&self.data, self.dim, v, &mut out);
        out
    }

    /// `self^T v`.
    pub fn tr_mul_vec(&self, v: &[f64]) -> Vec<f64> {
        let d = self.dim;
        let mut out = vec![0.0; d];
        for i in 0..d {
            let vi = v[i];
            for j in 0..d {
                out[j] += self.data[i * d + j] * vi;
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::identity(self.dim), |acc, _| self.mul(&acc))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn det(&self) -> f64 {
        self.to_nalgebra().determinant()
    }

    pub fn inverse(&self) -> Result<Self> {
        self.require_invertible()?;
        let inv = self
            .to_nalgebra()
            .try_inverse()
            .ok_or(Error::SingularMatrix { smallest: 0.0, tolerance: 0.0 })?;
        Self::from_nalgebra(&inv)
    }

    /// Singular values sorted nonincreasing.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut s: Vec<f64> = self.to_nalgebra().singular_values().iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    pub fn require_invertible(&self) -> Result<()> {
        let s = self.singular_values();
        let tolerance = SINGULAR_TOL * s[0];
        let smallest = s[self.dim - 1];
        if s[0] > 0.0 && smallest > tolerance {
            Ok(())
        } else {
            Err(Error::SingularMatrix { smallest, tolerance })
        }
    }

    pub fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.data)
    }

    pub fn from_nalgebra(m: &DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Dimension("matrix is not square".into()));
        }
        let d = m.nrows();
        let mut data = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                data.push(m[(i, j)]);
            }
        }
        Self::new(d, data)
    }

    /// Max absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[f64]> = (0..self.dim).map(|i| self.row(i)).collect();
        f.debug_struct("SquareMatrix").field("dim", &self.dim).field("rows", &rows).finish()
    }
}

/// `out = A v` for a row-major `d x d` slice.
#[inline]
pub(crate) fn mul_vec_into(a: &[f64], d: usize, v: &[f64], out: &mut [f64]) {
    for i in 0..d {
        let row = &a[i * d..(i + 1) * d];
        out[i] = row.iter().zip(v).map(|(x, y)| x * y).sum();
    }
}

#[inline]
pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(SquareMatrix::new(0, vec![]), Err(Error::Dimension(_))));
        assert!(matches!(SquareMatrix::new(2, vec![1.0; 3]), Err(Error::DimensionMismatch { .. })));
        assert_eq!(SquareMatrix::new(1, vec![f64::NAN]), Err(Error::NonFinite));
        let sing = SquareMatrix::from_rows(&[&[1.0, 2.0], &[2.0, 4.0]]).unwrap();
        assert!(matches!(sing.require_invertible(), Err(Error::SingularMatrix { .. })));
    }

    #[test]
    fn products_and_inverse() {
        let g = SquareMatrix::from_rows(&[&[2.0, 1.0], &[1.0, 1.0]]).unwrap();
        let h = g.inverse().unwrap();
        assert!(g.mul(&h).max_abs_diff(&SquareMatrix::identity(2)) < 1e-14);
        assert_eq!(g.mul_vec(&[1.0, 0.0]), vec![2.0, 1.0]);
        assert_eq!(g.tr_mul_vec(&[0.0, 1.0]), vec![1.0, 1.0]);
        assert!((g.det() - 1.0).abs() < 1e-14);
        assert_eq!(g.pow(2), g.mul(&g));
    }
}
