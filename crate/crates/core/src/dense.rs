//! Dense square matrices of extended-precision reals.

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::numeric::{to_decimal, BigReal};

/// Row-major dense square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<BigReal>,
}

impl Matrix {
    pub fn zeros(n: usize, prec: u32) -> Matrix {
        Matrix { n, data: vec![Float::with_val(prec, 0); n * n] }
    }

    pub fn identity(n: usize, prec: u32) -> Matrix {
        let mut m = Matrix::zeros(n, prec);
        for i in 0..n {
            m.set(i, i, Float::with_val(prec, 1));
        }
        m
    }

    /// Build from rows; panics if the rows are not square.
    pub fn from_rows(rows: Vec<Vec<BigReal>>) -> Matrix {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n, "matrix rows must be square");
            data.extend(r);
        }
        Matrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn prec(&self) -> u32 {
        self.data.first().map_or(crate::numeric::DEFAULT_PRECISION, |x| x.prec())
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigReal {
        &self.data[i * self.n + j]
    }

    #[inline]
    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut BigReal {
        &mut self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: BigReal) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigReal] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Principal submatrix on the given index list.
    pub fn select(&self, idx: &[usize]) -> Matrix {
        let rows = idx.iter().map(|&i| idx.iter().map(|&j| self.get(i, j).clone()).collect()).collect();
        Matrix::from_rows(rows)
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> BigReal {
        let mut m = Float::with_val(self.prec(), 0);
        for x in &self.data {
            let a = Float::with_val(x.prec(), x.abs_ref());
            if a > m {
                m = a;
            }
        }
        m
    }

    /// max |A_ij − A_ji| / max |A_ij|, zero for the zero matrix.
    pub fn asymmetry(&self) -> f64 {
        let scale = self.max_abs();
        if scale.is_zero() {
            return 0.0;
        }
        let mut worst = Float::with_val(self.prec(), 0);
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let d = Float::with_val(self.prec(), self.get(i, j) - self.get(j, i)).abs();
                if d > worst {
                    worst = d;
                }
            }
        }
        (worst / scale).to_f64()
    }

    /// (A + Aᵀ)/2.
    pub fn symmetrized(&self) -> Matrix {
        let mut s = self.clone();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let v = Float::with_val(self.prec(), self.get(i, j) + self.get(j, i)) / 2u32;
                s.set(i, j, v.clone());
                s.set(j, i, v);
            }
        }
        s
    }

    /// A·x.
    pub fn mul_vec(&self, x: &[BigReal]) -> Vec<BigReal> {
        let prec = self.prec();
        (0..self.n)
            .map(|i| {
                let mut acc = Float::with_val(prec, 0);
                for (a, b) in self.row(i).iter().zip(x) {
                    acc += Float::with_val(prec, a * b);
                }
                acc
            })
            .collect()
    }

    /// α·A + β·B, entrywise.
    pub fn combine(&self, alpha: &BigReal, other: &Matrix, beta: &BigReal) -> Matrix {
        assert_eq!(self.n, other.n);
        let prec = self.prec();
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| Float::with_val(prec, a * alpha) + Float::with_val(prec, b * beta))
            .collect();
        Matrix { n: self.n, data }
    }

    /// Rows of decimal strings with `digits` significant digits.
    pub fn to_decimal_rows(&self, digits: usize) -> Vec<Vec<String>> {
        (0..self.n).map(|i| self.row(i).iter().map(|x| to_decimal(x, digits)).collect()).collect()
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).iter().map(|x| x.to_f64()).collect()).collect()
    }
}

/// Serialized form: rows of decimal strings.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DecimalMatrix(pub Vec<Vec<String>>);

impl DecimalMatrix {
    pub fn from_matrix(m: &Matrix, digits: usize) -> DecimalMatrix {
        DecimalMatrix(m.to_decimal_rows(digits))
    }

    pub fn to_matrix(&self, prec: u32) -> crate::Result<Matrix> {
        let rows = self
            .0
            .iter()
            .map(|r| r.iter().map(|s| crate::numeric::parse_real(prec, s)).collect::<crate::Result<Vec<_>>>())
            .collect::<crate::Result<Vec<_>>>()?;
        for r in &rows {
            if r.len() != rows.len() {
                return Err(crate::FockError::InvalidInput("matrix rows must be square".into()));
            }
        }
        Ok(Matrix::from_rows(rows))
    }
}
