//! Complex dense products built from real `f64` GEMMs.
//!
//! Grid transforms are matrix products of size ~`n³`; splitting into real
//! and imaginary parts lets every product run through the blocked real
//! kernel.

use nalgebra::DMatrix;
use num_complex::Complex64;

#[derive(Debug, Clone)]
pub(crate) struct CMat {
    pub re: DMatrix<f64>,
    pub im: DMatrix<f64>,
}

impl CMat {
    pub fn from_row_major(rows: usize, cols: usize, values: &[Complex64]) -> Self {
        debug_assert_eq!(values.len(), rows * cols);
        let re = DMatrix::from_fn(rows, cols, |i, j| values[i * cols + j].re);
        let im = DMatrix::from_fn(rows, cols, |i, j| values[i * cols + j].im);
        Self { re, im }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut re = DMatrix::zeros(rows, cols);
        let mut im = DMatrix::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                let v = f(i, j);
                re[(i, j)] = v.re;
                im[(i, j)] = v.im;
            }
        }
        Self { re, im }
    }

    pub fn nrows(&self) -> usize {
        self.re.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.re.ncols()
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(self.re[(i, j)], self.im[(i, j)])
    }

    pub fn to_row_major(&self) -> Vec<Complex64> {
        let (rows, cols) = (self.nrows(), self.ncols());
        let mut out = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                out.push(self.at(i, j));
            }
        }
        out
    }

    pub fn mul(&self, rhs: &CMat) -> CMat {
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        CMat { re, im }
    }

    /// `S · self` for a real `S`.
    pub fn left_real(s: &DMatrix<f64>, rhs: &CMat) -> CMat {
        CMat { re: s * &rhs.re, im: s * &rhs.im }
    }

    /// `self · S` for a real `S`.
    pub fn right_real(&self, s: &DMatrix<f64>) -> CMat {
        CMat { re: &self.re * s, im: &self.im * s }
    }

    pub fn scale(mut self, factor: f64) -> CMat {
        self.re *= factor;
        self.im *= factor;
        self
    }
}
