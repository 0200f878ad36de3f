//! Uniform symmetric grids on the line and on phase space, and complex
//! samples living on them.
//!
//! A one-dimensional grid with `n` points and spacing `step` has nodes
//! `x_j = (j - n/2) * step` for `j = 0..n`. Two-dimensional grids are the
//! product of a q-axis and a p-axis; samples are stored row-major with the
//! q index outermost.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Environment variable holding a grid override, e.g. `n=512,step=0.05`.
pub const GRID_ENV: &str = "MOYAL_GRID";

/// Point count of the default verification grid.
pub const DEFAULT_POINTS: usize = 256;

/// A uniform grid symmetric about the origin up to one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec1 {
    n: usize,
    step: f64,
}

impl GridSpec1 {
    pub fn new(n: usize, step: f64) -> Result<Self> {
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!("point count must be positive and even, got {n}")));
        }
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidGrid(format!("step must be positive and finite, got {step}")));
        }
        Ok(Self { n, step })
    }

    /// The grid whose discrete Fourier dual is itself: `step^2 * n = 2π`.
    ///
    /// On such a grid the partial Fourier transform is an exactly unitary
    /// matrix, and space and frequency extents coincide.
    pub fn fourier_matched(n: usize) -> Result<Self> {
        Self::new(n, (2.0 * PI / n as f64).sqrt())
    }

    /// The default verification axis: 256 Fourier-matched points
    /// (half-width ≈ 20.05).
    pub fn default_axis() -> Self {
        Self::fourier_matched(DEFAULT_POINTS).expect("default grid is valid")
    }

    /// The default axis, or the one named by `MOYAL_GRID` when set.
    pub fn from_env_or_default() -> Result<Self> {
        match std::env::var(GRID_ENV) {
            Ok(text) if !text.trim().is_empty() => text.parse(),
            _ => Ok(Self::default_axis()),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn point(&self, j: usize) -> f64 {
        (j as f64 - (self.n / 2) as f64) * self.step
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |j| self.point(j))
    }

    /// Distance from the origin to the edge of the periodic box, `n/2 * step`.
    pub fn half_width(&self) -> f64 {
        (self.n / 2) as f64 * self.step
    }

    /// True when `step^2 * n = 2π` to rounding.
    pub fn is_fourier_matched(&self) -> bool {
        ((self.step * self.step * self.n as f64) / (2.0 * PI) - 1.0).abs() < 1e-12
    }
}

impl Default for GridSpec1 {
    fn default() -> Self {
        Self::default_axis()
    }
}

impl fmt::Display for GridSpec1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={},step={}", self.n, self.step)
    }
}

/// Parses `n=256,step=0.0625`. A missing `step` selects the
/// Fourier-matched spacing for that `n`.
impl FromStr for GridSpec1 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut n = None;
        let mut step = None;
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got `{part}`")))?;
            match key.trim() {
                "n" => {
                    n = Some(
                        value
                            .trim()
                            .parse::<usize>()
                            .map_err(|e| Error::Parse(format!("bad point count `{value}`: {e}")))?,
                    )
                }
                "step" => {
                    step = Some(
                        value
                            .trim()
                            .parse::<f64>()
                            .map_err(|e| Error::Parse(format!("bad step `{value}`: {e}")))?,
                    )
                }
                other => return Err(Error::Parse(format!("unknown grid key `{other}`"))),
            }
        }
        let n = n.ok_or_else(|| Error::Parse("grid needs n=<points>".into()))?;
        match step {
            Some(step) => Self::new(n, step),
            None => Self::fourier_matched(n),
        }
    }
}

/// Complex samples on a [`GridSpec1`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction1 {
    spec: GridSpec1,
    values: Vec<Complex64>,
}

impl GridFunction1 {
    pub fn new(spec: GridSpec1, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != spec.n() {
            return Err(Error::GridMismatch(format!("expected {} samples, got {}", spec.n(), values.len())));
        }
        Ok(Self { spec, values })
    }

    pub fn zeros(spec: GridSpec1) -> Self {
        Self { spec, values: vec![Complex64::new(0.0, 0.0); spec.n()] }
    }

    pub fn from_fn(spec: GridSpec1, mut f: impl FnMut(f64) -> Complex64) -> Self {
        let values = spec.points().map(&mut f).collect();
        Self { spec, values }
    }

    pub fn from_real_fn(spec: GridSpec1, mut f: impl FnMut(f64) -> f64) -> Self {
        Self::from_fn(spec, |x| Complex64::new(f(x), 0.0))
    }

    pub fn spec(&self) -> GridSpec1 {
        self.spec
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self { spec: self.spec, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest pointwise modulus of the difference. Panics on mismatched
    /// grids, which is always a caller bug.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.spec, other.spec, "comparing samples on different grids");
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// A phase-space grid: q-axis times p-axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec2 {
    pub q: GridSpec1,
    pub p: GridSpec1,
}

impl GridSpec2 {
    pub fn new(q: GridSpec1, p: GridSpec1) -> Self {
        Self { q, p }
    }

    pub fn square(axis: GridSpec1) -> Self {
        Self { q: axis, p: axis }
    }

    pub fn len(&self) -> usize {
        self.q.n() * self.p.n()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_square(&self) -> bool {
        self.q == self.p
    }

    /// Area element `step_q * step_p` of the trapezoid rule.
    pub fn cell(&self) -> f64 {
        self.q.step() * self.p.step()
    }
}

impl Default for GridSpec2 {
    fn default() -> Self {
        Self::square(GridSpec1::default())
    }
}

/// Complex samples on a [`GridSpec2`], row-major (`values[i * n_p + j]` is
/// the sample at `(q_i, p_j)`).
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction2 {
    spec: GridSpec2,
    values: Vec<Complex64>,
}

impl GridFunction2 {
    pub fn new(spec: GridSpec2, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::GridMismatch(format!(
                "expected {} samples, got {}",
                spec.len(),
                values.len()
            )));
        }
        Ok(Self { spec, values })
    }

    pub fn zeros(spec: GridSpec2) -> Self {
        Self { spec, values: vec![Complex64::new(0.0, 0.0); spec.len()] }
    }

    pub fn from_fn(spec: GridSpec2, mut f: impl FnMut(f64, f64) -> Complex64) -> Self {
        let mut values = Vec::with_capacity(spec.len());
        for i in 0..spec.q.n() {
            let q = spec.q.point(i);
            for j in 0..spec.p.n() {
                values.push(f(q, spec.p.point(j)));
            }
        }
        Self { spec, values }
    }

    pub fn from_real_fn(spec: GridSpec2, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        Self::from_fn(spec, |q, p| Complex64::new(f(q, p), 0.0))
    }

    /// The tensor product `(φ ⊗ ψ)(q, p) = φ(q) ψ(p)`.
    pub fn outer(phi: &GridFunction1, psi: &GridFunction1) -> Self {
        let spec = GridSpec2::new(phi.spec(), psi.spec());
        let mut values = Vec::with_capacity(spec.len());
        for a in phi.values() {
            values.extend(psi.values().iter().map(|b| a * b));
        }
        Self { spec, values }
    }

    pub fn spec(&self) -> GridSpec2 {
        self.spec
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.spec.p.n() + j]
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self { spec: self.spec, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.spec, other.spec, "comparing samples on different grids");
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Plain L² norm squared by the trapezoid rule, `Σ |f|² dq dp`.
    pub fn l2_norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.spec.cell()
    }

    /// Largest modulus among samples at radius `≥ half_width - step` of a
    /// square grid, relative to the overall maximum. Zero for the zero
    /// function.
    pub fn rim_ratio(&self) -> f64 {
        let peak = self.max_abs();
        if peak == 0.0 {
            return 0.0;
        }
        let radius = self.spec.q.half_width().min(self.spec.p.half_width())
            - self.spec.q.step().max(self.spec.p.step());
        let mut rim: f64 = 0.0;
        for i in 0..self.spec.q.n() {
            let q = self.spec.q.point(i);
            for j in 0..self.spec.p.n() {
                let p = self.spec.p.point(j);
                if q.hypot(p) >= radius {
                    rim = rim.max(self.at(i, j).norm());
                }
            }
        }
        rim / peak
    }
}

fn zip_grid2(
    a: &GridFunction2,
    b: &GridFunction2,
    f: impl Fn(Complex64, Complex64) -> Complex64,
) -> GridFunction2 {
    assert_eq!(a.spec, b.spec, "combining samples on different grids");
    GridFunction2 { spec: a.spec, values: a.values.iter().zip(&b.values).map(|(&x, &y)| f(x, y)).collect() }
}

impl Add for &GridFunction2 {
    type Output = GridFunction2;
    fn add(self, rhs: Self) -> GridFunction2 {
        zip_grid2(self, rhs, |x, y| x + y)
    }
}

impl Sub for &GridFunction2 {
    type Output = GridFunction2;
    fn sub(self, rhs: Self) -> GridFunction2 {
        zip_grid2(self, rhs, |x, y| x - y)
    }
}

impl Mul<Complex64> for &GridFunction2 {
    type Output = GridFunction2;
    fn mul(self, rhs: Complex64) -> GridFunction2 {
        self.map(|v| v * rhs)
    }
}

impl Mul<f64> for &GridFunction2 {
    type Output = GridFunction2;
    fn mul(self, rhs: f64) -> GridFunction2 {
        self.map(|v| v * rhs)
    }
}

impl Add for &GridFunction1 {
    type Output = GridFunction1;
    fn add(self, rhs: Self) -> GridFunction1 {
        assert_eq!(self.spec, rhs.spec, "combining samples on different grids");
        GridFunction1 {
            spec: self.spec,
            values: self.values.iter().zip(&rhs.values).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &GridFunction1 {
    type Output = GridFunction1;
    fn sub(self, rhs: Self) -> GridFunction1 {
        assert_eq!(self.spec, rhs.spec, "combining samples on different grids");
        GridFunction1 {
            spec: self.spec,
            values: self.values.iter().zip(&rhs.values).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul<Complex64> for &GridFunction1 {
    type Output = GridFunction1;
    fn mul(self, rhs: Complex64) -> GridFunction1 {
        self.map(|v| v * rhs)
    }
}

impl Mul<f64> for &GridFunction1 {
    type Output = GridFunction1;
    fn mul(self, rhs: f64) -> GridFunction1 {
        self.map(|v| v * rhs)
    }
}
