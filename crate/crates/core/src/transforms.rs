//! Grid realizations of the partial Fourier transform `Φ`, the rotation
//! `R`, the Wigner transformation `W = RΦ⁻¹` and its relatives, the kernel
//! product and the grid star product.
//!
//! `Φ` acts on the second (p) axis:
//! `(Φf)(x, y) = (2π)^{-1/2} ∫ f(x, z) e^{-iyz} dz`, evaluated at the grid's
//! own nodes by a direct oscillatory sum. On a Fourier-matched grid
//! (`step² n = 2π`) that sum is an exactly unitary matrix.
//!
//! `R` is `(Rf)(x, y) = f((x+y)/√2, (x−y)/√2)`, a reflection with `R² = 1`.
//! The rotated points `((j+k−n) h/√2, (j−k) h/√2)` all lie on the lattice
//! of spacing `h/√2`, so band-limited resampling is separable: each axis is
//! resampled with the periodic sinc kernel of the trigonometric
//! interpolant, then the samples are gathered.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::basis::INNER1_SCALE;
use crate::dense::CMat;
use crate::error::{Error, Result};
use crate::grid::{GridFunction1, GridFunction2, GridSpec1, GridSpec2};

/// Samples at radius `≥ half_width − step` must stay below this fraction of
/// the peak modulus before a rotation is attempted.
pub const DECAY_TOLERANCE: f64 = 1e-12;

/// Rim samples below this modulus pass the decay check regardless of the
/// peak. Products that vanish exactly, such as `f_mn × f_kl` with `n ≠ k`,
/// come out as rounding noise whose rim/peak ratio is meaningless.
pub const NOISE_FLOOR: f64 = 1e-13;

/// How `R` obtains function values off the grid.
#[derive(Clone, Copy)]
pub enum ResampleMethod<'a> {
    /// Trigonometric (zero-padded Fourier) interpolation of the samples.
    BandLimited,
    /// Evaluate a closed form supplied by the caller.
    Analytic(&'a dyn Fn(f64, f64) -> Complex64),
}

impl fmt::Debug for ResampleMethod<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResampleMethod::BandLimited => f.write_str("BandLimited"),
            ResampleMethod::Analytic(_) => f.write_str("Analytic(..)"),
        }
    }
}

fn require_square(spec: GridSpec2, what: &str) -> Result<GridSpec1> {
    if spec.is_square() {
        Ok(spec.q)
    } else {
        Err(Error::GridMismatch(format!("{what} needs identical q and p axes")))
    }
}

/// Fails with `GridTooSmall` when `f` has not decayed near the rim.
pub fn check_decay(f: &GridFunction2, what: &str) -> Result<()> {
    let ratio = f.rim_ratio();
    if ratio > DECAY_TOLERANCE && ratio * f.max_abs() > NOISE_FLOOR {
        return Err(Error::GridTooSmall {
            reason: format!(
                "{what}: rim/peak ratio {ratio:.3e} exceeds {DECAY_TOLERANCE:e}; enlarge the grid"
            ),
        });
    }
    Ok(())
}

/// The `n × n` matrix `M[j, k] = e^{sign·i y_k z_j} · step/√(2π)` so that
/// `Φf = F · M` with `F` the row-major sample matrix.
fn fourier_matrix(axis: GridSpec1, sign: f64) -> CMat {
    let n = axis.n();
    let scale = axis.step() / (2.0 * PI).sqrt();
    let half = (n / 2) as i64;
    let matched = axis.is_fourier_matched();
    CMat::from_fn(n, n, |j, k| {
        let angle = if matched {
            // y_k z_j = 2π (k−n/2)(j−n/2)/n exactly; reduce the integer first.
            let prod = ((j as i64 - half) * (k as i64 - half)).rem_euclid(n as i64);
            2.0 * PI * prod as f64 / n as f64
        } else {
            axis.point(j) * axis.point(k)
        };
        Complex64::from_polar(scale, sign * angle)
    })
}

/// Partial Fourier transform along the p-axis; `inverse` flips the sign of
/// the exponent.
pub fn partial_fourier(f: &GridFunction2, inverse: bool) -> GridFunction2 {
    let spec = f.spec();
    let sign = if inverse { 1.0 } else { -1.0 };
    let m = fourier_matrix(spec.p, sign);
    let fm = CMat::from_row_major(spec.q.n(), spec.p.n(), f.values());
    let out = fm.mul(&m);
    GridFunction2::new(spec, out.to_row_major()).expect("shape preserved")
}

/// Periodic sinc kernel of the even-length trigonometric interpolant with
/// the Nyquist mode split symmetrically: `sin(nθ/2) cot(θ/2) / n`,
/// `θ = 2π t / (n h)`.
fn periodic_sinc(t: f64, axis: GridSpec1) -> f64 {
    let n = axis.n() as f64;
    let theta = 2.0 * PI * t / (n * axis.step());
    let half = 0.5 * theta;
    let s = half.sin();
    if s.abs() < 1e-14 {
        return 1.0;
    }
    (n * half).sin() * half.cos() / (s * n)
}

/// Lattice indices `a` with `|a h/√2| < half_width`, and the resampling
/// matrix onto those nodes.
struct Resampler {
    lo: i64,
    matrix: DMatrix<f64>,
}

impl Resampler {
    fn new(axis: GridSpec1) -> Self {
        let h = axis.step();
        let limit = axis.half_width();
        let fine = h * FRAC_1_SQRT_2;
        let amax = ((limit / fine).ceil() as i64) + 1;
        let nodes: Vec<i64> = (-amax..=amax).filter(|&a| (a as f64 * fine).abs() < limit).collect();
        let lo = nodes[0];
        let matrix = DMatrix::from_fn(nodes.len(), axis.n(), |r, j| {
            periodic_sinc(nodes[r] as f64 * fine - axis.point(j), axis)
        });
        Self { lo, matrix }
    }

    fn index(&self, a: i64) -> Option<usize> {
        let r = a - self.lo;
        (r >= 0 && (r as usize) < self.matrix.nrows()).then_some(r as usize)
    }
}

/// The rotation `(Rf)(x, y) = f((x+y)/√2, (x−y)/√2)`.
///
/// `BandLimited` requires a square grid and a function that has decayed to
/// [`DECAY_TOLERANCE`] of its peak at the rim; rotated points outside the
/// periodic box read as zero.
pub fn rotate45(f: &GridFunction2, method: ResampleMethod<'_>) -> Result<GridFunction2> {
    let spec = f.spec();
    let axis = require_square(spec, "rotate45")?;
    let n = axis.n();
    match method {
        ResampleMethod::Analytic(eval) => {
            Ok(GridFunction2::from_fn(spec, |x, y| eval((x + y) * FRAC_1_SQRT_2, (x - y) * FRAC_1_SQRT_2)))
        }
        ResampleMethod::BandLimited => {
            check_decay(f, "rotate45")?;
            let rs = Resampler::new(axis);
            let fm = CMat::from_row_major(n, n, f.values());
            let fine = CMat::left_real(&rs.matrix, &fm).right_real(&rs.matrix.transpose());
            let half = (n / 2) as i64;
            let mut values = Vec::with_capacity(n * n);
            for j in 0..n as i64 {
                for k in 0..n as i64 {
                    let a = (j - half) + (k - half);
                    let b = j - k;
                    let v = match (rs.index(a), rs.index(b)) {
                        (Some(ra), Some(rb)) => fine.at(ra, rb),
                        _ => Complex64::new(0.0, 0.0),
                    };
                    values.push(v);
                }
            }
            GridFunction2::new(spec, values)
        }
    }
}

/// `W = RΦ⁻¹`, mapping `f_mn` to `h_m ⊗ h_n`.
pub fn wigner_forward(f: &GridFunction2) -> Result<GridFunction2> {
    check_decay(f, "wigner_forward")?;
    rotate45(&partial_fourier(f, true), ResampleMethod::BandLimited)
}

/// `W⁻¹ = ΦR`.
pub fn wigner_inverse(g: &GridFunction2) -> Result<GridFunction2> {
    Ok(partial_fourier(&rotate45(g, ResampleMethod::BandLimited)?, false))
}

/// `W̄ = RΦ`.
pub fn wigner_bar(f: &GridFunction2) -> Result<GridFunction2> {
    check_decay(f, "wigner_bar")?;
    rotate45(&partial_fourier(f, false), ResampleMethod::BandLimited)
}

/// `W̄⁻¹ = Φ⁻¹R`.
pub fn wigner_bar_inverse(g: &GridFunction2) -> Result<GridFunction2> {
    Ok(partial_fourier(&rotate45(g, ResampleMethod::BandLimited)?, true))
}

/// `W` as the single fused integral
/// `(Wf)(x, y) = (2π)^{-1/2} ∫ f((x+y)/√2, z) e^{i(x−y)z/√2} dz`, with `f`
/// given in closed form. The z-quadrature uses the p-axis of `spec`.
///
/// The first argument `(x+y)/√2` and the frequency `(x−y)/√2` each take
/// at most `2n + 1` lattice values `a h/√2`, so the work is one
/// `(2n+1) × n × (2n+1)` product.
pub fn wigner_forward_fused(f: &dyn Fn(f64, f64) -> Complex64, spec: GridSpec2) -> Result<GridFunction2> {
    let axis = require_square(spec, "wigner_forward_fused")?;
    let n = axis.n();
    let h = axis.step();
    let fine = h * FRAC_1_SQRT_2;
    let offsets = 2 * n + 1;
    // slot s ↔ lattice index a = s − n
    let slices = CMat::from_fn(offsets, n, |s, j| {
        let u = (s as f64 - n as f64) * fine;
        f(u, axis.point(j))
    });
    let scale = h / (2.0 * PI).sqrt();
    let kernel = CMat::from_fn(n, offsets, |j, s| {
        let v = (s as f64 - n as f64) * fine;
        Complex64::from_polar(scale, v * axis.point(j))
    });
    let table = slices.mul(&kernel);
    let half = (n / 2) as i64;
    let shift = n as i64;
    let mut values = Vec::with_capacity(n * n);
    for j in 0..n as i64 {
        for k in 0..n as i64 {
            let a = (j - half) + (k - half) + shift;
            let b = j - k + shift;
            values.push(table.at(a as usize, b as usize));
        }
    }
    GridFunction2::new(spec, values)
}

/// Kernel product `(f∘g)(x, y) = (4π)^{-1/2} ∫ f(x, z) g(z, y) dz`.
pub fn kernel_product(f: &GridFunction2, g: &GridFunction2) -> Result<GridFunction2> {
    let (fs, gs) = (f.spec(), g.spec());
    if fs.p != gs.q {
        return Err(Error::GridMismatch(
            "kernel_product: p-axis of the left factor must equal q-axis of the right".into(),
        ));
    }
    let a = CMat::from_row_major(fs.q.n(), fs.p.n(), f.values());
    let b = CMat::from_row_major(gs.q.n(), gs.p.n(), g.values());
    let out = a.mul(&b).scale(INNER1_SCALE * fs.p.step());
    GridFunction2::new(GridSpec2::new(fs.q, gs.p), out.to_row_major())
}

/// `f̃(q, p) = f(p, q)`.
pub fn kernel_transpose(f: &GridFunction2) -> GridFunction2 {
    let spec = f.spec();
    let (nq, np) = (spec.q.n(), spec.p.n());
    let mut values = Vec::with_capacity(nq * np);
    for j in 0..np {
        for i in 0..nq {
            values.push(f.at(i, j));
        }
    }
    GridFunction2::new(GridSpec2::new(spec.p, spec.q), values).expect("transposed shape")
}

/// Star product on grids via intertwining, `W⁻¹(Wf ∘ Wg)`.
pub fn grid_star(f: &GridFunction2, g: &GridFunction2) -> Result<GridFunction2> {
    let kernel = kernel_product(&wigner_forward(f)?, &wigner_forward(g)?)?;
    wigner_inverse(&kernel)
}

/// Action of a kernel on a wavefunction,
/// `(f·φ)(x) = (4π)^{-1/2} ∫ f(x, y) φ(y) dy`.
pub fn act_on_wavefunction(f: &GridFunction2, phi: &GridFunction1) -> Result<GridFunction1> {
    let spec = f.spec();
    if spec.p != phi.spec() {
        return Err(Error::GridMismatch(
            "act_on_wavefunction: wavefunction grid must equal the kernel's p-axis".into(),
        ));
    }
    let np = spec.p.n();
    let scale = INNER1_SCALE * spec.p.step();
    let values = f
        .values()
        .chunks(np)
        .map(|row| row.iter().zip(phi.values()).map(|(a, b)| a * b).sum::<Complex64>() * scale)
        .collect();
    GridFunction1::new(spec.q, values)
}
