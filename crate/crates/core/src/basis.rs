//! Sampling the Hermite and twisted Hermite bases on grids, the two inner
//! products, and synthesis/analysis between grid functions and
//! coefficient matrices.
//!
//! Inner-product constants: `inner1` carries `(2√π)^{-1}` so that the
//! `h_m` are orthonormal; `inner2` carries `(4π)^{-1}` so that the `f_mn`
//! are orthonormal.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::coeff::CoefficientMatrix;
use crate::error::{Error, Result};
use crate::grid::{GridFunction1, GridFunction2, GridSpec1, GridSpec2};
use crate::special::{f_mn_eval, hermite_table, twisted_hermite_table};

/// `(2√π)^{-1}`, the `inner1` normalization.
pub const INNER1_SCALE: f64 = 0.282_094_791_773_878_14;
/// `(4π)^{-1}`, the `inner2` normalization.
pub const INNER2_SCALE: f64 = 1.0 / (4.0 * PI);

/// Samples of `h_m` on a line grid.
pub fn h_grid(m: usize, spec: GridSpec1) -> GridFunction1 {
    GridFunction1::from_real_fn(spec, |x| hermite_table(m, x)[m])
}

/// `h_0 … h_max` sampled on `spec`, sharing one recurrence per node.
pub fn h_grids(max: usize, spec: GridSpec1) -> Vec<GridFunction1> {
    let tables: Vec<Vec<f64>> = spec.points().map(|x| hermite_table(max, x)).collect();
    (0..=max)
        .map(|m| {
            let values = tables.iter().map(|t| Complex64::new(t[m], 0.0)).collect();
            GridFunction1::new(spec, values).expect("length matches grid")
        })
        .collect()
}

/// The tensor sample grid `h_m ⊗ h_n`.
pub fn hh_grid(m: usize, n: usize, spec: GridSpec2) -> GridFunction2 {
    GridFunction2::outer(&h_grid(m, spec.q), &h_grid(n, spec.p))
}

/// Samples of `f_mn` on a phase-space grid.
pub fn f_grid(m: usize, n: usize, spec: GridSpec2) -> GridFunction2 {
    GridFunction2::from_fn(spec, |q, p| f_mn_eval(m, n, q, p))
}

/// `(2√π)^{-1} Σ conj(φ_j) ψ_j · step`.
pub fn inner1(phi: &GridFunction1, psi: &GridFunction1) -> Complex64 {
    assert_eq!(phi.spec(), psi.spec(), "inner1 on different grids");
    let sum: Complex64 = phi.values().iter().zip(psi.values()).map(|(a, b)| a.conj() * b).sum();
    sum * (INNER1_SCALE * phi.spec().step())
}

/// `(4π)^{-1} Σ conj(f) g · step_q step_p`.
pub fn inner2(f: &GridFunction2, g: &GridFunction2) -> Complex64 {
    assert_eq!(f.spec(), g.spec(), "inner2 on different grids");
    let sum: Complex64 = f.values().iter().zip(g.values()).map(|(a, b)| a.conj() * b).sum();
    sum * (INNER2_SCALE * f.spec().cell())
}

/// `Σ c_mn f_mn` evaluated pointwise. Diagonals `m − n = k` with no
/// nonzero coefficient are skipped.
pub fn synthesize(coeffs: &CoefficientMatrix, spec: GridSpec2) -> GridFunction2 {
    let order = coeffs.order();
    if order == 0 {
        return GridFunction2::zeros(spec);
    }
    let zero = Complex64::new(0.0, 0.0);
    let empty: Vec<bool> = (0..2 * order - 1)
        .map(|slot| {
            let k = slot as isize - (order as isize - 1);
            (0..order).all(|m| {
                let n = m as isize - k;
                n < 0 || n >= order as isize || coeffs.get(m, n as usize) == zero
            })
        })
        .collect();
    let flat = coeffs.to_row_major();
    GridFunction2::from_fn(spec, |q, p| {
        let table = twisted_hermite_table(order, q, p, |k| empty[(k + order as isize - 1) as usize]);
        table.iter().zip(&flat).map(|(f, c)| f * c).sum()
    })
}

/// Half-width needed before `analyze` trusts quadrature at `order`:
/// `√(2(2N+1)) + 4`.
pub fn analyze_min_half_width(order: usize) -> f64 {
    (2.0 * (2.0 * order as f64 + 1.0)).sqrt() + 4.0
}

/// Coefficients `c_mn = inner2(f_mn, f)` for `m, n < order`.
///
/// Fails with [`Error::GridTooSmall`] unless both half-widths exceed
/// [`analyze_min_half_width`].
pub fn analyze(f: &GridFunction2, order: usize) -> Result<CoefficientMatrix> {
    let spec = f.spec();
    let need = analyze_min_half_width(order);
    let have = spec.q.half_width().min(spec.p.half_width());
    if have < need {
        return Err(Error::GridTooSmall {
            reason: format!("analysis at order {order} needs half-width {need:.3}, grid has {have:.3}"),
        });
    }
    let mut acc = vec![Complex64::new(0.0, 0.0); order * order];
    for i in 0..spec.q.n() {
        let q = spec.q.point(i);
        for j in 0..spec.p.n() {
            let value = f.at(i, j);
            if value == Complex64::new(0.0, 0.0) {
                continue;
            }
            let table = twisted_hermite_table(order, q, spec.p.point(j), |_| false);
            for (slot, basis) in acc.iter_mut().zip(&table) {
                *slot += basis.conj() * value;
            }
        }
    }
    let scale = INNER2_SCALE * spec.cell();
    for v in &mut acc {
        *v *= scale;
    }
    Ok(CoefficientMatrix::from_row_major(order, &acc).expect("order² entries"))
}
