//! The Weyl correspondence: symbols acting on wavefunctions, Wigner
//! distributions of state pairs, the Moyal pairing identity, the GNS
//! projectors and the Stone–von Neumann factorization check.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{h_grid, h_grids, inner1};
use crate::coeff::{coordinate_models, star_coeff, CoefficientMatrix};
use crate::error::{Error, Result};
use crate::grid::{GridFunction1, GridFunction2, GridSpec1, GridSpec2};
use crate::transforms::{act_on_wavefunction, grid_star, wigner_bar_inverse, wigner_forward, wigner_inverse};

/// Constant of the bilinear duality `⟨A, B⟩ = (2π)^{-1} ∬ A B dq dp`.
pub const DUALITY_SCALE: f64 = 1.0 / (2.0 * PI);

/// `π_s(f)φ = Wf · φ`, the pseudodifferential operator with symbol `f`.
pub fn weyl_apply(f: &GridFunction2, phi: &GridFunction1) -> Result<GridFunction1> {
    act_on_wavefunction(&wigner_forward(f)?, phi)
}

/// The Wigner distribution `W̄⁻¹(φ* ⊗ ψ)` of a pair of states.
pub fn wigner_pair_distribution(phi: &GridFunction1, psi: &GridFunction1) -> Result<GridFunction2> {
    wigner_bar_inverse(&GridFunction2::outer(&phi.conj(), psi))
}

/// Both sides of `⟨φ | WT·ψ⟩ = ½ ⟨T, W̄⁻¹(φ* ⊗ ψ)⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairingReport {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
}

/// `⟨A, B⟩ = (2π)^{-1} Σ A B · step_q step_p`.
pub fn duality(a: &GridFunction2, b: &GridFunction2) -> Complex64 {
    assert_eq!(a.spec(), b.spec(), "duality on different grids");
    let sum: Complex64 = a.values().iter().zip(b.values()).map(|(x, y)| x * y).sum();
    sum * (DUALITY_SCALE * a.spec().cell())
}

/// Evaluates both sides of the Moyal pairing identity for a symbol `t`.
pub fn moyal_pairing(t: &GridFunction2, phi: &GridFunction1, psi: &GridFunction1) -> Result<PairingReport> {
    let lhs = inner1(phi, &weyl_apply(t, psi)?);
    let rhs = 0.5 * duality(t, &wigner_pair_distribution(phi, psi)?);
    Ok(PairingReport { lhs, rhs, residual: (lhs - rhs).norm() })
}

/// Least-squares scale `c` minimizing `Σ |lhs − c·rhs|²` over a sweep.
/// Returns `None` when every `rhs` vanishes.
pub fn pairing_scale_fit(reports: &[PairingReport]) -> Option<Complex64> {
    let num: Complex64 = reports.iter().map(|r| r.rhs.conj() * r.lhs).sum();
    let den: f64 = reports.iter().map(|r| r.rhs.norm_sqr()).sum();
    (den > 0.0).then(|| num / den)
}

/// `P(φ ⊗ ψ) = ⟨h_0 | ψ⟩ φ`, applied slice-wise: contracts the p-axis
/// against `h_0` under `inner1`.
pub fn projector_p(g: &GridFunction2) -> GridFunction1 {
    let spec = g.spec();
    let h0 = h_grid(0, spec.p);
    let np = spec.p.n();
    let values = g
        .values()
        .chunks(np)
        .map(|row| {
            let slice = GridFunction1::new(spec.p, row.to_vec()).expect("row length");
            inner1(&h0, &slice)
        })
        .collect();
    GridFunction1::new(spec.q, values).expect("q-axis length")
}

/// `Q(φ) = φ ⊗ h_0` on the square grid of `φ`.
pub fn embed_q(phi: &GridFunction1) -> GridFunction2 {
    GridFunction2::outer(phi, &h_grid(0, phi.spec()))
}

/// `max |W(f × W⁻¹(φ ⊗ ψ)) − (π_s(f)φ) ⊗ ψ|`: the left regular
/// representation, conjugated by `W`, acts as `π_s(f) ⊗ 1`.
pub fn svn_check(f: &GridFunction2, phi: &GridFunction1, psi: &GridFunction1) -> Result<f64> {
    let state = wigner_inverse(&GridFunction2::outer(phi, psi))?;
    let left = wigner_forward(&grid_star(f, &state)?)?;
    let right = GridFunction2::outer(&weyl_apply(f, phi)?, psi);
    Ok(left.max_abs_diff(&right))
}

/// `(Σ (2m+1)^{2k} |a_m|²)^{1/2}` for the Hermite expansion `Σ a_m h_m`.
pub fn wavefn_sobolev_norm(coeffs: &[Complex64], k: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .map(|(m, a)| (2.0 * m as f64 + 1.0).powf(2.0 * k) * a.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Residuals of the coordinate recurrences at index `m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoordinateResiduals {
    /// `|Q e_m − (√m e_{m−1} + √(m+1) e_{m+1})|_∞` in the coefficient algebra.
    pub coeff_q: f64,
    /// `|P e_m − (−i√m e_{m−1} + i√(m+1) e_{m+1})|_∞` in the coefficient algebra.
    pub coeff_p: f64,
    /// `max |√2 x h_m − √m h_{m−1} − √(m+1) h_{m+1}|` on the grid.
    pub grid_q: f64,
    /// `max |−√2 i h_m' − (−i√m h_{m−1} + i√(m+1) h_{m+1})|` on the grid,
    /// with `h_m'` from spectral differentiation of the samples.
    pub grid_p: f64,
}

impl CoordinateResiduals {
    pub fn max(&self) -> f64 {
        self.coeff_q.max(self.coeff_p).max(self.grid_q).max(self.grid_p)
    }
}

/// Spectral derivative of grid samples, treating them as one period of a
/// trigonometric polynomial with the Nyquist mode split evenly.
pub fn spectral_derivative(phi: &GridFunction1) -> GridFunction1 {
    let spec = phi.spec();
    let n = spec.n();
    let length = n as f64 * spec.step();
    let values = (0..n)
        .map(|i| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, v) in phi.values().iter().enumerate() {
                if i == j {
                    continue;
                }
                let d = i as f64 - j as f64;
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                let w = 0.5 * sign / (PI * d / n as f64).tan() * (2.0 * PI / length);
                acc += v * w;
            }
            acc
        })
        .collect();
    GridFunction1::new(spec, values).expect("same length")
}

/// Checks `π_s(q) = √2 q` and `π_s(p) = −√2 i d/dq` against the
/// ladder recurrences at index `m`, in coefficients and on the grid.
pub fn coordinate_action_check(m: usize, spec: GridSpec1) -> CoordinateResiduals {
    let order = m + 2;
    let (q, p) = coordinate_models(order);
    let column = CoefficientMatrix::unit(order, m, 0);
    let qe = star_coeff(&q, &column);
    let pe = star_coeff(&p, &column);
    let mut want_q = CoefficientMatrix::zeros(order);
    let mut want_p = CoefficientMatrix::zeros(order);
    let up = ((m + 1) as f64).sqrt();
    want_q.set(m + 1, 0, Complex64::new(up, 0.0));
    want_p.set(m + 1, 0, Complex64::new(0.0, up));
    if m > 0 {
        let down = (m as f64).sqrt();
        want_q.set(m - 1, 0, Complex64::new(down, 0.0));
        want_p.set(m - 1, 0, Complex64::new(0.0, -down));
    }

    let hs = h_grids(m + 1, spec);
    let zero = GridFunction1::zeros(spec);
    let lower = if m > 0 { &hs[m - 1] * (m as f64).sqrt() } else { zero.clone() };
    let upper = &hs[m + 1] * up;
    let xh = GridFunction1::from_fn(spec, |x| Complex64::new(SQRT_2 * x, 0.0))
        .values()
        .iter()
        .zip(hs[m].values())
        .map(|(a, b)| a * b)
        .collect();
    let xh = GridFunction1::new(spec, xh).expect("same length");
    let grid_q = xh.max_abs_diff(&(&lower + &upper));

    let i = Complex64::new(0.0, 1.0);
    let dh = &spectral_derivative(&hs[m]) * (-SQRT_2 * i);
    let grid_p = dh.max_abs_diff(&(&(&upper * i) - &(&lower * i)));

    CoordinateResiduals {
        coeff_q: qe.max_abs_diff(&want_q),
        coeff_p: pe.max_abs_diff(&want_p),
        grid_q,
        grid_p,
    }
}

/// Checks that `spec` is square, as the Weyl layer's helpers assume.
pub fn require_square(spec: GridSpec2) -> Result<GridSpec1> {
    if spec.is_square() {
        Ok(spec.q)
    } else {
        Err(Error::GridMismatch("Weyl layer expects identical q and p axes".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{f_grid, h_grid, hh_grid, inner2, synthesize};
    use crate::coeff::hamiltonian_model;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn grid() -> GridSpec2 {
        GridSpec2::default()
    }

    fn random_coeffs(order: usize, seed: u64) -> CoefficientMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        CoefficientMatrix::from_fn(order, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    #[test]
    fn weyl_of_basis_is_rank_one() {
        let spec = grid();
        let phi = GridFunction1::from_real_fn(spec.p, |x| (x - 0.5) * (-(x * x) / 1.5).exp());
        for &(m, n) in &[(0, 0), (2, 1), (1, 3)] {
            let out = weyl_apply(&f_grid(m, n, spec), &phi).unwrap();
            let want = &h_grid(m, spec.q) * inner1(&h_grid(n, spec.p), &phi);
            assert!(out.max_abs_diff(&want) < 1e-7);
        }
        let h0 = h_grid(0, spec.p);
        assert!(weyl_apply(&f_grid(0, 0, spec), &h0).unwrap().max_abs_diff(&h0) < 1e-7);
    }

    #[test]
    fn weyl_hamiltonian_eigenrelation() {
        let spec = grid();
        let h = synthesize(&hamiltonian_model(64), spec);
        for m in [0usize, 3, 6] {
            let hm = h_grid(m, spec.p);
            let out = weyl_apply(&h, &hm).unwrap();
            assert!(out.max_abs_diff(&(&hm * (2.0 * m as f64 + 1.0))) < 1e-4, "m={m}");
        }
    }

    #[test]
    fn coordinate_recurrences() {
        let axis = grid().q;
        for m in 0..=10 {
            let r = coordinate_action_check(m, axis);
            assert!(r.coeff_q < 1e-15 && r.coeff_p < 1e-15, "m={m} {r:?}");
            assert!(r.grid_q < 1e-9 && r.grid_p < 1e-9, "m={m} {r:?}");
        }
    }

    #[test]
    fn pair_distributions() {
        let spec = grid();
        let h = |m| h_grid(m, spec.q);
        let d00 = wigner_pair_distribution(&h(0), &h(0)).unwrap();
        assert!(d00.max_abs_diff(&f_grid(0, 0, spec)) < 1e-7);
        let d12 = wigner_pair_distribution(&h(1), &h(2)).unwrap();
        assert!(d12.max_abs_diff(&f_grid(2, 1, spec)) < 1e-7);
        let d01 = wigner_pair_distribution(&h(0), &h(1)).unwrap();
        assert!((inner2(&f_grid(1, 0, spec), &d01) - Complex64::new(1.0, 0.0)).norm() < 1e-7);
    }

    #[test]
    fn pairing_on_basis_and_linear_combination() {
        let spec = grid();
        let h = |m| h_grid(m, spec.q);
        let rep = moyal_pairing(&f_grid(1, 2, spec), &h(1), &h(2)).unwrap();
        assert!((rep.lhs - Complex64::new(1.0, 0.0)).norm() < 1e-6);
        assert!(rep.residual < 1e-6);
        let zero = moyal_pairing(&GridFunction2::zeros(spec), &h(0), &h(1)).unwrap();
        assert_eq!(zero.residual, 0.0);
        assert_eq!(zero.lhs, Complex64::new(0.0, 0.0));
        let t = &f_grid(0, 0, spec) + &f_grid(1, 1, spec);
        let rep = moyal_pairing(&t, &h(0), &h(0)).unwrap();
        assert!((rep.lhs - Complex64::new(1.0, 0.0)).norm() < 1e-6);
        assert!((rep.rhs - Complex64::new(1.0, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn projectors() {
        let spec = grid();
        let phi = GridFunction1::from_real_fn(spec.q, |x| (x + 1.0) * (-(x * x) / 2.5).exp());
        assert!(projector_p(&embed_q(&phi)).max_abs_diff(&phi) < 1e-9);
        assert!(projector_p(&hh_grid(3, 1, spec)).max_abs() < 1e-9);
        for m in [0usize, 2, 5] {
            let w = wigner_forward(&f_grid(m, 0, spec)).unwrap();
            assert!(projector_p(&w).max_abs_diff(&h_grid(m, spec.q)) < 1e-7);
        }
    }

    #[test]
    fn stone_von_neumann_cases() {
        let spec = grid();
        let h = |m| h_grid(m, spec.q);
        assert!(svn_check(&f_grid(0, 0, spec), &h(0), &h(0)).unwrap() < 1e-6);
        assert_eq!(svn_check(&GridFunction2::zeros(spec), &h(1), &h(1)).unwrap(), 0.0);
        let f = synthesize(&random_coeffs(4, 77), spec);
        assert!(svn_check(&f, &h(1), &h(2)).unwrap() < 1e-5);
    }

    #[test]
    fn sobolev_norms() {
        let mut e = vec![Complex64::new(0.0, 0.0); 5];
        e[3] = Complex64::new(1.0, 0.0);
        assert!((wavefn_sobolev_norm(&e, 1.5) - 7f64.powf(1.5)).abs() < 1e-12);
        e[3] = Complex64::new(0.0, 0.0);
        e[0] = Complex64::new(1.0, 0.0);
        assert_eq!(wavefn_sobolev_norm(&e, 4.0), 1.0);
        let a = [Complex64::new(3.0, 0.0), Complex64::new(0.0, 4.0)];
        assert_eq!(wavefn_sobolev_norm(&a, 0.0), 5.0);
    }

    #[test]
    fn homomorphism_on_wavefunctions() {
        let spec = grid();
        let a = random_coeffs(4, 41);
        let b = random_coeffs(4, 42);
        let phi = h_grid(1, spec.p);
        let lhs = weyl_apply(&synthesize(&star_coeff(&a, &b), spec), &phi).unwrap();
        let inner = weyl_apply(&synthesize(&b, spec), &phi).unwrap();
        let rhs = weyl_apply(&synthesize(&a, spec), &inner).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-5);
    }
}
