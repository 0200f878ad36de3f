//! The star algebra on truncated coefficient matrices.
//!
//! A [`CoefficientMatrix`] `(c_mn)` stands for the finite sum `Σ c_mn f_mn`
//! in the twisted Hermite basis. Because `f_mn × f_kl = δ_nk f_ml`, the star
//! product of two such sums is the ordinary matrix product of their
//! coefficients, and the involution `f ↦ f*` is the conjugate transpose.
//! Nothing here is approximate: every identity holds to machine rounding.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Exponent pair `(s, t)` indexing the weighted spaces `G_{s,t}`,
/// `I_{s,t}` and `B_{s,t}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightPair {
    pub s: f64,
    pub t: f64,
}

impl WeightPair {
    pub const ZERO: WeightPair = WeightPair { s: 0.0, t: 0.0 };

    pub fn new(s: f64, t: f64) -> Self {
        Self { s, t }
    }

    /// The pair with its entries exchanged; the involution maps `G_{s,t}`
    /// onto `G_{t,s}`.
    pub fn swapped(self) -> Self {
        Self { s: self.t, t: self.s }
    }
}

impl fmt::Display for WeightPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.s, self.t)
    }
}

/// Which weighted norm of a coefficient matrix to take.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NormKind {
    /// `‖·‖_{st}`: weighted Hilbert–Schmidt norm.
    Frobenius(WeightPair),
    /// `‖·‖_{st,1}`: nuclear norm of the reweighted matrix.
    Trace(WeightPair),
    /// `‖·‖_{st,∞}`: spectral norm of the reweighted matrix.
    Operator(WeightPair),
}

/// Singular values below this fraction of the largest count as zero.
pub const RANK_CUTOFF: f64 = 1e-14;

/// Truncated coefficient matrix of order `N`, entries `c_mn` for
/// `0 ≤ m, n < N`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientMatrix {
    entries: DMatrix<Complex64>,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `(2m+1)^{e}`
fn odd_weight(m: usize, e: f64) -> f64 {
    (2.0 * m as f64 + 1.0).powf(e)
}

impl CoefficientMatrix {
    pub fn zeros(order: usize) -> Self {
        Self { entries: DMatrix::zeros(order, order) }
    }

    /// The matrix unit `E_mn`, coefficient matrix of `f_mn`.
    pub fn unit(order: usize, m: usize, n: usize) -> Self {
        assert!(m < order && n < order, "unit E_{m}{n} outside order {order}");
        let mut out = Self::zeros(order);
        out.entries[(m, n)] = c(1.0, 0.0);
        out
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self { entries: DMatrix::from_fn(order, order, f) }
    }

    /// Wraps a square matrix. Panics when it is not square.
    pub fn from_matrix(entries: DMatrix<Complex64>) -> Self {
        assert_eq!(entries.nrows(), entries.ncols(), "coefficient matrices are square");
        Self { entries }
    }

    /// Builds from row-major entries; `None` when the length is not `order²`.
    pub fn from_row_major(order: usize, values: &[Complex64]) -> Option<Self> {
        (values.len() == order * order)
            .then(|| Self { entries: DMatrix::from_row_slice(order, order, values) })
    }

    pub fn to_row_major(&self) -> Vec<Complex64> {
        let n = self.order();
        let mut out = Vec::with_capacity(n * n);
        for m in 0..n {
            for k in 0..n {
                out.push(self.entries[(m, k)]);
            }
        }
        out
    }

    pub fn order(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.entries[(m, n)]
    }

    pub fn set(&mut self, m: usize, n: usize, value: Complex64) {
        self.entries[(m, n)] = value;
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// Embeds into a larger order by zero padding; a no-op when `order`
    /// does not exceed the current one.
    pub fn padded(&self, order: usize) -> Self {
        if order <= self.order() {
            return self.clone();
        }
        let mut entries = DMatrix::zeros(order, order);
        entries.view_mut((0, 0), (self.order(), self.order())).copy_from(&self.entries);
        Self { entries }
    }

    /// Upper-left `order × order` block.
    pub fn truncated(&self, order: usize) -> Self {
        let order = order.min(self.order());
        Self { entries: self.entries.view((0, 0), (order, order)).into_owned() }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self { entries: &self.entries * factor }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = pad_pair(self, other);
        Self { entries: a.entries + b.entries }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (a, b) = pad_pair(self, other);
        Self { entries: a.entries - b.entries }
    }

    /// Largest entrywise modulus of the difference, after zero padding.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let (a, b) = pad_pair(self, other);
        (a.entries - b.entries).iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Singular values of `weight_apply(self, s, t)`, descending.
    pub fn weighted_singular_values(&self, w: WeightPair) -> Vec<f64> {
        if self.order() == 0 {
            return Vec::new();
        }
        let mut sv: Vec<f64> =
            weight_apply(self, w.s, w.t).entries.singular_values().iter().copied().collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    }

    /// Number of singular values above [`RANK_CUTOFF`] times the largest.
    pub fn rank(&self) -> usize {
        let sv = self.weighted_singular_values(WeightPair::ZERO);
        match sv.first() {
            Some(&top) if top > 0.0 => sv.iter().filter(|&&x| x > RANK_CUTOFF * top).count(),
            _ => 0,
        }
    }
}

fn pad_pair(a: &CoefficientMatrix, b: &CoefficientMatrix) -> (CoefficientMatrix, CoefficientMatrix) {
    let order = a.order().max(b.order());
    (a.padded(order), b.padded(order))
}

/// Star product of the represented finite sums: the matrix product
/// `A·B`, zero padding the smaller operand.
pub fn star_coeff(a: &CoefficientMatrix, b: &CoefficientMatrix) -> CoefficientMatrix {
    let (a, b) = pad_pair(a, b);
    CoefficientMatrix { entries: a.entries * b.entries }
}

/// The involution `f ↦ f*`: conjugate transpose.
pub fn involute(a: &CoefficientMatrix) -> CoefficientMatrix {
    CoefficientMatrix { entries: a.entries.adjoint() }
}

/// `(2m+1)^{s/2} c_mn (2n+1)^{t/2}`, the coefficients of
/// `H^{×(s/2)} × A × H^{×(t/2)}`.
pub fn weight_apply(a: &CoefficientMatrix, s: f64, t: f64) -> CoefficientMatrix {
    let order = a.order();
    let rows: Vec<f64> = (0..order).map(|m| odd_weight(m, 0.5 * s)).collect();
    let cols: Vec<f64> = (0..order).map(|n| odd_weight(n, 0.5 * t)).collect();
    CoefficientMatrix::from_fn(order, |m, n| a.get(m, n) * (rows[m] * cols[n]))
}

/// Weighted Frobenius, trace or operator norm.
pub fn norm(a: &CoefficientMatrix, kind: NormKind) -> f64 {
    match kind {
        NormKind::Frobenius(w) => frobenius_sq(a, w).sqrt(),
        NormKind::Trace(w) => a.weighted_singular_values(w).iter().sum(),
        NormKind::Operator(w) => a.weighted_singular_values(w).first().copied().unwrap_or(0.0),
    }
}

/// `Σ (2m+1)^s (2n+1)^t |c_mn|²` summed directly from the entries.
pub fn frobenius_sq(a: &CoefficientMatrix, w: WeightPair) -> f64 {
    let order = a.order();
    let mut total = 0.0;
    for m in 0..order {
        let rw = odd_weight(m, w.s);
        for n in 0..order {
            total += rw * odd_weight(n, w.t) * a.get(m, n).norm_sqr();
        }
    }
    total
}

/// Coefficient matrix of the unit `1 = Σ f_nn`, truncated at order `N`.
pub fn identity_model(order: usize) -> CoefficientMatrix {
    CoefficientMatrix { entries: DMatrix::identity(order, order) }
}

/// Coefficient matrix of the harmonic-oscillator symbol `H`,
/// `diag(1, 3, 5, …)`, whose grid symbol is `(q² + p²)/2`.
pub fn hamiltonian_model(order: usize) -> CoefficientMatrix {
    CoefficientMatrix::from_fn(order, |m, n| if m == n { c(2.0 * m as f64 + 1.0, 0.0) } else { c(0.0, 0.0) })
}

/// Coefficient matrices `(Q, P)` of the coordinate symbols `q` and `p`.
///
/// `Q_{m+1,m} = Q_{m,m+1} = √(m+1)`; `P_{m+1,m} = i√(m+1)`,
/// `P_{m,m+1} = −i√(m+1)`. Both are Hermitian. Truncation only affects
/// products in the last two rows and columns.
pub fn coordinate_models(order: usize) -> (CoefficientMatrix, CoefficientMatrix) {
    let mut q = CoefficientMatrix::zeros(order);
    let mut p = CoefficientMatrix::zeros(order);
    for m in 0..order.saturating_sub(1) {
        let r = ((m + 1) as f64).sqrt();
        q.set(m + 1, m, c(r, 0.0));
        q.set(m, m + 1, c(r, 0.0));
        p.set(m + 1, m, c(0.0, r));
        p.set(m, m + 1, c(0.0, -r));
    }
    (q, p)
}

/// `(Σ ((2m+1) + (2n+1))^r |c_mn|²)^{1/2}`: the norm `⟨f*, A^r f⟩^{1/2}`
/// for `Af = H × f + f × H`, which is diagonal on the basis.
pub fn daubechies_wr_norm(a: &CoefficientMatrix, r: f64) -> f64 {
    let order = a.order();
    let mut total = 0.0;
    for m in 0..order {
        for n in 0..order {
            let eig = (2 * m + 1 + 2 * n + 1) as f64;
            total += eig.powf(r) * a.get(m, n).norm_sqr();
        }
    }
    total.sqrt()
}

/// The GNS state `ω(A) = ⟨f_0 | A⟩ = c_00`.
pub fn gns_state_omega(a: &CoefficientMatrix) -> Complex64 {
    if a.order() == 0 {
        c(0.0, 0.0)
    } else {
        a.get(0, 0)
    }
}

/// Membership in the left ideal `K = {g : g × f_0 = g}`: every column
/// except the first vanishes.
pub fn k_ideal_test(a: &CoefficientMatrix) -> bool {
    let order = a.order();
    (0..order).all(|m| (1..order).all(|n| a.get(m, n) == c(0.0, 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(order: usize, rng: &mut impl Rng) -> CoefficientMatrix {
        CoefficientMatrix::from_fn(order, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    #[test]
    fn product_law_on_units() {
        let e01 = CoefficientMatrix::unit(3, 0, 1);
        let e11 = CoefficientMatrix::unit(3, 1, 1);
        assert_eq!(star_coeff(&e01, &e11), e01);
        assert_eq!(star_coeff(&e01, &e01), CoefficientMatrix::zeros(3));
    }

    #[test]
    fn hamiltonian_eigenrelations() {
        let h = hamiltonian_model(6);
        for m in 0..6 {
            for n in 0..6 {
                let e = CoefficientMatrix::unit(6, m, n);
                assert_eq!(star_coeff(&h, &e), e.scale(c(2.0 * m as f64 + 1.0, 0.0)));
                assert_eq!(star_coeff(&e, &h), e.scale(c(2.0 * n as f64 + 1.0, 0.0)));
            }
        }
        assert_eq!(
            hamiltonian_model(3).to_row_major(),
            vec![1.0, 0.0, 0.0, 0.0, 3.0, 0.0, 0.0, 0.0, 5.0]
                .into_iter()
                .map(|x| c(x, 0.0))
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn involution_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(involute(&CoefficientMatrix::unit(2, 0, 1)), CoefficientMatrix::unit(2, 1, 0));
        let a = random(5, &mut rng);
        let b = random(5, &mut rng);
        assert_eq!(involute(&involute(&a)), a);
        let lhs = involute(&star_coeff(&a, &b));
        let rhs = star_coeff(&involute(&b), &involute(&a));
        assert!(lhs.max_abs_diff(&rhs) < 1e-14);
    }

    #[test]
    fn mixed_orders_pad() {
        let a = CoefficientMatrix::unit(2, 0, 1);
        let b = CoefficientMatrix::unit(4, 1, 3);
        let ab = star_coeff(&a, &b);
        assert_eq!(ab, CoefficientMatrix::unit(4, 0, 3));
    }

    #[test]
    fn weights() {
        let e12 = CoefficientMatrix::unit(3, 1, 2);
        assert_eq!(weight_apply(&e12, 2.0, 0.0), e12.scale(c(3.0, 0.0)));
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random(6, &mut rng);
        assert_eq!(weight_apply(&a, 0.0, 0.0), a);
        let back = weight_apply(&weight_apply(&a, 1.3, -0.7), -1.3, 0.7);
        assert!(back.max_abs_diff(&a) < 1e-14);
    }

    #[test]
    fn norm_examples() {
        let e12 = CoefficientMatrix::unit(3, 1, 2);
        assert!((norm(&e12, NormKind::Frobenius(WeightPair::new(2.0, 0.0))) - 3.0).abs() < 1e-15);
        assert!((norm(&identity_model(7), NormKind::Trace(WeightPair::ZERO)) - 7.0).abs() < 1e-12);
        let h = hamiltonian_model(3);
        assert!((norm(&h, NormKind::Operator(WeightPair::ZERO)) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn identity_norm_partial_sums() {
        let n = 4;
        let expected: f64 = (0..n).map(|k| (2.0 * k as f64 + 1.0).powi(-2)).sum();
        let got = norm(&identity_model(n), NormKind::Frobenius(WeightPair::new(-1.0, -1.0)));
        assert!((got * got - expected).abs() < 1e-15);
        let a = random(3, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(star_coeff(&identity_model(3), &a), a);
    }

    #[test]
    fn coordinates() {
        let (q, p) = coordinate_models(6);
        assert_eq!(q.get(1, 0), c(1.0, 0.0));
        assert!((q.get(2, 1).re - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(involute(&q), q);
        assert_eq!(involute(&p), p);
        let two_h = hamiltonian_model(6).scale(c(2.0, 0.0));
        let sum = star_coeff(&q, &q).add(&star_coeff(&p, &p));
        for m in 0..4 {
            for n in 0..4 {
                assert!((sum.get(m, n) - two_h.get(m, n)).norm() < 1e-13);
            }
        }
        // truncation corrupts the last diagonal entry
        assert!((sum.get(5, 5) - two_h.get(5, 5)).norm() > 1.0);
    }

    #[test]
    fn daubechies_norm() {
        let e = CoefficientMatrix::unit(5, 2, 3);
        let want = (2.0 * 2.0 + 2.0 * 3.0 + 2.0f64).powf(1.5 / 2.0);
        assert!((daubechies_wr_norm(&e, 1.5) - want).abs() < 1e-13);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let a = random(7, &mut rng);
            let f0 = norm(&a, NormKind::Frobenius(WeightPair::ZERO));
            assert!((daubechies_wr_norm(&a, 0.0) - f0).abs() < 1e-13);
            for &r in &[1.0, 1.5, 3.0] {
                let wr = daubechies_wr_norm(&a, r);
                assert!(norm(&a, NormKind::Frobenius(WeightPair::new(r, 0.0))) <= wr);
                assert!(norm(&a, NormKind::Frobenius(WeightPair::new(0.0, r))) <= wr);
            }
        }
    }

    #[test]
    fn gns_and_ideal() {
        assert_eq!(gns_state_omega(&CoefficientMatrix::unit(3, 0, 0)), c(1.0, 0.0));
        assert_eq!(gns_state_omega(&CoefficientMatrix::unit(3, 1, 1)), c(0.0, 0.0));
        assert!(k_ideal_test(&CoefficientMatrix::unit(4, 3, 0)));
        assert!(!k_ideal_test(&CoefficientMatrix::unit(4, 0, 3)));
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let e00 = CoefficientMatrix::unit(6, 0, 0);
        for _ in 0..20 {
            let a = random(6, &mut rng);
            let omega = gns_state_omega(&star_coeff(&involute(&a), &a));
            assert!(omega.re >= 0.0 && omega.im.abs() < 1e-15);
            let sandwich = star_coeff(&star_coeff(&e00, &a), &e00);
            assert_eq!(sandwich, e00.scale(gns_state_omega(&a)));
            let projected = star_coeff(&a, &e00);
            assert!(k_ideal_test(&projected));
        }
    }

    #[test]
    fn rank_cutoff() {
        let a = CoefficientMatrix::unit(4, 0, 0).add(&CoefficientMatrix::unit(4, 2, 1));
        assert_eq!(a.rank(), 2);
        assert_eq!(CoefficientMatrix::zeros(4).rank(), 0);
    }
}
