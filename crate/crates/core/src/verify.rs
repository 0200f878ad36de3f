//! The verification suite: numerical identities of the engine, each
//! measured as a residual against a tolerance.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::basis::{f_grid, h_grids, hh_grid, inner2, synthesize};
use crate::coeff::{coordinate_models, gns_state_omega, hamiltonian_model, star_coeff, CoefficientMatrix};
use crate::error::{Error, Result};
use crate::filtration::{
    bounded_bound_check, gst_norm_model, moyal_membership, trace_factorize, CoefficientModel,
};
use crate::grid::{GridFunction2, GridSpec2};
use crate::transforms::{grid_star, kernel_product, wigner_forward, wigner_inverse};
use crate::weyl::{coordinate_action_check, moyal_pairing, pairing_scale_fit, svn_check};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Basis,
    Transforms,
    Weyl,
    Class,
}

impl Suite {
    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Self::All),
            "basis" => Ok(Self::Basis),
            "transforms" => Ok(Self::Transforms),
            "weyl" => Ok(Self::Weyl),
            "class" => Ok(Self::Class),
            other => Err(Error::Parse(format!(
                "unknown suite `{other}`; expected all, basis, transforms, weyl or class"
            ))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Self::All => "all",
            Self::Basis => "basis",
            Self::Transforms => "transforms",
            Self::Weyl => "weyl",
            Self::Class => "class",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub description: String,
    pub tolerance: f64,
    /// For inequalities: the largest relative excess of the left side over
    /// the right, so a passing value is `≤ 0`.
    pub residual: f64,
    pub pass: bool,
    pub seconds: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub seed: u64,
    pub grid: String,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

impl VerifyReport {
    pub fn check(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// Checks whose identifier starts with `prefix`, e.g. `"A03"`.
    pub fn group(&self, prefix: &str) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| c.id.split('.').next() == Some(prefix)).collect()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {} (grid {}, seed {})", self.suite, self.grid, self.seed)?;
        for c in &self.checks {
            writeln!(
                f,
                "{} {:<14} residual {:>10.3e}  tol {:>8.1e}  {:>6.2}s  {}",
                if c.pass { "PASS" } else { "FAIL" },
                c.id,
                c.residual,
                c.tolerance,
                c.seconds,
                c.description
            )?;
            if let Some(note) = &c.note {
                writeln!(f, "     {note}")?;
            }
        }
        write!(f, "{}", if self.pass { "overall PASS" } else { "overall FAIL" })
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    pub grid: GridSpec2,
    pub seed: u64,
    /// Tolerance overrides keyed by check identifier.
    pub tolerances: BTreeMap<String, f64>,
}

impl VerifyOptions {
    /// Parses `ID=VALUE` overrides such as `A03.grid=1e-5`.
    pub fn parse_tolerance(&mut self, text: &str) -> Result<()> {
        let (id, value) =
            text.split_once('=').ok_or_else(|| Error::Parse(format!("expected ID=VALUE, got `{text}`")))?;
        let value: f64 =
            value.trim().parse().map_err(|_| Error::Parse(format!("bad tolerance `{value}`")))?;
        self.tolerances.insert(id.trim().to_owned(), value);
        Ok(())
    }
}

struct Runner<'a> {
    options: &'a VerifyOptions,
    results: Vec<CheckResult>,
}

impl Runner<'_> {
    /// Runs `measure` and records one result per returned
    /// `(id, description, default tolerance, residual)`.
    fn run(
        &mut self,
        measure: impl FnOnce() -> Result<Vec<(&'static str, &'static str, f64, f64)>>,
        ids: &[&'static str],
    ) {
        let start = Instant::now();
        let outcome = measure();
        let seconds = start.elapsed().as_secs_f64();
        match outcome {
            Ok(rows) => {
                for (id, description, default_tol, residual) in rows {
                    let tolerance = self.options.tolerances.get(id).copied().unwrap_or(default_tol);
                    self.results.push(CheckResult {
                        id: id.into(),
                        description: description.into(),
                        tolerance,
                        residual,
                        pass: residual <= tolerance,
                        seconds,
                        note: None,
                    });
                }
            }
            Err(e) => {
                for id in ids {
                    self.results.push(CheckResult {
                        id: (*id).into(),
                        description: String::new(),
                        tolerance: self.options.tolerances.get(*id).copied().unwrap_or(0.0),
                        residual: f64::INFINITY,
                        pass: false,
                        seconds,
                        note: Some(e.to_string()),
                    });
                }
            }
        }
    }
}

fn delta(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

fn random_matrix(order: usize, rng: &mut ChaCha8Rng) -> CoefficientMatrix {
    CoefficientMatrix::from_fn(order, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

/// 100 random matrices of orders 4–64 paired with `r ∈ {1.5, 2, 3}`.
fn trace_corpus(seed: u64) -> Vec<(CoefficientMatrix, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7ace);
    let mut out = Vec::new();
    for _ in 0..100 {
        let order = rng.gen_range(4..=64);
        let c = random_matrix(order, &mut rng);
        for r in [1.5, 2.0, 3.0] {
            out.push((c.clone(), r));
        }
    }
    out
}

/// Relative excess `lhs / rhs − 1` (or `lhs` when `rhs = 0`).
fn excess(lhs: f64, rhs: f64) -> f64 {
    if rhs > 0.0 {
        lhs / rhs - 1.0
    } else {
        lhs
    }
}

type Rows = Vec<(&'static str, &'static str, f64, f64)>;

fn orthonormality(spec: GridSpec2) -> Result<Rows> {
    let idx: Vec<(usize, usize)> = (0..=8).flat_map(|m| (0..=8).map(move |n| (m, n))).collect();
    let grids: Vec<GridFunction2> = idx.iter().map(|&(m, n)| f_grid(m, n, spec)).collect();
    let mut worst: f64 = 0.0;
    for (a, fa) in idx.iter().zip(&grids) {
        for (b, fb) in idx.iter().zip(&grids) {
            let want = delta(a.0, b.0) * delta(a.1, b.1);
            worst = worst.max((inner2(fa, fb) - want).norm());
        }
    }
    Ok(vec![("A01", "inner2(f_mn, f_kl) = δ_mk δ_nl for m, n, k, l ≤ 8", 1e-8, worst)])
}

fn basis_matching(spec: GridSpec2) -> Result<Rows> {
    let mut worst: f64 = 0.0;
    for m in 0..=8 {
        for n in 0..=8 {
            worst = worst.max(wigner_forward(&f_grid(m, n, spec))?.max_abs_diff(&hh_grid(m, n, spec)));
        }
    }
    Ok(vec![("A02", "W f_mn = h_m ⊗ h_n for m, n ≤ 8", 1e-7, worst)])
}

fn product_law_coeff() -> Result<Rows> {
    let mut exact: f64 = 0.0;
    for m in 0..=4 {
        for n in 0..=4 {
            for k in 0..=4 {
                for l in 0..=4 {
                    let got =
                        star_coeff(&CoefficientMatrix::unit(5, m, n), &CoefficientMatrix::unit(5, k, l));
                    let want = CoefficientMatrix::unit(5, m, l).scale(Complex64::new(delta(n, k), 0.0));
                    exact = exact.max(got.max_abs_diff(&want));
                }
            }
        }
    }
    Ok(vec![("A03.coeff", "E_mn ★ E_kl = δ_nk E_ml exactly, indices ≤ 4", 0.0, exact)])
}

fn product_law_grid(spec: GridSpec2) -> Result<Rows> {
    // grid_star(f, g) = W⁻¹(Wf ∘ Wg); the forward transforms are shared.
    let forward: Vec<Vec<GridFunction2>> = (0..=4)
        .map(|m| (0..=4).map(|n| wigner_forward(&f_grid(m, n, spec))).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let bases: Vec<Vec<GridFunction2>> =
        (0..=4).map(|m| (0..=4).map(|n| f_grid(m, n, spec)).collect()).collect();
    let zero = GridFunction2::zeros(spec);
    let mut grid: f64 = 0.0;
    for m in 0..=4 {
        for n in 0..=4 {
            for k in 0..=4 {
                for l in 0..=4 {
                    let got = wigner_inverse(&kernel_product(&forward[m][n], &forward[k][l])?)?;
                    let want = if n == k { &bases[m][l] } else { &zero };
                    grid = grid.max(got.max_abs_diff(want));
                }
            }
        }
    }
    Ok(vec![("A03.grid", "grid_star(f_mn, f_kl) = δ_nk f_ml, indices ≤ 4", 1e-6, grid)])
}

fn eigenrelations(spec: GridSpec2) -> Result<Rows> {
    let order = 16;
    let h = hamiltonian_model(order);
    let mut exact: f64 = 0.0;
    for m in 0..order {
        for n in 0..order {
            let e = CoefficientMatrix::unit(order, m, n);
            let left = e.scale(Complex64::new(2.0 * m as f64 + 1.0, 0.0));
            let right = e.scale(Complex64::new(2.0 * n as f64 + 1.0, 0.0));
            exact = exact.max(star_coeff(&h, &e).max_abs_diff(&left));
            exact = exact.max(star_coeff(&e, &h).max_abs_diff(&right));
        }
    }
    let wh = wigner_forward(&synthesize(&hamiltonian_model(64), spec))?;
    let mut grid: f64 = 0.0;
    for m in 0..=6 {
        for n in 0..=6 {
            let f = f_grid(m, n, spec);
            let wf = wigner_forward(&f)?;
            let left = wigner_inverse(&kernel_product(&wh, &wf)?)?;
            let right = wigner_inverse(&kernel_product(&wf, &wh)?)?;
            grid = grid.max(left.max_abs_diff(&(&f * (2.0 * m as f64 + 1.0))));
            grid = grid.max(right.max_abs_diff(&(&f * (2.0 * n as f64 + 1.0))));
        }
    }
    Ok(vec![
        ("A04.coeff", "H ★ E_mn = (2m+1) E_mn, E_mn ★ H = (2n+1) E_mn exactly", 0.0, exact),
        ("A04.grid", "the same on grids with H truncated at order 64, m, n ≤ 6", 1e-4, grid),
    ])
}

fn stone_von_neumann(spec: GridSpec2) -> Result<Rows> {
    let hs = h_grids(3, spec.q);
    let mut worst: f64 = 0.0;
    for m in 0..=3 {
        for n in 0..=3 {
            let f = f_grid(m, n, spec);
            for phi in &hs {
                for psi in &hs {
                    worst = worst.max(svn_check(&f, phi, psi)?);
                }
            }
        }
    }
    Ok(vec![("A05", "W(f × W⁻¹(φ ⊗ ψ)) = (π_s(f) φ) ⊗ ψ, f = f_mn (m, n ≤ 3), φ, ψ ∈ h_0..h_3", 1e-5, worst)])
}

fn pairing(spec: GridSpec2) -> Result<Rows> {
    let hs = h_grids(2, spec.q);
    let mut reports = Vec::new();
    for m in 0..=2 {
        for n in 0..=2 {
            let t = f_grid(m, n, spec);
            for phi in &hs {
                for psi in &hs {
                    reports.push(moyal_pairing(&t, phi, psi)?);
                }
            }
        }
    }
    let worst = reports.iter().map(|r| r.residual).fold(0.0, f64::max);
    let scale = pairing_scale_fit(&reports).map_or(f64::INFINITY, |c| (c - 1.0).norm());
    Ok(vec![
        (
            "A06.residual",
            "⟨φ | WT ψ⟩ = ½ ⟨T, W̄⁻¹(φ* ⊗ ψ)⟩ over T = f_mn (m, n ≤ 2), φ, ψ ∈ h_0..h_2",
            1e-6,
            worst,
        ),
        ("A06.scale", "least-squares scale between the two sides is 1", 1e-8, scale),
    ])
}

fn gns(spec: GridSpec2, seed: u64) -> Result<Rows> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6e5);
    let f0 = CoefficientMatrix::unit(8, 0, 0);
    let mut exact: f64 = 0.0;
    for _ in 0..100 {
        let a = random_matrix(8, &mut rng);
        let got = star_coeff(&star_coeff(&f0, &a), &f0);
        exact = exact.max(got.max_abs_diff(&f0.scale(gns_state_omega(&a))));
    }
    let g0 = f_grid(0, 0, spec);
    let mut grid: f64 = 0.0;
    for _ in 0..3 {
        let a = random_matrix(4, &mut rng);
        let got = grid_star(&grid_star(&g0, &synthesize(&a, spec))?, &g0)?;
        grid = grid.max(got.max_abs_diff(&(&g0 * gns_state_omega(&a))));
    }
    Ok(vec![
        ("A07.coeff", "E_00 ★ A ★ E_00 = ω(A) E_00 for 100 random order-8 A", 0.0, exact),
        ("A07.grid", "f_0 × A × f_0 = ω(A) f_0 on grids for random order-4 A", 1e-6, grid),
    ])
}

fn identity_norm() -> Result<Rows> {
    // Σ_{m<N} (2m+1)^{−2} plus the integral tail 1/(2(2N+1)), which
    // overshoots by at most (2N+1)^{−2}.
    let target = PI * PI / 8.0;
    let n = 1_000_000usize;
    let partial: f64 = (0..n).rev().map(|m| (2.0 * m as f64 + 1.0).powi(-2)).sum();
    let mut worst = (partial + 0.5 / (2.0 * n as f64 + 1.0) - target).abs();
    let one: CoefficientModel = "diag(one)".parse()?;
    let mut wrong = 0usize;
    for s in [-5.0, -2.0, -1.0, 0.0, 0.5, 3.0] {
        let finite = gst_norm_model(&one, s, -2.0 - s)?;
        worst = worst.max((finite.norm().unwrap_or(f64::INFINITY).powi(2) - target).abs());
        for sum in [-3.0, -2.0, -1.5, -1.0 - 1e-9, -1.0, -0.5, 0.0, 2.0] {
            let diverges = !gst_norm_model(&one, s, sum - s)?.is_finite();
            wrong += usize::from(diverges != (sum >= -1.0));
        }
    }
    Ok(vec![
        ("A08.value", "‖1‖²_{s,t} at s + t = −2 equals π²/8 (partial sums with tail bound)", 1e-10, worst),
        (
            "A08.divergence",
            "gst_norm_model(1) diverges exactly when s + t ≥ −1 (count of misses)",
            0.0,
            wrong as f64,
        ),
    ])
}

fn counterexample() -> Result<Rows> {
    let t: CoefficientModel = "sep(exp(1.0), one)".parse()?;
    let v = moyal_membership(&t)?;
    let w = moyal_membership(&t.involute())?;
    let misses = [v.in_ml, !v.in_mr, !w.in_ml, w.in_mr].iter().filter(|ok| !**ok).count();
    Ok(vec![(
        "A09",
        "sep(exp(1), one) ∈ M_L \\ M_R and its involution ∈ M_R \\ M_L (count of misses)",
        0.0,
        misses as f64,
    )])
}

fn trace_class(seed: u64) -> Result<Rows> {
    let mut residual: f64 = 0.0;
    let mut h_excess = f64::NEG_INFINITY;
    let mut trace_excess = f64::NEG_INFINITY;
    for (c, r) in trace_corpus(seed) {
        let cert = trace_factorize(&c, r)?;
        residual = residual.max(cert.residual);
        h_excess = h_excess.max(excess(cert.h_norm_sq, cert.odd_zeta));
        // The nuclear norm comes from an SVD, independent of the factors.
        trace_excess = trace_excess.max(excess(cert.trace_norm, cert.bound));
    }
    Ok(vec![
        ("A10.residual", "g ★ h = C for 100 random matrices, orders 4–64, r ∈ {1.5, 2, 3}", 1e-12, residual),
        ("A10.h", "‖h‖²_{00} ≤ oddzeta(r) (relative excess)", 0.0, h_excess),
        ("A10.trace", "‖C‖_{00,1} ≤ oddzeta(r)^{1/2} ‖C‖_{r0} (relative excess)", 0.0, trace_excess),
    ])
}

fn bounded(seed: u64) -> Result<Rows> {
    let mut rows = f64::NEG_INFINITY;
    let mut cols = f64::NEG_INFINITY;
    for (c, r) in trace_corpus(seed) {
        let rep = bounded_bound_check(&c, r)?;
        rows = rows.max(excess(rep.row_weighted, rep.bound));
        cols = cols.max(excess(rep.column_weighted, rep.bound));
    }
    Ok(vec![
        ("A11.row", "‖C‖_{−r,0} ≤ oddzeta(r)^{1/2} ‖C‖_{00,∞} (relative excess)", 0.0, rows),
        ("A11.column", "‖C‖_{0,−r} ≤ oddzeta(r)^{1/2} ‖C‖_{00,∞} (relative excess)", 0.0, cols),
    ])
}

fn coordinates(spec: GridSpec2) -> Result<Rows> {
    let mut grid_q: f64 = 0.0;
    let mut grid_p: f64 = 0.0;
    let mut ladder: f64 = 0.0;
    for m in 0..=10 {
        let r = coordinate_action_check(m, spec.q);
        grid_q = grid_q.max(r.grid_q);
        grid_p = grid_p.max(r.grid_p);
        ladder = ladder.max(r.coeff_q).max(r.coeff_p);
    }
    let order = 24;
    let (q, p) = coordinate_models(order);
    let sum = star_coeff(&q, &q).add(&star_coeff(&p, &p));
    let two_h = hamiltonian_model(order).scale(Complex64::new(2.0, 0.0));
    let interior = order - 1;
    let block = sum.truncated(interior).max_abs_diff(&two_h.truncated(interior));
    Ok(vec![
        ("A12.grid", "√2 q h_m = √m h_{m−1} + √(m+1) h_{m+1} pointwise, m ≤ 10", 1e-9, grid_q),
        ("A12.momentum", "−√2 i h_m' = −i√m h_{m−1} + i√(m+1) h_{m+1} pointwise, m ≤ 10", 1e-9, grid_p),
        ("A12.ladder", "Q and P act on E_m0 by the ladder recurrences", 0.0, ladder),
        ("A12.coeff", "Q ★ Q + P ★ P = 2H on the interior block", 1e-13, block),
    ])
}

/// Runs `suite` and returns the report with checks sorted by identifier.
pub fn run_suite(suite: Suite, options: &VerifyOptions) -> VerifyReport {
    let spec = options.grid;
    let seed = options.seed;
    let mut runner = Runner { options, results: Vec::new() };
    if suite.includes(Suite::Basis) {
        runner.run(|| orthonormality(spec), &["A01"]);
        runner.run(|| coordinates(spec), &["A12.grid", "A12.momentum", "A12.ladder", "A12.coeff"]);
    }
    if suite.includes(Suite::Transforms) {
        runner.run(|| basis_matching(spec), &["A02"]);
        runner.run(product_law_coeff, &["A03.coeff"]);
        runner.run(|| product_law_grid(spec), &["A03.grid"]);
        runner.run(|| eigenrelations(spec), &["A04.coeff", "A04.grid"]);
    }
    if suite.includes(Suite::Weyl) {
        runner.run(|| stone_von_neumann(spec), &["A05"]);
        runner.run(|| pairing(spec), &["A06.residual", "A06.scale"]);
        runner.run(|| gns(spec, seed), &["A07.coeff", "A07.grid"]);
    }
    if suite.includes(Suite::Class) {
        runner.run(identity_norm, &["A08.value", "A08.divergence"]);
        runner.run(counterexample, &["A09"]);
        runner.run(|| trace_class(seed), &["A10.residual", "A10.h", "A10.trace"]);
        runner.run(|| bounded(seed), &["A11.row", "A11.column"]);
    }
    let mut checks = runner.results;
    checks.sort_by(|a, b| a.id.cmp(&b.id));
    let pass = checks.iter().all(|c| c.pass);
    VerifyReport {
        suite,
        seed,
        grid: if spec.is_square() { spec.q.to_string() } else { format!("{}×{}", spec.q, spec.p) },
        checks,
        pass,
    }
}
