//! Scalar special-function kernels: Hermite functions, generalized Laguerre
//! polynomials, the twisted Hermite (Laguerre–Gaussian) functions and the
//! odd-zeta sums that govern all weighted-series bounds.

use std::f64::consts::SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hermite function `h_m(x) = (2^{m-1} m!)^{-1/2} H_m(x) e^{-x²/2}`.
///
/// Every `h_m` has plain L² norm² `2√π`; see [`hermite_table`] for the
/// recurrence.
pub fn hermite_fn(m: usize, x: f64) -> f64 {
    hermite_table(m, x)[m]
}

/// `h_0(x), …, h_max(x)` from the normalized three-term recurrence
/// `h_{k+1} = √(2/(k+1)) x h_k − √(k/(k+1)) h_{k−1}`, seeded at
/// `h_0 = √2 e^{−x²/2}`.
pub fn hermite_table(max: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(max + 1);
    let h0 = SQRT_2 * (-0.5 * x * x).exp();
    out.push(h0);
    if max == 0 {
        return out;
    }
    out.push(SQRT_2 * x * h0);
    for k in 1..max {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

/// Generalized Laguerre polynomial `L_n^a(x)` by the upward recurrence
/// `(k+1) L_{k+1} = (2k+1+a−x) L_k − (k+a) L_{k−1}`.
pub fn laguerre_gen(n: usize, a: usize, x: f64) -> f64 {
    let a = a as f64;
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + a - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - x) * cur - (kf + a) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `ln(m!/n!)` for `m ≥ n`, accumulated as a sum of logarithms.
fn ln_factorial_ratio(m: usize, n: usize) -> f64 {
    debug_assert!(m >= n);
    ((n + 1)..=m).map(|k| (k as f64).ln()).sum()
}

/// Twisted Hermite basis function `f_mn(q, p)`.
///
/// For `m ≥ n` this is `2(−1)^n √(n!/m!) (q−ip)^{m−n} L_n^{m−n}(q²+p²)
/// e^{−(q²+p²)/2}`; for `m < n` it is the complex conjugate of `f_nm`,
/// computed along the same floating-point path.
pub fn f_mn_eval(m: usize, n: usize, q: f64, p: f64) -> Complex64 {
    if m < n {
        return f_mn_eval(n, m, q, p).conj();
    }
    let k = m - n;
    let rho2 = q * q + p * p;
    let lag = laguerre_gen(n, k, rho2);
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let modulus = if k == 0 {
        (std::f64::consts::LN_2 - 0.5 * rho2).exp()
    } else if rho2 == 0.0 {
        return Complex64::new(0.0, 0.0);
    } else {
        (std::f64::consts::LN_2 - 0.5 * ln_factorial_ratio(m, n) + 0.5 * k as f64 * rho2.ln() - 0.5 * rho2)
            .exp()
    };
    let theta = p.atan2(q);
    Complex64::from_polar(sign * modulus * lag, -(k as f64) * theta)
}

/// All `f_mn(q, p)` with `m, n < order`, row-major (`out[m * order + n]`).
///
/// Uses one Laguerre recurrence per diagonal `k = m − n`, so the cost is
/// `O(order²)` per point. `skip_diagonal(k)` lets callers omit diagonals
/// that carry no coefficients (`k` is the signed offset `m − n`).
pub fn twisted_hermite_table(
    order: usize,
    q: f64,
    p: f64,
    skip_diagonal: impl Fn(isize) -> bool,
) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); order * order];
    let rho2 = q * q + p * p;
    let ln_rho2 = rho2.ln();
    let theta = p.atan2(q);
    for k in 0..order {
        let upper = skip_diagonal(k as isize);
        let lower = k == 0 || skip_diagonal(-(k as isize));
        if upper && lower {
            continue;
        }
        let kf = k as f64;
        let phase = Complex64::from_polar(1.0, -kf * theta);
        // L_n^k for n = 0.. by recurrence; ln(n!/(n+k)!) updated incrementally.
        let mut lag_prev = 0.0;
        let mut lag = 1.0;
        let mut ln_ratio = -ln_factorial_ratio(k, 0);
        for n in 0..(order - k) {
            if n > 0 {
                let nf = (n - 1) as f64;
                let next = if n == 1 {
                    1.0 + kf - rho2
                } else {
                    ((2.0 * nf + 1.0 + kf - rho2) * lag - (nf + kf) * lag_prev) / (nf + 1.0)
                };
                lag_prev = lag;
                lag = next;
                ln_ratio += (n as f64).ln() - ((n + k) as f64).ln();
            }
            let modulus = if k == 0 {
                (std::f64::consts::LN_2 - 0.5 * rho2).exp()
            } else if rho2 == 0.0 {
                0.0
            } else {
                (std::f64::consts::LN_2 + 0.5 * ln_ratio + 0.5 * kf * ln_rho2 - 0.5 * rho2).exp()
            };
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let value = phase * (sign * modulus * lag);
            let m = n + k;
            out[m * order + n] = value;
            if k > 0 {
                out[n * order + m] = value.conj();
            }
        }
    }
    out
}

/// Power series `Σ_{m≥0} (2m+1)^{exponent}`; see [`oddzeta`].
pub fn odd_power_sum(exponent: f64) -> Result<f64> {
    oddzeta(-exponent)
}

/// Odd-zeta sum `Σ_{m≥0} (2m+1)^{−r} = (1 − 2^{−r}) ζ(r)` for `r > 1`.
///
/// Sums the first terms directly and closes the series with the integral
/// tail plus Euler–Maclaurin corrections, which leaves a relative error far
/// below `1e−12`.
pub fn oddzeta(r: f64) -> Result<f64> {
    if !(r > 1.0) || !r.is_finite() {
        return Err(Error::DivergentSeries { exponent: -r });
    }
    const HEAD: usize = 1000;
    // Add the small tail first, then the head from its small end.
    let u = 2.0 * HEAD as f64 + 1.0;
    let f = u.powf(-r);
    let integral = u.powf(1.0 - r) / (2.0 * (r - 1.0));
    let d1 = -2.0 * r * u.powf(-r - 1.0);
    let d3 = -8.0 * r * (r + 1.0) * (r + 2.0) * u.powf(-r - 3.0);
    let d5 = -32.0 * r * (r + 1.0) * (r + 2.0) * (r + 3.0) * (r + 4.0) * u.powf(-r - 5.0);
    let mut sum = integral + 0.5 * f - d1 / 12.0 + d3 / 720.0 - d5 / 30240.0;
    for m in (0..HEAD).rev() {
        sum += (2.0 * m as f64 + 1.0).powf(-r);
    }
    Ok(sum)
}

/// The series `Σ_{m≥0} (2m+1)^s e^{−c m}` for `c > 0`, summed until a
/// geometric bound on the remaining tail falls below `1e−16` of the total.
pub fn exp_weighted_sum(s: f64, c: f64) -> f64 {
    assert!(c > 0.0, "exponential rate must be positive");
    let mut sum = 0.0;
    let mut m = 0usize;
    loop {
        let base = 2.0 * m as f64 + 1.0;
        let term = (s * base.ln() - c * m as f64).exp();
        sum += term;
        // Ratio of consecutive terms from here on is bounded by `q`.
        let ratio_here = ((base + 2.0) / base).powf(s) * (-c).exp();
        let q = if s >= 0.0 { ratio_here } else { (-c).exp() };
        if q < 1.0 {
            let tail = term * q / (1.0 - q);
            if tail <= 1e-16 * sum || term == 0.0 {
                return sum;
            }
        }
        m += 1;
        if m > 50_000_000 {
            return sum;
        }
    }
}
