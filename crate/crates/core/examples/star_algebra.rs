//! The star product in the twisted Hermite basis is matrix multiplication.

use moyal::{analyze, grid_star, involute, star_coeff, synthesize, CoefficientMatrix, GridSpec2};
use num_complex::Complex64;

fn main() -> moyal::Result<()> {
    let e = |m, n| CoefficientMatrix::unit(4, m, n);
    let p = star_coeff(&e(0, 1), &e(1, 2));
    println!("E01 * E12 == E02: {}", p == e(0, 2));
    println!("E01 * E22 == 0: {}", star_coeff(&e(0, 1), &e(2, 2)) == CoefficientMatrix::zeros(4));

    let a =
        CoefficientMatrix::from_fn(4, |m, n| Complex64::new(1.0 / (1 + m + n) as f64, m as f64 - n as f64));
    let b = involute(&a);
    let exact = star_coeff(&a, &b);
    println!("(a * a°)° == a * a°: {}", involute(&exact).max_abs_diff(&exact) < 1e-15);

    // The same product through the Wigner transform on a grid.
    let spec = GridSpec2::default();
    let on_grid = grid_star(&synthesize(&a, spec), &synthesize(&b, spec))?;
    let recovered = analyze(&on_grid, 4)?;
    println!("grid star vs matrix product, max deviation: {:.2e}", recovered.max_abs_diff(&exact));
    Ok(())
}
