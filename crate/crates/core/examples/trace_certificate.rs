//! Factor a coefficient matrix as g * h with explicit trace-norm bounds.

use moyal::filtration::{bounded_bound_check, trace_factorize};
use moyal::{star_coeff, CoefficientMatrix};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> moyal::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let c = CoefficientMatrix::from_fn(16, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    for r in [1.5, 2.0, 3.0] {
        let cert = trace_factorize(&c, r)?;
        let check = star_coeff(&cert.g, &cert.h).max_abs_diff(&c);
        println!(
            "r={r}: |g*h - c| = {check:.1e}, trace norm {:.4} <= bound {:.4}, |h|^2 = {:.4} (zeta {:.4})",
            cert.trace_norm, cert.bound, cert.h_norm_sq, cert.odd_zeta,
        );
        let b = bounded_bound_check(&c, r)?;
        println!("      operator norm {:.4} <= {:.4}: {}", b.operator_norm, b.bound, b.holds);
    }
    Ok(())
}
