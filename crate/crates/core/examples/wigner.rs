//! Wigner transform of basis functions and its inverse.

use moyal::basis::hh_grid;
use moyal::{f_grid, wigner_forward, wigner_inverse, GridSpec2};

fn main() -> moyal::Result<()> {
    let spec = GridSpec2::default();
    for (m, n) in [(0, 0), (1, 0), (2, 3), (5, 5)] {
        let f = f_grid(m, n, spec);
        let w = wigner_forward(&f)?;
        let back = wigner_inverse(&w)?;
        println!(
            "f_{m}{n}: |W f - h_{m} (x) h_{n}| = {:.2e}, round trip {:.2e}",
            w.max_abs_diff(&hh_grid(m, n, spec)),
            back.max_abs_diff(&f),
        );
    }
    Ok(())
}
