//! Weyl operators acting on wave functions, and the duality pairing.

use moyal::weyl::{coordinate_action_check, duality, weyl_apply};
use moyal::{f_grid, h_grid, inner1, GridSpec2};

fn main() -> moyal::Result<()> {
    let spec = GridSpec2::default();
    let f = f_grid(3, 1, spec);
    for n in 0..3 {
        let out = weyl_apply(&f, &h_grid(n, spec.p))?;
        let weight = inner1(&h_grid(3, spec.q), &out);
        println!("W(f_31) h_{n}: overlap with h_3 = {:.6}", weight.re);
    }

    let pairing = duality(&f_grid(1, 2, spec), &f_grid(2, 1, spec));
    println!("<f_12, f_21> = {:.6}", pairing.re);

    let r = coordinate_action_check(6, spec.q);
    println!("coordinate operators on h_0..h_5, worst residual {:.2e}", r.max());
    Ok(())
}
