//! Sample the twisted Hermite functions and check their orthogonality.

use moyal::{f_grid, h_grid, inner1, inner2, GridSpec2};

fn main() {
    let spec = GridSpec2::default();
    println!("grid: n={} step={:.5}", spec.q.n(), spec.q.step());

    println!("inner1(h_m, h_n), m,n < 4:");
    let h: Vec<_> = (0..4).map(|m| h_grid(m, spec.q)).collect();
    for a in &h {
        let row: Vec<String> = h.iter().map(|b| format!("{:8.5}", inner1(a, b).re)).collect();
        println!("  {}", row.join(" "));
    }

    let pairs = [(0, 0), (1, 0), (2, 1), (3, 3)];
    println!("inner2(f_mn, f_kl) for (m,n) in {pairs:?}:");
    for &(m, n) in &pairs {
        let f = f_grid(m, n, spec);
        let row: Vec<String> =
            pairs.iter().map(|&(k, l)| format!("{:8.5}", inner2(&f, &f_grid(k, l, spec)).norm())).collect();
        println!("  {}", row.join(" "));
    }
    println!("f_00 at the origin: {}", f_grid(0, 0, spec).at(spec.q.n() / 2, spec.p.n() / 2).re);
}
