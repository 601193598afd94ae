//! Cubic polynomials under a sum constraint: two linear conditions decide.

use septan::algebra::rational::{q, qi};
use septan::jensen::theorem5_cubic;

fn main() {
    // -(x (1 - x)^2), so that the upper bound becomes a lower bound
    for n in 2..=6usize {
        let x0 = q(1, n as i64);
        match theorem5_cubic(&qi(-1), &qi(2), &qi(-1), &qi(0), n, &x0) {
            Ok(p) => println!(
                "n = {n}: 2a*x0 + b = {}, (n+2)a*x0 + b = {}",
                p.data.near_condition, p.data.far_condition
            ),
            Err(e) => println!("n = {n}: {e}"),
        }
    }
    match theorem5_cubic(&qi(1), &qi(-5), &qi(0), &qi(0), 2, &qi(1)) {
        Ok(_) => println!("unexpected"),
        Err(e) => println!("x^3 - 5x^2: {e}"),
    }
}
