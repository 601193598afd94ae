//! Factor `f - g` through the double root at the touch point.

use septan::algebra::double_root_factor;
use septan::algebra::rational::qi;
use septan::expr::Expr;

fn main() {
    let f = Expr::parse("x/(x^3+8)").unwrap().lower_to_rational().unwrap();
    let g = Expr::parse("(2*x+1)/27").unwrap().lower_to_rational().unwrap();
    let fac = double_root_factor(&f, &g, &qi(1)).unwrap();
    println!("f - g = (x - 1)^2 * ({}) / ({})", fac.t, fac.qden);

    // the slope must match too
    let secant = Expr::parse("x/9").unwrap().lower_to_rational().unwrap();
    match double_root_factor(&f, &secant, &qi(1)) {
        Ok(_) => println!("unexpected factorization"),
        Err(e) => println!("x/9: {e}"),
    }
}
