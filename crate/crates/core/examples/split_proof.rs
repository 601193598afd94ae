//! When the tangent fails near an end of the domain, cut that piece off and
//! bound it by minima instead.

use septan::algebra::rational::{q, qi};
use septan::basecurve::{tangent_line, ConstraintSpec};
use septan::certify::Interval;
use septan::expr::Expr;
use septan::jensen::{auto_split, prove_with_split, Direction};

fn main() {
    let f = Expr::parse("10*x^3 - 9*x^5").unwrap();
    let c = ConstraintSpec::sum(qi(1), 3);
    let domain = Interval::open_closed(qi(0), qi(1));
    let line = tangent_line(&f, &q(1, 3)).unwrap();
    println!("tangent at 1/3: {line}");

    let g = auto_split(&f, &line, &domain, Direction::LowerBound).unwrap();
    println!("region handled by minima: {g}");
    let proof = prove_with_split(&f, &line, &c, &domain, Some(&g), Direction::LowerBound).unwrap();
    let s = proof.split.unwrap();
    println!("min over {} + 2 * min over {} = {} >= {}", s.g, s.rest, s.lhs, s.rhs);

    let too_wide = Interval::closed(q(1, 2), qi(1));
    match prove_with_split(&f, &line, &c, &domain, Some(&too_wide), Direction::LowerBound) {
        Ok(_) => println!("unexpected"),
        Err(e) => println!("with G = {too_wide}: {e}"),
    }
}
