//! A whole proof through a single tangent line.

use septan::algebra::rational::{q, qi};
use septan::basecurve::ConstraintSpec;
use septan::certify::Interval;
use septan::cli::render;
use septan::expr::Expr;
use septan::jensen::{prove, Direction, ProblemSpec};

fn main() {
    let p = ProblemSpec::symmetric(
        "four_fractions",
        Expr::parse("x/(x^3+8)").unwrap(),
        ConstraintSpec::sum(qi(4), 4),
        Interval::open(qi(0), qi(4)),
        Direction::UpperBound,
    )
    .with_bound(Expr::constant(q(4, 9)));
    print!("{}", render(&prove(&p), false));
}
