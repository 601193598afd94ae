//! Radicals defeat exact certification; candidates are then judged on a
//! dense grid, and the result is labelled as evidence only.

use septan::algebra::rational::qi;
use septan::basecurve::{ConstraintFamily, ConstraintSpec};
use septan::certify::{numeric_evidence, Interval, NumericRange};
use septan::cli::render;
use septan::expr::Expr;
use septan::jensen::{prove, Direction, ProblemSpec};

fn main() {
    let f = Expr::parse("sqrt(1-x) - sqrt(x)").unwrap();
    let line = Expr::parse("-sqrt(2)*x + sqrt(2)/2").unwrap();
    let range = NumericRange { lo: 0.0, hi: 1.0, lo_open: true, hi_open: true };
    let r = numeric_evidence(&f, &line, &range, 10_000, 1e-9).unwrap();
    println!("tangent line: {:?}, min gap {:.4} at {:.4}", r.verdict, r.min_gap, r.argmin);

    let c = ConstraintSpec::new(ConstraintFamily::PowerSum { alpha: qi(2) }, qi(1), 4).unwrap();
    let p = ProblemSpec::symmetric("sqrt_difference", f, c, Interval::open(qi(0), qi(1)), Direction::LowerBound);
    print!("{}", render(&prove(&p), true));
}
