//! Which curves are worth trying for a given constraint.

use septan::algebra::rational::qi;
use septan::basecurve::{select_family, ConstraintFamily, ConstraintSpec};
use septan::expr::Expr;

fn show(f: &str, c: ConstraintSpec) {
    let f = Expr::parse(f).unwrap();
    let x0 = c.canonical().unwrap().touch_point(&septan::certify::Interval::above(qi(0))).unwrap();
    let sel = select_family(&f, &c, &x0).unwrap();
    println!("f = {f} under {}, x0 = {x0}", c.describe());
    for g in &sel.candidates {
        println!("  try {}: {g}", g.label());
    }
    for r in &sel.rejected {
        println!("  skip {}: {}", r.candidate, r.reason);
    }
}

fn main() {
    show("1/(x^3+2)", ConstraintSpec::new(ConstraintFamily::PowerSum { alpha: qi(2) }, qi(3), 3).unwrap());
    show("x/(x^3+8)", ConstraintSpec::sum(qi(4), 4));
    show("1/(1+x)", ConstraintSpec::new(ConstraintFamily::Product, qi(1), 3).unwrap());
    show(
        "x/(4+x^2)",
        ConstraintSpec::new(ConstraintFamily::Custom { l: Expr::parse("1/(4+x)").unwrap() }, qi(1), 5).unwrap(),
    );
}
