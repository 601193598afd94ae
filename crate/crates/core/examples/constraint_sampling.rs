//! Random points on the constraint surface, used as an independent check.

use septan::algebra::rational::qi;
use septan::basecurve::{ConstraintFamily, ConstraintSpec};
use septan::certify::Interval;
use septan::expr::Expr;
use septan::jensen::sampling::left_side;
use septan::jensen::{sampling_check, ConstraintSampler};

fn main() {
    let c = ConstraintSpec::new(ConstraintFamily::PowerSum { alpha: qi(2) }, qi(12), 3).unwrap();
    let sampler = ConstraintSampler::new(&c, &Interval::above(qi(0)), vec![2.0; 3]).unwrap();
    let f = [Expr::parse("x*root(3, 12 - x^2)").unwrap()];
    let points = sampler.sample(100_000, 42);
    let max = points.iter().map(|p| left_side(&f, p)).fold(f64::MIN, f64::max);
    println!("{} points on {}, largest sum {max:.9}", points.len(), c.describe());
    let check = sampling_check(&f, &sampler, 12.0, -1, 10_000, 7, 1e-9);
    println!("bound 12: worst gap {:.3e}, passed {}", check.worst_gap, check.passed);
}
