//! Different functions per variable: fix the scale of a homogeneous
//! inequality, then find touch points sharing one tangent slope.

use septan::cli::{corpus, render};
use septan::jensen::{normalize_homogeneous, prove};

fn main() {
    let entry = corpus().into_iter().find(|p| p.spec.id == "weighted_reciprocals").unwrap();
    let fixed = normalize_homogeneous(&entry.spec, 42).unwrap();
    println!("normalized: {}, bound {}", fixed.constraint.describe(), fixed.bound.as_ref().unwrap());
    print!("{}", render(&prove(&entry.spec), false));
}
