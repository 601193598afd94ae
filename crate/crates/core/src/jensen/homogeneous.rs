//! Fixing the scale of homogeneous problems.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::problem::ProblemSpec;
use crate::algebra::rational::to_f64;
use crate::basecurve::ConstraintFamily;
use crate::expr::Expr;

pub const HOMOGENEITY_TOL: f64 = 1e-8;
const TRIALS: usize = 32;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HomogeneousError {
    #[error("the problem is not marked homogeneous")]
    NotMarked,
    #[error("scaling needs a domain of the form (0, inf) or [0, inf), got {0}")]
    DomainNotScalable(String),
    #[error("not homogeneous of degree {degree}: relative residual {residual:e} at scale {scale}")]
    NotHomogeneous { degree: i32, residual: f64, scale: f64 },
    #[error("the bound depends on the variables, which only a sum normalization fixes")]
    BoundNotFixed,
    #[error("the bound could not be evaluated: {0}")]
    Bound(String),
}

fn left_side(p: &ProblemSpec, xs: &[f64]) -> f64 {
    xs.iter()
        .enumerate()
        .map(|(j, &x)| p.function(j).eval_numeric(x).unwrap_or(f64::NAN))
        .sum()
}

fn bound_at(p: &ProblemSpec, xs: &[f64]) -> f64 {
    let s: f64 = xs.iter().sum();
    p.bound.as_ref().map_or(0.0, |b| b.eval_numeric(s).unwrap_or(f64::NAN))
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

/// Numerically checks that both sides scale like `t^degree`, then replaces
/// the constraint with the declared target and fixes the bound.
pub fn normalize_homogeneous(problem: &ProblemSpec, seed: u64) -> Result<ProblemSpec, HomogeneousError> {
    let h = problem.homogeneous.as_ref().ok_or(HomogeneousError::NotMarked)?;
    let d = &problem.domain;
    if d.hi.is_some() || d.lo.as_ref().is_none_or(|lo| !lo.is_zero()) {
        return Err(HomogeneousError::DomainNotScalable(d.to_string()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..TRIALS {
        let xs: Vec<f64> = (0..problem.n).map(|_| rng.random_range(0.1..10.0)).collect();
        let t: f64 = rng.random_range(0.5..2.0);
        let txs: Vec<f64> = xs.iter().map(|x| t * x).collect();
        let scale = t.powi(h.degree);
        for (lhs, rhs) in [
            (left_side(problem, &txs), scale * left_side(problem, &xs)),
            (bound_at(problem, &txs), scale * bound_at(problem, &xs)),
        ] {
            let residual = relative(lhs, rhs);
            if !(residual <= HOMOGENEITY_TOL) {
                return Err(HomogeneousError::NotHomogeneous {
                    degree: h.degree,
                    residual,
                    scale: t,
                });
            }
        }
    }
    let target = h.target.clone();
    let bound = match &problem.bound {
        None => None,
        Some(b) if !b.has_var() => Some(b.clone()),
        Some(b) => {
            if !matches!(target.family, ConstraintFamily::Sum) {
                return Err(HomogeneousError::BoundNotFixed);
            }
            let fixed = b.substitute(&Expr::constant(target.budget.clone()));
            Some(match fixed.eval_exact(&BigRational::zero()) {
                Ok(v) => Expr::constant(v),
                Err(_) if fixed.eval_numeric(to_f64(&target.budget)).is_ok_and(f64::is_finite) => fixed,
                Err(e) => return Err(HomogeneousError::Bound(e.to_string())),
            })
        }
    };
    if target.budget.is_negative() {
        return Err(HomogeneousError::Bound("negative normalization budget".into()));
    }
    Ok(ProblemSpec {
        constraint: target,
        bound,
        homogeneous: None,
        ..problem.clone()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::qi;
    use crate::basecurve::ConstraintSpec;
    use crate::certify::Interval;
    use crate::jensen::problem::{Direction, Homogeneity};

    fn e(s: &str) -> Expr {
        Expr::parse(s).unwrap()
    }

    fn unconstrained(functions: Vec<Expr>, bound: &str, degree: i32, budget: i64) -> ProblemSpec {
        let n = functions.len();
        ProblemSpec {
            id: "h".into(),
            functions,
            n,
            constraint: ConstraintSpec::new(ConstraintFamily::Free, qi(0), n).unwrap(),
            domain: Interval::above(qi(0)),
            direction: Direction::LowerBound,
            bound: Some(e(bound)),
            touch_point: None,
            homogeneous: Some(Homogeneity {
                degree,
                target: ConstraintSpec::sum(qi(budget), n),
            }),
        }
    }

    #[test]
    fn weighted_reciprocals_normalize_to_eight() {
        let p = unconstrained(vec![e("1/x"), e("1/x"), e("4/x"), e("16/x")], "64/x", -1, 8);
        let q = normalize_homogeneous(&p, 7).unwrap();
        assert_eq!(q.bound, Some(Expr::int(8)));
        assert_eq!(q.constraint, ConstraintSpec::sum(qi(8), 4));
        assert!(q.homogeneous.is_none());
    }

    #[test]
    fn squares_against_the_squared_sum() {
        let p = unconstrained(vec![e("x^2"); 3], "x^2/3", 2, 3);
        assert_eq!(normalize_homogeneous(&p, 1).unwrap().bound, Some(Expr::int(3)));
    }

    #[test]
    fn mixed_degrees_are_rejected() {
        let p = unconstrained(vec![e("x + x^2"); 2], "x", 1, 2);
        assert!(matches!(
            normalize_homogeneous(&p, 3),
            Err(HomogeneousError::NotHomogeneous { degree: 1, .. })
        ));
        // the bound has to scale too
        let p = unconstrained(vec![e("1/x"); 2], "4/x + 1", -1, 2);
        assert!(matches!(normalize_homogeneous(&p, 3), Err(HomogeneousError::NotHomogeneous { .. })));
    }

    #[test]
    fn bounded_domains_cannot_be_rescaled() {
        let mut p = unconstrained(vec![e("1/x"); 2], "4/x", -1, 2);
        p.domain = Interval::open(qi(0), qi(1));
        assert!(matches!(normalize_homogeneous(&p, 0), Err(HomogeneousError::DomainNotScalable(_))));
    }
}
