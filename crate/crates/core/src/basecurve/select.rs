use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::constant::Constant;
use super::constraint::{ConstraintError, ConstraintFamily, ConstraintSpec};
use super::curve::{base_curve, derivative_at, log_curve, power_curve, tangent_line, BaseCurve, CurveError};
use crate::algebra::rational::format_q;
use crate::expr::Expr;

/// Exponents tried for power curves under a plain sum constraint.
pub const SUM_CONSTRAINT_POWERS: [i64; 2] = [2, 3];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Admissibility {
    Admissible,
    Inadmissible { reason: String },
}

impl Admissibility {
    pub fn is_admissible(&self) -> bool {
        matches!(self, Admissibility::Admissible)
    }
}

fn slope_product(alpha: &BigRational, fprime: &Constant) -> Option<i8> {
    let a = alpha - BigRational::one();
    let sa: i8 = if a.is_zero() {
        0
    } else if a > BigRational::zero() {
        1
    } else {
        -1
    };
    if sa == 0 {
        return Some(0);
    }
    fprime.sign().map(|s| s * sa)
}

/// Tangent line under a power-sum (or, with `alpha = 0`, product)
/// constraint: needs `(alpha - 1) f'(x0) <= 0`.
pub fn admissibility_theorem3(alpha: &BigRational, fprime: &Constant) -> Admissibility {
    match slope_product(alpha, fprime) {
        Some(s) if s <= 0 => Admissibility::Admissible,
        Some(_) => Admissibility::Inadmissible {
            reason: format!("(alpha - 1) f'(x0) > 0 with alpha = {}, f'(x0) = {fprime}", format_q(alpha)),
        },
        None => Admissibility::Inadmissible {
            reason: format!("sign of f'(x0) = {fprime} is undetermined"),
        },
    }
}

/// Power curve `x^alpha` under a sum constraint: needs `(alpha - 1) f'(x0) >= 0`.
pub fn admissibility_theorem4(alpha: &BigRational, fprime: &Constant) -> Admissibility {
    match slope_product(alpha, fprime) {
        Some(s) if s >= 0 => Admissibility::Admissible,
        Some(_) => Admissibility::Inadmissible {
            reason: format!("(alpha - 1) f'(x0) < 0 with alpha = {}, f'(x0) = {fprime}", format_q(alpha)),
        },
        None => Admissibility::Inadmissible {
            reason: format!("sign of f'(x0) = {fprime} is undetermined"),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rejection {
    pub candidate: String,
    pub reason: String,
}

/// Candidate curves in the order they should be tried, plus the families
/// that were ruled out before any sign work.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    pub candidates: Vec<BaseCurve>,
    pub rejected: Vec<Rejection>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SelectError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Constraint(#[from] ConstraintError),
}

/// Candidates for proving `sum f(x_j) >= n f(x0)`.
pub fn select_family(f: &Expr, c: &ConstraintSpec, x0: &BigRational) -> Result<Selection, SelectError> {
    select_oriented(f, c, x0, false)
}

/// As [`select_family`]; with `upper` the target is `sum f(x_j) <= n f(x0)`,
/// so admissibility is judged for `-f`. Curves are always built for `f`.
pub fn select_oriented(
    f: &Expr,
    c: &ConstraintSpec,
    x0: &BigRational,
    upper: bool,
) -> Result<Selection, SelectError> {
    let c = c.canonical()?;
    let mut fprime = derivative_at(f, x0)?;
    if upper {
        fprime = fprime.neg();
    }
    let mut candidates = Vec::new();
    let mut rejected = Vec::new();
    let mut gate = |verdict: Admissibility, name: String, build: &dyn Fn() -> Result<BaseCurve, CurveError>| {
        match verdict {
            Admissibility::Admissible => build().map(|curve| candidates.push(curve)),
            Admissibility::Inadmissible { reason } => {
                rejected.push(Rejection { candidate: name, reason });
                Ok(())
            }
        }
    };
    match &c.family {
        ConstraintFamily::Sum => {
            gate(Admissibility::Admissible, "tangent line".into(), &|| tangent_line(f, x0))?;
            for a in SUM_CONSTRAINT_POWERS {
                let alpha = BigRational::from_integer(a.into());
                let verdict = admissibility_theorem4(&alpha, &fprime);
                gate(verdict, format!("power curve x^{a}"), &|| power_curve(f, &alpha, x0))?;
            }
        }
        // the tangent line first when the power-mean comparison allows it,
        // then the curve in the constrained function itself
        ConstraintFamily::PowerSum { alpha } => {
            if !alpha.is_one() {
                let verdict = admissibility_theorem3(alpha, &fprime);
                gate(verdict, "tangent line".into(), &|| tangent_line(f, x0))?;
            }
            gate(Admissibility::Admissible, format!("power curve x^{}", format_q(alpha)), &|| {
                power_curve(f, alpha, x0)
            })?;
        }
        ConstraintFamily::Product => {
            let verdict = admissibility_theorem3(&BigRational::zero(), &fprime);
            gate(verdict, "tangent line".into(), &|| tangent_line(f, x0))?;
            gate(Admissibility::Admissible, "log curve".into(), &|| log_curve(f, x0))?;
        }
        ConstraintFamily::Custom { l } => {
            gate(Admissibility::Admissible, format!("curve in l(x) = {l}"), &|| base_curve(f, l, x0))?;
        }
        ConstraintFamily::Mean { .. } => unreachable!("canonicalized"),
        ConstraintFamily::Free => return Err(ConstraintError::Free.into()),
    }
    Ok(Selection { candidates, rejected })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{q, qi};
    use crate::basecurve::FamilyKind;

    fn e(s: &str) -> Expr {
        Expr::parse(s).unwrap()
    }

    #[test]
    fn theorem3_cases() {
        assert!(admissibility_theorem3(&qi(2), &Constant::Rational(q(-2, 3))).is_admissible());
        assert!(admissibility_theorem3(&qi(2), &Constant::Rational(q(-4, 3))).is_admissible());
        // product constraint, f = -x/(x^2+2): f'(1) = -1/9
        assert!(!admissibility_theorem3(&qi(0), &Constant::Rational(q(-1, 9))).is_admissible());
        assert!(admissibility_theorem3(&qi(1), &Constant::Rational(qi(5))).is_admissible());
        assert!(admissibility_theorem3(&qi(1), &Constant::Rational(qi(-5))).is_admissible());
    }

    #[test]
    fn theorem4_cases() {
        assert!(admissibility_theorem4(&qi(2), &Constant::Rational(q(1, 3))).is_admissible());
        assert!(admissibility_theorem4(&qi(3), &Constant::Rational(qi(4))).is_admissible());
        assert!(!admissibility_theorem4(&qi(2), &Constant::Rational(q(-1, 3))).is_admissible());
        assert!(!admissibility_theorem4(&qi(2), &Constant::Numeric { approx: 1e-15 }).is_admissible());
    }

    #[test]
    fn sum_constraint_prefers_the_line() {
        let c = ConstraintSpec::sum(qi(4), 4);
        let f = e("x/(x^3+8)");
        let x0 = c.touch_point(&crate::certify::Interval::above(qi(0))).unwrap();
        let s = select_family(&f, &c, &x0).unwrap();
        assert_eq!(s.candidates[0].family, FamilyKind::Line);
        assert_eq!(s.candidates[0].k, Constant::Rational(q(2, 27)));
        // f'(1) = 2/27 > 0: both power curves pass
        assert_eq!(s.candidates.len(), 3);
        // for the upper direction the power curves are judged on -f
        let s = select_oriented(&f, &c, &x0, true).unwrap();
        assert_eq!(s.candidates.len(), 1);
        assert_eq!(s.rejected.len(), 2);
    }

    #[test]
    fn power_sum_constraint_tries_the_line_first() {
        let c = ConstraintSpec::new(ConstraintFamily::PowerSum { alpha: qi(2) }, qi(3), 3).unwrap();
        // f'(1) = -1/3 < 0 admits the line
        let s = select_family(&e("1/(x^3+2)"), &c, &qi(1)).unwrap();
        assert_eq!(s.candidates[0].family, FamilyKind::Line);
        assert_eq!(s.candidates[1].family, FamilyKind::PowerCurve);
        assert_eq!(s.candidates[1].k, Constant::Rational(q(-1, 6)));
        // f'(1) = 3 > 0 leaves only the parabola
        let s = select_family(&e("x^3"), &c, &qi(1)).unwrap();
        assert_eq!(s.candidates.len(), 1);
        assert_eq!(s.candidates[0].family, FamilyKind::PowerCurve);
    }

    #[test]
    fn product_constraint_rejects_the_line() {
        let c = ConstraintSpec::new(ConstraintFamily::Product, qi(1), 3).unwrap();
        let s = select_family(&e("-x/(x^2+2)"), &c, &qi(1)).unwrap();
        assert_eq!(s.candidates.len(), 1);
        assert_eq!(s.candidates[0].family, FamilyKind::LogCurve);
        assert_eq!(s.candidates[0].k, Constant::Rational(q(-1, 9)));
        assert_eq!(s.candidates[0].m, Constant::Rational(q(-1, 3)));
        assert_eq!(s.rejected[0].candidate, "tangent line");
    }

    #[test]
    fn selection_is_deterministic() {
        let c = ConstraintSpec::sum(qi(1), 3);
        let f = e("10*x^3 - 9*x^5");
        let a = select_family(&f, &c, &q(1, 3)).unwrap();
        let b = select_family(&f, &c, &q(1, 3)).unwrap();
        assert_eq!(a, b);
    }
}
