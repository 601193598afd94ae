use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::Expr;
use crate::algebra::rational::{exact_root, pow_i};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum DomainViolation {
    #[error("division by zero")]
    DivisionByZero,
    #[error("even root of a negative number")]
    EvenRootOfNegative,
    #[error("logarithm of a non-positive number")]
    LogOfNonPositive,
    #[error("result is not finite")]
    NonFinite,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactEvalError {
    #[error(transparent)]
    Domain(#[from] DomainViolation),
    #[error("value of {0} is irrational")]
    Irrational(String),
}

impl Expr {
    /// Double-precision evaluation. Domain problems are reported instead of
    /// being propagated as NaN or infinity.
    pub fn eval_numeric(&self, x: f64) -> Result<f64, DomainViolation> {
        let v = match self {
            Expr::Const(c) => crate::algebra::rational::to_f64(c),
            Expr::Var => x,
            Expr::Add(a, b) => a.eval_numeric(x)? + b.eval_numeric(x)?,
            Expr::Sub(a, b) => a.eval_numeric(x)? - b.eval_numeric(x)?,
            Expr::Mul(a, b) => a.eval_numeric(x)? * b.eval_numeric(x)?,
            Expr::Div(a, b) => {
                let d = b.eval_numeric(x)?;
                if d == 0.0 {
                    return Err(DomainViolation::DivisionByZero);
                }
                a.eval_numeric(x)? / d
            }
            Expr::Neg(a) => -a.eval_numeric(x)?,
            Expr::Pow(a, k) => {
                let b = a.eval_numeric(x)?;
                if b == 0.0 && *k < 0 {
                    return Err(DomainViolation::DivisionByZero);
                }
                b.powi(*k)
            }
            Expr::Root(a, k) => {
                let b = a.eval_numeric(x)?;
                if b < 0.0 {
                    if k % 2 == 0 {
                        return Err(DomainViolation::EvenRootOfNegative);
                    }
                    -real_root(-b, *k)
                } else {
                    real_root(b, *k)
                }
            }
            Expr::Ln(a) => {
                let b = a.eval_numeric(x)?;
                if b <= 0.0 {
                    return Err(DomainViolation::LogOfNonPositive);
                }
                b.ln()
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(DomainViolation::NonFinite)
        }
    }

    /// Exact evaluation at a rational point. Roots and logarithms succeed only
    /// when the result is rational.
    pub fn eval_exact(&self, x: &BigRational) -> Result<BigRational, ExactEvalError> {
        Ok(match self {
            Expr::Const(c) => c.clone(),
            Expr::Var => x.clone(),
            Expr::Add(a, b) => a.eval_exact(x)? + b.eval_exact(x)?,
            Expr::Sub(a, b) => a.eval_exact(x)? - b.eval_exact(x)?,
            Expr::Mul(a, b) => a.eval_exact(x)? * b.eval_exact(x)?,
            Expr::Div(a, b) => {
                let d = b.eval_exact(x)?;
                if d.is_zero() {
                    return Err(DomainViolation::DivisionByZero.into());
                }
                a.eval_exact(x)? / d
            }
            Expr::Neg(a) => -a.eval_exact(x)?,
            Expr::Pow(a, k) => {
                pow_i(&a.eval_exact(x)?, *k).ok_or(DomainViolation::DivisionByZero)?
            }
            Expr::Root(a, k) => {
                let b = a.eval_exact(x)?;
                if b.is_negative() && k % 2 == 0 {
                    return Err(DomainViolation::EvenRootOfNegative.into());
                }
                exact_root(&b, *k).ok_or_else(|| ExactEvalError::Irrational(self.to_string()))?
            }
            Expr::Ln(a) => {
                let b = a.eval_exact(x)?;
                if !b.is_positive() {
                    return Err(DomainViolation::LogOfNonPositive.into());
                }
                if b != BigRational::from_integer(1.into()) {
                    return Err(ExactEvalError::Irrational(self.to_string()));
                }
                BigRational::zero()
            }
        })
    }
}

fn real_root(b: f64, k: u32) -> f64 {
    match k {
        2 => b.sqrt(),
        3 => b.cbrt(),
        _ => b.powf(1.0 / f64::from(k)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{q, qi};

    fn e(s: &str) -> Expr {
        Expr::parse(s).unwrap()
    }

    #[test]
    fn numeric_values() {
        assert_eq!(e("x^2").eval_numeric(3.0), Ok(9.0));
        assert_eq!(e("sqrt(1-x) - sqrt(x)").eval_numeric(0.5), Ok(0.0));
        assert_eq!(e("root(3, x)").eval_numeric(-8.0), Ok(-2.0));
    }

    #[test]
    fn domain_violations() {
        assert_eq!(e("ln(x)").eval_numeric(-1.0), Err(DomainViolation::LogOfNonPositive));
        assert_eq!(e("sqrt(x)").eval_numeric(-1.0), Err(DomainViolation::EvenRootOfNegative));
        assert_eq!(e("1/(x-1)").eval_numeric(1.0), Err(DomainViolation::DivisionByZero));
        assert_eq!(e("x^(-1)").eval_numeric(0.0), Err(DomainViolation::DivisionByZero));
    }

    #[test]
    fn exact_values() {
        assert_eq!(e("x/(x^3+8)").eval_exact(&qi(1)), Ok(q(1, 9)));
        assert_eq!(e("x*root(3, 12 - x^2)").eval_exact(&qi(2)), Ok(qi(4)));
        assert_eq!(e("sqrt(x)").eval_exact(&q(9, 4)), Ok(q(3, 2)));
        assert!(matches!(e("sqrt(x)").eval_exact(&qi(2)), Err(ExactEvalError::Irrational(_))));
        assert_eq!(e("ln(x)").eval_exact(&qi(1)), Ok(qi(0)));
    }
}
