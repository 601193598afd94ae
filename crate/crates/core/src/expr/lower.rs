use num_traits::Signed;

use super::Expr;
use crate::algebra::rational::{exact_root, qi};
use crate::algebra::{Polynomial, RationalFunction};

/// Why an expression has no rational-function form.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NotRational {
    #[error("radical {node} is not a rational function")]
    Root { node: String },
    #[error("logarithm {node} is not a rational function")]
    Ln { node: String },
    #[error("{node} divides by the zero function")]
    ZeroDenominator { node: String },
}

impl Expr {
    /// Canonical `P/Q` form. Radicals and logarithms of constants are
    /// accepted when their value is rational.
    pub fn lower_to_rational(&self) -> Result<RationalFunction, NotRational> {
        let zero_den = || NotRational::ZeroDenominator {
            node: self.to_string(),
        };
        Ok(match self {
            Expr::Const(c) => RationalFunction::constant(c.clone()),
            Expr::Var => RationalFunction::x(),
            Expr::Add(a, b) => &a.lower_to_rational()? + &b.lower_to_rational()?,
            Expr::Sub(a, b) => &a.lower_to_rational()? - &b.lower_to_rational()?,
            Expr::Mul(a, b) => &a.lower_to_rational()? * &b.lower_to_rational()?,
            Expr::Div(a, b) => {
                let d = b.lower_to_rational()?;
                if d.is_zero() {
                    return Err(zero_den());
                }
                &a.lower_to_rational()? / &d
            }
            Expr::Neg(a) => -&a.lower_to_rational()?,
            Expr::Pow(a, k) => a.lower_to_rational()?.pow(*k).ok_or_else(zero_den)?,
            Expr::Root(a, k) => {
                let inner = a.lower_to_rational()?;
                let c = inner
                    .as_polynomial()
                    .filter(Polynomial::is_constant)
                    .map(|p| p.coeff(0));
                match c.and_then(|c| {
                    if c.is_negative() && k % 2 == 0 {
                        None
                    } else {
                        exact_root(&c, *k)
                    }
                }) {
                    Some(v) => RationalFunction::constant(v),
                    None => {
                        return Err(NotRational::Root {
                            node: self.to_string(),
                        })
                    }
                }
            }
            Expr::Ln(a) => {
                let inner = a.lower_to_rational()?;
                if inner == RationalFunction::constant(qi(1)) {
                    RationalFunction::constant(qi(0))
                } else {
                    return Err(NotRational::Ln {
                        node: self.to_string(),
                    });
                }
            }
        })
    }
}
