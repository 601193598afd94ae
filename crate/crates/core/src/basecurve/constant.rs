use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::rational::{approximate, format_q, serde_q, sign_of, to_f64};
use crate::expr::surd::SurdSum;
use crate::expr::Expr;

/// Coefficient of a base curve: exact rational, closed radical form, or a
/// bare float when neither is available.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Constant {
    Rational(#[serde(with = "serde_q")] BigRational),
    Closed { expr: Expr, approx: f64 },
    Numeric { approx: f64 },
}

impl Constant {
    pub fn from_surd(s: &SurdSum) -> Constant {
        match s.as_rational() {
            Some(r) => Constant::Rational(r),
            None => Constant::Closed {
                expr: s.to_expr(),
                approx: s.to_f64(),
            },
        }
    }

    pub fn zero() -> Constant {
        Constant::Rational(BigRational::zero())
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Constant::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn approx(&self) -> f64 {
        match self {
            Constant::Rational(r) => to_f64(r),
            Constant::Closed { approx, .. } | Constant::Numeric { approx } => *approx,
        }
    }

    pub fn to_surd(&self) -> Option<SurdSum> {
        match self {
            Constant::Rational(r) => Some(SurdSum::rational(r.clone())),
            Constant::Closed { expr, .. } => expr.eval_surd(&BigRational::zero()),
            Constant::Numeric { .. } => None,
        }
    }

    pub fn to_expr(&self) -> Expr {
        match self {
            Constant::Rational(r) => Expr::constant(r.clone()),
            Constant::Closed { expr, .. } => expr.clone(),
            Constant::Numeric { approx } => {
                Expr::constant(approximate(*approx, 1 << 40).unwrap_or_else(BigRational::zero))
            }
        }
    }

    /// Sign, exact for rational and radical values. A float is trusted only
    /// away from zero.
    pub fn sign(&self) -> Option<i8> {
        match self {
            Constant::Rational(r) => Some(sign_of(r)),
            Constant::Closed { .. } => self.to_surd().and_then(|s| s.sign()),
            Constant::Numeric { approx } if approx.abs() > 1e-12 => Some(if *approx > 0.0 { 1 } else { -1 }),
            Constant::Numeric { .. } => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Constant::Numeric { .. })
    }

    fn combine(
        &self,
        other: &Constant,
        exact: impl Fn(&SurdSum, &SurdSum) -> Option<SurdSum>,
        float: impl Fn(f64, f64) -> f64,
    ) -> Constant {
        if let (Some(a), Some(b)) = (self.to_surd(), other.to_surd()) {
            if let Some(v) = exact(&a, &b) {
                return Constant::from_surd(&v);
            }
        }
        Constant::Numeric {
            approx: float(self.approx(), other.approx()),
        }
    }

    pub fn add(&self, other: &Constant) -> Constant {
        self.combine(other, |a, b| Some(a.add(b)), |a, b| a + b)
    }

    pub fn sub(&self, other: &Constant) -> Constant {
        self.combine(other, |a, b| Some(a.sub(b)), |a, b| a - b)
    }

    pub fn mul(&self, other: &Constant) -> Constant {
        self.combine(other, |a, b| Some(a.mul(b)), |a, b| a * b)
    }

    /// Quotient; the caller rules out a zero divisor.
    pub fn div(&self, other: &Constant) -> Constant {
        self.combine(other, |a, b| Some(a.mul(&b.recip()?)), |a, b| a / b)
    }

    pub fn neg(&self) -> Constant {
        match self {
            Constant::Rational(r) => Constant::Rational(-r),
            Constant::Closed { expr, approx } => Constant::Closed {
                expr: expr.clone().neg(),
                approx: -approx,
            },
            Constant::Numeric { approx } => Constant::Numeric { approx: -approx },
        }
    }

    pub fn scale(&self, c: &BigRational) -> Constant {
        self.mul(&Constant::Rational(c.clone()))
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Some(-1)
    }
}

impl From<BigRational> for Constant {
    fn from(r: BigRational) -> Self {
        Constant::Rational(r)
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constant::Rational(r) => f.write_str(&format_q(r)),
            Constant::Closed { expr, .. } => write!(f, "{expr}"),
            Constant::Numeric { approx } if approx.is_sign_negative() => write!(f, "-~{}", approx.abs()),
            Constant::Numeric { approx } => write!(f, "~{approx}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{q, qi};

    #[test]
    fn radicals_stay_closed() {
        let r2 = Constant::from_surd(&SurdSum::radical(qi(1), &qi(2), 2));
        assert!(matches!(r2, Constant::Closed { .. }));
        assert_eq!(r2.mul(&r2), Constant::Rational(qi(2)));
        assert_eq!(r2.sub(&r2), Constant::zero());
        assert_eq!(r2.neg().sign(), Some(-1));
        assert_eq!(r2.to_string(), "sqrt(2)");
        assert!((Constant::Rational(q(1, 2)).div(&r2).approx() - 0.5f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn serde_shapes() {
        let c = Constant::Rational(q(-16, 27));
        assert_eq!(serde_json::to_string(&c).unwrap(), "\"-16/27\"");
        let r2 = Constant::from_surd(&SurdSum::radical(qi(-1), &qi(2), 2));
        let back: Constant = serde_json::from_str(&serde_json::to_string(&r2).unwrap()).unwrap();
        assert_eq!(back, r2);
        let n = Constant::Numeric { approx: 0.25 };
        let back: Constant = serde_json::from_str(&serde_json::to_string(&n).unwrap()).unwrap();
        assert_eq!(back, n);
    }
}
