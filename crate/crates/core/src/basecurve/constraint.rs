use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::rational::{exact_root, format_q, pow_i, serde_q, to_f64};
use crate::certify::minimum::rational_roots;
use crate::certify::Interval;
use crate::expr::Expr;

/// Which quantity the side condition fixes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ConstraintFamily {
    /// `x_1 + ... + x_n = budget`
    Sum,
    /// `x_1^a + ... + x_n^a = budget`
    PowerSum {
        #[serde(with = "serde_q")]
        alpha: BigRational,
    },
    /// `x_1 * ... * x_n = budget`
    Product,
    /// Power mean of order `alpha` equal to `value`.
    Mean {
        #[serde(with = "serde_q")]
        alpha: BigRational,
        #[serde(with = "serde_q")]
        value: BigRational,
    },
    /// `l(x_1) + ... + l(x_n) = budget` for an arbitrary `l`.
    Custom { l: Expr },
    /// No side condition; only valid before homogeneous normalization.
    Free,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintSpec {
    #[serde(flatten)]
    pub family: ConstraintFamily,
    #[serde(with = "serde_q")]
    pub budget: BigRational,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstraintError {
    #[error("invalid constraint: {0}")]
    Invalid(String),
    #[error("the touch point {0} is irrational")]
    IrrationalTouchPoint(String),
    #[error("no rational solution of l(x) = {0} in the domain")]
    NoTouchPoint(String),
    #[error("a free constraint has no touch point; normalize it or give one")]
    Free,
}

impl ConstraintSpec {
    pub fn new(family: ConstraintFamily, budget: BigRational, n: usize) -> Result<ConstraintSpec, ConstraintError> {
        let c = ConstraintSpec { family, budget, n };
        c.validate()?;
        Ok(c)
    }

    pub fn sum(budget: BigRational, n: usize) -> ConstraintSpec {
        ConstraintSpec::new(ConstraintFamily::Sum, budget, n).expect("valid sum constraint")
    }

    pub fn validate(&self) -> Result<(), ConstraintError> {
        if self.n == 0 {
            return Err(ConstraintError::Invalid("n must be at least 1".into()));
        }
        match &self.family {
            ConstraintFamily::PowerSum { alpha } if alpha.is_zero() => {
                Err(ConstraintError::Invalid("power-sum exponent must be nonzero".into()))
            }
            ConstraintFamily::Product if !self.budget.is_positive() => {
                Err(ConstraintError::Invalid("product budget must be positive".into()))
            }
            ConstraintFamily::Mean { value, .. } if !value.is_positive() => {
                Err(ConstraintError::Invalid("mean value must be positive".into()))
            }
            _ => Ok(()),
        }
    }

    /// Rewrites a fixed mean as the equivalent power-sum (or product)
    /// constraint. Other families are returned unchanged.
    pub fn canonical(&self) -> Result<ConstraintSpec, ConstraintError> {
        let ConstraintFamily::Mean { alpha, value } = &self.family else {
            return Ok(self.clone());
        };
        let n = BigRational::from_integer(self.n.into());
        if alpha.is_zero() {
            let n_i32 = i32::try_from(self.n).map_err(|_| ConstraintError::Invalid("n too large".into()))?;
            return ConstraintSpec::new(ConstraintFamily::Product, pow_i(value, n_i32).expect("positive"), self.n);
        }
        let v = rational_power(value, alpha)
            .ok_or_else(|| ConstraintError::IrrationalTouchPoint(format!("{}^{}", format_q(value), format_q(alpha))))?;
        let family = if alpha.is_one() {
            ConstraintFamily::Sum
        } else {
            ConstraintFamily::PowerSum { alpha: alpha.clone() }
        };
        ConstraintSpec::new(family, n * v, self.n)
    }

    /// The summed function `l`, if the family has one.
    pub fn l(&self) -> Option<Expr> {
        match &self.family {
            ConstraintFamily::Sum => Some(Expr::var()),
            ConstraintFamily::PowerSum { alpha } | ConstraintFamily::Mean { alpha, .. } if alpha.is_zero() => {
                Some(Expr::var().ln())
            }
            ConstraintFamily::PowerSum { alpha } | ConstraintFamily::Mean { alpha, .. } => {
                Some(Expr::power_of_var(alpha))
            }
            ConstraintFamily::Product => Some(Expr::var().ln()),
            ConstraintFamily::Custom { l } => Some(l.clone()),
            ConstraintFamily::Free => None,
        }
    }

    /// Equality point of the symmetric configuration: all variables equal
    /// and the constraint satisfied.
    pub fn touch_point(&self, domain: &Interval) -> Result<BigRational, ConstraintError> {
        let c = self.canonical()?;
        let n = BigRational::from_integer(c.n.into());
        let share = &c.budget / &n;
        let irrational = |what: String| ConstraintError::IrrationalTouchPoint(what);
        match &c.family {
            ConstraintFamily::Sum => Ok(share),
            ConstraintFamily::PowerSum { alpha } => {
                rational_power(&share, &alpha.recip()).ok_or_else(|| irrational(format!("({})^(1/{})", format_q(&share), format_q(alpha))))
            }
            ConstraintFamily::Product => {
                let k = u32::try_from(c.n).map_err(|_| ConstraintError::Invalid("n too large".into()))?;
                exact_root(&c.budget, k).ok_or_else(|| irrational(format!("({})^(1/{k})", format_q(&c.budget))))
            }
            ConstraintFamily::Custom { l } => solve_level(l, &share, domain),
            ConstraintFamily::Mean { .. } => unreachable!("canonicalized"),
            ConstraintFamily::Free => Err(ConstraintError::Free),
        }
    }

    /// Largest value one variable can take when all variables are
    /// positive, as implied by the constraint alone.
    pub fn variable_cap(&self) -> Option<f64> {
        let c = self.canonical().ok()?;
        match &c.family {
            ConstraintFamily::Sum => Some(to_f64(&c.budget)),
            ConstraintFamily::PowerSum { alpha } if alpha.is_positive() => {
                Some(to_f64(&c.budget).powf(1.0 / to_f64(alpha)))
            }
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        let b = format_q(&self.budget);
        match &self.family {
            ConstraintFamily::Sum => format!("sum of x_j = {b}"),
            ConstraintFamily::PowerSum { alpha } => format!("sum of x_j^{} = {b}", format_q(alpha)),
            ConstraintFamily::Product => format!("product of x_j = {b}"),
            ConstraintFamily::Mean { alpha, value } => {
                format!("power mean of order {} = {}", format_q(alpha), format_q(value))
            }
            ConstraintFamily::Custom { l } => format!("sum of {l} over x_j = {b}"),
            ConstraintFamily::Free => "no constraint".into(),
        }
    }
}

/// `r^(p/q)` when rational.
fn rational_power(r: &BigRational, e: &BigRational) -> Option<BigRational> {
    let p: i32 = e.numer().try_into().ok()?;
    let q: u32 = e.denom().try_into().ok()?;
    exact_root(&pow_i(r, p)?, q)
}

/// Rational solution of `l(x) = level` inside the domain.
fn solve_level(l: &Expr, level: &BigRational, domain: &Interval) -> Result<BigRational, ConstraintError> {
    let none = || ConstraintError::NoTouchPoint(format_q(level));
    let rf = l.lower_to_rational().map_err(|_| none())?;
    let p = rf.num() - &rf.den().scale(level);
    if p.is_zero() {
        return Err(none());
    }
    rational_roots(&p)
        .unwrap_or_default()
        .into_iter()
        .find(|x| domain.contains(x) && !rf.den().eval(x).is_zero())
        .ok_or_else(none)
}
