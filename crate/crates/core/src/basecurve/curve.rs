use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::constant::Constant;
use crate::algebra::rational::{format_q, serde_q, to_f64};
use crate::algebra::RationalFunction;
use crate::expr::Expr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyKind {
    Line,
    PowerCurve,
    LogCurve,
    General,
}

/// `g(x) = k * l(x) + m`, tangent to some `f` at `x0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaseCurve {
    pub family: FamilyKind,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "serde_q::option")]
    pub alpha: Option<BigRational>,
    pub k: Constant,
    pub m: Constant,
    #[serde(with = "serde_q")]
    pub x0: BigRational,
    pub l: Expr,
    pub expr: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CurveError {
    #[error("{what} is not differentiable at x = {at}: {reason}")]
    NotDifferentiable { what: String, at: String, reason: String },
    #[error("the exponent of a power curve must be nonzero")]
    ZeroExponent,
    #[error("a log curve needs a positive touch point, got {0}")]
    NonPositiveTouchPoint(String),
}

/// Value of `e` at `x0`: exact when it is a sum of radicals, otherwise a float.
pub(crate) fn value_at(e: &Expr, x0: &BigRational, what: &str) -> Result<Constant, CurveError> {
    if let Some(s) = e.eval_surd(x0) {
        return Ok(Constant::from_surd(&s));
    }
    match e.eval_numeric(to_f64(x0)) {
        Ok(v) => Ok(Constant::Numeric { approx: v }),
        Err(err) => Err(CurveError::NotDifferentiable {
            what: what.to_string(),
            at: format_q(x0),
            reason: err.to_string(),
        }),
    }
}

/// Exact or approximate `f'(x0)`.
pub fn derivative_at(f: &Expr, x0: &BigRational) -> Result<Constant, CurveError> {
    value_at(f, x0, "f")?;
    value_at(&f.differentiate(), x0, "f")
}

fn build(
    f: &Expr,
    l: Expr,
    family: FamilyKind,
    alpha: Option<BigRational>,
    x0: &BigRational,
) -> Result<BaseCurve, CurveError> {
    let fv = value_at(f, x0, "f")?;
    let fd = value_at(&f.differentiate(), x0, "f")?;
    let lv = value_at(&l, x0, "l")?;
    let ld = value_at(&l.differentiate(), x0, "l")?;
    let k = if ld.sign() == Some(0) { Constant::zero() } else { fd.div(&ld) };
    let m = fv.sub(&k.mul(&lv));
    let expr = k.to_expr().mul(l.clone()).add(m.to_expr());
    Ok(BaseCurve {
        family,
        alpha,
        k,
        m,
        x0: x0.clone(),
        l,
        expr,
    })
}

/// Curve `k * l + m` matching `f` in value and slope at `x0`.
pub fn base_curve(f: &Expr, l: &Expr, x0: &BigRational) -> Result<BaseCurve, CurveError> {
    let family = if *l == Expr::var() {
        FamilyKind::Line
    } else {
        FamilyKind::General
    };
    build(f, l.clone(), family, None, x0)
}

pub fn tangent_line(f: &Expr, x0: &BigRational) -> Result<BaseCurve, CurveError> {
    build(f, Expr::var(), FamilyKind::Line, None, x0)
}

/// `k * x^alpha + m`. `alpha = 1` gives the tangent line.
pub fn power_curve(f: &Expr, alpha: &BigRational, x0: &BigRational) -> Result<BaseCurve, CurveError> {
    if alpha.is_zero() {
        return Err(CurveError::ZeroExponent);
    }
    if alpha.is_one() {
        return tangent_line(f, x0);
    }
    build(f, Expr::power_of_var(alpha), FamilyKind::PowerCurve, Some(alpha.clone()), x0)
}

pub fn parabola_curve(f: &Expr, x0: &BigRational) -> Result<BaseCurve, CurveError> {
    power_curve(f, &BigRational::from_integer(2.into()), x0)
}

/// `k * ln x + m`, so `k = x0 * f'(x0)`.
pub fn log_curve(f: &Expr, x0: &BigRational) -> Result<BaseCurve, CurveError> {
    if !x0.is_positive() {
        return Err(CurveError::NonPositiveTouchPoint(format_q(x0)));
    }
    build(f, Expr::var().ln(), FamilyKind::LogCurve, None, x0)
}

impl BaseCurve {
    /// Both coefficients are rational.
    pub fn is_rational(&self) -> bool {
        self.k.as_rational().is_some() && self.m.as_rational().is_some()
    }

    /// The curve as an exact rational function, when it is one.
    pub fn to_rational(&self) -> Option<RationalFunction> {
        if !self.is_rational() {
            return None;
        }
        self.expr.lower_to_rational().ok()
    }

    pub fn negated(&self) -> BaseCurve {
        let k = self.k.neg();
        let m = self.m.neg();
        let expr = k.to_expr().mul(self.l.clone()).add(m.to_expr());
        BaseCurve {
            k,
            m,
            expr,
            ..self.clone()
        }
    }

    pub fn label(&self) -> String {
        match (self.family, &self.alpha) {
            (FamilyKind::Line, _) => "tangent line".into(),
            (FamilyKind::PowerCurve, Some(a)) => format!("power curve x^{}", format_q(a)),
            (FamilyKind::PowerCurve, None) => "power curve".into(),
            (FamilyKind::LogCurve, _) => "log curve".into(),
            (FamilyKind::General, _) => format!("curve in l(x) = {}", self.l),
        }
    }
}

impl fmt::Display for BaseCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.expr)
    }
}
