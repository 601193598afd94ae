//! Direct route: one base curve below `f` on the whole domain, summed over
//! the variables.

use num_rational::BigRational;

use super::certificate::{ClaimRole, SignClaim, Summation, SummationRule};
use super::problem::Direction;
use crate::algebra::{double_root_factor, DoubleRootFactor, FactorError};
use crate::basecurve::{BaseCurve, Constant, ConstraintFamily, ConstraintSpec, FamilyKind};
use crate::certify::{certify_sign, Interval, SignVerdict, Witness};
use crate::expr::Expr;

/// Certified inequality `sigma (f - g) >= 0` on one interval.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveStep {
    pub factor: DoubleRootFactor,
    pub claims: Vec<SignClaim>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CurveStepError {
    #[error("{0} is not a rational function")]
    NotRational(String),
    #[error(transparent)]
    Tangency(#[from] FactorError),
    #[error("the difference has a pole in {interval}")]
    PoleInInterval { interval: Interval },
    #[error("the curve crosses f on {interval}")]
    WrongSign {
        step: Box<CurveStep>,
        interval: Interval,
        witness: Option<Witness>,
    },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Theorem1Error {
    #[error(transparent)]
    Step(#[from] CurveStepError),
    #[error("a {curve} curve cannot be summed under the constraint {constraint}")]
    NoSummationRule { curve: String, constraint: String },
}

pub(crate) fn verdict_sign(v: SignVerdict) -> i8 {
    match v {
        SignVerdict::NonNegative => 1,
        SignVerdict::NonPositive => -1,
        SignVerdict::Indefinite => 0,
    }
}

pub(crate) fn required_verdict(sign: i8) -> SignVerdict {
    if sign > 0 {
        SignVerdict::NonNegative
    } else {
        SignVerdict::NonPositive
    }
}

/// Factors `f - g` at the curve's touch point and certifies that
/// `sigma (f - g) >= 0` on `region`.
pub fn certify_curve(
    f: &Expr,
    curve: &BaseCurve,
    region: &Interval,
    sigma: i8,
    index: usize,
) -> Result<CurveStep, CurveStepError> {
    let frf = f.lower_to_rational().map_err(|_| CurveStepError::NotRational(f.to_string()))?;
    let grf = curve
        .to_rational()
        .ok_or_else(|| CurveStepError::NotRational(curve.expr.to_string()))?;
    let factor = double_root_factor(&frf, &grf, &curve.x0)?;
    let qcert = certify_sign(&factor.qden, region).expect("denominators are nonzero");
    if qcert.root_count > 0 {
        return Err(CurveStepError::PoleInInterval {
            interval: region.clone(),
        });
    }
    let qsign = verdict_sign(qcert.verdict);
    let mut claims = vec![SignClaim {
        role: ClaimRole::Denominator,
        function: index,
        required: qcert.verdict,
        certificate: qcert,
    }];
    if factor.t.is_zero() {
        return Ok(CurveStep { factor, claims });
    }
    let required = required_verdict(sigma * qsign);
    let tcert = certify_sign(&factor.t, region).expect("nonzero cofactor");
    let ok = tcert.verdict == required;
    let witness = tcert.witness.clone();
    claims.push(SignClaim {
        role: ClaimRole::Cofactor,
        function: index,
        required,
        certificate: tcert,
    });
    let step = CurveStep { factor, claims };
    if ok {
        Ok(step)
    } else {
        Err(CurveStepError::WrongSign {
            step: Box::new(step),
            interval: region.clone(),
            witness,
        })
    }
}

/// How a curve of this family adds up under the constraint, if it does.
pub fn summation_rule(curve: &BaseCurve, c: &ConstraintSpec) -> Option<SummationRule> {
    let c = c.canonical().ok()?;
    match (&c.family, curve.family) {
        (ConstraintFamily::Sum, FamilyKind::Line) => Some(SummationRule::Direct),
        (ConstraintFamily::Sum, FamilyKind::PowerCurve) => Some(SummationRule::PowerMeanCurve),
        (ConstraintFamily::PowerSum { alpha }, FamilyKind::PowerCurve) if curve.alpha.as_ref() == Some(alpha) => {
            Some(SummationRule::Direct)
        }
        (ConstraintFamily::PowerSum { .. } | ConstraintFamily::Product, FamilyKind::Line) => {
            Some(SummationRule::PowerMeanLine)
        }
        (ConstraintFamily::Product, FamilyKind::LogCurve) => Some(SummationRule::Direct),
        (ConstraintFamily::Custom { l }, _) if *l == curve.l => Some(SummationRule::Direct),
        _ => None,
    }
}

/// `n f(x0)` as the summed curves' value.
pub fn summation(f: &Expr, curve: &BaseCurve, c: &ConstraintSpec) -> Result<Summation, Theorem1Error> {
    let rule = summation_rule(curve, c).ok_or_else(|| Theorem1Error::NoSummationRule {
        curve: curve.label(),
        constraint: c.describe(),
    })?;
    let n = BigRational::from_integer(c.n.into());
    let fx0 = crate::basecurve::Constant::from_surd(
        &f.eval_surd(&curve.x0)
            .ok_or_else(|| CurveStepError::NotRational(f.to_string()))?,
    );
    let budget = c.canonical().map(|c| c.budget).unwrap_or_else(|_| c.budget.clone());
    Ok(Summation {
        rule,
        k: curve.k.clone(),
        m_total: curve.m.scale(&n),
        budget,
        value: fx0.scale(&n),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem1Proof {
    pub step: CurveStep,
    pub summation: Summation,
}

/// `f >= g` (or `<=`) on the whole domain, then summation.
pub fn prove_theorem1(
    f: &Expr,
    curve: &BaseCurve,
    c: &ConstraintSpec,
    domain: &Interval,
    direction: Direction,
) -> Result<Theorem1Proof, Theorem1Error> {
    let summation = summation(f, curve, c)?;
    let step = certify_curve(f, curve, domain, direction.sigma(), 0)?;
    Ok(Theorem1Proof { step, summation })
}

/// Exact `k B + m_total` for a direct summation.
pub(crate) fn direct_value(s: &Summation) -> Option<Constant> {
    let k = s.k.as_rational()?;
    let m = s.m_total.as_rational()?;
    Some(Constant::Rational(k * &s.budget + m))
}
