//! Split route: the curve inequality on part of the domain, a minimum
//! argument on the rest `G`.

use num_rational::BigRational;
use num_traits::One;

use super::certificate::{ClaimRole, SplitData, Summation};
use super::problem::Direction;
use super::theorem1::{certify_curve, summation, verdict_sign, CurveStep, CurveStepError, Theorem1Error};
use crate::algebra::rational::{ceil_to, floor_to, format_q, sign_of};
use crate::algebra::Polynomial;
use crate::basecurve::{BaseCurve, ConstraintSpec};
use crate::certify::{certified_min, Interval, MinError, RootLocation, Sturm};
use crate::expr::Expr;

/// Isolation width used for the crossing root before rounding.
const CROSSING_WIDTH: (i64, i64) = (1, 1_000_000);
/// Denominators tried when rounding the split point.
const NICE_DENOMINATORS: [u32; 2] = [10, 100];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SplitError {
    #[error("no split found: {0}")]
    NoSplitFound(String),
    #[error(transparent)]
    Step(#[from] CurveStepError),
    #[error(transparent)]
    Summation(#[from] Theorem1Error),
    #[error("invalid split region: {0}")]
    BadRegion(String),
    #[error("split condition fails: min_G + (n-1) min_I = {lhs} < {rhs}")]
    SplitConditionFails { lhs: String, rhs: String },
    #[error("minimum not certifiable: {0}")]
    MinimumUncertifiable(#[from] MinError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitProof {
    pub step: CurveStep,
    pub summation: Summation,
    pub split: Option<SplitData>,
}

/// Gaps between consecutive roots inside `domain`, each with a point
/// strictly inside it. Gap `i` lies left of root `i` and right of root `i-1`.
fn gap_points(roots: &[RootLocation], domain: &Interval) -> Vec<Option<BigRational>> {
    let one = BigRational::one();
    let two = BigRational::from_integer(2.into());
    let mut out = Vec::with_capacity(roots.len() + 1);
    for i in 0..=roots.len() {
        let a = if i == 0 { domain.lo.clone() } else { Some(roots[i - 1].right().clone()) };
        let b = if i == roots.len() { domain.hi.clone() } else { Some(roots[i].left().clone()) };
        out.push(match (a, b) {
            (Some(a), Some(b)) if a < b => Some((a + b) / &two),
            (Some(_), Some(_)) => None,
            (Some(a), None) => Some(a + &one),
            (None, Some(b)) => Some(b - &one),
            (None, None) => Some(BigRational::from_integer(0.into())),
        });
    }
    out
}

enum Side {
    Right(RootLocation),
    Left(RootLocation),
}

fn crossing(t: &Polynomial, required: i8, x0: &BigRational, domain: &Interval) -> Result<Side, SplitError> {
    let s = Sturm::new(t).map_err(|_| SplitError::NoSplitFound("zero cofactor".into()))?;
    let width = BigRational::new(CROSSING_WIDTH.0.into(), CROSSING_WIDTH.1.into());
    let roots: Vec<RootLocation> = s.isolate(domain).iter().map(|r| s.refine(r, &width)).collect();
    let points = gap_points(&roots, domain);
    let bad = |i: usize| {
        points[i]
            .as_ref()
            .is_some_and(|p| sign_of(&t.eval(p)) * required < 0)
    };
    let right = (1..=roots.len()).find(|&i| roots[i - 1].left() >= x0 && bad(i));
    let left = (0..roots.len()).rev().find(|&i| roots[i].right() <= x0 && bad(i));
    let around = (0..=roots.len()).any(|i| {
        bad(i)
            && (i == 0 || roots[i - 1].right() < x0)
            && (i == roots.len() || roots[i].left() > x0)
    });
    if around {
        return Err(SplitError::NoSplitFound("the curve is on the wrong side next to the touch point".into()));
    }
    match (left, right) {
        (Some(_), Some(_)) => Err(SplitError::NoSplitFound("the curve crosses on both sides of the touch point".into())),
        (None, Some(i)) => Ok(Side::Right(roots[i - 1].clone())),
        (Some(i), None) => Ok(Side::Left(roots[i].clone())),
        (None, None) => Err(SplitError::NoSplitFound("no sign change of the cofactor in the domain".into())),
    }
}

/// Region `G` next to the first crossing of the curve, with a rounded
/// boundary when one still certifies.
pub fn auto_split(
    f: &Expr,
    curve: &BaseCurve,
    domain: &Interval,
    direction: Direction,
) -> Result<Interval, SplitError> {
    let sigma = direction.sigma();
    let step = match certify_curve(f, curve, domain, sigma, 0) {
        Ok(_) => return Err(SplitError::NoSplitFound("the curve already holds on the whole domain".into())),
        Err(CurveStepError::WrongSign { step, .. }) => step,
        Err(e) => return Err(e.into()),
    };
    let claim = step
        .claims
        .iter()
        .find(|c| c.role == ClaimRole::Cofactor)
        .expect("wrong sign implies a cofactor claim");
    let required = verdict_sign(claim.required);
    let x0 = &curve.x0;
    let side = crossing(&step.factor.t, required, x0, domain)?;
    let (edge, candidates): (&BigRational, Vec<BigRational>) = match &side {
        Side::Right(r) => {
            let lo = r.left();
            let mut c: Vec<BigRational> = NICE_DENOMINATORS.iter().map(|&d| floor_to(lo, d)).collect();
            c.push(lo.clone());
            (lo, c)
        }
        Side::Left(r) => {
            let hi = r.right();
            let mut c: Vec<BigRational> = NICE_DENOMINATORS.iter().map(|&d| ceil_to(hi, d)).collect();
            c.push(hi.clone());
            (hi, c)
        }
    };
    for p in candidates {
        let (g, rest) = match side {
            Side::Right(_) if p > *x0 && p <= *edge => (
                Interval::new(Some(p.clone()), domain.hi.clone(), false, domain.hi_open),
                Interval::new(domain.lo.clone(), Some(p.clone()), domain.lo_open, true),
            ),
            Side::Left(_) if p < *x0 && p >= *edge => (
                Interval::new(domain.lo.clone(), Some(p.clone()), domain.lo_open, false),
                Interval::new(Some(p.clone()), domain.hi.clone(), true, domain.hi_open),
            ),
            _ => continue,
        };
        let (Ok(g), Ok(rest)) = (g, rest) else { continue };
        if !domain.contains_interval(&g) {
            continue;
        }
        if certify_curve(f, curve, &rest, sigma, 0).is_ok() {
            return Ok(g);
        }
    }
    Err(SplitError::NoSplitFound(format!(
        "no split point between the touch point {} and the crossing near {} certifies",
        format_q(x0),
        format_q(edge)
    )))
}

/// `I \ G` for a region `G` sharing an end with `I`.
pub fn complement(domain: &Interval, g: &Interval) -> Result<Interval, SplitError> {
    let bad = |why: &str| SplitError::BadRegion(format!("{g} in {domain}: {why}"));
    if !domain.contains_interval(g) {
        return Err(bad("not contained in the domain"));
    }
    let at_hi = g.hi == domain.hi && g.hi_open == domain.hi_open;
    let at_lo = g.lo == domain.lo && g.lo_open == domain.lo_open;
    let rest = if at_hi && !at_lo {
        Interval::new(domain.lo.clone(), g.lo.clone(), domain.lo_open, !g.lo_open)
    } else if at_lo && !at_hi {
        Interval::new(g.hi.clone(), domain.hi.clone(), !g.hi_open, domain.hi_open)
    } else {
        return Err(bad("must share exactly one end with the domain"));
    };
    rest.map_err(|_| bad("leaves nothing of the domain"))
}

/// Curve inequality on `I \ G` plus `min_G + (n - 1) min_I >= n f(x0)`.
/// Without `G` this is the direct route.
pub fn prove_with_split(
    f: &Expr,
    curve: &BaseCurve,
    c: &ConstraintSpec,
    domain: &Interval,
    g: Option<&Interval>,
    direction: Direction,
) -> Result<SplitProof, SplitError> {
    let sigma = direction.sigma();
    let summation = summation(f, curve, c)?;
    let Some(g) = g else {
        let step = certify_curve(f, curve, domain, sigma, 0)?;
        return Ok(SplitProof {
            step,
            summation,
            split: None,
        });
    };
    let rest = complement(domain, g)?;
    if !rest.contains(&curve.x0) {
        return Err(SplitError::BadRegion(format!(
            "touch point {} lies in G = {g}",
            format_q(&curve.x0)
        )));
    }
    let step = certify_curve(f, curve, &rest, sigma, 0)?;
    let phi = f
        .lower_to_rational()
        .map_err(|_| CurveStepError::NotRational(f.to_string()))?
        .scale(&BigRational::from_integer(sigma.into()));
    let min_g = certified_min(&phi, g)?;
    let min_i = certified_min(&phi, domain)?;
    let n = BigRational::from_integer(c.n.into());
    let lhs = min_g.value.lower() + (&n - BigRational::one()) * min_i.value.lower();
    let rhs = n * phi.eval(&curve.x0).expect("no pole at the touch point");
    if lhs < rhs {
        return Err(SplitError::SplitConditionFails {
            lhs: format_q(&lhs),
            rhs: format_q(&rhs),
        });
    }
    Ok(SplitProof {
        step,
        summation,
        split: Some(SplitData {
            g: g.clone(),
            rest,
            min_g,
            min_i,
            lhs,
            rhs,
        }),
    })
}
