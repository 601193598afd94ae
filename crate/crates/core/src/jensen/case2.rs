//! Different functions per variable: one touch point per function, all
//! sharing the slope `f_j'(x_j) / l'(x_j)`.

use num_rational::BigRational;

use super::certificate::{Summation, SummationRule, TouchPointSolution};
use super::problem::Direction;
use super::theorem1::{certify_curve, CurveStep, CurveStepError};
use crate::algebra::rational::{approximate, format_q};
use crate::basecurve::{base_curve, derivative_at, BaseCurve, Constant, ConstraintSpec, CurveError};
use crate::certify::Interval;
use crate::expr::Expr;

/// Largest denominator tried when reading touch points as rationals.
pub const MAX_TOUCH_DENOMINATOR: u64 = 10_000;
const MONOTONE_GRID: usize = 400;
const BISECTION_STEPS: usize = 200;
/// Stand-in for an infinite end of the domain.
const FAR: f64 = 1e6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Case2Error {
    #[error("the constraint has no summed function")]
    NoConstraintFunction,
    #[error("f_{}'/l' is not strictly monotone on the domain", .function + 1)]
    NonMonotoneSlope { function: usize },
    #[error("the slope ratios are monotone in different directions")]
    MixedDirections,
    #[error("no touch points satisfy the constraint inside the domain")]
    NoSolutionInDomain,
    #[error("touch points are not rational (approximately {:?})", .solution.points)]
    NonRationalTouchPoint { solution: Box<TouchPointSolution> },
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("function {}: {error}", .function + 1)]
    Step { function: usize, error: CurveStepError },
}

/// Bounded float range for searches: the domain clipped to `cap`, with
/// infinite ends replaced by a large stand-in.
pub(crate) fn float_range(domain: &Interval, cap: Option<f64>) -> (f64, f64) {
    let (lo, hi) = domain.to_f64_bounds();
    let lo = if lo.is_finite() { lo } else { -FAR };
    let hi = match cap {
        Some(c) if c < hi => c,
        _ if hi.is_finite() => hi,
        _ => FAR,
    };
    (lo, hi)
}

struct Ratio {
    fd: Expr,
    ld: Expr,
}

impl Ratio {
    fn at(&self, x: f64) -> Option<f64> {
        let v = self.fd.eval_numeric(x).ok()? / self.ld.eval_numeric(x).ok()?;
        v.is_finite().then_some(v)
    }

    /// +1 increasing, -1 decreasing, `None` when not strictly monotone on
    /// the grid.
    fn direction(&self, lo: f64, hi: f64) -> Option<i8> {
        let vals: Vec<f64> = (1..MONOTONE_GRID)
            .filter_map(|i| self.at(lo + (hi - lo) * i as f64 / MONOTONE_GRID as f64))
            .collect();
        if vals.len() < MONOTONE_GRID / 2 {
            return None;
        }
        let up = vals.windows(2).all(|w| w[1] > w[0]);
        let down = vals.windows(2).all(|w| w[1] < w[0]);
        match (up, down) {
            (true, _) => Some(1),
            (_, true) => Some(-1),
            _ => None,
        }
    }

    /// Point where the ratio equals `s`, clamped to the ends of `[lo, hi]`.
    fn invert(&self, s: f64, dir: i8, lo: f64, hi: f64) -> f64 {
        let below = |x: f64| self.at(x).map_or(false, |v| (v - s) * f64::from(dir) < 0.0);
        let (mut a, mut b) = (lo, hi);
        if !below(a) {
            return a;
        }
        if below(b) {
            return b;
        }
        for _ in 0..BISECTION_STEPS {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            if below(m) {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    }
}

fn l_sum(l: &Expr, xs: &[f64]) -> f64 {
    xs.iter().map(|&x| l.eval_numeric(x).unwrap_or(f64::NAN)).sum()
}

/// Solves `sum l(x_j) = B` with `f_j'(x_j) / l'(x_j)` equal for all `j`.
pub fn solve_touchpoints(
    fs: &[Expr],
    l: &Expr,
    budget: &BigRational,
    domain: &Interval,
    cap: Option<f64>,
) -> Result<TouchPointSolution, Case2Error> {
    let (lo, hi) = float_range(domain, cap);
    let eps = 1e-9 * (hi - lo).max(1.0);
    let (lo, hi) = (lo + eps, hi - eps);
    let ld = l.differentiate();
    let ratios: Vec<Ratio> = fs
        .iter()
        .map(|f| Ratio {
            fd: f.differentiate(),
            ld: ld.clone(),
        })
        .collect();
    let dirs = ratios
        .iter()
        .enumerate()
        .map(|(j, r)| r.direction(lo, hi).ok_or(Case2Error::NonMonotoneSlope { function: j }))
        .collect::<Result<Vec<i8>, _>>()?;
    if dirs.iter().any(|&d| d != dirs[0]) {
        return Err(Case2Error::MixedDirections);
    }
    let b = crate::algebra::rational::to_f64(budget);
    let points_for = |x1: f64| -> Option<(Vec<f64>, f64)> {
        let s = ratios[0].at(x1)?;
        let mut xs = vec![x1];
        for (r, &d) in ratios.iter().zip(&dirs).skip(1) {
            xs.push(r.invert(s, d, lo, hi));
        }
        Some((xs, s))
    };
    let excess = |x1: f64| points_for(x1).map(|(xs, _)| l_sum(l, &xs) - b);
    let (Some(ea), Some(eb)) = (excess(lo), excess(hi)) else {
        return Err(Case2Error::NoSolutionInDomain);
    };
    if !(ea.is_finite() && eb.is_finite()) || ea.signum() == eb.signum() {
        return Err(Case2Error::NoSolutionInDomain);
    }
    let (mut a, mut z) = (lo, hi);
    for _ in 0..BISECTION_STEPS {
        let m = 0.5 * (a + z);
        if m <= a || m >= z {
            break;
        }
        match excess(m) {
            Some(e) if e.signum() == ea.signum() => a = m,
            Some(_) => z = m,
            None => return Err(Case2Error::NoSolutionInDomain),
        }
    }
    let (points, s) = points_for(0.5 * (a + z)).ok_or(Case2Error::NoSolutionInDomain)?;
    let spread = ratios
        .iter()
        .zip(&points)
        .filter_map(|(r, &x)| r.at(x))
        .map(|v| (v - s).abs() / s.abs().max(1.0))
        .fold(0.0, f64::max);
    let residuals = vec![(l_sum(l, &points) - b).abs(), spread];
    let mut solution = TouchPointSolution {
        points,
        exact: None,
        common_slope: s,
        exact_slope: None,
        residuals,
    };
    if let Some((xs, slope)) = exact_solution(fs, l, budget, domain, &solution.points) {
        solution.exact = Some(xs);
        solution.exact_slope = Some(slope);
    }
    Ok(solution)
}

/// Rational reading of the float touch points, kept only when it satisfies
/// the system exactly.
fn exact_solution(
    fs: &[Expr],
    l: &Expr,
    budget: &BigRational,
    domain: &Interval,
    points: &[f64],
) -> Option<(Vec<BigRational>, BigRational)> {
    let xs: Vec<BigRational> = points
        .iter()
        .map(|&x| approximate(x, MAX_TOUCH_DENOMINATOR))
        .collect::<Option<_>>()?;
    if !xs.iter().all(|x| domain.contains(x)) {
        return None;
    }
    let mut total = BigRational::from_integer(0.into());
    let mut slope: Option<BigRational> = None;
    for (f, x) in fs.iter().zip(&xs) {
        total += l.eval_surd(x)?.as_rational()?;
        let k = derivative_at(f, x).ok()?.div(&derivative_at(l, x).ok()?);
        let k = k.as_rational()?.clone();
        match &slope {
            Some(s) if *s != k => return None,
            Some(_) => {}
            None => slope = Some(k),
        }
    }
    (total == *budget).then_some((xs, slope?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Case2Proof {
    pub solution: TouchPointSolution,
    pub curves: Vec<BaseCurve>,
    pub steps: Vec<CurveStep>,
    pub summation: Summation,
}

/// `sum f_j(x_j) >= sum (k l(x_j) + m_j) = k B + sum m_j` (or `<=`).
pub fn prove_case2(
    fs: &[Expr],
    c: &ConstraintSpec,
    domain: &Interval,
    direction: Direction,
) -> Result<Case2Proof, Case2Error> {
    let l = c.l().ok_or(Case2Error::NoConstraintFunction)?;
    let budget = c.canonical().map(|c| c.budget).unwrap_or_else(|_| c.budget.clone());
    let solution = solve_touchpoints(fs, &l, &budget, domain, c.variable_cap())?;
    let Some(xs) = solution.exact.clone() else {
        return Err(Case2Error::NonRationalTouchPoint {
            solution: Box::new(solution),
        });
    };
    let mut curves = Vec::with_capacity(fs.len());
    let mut steps = Vec::with_capacity(fs.len());
    let mut m_total = Constant::zero();
    let mut value = Constant::zero();
    for (j, (f, x)) in fs.iter().zip(&xs).enumerate() {
        let curve = base_curve(f, &l, x)?;
        let step = certify_curve(f, &curve, domain, direction.sigma(), j)
            .map_err(|error| Case2Error::Step { function: j, error })?;
        m_total = m_total.add(&curve.m);
        value = value.add(&Constant::from_surd(&f.eval_surd(x).ok_or_else(|| Case2Error::Step {
            function: j,
            error: CurveStepError::NotRational(f.to_string()),
        })?));
        curves.push(curve);
        steps.push(step);
    }
    let k = Constant::Rational(solution.exact_slope.clone().expect("exact points carry a slope"));
    debug_assert_eq!(k.mul(&Constant::Rational(budget.clone())).add(&m_total), value);
    Ok(Case2Proof {
        solution,
        curves,
        steps,
        summation: Summation {
            rule: SummationRule::CommonSlope,
            k,
            m_total,
            budget,
            value,
        },
    })
}

/// `"x_1 = 1, x_2 = 1, ..."` for diagnostics.
pub fn describe_points(xs: &[BigRational]) -> String {
    xs.iter()
        .enumerate()
        .map(|(j, x)| format!("x_{} = {}", j + 1, format_q(x)))
        .collect::<Vec<_>>()
        .join(", ")
}
