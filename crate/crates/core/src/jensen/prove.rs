//! The decision procedure: normalize, pick a route, assemble a certificate.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::case2::{prove_case2, Case2Error};
use super::certificate::{Conclusion, ProofCertificate, Route, Summation, TouchPointSolution};
use super::cubic::theorem5_cubic;
use super::homogeneous::normalize_homogeneous;
use super::problem::ProblemSpec;
use super::sampling::{sampling_check, ConstraintSampler, DEFAULT_SAMPLES, DEFAULT_SEED};
use super::split::{auto_split, prove_with_split, SplitError};
use super::theorem1::{prove_theorem1, summation, CurveStepError, Theorem1Error};
use crate::algebra::rational::{format_q, from_f64_exact, to_f64};
use crate::basecurve::{select_oriented, BaseCurve, Constant, ConstraintFamily, FamilyKind};
use crate::certify::evidence::{DEFAULT_GRID, DEFAULT_TOL};
use crate::certify::{numeric_evidence, EvidenceReport, EvidenceVerdict, Interval, NumericRange};
use crate::expr::Expr;

#[derive(Debug, Clone, PartialEq)]
pub struct ProveOptions {
    /// Tolerance for numeric evidence and the sampling check.
    pub numeric_tol: f64,
    pub seed: u64,
    /// Points for the sampling check; 0 skips it.
    pub samples: usize,
    pub grid: usize,
    /// Region `G` to use instead of searching for one.
    pub split: Option<Interval>,
}

impl Default for ProveOptions {
    fn default() -> Self {
        ProveOptions {
            numeric_tol: DEFAULT_TOL,
            seed: DEFAULT_SEED,
            samples: DEFAULT_SAMPLES,
            grid: DEFAULT_GRID,
            split: None,
        }
    }
}

pub fn prove(problem: &ProblemSpec) -> ProofCertificate {
    prove_with(problem, &ProveOptions::default())
}

pub fn prove_with(problem: &ProblemSpec, opts: &ProveOptions) -> ProofCertificate {
    let mut cert = ProofCertificate::empty(problem, Route::Failure, opts.seed, opts.numeric_tol);
    if let Err(e) = problem.validate() {
        cert.diagnostics.push(format!("invalid problem: {e}"));
        return cert;
    }
    let problem = if problem.homogeneous.is_some() {
        match normalize_homogeneous(problem, opts.seed) {
            Ok(p) => {
                cert.original = Some(problem.clone());
                cert.problem = p.clone();
                cert.diagnostics.push(format!(
                    "homogeneous: assumed {}",
                    p.constraint.describe()
                ));
                p
            }
            Err(e) => {
                cert.diagnostics.push(format!("normalization failed: {e}"));
                return cert;
            }
        }
    } else {
        problem.clone()
    };
    if matches!(problem.constraint.family, ConstraintFamily::Free) {
        cert.diagnostics.push("no constraint: nothing fixes the touch point".into());
        return cert;
    }
    let bound = match bound_value(&problem) {
        Ok(b) => b,
        Err(msg) => {
            cert.diagnostics.push(msg);
            return cert;
        }
    };
    if problem.is_heterogeneous() {
        heterogeneous(&problem, opts, &mut cert);
    } else {
        symmetric(&problem, opts, &mut cert);
    }
    if cert.route != Route::Failure {
        conclude(&problem, bound.as_ref(), &mut cert);
    }
    if cert.route != Route::Failure && opts.samples > 0 {
        sample(&problem, bound.as_ref(), opts, &mut cert);
    }
    cert
}

fn bound_value(p: &ProblemSpec) -> Result<Option<BigRational>, String> {
    let Some(b) = &p.bound else { return Ok(None) };
    if b.has_var() {
        return Err(format!("bound {b} depends on the variables; mark the problem homogeneous"));
    }
    b.eval_exact(&BigRational::zero())
        .map(Some)
        .map_err(|e| format!("bound {b} is not an exact rational: {e}"))
}

fn record_exact(cert: &mut ProofCertificate, curve: BaseCurve, step: super::theorem1::CurveStep, s: Summation) {
    cert.x0 = Some(curve.x0.clone());
    cert.curves.push(curve);
    cert.factorizations.push(step.factor);
    cert.sign_certs.extend(step.claims);
    cert.summation = Some(s);
}

fn symmetric(p: &ProblemSpec, opts: &ProveOptions, cert: &mut ProofCertificate) {
    let f = &p.functions[0];
    let x0 = match &p.touch_point {
        Some(x) => x.clone(),
        None => match p.constraint.touch_point(&p.domain) {
            Ok(x) => x,
            Err(e) => {
                cert.diagnostics.push(format!("touch point: {e}"));
                return;
            }
        },
    };
    if !p.domain.contains(&x0) {
        cert.diagnostics.push(format!("touch point {} lies outside {}", format_q(&x0), p.domain));
        return;
    }
    cert.x0 = Some(x0.clone());
    if p.n == 1 {
        match single_point(f, &x0) {
            Some(s) => {
                cert.route = Route::SinglePoint;
                cert.summation = Some(s);
            }
            None => cert.diagnostics.push(format!("f({}) is not exact", format_q(&x0))),
        }
        return;
    }
    if try_cubic(p, &x0, cert) {
        return;
    }
    let selection = match select_oriented(f, &p.constraint, &x0, p.direction.is_upper()) {
        Ok(s) => s,
        Err(e) => {
            cert.diagnostics.push(format!("curve selection: {e}"));
            return;
        }
    };
    for r in &selection.rejected {
        cert.diagnostics.push(format!("{} ruled out: {}", r.candidate, r.reason));
    }
    let rational_f = f.lower_to_rational().is_ok();
    let (exact, numeric): (Vec<BaseCurve>, Vec<BaseCurve>) =
        selection.candidates.into_iter().partition(|c| rational_f && c.is_rational());
    // a direct proof with any candidate beats a split with an earlier one
    let mut crossing = Vec::new();
    for curve in &exact {
        match try_direct(p, curve, opts, cert) {
            Ok(true) => return,
            Ok(false) => crossing.push(curve),
            Err(msg) => cert.diagnostics.push(format!("{}: {msg}", curve.label())),
        }
    }
    for curve in crossing {
        match try_split(p, curve, opts, cert) {
            Ok(()) => return,
            Err(msg) => cert.diagnostics.push(format!("{}: {msg}", curve.label())),
        }
    }
    if !numeric.is_empty() {
        numeric_route(p, &x0, numeric, opts, cert);
    }
}

fn single_point(f: &Expr, x0: &BigRational) -> Option<Summation> {
    let v = Constant::from_surd(&f.eval_surd(x0)?);
    Some(Summation {
        rule: super::certificate::SummationRule::Direct,
        k: Constant::zero(),
        m_total: v.clone(),
        budget: x0.clone(),
        value: v,
    })
}

/// Cubic polynomial, sum constraint, nonnegative variables.
fn try_cubic(p: &ProblemSpec, x0: &BigRational, cert: &mut ProofCertificate) -> bool {
    let f = &p.functions[0];
    let Ok(c) = p.constraint.canonical() else { return false };
    let nonneg = p.domain.lo.as_ref().is_some_and(|lo| !lo.is_negative());
    if !matches!(c.family, ConstraintFamily::Sum) || !nonneg || !x0.is_positive() {
        return false;
    }
    let Some(poly) = f.lower_to_rational().ok().and_then(|r| r.as_polynomial()) else {
        return false;
    };
    if poly.degree() != Some(3) {
        return false;
    }
    let poly = poly.scale(&BigRational::from_integer(p.sigma().into()));
    match theorem5_cubic(&poly.coeff(3), &poly.coeff(2), &poly.coeff(1), &poly.coeff(0), p.n, x0) {
        Ok(proof) => {
            cert.route = Route::Theorem5Cubic;
            if let Ok(curve) = crate::basecurve::tangent_line(f, x0) {
                if let Ok(s) = summation(f, &curve, &c) {
                    cert.summation = Some(s);
                }
                cert.curves.push(curve);
            }
            cert.sign_certs.push(proof.claim);
            cert.theorem5 = Some(proof.data);
            true
        }
        Err(e) => {
            cert.diagnostics.push(format!("cubic fast path: {e}"));
            false
        }
    }
}

/// `Ok(true)` on success, `Ok(false)` when the curve crosses `f` so a
/// split may still work.
fn try_direct(p: &ProblemSpec, curve: &BaseCurve, opts: &ProveOptions, cert: &mut ProofCertificate) -> Result<bool, String> {
    if opts.split.is_some() {
        return Ok(false);
    }
    match prove_theorem1(&p.functions[0], curve, &p.constraint, &p.domain, p.direction) {
        Ok(proof) => {
            cert.route = Route::Theorem1;
            record_exact(cert, curve.clone(), proof.step, proof.summation);
            Ok(true)
        }
        Err(Theorem1Error::Step(CurveStepError::WrongSign { witness, .. })) => {
            if let Some(w) = witness {
                cert.diagnostics.push(format!(
                    "{} crosses f: the cofactor has the wrong sign at x = {}",
                    curve.label(),
                    format_q(&w.negative_at)
                ));
            }
            Ok(false)
        }
        Err(e) => Err(e.to_string()),
    }
}

fn try_split(p: &ProblemSpec, curve: &BaseCurve, opts: &ProveOptions, cert: &mut ProofCertificate) -> Result<(), String> {
    let f = &p.functions[0];
    let g = match &opts.split {
        Some(g) => g.clone(),
        None => auto_split(f, curve, &p.domain, p.direction).map_err(|e| e.to_string())?,
    };
    let proof = prove_with_split(f, curve, &p.constraint, &p.domain, Some(&g), p.direction)
        .map_err(|e: SplitError| e.to_string())?;
    cert.route = Route::Theorem2Split;
    record_exact(cert, curve.clone(), proof.step, proof.summation);
    cert.split = proof.split;
    Ok(())
}

/// Sampling range for single-variable evidence: the domain, clipped to the
/// largest value the constraint allows when variables are nonnegative.
pub(crate) fn evidence_range(p: &ProblemSpec, x0: f64) -> NumericRange {
    let mut iv = p.domain.clone();
    let nonneg = iv.lo.as_ref().is_some_and(|lo| !lo.is_negative());
    if let (true, Some(cap)) = (nonneg, p.constraint.variable_cap()) {
        if let Some(capq) = from_f64_exact(cap) {
            if let Some(clipped) = Interval::new(None, Some(capq), false, false).ok().and_then(|c| iv.intersect(&c)) {
                iv = clipped;
            }
        }
    }
    NumericRange::from_interval(&iv, 100.0 * x0.abs().max(1.0))
}

fn evidence_for(f: &Expr, g: &Expr, sigma: i8, range: &NumericRange, opts: &ProveOptions) -> Result<EvidenceReport, String> {
    let r = if sigma > 0 {
        numeric_evidence(f, g, range, opts.grid, opts.numeric_tol)
    } else {
        numeric_evidence(g, f, range, opts.grid, opts.numeric_tol)
    };
    r.map_err(|e| e.to_string())
}

fn numeric_route(p: &ProblemSpec, x0: &BigRational, curves: Vec<BaseCurve>, opts: &ProveOptions, cert: &mut ProofCertificate) {
    let f = &p.functions[0];
    let range = evidence_range(p, to_f64(x0));
    let mut chosen = None;
    for curve in curves {
        match evidence_for(f, &curve.expr, p.sigma(), &range, opts) {
            Ok(report) => {
                if report.verdict == EvidenceVerdict::HoldsNumerically && chosen.is_none() {
                    chosen = Some(curve.clone());
                } else if report.verdict == EvidenceVerdict::Violated {
                    if let Some(w) = &report.witness {
                        cert.diagnostics.push(format!(
                            "{} crosses f numerically near x = {}",
                            curve.label(),
                            format_q(&w.point)
                        ));
                    }
                }
                cert.numeric_evidence.push(report);
            }
            Err(e) => cert.diagnostics.push(format!("{}: evidence failed: {e}", curve.label())),
        }
    }
    let Some(curve) = chosen else { return };
    match summation(f, &curve, &p.constraint) {
        Ok(s) => cert.summation = Some(s),
        Err(e) => {
            cert.diagnostics.push(e.to_string());
            return;
        }
    }
    cert.route = Route::NumericEvidenceOnly;
    cert.curves.push(curve);
}

fn heterogeneous(p: &ProblemSpec, opts: &ProveOptions, cert: &mut ProofCertificate) {
    match prove_case2(&p.functions, &p.constraint, &p.domain, p.direction) {
        Ok(proof) => {
            cert.route = Route::Case2Heterogeneous;
            cert.touch_points = Some(proof.solution);
            cert.curves = proof.curves;
            for step in proof.steps {
                cert.factorizations.push(step.factor);
                cert.sign_certs.extend(step.claims);
            }
            cert.summation = Some(proof.summation);
        }
        Err(Case2Error::NonRationalTouchPoint { solution }) => {
            cert.diagnostics.push("touch points are irrational; checking curves numerically".into());
            numeric_case2(p, *solution, opts, cert);
        }
        Err(e) => cert.diagnostics.push(format!("heterogeneous route: {e}")),
    }
}

/// Float tangents `s l(x) + m_j` at irrational touch points.
fn numeric_case2(p: &ProblemSpec, solution: TouchPointSolution, opts: &ProveOptions, cert: &mut ProofCertificate) {
    let Some(l) = p.constraint.l() else { return };
    let s = solution.common_slope;
    let mut all_hold = true;
    let mut value = 0.0;
    let mut m_total = 0.0;
    for (j, &x) in solution.points.iter().enumerate() {
        let f = p.function(j);
        let (Ok(fx), Ok(lx), Some(xq), Some(sq)) =
            (f.eval_numeric(x), l.eval_numeric(x), from_f64_exact(x), from_f64_exact(s))
        else {
            cert.diagnostics.push(format!("function {} cannot be evaluated at its touch point", j + 1));
            return;
        };
        let m = fx - s * lx;
        let Some(mq) = from_f64_exact(m) else { return };
        let expr = Expr::constant(sq).mul(l.clone()).add(Expr::constant(mq));
        let range = evidence_range(p, x);
        match evidence_for(f, &expr, p.sigma(), &range, opts) {
            Ok(r) => {
                all_hold &= r.verdict == EvidenceVerdict::HoldsNumerically;
                cert.numeric_evidence.push(r);
            }
            Err(e) => {
                cert.diagnostics.push(format!("function {}: evidence failed: {e}", j + 1));
                all_hold = false;
            }
        }
        value += fx;
        m_total += m;
        cert.curves.push(BaseCurve {
            family: if l == Expr::var() { FamilyKind::Line } else { FamilyKind::General },
            alpha: None,
            k: Constant::Numeric { approx: s },
            m: Constant::Numeric { approx: m },
            x0: xq,
            l: l.clone(),
            expr,
        });
    }
    cert.touch_points = Some(solution);
    if !all_hold {
        return;
    }
    let budget = p.constraint.canonical().map(|c| c.budget).unwrap_or_else(|_| p.constraint.budget.clone());
    cert.summation = Some(Summation {
        rule: super::certificate::SummationRule::CommonSlope,
        k: Constant::Numeric { approx: s },
        m_total: Constant::Numeric { approx: m_total },
        budget,
        value: Constant::Numeric { approx: value },
    });
    cert.route = Route::NumericEvidenceOnly;
}

fn describe_lhs(p: &ProblemSpec) -> String {
    if !p.is_heterogeneous() {
        return format!("sum of f(x_j) with f(x) = {}", p.functions[0]);
    }
    let terms: Vec<String> = (1..=p.n).map(|j| format!("f_{j}(x_{j})")).collect();
    let defs: Vec<String> = p.functions.iter().enumerate().map(|(j, f)| format!("f_{}(x) = {f}", j + 1)).collect();
    format!("{} with {}", terms.join(" + "), defs.join(", "))
}

fn conclude(p: &ProblemSpec, bound: Option<&BigRational>, cert: &mut ProofCertificate) {
    let Some(s) = &cert.summation else {
        cert.diagnostics.push("no summation recorded".into());
        return;
    };
    let Some(value) = s.value.as_rational().cloned() else {
        cert.diagnostics.push(format!("the configuration value {} is not rational", s.value));
        return;
    };
    if let Some(a) = bound {
        let implied = if p.direction.is_upper() { value <= *a } else { value >= *a };
        if !implied {
            cert.diagnostics.push(format!(
                "the bound {} is not implied: the equality configuration gives {}",
                format_q(a),
                format_q(&value)
            ));
            cert.route = Route::Failure;
            return;
        }
    }
    let target = bound.cloned().unwrap_or_else(|| value.clone());
    let statement = format!(
        "{} {} {} for {} and every x_j in {}",
        describe_lhs(p),
        p.direction.symbol(),
        format_q(&target),
        p.constraint.describe(),
        p.domain
    );
    cert.conclusion = Some(Conclusion {
        direction: p.direction,
        n: p.n,
        n_f_x0: value.clone(),
        bound: bound.filter(|a| **a != value).cloned(),
        statement,
    });
}

fn sample(p: &ProblemSpec, bound: Option<&BigRational>, opts: &ProveOptions, cert: &mut ProofCertificate) {
    let centers = match (&cert.touch_points, &cert.x0) {
        (Some(t), _) => t.points.clone(),
        (None, Some(x0)) => vec![to_f64(x0); p.n],
        _ => return,
    };
    let target = match (bound, &cert.summation) {
        (Some(a), _) => to_f64(a),
        (None, Some(s)) => s.value.approx(),
        _ => return,
    };
    match ConstraintSampler::new(&p.constraint, &p.domain, centers) {
        Ok(sampler) => {
            let check = sampling_check(&p.functions, &sampler, target, p.sigma(), opts.samples, opts.seed, opts.numeric_tol);
            if !check.passed {
                cert.diagnostics.push(format!(
                    "sampling found the inequality {} {target} violated by {:e} at {:?}",
                    p.direction.symbol(),
                    -check.worst_gap,
                    check.worst_point
                ));
            }
            cert.sampling = Some(check);
        }
        Err(e) => cert.diagnostics.push(format!("sampling skipped: {e}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{q, qi};
    use crate::algebra::Polynomial;
    use crate::basecurve::ConstraintSpec;
    use crate::jensen::problem::{Direction, Homogeneity};

    fn e(s: &str) -> Expr {
        Expr::parse(s).unwrap()
    }

    fn quick() -> ProveOptions {
        ProveOptions {
            samples: 2_000,
            ..ProveOptions::default()
        }
    }

    fn symmetric(f: &str, c: ConstraintSpec, domain: Interval, dir: Direction) -> ProblemSpec {
        ProblemSpec::symmetric("t", e(f), c, domain, dir)
    }

    #[test]
    fn baltic_quartet_is_direct() {
        let p = symmetric("x/(x^3+8)", ConstraintSpec::sum(qi(4), 4), Interval::open(qi(0), qi(4)), Direction::UpperBound)
            .with_bound(Expr::constant(q(4, 9)));
        let c = prove_with(&p, &quick());
        assert_eq!(c.route, Route::Theorem1, "{:?}", c.diagnostics);
        assert_eq!(c.factorizations[0].t, Polynomial::from_ints(&[-8, -5, -2]));
        assert_eq!(c.conclusion.as_ref().unwrap().n_f_x0, q(4, 9));
        assert!(c.conclusion.as_ref().unwrap().bound.is_none());
        assert!(c.sampling.as_ref().unwrap().passed);
    }

    #[test]
    fn quintic_needs_the_split() {
        let p = symmetric("10*x^3 - 9*x^5", ConstraintSpec::sum(qi(1), 3), Interval::open_closed(qi(0), qi(1)), Direction::LowerBound);
        let c = prove_with(&p, &quick());
        assert_eq!(c.route, Route::Theorem2Split, "{:?}", c.diagnostics);
        assert_eq!(c.split.as_ref().unwrap().g, Interval::closed(q(9, 10), qi(1)));
        assert!(c.sampling.as_ref().unwrap().passed);
    }

    #[test]
    fn cubic_takes_the_fast_path() {
        let p = symmetric("x*(1-x)^2", ConstraintSpec::sum(qi(1), 3), Interval::at_least(qi(0)), Direction::UpperBound)
            .with_bound(Expr::constant(q(4, 9)));
        let c = prove_with(&p, &quick());
        assert_eq!(c.route, Route::Theorem5Cubic, "{:?}", c.diagnostics);
        let t5 = c.theorem5.as_ref().unwrap();
        assert_eq!((t5.a.clone(), t5.b.clone()), (qi(-1), qi(2)));
        assert_eq!(c.conclusion.unwrap().n_f_x0, q(4, 9));
    }

    #[test]
    fn reciprocal_mean_curve() {
        let c = ConstraintSpec::new(ConstraintFamily::Custom { l: e("1/(4+x)") }, qi(1), 5).unwrap();
        let p = symmetric("x/(4+x^2)", c, Interval::at_least(qi(0)), Direction::UpperBound).with_bound(Expr::int(1));
        let c = prove_with(&p, &quick());
        assert_eq!(c.route, Route::Theorem1, "{:?}", c.diagnostics);
        assert_eq!(c.curves[0].k, Constant::Rational(qi(-3)));
        assert_eq!(c.curves[0].m, Constant::Rational(q(4, 5)));
        assert!(c.sampling.unwrap().passed);
    }

    #[test]
    fn radical_function_is_evidence_only() {
        let c = ConstraintSpec::new(ConstraintFamily::PowerSum { alpha: qi(2) }, qi(12), 3).unwrap();
        let p = symmetric("x*root(3, 12 - x^2)", c, Interval::above(qi(0)), Direction::UpperBound).with_bound(Expr::int(12));
        let c = prove_with(&p, &quick());
        assert_eq!(c.route, Route::NumericEvidenceOnly, "{:?}", c.diagnostics);
        assert!(!c.is_exact());
        assert_eq!(c.curves[0].family, FamilyKind::Line);
        assert_eq!(c.numeric_evidence.len(), 2);
        assert!(c.numeric_evidence.iter().all(|r| r.verdict == EvidenceVerdict::HoldsNumerically));
        assert_eq!(c.conclusion.unwrap().n_f_x0, qi(12));
        assert!(c.numeric_evidence.iter().all(|r| r.label == crate::certify::EVIDENCE_LABEL));
    }

    #[test]
    fn heterogeneous_homogeneous_problem() {
        let fs = vec![e("1/x"), e("1/x"), e("4/x"), e("16/x")];
        let p = ProblemSpec {
            id: "w".into(),
            functions: fs,
            n: 4,
            constraint: ConstraintSpec::new(ConstraintFamily::Free, qi(0), 4).unwrap(),
            domain: Interval::above(qi(0)),
            direction: Direction::LowerBound,
            bound: Some(e("64/x")),
            touch_point: None,
            homogeneous: Some(Homogeneity {
                degree: -1,
                target: ConstraintSpec::sum(qi(8), 4),
            }),
        };
        let c = prove_with(&p, &quick());
        assert_eq!(c.route, Route::Case2Heterogeneous, "{:?}", c.diagnostics);
        assert!(c.original.is_some());
        assert_eq!(c.conclusion.as_ref().unwrap().n_f_x0, qi(8));
        assert_eq!(c.touch_points.unwrap().exact, Some(vec![qi(1), qi(1), qi(2), qi(4)]));
        assert!(c.sampling.unwrap().passed);
    }

    #[test]
    fn single_variable_is_pinned() {
        let p = symmetric("x*(1-x)^2", ConstraintSpec::sum(qi(1), 1), Interval::at_least(qi(0)), Direction::UpperBound);
        let c = prove_with(&p, &quick());
        assert_eq!(c.route, Route::SinglePoint);
        assert_eq!(c.conclusion.unwrap().n_f_x0, qi(0));
    }

    #[test]
    fn too_strong_a_bound_fails() {
        let p = symmetric("x/(x^3+8)", ConstraintSpec::sum(qi(4), 4), Interval::open(qi(0), qi(4)), Direction::UpperBound)
            .with_bound(Expr::constant(q(2, 5)));
        let c = prove_with(&p, &quick());
        assert_eq!(c.route, Route::Failure);
        assert!(c.diagnostics.iter().any(|d| d.contains("not implied")), "{:?}", c.diagnostics);
    }

    #[test]
    fn odd_cube_fails_with_diagnostics() {
        let p = symmetric("x^3", ConstraintSpec::sum(qi(0), 2), Interval::open(qi(-1), qi(1)), Direction::LowerBound);
        let c = prove_with(&p, &quick());
        assert_eq!(c.route, Route::Failure);
        assert!(!c.diagnostics.is_empty());
    }
}
