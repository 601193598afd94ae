//! Independent re-check of a certificate from its own fields.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::certificate::{ClaimRole, ProofCertificate, Route, SignClaim, Summation, SummationRule};
use super::cubic::{cubic_of, tangent_gap};
use super::homogeneous::normalize_homogeneous;
use super::problem::ProblemSpec;
use super::split::complement;
use super::theorem1::{direct_value, required_verdict, summation_rule, verdict_sign};
use crate::algebra::rational::format_q;
use crate::algebra::{DoubleRootFactor, Polynomial};
use crate::basecurve::{admissibility_theorem3, admissibility_theorem4, BaseCurve, Constant, ConstraintFamily};
use crate::certify::{certified_min, EvidenceVerdict, Interval, SignVerdict, EVIDENCE_LABEL};
use crate::expr::Expr;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerifyError {
    #[error("malformed certificate: {0}")]
    Json(String),
    #[error("a failure certificate proves nothing")]
    NotAProof,
    #[error("check failed: {0}")]
    Check(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verification {
    /// Every step is exact; false for evidence-only certificates.
    pub exact: bool,
    pub checks: Vec<String>,
}

struct Checker {
    checks: Vec<String>,
}

impl Checker {
    fn ensure(&mut self, ok: bool, what: impl Into<String>) -> Result<(), VerifyError> {
        let what = what.into();
        if ok {
            self.checks.push(what);
            Ok(())
        } else {
            Err(VerifyError::Check(what))
        }
    }
}

fn fail(what: impl Into<String>) -> VerifyError {
    VerifyError::Check(what.into())
}

pub fn verify_json(json: &str) -> Result<Verification, VerifyError> {
    let cert = ProofCertificate::from_json(json).map_err(|e| VerifyError::Json(e.to_string()))?;
    verify_certificate(&cert)
}

pub fn verify_certificate(cert: &ProofCertificate) -> Result<Verification, VerifyError> {
    let mut ck = Checker { checks: Vec::new() };
    let p = &cert.problem;
    p.validate().map_err(|e| fail(format!("problem: {e}")))?;
    if let Some(orig) = &cert.original {
        let seed = cert.seeds.first().copied().unwrap_or_default();
        let again = normalize_homogeneous(orig, seed).map_err(|e| fail(format!("normalization: {e}")))?;
        ck.ensure(again == *p, "normalized problem matches the original")?;
    }
    match cert.route {
        Route::Failure => return Err(VerifyError::NotAProof),
        Route::NumericEvidenceOnly => {
            check_evidence(cert, &mut ck)?;
            check_conclusion(cert, &mut ck)?;
            return Ok(Verification {
                exact: false,
                checks: ck.checks,
            });
        }
        Route::SinglePoint => check_single(cert, &mut ck)?,
        Route::Theorem1 | Route::Theorem2Split => check_curve_route(cert, &mut ck)?,
        Route::Theorem5Cubic => check_cubic(cert, &mut ck)?,
        Route::Case2Heterogeneous => check_case2(cert, &mut ck)?,
    }
    ck.ensure(cert.numeric_evidence.is_empty(), "no numeric evidence inside an exact proof")?;
    check_conclusion(cert, &mut ck)?;
    Ok(Verification {
        exact: true,
        checks: ck.checks,
    })
}

fn surd(e: &Expr, x: &BigRational) -> Result<Constant, VerifyError> {
    e.eval_surd(x)
        .map(|s| Constant::from_surd(&s))
        .ok_or_else(|| fail(format!("{e} has no exact value at {}", format_q(x))))
}

fn same(a: &Constant, b: &Constant) -> bool {
    a.sub(b).sign() == Some(0)
}

fn touch_point(p: &ProblemSpec) -> Result<BigRational, VerifyError> {
    match &p.touch_point {
        Some(x) => Ok(x.clone()),
        None => p.constraint.touch_point(&p.domain).map_err(|e| fail(format!("touch point: {e}"))),
    }
}

fn check_tangency(f: &Expr, curve: &BaseCurve, ck: &mut Checker, tag: &str) -> Result<(), VerifyError> {
    let x0 = &curve.x0;
    let fv = surd(f, x0)?;
    let fd = surd(&f.differentiate(), x0)?;
    let lv = surd(&curve.l, x0)?;
    let ld = surd(&curve.l.differentiate(), x0)?;
    ck.ensure(same(&fv, &curve.k.mul(&lv).add(&curve.m)), format!("{tag}: curve meets f at x0 = {}", format_q(x0)))?;
    ck.ensure(same(&fd, &curve.k.mul(&ld)), format!("{tag}: curve has the slope of f at x0"))?;
    let rebuilt = curve.k.to_expr().mul(curve.l.clone()).add(curve.m.to_expr());
    let (a, b) = match (rebuilt.lower_to_rational(), curve.expr.lower_to_rational()) {
        (Ok(a), Ok(b)) => (a, b),
        _ => return Err(fail(format!("{tag}: curve is not rational"))),
    };
    ck.ensure((&a - &b).is_zero(), format!("{tag}: curve expression is k l + m"))
}

fn check_factor(f: &Expr, curve: &BaseCurve, factor: &DoubleRootFactor, ck: &mut Checker, tag: &str) -> Result<(), VerifyError> {
    ck.ensure(factor.x0 == curve.x0, format!("{tag}: factorization at the curve's touch point"))?;
    let frf = f.lower_to_rational().map_err(|_| fail(format!("{tag}: f is not rational")))?;
    let grf = curve.to_rational().ok_or_else(|| fail(format!("{tag}: curve is not rational")))?;
    let diff = &frf - &grf;
    let lhs = diff.num() * &factor.qden;
    let rhs = &factor.numerator() * diff.den();
    ck.ensure(lhs == rhs, format!("{tag}: f - g = (x - x0)^2 T / Q exactly"))
}

fn check_claim(claim: &SignClaim, poly: &Polynomial, region: &Interval, ck: &mut Checker, tag: &str) -> Result<(), VerifyError> {
    let c = &claim.certificate;
    ck.ensure(c.polynomial == *poly, format!("{tag}: {:?} claim is about the right polynomial", claim.role))?;
    ck.ensure(c.interval == *region, format!("{tag}: {:?} claim covers {region}", claim.role))?;
    c.check().map_err(|e| fail(format!("{tag}: sign certificate: {e}")))?;
    ck.ensure(
        c.verdict == claim.required && claim.required != SignVerdict::Indefinite,
        format!("{tag}: {:?} is {:?} as required", claim.role, claim.required),
    )
}

/// Denominator free of roots with a fixed sign, and `T` with the sign that
/// makes `sigma (f - g) >= 0`.
fn check_step(
    cert: &ProofCertificate,
    index: usize,
    factor: &DoubleRootFactor,
    region: &Interval,
    sigma: i8,
    ck: &mut Checker,
) -> Result<(), VerifyError> {
    let tag = format!("function {}", index + 1);
    let mine: Vec<&SignClaim> = cert.sign_certs.iter().filter(|c| c.function == index).collect();
    let den = mine
        .iter()
        .find(|c| c.role == ClaimRole::Denominator)
        .ok_or_else(|| fail(format!("{tag}: no denominator claim")))?;
    check_claim(den, &factor.qden, region, ck, &tag)?;
    ck.ensure(den.certificate.root_count == 0, format!("{tag}: no pole on {region}"))?;
    if factor.t.is_zero() {
        return Ok(());
    }
    let cof = mine
        .iter()
        .find(|c| c.role == ClaimRole::Cofactor)
        .ok_or_else(|| fail(format!("{tag}: no cofactor claim")))?;
    ck.ensure(
        cof.required == required_verdict(sigma * verdict_sign(den.required)),
        format!("{tag}: cofactor sign matches the direction and the denominator sign"),
    )?;
    check_claim(cof, &factor.t, region, ck, &tag)
}

fn check_summation(p: &ProblemSpec, f: &Expr, curve: &BaseCurve, s: &Summation, ck: &mut Checker) -> Result<(), VerifyError> {
    ck.ensure(summation_rule(curve, &p.constraint) == Some(s.rule), format!("summation rule {:?} applies", s.rule))?;
    let n = BigRational::from_integer(p.n.into());
    ck.ensure(same(&s.value, &surd(f, &curve.x0)?.scale(&n)), "summed value is n f(x0)")?;
    let c = p.constraint.canonical().map_err(|e| fail(e.to_string()))?;
    let fprime = surd(&f.differentiate(), &curve.x0)?;
    let oriented = if p.direction.is_upper() { fprime.neg() } else { fprime };
    match s.rule {
        SummationRule::Direct => {
            let total = direct_value(s).ok_or_else(|| fail("direct summation needs rational k and m"))?;
            ck.ensure(same(&total, &s.value), "k B + n m equals n f(x0)")?;
            ck.ensure(s.budget == c.budget, "summation uses the constraint budget")?;
        }
        SummationRule::PowerMeanLine => {
            let alpha = match &c.family {
                ConstraintFamily::PowerSum { alpha } => alpha.clone(),
                _ => BigRational::zero(),
            };
            ck.ensure(
                admissibility_theorem3(&alpha, &oriented).is_admissible(),
                "line is admissible under the power-mean comparison",
            )?;
        }
        SummationRule::PowerMeanCurve => {
            let alpha = curve.alpha.clone().ok_or_else(|| fail("power curve without exponent"))?;
            ck.ensure(
                admissibility_theorem4(&alpha, &oriented).is_admissible(),
                "power curve is admissible under the power-mean comparison",
            )?;
        }
        SummationRule::CommonSlope => return Err(fail("common-slope summation in a symmetric proof")),
    }
    Ok(())
}

fn check_curve_route(cert: &ProofCertificate, ck: &mut Checker) -> Result<(), VerifyError> {
    let p = &cert.problem;
    let f = &p.functions[0];
    let (curve, factor) = match (cert.curves.as_slice(), cert.factorizations.as_slice()) {
        ([c], [fa]) => (c, fa),
        _ => return Err(fail("expected one curve and one factorization")),
    };
    ck.ensure(curve.x0 == touch_point(p)?, "curve touches at the equality point")?;
    check_tangency(f, curve, ck, "function 1")?;
    check_factor(f, curve, factor, ck, "function 1")?;
    let sigma = p.sigma();
    let region = match (&cert.route, &cert.split) {
        (Route::Theorem1, None) => p.domain.clone(),
        (Route::Theorem2Split, Some(s)) => {
            let rest = complement(&p.domain, &s.g).map_err(|e| fail(e.to_string()))?;
            ck.ensure(rest == s.rest, format!("rest of the domain is {rest}"))?;
            ck.ensure(rest.contains(&curve.x0), "touch point lies outside G")?;
            let phi = f
                .lower_to_rational()
                .map_err(|_| fail("f is not rational"))?
                .scale(&BigRational::from_integer(sigma.into()));
            let min_g = certified_min(&phi, &s.g).map_err(|e| fail(e.to_string()))?;
            let min_i = certified_min(&phi, &p.domain).map_err(|e| fail(e.to_string()))?;
            ck.ensure(min_g.value == s.min_g.value, format!("minimum on G = {}", s.g))?;
            ck.ensure(min_i.value == s.min_i.value, "minimum on the domain")?;
            let n = BigRational::from_integer(p.n.into());
            let lhs = min_g.value.lower() + (&n - BigRational::one()) * min_i.value.lower();
            let rhs = &n * phi.eval(&curve.x0).ok_or_else(|| fail("pole at x0"))?;
            ck.ensure(lhs == s.lhs && rhs == s.rhs, "split arithmetic recomputed")?;
            ck.ensure(lhs >= rhs, format!("min_G + (n-1) min_I = {} >= {}", format_q(&lhs), format_q(&rhs)))?;
            rest
        }
        _ => return Err(fail("split data does not match the route")),
    };
    check_step(cert, 0, factor, &region, sigma, ck)?;
    let s = cert.summation.as_ref().ok_or_else(|| fail("no summation"))?;
    check_summation(p, f, curve, s, ck)
}

fn check_cubic(cert: &ProofCertificate, ck: &mut Checker) -> Result<(), VerifyError> {
    let p = &cert.problem;
    let d = cert.theorem5.as_ref().ok_or_else(|| fail("no cubic data"))?;
    let c = p.constraint.canonical().map_err(|e| fail(e.to_string()))?;
    ck.ensure(matches!(c.family, ConstraintFamily::Sum), "sum constraint")?;
    ck.ensure(
        p.domain.lo.as_ref().is_some_and(|lo| *lo >= BigRational::zero()),
        "variables are nonnegative",
    )?;
    ck.ensure(d.n == p.n && d.x0 == touch_point(p)?, "n and x0 match the problem")?;
    let poly = p.functions[0]
        .lower_to_rational()
        .ok()
        .and_then(|r| r.as_polynomial())
        .ok_or_else(|| fail("f is not a polynomial"))?;
    let sigma = BigRational::from_integer(p.sigma().into());
    ck.ensure(cubic_of(d) == poly.scale(&sigma) && !d.a.is_zero(), "coefficients are those of sigma f")?;
    let two = BigRational::from_integer(2.into());
    let n = BigRational::from_integer(d.n.into());
    let near = &two * &d.a * &d.x0 + &d.b;
    let far = (&n + &two) * &d.a * &d.x0 + &d.b;
    ck.ensure(near == d.near_condition && near >= BigRational::zero(), format!("2a x0 + b = {} >= 0", format_q(&near)))?;
    ck.ensure(far == d.far_condition && far >= BigRational::zero(), format!("(n+2)a x0 + b = {} >= 0", format_q(&far)))?;
    let cofactor = Polynomial::new(vec![near, d.a.clone()]);
    ck.ensure(cofactor == d.cofactor, "cofactor is a x + 2a x0 + b")?;
    let lin = Polynomial::linear_root(&d.x0);
    ck.ensure(tangent_gap(d) == &(&lin * &lin) * &cofactor, "P - tangent = (x - x0)^2 cofactor")?;
    let range = Interval::closed(BigRational::zero(), &n * &d.x0);
    ck.ensure(d.range == range, "cofactor range is [0, n x0]")?;
    let claim = cert
        .sign_certs
        .iter()
        .find(|c| c.role == ClaimRole::CubicCofactor)
        .ok_or_else(|| fail("no cofactor claim"))?;
    ck.ensure(claim.required == SignVerdict::NonNegative, "cofactor must be nonnegative")?;
    check_claim(claim, &cofactor, &range, ck, "cubic")
}

fn check_case2(cert: &ProofCertificate, ck: &mut Checker) -> Result<(), VerifyError> {
    let p = &cert.problem;
    let tp = cert.touch_points.as_ref().ok_or_else(|| fail("no touch points"))?;
    let xs = tp.exact.as_ref().ok_or_else(|| fail("touch points are not exact"))?;
    let slope = tp.exact_slope.clone().ok_or_else(|| fail("no exact slope"))?;
    ck.ensure(xs.len() == p.n && cert.curves.len() == p.n && cert.factorizations.len() == p.n, "one touch point, curve and factorization per function")?;
    let c = p.constraint.canonical().map_err(|e| fail(e.to_string()))?;
    let l = p.constraint.l().ok_or_else(|| fail("constraint has no summed function"))?;
    let mut total = Constant::zero();
    let mut value = Constant::zero();
    let mut m_total = Constant::zero();
    for (j, x) in xs.iter().enumerate() {
        ck.ensure(p.domain.contains(x), format!("x_{} = {} lies in the domain", j + 1, format_q(x)))?;
        total = total.add(&surd(&l, x)?);
        let f = p.function(j);
        let curve = &cert.curves[j];
        let tag = format!("function {}", j + 1);
        ck.ensure(curve.x0 == *x && curve.l == l, format!("{tag}: curve built on l at its touch point"))?;
        ck.ensure(curve.k == Constant::Rational(slope.clone()), format!("{tag}: common slope"))?;
        check_tangency(f, curve, ck, &tag)?;
        check_factor(f, curve, &cert.factorizations[j], ck, &tag)?;
        check_step(cert, j, &cert.factorizations[j], &p.domain, p.sigma(), ck)?;
        value = value.add(&surd(f, x)?);
        m_total = m_total.add(&curve.m);
    }
    ck.ensure(same(&total, &Constant::Rational(c.budget.clone())), "touch points satisfy the constraint")?;
    let s = cert.summation.as_ref().ok_or_else(|| fail("no summation"))?;
    ck.ensure(s.rule == SummationRule::CommonSlope, "common-slope summation")?;
    let reached = Constant::Rational(slope).mul(&Constant::Rational(c.budget.clone())).add(&m_total);
    ck.ensure(same(&s.value, &value) && same(&reached, &value), "k B + sum m_j equals sum f_j(x_j)")
}

fn check_single(cert: &ProofCertificate, ck: &mut Checker) -> Result<(), VerifyError> {
    let p = &cert.problem;
    ck.ensure(p.n == 1, "one variable")?;
    let x0 = touch_point(p)?;
    let s = cert.summation.as_ref().ok_or_else(|| fail("no summation"))?;
    ck.ensure(same(&s.value, &surd(&p.functions[0], &x0)?), "value is f(x0)")
}

fn check_evidence(cert: &ProofCertificate, ck: &mut Checker) -> Result<(), VerifyError> {
    ck.ensure(!cert.numeric_evidence.is_empty(), "evidence present")?;
    ck.ensure(cert.numeric_evidence.iter().all(|r| r.label == EVIDENCE_LABEL), "evidence is labelled as such")?;
    let chosen: Vec<String> = cert.curves.iter().map(|c| c.expr.to_string()).collect();
    let ok = cert
        .numeric_evidence
        .iter()
        .filter(|r| chosen.contains(&r.g) || chosen.contains(&r.f))
        .all(|r| r.verdict == EvidenceVerdict::HoldsNumerically);
    ck.ensure(ok, "the chosen curves hold numerically")
}

fn check_conclusion(cert: &ProofCertificate, ck: &mut Checker) -> Result<(), VerifyError> {
    let p = &cert.problem;
    let c = cert.conclusion.as_ref().ok_or_else(|| fail("no conclusion"))?;
    let s = cert.summation.as_ref().ok_or_else(|| fail("no summation"))?;
    ck.ensure(c.direction == p.direction && c.n == p.n, "conclusion restates the problem")?;
    ck.ensure(same(&s.value, &Constant::Rational(c.n_f_x0.clone())), format!("n f(x0) = {}", format_q(&c.n_f_x0)))?;
    let bound = match &p.bound {
        Some(b) => Some(b.eval_exact(&BigRational::zero()).map_err(|e| fail(format!("bound: {e}")))?),
        None => None,
    };
    if let Some(a) = &bound {
        let implied = if p.direction.is_upper() { c.n_f_x0 <= *a } else { c.n_f_x0 >= *a };
        ck.ensure(implied, format!("bound {} follows from n f(x0)", format_q(a)))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{q, qi};
    use crate::basecurve::ConstraintSpec;
    use crate::jensen::problem::Direction;
    use crate::jensen::prove::{prove_with, ProveOptions};

    fn opts() -> ProveOptions {
        ProveOptions {
            samples: 0,
            ..ProveOptions::default()
        }
    }

    fn quintic() -> ProofCertificate {
        let p = ProblemSpec::symmetric(
            "q",
            Expr::parse("10*x^3 - 9*x^5").unwrap(),
            ConstraintSpec::sum(qi(1), 3),
            Interval::open_closed(qi(0), qi(1)),
            Direction::LowerBound,
        );
        prove_with(&p, &opts())
    }

    #[test]
    fn split_certificate_round_trips_and_verifies() {
        let cert = quintic();
        let v = verify_json(&cert.to_json()).unwrap();
        assert!(v.exact);
        assert!(v.checks.iter().any(|c| c.contains("min_G")));
    }

    #[test]
    fn tampering_is_detected() {
        let mut cert = quintic();
        cert.split.as_mut().unwrap().lhs = qi(2);
        assert!(matches!(verify_certificate(&cert), Err(VerifyError::Check(_))));

        let mut cert = quintic();
        cert.factorizations[0].t = Polynomial::from_ints(&[1, 1]);
        assert!(verify_certificate(&cert).is_err());

        let mut cert = quintic();
        cert.curves[0].m = Constant::Rational(q(1, 2));
        assert!(verify_certificate(&cert).is_err());

        let mut cert = quintic();
        cert.sign_certs.retain(|c| c.role != ClaimRole::Cofactor);
        assert!(verify_certificate(&cert).is_err());

        let mut cert = quintic();
        cert.conclusion.as_mut().unwrap().n_f_x0 = qi(2);
        assert!(verify_certificate(&cert).is_err());
    }

    #[test]
    fn failures_are_not_proofs() {
        let mut cert = quintic();
        cert.route = Route::Failure;
        assert_eq!(verify_certificate(&cert), Err(VerifyError::NotAProof));
        assert!(matches!(verify_json("{}"), Err(VerifyError::Json(_))));
    }
}
