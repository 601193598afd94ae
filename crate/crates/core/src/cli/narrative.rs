//! Human-readable account of a certificate.

use std::fmt::Write;

use crate::algebra::rational::format_q;
use crate::certify::{EvidenceVerdict, MinValue, SignVerdict};
use crate::jensen::{ClaimRole, ProofCertificate, Route, SummationRule};

fn verdict_text(v: SignVerdict) -> &'static str {
    match v {
        SignVerdict::NonNegative => ">= 0",
        SignVerdict::NonPositive => "<= 0",
        SignVerdict::Indefinite => "changes sign",
    }
}

fn min_text(v: &MinValue) -> String {
    match v {
        MinValue::Exact { value } => format_q(value),
        MinValue::Bounds { lower, upper } => format!("in [{}, {}]", format_q(lower), format_q(upper)),
    }
}

fn rule_text(r: SummationRule) -> &'static str {
    match r {
        SummationRule::Direct => "summing the curve over all variables uses the constraint directly",
        SummationRule::PowerMeanLine => "the power-mean inequality bounds the sum of the variables by the constraint",
        SummationRule::PowerMeanCurve => "the power-mean inequality bounds the summed powers by the constraint",
        SummationRule::CommonSlope => "the tangents share one slope, so their sum is fixed by the constraint",
    }
}

/// Multi-line story of the proof: curve, factorization, sign argument,
/// conclusion. `verbose` adds diagnostics and evidence details.
pub fn render(cert: &ProofCertificate, verbose: bool) -> String {
    let mut s = String::new();
    let p = &cert.problem;
    let _ = writeln!(s, "problem {}", cert.problem_id);
    if let Some(orig) = &cert.original {
        let _ = writeln!(
            s,
            "  homogeneous, normalized from {} to {}",
            orig.constraint.describe(),
            p.constraint.describe()
        );
    }
    let _ = writeln!(s, "  constraint: {}, x_j in {}", p.constraint.describe(), p.domain);
    let _ = writeln!(s, "  route: {:?}", cert.route);
    if let Some(x0) = &cert.x0 {
        let _ = writeln!(s, "  touch point x0 = {}", format_q(x0));
    }
    if let Some(tp) = &cert.touch_points {
        let pts = match &tp.exact {
            Some(xs) => xs.iter().map(format_q).collect::<Vec<_>>().join(", "),
            None => tp.points.iter().map(|x| format!("{x:.9}")).collect::<Vec<_>>().join(", "),
        };
        let slope = tp.exact_slope.as_ref().map_or(format!("{:.9}", tp.common_slope), format_q);
        let _ = writeln!(s, "  touch points ({pts}) with common slope {slope}");
    }
    for (j, curve) in cert.curves.iter().enumerate() {
        let who = if cert.curves.len() > 1 { format!("f{}", j + 1) } else { "f".into() };
        let _ = writeln!(s, "  {}: g(x) = {}  [{} at {}]", who, curve, curve.label(), format_q(&curve.x0));
    }
    for (j, fac) in cert.factorizations.iter().enumerate() {
        let who = if cert.factorizations.len() > 1 { format!("f{} - g{}", j + 1, j + 1) } else { "f - g".into() };
        let _ = writeln!(
            s,
            "  {who} = (x - {})^2 * ({}) / ({})",
            format_q(&fac.x0),
            fac.t,
            fac.qden
        );
    }
    for claim in &cert.sign_certs {
        let what = match claim.role {
            ClaimRole::Denominator => "denominator",
            ClaimRole::Cofactor => "cofactor",
            ClaimRole::CubicCofactor => "cubic cofactor",
        };
        let c = &claim.certificate;
        let _ = writeln!(
            s,
            "  {what} {} {} on {} ({} roots there, Sturm count)",
            c.polynomial,
            verdict_text(c.verdict),
            c.interval,
            c.root_count
        );
    }
    if let Some(t5) = &cert.theorem5 {
        let _ = writeln!(
            s,
            "  cubic a = {}, b = {}: 2a*x0 + b = {}, (n+2)a*x0 + b = {}, cofactor {} on {}",
            format_q(&t5.a),
            format_q(&t5.b),
            format_q(&t5.near_condition),
            format_q(&t5.far_condition),
            t5.cofactor,
            t5.range
        );
    }
    if let Some(sp) = &cert.split {
        let _ = writeln!(s, "  split G = {}, rest I = {}", sp.g, sp.rest);
        let _ = writeln!(
            s,
            "  min over G {}, min over I {}: {} >= {}",
            min_text(&sp.min_g.value),
            min_text(&sp.min_i.value),
            format_q(&sp.lhs),
            format_q(&sp.rhs)
        );
    }
    if let Some(sum) = &cert.summation {
        let _ = writeln!(s, "  {}: total {}", rule_text(sum.rule), sum.value);
    }
    for ev in &cert.numeric_evidence {
        let verdict = match ev.verdict {
            EvidenceVerdict::HoldsNumerically => "holds numerically",
            EvidenceVerdict::Violated => "violated",
        };
        let _ = write!(s, "  evidence [{}] {verdict}, min gap {:.3e} at x = {:.6}", ev.label, ev.min_gap, ev.argmin);
        if let Some(w) = &ev.witness {
            let _ = write!(s, ", witness x = {}", format_q(&w.point));
        }
        let _ = writeln!(s);
        if verbose {
            let _ = writeln!(
                s,
                "    {} vs {} on [{}, {}], {} grid points, {} refined, tol {:e}",
                ev.f, ev.g, ev.range.lo, ev.range.hi, ev.grid_points, ev.refined_points, ev.tol
            );
        }
    }
    if let Some(check) = &cert.sampling {
        let _ = writeln!(
            s,
            "  sampling: {} points (seed {}), worst gap {:.3e}, {}",
            check.samples,
            check.seed,
            check.worst_gap,
            if check.passed { "passed" } else { "FAILED" }
        );
    }
    match (&cert.conclusion, cert.route) {
        (Some(c), Route::NumericEvidenceOnly) => {
            let _ = writeln!(s, "numeric evidence only: {}", c.statement);
        }
        (Some(c), _) => {
            let _ = writeln!(s, "proved: {}", c.statement);
        }
        (None, _) => {
            let _ = writeln!(s, "no proof found");
        }
    }
    if cert.route == Route::Failure || verbose {
        for d in &cert.diagnostics {
            let _ = writeln!(s, "  note: {d}");
        }
    }
    s
}
