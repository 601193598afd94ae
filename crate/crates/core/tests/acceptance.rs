//! One line per acceptance criterion. Runs without the libtest harness so
//! the lines always reach stdout; exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use septan::algebra::rational::{format_q, q, qi, to_f64};
use septan::algebra::{double_root_factor, BigRational, FactorError, Polynomial, RationalFunction};
use septan::basecurve::{power_mean, Constant, FamilyKind};
use septan::certify::{count_real_roots, EvidenceVerdict, Interval, MinValue};
use septan::cli::corpus;
use septan::cli::run_entry;
use septan::expr::Expr;
use septan::jensen::sampling::left_side;
use septan::jensen::{theorem5_cubic, verify_json, ConstraintSampler, ProofCertificate, ProveOptions, Route};

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond { Ok(()) } else { Err(msg()) }
}

fn same_up_to_constant(a: &Polynomial, b: &Polynomial) -> bool {
    !a.is_zero() && a.monic() == b.monic()
}

fn product(factors: &[&[i64]]) -> Polynomial {
    factors.iter().fold(Polynomial::one(), |acc, f| &acc * &Polynomial::from_ints(f))
}

fn rational_k(c: &Constant) -> String {
    c.as_rational().map_or(format!("{c}"), format_q)
}

struct Corpus {
    certs: BTreeMap<String, ProofCertificate>,
}

impl Corpus {
    fn get(&self, id: &str) -> &ProofCertificate {
        &self.certs[id]
    }
}

fn lowered(s: &str) -> RationalFunction {
    Expr::parse(s).unwrap().lower_to_rational().unwrap()
}

fn quartic_step(c: &Corpus) -> Check {
    let fac = double_root_factor(&lowered("x^4"), &lowered("(4*x^3-1)/3"), &qi(1)).map_err(|e| e.to_string())?;
    ensure(same_up_to_constant(&fac.t, &Polynomial::from_ints(&[1, 2, 3])), || format!("T = {}", fac.t))?;
    let cert = c.get("quartic_cube_sum");
    ensure(cert.route == Route::Theorem1, || format!("route {:?}", cert.route))?;
    ensure(cert.factorizations[0].t == Polynomial::from_ints(&[1, 2, 3]), || {
        format!("corpus T = {}", cert.factorizations[0].t)
    })
}

fn baltic(c: &Corpus) -> Check {
    let cert = c.get("baltic_way_2011");
    ensure(cert.route == Route::Theorem1, || format!("route {:?}", cert.route))?;
    let t = &cert.factorizations[0].t;
    ensure(*t == Polynomial::from_ints(&[-8, -5, -2]), || format!("T = {t}"))?;
    let concl = cert.conclusion.as_ref().ok_or("no conclusion")?;
    ensure(concl.n_f_x0 == q(4, 9) && concl.statement.contains("<= 4/9"), || concl.statement.clone())
}

fn spb(c: &Corpus) -> Check {
    let cert = c.get("spb_2011");
    ensure(cert.route == Route::Theorem1, || format!("route {:?}", cert.route))?;
    let g = &cert.curves[0];
    ensure(
        g.family == FamilyKind::Line && g.k.as_rational() == Some(&q(2, 25)) && g.m.as_rational() == Some(&q(3, 25)),
        || format!("tangent {g}"),
    )?;
    let t = &cert.factorizations[0].t;
    ensure(*t == Polynomial::from_ints(&[-12, -7, -2]), || format!("T = {t}"))?;
    // the printed cofactor -2x^2 - 5x - 8 differs but has the same sign on (0, 4)
    let printed = Polynomial::from_ints(&[-8, -5, -2]);
    for i in 1..4000 {
        let x = f64::from(i) / 1000.0;
        ensure(t.eval_f64(x) < 0.0 && printed.eval_f64(x) < 0.0, || format!("sign differs at {x}"))?;
    }
    Ok(())
}

fn reciprocal_cubic(c: &Corpus) -> Check {
    let cert = c.get("reciprocal_cubic");
    let g = &cert.curves[0];
    ensure(
        g.k.as_rational() == Some(&q(-1, 6)) && g.m.as_rational() == Some(&q(1, 2)),
        || format!("curve {g}"),
    )?;
    let num = cert.factorizations[0].numerator();
    let want = product(&[&[0, 0, 1], &[1, -1], &[1, -1], &[2, 1]]);
    ensure(same_up_to_constant(&num, &want), || format!("numerator {num}"))
}

fn reciprocal_mean(c: &Corpus) -> Check {
    let cert = c.get("reciprocal_mean");
    let g = &cert.curves[0];
    ensure(
        g.k.as_rational() == Some(&qi(-3)) && g.m.as_rational() == Some(&q(4, 5)),
        || format!("k = {}, m = {}", rational_k(&g.k), rational_k(&g.m)),
    )?;
    let num = cert.factorizations[0].numerator();
    ensure(same_up_to_constant(&num, &product(&[&[-1, 1], &[-1, 1], &[1, 1]])), || format!("numerator {num}"))
}

fn quintic_split(c: &Corpus) -> Check {
    let cert = c.get("quintic_split");
    ensure(cert.route == Route::Theorem2Split, || format!("route {:?}", cert.route))?;
    let split = cert.split.as_ref().ok_or("no split")?;
    ensure(split.g == Interval::closed(q(9, 10), qi(1)), || format!("G = {}", split.g))?;
    ensure(split.min_g.value == MinValue::Exact { value: qi(1) }, || format!("{:?}", split.min_g.value))?;
    let concl = cert.conclusion.as_ref().ok_or("no conclusion")?;
    ensure(concl.n_f_x0 == qi(1), || format_q(&concl.n_f_x0))
}

fn cubic_fast_path(c: &Corpus) -> Check {
    let cert = c.get("cubic_fast_path");
    ensure(cert.route == Route::Theorem5Cubic, || format!("route {:?}", cert.route))?;
    for n in 2..=10usize {
        let nn = n as i64;
        let proof = theorem5_cubic(&qi(-1), &qi(2), &qi(-1), &qi(0), n, &q(1, nn)).map_err(|e| format!("n = {n}: {e}"))?;
        ensure(
            proof.data.near_condition == q(2 * nn - 2, nn) && proof.data.far_condition == q(nn - 2, nn),
            || format!("n = {n}: conditions {} {}", format_q(&proof.data.near_condition), format_q(&proof.data.far_condition)),
        )?;
    }
    let mut single = corpus().into_iter().find(|e| e.spec.id == "cubic_fast_path").unwrap();
    single.spec.n = 1;
    single.spec.constraint.n = 1;
    single.spec.bound = None;
    let r = run_entry(&single, &ProveOptions::default());
    let concl = r.certificate.conclusion.as_ref().ok_or("n = 1: no conclusion")?;
    ensure(concl.n_f_x0 == qi(0), || format!("n = 1 gives {}", format_q(&concl.n_f_x0)))
}

fn mixed_fractions(c: &Corpus) -> Check {
    let cert = c.get("mixed_fractions");
    let g = &cert.curves[0];
    ensure(
        g.family == FamilyKind::Line && g.k.as_rational() == Some(&q(27, 8)) && g.m.as_rational() == Some(&q(-9, 8)),
        || format!("tangent {g}"),
    )?;
    let num = cert.factorizations[0].numerator();
    ensure(same_up_to_constant(&num, &product(&[&[-1, 3], &[-1, 3], &[1, 3]])), || format!("numerator {num}"))
}

fn weighted_reciprocals(c: &Corpus) -> Check {
    let cert = c.get("weighted_reciprocals");
    ensure(cert.route == Route::Case2Heterogeneous, || format!("route {:?}", cert.route))?;
    let tp = cert.touch_points.as_ref().ok_or("no touch points")?;
    ensure(tp.exact.as_deref() == Some(&[qi(1), qi(1), qi(2), qi(4)][..]), || format!("{:?}", tp.exact))?;
    let lines: Vec<(String, String)> = cert.curves.iter().map(|g| (rational_k(&g.k), rational_k(&g.m))).collect();
    let want: Vec<(String, String)> = [2, 2, 4, 8].iter().map(|m| ("-1".to_string(), m.to_string())).collect();
    ensure(lines == want, || format!("tangents {lines:?}"))?;
    let concl = cert.conclusion.as_ref().ok_or("no conclusion")?;
    ensure(concl.n_f_x0 == qi(8), || format_q(&concl.n_f_x0))
}

fn sqrt_difference(c: &Corpus) -> Check {
    let cert = c.get("sqrt_difference");
    ensure(cert.route == Route::NumericEvidenceOnly, || format!("route {:?}", cert.route))?;
    let line = cert
        .numeric_evidence
        .iter()
        .find(|r| r.verdict == EvidenceVerdict::Violated)
        .ok_or("the line is not rejected")?;
    let w = line.witness.as_ref().ok_or("no witness")?;
    ensure(w.point > q(3, 5) && w.point < q(7, 10), || format!("witness {}", format_q(&w.point)))?;
    let parabola = cert
        .numeric_evidence
        .iter()
        .find(|r| r.verdict == EvidenceVerdict::HoldsNumerically)
        .ok_or("no candidate holds")?;
    ensure(cert.curves[0].family == FamilyKind::PowerCurve, || format!("chosen {}", cert.curves[0].label()))?;
    ensure((parabola.argmin - 0.5).abs() < 1e-6, || format!("min gap at {}", parabola.argmin))?;
    ensure(parabola.range.lo == 0.0 && parabola.range.hi == 1.0, || format!("{:?}", parabola.range))
}

fn cube_root_product(c: &Corpus) -> Check {
    let cert = c.get("cube_root_product");
    ensure(cert.route == Route::NumericEvidenceOnly, || format!("route {:?}", cert.route))?;
    ensure(cert.x0 == Some(qi(2)), || format!("x0 {:?}", cert.x0))?;
    let line = &cert.numeric_evidence[0];
    ensure(cert.curves[0].family == FamilyKind::Line && line.verdict == EvidenceVerdict::HoldsNumerically, || {
        format!("{} {:?}", cert.curves[0].label(), line.verdict)
    })?;
    ensure(line.range.lo == 0.0 && (line.range.hi - 12f64.sqrt()).abs() < 1e-12, || format!("{:?}", line.range))?;
    let sampler = ConstraintSampler::new(&cert.problem.constraint, &cert.problem.domain, vec![2.0; 3])
        .map_err(|e| e.to_string())?;
    let points = sampler.sample(100_000, 42);
    ensure(points.len() == 100_000, || format!("{} samples", points.len()))?;
    let fs = &cert.problem.functions;
    let max = points.iter().map(|p| left_side(fs, p)).fold(f64::MIN, f64::max);
    ensure(max <= 12.0 + 1e-9 && max >= 12.0 - 1e-4, || format!("sampled maximum {max}"))
}

fn cases(n: u32) -> Config {
    Config {
        cases: n,
        failure_persistence: None,
        ..Config::default()
    }
}

fn double_root_roundtrip() -> Check {
    let mut runner = TestRunner::new(cases(10_000));
    let strategy = (
        proptest::collection::vec(-6i64..7, 1..5),
        1i64..6,
        proptest::collection::vec(-4i64..5, 0..2),
        -8i64..9,
        1i64..5,
        prop_oneof![-3i64..0, 1i64..4],
    );
    runner
        .run(&strategy, |(num, shift, lin, a, b, wrong)| {
            // denominator x^2 + shift (+ linear part) kept away from zero at x0
            let mut den = vec![shift, 0, 1];
            for (k, c) in lin.iter().enumerate() {
                den[k + 1] = *c;
            }
            let f = RationalFunction::new(Polynomial::from_ints(&num), Polynomial::from_ints(&den));
            let x0 = q(a, b);
            if f.den().eval(&x0) == qi(0) {
                return Ok(());
            }
            let v = f.eval(&x0).unwrap();
            let d = f.derivative().eval(&x0).unwrap();
            let line = RationalFunction::from_poly(Polynomial::new(vec![&v - &d * &x0, d.clone()]));
            let fac = double_root_factor(&f, &line, &x0).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let diff = &f - &line;
            prop_assert_eq!(fac.difference(), diff.clone());
            prop_assert_eq!(&fac.numerator() * diff.den(), diff.num() * &fac.qden);
            let off = RationalFunction::from_poly(Polynomial::new(vec![
                &v - (&d + qi(wrong)) * &x0,
                &d + qi(wrong),
            ]));
            let refused = matches!(double_root_factor(&f, &off, &x0), Err(FactorError::TangencyViolation { .. }));
            prop_assert!(refused);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn sturm_vs_constructed_roots() -> Check {
    let mut runner = TestRunner::new(cases(10_000));
    let strategy = (
        proptest::collection::vec((-12i64..13, 1i64..4, 1usize..3), 0..5),
        proptest::option::of(1i64..6),
        -15i64..15,
        0i64..30,
        prop_oneof![Just(-3i64), Just(-1), Just(1), Just(2)],
    );
    runner
        .run(&strategy, |(roots, quad, lo, width, scale)| {
            let mut p = Polynomial::constant(qi(scale));
            let mut distinct: Vec<BigRational> = Vec::new();
            let mut degree = 0;
            for (num, den, mult) in roots {
                if degree + mult > 6 {
                    break;
                }
                let r = q(num, den);
                p = &p * &Polynomial::linear_root(&r).pow(mult);
                degree += mult;
                if !distinct.contains(&r) {
                    distinct.push(r);
                }
            }
            if let Some(k) = quad.filter(|_| degree + 2 <= 6) {
                p = &p * &Polynomial::from_ints(&[k, 0, 1]);
            }
            let (a, b) = (q(lo, 2), q(lo + width, 2));
            let iv = Interval::closed(a.clone(), b.clone());
            let expect = distinct.iter().filter(|r| **r >= a && **r <= b).count();
            prop_assert_eq!(count_real_roots(&p, &iv).unwrap(), expect);
            prop_assert_eq!(count_real_roots(&p, &Interval::real_line()).unwrap(), distinct.len());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn power_mean_monotone() -> Check {
    let orders: Vec<BigRational> = [-2, -1, 0, 1, 2, 3].iter().map(|&a| qi(a)).collect();
    let mut runner = TestRunner::new(cases(10_000));
    runner
        .run(&proptest::collection::vec(1e-3f64..1e3, 1..9), |xs| {
            let means: Vec<f64> = orders.iter().map(|a| power_mean(a, &xs).unwrap().value).collect();
            for w in means.windows(2) {
                prop_assert!(w[0] <= w[1] * (1.0 + 1e-12), "{:?}", means);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Minimum of `sum P(i_j * step)` over nonnegative integers `i_j` with
/// `sum i_j = total`.
fn grid_min(p: &[f64; 4], n: usize, total: usize, step: f64) -> f64 {
    let value = |i: usize| {
        let x = i as f64 * step;
        ((p[3] * x + p[2]) * x + p[1]) * x + p[0]
    };
    let mut best: Vec<f64> = (0..=total).map(value).collect();
    for _ in 1..n {
        best = (0..=total).map(|s| (0..=s).map(|i| value(i) + best[s - i]).fold(f64::INFINITY, f64::min)).collect();
    }
    best[total]
}

fn cubic_grid() -> Check {
    let mut proved = 0;
    for a in -3i64..=3 {
        for b in -3i64..=3 {
            for c in -1i64..=1 {
                for n in 2usize..=4 {
                    for x0 in [q(1, 2), qi(1), qi(2)] {
                        if theorem5_cubic(&qi(a), &qi(b), &qi(c), &qi(0), n, &x0).is_err() {
                            continue;
                        }
                        proved += 1;
                        let coeffs = [0.0, c as f64, b as f64, a as f64];
                        let x = to_f64(&x0);
                        let at = ((coeffs[3] * x + coeffs[2]) * x + coeffs[1]) * x;
                        let min = grid_min(&coeffs, n, 20 * n, x / 20.0);
                        ensure(min >= n as f64 * at - 1e-9, || {
                            format!("a = {a}, b = {b}, c = {c}, n = {n}, x0 = {x}: grid minimum {min} < {}", n as f64 * at)
                        })?;
                    }
                }
            }
        }
    }
    ensure(proved > 0, || "no case proved".into())
}

fn numeric_oracle(c: &Corpus) -> Check {
    let mut checked = 0;
    for (id, cert) in &c.certs {
        if !cert.is_exact() {
            continue;
        }
        let p = &cert.problem;
        let concl = cert.conclusion.as_ref().ok_or_else(|| format!("{id}: no conclusion"))?;
        let target = to_f64(concl.bound.as_ref().unwrap_or(&concl.n_f_x0));
        let centers = match (&cert.touch_points, &cert.x0) {
            (Some(t), _) => t.points.clone(),
            (None, Some(x0)) => vec![to_f64(x0); p.n],
            _ => return Err(format!("{id}: no touch point")),
        };
        let sampler = ConstraintSampler::new(&p.constraint, &p.domain, centers).map_err(|e| format!("{id}: {e}"))?;
        let points = sampler.sample(10_000, 7);
        ensure(points.len() == 10_000, || format!("{id}: {} samples", points.len()))?;
        let sigma = f64::from(p.direction.sigma());
        for xs in &points {
            let gap = sigma * (left_side(&p.functions, xs) - target);
            ensure(gap >= -1e-9, || format!("{id}: gap {gap:e} at {xs:?}"))?;
        }
        checked += 1;
    }
    ensure(checked == 9, || format!("{checked} exact certificates"))
}

fn self_verification(c: &Corpus) -> Check {
    for (id, cert) in &c.certs {
        let v = verify_json(&cert.to_json()).map_err(|e| format!("{id}: {e}"))?;
        ensure(v.exact == cert.is_exact() && !v.checks.is_empty(), || format!("{id}: {v:?}"))?;
    }
    ensure(c.certs.len() == 11, || format!("{} certificates", c.certs.len()))
}

fn main() {
    let mut failures = 0;
    let mut report = |name: &str, result: Check| match result {
        Ok(()) => println!("PASS {name}"),
        Err(e) => {
            failures += 1;
            println!("FAIL {name}: {e}");
        }
    };

    let start = Instant::now();
    let certs = corpus()
        .iter()
        .map(|e| (e.spec.id.clone(), run_entry(e, &ProveOptions::default()).certificate))
        .collect();
    let c = Corpus { certs };
    let criterion1: [(&str, fn(&Corpus) -> Check); 9] = [
        ("1a quartic under cubes: T = 3x^2 + 2x + 1", quartic_step),
        ("1b Baltic Way 2011: T = -(2x^2 + 5x + 8), bound 4/9", baltic),
        ("1c St. Petersburg 2011: tangent (2x + 3)/25, T = -(2x^2 + 7x + 12)", spb),
        ("1d reciprocal cubic: parabola -x^2/6 + 1/2, numerator x^2 (x - 1)^2 (x + 2)", reciprocal_cubic),
        ("1e reciprocal mean: k = -3, m = 4/5, numerator (x - 1)^2 (x + 1)", reciprocal_mean),
        ("1f quintic: split with G = [9/10, 1], minimum 1, value 1", quintic_split),
        ("1g cubic criterion for n = 2..10, n = 1 gives 0", cubic_fast_path),
        ("1h mixed fractions: tangent (27/8)(x - 1/3), numerator (3x - 1)^2 (3x + 1)", mixed_fractions),
        ("1i weighted reciprocals: touch points (1, 1, 2, 4), tangents m - x, bound 8", weighted_reciprocals),
    ];
    for (name, f) in criterion1 {
        report(name, f(&c));
    }
    let elapsed = start.elapsed();
    report(
        "1 exact corpus in under 5 s",
        ensure(elapsed < Duration::from_secs(5), || format!("{elapsed:?}")),
    );

    report("2a sqrt difference: line refuted in (0.6, 0.7), parabola holds", sqrt_difference(&c));
    report("2b cube-root product: line holds on (0, 2 sqrt 3), sampled maximum 12", cube_root_product(&c));

    let start = Instant::now();
    report("3a double-root factorization round trip (10^4 cases)", double_root_roundtrip());
    report("3b Sturm counts match constructed roots (10^4 cases)", sturm_vs_constructed_roots());
    report("3c power means increase with the order (10^4 cases)", power_mean_monotone());
    report("3d cubic criterion against grid minima", cubic_grid());
    report("3e sampled inequality on every exact corpus certificate", numeric_oracle(&c));
    let elapsed = start.elapsed();
    report(
        "3 property suites in under 60 s",
        ensure(elapsed < Duration::from_secs(60), || format!("{elapsed:?}")),
    );

    report("4 every corpus certificate verifies from JSON", self_verification(&c));

    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
