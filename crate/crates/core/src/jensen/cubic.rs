//! Fast path for cubic polynomials under a sum constraint with
//! nonnegative variables.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::certificate::{ClaimRole, SignClaim, Theorem5Data};
use crate::algebra::rational::format_q;
use crate::algebra::Polynomial;
use crate::certify::{certify_sign, Interval, SignVerdict};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CubicError {
    #[error("not a cubic: leading coefficient is zero")]
    NotCubic,
    #[error("touch point must be positive, got {0}")]
    NonPositiveTouchPoint(String),
    #[error("n must be at least 1")]
    ZeroVariables,
    #[error("cubic conditions fail: {}", describe_failure(.near, .far))]
    ConditionsFail {
        /// `2 a x0 + b`
        near: String,
        /// `(n + 2) a x0 + b`
        far: String,
    },
}

fn describe_failure(near: &str, far: &str) -> String {
    let neg = |s: &str| s.starts_with('-');
    let mut parts = Vec::new();
    if neg(near) {
        parts.push(format!("2a*x0 + b = {near} < 0"));
    }
    if neg(far) {
        parts.push(format!("(n+2)a*x0 + b = {far} < 0"));
    }
    parts.join(", ")
}

#[derive(Debug, Clone, PartialEq)]
pub struct CubicProof {
    pub data: Theorem5Data,
    pub claim: SignClaim,
}

/// `sum P(x_j) >= n P(x0)` for `P = a x^3 + b x^2 + c x + d`, nonnegative
/// `x_j` summing to `n x0`, from the two endpoint conditions on the linear
/// cofactor `a x + 2 a x0 + b`.
pub fn theorem5_cubic(
    a: &BigRational,
    b: &BigRational,
    c: &BigRational,
    d: &BigRational,
    n: usize,
    x0: &BigRational,
) -> Result<CubicProof, CubicError> {
    if a.is_zero() {
        return Err(CubicError::NotCubic);
    }
    if n == 0 {
        return Err(CubicError::ZeroVariables);
    }
    if !x0.is_positive() {
        return Err(CubicError::NonPositiveTouchPoint(format_q(x0)));
    }
    let two = BigRational::from_integer(2.into());
    let nq = BigRational::from_integer(n.into());
    let near = &two * a * x0 + b;
    let far = (&nq + &two) * a * x0 + b;
    if near.is_negative() || far.is_negative() {
        return Err(CubicError::ConditionsFail {
            near: format_q(&near),
            far: format_q(&far),
        });
    }
    let cofactor = Polynomial::new(vec![near.clone(), a.clone()]);
    let range = Interval::closed(BigRational::zero(), &nq * x0);
    let cert = certify_sign(&cofactor, &range).expect("nonzero cofactor");
    debug_assert_eq!(cert.verdict, SignVerdict::NonNegative);
    Ok(CubicProof {
        data: Theorem5Data {
            a: a.clone(),
            b: b.clone(),
            c: c.clone(),
            d: d.clone(),
            n,
            x0: x0.clone(),
            near_condition: near,
            far_condition: far,
            cofactor,
            range,
        },
        claim: SignClaim {
            role: ClaimRole::CubicCofactor,
            function: 0,
            required: SignVerdict::NonNegative,
            certificate: cert,
        },
    })
}

/// `P(x) - P(x0) - P'(x0)(x - x0)` rebuilt from the recorded data, for
/// checking `(x - x0)^2 * cofactor`.
pub fn tangent_gap(data: &Theorem5Data) -> Polynomial {
    let p = cubic_of(data);
    let fx0 = p.eval(&data.x0);
    let slope = p.derivative().eval(&data.x0);
    let line = Polynomial::new(vec![fx0 - &slope * &data.x0, slope]);
    &p - &line
}

pub fn cubic_of(data: &Theorem5Data) -> Polynomial {
    Polynomial::new(vec![data.d.clone(), data.c.clone(), data.b.clone(), data.a.clone()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{q, qi, to_f64};

    #[test]
    fn sample5_conditions_for_many_n() {
        for n in 2..=10usize {
            let x0 = q(1, n as i64);
            let p = theorem5_cubic(&qi(-1), &qi(2), &qi(-1), &qi(0), n, &x0).unwrap();
            assert_eq!(p.data.near_condition, qi(2) - q(2, n as i64));
            assert_eq!(p.data.far_condition, q(n as i64 - 2, n as i64));
            p.claim.certificate.check().unwrap();
            let gap = tangent_gap(&p.data);
            let sq = Polynomial::linear_root(&x0).pow(2);
            assert_eq!(gap, &sq * &p.data.cofactor);
        }
    }

    #[test]
    fn nonconvex_cubic_still_passes() {
        let p = theorem5_cubic(&qi(1), &qi(-1), &qi(5), &qi(7), 3, &qi(1)).unwrap();
        assert_eq!((p.data.near_condition, p.data.far_condition), (qi(1), qi(4)));
    }

    #[test]
    fn failing_near_condition_reports_slack() {
        let err = theorem5_cubic(&qi(1), &qi(-5), &qi(0), &qi(0), 2, &qi(1)).unwrap_err();
        assert_eq!(
            err,
            CubicError::ConditionsFail {
                near: "-3".into(),
                far: "-1".into()
            }
        );
        assert!(err.to_string().contains("2a*x0 + b = -3 < 0"));
        assert_eq!(theorem5_cubic(&qi(0), &qi(1), &qi(0), &qi(0), 2, &qi(1)).unwrap_err(), CubicError::NotCubic);
    }

    /// Exact grid minimum of `sum P(x_j)` over nonnegative grid points
    /// `x_j = i_j * step` with `sum i_j = steps`.
    fn grid_min(p: &Polynomial, n: usize, steps: usize, step: f64) -> f64 {
        let vals: Vec<f64> = (0..=steps).map(|i| p.eval_f64(i as f64 * step)).collect();
        let mut best = vals.clone();
        for _ in 1..n {
            let mut next = vec![f64::INFINITY; steps + 1];
            for (total, slot) in next.iter_mut().enumerate() {
                for i in 0..=total {
                    *slot = slot.min(best[total - i] + vals[i]);
                }
            }
            best = next;
        }
        best[steps]
    }

    #[test]
    fn exhaustive_grid_cross_check() {
        let mut successes = 0;
        for a in -3..=3i64 {
            for b in -3..=3i64 {
                for c in -1..=1i64 {
                    for n in 2..=4usize {
                        for x0 in [q(1, 2), qi(1), qi(2)] {
                            let Ok(proof) = theorem5_cubic(&qi(a), &qi(b), &qi(c), &qi(0), n, &x0) else {
                                continue;
                            };
                            successes += 1;
                            let p = cubic_of(&proof.data);
                            let step = to_f64(&x0) / 20.0;
                            let min = grid_min(&p, n, 20 * n, step);
                            let target = n as f64 * to_f64(&p.eval(&x0));
                            assert!(min >= target - 1e-9, "a={a} b={b} c={c} n={n} x0={x0}: {min} < {target}");
                        }
                    }
                }
            }
        }
        assert!(successes > 100);
    }
}
