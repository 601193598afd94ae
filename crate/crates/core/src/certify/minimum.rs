use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::interval::Interval;
use super::sturm::{RootLocation, Sturm};
use crate::algebra::rational::{divisors, lcm_denominators, serde_q, sign_of};
use crate::algebra::{Polynomial, RationalFunction};

/// Isolating intervals of irrational critical points are refined to this
/// width before the value is enclosed.
pub const CRITICAL_WIDTH: (i64, i64) = (1, 1_000_000_000_000);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MinError {
    #[error("pole of the function at {0} inside {1}")]
    PoleInInterval(RootLocation, Interval),
    #[error("the function is unbounded below on {0}")]
    UnboundedBelow(Interval),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MinValue {
    Exact {
        #[serde(with = "serde_q")]
        value: BigRational,
    },
    /// The minimum lies in `[lower, upper]`; `upper` is a value the function
    /// actually attains (or approaches).
    Bounds {
        #[serde(with = "serde_q")]
        lower: BigRational,
        #[serde(with = "serde_q")]
        upper: BigRational,
    },
}

impl MinValue {
    /// Certified lower bound.
    pub fn lower(&self) -> &BigRational {
        match self {
            MinValue::Exact { value } => value,
            MinValue::Bounds { lower, .. } => lower,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ArgMin {
    /// Attained at a finite endpoint or an interior rational critical point.
    Point {
        #[serde(with = "serde_q")]
        at: BigRational,
    },
    /// Irrational critical point inside the interval.
    Enclosed {
        #[serde(with = "serde_q")]
        lo: BigRational,
        #[serde(with = "serde_q")]
        hi: BigRational,
    },
    /// Infimum approached at an infinite end.
    AtInfinity { positive: bool },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifiedMin {
    pub function: String,
    pub interval: Interval,
    pub value: MinValue,
    pub argmin: ArgMin,
    /// Number of distinct real critical points inside the interval.
    pub critical_points: usize,
}

struct Candidate {
    lower: BigRational,
    upper: BigRational,
    at: ArgMin,
}

/// Interval Horner evaluation over `[a, b]` with exact rational endpoints.
fn enclose_poly(p: &Polynomial, a: &BigRational, b: &BigRational) -> (BigRational, BigRational) {
    let mut lo = BigRational::zero();
    let mut hi = BigRational::zero();
    for c in p.coeffs().iter().rev() {
        let prods = [&lo * a, &lo * b, &hi * a, &hi * b];
        let mn = prods.iter().min().unwrap().clone();
        let mx = prods.iter().max().unwrap().clone();
        lo = mn + c;
        hi = mx + c;
    }
    (lo, hi)
}

/// Rational roots of `p` via the rational root test. Returns `None` when the
/// coefficients are too large to enumerate divisors.
pub(crate) fn rational_roots(p: &Polynomial) -> Option<Vec<BigRational>> {
    let mut out = Vec::new();
    let prim = p.primitive();
    let l = lcm_denominators(prim.coeffs());
    let ints: Vec<BigInt> = prim
        .coeffs()
        .iter()
        .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
        .collect();
    let shift = ints.iter().position(|c| !c.is_zero())?;
    if shift > 0 {
        out.push(BigRational::zero());
    }
    let ints = &ints[shift..];
    if ints.len() <= 1 {
        return Some(out);
    }
    let limit = 1_000_000_000u64;
    let ps = divisors(&ints[0], limit)?;
    let qs = divisors(ints.last().unwrap(), limit)?;
    for num in &ps {
        for den in &qs {
            for sign in [1, -1] {
                let r = BigRational::new(BigInt::from(num.clone()) * sign, BigInt::from(den.clone()));
                if !out.contains(&r) && p.eval(&r).is_zero() {
                    out.push(r);
                }
            }
        }
    }
    out.sort();
    Some(out)
}

enum Limit {
    Finite(BigRational),
    PlusInfinity,
    MinusInfinity,
}

fn limit_at_infinity(f: &RationalFunction, positive: bool) -> Limit {
    let dn = f.num().degree().unwrap_or(0);
    let dd = f.den().degree().unwrap_or(0);
    if f.is_zero() || dn < dd {
        return Limit::Finite(BigRational::zero());
    }
    let ratio = f.num().leading() / f.den().leading();
    if dn == dd {
        return Limit::Finite(ratio);
    }
    let flip = !positive && (dn - dd) % 2 == 1;
    if ratio.is_positive() != flip {
        Limit::PlusInfinity
    } else {
        Limit::MinusInfinity
    }
}

/// Minimum of `f` over the closure of `iv`.
pub fn certified_min(f: &RationalFunction, iv: &Interval) -> Result<CertifiedMin, MinError> {
    let den = Sturm::new(f.den()).expect("nonzero denominator");
    let den_roots = den.isolate(iv);
    if let Some(r) = den_roots.first() {
        return Err(MinError::PoleInInterval(r.clone(), iv.clone()));
    }
    let unbounded = || MinError::UnboundedBelow(iv.clone());
    let mut cands: Vec<Candidate> = Vec::new();
    let exact = |v: BigRational, at: ArgMin| Candidate {
        lower: v.clone(),
        upper: v,
        at,
    };

    for (end, positive) in [(&iv.lo, false), (&iv.hi, true)] {
        match end {
            Some(x) => match f.eval(x) {
                Some(v) => cands.push(exact(v, ArgMin::Point { at: x.clone() })),
                None => {
                    // Pole at an open end. The denominator has no root inside,
                    // so its sign there is the sign at any interior point.
                    let inside = sign_of(&f.den().eval(&iv.sample_point()));
                    if sign_of(&f.num().eval(x)) * inside < 0 {
                        return Err(unbounded());
                    }
                }
            },
            None => match limit_at_infinity(f, positive) {
                Limit::Finite(v) => cands.push(Candidate {
                    lower: v.clone(),
                    upper: v,
                    at: ArgMin::AtInfinity { positive },
                }),
                Limit::PlusInfinity => {}
                Limit::MinusInfinity => return Err(unbounded()),
            },
        }
    }

    // Critical points: roots of N'D - ND' strictly inside.
    let crit = &(&f.num().derivative() * f.den()) - &(f.num() * &f.den().derivative());
    let mut critical_points = 0;
    if !crit.is_zero() && !iv.is_point() {
        let open = Interval::new(iv.lo.clone(), iv.hi.clone(), true, true).expect("nonempty");
        let mut rest = crit.squarefree_part();
        if let Some(rs) = rational_roots(&rest) {
            for r in rs {
                rest = rest.divide_exact(&Polynomial::linear_root(&r)).expect("root");
                if open.contains(&r) {
                    critical_points += 1;
                    let v = f.eval(&r).expect("no pole inside");
                    cands.push(exact(v, ArgMin::Point { at: r }));
                }
            }
        }
        if !rest.is_constant() {
            let s = Sturm::new(&rest).expect("nonzero");
            let width = BigRational::new(CRITICAL_WIDTH.0.into(), CRITICAL_WIDTH.1.into());
            for loc in s.isolate(&open) {
                critical_points += 1;
                match s.refine(&loc, &width) {
                    RootLocation::Exact { at } => {
                        let v = f.eval(&at).expect("no pole inside");
                        cands.push(exact(v, ArgMin::Point { at }));
                    }
                    RootLocation::Between { lo, hi } => {
                        let (nl, nh) = enclose_poly(f.num(), &lo, &hi);
                        let (dl, dh) = enclose_poly(f.den(), &lo, &hi);
                        assert!(dl.is_positive() || dh.is_negative(), "denominator enclosure contains 0");
                        let qs = [&nl / &dl, &nl / &dh, &nh / &dl, &nh / &dh];
                        let lower = qs.iter().min().unwrap().clone();
                        let fl = f.eval(&lo).unwrap();
                        let fh = f.eval(&hi).unwrap();
                        let upper = if fl < fh { fl } else { fh };
                        cands.push(Candidate {
                            lower,
                            upper,
                                    at: ArgMin::Enclosed { lo, hi },
                        });
                    }
                }
            }
        }
    }

    let best_lower = cands
        .iter()
        .map(|c| c.lower.clone())
        .min()
        .expect("at least one candidate");
    let best_upper = cands.iter().map(|c| c.upper.clone()).min().unwrap();
    let winner = cands
        .iter()
        .find(|c| c.lower == best_lower)
        .expect("minimum candidate");
    let value = if best_lower == best_upper {
        MinValue::Exact { value: best_lower }
    } else {
        MinValue::Bounds {
            lower: best_lower,
            upper: best_upper,
        }
    };
    Ok(CertifiedMin {
        function: f.to_string(),
        interval: iv.clone(),
        value,
        argmin: winner.at.clone(),
        critical_points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{q, qi, to_f64};

    fn poly(c: &[i64]) -> RationalFunction {
        RationalFunction::from_poly(Polynomial::from_ints(c))
    }

    #[test]
    fn quintic_on_the_split_piece() {
        let f = poly(&[0, 0, 0, 10, 0, -9]);
        let m = certified_min(&f, &Interval::closed(q(9, 10), qi(1))).unwrap();
        assert_eq!(m.value, MinValue::Exact { value: qi(1) });
        assert_eq!(m.argmin, ArgMin::Point { at: qi(1) });
        let m = certified_min(&f, &Interval::open_closed(qi(0), qi(1))).unwrap();
        assert_eq!(m.value.lower(), &qi(0));
    }

    #[test]
    fn parabola() {
        let m = certified_min(&poly(&[0, 0, 1]), &Interval::closed(qi(-1), qi(2))).unwrap();
        assert_eq!(m.value, MinValue::Exact { value: qi(0) });
        assert_eq!(m.argmin, ArgMin::Point { at: qi(0) });
    }

    #[test]
    fn irrational_critical_point() {
        // 10x^3 - 9x^5 has its maximum at sqrt(2/3); its negation has a minimum there
        let f = poly(&[0, 0, 0, -10, 0, 9]);
        let m = certified_min(&f, &Interval::closed(q(1, 2), qi(1))).unwrap();
        let MinValue::Bounds { lower, upper } = &m.value else { panic!("{m:?}") };
        let exact = -(10.0 * (2.0f64 / 3.0).powf(1.5) - 9.0 * (2.0f64 / 3.0).powf(2.5));
        assert!(to_f64(lower) <= exact && exact <= to_f64(upper));
        assert!(to_f64(&(upper - lower)) < 1e-11);
    }

    #[test]
    fn poles_and_limits() {
        let f = RationalFunction::new(Polynomial::from_ints(&[1]), Polynomial::from_ints(&[0, 1]));
        assert!(matches!(
            certified_min(&f, &Interval::closed(qi(-1), qi(1))),
            Err(MinError::PoleInInterval(..))
        ));
        // 1/x on (0, inf): infimum 0 at infinity
        let m = certified_min(&f, &Interval::above(qi(0))).unwrap();
        assert_eq!(m.value.lower(), &qi(0));
        assert_eq!(m.argmin, ArgMin::AtInfinity { positive: true });
        // -1/x on (0, 1] is unbounded below
        let g = RationalFunction::new(Polynomial::from_ints(&[-1]), Polynomial::from_ints(&[0, 1]));
        assert!(matches!(
            certified_min(&g, &Interval::open_closed(qi(0), qi(1))),
            Err(MinError::UnboundedBelow(_))
        ));
        assert!(matches!(
            certified_min(&poly(&[0, 1]), &Interval::real_line()),
            Err(MinError::UnboundedBelow(_))
        ));
    }

    #[test]
    fn grid_cross_check_on_rational_function() {
        // x/(4 + x^2) on [0, 5]
        let f = RationalFunction::new(Polynomial::from_ints(&[0, 1]), Polynomial::from_ints(&[4, 0, 1]));
        let m = certified_min(&f, &Interval::closed(qi(-3), qi(5))).unwrap();
        let lower = to_f64(m.value.lower());
        let sampled = (0..=10_000)
            .map(|i| -3.0 + 8.0 * f64::from(i) / 10_000.0)
            .map(|x| f.eval_f64(x))
            .fold(f64::INFINITY, f64::min);
        assert!(sampled >= lower - 1e-9);
        assert!((sampled - lower).abs() < 1e-6);
    }
}
