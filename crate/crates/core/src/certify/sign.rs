use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::interval::Interval;
use super::sturm::{RootLocation, Sturm, ZeroPolynomial};
use crate::algebra::rational::{serde_q, sign_of};
use crate::algebra::Polynomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignVerdict {
    NonNegative,
    NonPositive,
    Indefinite,
}

impl SignVerdict {
    /// Verdict for a polynomial multiplied by a constant of sign `s`.
    pub fn flipped_if(self, negative: bool) -> SignVerdict {
        match (self, negative) {
            (SignVerdict::NonNegative, true) => SignVerdict::NonPositive,
            (SignVerdict::NonPositive, true) => SignVerdict::NonNegative,
            (v, _) => v,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(with = "serde_q")]
    pub negative_at: BigRational,
    #[serde(with = "serde_q")]
    pub positive_at: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignSample {
    #[serde(with = "serde_q")]
    pub x: BigRational,
    pub sign: i8,
}

/// Checkable claim about the sign of a polynomial on an interval.
///
/// `roots` isolates every distinct root in the interval and `samples` holds
/// one point in each gap between consecutive roots, including the gap before
/// the first and after the last root. Since the polynomial keeps its sign
/// on each gap, the samples decide the verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignCertificate {
    pub polynomial: Polynomial,
    pub interval: Interval,
    pub verdict: SignVerdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub root_count: usize,
    pub roots: Vec<RootLocation>,
    pub samples: Vec<SignSample>,
}

/// Moves from `start` toward `end` by halving until no root of the chain lies
/// between `end` (excluded) and the returned point (included).
fn shrink_toward(s: &Sturm, start: BigRational, end: &BigRational) -> BigRational {
    let two = BigRational::from_integer(2.into());
    let mut x = start;
    loop {
        let roots = if x > *end {
            s.count_half_open(Some(end), Some(&x))
        } else {
            s.count_open(&x, end) + usize::from(s.is_root(&x))
        };
        if roots == 0 {
            return x;
        }
        x = (&x + end) / &two;
    }
}

pub fn certify_sign(p: &Polynomial, iv: &Interval) -> Result<SignCertificate, ZeroPolynomial> {
    let s = Sturm::new(p)?;
    let roots = s.isolate(iv);
    let mut points = Vec::new();
    if iv.is_point() {
        if roots.is_empty() {
            points.push(iv.lo.clone().unwrap());
        }
    } else {
        let bound = s.root_bound();
        let mid = iv.sample_point();
        let interior: Vec<&RootLocation> = roots
            .iter()
            .filter(|r| !matches!(r, RootLocation::Exact { at } if Some(at) == iv.lo.as_ref() || Some(at) == iv.hi.as_ref()))
            .collect();
        points.push(match &iv.lo {
            Some(a) => shrink_toward(&s, mid.clone(), a),
            None => -bound.clone(),
        });
        for w in interior.windows(2) {
            let (r, l) = (w[0].right(), w[1].left());
            points.push(if r == l {
                r.clone()
            } else {
                (r + l) / BigRational::from_integer(2.into())
            });
        }
        points.push(match &iv.hi {
            Some(b) => shrink_toward(&s, mid, b),
            None => bound,
        });
    }
    let samples: Vec<SignSample> = points
        .into_iter()
        .map(|x| SignSample {
            sign: sign_of(&p.eval(&x)),
            x,
        })
        .collect();
    let neg = samples.iter().find(|s| s.sign < 0);
    let pos = samples.iter().find(|s| s.sign > 0);
    let (verdict, witness) = match (neg, pos) {
        (Some(n), Some(p)) => (
            SignVerdict::Indefinite,
            Some(Witness {
                negative_at: n.x.clone(),
                positive_at: p.x.clone(),
            }),
        ),
        (Some(_), None) => (SignVerdict::NonPositive, None),
        _ => (SignVerdict::NonNegative, None),
    };
    Ok(SignCertificate {
        polynomial: p.clone(),
        interval: iv.clone(),
        verdict,
        witness,
        root_count: roots.len(),
        roots,
        samples,
    })
}

impl SignCertificate {
    /// Re-derives the verdict from the certificate's own fields.
    pub fn check(&self) -> Result<(), String> {
        let p = &self.polynomial;
        let s = Sturm::new(p).map_err(|e| e.to_string())?;
        let iv = &self.interval;
        let count = s.count_in(iv);
        if count != self.root_count || count != self.roots.len() {
            return Err(format!(
                "root count mismatch: Sturm gives {count}, certificate claims {} with {} locations",
                self.root_count,
                self.roots.len()
            ));
        }
        for r in &self.roots {
            match r {
                RootLocation::Exact { at } => {
                    if !iv.contains(at) || !s.is_root(at) {
                        return Err(format!("claimed root {r} is not a root in {iv}"));
                    }
                }
                RootLocation::Between { lo, hi } => {
                    let inside = Interval::open(lo.clone(), hi.clone());
                    if !iv.contains_interval(&inside) || s.count_open(lo, hi) != 1 {
                        return Err(format!("{r} does not isolate a single root in {iv}"));
                    }
                }
            }
        }
        for sample in &self.samples {
            if !iv.contains(&sample.x) {
                return Err(format!("sample {} outside {iv}", sample.x));
            }
            if sign_of(&p.eval(&sample.x)) != sample.sign || sample.sign == 0 {
                return Err(format!("sample sign at {} does not re-evaluate", sample.x));
            }
        }
        // Every gap between consecutive interior roots, and both outer gaps,
        // must hold a sample.
        let interior: Vec<&RootLocation> = self
            .roots
            .iter()
            .filter(|r| !matches!(r, RootLocation::Exact { at } if Some(at) == iv.lo.as_ref() || Some(at) == iv.hi.as_ref()))
            .collect();
        if !iv.is_point() {
            if self.samples.len() != interior.len() + 1 && self.samples.len() != interior.len() + 2 {
                return Err("samples do not cover every gap".into());
            }
            // A sample lies in gap g exactly when g interior roots sit below it.
            let boundary_lo = usize::from(
                !iv.lo_open && iv.lo.as_ref().is_some_and(|a| s.is_root(a)),
            );
            let mut covered = vec![false; interior.len() + 1];
            for sample in &self.samples {
                let below = Interval::new(iv.lo.clone(), Some(sample.x.clone()), iv.lo_open, true)
                    .map(|b| s.count_in(&b))
                    .unwrap_or(0);
                if let Some(slot) = below.checked_sub(boundary_lo).and_then(|g| covered.get_mut(g)) {
                    *slot = true;
                }
            }
            let gaps_ok = covered.iter().all(|&c| c);
            if !gaps_ok {
                return Err("a gap between roots has no sample".into());
            }
        }
        let neg = self.samples.iter().any(|s| s.sign < 0);
        let pos = self.samples.iter().any(|s| s.sign > 0);
        let expected = match (neg, pos) {
            (true, true) => SignVerdict::Indefinite,
            (true, false) => SignVerdict::NonPositive,
            _ => SignVerdict::NonNegative,
        };
        if expected != self.verdict {
            return Err(format!("verdict {:?} but samples imply {expected:?}", self.verdict));
        }
        if let Some(w) = &self.witness {
            let sn = sign_of(&p.eval(&w.negative_at));
            let sp = sign_of(&p.eval(&w.positive_at));
            if sn >= 0 || sp <= 0 || !iv.contains(&w.negative_at) || !iv.contains(&w.positive_at) {
                return Err("witness does not re-verify".into());
            }
        } else if self.verdict == SignVerdict::Indefinite {
            return Err("indefinite verdict without witness".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{q, qi};
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c)
    }

    #[test]
    fn positive_definite_quadratic() {
        let c = certify_sign(&p(&[1, 2, 3]), &Interval::real_line()).unwrap();
        assert_eq!(c.verdict, SignVerdict::NonNegative);
        assert_eq!(c.root_count, 0);
        c.check().unwrap();
    }

    #[test]
    fn cubic_left_of_split() {
        let cubic = Polynomial::new(vec![q(-16, 3), qi(-7), qi(6), qi(9)]);
        let c = certify_sign(&cubic, &Interval::open(qi(0), q(9, 10))).unwrap();
        assert_eq!(c.verdict, SignVerdict::NonPositive);
        c.check().unwrap();
    }

    #[test]
    fn line_through_one() {
        let c = certify_sign(&p(&[-1, 1]), &Interval::open(qi(0), qi(4))).unwrap();
        assert_eq!(c.verdict, SignVerdict::Indefinite);
        let w = c.witness.clone().unwrap();
        assert_eq!((w.negative_at, w.positive_at), (q(1, 2), qi(2)));
        c.check().unwrap();
    }

    #[test]
    fn double_roots_and_boundary_roots() {
        // (x - 1)^2 (x + 2): touches zero at 1 without changing sign on (0, 4)
        let c = certify_sign(&p(&[2, -3, 0, 1]), &Interval::open(qi(0), qi(4))).unwrap();
        assert_eq!(c.verdict, SignVerdict::NonNegative);
        assert_eq!(c.root_count, 1);
        c.check().unwrap();
        // x on [0, 1]: boundary root at a closed end
        let c = certify_sign(&p(&[0, 1]), &Interval::closed(qi(0), qi(1))).unwrap();
        assert_eq!(c.verdict, SignVerdict::NonNegative);
        c.check().unwrap();
        let c = certify_sign(&p(&[0, -1]), &Interval::at_least(qi(0))).unwrap();
        assert_eq!(c.verdict, SignVerdict::NonPositive);
        c.check().unwrap();
    }

    #[test]
    fn tampering_is_detected() {
        let mut c = certify_sign(&p(&[-1, 1]), &Interval::open(qi(0), qi(4))).unwrap();
        c.verdict = SignVerdict::NonNegative;
        assert!(c.check().is_err());
        let mut c = certify_sign(&p(&[-2, 0, 1]), &Interval::open(qi(0), qi(4))).unwrap();
        c.samples.remove(0);
        assert!(c.check().is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]
        #[test]
        fn verdicts_are_sound(
            c in proptest::collection::vec(-6i64..7, 1..7),
            lo in -5i64..3,
            len in 1i64..6,
            pts in proptest::collection::vec(0u32..=1000, 100),
        ) {
            let poly = p(&c);
            prop_assume!(!poly.is_zero());
            let iv = Interval::open(qi(lo), qi(lo + len));
            let cert = certify_sign(&poly, &iv).unwrap();
            prop_assert!(cert.check().is_ok(), "{:?}", cert.check());
            for t in pts {
                let x = qi(lo) + q(i64::from(t) * len, 1000);
                if !iv.contains(&x) {
                    continue;
                }
                let v = sign_of(&poly.eval(&x));
                match cert.verdict {
                    SignVerdict::NonNegative => prop_assert!(v >= 0),
                    SignVerdict::NonPositive => prop_assert!(v <= 0),
                    SignVerdict::Indefinite => {}
                }
            }
        }
    }
}
