//! Exact arithmetic on finite sums of real radicals `c * r^(1/k)`.
//!
//! Used to obtain closed forms such as `-sqrt(2)` when a derivative of a
//! radical expression is evaluated at a rational touch point. Inversion is
//! supported for single radicals and for `a + b*sqrt(r)`; anything else is
//! reported as unsupported.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Expr;
use crate::algebra::rational::{exact_root, to_f64};

/// Radicands above this are not searched for perfect-power factors.
const FACTOR_LIMIT: u64 = 1 << 40;

/// Key `(k, r)` stands for the real number `r^(1/k)` with `r > 0` an integer
/// free of `k`-th power factors; `(1, 1)` is the rational unit.
type Radical = (u32, BigInt);

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SurdSum {
    terms: BTreeMap<Radical, BigRational>,
}

fn unit() -> Radical {
    (1, BigInt::one())
}

impl SurdSum {
    pub fn rational(c: BigRational) -> SurdSum {
        let mut s = SurdSum::default();
        s.push(unit(), c);
        s
    }

    /// `c * r^(1/k)` for a positive rational `r`, normalized.
    pub fn radical(c: BigRational, r: &BigRational, k: u32) -> SurdSum {
        assert!(r.is_positive() && k >= 1);
        // r^(1/k) = (num * den^(k-1))^(1/k) / den
        let inner = r.numer() * num_traits::pow(r.denom().clone(), k as usize - 1);
        let (outside, rest, k) = normalize_radical(inner, k);
        let c = c * BigRational::new(outside, r.denom().clone());
        let mut s = SurdSum::default();
        let key = if rest.is_one() { unit() } else { (k, rest) };
        s.push(key, c);
        s
    }

    fn push(&mut self, key: Radical, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&unit()).cloned(),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|((k, r), c)| {
                let r = r.to_f64().unwrap_or(f64::INFINITY);
                to_f64(c) * r.powf(1.0 / f64::from(*k))
            })
            .sum()
    }

    pub fn add(&self, other: &SurdSum) -> SurdSum {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.push(k.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> SurdSum {
        SurdSum {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &SurdSum) -> SurdSum {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &SurdSum) -> SurdSum {
        let mut out = SurdSum::default();
        for ((ka, ra), ca) in &self.terms {
            for ((kb, rb), cb) in &other.terms {
                let l = ka.lcm(kb);
                let inner = num_traits::pow(ra.clone(), (l / ka) as usize)
                    * num_traits::pow(rb.clone(), (l / kb) as usize);
                let term = SurdSum::radical(ca * cb, &BigRational::from_integer(inner), l);
                out = out.add(&term);
            }
        }
        out
    }

    /// Multiplicative inverse, when the shape allows it.
    pub fn recip(&self) -> Option<SurdSum> {
        if self.is_zero() {
            return None;
        }
        if self.terms.len() == 1 {
            let ((k, r), c) = self.terms.iter().next().unwrap();
            // 1/(c r^(1/k)) = r^((k-1)/k) / (c r)
            let r = BigRational::from_integer(r.clone());
            let pow = num_traits::pow(r.clone(), *k as usize - 1);
            return Some(SurdSum::radical((c * &r).recip(), &pow, *k));
        }
        // a + b sqrt(r): multiply by the conjugate.
        let a = self.terms.get(&unit()).cloned().unwrap_or_else(BigRational::zero);
        let surds: Vec<_> = self.terms.iter().filter(|(k, _)| **k != unit()).collect();
        if let [((2, r), b)] = surds.as_slice() {
            let norm = &a * &a - *b * *b * BigRational::from_integer(r.clone());
            let conj = SurdSum::rational(a.clone()).sub(&SurdSum::radical((*b).clone(), &BigRational::from_integer(r.clone()), 2));
            return Some(conj.scale(&norm.recip()));
        }
        None
    }

    pub fn scale(&self, c: &BigRational) -> SurdSum {
        let mut out = SurdSum::default();
        for (k, v) in &self.terms {
            out.push(k.clone(), v * c);
        }
        out
    }

    pub fn pow(&self, e: i32) -> Option<SurdSum> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut acc = SurdSum::rational(BigRational::one());
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Some(acc)
    }

    /// Real `k`-th root; only radicals of a rational value are supported.
    pub fn root(&self, k: u32) -> Option<SurdSum> {
        let r = self.as_rational()?;
        if r.is_zero() {
            return Some(SurdSum::default());
        }
        if r.is_negative() {
            if k % 2 == 0 {
                return None;
            }
            return Some(SurdSum::radical(-BigRational::one(), &-r, k));
        }
        Some(SurdSum::radical(BigRational::one(), &r, k))
    }

    /// Sign of the value, decided with rigorous rational brackets of each
    /// radical at increasing precision. `None` if undecided (for instance
    /// when the value is zero but not syntactically so).
    pub fn sign(&self) -> Option<i8> {
        if self.is_zero() {
            return Some(0);
        }
        for bits in [64u32, 256, 1024, 4096] {
            let scale = BigInt::one() << bits as usize;
            let mut lo = BigRational::zero();
            let mut hi = BigRational::zero();
            for ((k, r), c) in &self.terms {
                // floor(r^(1/k) * 2^bits) via an integer root of r * 2^(bits k)
                let big = r * num_traits::pow(scale.clone(), *k as usize);
                let fl = num_integer::Roots::nth_root(&big, *k);
                let exact = num_traits::pow(fl.clone(), *k as usize) == big;
                let a = BigRational::new(fl.clone(), scale.clone());
                let b = if exact { a.clone() } else { BigRational::new(fl + 1, scale.clone()) };
                let (x, y) = (c * &a, c * &b);
                let (mn, mx) = if x <= y { (x, y) } else { (y, x) };
                lo += mn;
                hi += mx;
            }
            if lo.is_positive() {
                return Some(1);
            }
            if hi.is_negative() {
                return Some(-1);
            }
            if lo.is_zero() && hi.is_zero() {
                return Some(0);
            }
        }
        None
    }

    pub fn to_expr(&self) -> Expr {
        if self.terms.is_empty() {
            return Expr::int(0);
        }
        let mut out: Option<Expr> = None;
        for ((k, r), c) in self.terms.iter().rev() {
            let term = if (*k, r) == (1, &BigInt::one()) {
                Expr::Const(c.abs())
            } else {
                let rad = Expr::Const(BigRational::from_integer(r.clone())).root(*k);
                Expr::Const(c.abs()).mul(rad)
            };
            out = Some(match out {
                None if c.is_negative() => term.neg(),
                None => term,
                Some(acc) if c.is_negative() => acc.sub(term),
                Some(acc) => acc.add(term),
            });
        }
        out.unwrap()
    }
}

impl fmt::Display for SurdSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

/// Splits `n^(1/k)` into `outside * rest^(1/k')` with the smallest index.
fn normalize_radical(n: BigInt, k: u32) -> (BigInt, BigInt, u32) {
    if k == 1 {
        return (n, BigInt::one(), 1);
    }
    let mut outside = BigInt::one();
    let mut rest = n;
    if let Some(small) = rest.to_u64().filter(|v| *v <= FACTOR_LIMIT) {
        let mut m = small;
        let mut kept = 1u64;
        let mut p = 2u64;
        while p * p <= m {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            if e > 0 {
                outside *= BigInt::from(p).pow(e / k);
                kept *= p.pow(e % k);
            }
            p += 1;
        }
        kept *= m;
        rest = BigInt::from(kept);
    }
    // Lower the index when the remaining radicand is itself a perfect power.
    let mut k = k;
    for d in (2..=k).rev() {
        if k % d == 0 {
            if let Some(r) = exact_root(&BigRational::from_integer(rest.clone()), d) {
                rest = r.to_integer();
                k /= d;
            }
        }
    }
    (outside, rest, k)
}

impl Expr {
    /// Closed-form value at a rational point as a sum of radicals. `None`
    /// when the value leaves that class (logarithms, nested radicals of
    /// irrational values, inverses of long radical sums) or hits a pole.
    pub fn eval_surd(&self, x: &BigRational) -> Option<SurdSum> {
        Some(match self {
            Expr::Const(c) => SurdSum::rational(c.clone()),
            Expr::Var => SurdSum::rational(x.clone()),
            Expr::Add(a, b) => a.eval_surd(x)?.add(&b.eval_surd(x)?),
            Expr::Sub(a, b) => a.eval_surd(x)?.sub(&b.eval_surd(x)?),
            Expr::Mul(a, b) => a.eval_surd(x)?.mul(&b.eval_surd(x)?),
            Expr::Div(a, b) => a.eval_surd(x)?.mul(&b.eval_surd(x)?.recip()?),
            Expr::Neg(a) => a.eval_surd(x)?.neg(),
            Expr::Pow(a, k) => a.eval_surd(x)?.pow(*k)?,
            Expr::Root(a, k) => a.eval_surd(x)?.root(*k)?,
            Expr::Ln(a) => {
                let v = a.eval_surd(x)?.as_rational()?;
                if v.is_one() {
                    SurdSum::default()
                } else {
                    return None;
                }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{q, qi};

    #[test]
    fn radicals_normalize() {
        let s = SurdSum::radical(qi(1), &q(1, 2), 2);
        assert_eq!(s.to_string(), "(1/2) * sqrt(2)");
        assert_eq!(SurdSum::radical(qi(1), &qi(8), 2).to_string(), "2 * sqrt(2)");
        assert_eq!(SurdSum::radical(qi(1), &qi(4), 2).as_rational(), Some(qi(2)));
        assert_eq!(SurdSum::radical(qi(1), &qi(4), 4).to_string(), "sqrt(2)");
        assert_eq!(SurdSum::radical(qi(1), &qi(16), 3).to_string(), "2 * root(3, 2)");
    }

    #[test]
    fn products_collapse() {
        let r2 = SurdSum::radical(qi(1), &qi(2), 2);
        assert_eq!(r2.mul(&r2).as_rational(), Some(qi(2)));
        let c2 = SurdSum::radical(qi(1), &qi(2), 3);
        assert_eq!(c2.pow(3).unwrap().as_rational(), Some(qi(2)));
        let inv = SurdSum::rational(qi(1)).add(&r2).recip().unwrap();
        assert_eq!(inv.to_string(), "sqrt(2) - 1");
    }

    #[test]
    fn slope_of_radical_difference() {
        let f = Expr::parse("sqrt(1-x) - sqrt(x)").unwrap();
        let k = f.differentiate().eval_surd(&q(1, 2)).unwrap();
        assert_eq!(k.to_string(), "-sqrt(2)");
        assert!((k.to_f64() + 2f64.sqrt()).abs() < 1e-15);
        assert!(f.eval_surd(&q(1, 2)).unwrap().is_zero());
    }

    #[test]
    fn signs_are_certified() {
        // 7 sqrt(2) - 10 < 0 although the gap is only about 0.1
        let s = SurdSum::radical(qi(7), &qi(2), 2).sub(&SurdSum::rational(qi(10)));
        assert_eq!(s.sign(), Some(-1));
        let t = SurdSum::radical(qi(1), &qi(2), 2).add(&SurdSum::radical(qi(1), &qi(3), 3));
        assert_eq!(t.sign(), Some(1));
        assert_eq!(SurdSum::default().sign(), Some(0));
    }

    #[test]
    fn logs_are_opaque() {
        assert!(Expr::parse("ln(x)").unwrap().eval_surd(&qi(2)).is_none());
    }
}
