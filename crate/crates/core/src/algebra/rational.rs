//! Helpers around `BigRational`: construction shorthands, exact string
//! round-tripping ("p/q"), integer roots and bounded-denominator
//! reconstruction from floats.

use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `n/d` as a reduced rational. Panics on `d == 0`.
pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a rational.
pub fn qi(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Formats a rational as `p` or `p/q`.
pub fn format_q(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRationalError(pub String);

/// Parses `p`, `p/q`, or a finite decimal like `-0.9` into an exact rational.
pub fn parse_q(s: &str) -> Result<BigRational, ParseRationalError> {
    let t = s.trim();
    let err = || ParseRationalError(s.to_string());
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let neg = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let whole = if int_digits.is_empty() {
            BigInt::zero()
        } else {
            BigInt::from_str(int_digits).map_err(|_| err())?
        };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let f = BigInt::from_str(frac).map_err(|_| err())?;
        let mag = BigRational::new(whole * &scale + f, scale);
        return Ok(if neg { -mag } else { mag });
    }
    BigInt::from_str(t)
        .map(BigRational::from_integer)
        .map_err(|_| err())
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Huge numerators/denominators: scale through bit lengths.
        let n = r.numer();
        let d = r.denom();
        let shift = n.bits() as i64 - d.bits() as i64;
        let scaled = if shift > 0 {
            BigRational::new(n.clone(), d << (shift as usize))
        } else {
            BigRational::new(n << ((-shift) as usize), d.clone())
        };
        scaled.to_f64().unwrap_or(0.0) * 2f64.powi(shift as i32)
    })
}

/// Exact rational from a finite float (every finite f64 is a dyadic rational).
pub fn from_f64_exact(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

/// Exact k-th root of a rational, if it is rational. Odd roots of negatives
/// take the real branch; even roots of negatives return `None`.
pub fn exact_root(r: &BigRational, k: u32) -> Option<BigRational> {
    if k == 0 {
        return None;
    }
    if r.is_negative() {
        if k % 2 == 0 {
            return None;
        }
        return exact_root(&-r, k).map(|v| -v);
    }
    let n = exact_int_root(r.numer(), k)?;
    let d = exact_int_root(r.denom(), k)?;
    Some(BigRational::new(n, d))
}

fn exact_int_root(n: &BigInt, k: u32) -> Option<BigInt> {
    let root = n.nth_root(k);
    if num_traits::pow(root.clone(), k as usize) == *n {
        Some(root)
    } else {
        None
    }
}

/// `r^e` for a signed exponent; `None` for `0^negative`.
pub fn pow_i(r: &BigRational, e: i32) -> Option<BigRational> {
    if e >= 0 {
        Some(num_traits::pow(r.clone(), e as usize))
    } else if r.is_zero() {
        None
    } else {
        Some(num_traits::pow(r.recip(), e.unsigned_abs() as usize))
    }
}

/// Best rational approximation of `x` with denominator at most `max_den`
/// (continued-fraction convergents plus the final semiconvergent).
pub fn approximate(x: f64, max_den: u64) -> Option<BigRational> {
    if !x.is_finite() || max_den == 0 {
        return None;
    }
    let target = BigRational::from_float(x)?;
    let max_den = BigInt::from(max_den);
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let mut rest = target.clone();
    loop {
        let a = rest.floor().to_integer();
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        if q2 > max_den {
            // Semiconvergent candidate with the largest admissible multiplier.
            let m = (&max_den - &q0) / &q1;
            let ps = &m * &p1 + &p0;
            let qs = &m * &q1 + &q0;
            let conv = BigRational::new(p1.clone(), q1.clone());
            if qs.is_positive() {
                let semi = BigRational::new(ps, qs);
                if (&semi - &target).abs() < (&conv - &target).abs() {
                    return Some(semi);
                }
            }
            return Some(conv);
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = &rest - BigRational::from_integer(a);
        if frac.is_zero() {
            return Some(BigRational::new(p1, q1));
        }
        rest = frac.recip();
    }
}

/// Greatest rational `p/den <= r` (floor onto the grid `1/den`).
pub fn floor_to(r: &BigRational, den: u32) -> BigRational {
    let d = BigInt::from(den);
    let scaled = (r * BigRational::from_integer(d.clone())).floor().to_integer();
    BigRational::new(scaled, d)
}

/// Least rational `p/den >= r`.
pub fn ceil_to(r: &BigRational, den: u32) -> BigRational {
    let d = BigInt::from(den);
    let scaled = (r * BigRational::from_integer(d.clone())).ceil().to_integer();
    BigRational::new(scaled, d)
}

/// Positive divisors of `|n|` by trial division; `None` when `|n|` exceeds
/// `limit` (enumeration would be too slow to be useful).
pub fn divisors(n: &BigInt, limit: u64) -> Option<Vec<BigUint>> {
    let n = n.magnitude().to_u64()?;
    if n == 0 || n > limit {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(BigUint::from(d));
            if d * d != n {
                large.push(BigUint::from(n / d));
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small)
}

/// Least common multiple of the denominators of `values`.
pub fn lcm_denominators<'a>(values: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub fn sign_of(r: &BigRational) -> i8 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Serde adapters writing rationals as exact `"p/q"` strings.
pub mod serde_q {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_q(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(serde::de::Error::custom)
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(r: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
            match r {
                Some(r) => s.serialize_some(&format_q(r)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> Result<Option<BigRational>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|s| parse_q(&s).map_err(serde::de::Error::custom))
                .transpose()
        }
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&format_q(r))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|s| parse_q(s).map_err(serde::de::Error::custom))
                .collect()
        }
    }

    pub mod option_vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &Option<Vec<BigRational>>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(v) => s.serialize_some(&v.iter().map(format_q).collect::<Vec<_>>()),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<BigRational>>, D::Error> {
            Option::<Vec<String>>::deserialize(d)?
                .map(|v| {
                    v.iter()
                        .map(|s| parse_q(s).map_err(serde::de::Error::custom))
                        .collect()
                })
                .transpose()
        }
    }
}
