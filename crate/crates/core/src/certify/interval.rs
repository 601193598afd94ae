use std::fmt;

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::algebra::rational::{format_q, serde_q, to_f64};

/// Real interval with exact rational endpoints. `None` is an infinite end,
/// which is always open.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "serde_q::option")]
    pub lo: Option<BigRational>,
    #[serde(with = "serde_q::option")]
    pub hi: Option<BigRational>,
    pub lo_open: bool,
    pub hi_open: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("empty interval {0}")]
pub struct EmptyInterval(pub String);

impl Interval {
    pub fn new(
        lo: Option<BigRational>,
        hi: Option<BigRational>,
        lo_open: bool,
        hi_open: bool,
    ) -> Result<Interval, EmptyInterval> {
        let iv = Interval {
            lo_open: lo_open || lo.is_none(),
            hi_open: hi_open || hi.is_none(),
            lo,
            hi,
        };
        if let (Some(a), Some(b)) = (&iv.lo, &iv.hi) {
            if a > b || (a == b && (iv.lo_open || iv.hi_open)) {
                return Err(EmptyInterval(iv.to_string()));
            }
        }
        Ok(iv)
    }

    pub fn open(a: BigRational, b: BigRational) -> Interval {
        Self::new(Some(a), Some(b), true, true).expect("a < b")
    }

    pub fn closed(a: BigRational, b: BigRational) -> Interval {
        Self::new(Some(a), Some(b), false, false).expect("a <= b")
    }

    /// `(a, b]`
    pub fn open_closed(a: BigRational, b: BigRational) -> Interval {
        Self::new(Some(a), Some(b), true, false).expect("a < b")
    }

    /// `[a, b)`
    pub fn closed_open(a: BigRational, b: BigRational) -> Interval {
        Self::new(Some(a), Some(b), false, true).expect("a < b")
    }

    pub fn real_line() -> Interval {
        Self::new(None, None, true, true).expect("nonempty")
    }

    /// `(a, inf)`
    pub fn above(a: BigRational) -> Interval {
        Self::new(Some(a), None, true, true).expect("nonempty")
    }

    /// `[a, inf)`
    pub fn at_least(a: BigRational) -> Interval {
        Self::new(Some(a), None, false, true).expect("nonempty")
    }

    pub fn is_point(&self) -> bool {
        matches!((&self.lo, &self.hi), (Some(a), Some(b)) if a == b)
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_some() && self.hi.is_some()
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        let above = match &self.lo {
            None => true,
            Some(a) if self.lo_open => x > a,
            Some(a) => x >= a,
        };
        let below = match &self.hi {
            None => true,
            Some(b) if self.hi_open => x < b,
            Some(b) => x <= b,
        };
        above && below
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        let above = match &self.lo {
            None => true,
            Some(a) if self.lo_open => x > to_f64(a),
            Some(a) => x >= to_f64(a),
        };
        let below = match &self.hi {
            None => true,
            Some(b) if self.hi_open => x < to_f64(b),
            Some(b) => x <= to_f64(b),
        };
        above && below
    }

    /// Whether every point of `other` lies in `self`.
    pub fn contains_interval(&self, other: &Interval) -> bool {
        let lo_ok = match (&self.lo, &other.lo) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(c)) => a < c || (a == c && (!self.lo_open || other.lo_open)),
        };
        let hi_ok = match (&self.hi, &other.hi) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(b), Some(d)) => d < b || (b == d && (!self.hi_open || other.hi_open)),
        };
        lo_ok && hi_ok
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let (lo, lo_open) = match (&self.lo, &other.lo) {
            (None, _) => (other.lo.clone(), other.lo_open),
            (_, None) => (self.lo.clone(), self.lo_open),
            (Some(a), Some(c)) if a > c => (Some(a.clone()), self.lo_open),
            (Some(a), Some(c)) if c > a => (Some(c.clone()), other.lo_open),
            (Some(a), Some(_)) => (Some(a.clone()), self.lo_open || other.lo_open),
        };
        let (hi, hi_open) = match (&self.hi, &other.hi) {
            (None, _) => (other.hi.clone(), other.hi_open),
            (_, None) => (self.hi.clone(), self.hi_open),
            (Some(b), Some(d)) if b < d => (Some(b.clone()), self.hi_open),
            (Some(b), Some(d)) if d < b => (Some(d.clone()), other.hi_open),
            (Some(b), Some(_)) => (Some(b.clone()), self.hi_open || other.hi_open),
        };
        Interval::new(lo, hi, lo_open, hi_open).ok()
    }

    /// A rational point of the interval, interior when there is one.
    pub fn sample_point(&self) -> BigRational {
        let one = BigRational::one();
        match (&self.lo, &self.hi) {
            (Some(a), Some(b)) => (a + b) / BigRational::from_integer(2.into()),
            (Some(a), None) => a + one,
            (None, Some(b)) => b - one,
            (None, None) => BigRational::from_integer(0.into()),
        }
    }

    /// Endpoints as doubles, infinite ends mapped to infinities.
    pub fn to_f64_bounds(&self) -> (f64, f64) {
        (
            self.lo.as_ref().map_or(f64::NEG_INFINITY, to_f64),
            self.hi.as_ref().map_or(f64::INFINITY, to_f64),
        )
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lo = self.lo.as_ref().map_or("-inf".to_string(), format_q);
        let hi = self.hi.as_ref().map_or("inf".to_string(), format_q);
        write!(
            f,
            "{}{lo}, {hi}{}",
            if self.lo_open { '(' } else { '[' },
            if self.hi_open { ')' } else { ']' }
        )
    }
}
