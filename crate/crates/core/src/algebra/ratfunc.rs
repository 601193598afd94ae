use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::Polynomial;
use super::rational::lcm_denominators;

/// Quotient of coprime polynomials in canonical form: integer coefficients
/// with no common integer content across numerator and denominator, and a
/// positive leading coefficient in the denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    /// Canonicalizes `num / den`. Returns `None` when `den` is zero.
    pub fn try_new(num: Polynomial, den: Polynomial) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(Self::from_poly(Polynomial::zero()));
        }
        let g = Polynomial::gcd(&num, &den);
        let num = num.divide_exact(&g).expect("gcd divides numerator");
        let den = den.divide_exact(&g).expect("gcd divides denominator");

        let l = lcm_denominators(num.coeffs().iter().chain(den.coeffs()));
        let l = BigRational::from_integer(l);
        let num = num.scale(&l);
        let den = den.scale(&l);
        let content = num
            .coeffs()
            .iter()
            .chain(den.coeffs())
            .fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()));
        let mut scale = BigRational::from_integer(content).recip();
        if den.leading().is_negative() {
            scale = -scale;
        }
        Some(RationalFunction {
            num: num.scale(&scale),
            den: den.scale(&scale),
        })
    }

    pub fn new(num: Polynomial, den: Polynomial) -> Self {
        Self::try_new(num, den).expect("nonzero denominator")
    }

    pub fn from_poly(p: Polynomial) -> Self {
        if p.is_zero() {
            return RationalFunction {
                num: p,
                den: Polynomial::one(),
            };
        }
        Self::new(p, Polynomial::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn x() -> Self {
        Self::from_poly(Polynomial::x())
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the denominator is constant.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// The polynomial this function equals, when it is one.
    pub fn as_polynomial(&self) -> Option<Polynomial> {
        self.is_polynomial()
            .then(|| self.num.scale(&self.den.leading().recip()))
    }

    /// `None` at a pole.
    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.num.eval_f64(x) / self.den.eval_f64(x)
    }

    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::new(n, &self.den * &self.den)
    }

    pub fn recip(&self) -> Option<Self> {
        Self::try_new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i32) -> Option<Self> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let k = e.unsigned_abs() as usize;
        Some(Self::new(base.num.pow(k), base.den.pow(k)))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.num.scale(c), self.den.clone())
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one_poly() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

impl Polynomial {
    fn is_one_poly(&self) -> bool {
        self.degree() == Some(0) && self.leading().is_one()
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(
            &(&self.num * &rhs.den) - &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

/// Panics when dividing by the zero function; use [`RationalFunction::recip`]
/// for a checked inverse.
impl Div for &RationalFunction {
    type Output = RationalFunction;
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}
