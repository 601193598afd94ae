//! Double-root extraction at a touch point.
//!
//! When `f` and `g` agree in value and first derivative at `x0`, the
//! numerator of `f - g` has `x0` as a root of multiplicity at least two, so
//! `f - g = (x - x0)^2 * T / Q` with `T` a polynomial. `f` and `g` may both be
//! rational functions; `Q` is the canonical denominator of `f - g`.

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::poly::Polynomial;
use super::ratfunc::RationalFunction;
use super::rational::serde_q;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleRootFactor {
    #[serde(with = "serde_q")]
    pub x0: BigRational,
    /// Cofactor `T`.
    #[serde(rename = "T_coeffs")]
    pub t: Polynomial,
    /// Canonical denominator of `f - g`.
    #[serde(rename = "Q_coeffs")]
    pub qden: Polynomial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mismatch {
    Value,
    Derivative,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FactorError {
    #[error("tangency violated ({which:?}): f gives {f}, g gives {g}")]
    TangencyViolation {
        which: Mismatch,
        f: BigRational,
        g: BigRational,
    },
    #[error("pole at the touch point {0}")]
    PoleAtTouchPoint(BigRational),
    #[error("(x - x0)^2 does not divide the numerator; remainder {0}")]
    NotDoubleRoot(Polynomial),
}

impl DoubleRootFactor {
    /// `(x - x0)^2`.
    pub fn square(&self) -> Polynomial {
        let lin = Polynomial::linear_root(&self.x0);
        &lin * &lin
    }

    /// Numerator `(x - x0)^2 * T` of the difference.
    pub fn numerator(&self) -> Polynomial {
        &self.square() * &self.t
    }

    pub fn difference(&self) -> RationalFunction {
        RationalFunction::new(self.numerator(), self.qden.clone())
    }
}

/// Factors `f - g` as `(x - x0)^2 * T / Q` after checking tangency exactly.
pub fn double_root_factor(
    f: &RationalFunction,
    g: &RationalFunction,
    x0: &BigRational,
) -> Result<DoubleRootFactor, FactorError> {
    if f.den().eval(x0).is_zero() || g.den().eval(x0).is_zero() {
        return Err(FactorError::PoleAtTouchPoint(x0.clone()));
    }
    let fv = f.eval(x0).expect("no pole");
    let gv = g.eval(x0).expect("no pole");
    if fv != gv {
        return Err(FactorError::TangencyViolation {
            which: Mismatch::Value,
            f: fv,
            g: gv,
        });
    }
    let fd = f.derivative().eval(x0).expect("no pole");
    let gd = g.derivative().eval(x0).expect("no pole");
    if fd != gd {
        return Err(FactorError::TangencyViolation {
            which: Mismatch::Derivative,
            f: fd,
            g: gd,
        });
    }
    let h = f - g;
    let lin = Polynomial::linear_root(x0);
    let t = h
        .num()
        .divide_exact(&(&lin * &lin))
        .map_err(|e| match e {
            super::poly::DivisionError::Remainder(r) => FactorError::NotDoubleRoot(r),
            super::poly::DivisionError::ByZero => unreachable!("(x - x0)^2 is nonzero"),
        })?;
    let out = DoubleRootFactor {
        x0: x0.clone(),
        t,
        qden: h.den().clone(),
    };
    debug_assert_eq!(out.difference(), h);
    Ok(out)
}
