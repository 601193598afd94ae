use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::rational::{from_f64_exact, serde_q, to_f64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerMeanValue {
    #[serde(with = "serde_q")]
    pub alpha: BigRational,
    pub value: f64,
    /// Exact value of the mean of the given floats, for `alpha = 1` and
    /// `alpha = -1`.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "serde_q::option")]
    pub exact: Option<BigRational>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PowerMeanError {
    #[error("power means need at least one value")]
    Empty,
    #[error("power means need positive finite values, got {0}")]
    NonPositive(f64),
}

/// `((x_1^a + ... + x_n^a) / n)^(1/a)`, the geometric mean for `a = 0`.
pub fn power_mean(alpha: &BigRational, xs: &[f64]) -> Result<PowerMeanValue, PowerMeanError> {
    if xs.is_empty() {
        return Err(PowerMeanError::Empty);
    }
    if let Some(&bad) = xs.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
        return Err(PowerMeanError::NonPositive(bad));
    }
    let n = xs.len() as f64;
    let a = to_f64(alpha);
    let value = if alpha.is_zero() {
        (xs.iter().map(|x| x.ln()).sum::<f64>() / n).exp()
    } else {
        // scale by the maximum to keep large exponents finite
        let top = xs.iter().copied().fold(f64::MIN, f64::max);
        top * (xs.iter().map(|x| (x / top).powf(a)).sum::<f64>() / n).powf(1.0 / a)
    };
    let lo = xs.iter().copied().fold(f64::MAX, f64::min);
    let hi = xs.iter().copied().fold(f64::MIN, f64::max);
    let exact = if alpha.is_one() || *alpha == -BigRational::one() {
        let qs: Vec<BigRational> = xs.iter().map(|&x| from_f64_exact(x).expect("finite")).collect();
        let count = BigRational::from_integer(xs.len().into());
        Some(if alpha.is_one() {
            qs.iter().fold(BigRational::zero(), |s, x| s + x) / count
        } else {
            count / qs.iter().fold(BigRational::zero(), |s, x| s + x.recip())
        })
    } else {
        None
    };
    Ok(PowerMeanValue {
        alpha: alpha.clone(),
        value: value.clamp(lo, hi),
        exact,
    })
}
