use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::problem::{Direction, ProblemSpec};
use crate::algebra::rational::serde_q;
use crate::algebra::{DoubleRootFactor, Polynomial};
use crate::basecurve::{BaseCurve, Constant};
use crate::certify::{CertifiedMin, EvidenceReport, Interval, SignCertificate, SignVerdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Route {
    Theorem1,
    Theorem2Split,
    Theorem5Cubic,
    Case2Heterogeneous,
    /// One variable: the constraint pins it to the touch point.
    SinglePoint,
    NumericEvidenceOnly,
    Failure,
}

impl Route {
    pub fn is_exact(self) -> bool {
        !matches!(self, Route::NumericEvidenceOnly | Route::Failure)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimRole {
    /// The denominator of `f - g` has no root on the interval.
    Denominator,
    /// The cofactor `T` has the sign that makes `f - g` point the right way.
    Cofactor,
    /// Linear cofactor of the cubic fast path.
    CubicCofactor,
}

/// A sign certificate together with what it is supposed to show.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignClaim {
    pub role: ClaimRole,
    /// Index into `functions` (and `factorizations`).
    pub function: usize,
    pub required: SignVerdict,
    pub certificate: SignCertificate,
}

/// How the per-variable curve inequalities add up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SummationRule {
    /// The curve is built on the constrained function itself:
    /// `sum (k l(x_j) + m) = k B + n m`.
    Direct,
    /// Tangent line under a power-sum or product constraint, closed by
    /// monotonicity of power means.
    PowerMeanLine,
    /// Power curve `x^a` under a sum constraint, closed the same way.
    PowerMeanCurve,
    /// Independent tangents per function, all with the same slope.
    CommonSlope,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summation {
    pub rule: SummationRule,
    pub k: Constant,
    /// Sum of the intercepts over all variables.
    pub m_total: Constant,
    #[serde(with = "serde_q")]
    pub budget: BigRational,
    /// Value the summed curves reach: `n f(x0)`, or `sum_j f_j(x_j0)`.
    pub value: Constant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitData {
    /// Region where the curve argument is replaced by a minimum.
    pub g: Interval,
    /// The rest of the domain, where the curve inequality is certified.
    pub rest: Interval,
    /// Minima of `sigma * f`.
    pub min_g: CertifiedMin,
    pub min_i: CertifiedMin,
    /// `min_G + (n - 1) min_I` from certified lower bounds.
    #[serde(with = "serde_q")]
    pub lhs: BigRational,
    /// `sigma * n f(x0)`.
    #[serde(with = "serde_q")]
    pub rhs: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem5Data {
    /// Coefficients of `sigma * f = a x^3 + b x^2 + c x + d`.
    #[serde(with = "serde_q")]
    pub a: BigRational,
    #[serde(with = "serde_q")]
    pub b: BigRational,
    #[serde(with = "serde_q")]
    pub c: BigRational,
    #[serde(with = "serde_q")]
    pub d: BigRational,
    pub n: usize,
    #[serde(with = "serde_q")]
    pub x0: BigRational,
    /// `2 a x0 + b`
    #[serde(with = "serde_q")]
    pub near_condition: BigRational,
    /// `(n + 2) a x0 + b`
    #[serde(with = "serde_q")]
    pub far_condition: BigRational,
    /// `a x + 2 a x0 + b`, the cofactor of `(x - x0)^2`.
    pub cofactor: Polynomial,
    /// `[0, n x0]`
    pub range: Interval,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TouchPointSolution {
    pub points: Vec<f64>,
    /// Reconstructed rational touch points, present only when they satisfy
    /// the system exactly.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "serde_q::option_vec")]
    pub exact: Option<Vec<BigRational>>,
    pub common_slope: f64,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "serde_q::option")]
    pub exact_slope: Option<BigRational>,
    /// `|sum l(x_j) - B|` and the spread of the slope ratios.
    pub residuals: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conclusion {
    pub direction: Direction,
    pub n: usize,
    /// Value of the left side at the equality configuration.
    #[serde(with = "serde_q")]
    pub n_f_x0: BigRational,
    /// Requested bound `A`, when it differs from the configuration value.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "serde_q::option")]
    pub bound: Option<BigRational>,
    pub statement: String,
}

/// Random check of the final inequality on points satisfying the constraint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingCheck {
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    /// Smallest `sigma * (sum f(x_j) - target)` seen.
    pub worst_gap: f64,
    pub worst_point: Vec<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProofCertificate {
    pub problem_id: String,
    pub route: Route,
    /// The problem actually proved, after any normalization.
    pub problem: ProblemSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub original: Option<ProblemSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "serde_q::option")]
    pub x0: Option<BigRational>,
    pub curves: Vec<BaseCurve>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summation: Option<Summation>,
    pub factorizations: Vec<DoubleRootFactor>,
    pub sign_certs: Vec<SignClaim>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<SplitData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem5: Option<Theorem5Data>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub touch_points: Option<TouchPointSolution>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conclusion: Option<Conclusion>,
    pub numeric_evidence: Vec<EvidenceReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampling: Option<SamplingCheck>,
    pub diagnostics: Vec<String>,
    pub seeds: Vec<u64>,
    pub numeric_tol: f64,
}

impl ProofCertificate {
    pub(crate) fn empty(problem: &ProblemSpec, route: Route, seed: u64, tol: f64) -> ProofCertificate {
        ProofCertificate {
            problem_id: problem.id.clone(),
            route,
            problem: problem.clone(),
            original: None,
            x0: None,
            curves: Vec::new(),
            summation: None,
            factorizations: Vec::new(),
            sign_certs: Vec::new(),
            split: None,
            theorem5: None,
            touch_points: None,
            conclusion: None,
            numeric_evidence: Vec::new(),
            sampling: None,
            diagnostics: Vec::new(),
            seeds: vec![seed],
            numeric_tol: tol,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.route.is_exact()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }

    pub fn from_json(s: &str) -> Result<ProofCertificate, serde_json::Error> {
        serde_json::from_str(s)
    }
}
