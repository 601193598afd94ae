use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::algebra::rational::serde_q;
use crate::basecurve::ConstraintSpec;
use crate::certify::Interval;
use crate::expr::Expr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    /// `sum f(x_j) >= A`
    #[serde(rename = "ge")]
    LowerBound,
    /// `sum f(x_j) <= A`
    #[serde(rename = "le")]
    UpperBound,
}

impl Direction {
    /// `+1` for lower bounds, `-1` for upper bounds. Multiplying both sides
    /// by this turns every claim into a `>=` claim.
    pub fn sigma(self) -> i8 {
        match self {
            Direction::LowerBound => 1,
            Direction::UpperBound => -1,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Direction::LowerBound => ">=",
            Direction::UpperBound => "<=",
        }
    }

    pub fn is_upper(self) -> bool {
        self == Direction::UpperBound
    }
}

/// Declared homogeneity of an unconstrained problem: both sides scale like
/// `t^degree`, so any fixed value of the constraint `target` may be assumed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Homogeneity {
    pub degree: i32,
    pub target: ConstraintSpec,
}

/// `sum_j f_j(x_j) (>= | <=) A` under a side condition.
///
/// `functions` holds one expression for symmetric problems or exactly `n`
/// for heterogeneous ones. `bound` may mention one variable, read as the sum
/// of all variables; that form only makes sense for homogeneous problems.
/// Without a bound the target is `n f(x0)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub id: String,
    pub functions: Vec<Expr>,
    pub n: usize,
    pub constraint: ConstraintSpec,
    pub domain: Interval,
    pub direction: Direction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<Expr>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "serde_q::option")]
    pub touch_point: Option<BigRational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub homogeneous: Option<Homogeneity>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProblemError {
    #[error("n must be at least 1")]
    ZeroVariables,
    #[error("expected 1 or {n} functions, got {got}")]
    FunctionCount { n: usize, got: usize },
    #[error("constraint is for {constraint} variables but the problem has {n}")]
    ArityMismatch { n: usize, constraint: usize },
    #[error("{0}")]
    Constraint(String),
}

impl ProblemSpec {
    /// Symmetric problem with a single function.
    pub fn symmetric(
        id: impl Into<String>,
        f: Expr,
        constraint: ConstraintSpec,
        domain: Interval,
        direction: Direction,
    ) -> ProblemSpec {
        ProblemSpec {
            id: id.into(),
            functions: vec![f],
            n: constraint.n,
            constraint,
            domain,
            direction,
            bound: None,
            touch_point: None,
            homogeneous: None,
        }
    }

    pub fn with_bound(mut self, bound: Expr) -> ProblemSpec {
        self.bound = Some(bound);
        self
    }

    pub fn validate(&self) -> Result<(), ProblemError> {
        if self.n == 0 {
            return Err(ProblemError::ZeroVariables);
        }
        if self.functions.len() != 1 && self.functions.len() != self.n {
            return Err(ProblemError::FunctionCount {
                n: self.n,
                got: self.functions.len(),
            });
        }
        if self.constraint.n != self.n {
            return Err(ProblemError::ArityMismatch {
                n: self.n,
                constraint: self.constraint.n,
            });
        }
        self.constraint.validate().map_err(|e| ProblemError::Constraint(e.to_string()))
    }

    /// Whether the functions differ between variables.
    pub fn is_heterogeneous(&self) -> bool {
        self.functions.len() > 1 && self.functions.iter().any(|f| *f != self.functions[0])
    }

    /// Function applied to variable `j`.
    pub fn function(&self, j: usize) -> &Expr {
        if self.functions.len() == 1 {
            &self.functions[0]
        } else {
            &self.functions[j]
        }
    }

    pub fn sigma(&self) -> i8 {
        self.direction.sigma()
    }
}
