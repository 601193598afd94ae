//! Candidate base curves `k * l(x) + m` touching `f` at the equality point,
//! and the rules that decide which families are worth trying.

mod constant;
mod constraint;
mod curve;
mod power_mean;
mod select;

pub use constant::Constant;
pub use constraint::{ConstraintError, ConstraintFamily, ConstraintSpec};
pub use curve::{
    base_curve, derivative_at, log_curve, parabola_curve, power_curve, tangent_line, BaseCurve, CurveError,
    FamilyKind,
};
pub use power_mean::{power_mean, PowerMeanError, PowerMeanValue};
pub use select::{
    admissibility_theorem3, admissibility_theorem4, select_family, select_oriented, Admissibility, Rejection,
    SelectError, Selection, SUM_CONSTRAINT_POWERS,
};
