//! Proof search for `sum f(x_j) >= A` (or `<=`) under one constraint.

pub mod case2;
pub mod certificate;
pub mod cubic;
pub mod homogeneous;
pub mod problem;
pub mod prove;
pub mod sampling;
pub mod split;
pub mod theorem1;
pub mod verify;

pub use certificate::*;
pub use problem::{Direction, Homogeneity, ProblemError, ProblemSpec};
pub use split::{auto_split, complement, prove_with_split, SplitError, SplitProof};
pub use theorem1::{certify_curve, prove_theorem1, summation, summation_rule, CurveStep, CurveStepError, Theorem1Error, Theorem1Proof};
pub use case2::{prove_case2, solve_touchpoints, Case2Error, Case2Proof};
pub use cubic::{theorem5_cubic, CubicError, CubicProof};
pub use homogeneous::{normalize_homogeneous, HomogeneousError};
pub use sampling::{sampling_check, ConstraintSampler, SamplingError};
pub use prove::{prove, prove_with, ProveOptions};
pub use verify::{verify_certificate, verify_json, Verification, VerifyError};
