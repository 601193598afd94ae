//! Sign certificates, certified minima and numeric evidence.

pub mod evidence;
pub mod interval;
pub mod minimum;
pub mod sign;
pub mod sturm;

pub use evidence::{
    numeric_evidence, EvidenceError, EvidenceReport, EvidenceVerdict, EvidenceWitness, NumericRange,
    EVIDENCE_LABEL,
};
pub use interval::Interval;
pub use minimum::{certified_min, ArgMin, CertifiedMin, MinError, MinValue};
pub use sign::{certify_sign, SignCertificate, SignVerdict, Witness};
pub use sturm::{count_real_roots, sturm_chain, RootLocation, Sturm, ZeroPolynomial};
