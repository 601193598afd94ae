//! The bundled problem collection and its regression report.

use serde::Serialize;

use super::problem_file::{parse_problem_file, ProblemFile, Status};
use crate::jensen::{prove_with, verify_certificate, ProofCertificate, ProveOptions, Route, VerifyError};

/// `(file name, contents)` of every bundled problem.
pub const CORPUS_FILES: &[(&str, &str)] = &[
    ("baltic_way_2011.prob", include_str!("../../corpus/baltic_way_2011.prob")),
    ("cube_root_product.prob", include_str!("../../corpus/cube_root_product.prob")),
    ("cubic_fast_path.prob", include_str!("../../corpus/cubic_fast_path.prob")),
    ("mixed_fractions.prob", include_str!("../../corpus/mixed_fractions.prob")),
    ("quartic_cube_sum.prob", include_str!("../../corpus/quartic_cube_sum.prob")),
    ("quintic_split.prob", include_str!("../../corpus/quintic_split.prob")),
    ("reciprocal_cubic.prob", include_str!("../../corpus/reciprocal_cubic.prob")),
    ("reciprocal_mean.prob", include_str!("../../corpus/reciprocal_mean.prob")),
    ("spb_2011.prob", include_str!("../../corpus/spb_2011.prob")),
    ("sqrt_difference.prob", include_str!("../../corpus/sqrt_difference.prob")),
    ("weighted_reciprocals.prob", include_str!("../../corpus/weighted_reciprocals.prob")),
];

/// Every bundled problem, sorted by id.
pub fn corpus() -> Vec<ProblemFile> {
    let mut out: Vec<ProblemFile> = CORPUS_FILES
        .iter()
        .map(|(name, text)| parse_problem_file(text).unwrap_or_else(|e| panic!("bundled {name}: {e}")))
        .collect();
    out.sort_by(|a, b| a.spec.id.cmp(&b.spec.id));
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct EntryReport {
    pub id: String,
    pub route: Route,
    pub status: &'static str,
    pub statement: Option<String>,
    /// Differences from the values the entry promises.
    pub mismatches: Vec<String>,
    /// Result of re-checking the certificate from its JSON form.
    pub verification: Verification,
    pub passed: bool,
    #[serde(skip)]
    pub certificate: ProofCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Verification {
    /// Every check passed; `checks` counts them.
    Verified { checks: usize },
    /// A failure certificate claims nothing, so there is nothing to verify.
    NotAProof,
    Rejected { reason: String },
}

impl Verification {
    pub fn is_ok(&self) -> bool {
        !matches!(self, Verification::Rejected { .. })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CorpusReport {
    pub entries: Vec<EntryReport>,
    pub passed: usize,
    pub failed: usize,
}

pub fn run_entry(entry: &ProblemFile, opts: &ProveOptions) -> EntryReport {
    let opts = ProveOptions {
        split: entry.split.clone().or_else(|| opts.split.clone()),
        ..opts.clone()
    };
    let cert = prove_with(&entry.spec, &opts);
    let mismatches = entry.expected.compare(&cert);
    let verification = match ProofCertificate::from_json(&cert.to_json()) {
        Err(e) => Verification::Rejected {
            reason: format!("certificate JSON does not parse back: {e}"),
        },
        Ok(back) => match verify_certificate(&back) {
            Ok(v) => Verification::Verified { checks: v.checks.len() },
            Err(VerifyError::NotAProof) if cert.route == Route::Failure => Verification::NotAProof,
            Err(e) => Verification::Rejected { reason: e.to_string() },
        },
    };
    EntryReport {
        id: entry.spec.id.clone(),
        route: cert.route,
        status: Status::of(cert.route).name(),
        statement: cert.conclusion.as_ref().map(|c| c.statement.clone()),
        passed: mismatches.is_empty() && verification.is_ok(),
        mismatches,
        verification,
        certificate: cert,
    }
}

/// Runs every entry whose id contains `filter`.
pub fn run_corpus(filter: Option<&str>, opts: &ProveOptions) -> CorpusReport {
    let entries: Vec<EntryReport> = corpus()
        .iter()
        .filter(|e| filter.is_none_or(|f| e.spec.id.contains(f)))
        .map(|e| run_entry(e, opts))
        .collect();
    let passed = entries.iter().filter(|e| e.passed).count();
    CorpusReport {
        failed: entries.len() - passed,
        passed,
        entries,
    }
}
