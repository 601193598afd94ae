//! The three `prover` subcommands. Each writes to `out` and returns the
//! process exit code.

use std::io::Write;
use std::path::Path;

use super::corpus::{run_corpus, Verification};
use super::narrative::render;
use super::problem_file::parse_problem_file;
use crate::algebra::double_root_factor;
use crate::algebra::rational::parse_q;
use crate::expr::Expr;
use crate::jensen::{prove_with, ProveOptions, Route};

pub const EXIT_EXACT: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;
pub const EXIT_FAILURE: i32 = 3;

pub fn exit_code(route: Route) -> i32 {
    match route {
        Route::Failure => EXIT_FAILURE,
        Route::NumericEvidenceOnly => EXIT_NUMERIC,
        _ => EXIT_EXACT,
    }
}

/// Input errors go to `out` too so callers can capture them.
fn input_error(out: &mut dyn Write, msg: impl std::fmt::Display) -> i32 {
    let _ = writeln!(out, "error: {msg}");
    EXIT_INPUT
}

pub fn cmd_prove(
    path: &Path,
    json: Option<&Path>,
    verbose: bool,
    opts: &ProveOptions,
    out: &mut dyn Write,
) -> i32 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return input_error(out, format!("{}: {e}", path.display())),
    };
    let file = match parse_problem_file(&text) {
        Ok(f) => f,
        Err(e) => return input_error(out, format!("{}: {e}", path.display())),
    };
    let opts = ProveOptions {
        split: opts.split.clone().or(file.split.clone()),
        ..opts.clone()
    };
    let cert = prove_with(&file.spec, &opts);
    let _ = write!(out, "{}", render(&cert, verbose));
    if let Some(j) = json {
        if let Err(e) = std::fs::write(j, cert.to_json()) {
            return input_error(out, format!("{}: {e}", j.display()));
        }
    }
    exit_code(cert.route)
}

/// Exit 0 when every selected entry matches its expectations and its
/// certificate re-verifies, 3 otherwise.
pub fn cmd_corpus(filter: Option<&str>, report: Option<&Path>, opts: &ProveOptions, out: &mut dyn Write) -> i32 {
    let r = run_corpus(filter, opts);
    if r.entries.is_empty() {
        return input_error(out, format!("no corpus entry matches `{}`", filter.unwrap_or("")));
    }
    for e in &r.entries {
        let _ = writeln!(
            out,
            "{} {:<12} {:<20} {}",
            if e.passed { "PASS" } else { "FAIL" },
            e.id,
            format!("{:?}", e.route),
            e.statement.as_deref().unwrap_or("-")
        );
        for m in &e.mismatches {
            let _ = writeln!(out, "     {m}");
        }
        if let Verification::Rejected { reason } = &e.verification {
            let _ = writeln!(out, "     verification: {reason}");
        }
    }
    let _ = writeln!(out, "{} passed, {} failed", r.passed, r.failed);
    if let Some(path) = report {
        let json = serde_json::to_string_pretty(&r).expect("reports serialize");
        if let Err(e) = std::fs::write(path, json) {
            return input_error(out, format!("{}: {e}", path.display()));
        }
    }
    if r.failed == 0 { EXIT_EXACT } else { EXIT_FAILURE }
}

/// Factors `f - g` at `x0`; exit 3 when `g` is not tangent there.
pub fn cmd_factor(f: &str, g: &str, x0: &str, out: &mut dyn Write) -> i32 {
    let lower = |s: &str| -> Result<_, String> {
        let e = Expr::parse(s).map_err(|e| format!("`{s}`: {e}"))?;
        e.lower_to_rational().map_err(|e| format!("`{s}`: {e}"))
    };
    let (fr, gr) = match (lower(f), lower(g)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return input_error(out, e),
    };
    let x0 = match parse_q(x0) {
        Ok(v) => v,
        Err(e) => return input_error(out, e),
    };
    match double_root_factor(&fr, &gr, &x0) {
        Ok(fac) => {
            let _ = writeln!(out, "T = {}", fac.t);
            let _ = writeln!(out, "Q = {}", fac.qden);
            let _ = writeln!(out, "f - g = {}", fac.difference());
            EXIT_EXACT
        }
        Err(e) => {
            let _ = writeln!(out, "{e}");
            EXIT_FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(f: impl FnOnce(&mut Vec<u8>) -> i32) -> (i32, String) {
        let mut buf = Vec::new();
        let code = f(&mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn factor_reports_cofactor_and_denominator() {
        let (code, text) = run(|o| cmd_factor("x/(x^3+8)", "(2*x+1)/27", "1", o));
        assert_eq!(code, EXIT_EXACT, "{text}");
        assert!(text.contains("T = -2x^2 - 5x - 8"), "{text}");
        let (code, text) = run(|o| cmd_factor("x^2", "x", "1", o));
        assert_eq!(code, EXIT_FAILURE);
        assert!(text.contains("tangency"), "{text}");
        let (code, _) = run(|o| cmd_factor("x^2", "x", "a", o));
        assert_eq!(code, EXIT_INPUT);
        let (code, _) = run(|o| cmd_factor("sqrt(x)", "x", "1", o));
        assert_eq!(code, EXIT_INPUT);
    }

    #[test]
    fn missing_file_is_an_input_error() {
        let (code, text) = run(|o| cmd_prove(Path::new("/nonexistent.prob"), None, false, &ProveOptions::default(), o));
        assert_eq!(code, EXIT_INPUT);
        assert!(text.starts_with("error:"));
    }
}
