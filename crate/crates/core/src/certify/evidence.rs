//! Grid sampling of `f - g` for expressions outside the exact pipeline.
//! Reports produced here are evidence, never certificates.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::interval::Interval;
use crate::algebra::rational::{from_f64_exact, serde_q, to_f64};
use crate::expr::{DomainViolation, Expr};

pub const EVIDENCE_LABEL: &str = "evidence, not certificate";
pub const DEFAULT_GRID: usize = 10_000;
pub const DEFAULT_TOL: f64 = 1e-9;

/// Local minima of the sampled gap below this get a finer look.
const DIP_THRESHOLD: f64 = 1e-3;
const REFINE_FACTOR: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumericRange {
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl NumericRange {
    /// Double-precision view of `iv`. Infinite ends are clipped to `window`
    /// units beyond the other end (or beyond 0) and treated as open.
    pub fn from_interval(iv: &Interval, window: f64) -> NumericRange {
        let (lo, hi) = iv.to_f64_bounds();
        let (lo, hi) = match (lo.is_finite(), hi.is_finite()) {
            (true, true) => (lo, hi),
            (true, false) => (lo, lo.max(0.0) + window),
            (false, true) => (hi.min(0.0) - window, hi),
            (false, false) => (-window, window),
        };
        NumericRange {
            lo,
            hi,
            lo_open: iv.lo_open,
            hi_open: iv.hi_open,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        (if self.lo_open { x > self.lo } else { x >= self.lo })
            && (if self.hi_open { x < self.hi } else { x <= self.hi })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EvidenceVerdict {
    HoldsNumerically,
    Violated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvidenceWitness {
    /// Simplest rational inside the violating stretch around the worst sample.
    #[serde(with = "serde_q")]
    pub point: BigRational,
    pub x: f64,
    pub gap: f64,
    /// Sign of `f - g` at `point` decided exactly with radical arithmetic,
    /// when the expressions allow it.
    pub exact_sign: Option<i8>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvidenceReport {
    pub label: String,
    pub f: String,
    pub g: String,
    pub range: NumericRange,
    pub grid_points: usize,
    pub refined_points: usize,
    pub tol: f64,
    pub verdict: EvidenceVerdict,
    pub min_gap: f64,
    pub argmin: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<EvidenceWitness>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvidenceError {
    #[error("{violation} at x = {x} inside the sampled range")]
    Domain { x: f64, violation: DomainViolation },
    #[error("at least 100 grid points are required, got {0}")]
    TooFewPoints(usize),
    #[error("empty sampling range")]
    EmptyRange,
}

fn gap(f: &Expr, g: &Expr, x: f64) -> Result<f64, EvidenceError> {
    let fx = f.eval_numeric(x).map_err(|violation| EvidenceError::Domain { x, violation })?;
    let gx = g.eval_numeric(x).map_err(|violation| EvidenceError::Domain { x, violation })?;
    Ok(fx - gx)
}

/// Samples `f - g` on a uniform grid of `grid_points` steps, refines around
/// near-zero dips, and reports whether the minimum stays above `-tol`.
pub fn numeric_evidence(
    f: &Expr,
    g: &Expr,
    range: &NumericRange,
    grid_points: usize,
    tol: f64,
) -> Result<EvidenceReport, EvidenceError> {
    if grid_points < 100 {
        return Err(EvidenceError::TooFewPoints(grid_points));
    }
    if range.hi <= range.lo {
        return Err(EvidenceError::EmptyRange);
    }
    let step = (range.hi - range.lo) / grid_points as f64;
    let mut xs = Vec::with_capacity(grid_points + 1);
    for i in 0..=grid_points {
        let x = if i == grid_points { range.hi } else { range.lo + step * i as f64 };
        if range.contains(x) {
            xs.push(x);
        }
    }
    let mut samples: Vec<(f64, f64)> = Vec::with_capacity(xs.len());
    for &x in &xs {
        samples.push((x, gap(f, g, x)?));
    }

    let mut refined = Vec::new();
    for i in 0..samples.len() {
        let v = samples[i].1;
        let left = i.checked_sub(1).map(|j| samples[j].1);
        let right = samples.get(i + 1).map(|s| s.1);
        let is_dip = left.is_none_or(|l| v <= l) && right.is_none_or(|r| v <= r);
        if !is_dip || v >= DIP_THRESHOLD {
            continue;
        }
        let a = left.map_or(samples[i].0, |_| samples[i - 1].0);
        let b = right.map_or(samples[i].0, |_| samples[i + 1].0);
        let fine = (b - a) / (2 * REFINE_FACTOR) as f64;
        for j in 1..2 * REFINE_FACTOR {
            let x = a + fine * j as f64;
            if range.contains(x) && x != samples[i].0 {
                refined.push((x, gap(f, g, x)?));
            }
        }
    }
    let refined_points = refined.len();
    let mut all = samples;
    all.extend(refined);
    all.sort_by(|a, b| a.0.total_cmp(&b.0));

    let (argmin, min_gap) = all
        .iter()
        .copied()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty grid");
    let verdict = if min_gap >= -tol {
        EvidenceVerdict::HoldsNumerically
    } else {
        EvidenceVerdict::Violated
    };
    let witness = (verdict == EvidenceVerdict::Violated).then(|| witness(f, g, &all, argmin, tol));
    Ok(EvidenceReport {
        label: EVIDENCE_LABEL.to_string(),
        f: f.to_string(),
        g: g.to_string(),
        range: *range,
        grid_points,
        refined_points,
        tol,
        verdict,
        min_gap,
        argmin,
        witness,
    })
}

fn witness(f: &Expr, g: &Expr, all: &[(f64, f64)], worst: f64, tol: f64) -> EvidenceWitness {
    let k = all.iter().position(|s| s.0 == worst).expect("worst sample present");
    let mut a = k;
    while a > 0 && all[a - 1].1 < -tol {
        a -= 1;
    }
    let mut b = k;
    while b + 1 < all.len() && all[b + 1].1 < -tol {
        b += 1;
    }
    let lo = from_f64_exact(all[a].0).expect("finite");
    let hi = from_f64_exact(all[b].0).expect("finite");
    let simple = simplest_between(&lo, &hi);
    let x = to_f64(&simple);
    let (point, x, gap_at) = match gap(f, g, x) {
        Ok(v) if v < -tol => (simple, x, v),
        _ => (from_f64_exact(worst).expect("finite"), worst, all[k].1),
    };
    let exact_sign = match (f.eval_surd(&point), g.eval_surd(&point)) {
        (Some(a), Some(b)) => a.sub(&b).sign(),
        _ => None,
    };
    EvidenceWitness {
        point,
        x,
        gap: gap_at,
        exact_sign,
    }
}

/// Rational with the smallest denominator in `[a, b]`.
pub fn simplest_between(a: &BigRational, b: &BigRational) -> BigRational {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    if !a.is_positive() && !b.is_negative() {
        return BigRational::zero();
    }
    if b.is_negative() {
        return -simplest_between(&-b, &-a);
    }
    let fl = a.floor();
    if fl == *a {
        return fl;
    }
    let next = &fl + BigRational::one();
    if next <= *b {
        return next;
    }
    let inner = simplest_between(&(b - &fl).recip(), &(a - &fl).recip());
    fl + inner.recip()
}
