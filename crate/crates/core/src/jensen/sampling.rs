//! Random points on the constraint surface, and the numeric check of a
//! finished inequality against them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use super::case2::float_range;
use super::certificate::SamplingCheck;
use crate::algebra::rational::to_f64;
use crate::basecurve::{ConstraintFamily, ConstraintSpec};
use crate::certify::Interval;
use crate::expr::Expr;

pub const DEFAULT_SAMPLES: usize = 10_000;
pub const DEFAULT_SEED: u64 = 42;
/// Spreads of the local draws around the touch point, in units of the
/// touch value of `l` (or 1 for logarithms).
const LOCAL_SCALES: [f64; 4] = [1.0, 0.1, 0.01, 0.001];
const ATTEMPTS_PER_SAMPLE: usize = 50;
const BISECTION_STEPS: usize = 100;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SamplingError {
    #[error("an unconstrained problem has no constraint surface to sample")]
    Free,
    #[error("the constraint is invalid: {0}")]
    Constraint(String),
    #[error("expected {n} touch points, got {got}")]
    Centers { n: usize, got: usize },
}

#[derive(Debug, Clone)]
enum LKind {
    Identity,
    Power(f64),
    Log,
    Other(Expr),
}

/// Draws tuples with `sum l(x_j) = B` inside the domain.
///
/// Half of the draws spread over the whole surface (uniform on the simplex
/// in `l`-space when `B > 0` and `l` is nonnegative; wide normal
/// perturbations otherwise), half are small perturbations of the touch
/// configuration, recentred so the constraint still holds exactly up to
/// rounding.
#[derive(Debug, Clone)]
pub struct ConstraintSampler {
    kind: LKind,
    budget: f64,
    n: usize,
    centers: Vec<f64>,
    domain: Interval,
    range: (f64, f64),
}

impl ConstraintSampler {
    /// `centers` are the touch points in `x`-space, one per variable.
    pub fn new(c: &ConstraintSpec, domain: &Interval, centers: Vec<f64>) -> Result<Self, SamplingError> {
        let canon = c.canonical().map_err(|e| SamplingError::Constraint(e.to_string()))?;
        if centers.len() != canon.n {
            return Err(SamplingError::Centers {
                n: canon.n,
                got: centers.len(),
            });
        }
        let kind = match &canon.family {
            ConstraintFamily::Sum => LKind::Identity,
            ConstraintFamily::PowerSum { alpha } => LKind::Power(to_f64(alpha)),
            ConstraintFamily::Product => LKind::Log,
            ConstraintFamily::Custom { l } => LKind::Other(l.clone()),
            ConstraintFamily::Free => return Err(SamplingError::Free),
            ConstraintFamily::Mean { .. } => unreachable!("canonicalized"),
        };
        let budget = match kind {
            LKind::Log => to_f64(&canon.budget).ln(),
            _ => to_f64(&canon.budget),
        };
        Ok(ConstraintSampler {
            kind,
            budget,
            n: canon.n,
            centers,
            domain: domain.clone(),
            range: float_range(domain, c.variable_cap()),
        })
    }

    fn l(&self, x: f64) -> f64 {
        match &self.kind {
            LKind::Identity => x,
            LKind::Power(a) => signed_pow(x, *a),
            LKind::Log => x.ln(),
            LKind::Other(e) => e.eval_numeric(x).unwrap_or(f64::NAN),
        }
    }

    fn l_inverse(&self, y: f64) -> Option<f64> {
        let x = match &self.kind {
            LKind::Identity => y,
            LKind::Power(a) => signed_pow(y, 1.0 / a),
            LKind::Log => y.exp(),
            LKind::Other(_) => return self.bisect_inverse(y),
        };
        x.is_finite().then_some(x)
    }

    /// `l` is assumed monotone on the domain.
    fn bisect_inverse(&self, y: f64) -> Option<f64> {
        let (mut a, mut b) = self.range;
        let (la, lb) = (self.l(a), self.l(b));
        if !(la.is_finite() && lb.is_finite()) || (la - y) * (lb - y) > 0.0 {
            return None;
        }
        let increasing = lb > la;
        for _ in 0..BISECTION_STEPS {
            let m = 0.5 * (a + b);
            if (self.l(m) < y) == increasing {
                a = m;
            } else {
                b = m;
            }
        }
        Some(0.5 * (a + b))
    }

    fn nonnegative_l(&self) -> bool {
        match &self.kind {
            LKind::Identity => self.range.0 >= 0.0,
            LKind::Power(a) => self.range.0 >= 0.0 || (a.fract() == 0.0 && (*a as i64) % 2 == 0),
            LKind::Log => false,
            LKind::Other(_) => self.centers.iter().all(|&x| self.l(x) >= 0.0) && self.l(self.range.0) >= 0.0,
        }
    }

    fn global(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        if self.budget > 0.0 && self.nonnegative_l() {
            let w: Vec<f64> = (0..self.n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
            let total: f64 = w.iter().sum();
            w.iter().map(|v| self.budget * v / total).collect()
        } else {
            let spread = (self.budget.abs() / self.n as f64).max(1.0);
            self.perturbed(rng, spread)
        }
    }

    fn perturbed(&self, rng: &mut ChaCha8Rng, spread: f64) -> Vec<f64> {
        let ys: Vec<f64> = self.centers.iter().map(|&x| self.l(x)).collect();
        let z: Vec<f64> = (0..self.n).map(|_| spread * rng.sample::<f64, _>(StandardNormal)).collect();
        let mean = z.iter().sum::<f64>() / self.n as f64;
        ys.iter().zip(&z).map(|(y, z)| y + z - mean).collect()
    }

    fn local(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let scale = LOCAL_SCALES[rng.random_range(0..LOCAL_SCALES.len())];
        let unit = match self.kind {
            LKind::Log => 1.0,
            _ => {
                let typical = self.centers.iter().map(|&x| self.l(x).abs()).fold(0.0, f64::max);
                if typical > 0.0 { typical } else { 1.0 }
            }
        };
        self.perturbed(rng, scale * unit)
    }

    /// One attempt; `None` when the draw leaves the domain.
    pub fn draw(&self, rng: &mut ChaCha8Rng) -> Option<Vec<f64>> {
        let ys = if rng.random::<bool>() { self.global(rng) } else { self.local(rng) };
        let xs: Vec<f64> = ys.iter().map(|&y| self.l_inverse(y)).collect::<Option<_>>()?;
        xs.iter().all(|&x| self.domain.contains_f64(x)).then_some(xs)
    }

    /// Up to `count` points; fewer only if the domain rejects almost every
    /// draw.
    pub fn sample(&self, count: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        for _ in 0..count * ATTEMPTS_PER_SAMPLE {
            if out.len() == count {
                break;
            }
            if let Some(xs) = self.draw(&mut rng) {
                out.push(xs);
            }
        }
        out
    }

    /// `sum l(x_j) - B` for a drawn point.
    pub fn residual(&self, xs: &[f64]) -> f64 {
        xs.iter().map(|&x| self.l(x)).sum::<f64>() - self.budget
    }
}

fn signed_pow(x: f64, a: f64) -> f64 {
    if x >= 0.0 {
        x.powf(a)
    } else if a.fract() == 0.0 {
        x.powi(a as i32)
    } else {
        // odd roots of negatives, e.g. a = 1/3
        let r = a.recip();
        if r.fract() == 0.0 && (r as i64) % 2 != 0 {
            -(-x).powf(a)
        } else {
            f64::NAN
        }
    }
}

/// Left side `sum f_j(x_j)`; `fs` has one entry for symmetric problems.
pub fn left_side(fs: &[Expr], xs: &[f64]) -> f64 {
    xs.iter()
        .enumerate()
        .map(|(j, &x)| {
            let f = if fs.len() == 1 { &fs[0] } else { &fs[j] };
            f.eval_numeric(x).unwrap_or(f64::NAN)
        })
        .sum()
}

/// Worst `sigma (sum f(x_j) - target)` over the sampled points; passes when
/// it is at least `-tol * max(1, |target|)`.
pub fn sampling_check(
    fs: &[Expr],
    sampler: &ConstraintSampler,
    target: f64,
    sigma: i8,
    samples: usize,
    seed: u64,
    tol: f64,
) -> SamplingCheck {
    let mut worst_gap = f64::INFINITY;
    let mut worst_point = Vec::new();
    let points = sampler.sample(samples, seed);
    for xs in &points {
        let gap = f64::from(sigma) * (left_side(fs, xs) - target);
        if gap.is_finite() && gap < worst_gap {
            worst_gap = gap;
            worst_point = xs.clone();
        }
    }
    SamplingCheck {
        samples: points.len(),
        seed,
        tol,
        worst_gap,
        worst_point,
        passed: !points.is_empty() && worst_gap >= -tol * target.abs().max(1.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::qi;

    fn e(s: &str) -> Expr {
        Expr::parse(s).unwrap()
    }

    #[test]
    fn draws_stay_on_the_surface() {
        let cases = [
            (ConstraintSpec::sum(qi(4), 4), Interval::open(qi(0), qi(4)), 1.0),
            (
                ConstraintSpec::new(ConstraintFamily::PowerSum { alpha: qi(3) }, qi(3), 3).unwrap(),
                Interval::real_line(),
                1.0,
            ),
            (ConstraintSpec::new(ConstraintFamily::Product, qi(8), 3).unwrap(), Interval::above(qi(0)), 2.0),
            (
                ConstraintSpec::new(ConstraintFamily::Custom { l: e("1/(4+x)") }, qi(1), 5).unwrap(),
                Interval::at_least(qi(0)),
                1.0,
            ),
        ];
        for (c, domain, x0) in cases {
            let s = ConstraintSampler::new(&c, &domain, vec![x0; c.n]).unwrap();
            let pts = s.sample(2_000, 9);
            assert_eq!(pts.len(), 2_000, "{}", c.describe());
            for p in &pts {
                assert!(s.residual(p).abs() < 1e-9, "{}: {p:?}", c.describe());
                assert!(p.iter().all(|&x| domain.contains_f64(x)));
            }
        }
    }

    #[test]
    fn baltic_quartet_never_exceeds_four_ninths() {
        let c = ConstraintSpec::sum(qi(4), 4);
        let s = ConstraintSampler::new(&c, &Interval::open(qi(0), qi(4)), vec![1.0; 4]).unwrap();
        let check = sampling_check(&[e("x/(x^3+8)")], &s, 4.0 / 9.0, -1, DEFAULT_SAMPLES, DEFAULT_SEED, 1e-9);
        assert!(check.passed, "{check:?}");
        assert!(check.worst_gap < 1e-6, "local draws approach equality");
    }

    #[test]
    fn a_false_bound_is_caught() {
        let c = ConstraintSpec::sum(qi(4), 4);
        let s = ConstraintSampler::new(&c, &Interval::open(qi(0), qi(4)), vec![1.0; 4]).unwrap();
        let check = sampling_check(&[e("x/(x^3+8)")], &s, 0.4, -1, 1_000, 1, 1e-9);
        assert!(!check.passed);
    }

    #[test]
    fn the_free_family_cannot_be_sampled() {
        let c = ConstraintSpec::new(ConstraintFamily::Free, qi(0), 2).unwrap();
        assert_eq!(
            ConstraintSampler::new(&c, &Interval::real_line(), vec![0.0; 2]).unwrap_err(),
            SamplingError::Free
        );
    }
}
