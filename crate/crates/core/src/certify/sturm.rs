//! Sturm sequences and real root isolation.

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::interval::Interval;
use crate::algebra::rational::{format_q, serde_q, sign_of};
use crate::algebra::Polynomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("the zero polynomial has no Sturm sequence")]
pub struct ZeroPolynomial;

/// Sturm sequence of the square-free part of `p`.
///
/// Every element is rescaled by a positive constant to keep coefficients
/// small; positive scaling does not change sign variations.
pub fn sturm_chain(p: &Polynomial) -> Result<Vec<Polynomial>, ZeroPolynomial> {
    if p.is_zero() {
        return Err(ZeroPolynomial);
    }
    let sf = p.squarefree_part().primitive();
    let mut chain = vec![sf.clone()];
    if sf.is_constant() {
        return Ok(chain);
    }
    chain.push(sf.derivative().primitive());
    loop {
        let n = chain.len();
        let r = chain[n - 2].rem(&chain[n - 1]);
        if r.is_zero() {
            return Ok(chain);
        }
        chain.push((-&r).primitive());
    }
}

/// Precomputed chain for repeated root counting.
#[derive(Clone, Debug)]
pub struct Sturm {
    chain: Vec<Polynomial>,
}

impl Sturm {
    pub fn new(p: &Polynomial) -> Result<Sturm, ZeroPolynomial> {
        Ok(Sturm {
            chain: sturm_chain(p)?,
        })
    }

    /// Square-free part of the input (first element of the chain).
    pub fn squarefree(&self) -> &Polynomial {
        &self.chain[0]
    }

    pub fn chain(&self) -> &[Polynomial] {
        &self.chain
    }

    fn variations_of(signs: impl Iterator<Item = i8>) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for s in signs.filter(|s| *s != 0) {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    pub fn variations_at(&self, x: &BigRational) -> usize {
        Self::variations_of(self.chain.iter().map(|p| sign_of(&p.eval(x))))
    }

    /// Variations at `+inf` (`positive`) or `-inf`.
    pub fn variations_at_infinity(&self, positive: bool) -> usize {
        Self::variations_of(self.chain.iter().map(|p| {
            let s = sign_of(&p.leading());
            let odd = p.degree().unwrap_or(0) % 2 == 1;
            if !positive && odd {
                -s
            } else {
                s
            }
        }))
    }

    fn variations_end(&self, x: Option<&BigRational>, positive: bool) -> usize {
        match x {
            Some(x) => self.variations_at(x),
            None => self.variations_at_infinity(positive),
        }
    }

    /// Distinct roots in the half-open range `(a, b]`; `None` ends are
    /// infinite.
    pub fn count_half_open(&self, a: Option<&BigRational>, b: Option<&BigRational>) -> usize {
        let va = self.variations_end(a, false);
        let vb = self.variations_end(b, true);
        va.saturating_sub(vb)
    }

    pub fn is_root(&self, x: &BigRational) -> bool {
        self.chain[0].eval(x).is_zero()
    }

    /// Distinct roots in `iv`, honoring open and closed ends.
    pub fn count_in(&self, iv: &Interval) -> usize {
        if iv.is_point() {
            return usize::from(self.is_root(iv.lo.as_ref().unwrap()));
        }
        let mut n = self.count_half_open(iv.lo.as_ref(), iv.hi.as_ref());
        if let Some(a) = &iv.lo {
            if !iv.lo_open && self.is_root(a) {
                n += 1;
            }
        }
        if let Some(b) = &iv.hi {
            if iv.hi_open && self.is_root(b) {
                n -= 1;
            }
        }
        n
    }

    /// Distinct roots strictly between `a` and `b`.
    pub fn count_open(&self, a: &BigRational, b: &BigRational) -> usize {
        let n = self.count_half_open(Some(a), Some(b));
        n - usize::from(self.is_root(b))
    }

    /// Bound `B` with every real root in `(-B, B)`.
    pub fn root_bound(&self) -> BigRational {
        self.chain[0].cauchy_bound()
    }
}

/// Location of one real root: either exact, or the only root inside an open
/// interval whose endpoints are not roots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RootLocation {
    Exact {
        #[serde(with = "serde_q")]
        at: BigRational,
    },
    Between {
        #[serde(with = "serde_q")]
        lo: BigRational,
        #[serde(with = "serde_q")]
        hi: BigRational,
    },
}

impl RootLocation {
    pub fn left(&self) -> &BigRational {
        match self {
            RootLocation::Exact { at } => at,
            RootLocation::Between { lo, .. } => lo,
        }
    }

    pub fn right(&self) -> &BigRational {
        match self {
            RootLocation::Exact { at } => at,
            RootLocation::Between { hi, .. } => hi,
        }
    }

    pub fn width(&self) -> BigRational {
        self.right() - self.left()
    }

    pub fn midpoint(&self) -> BigRational {
        (self.left() + self.right()) / BigRational::from_integer(2.into())
    }
}

impl std::fmt::Display for RootLocation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RootLocation::Exact { at } => write!(f, "{}", format_q(at)),
            RootLocation::Between { lo, hi } => write!(f, "({}, {})", format_q(lo), format_q(hi)),
        }
    }
}

fn half(a: &BigRational, b: &BigRational) -> BigRational {
    (a + b) / BigRational::from_integer(2.into())
}

impl Sturm {
    /// Isolates the distinct roots strictly inside `(a, b)`, sorted.
    pub fn isolate_open(&self, a: &BigRational, b: &BigRational) -> Vec<RootLocation> {
        let mut out = Vec::new();
        self.isolate_rec(a.clone(), b.clone(), &mut out);
        out
    }

    fn isolate_rec(&self, a: BigRational, b: BigRational, out: &mut Vec<RootLocation>) {
        let n = self.count_open(&a, &b);
        if n == 0 {
            return;
        }
        if n == 1 && !self.is_root(&a) && !self.is_root(&b) {
            out.push(RootLocation::Between { lo: a, hi: b });
            return;
        }
        let m = half(&a, &b);
        self.isolate_rec(a, m.clone(), out);
        if self.is_root(&m) {
            out.push(RootLocation::Exact { at: m.clone() });
        }
        self.isolate_rec(m, b, out);
    }

    /// Isolates every distinct root in `iv`, sorted.
    pub fn isolate(&self, iv: &Interval) -> Vec<RootLocation> {
        let bound = self.root_bound();
        let a = iv.lo.clone().unwrap_or_else(|| -bound.clone());
        let b = iv.hi.clone().unwrap_or(bound);
        if iv.is_point() {
            return if self.is_root(&a) {
                vec![RootLocation::Exact { at: a }]
            } else {
                Vec::new()
            };
        }
        let mut out = Vec::new();
        if iv.lo.is_some() && !iv.lo_open && self.is_root(&a) {
            out.push(RootLocation::Exact { at: a.clone() });
        }
        out.extend(self.isolate_open(&a, &b));
        if iv.hi.is_some() && !iv.hi_open && self.is_root(&b) {
            out.push(RootLocation::Exact { at: b });
        }
        out
    }

    /// Bisects an isolating interval until it is narrower than `width`.
    pub fn refine(&self, loc: &RootLocation, width: &BigRational) -> RootLocation {
        let RootLocation::Between { lo, hi } = loc else {
            return loc.clone();
        };
        let p = &self.chain[0];
        let (mut lo, mut hi) = (lo.clone(), hi.clone());
        let s_lo = sign_of(&p.eval(&lo));
        while &(&hi - &lo) >= width {
            let m = half(&lo, &hi);
            let s = sign_of(&p.eval(&m));
            if s == 0 {
                return RootLocation::Exact { at: m };
            }
            if s == s_lo {
                lo = m;
            } else {
                hi = m;
            }
        }
        RootLocation::Between { lo, hi }
    }
}

/// Number of distinct real roots of `p` in `iv`.
pub fn count_real_roots(p: &Polynomial, iv: &Interval) -> Result<usize, ZeroPolynomial> {
    Ok(Sturm::new(p)?.count_in(iv))
}

/// Whether `x` is strictly inside the location's interval or equal to its
/// exact point.
pub fn location_contains(loc: &RootLocation, x: &BigRational) -> bool {
    match loc {
        RootLocation::Exact { at } => at == x,
        RootLocation::Between { lo, hi } => lo < x && x < hi,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use crate::algebra::rational::{q, qi};
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c)
    }

    #[test]
    fn chains() {
        let c = sturm_chain(&p(&[-2, 0, 1])).unwrap();
        assert_eq!(c.len(), 3);
        assert!(c[2].is_constant() && c[2].leading().is_positive());
        assert_eq!(sturm_chain(&p(&[0, 1])).unwrap(), vec![p(&[0, 1]), p(&[1])]);
        assert_eq!(sturm_chain(&p(&[1, -2, 1])).unwrap(), vec![p(&[-1, 1]), p(&[1])]);
        assert!(sturm_chain(&Polynomial::zero()).is_err());
    }

    #[test]
    fn counts() {
        let line = Interval::real_line();
        assert_eq!(count_real_roots(&p(&[8, 5, 2]), &line).unwrap(), 0);
        let iv = Interval::open(qi(0), qi(4));
        assert_eq!(count_real_roots(&p(&[2, -3, 0, 1]), &iv).unwrap(), 1);
        assert_eq!(count_real_roots(&p(&[-2, 0, 1]), &Interval::open(qi(0), qi(2))).unwrap(), 1);
        // endpoint handling
        let x1 = p(&[-1, 1]);
        assert_eq!(count_real_roots(&x1, &Interval::open(qi(1), qi(2))).unwrap(), 0);
        assert_eq!(count_real_roots(&x1, &Interval::closed(qi(1), qi(2))).unwrap(), 1);
        assert_eq!(count_real_roots(&x1, &Interval::closed_open(qi(0), qi(1))).unwrap(), 0);
        assert_eq!(count_real_roots(&x1, &Interval::closed(qi(1), qi(1))).unwrap(), 1);
    }

    #[test]
    fn isolation_and_refinement() {
        // (x - 1)(x - 1/2)(x^2 - 2)
        let poly = &(&p(&[-1, 1]) * &Polynomial::new(vec![q(-1, 2), qi(1)])) * &p(&[-2, 0, 1]);
        let s = Sturm::new(&poly).unwrap();
        let roots = s.isolate(&Interval::real_line());
        assert_eq!(roots.len(), 4);
        for w in roots.windows(2) {
            assert!(w[0].right() <= w[1].left());
        }
        let eps = q(1, 1_000_000);
        let r = s.refine(&roots[3], &eps);
        assert!(r.width() < eps);
        let v = crate::algebra::rational::to_f64(&r.midpoint());
        assert!((v - 2f64.sqrt()).abs() < 1e-6);
    }

    /// Independent root counter: Descartes' rule of signs on the Möbius
    /// transform of each piece of a bisection tree (Vincent-Collins-Akritas),
    /// over its own square-free reduction.
    fn vca_count(p: &Polynomial, a: &BigRational, b: &BigRational) -> usize {
        fn descartes(c: &[BigRational]) -> usize {
            let mut last = 0;
            let mut n = 0;
            for s in c.iter().map(sign_of).filter(|s| *s != 0) {
                if last != 0 && s != last {
                    n += 1;
                }
                last = s;
            }
            n
        }
        // Roots of p in (a, b) correspond to roots in (0, inf) of
        // (1 + t)^d p((a + b t)/(1 + t)).
        fn transformed(p: &Polynomial, a: &BigRational, b: &BigRational) -> Vec<BigRational> {
            let d = p.degree().unwrap();
            let num = Polynomial::new(vec![a.clone(), b.clone()]);
            let den = Polynomial::new(vec![qi(1), qi(1)]);
            let mut acc = Polynomial::zero();
            for (k, c) in p.coeffs().iter().enumerate() {
                let term = &(&num.pow(k) * &den.pow(d - k)) * &Polynomial::constant(c.clone());
                acc = &acc + &term;
            }
            acc.into_coeffs()
        }
        fn rec(p: &Polynomial, a: BigRational, b: BigRational, depth: u32) -> usize {
            let v = descartes(&transformed(p, &a, &b));
            if v <= 1 {
                return v;
            }
            assert!(depth < 200, "bisection did not terminate");
            let m = (&a + &b) / qi(2);
            let at_m = usize::from(p.eval(&m).is_zero());
            rec(p, a, m.clone(), depth + 1) + at_m + rec(p, m, b, depth + 1)
        }
        // square-free reduction via an independent gcd on integer content
        let mut g = p.clone();
        let mut h = p.derivative();
        while !h.is_zero() {
            let r = g.div_rem(&h).unwrap().1;
            g = h;
            h = r;
        }
        let sf = if g.is_constant() { p.clone() } else { p.div_rem(&g).unwrap().0 };
        if sf.is_constant() {
            return 0;
        }
        rec(&sf, a.clone(), b.clone(), 0)
    }

    #[test]
    fn oracle_agrees_on_known_roots() {
        // roots constructed explicitly: -3, -1/2 (double), 2
        let poly = &(&p(&[3, 1]) * &p(&[1, 2]).pow(2)) * &p(&[-2, 1]);
        let b = poly.cauchy_bound();
        assert_eq!(vca_count(&poly, &-b.clone(), &b), 3);
        assert_eq!(Sturm::new(&poly).unwrap().count_open(&-b.clone(), &b), 3);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn sturm_matches_descartes_bisection(c in proptest::collection::vec(-9i64..10, 2..8)) {
            let poly = p(&c);
            prop_assume!(!poly.is_constant());
            let b = poly.cauchy_bound();
            let s = Sturm::new(&poly).unwrap();
            prop_assert_eq!(s.count_open(&-b.clone(), &b), vca_count(&poly, &-b.clone(), &b));
            let iv = Interval::open(qi(-1), q(3, 2));
            prop_assert_eq!(s.count_in(&iv), vca_count(&poly, &qi(-1), &q(3, 2)));
        }

        #[test]
        fn constructed_roots_are_counted(roots in proptest::collection::vec((-12i64..12, 1i64..4), 1..6)) {
            let mut poly = Polynomial::one();
            let mut distinct: Vec<BigRational> = Vec::new();
            for (n, d) in roots {
                let r = q(n, d);
                poly = &poly * &Polynomial::linear_root(&r);
                if !distinct.contains(&r) {
                    distinct.push(r);
                }
            }
            let s = Sturm::new(&poly).unwrap();
            prop_assert_eq!(s.count_in(&Interval::real_line()), distinct.len());
            let iso = s.isolate(&Interval::real_line());
            prop_assert_eq!(iso.len(), distinct.len());
            for r in &distinct {
                prop_assert!(iso.iter().any(|l| location_contains(l, r)));
            }
        }
    }
}
