use super::Expr;

impl Expr {
    /// Symbolic derivative with respect to the variable.
    pub fn differentiate(&self) -> Expr {
        match self {
            Expr::Const(_) => Expr::int(0),
            Expr::Var => Expr::int(1),
            Expr::Add(a, b) => a.differentiate().add(b.differentiate()),
            Expr::Sub(a, b) => a.differentiate().sub(b.differentiate()),
            Expr::Mul(a, b) => {
                let l = a.differentiate().mul((**b).clone());
                let r = (**a).clone().mul(b.differentiate());
                l.add(r)
            }
            Expr::Div(a, b) => {
                if let Some(c) = b.as_const() {
                    return a.differentiate().div(Expr::Const(c.clone()));
                }
                let top = a
                    .differentiate()
                    .mul((**b).clone())
                    .sub((**a).clone().mul(b.differentiate()));
                top.div((**b).clone().pow(2))
            }
            Expr::Neg(a) => a.differentiate().neg(),
            Expr::Pow(a, k) => Expr::int(i64::from(*k))
                .mul((**a).clone().pow(k - 1))
                .mul(a.differentiate()),
            // (u^(1/k))' = u' / (k * u^((k-1)/k))
            Expr::Root(a, k) => {
                let r = self.clone().pow(*k as i32 - 1);
                a.differentiate().div(Expr::int(i64::from(*k)).mul(r))
            }
            Expr::Ln(a) => a.differentiate().div((**a).clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{q, qi};
    use proptest::prelude::*;

    fn d(s: &str) -> Expr {
        Expr::parse(s).unwrap().differentiate()
    }

    #[test]
    fn reciprocal_cubic_slope() {
        assert_eq!(d("x/(x^3+8)").eval_exact(&qi(1)).unwrap(), q(2, 27));
    }

    #[test]
    fn polynomial_slope() {
        let e = d("10*x^3 - 9*x^5");
        assert_eq!(e.eval_exact(&q(1, 3)).unwrap(), q(25, 9));
        assert_eq!(e.eval_exact(&qi(1)).unwrap(), qi(-15));
    }

    #[test]
    fn constant_is_flat() {
        assert_eq!(d("7/3"), Expr::int(0));
    }

    #[test]
    fn roots_and_logs() {
        let e = d("sqrt(1 - x) - sqrt(x)");
        let v = e.eval_numeric(0.5).unwrap();
        assert!((v + 2f64.sqrt()).abs() < 1e-12);
        let e = d("x * root(3, 12 - x^2)");
        assert!((e.eval_numeric(2.0).unwrap() - 4.0 / 3.0).abs() < 1e-12);
        assert_eq!(d("ln(x)").eval_exact(&qi(4)).unwrap(), q(1, 4));
    }

    fn rational_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            Just(Expr::Var),
            (-5i64..6, 1i64..4).prop_map(|(n, d)| Expr::Const(q(n, d))),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
                inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
                (inner, -2i32..4).prop_map(|(a, k)| Expr::Pow(Box::new(a), k)),
            ]
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 2000, max_global_rejects: 20_000, ..ProptestConfig::default() })]
        #[test]
        fn matches_centered_differences(e in rational_expr(), x in -3.0f64..3.0) {
            let h = 1e-5;
            let sym = e.differentiate().eval_numeric(x);
            let (Ok(s), Ok(lo), Ok(hi)) = (sym, e.eval_numeric(x - h), e.eval_numeric(x + h)) else {
                return Ok(());
            };
            let fx = e.eval_numeric(x).unwrap_or(f64::NAN);
            // Stay clear of poles, where the difference quotient is meaningless.
            prop_assume!(s.abs() < 1e4 && fx.abs() < 1e4 && lo.abs() < 1e4 && hi.abs() < 1e4);
            let num = (hi - lo) / (2.0 * h);
            let third = e.differentiate().differentiate().differentiate();
            prop_assume!(third.eval_numeric(x).is_ok_and(|v| v.abs() < 1e3));
            prop_assert!((s - num).abs() <= 1e-6 * (1.0 + s.abs()), "{e}: {s} vs {num} at {x}");
        }
    }
}
