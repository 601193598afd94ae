use std::fmt;

use num_traits::Signed;

use super::Expr;
use crate::algebra::format_q;

const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const NEG: u8 = 3;
const POWER: u8 = 4;
const ATOM: u8 = 5;

fn level(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => SUM,
        Expr::Mul(..) | Expr::Div(..) => PRODUCT,
        Expr::Neg(_) => NEG,
        Expr::Pow(..) => POWER,
        Expr::Const(_) | Expr::Var | Expr::Root(..) | Expr::Ln(_) => ATOM,
    }
}

pub(super) fn write_expr(f: &mut fmt::Formatter<'_>, e: &Expr) -> fmt::Result {
    write_at(f, e, SUM)
}

/// Writes `e`, parenthesized when it binds looser than `min`.
fn write_at(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if level(e) < min {
        f.write_str("(")?;
        write_bare(f, e)?;
        f.write_str(")")
    } else {
        write_bare(f, e)
    }
}

fn write_bare(f: &mut fmt::Formatter<'_>, e: &Expr) -> fmt::Result {
    match e {
        Expr::Const(c) => {
            if c.is_integer() && !c.is_negative() {
                f.write_str(&format_q(c))
            } else {
                write!(f, "({})", format_q(c))
            }
        }
        Expr::Var => f.write_str("x"),
        Expr::Add(a, b) => {
            write_at(f, a, SUM)?;
            f.write_str(" + ")?;
            write_at(f, b, PRODUCT)
        }
        Expr::Sub(a, b) => {
            write_at(f, a, SUM)?;
            f.write_str(" - ")?;
            write_at(f, b, PRODUCT)
        }
        Expr::Mul(a, b) => {
            write_at(f, a, PRODUCT)?;
            f.write_str(" * ")?;
            write_at(f, b, NEG)
        }
        Expr::Div(a, b) => {
            write_at(f, a, PRODUCT)?;
            f.write_str(" / ")?;
            write_at(f, b, NEG)
        }
        Expr::Neg(a) => {
            f.write_str("-")?;
            write_at(f, a, POWER)
        }
        Expr::Pow(a, k) => {
            write_at(f, a, ATOM)?;
            if *k < 0 {
                write!(f, "^({k})")
            } else {
                write!(f, "^{k}")
            }
        }
        Expr::Root(a, 2) => {
            f.write_str("sqrt(")?;
            write_at(f, a, SUM)?;
            f.write_str(")")
        }
        Expr::Root(a, k) => {
            write!(f, "root({k}, ")?;
            write_at(f, a, SUM)?;
            f.write_str(")")
        }
        Expr::Ln(a) => {
            f.write_str("ln(")?;
            write_at(f, a, SUM)?;
            f.write_str(")")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{q, qi};
    use proptest::prelude::*;

    fn show(s: &str) -> String {
        Expr::parse(s).unwrap().to_string()
    }

    #[test]
    fn examples() {
        assert_eq!(show("x/(x^3+8)"), "x / (x^3 + 8)");
        assert_eq!(show("-x^2"), "-x^2");
        assert_eq!(show("(-x)^2"), "(-x)^2");
        assert_eq!(show("x^(-2)"), "x^(-2)");
        assert_eq!(show("sqrt(1-x) - sqrt(x)"), "sqrt(1 - x) - sqrt(x)");
        assert_eq!(show("x*root(3, 12 - x^2)"), "x * root(3, 12 - x^2)");
        assert_eq!(show("1/2*x"), "(1/2) * x");
        assert_eq!(show("x - (1 - x)"), "x - (1 - x)");
        assert_eq!(show("x / (2 * x)"), "x / (2 * x)");
    }

    /// Trees the parser can produce: no negated constants and no quotient of
    /// two constants, since both are folded while parsing.
    fn canonical() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            Just(Expr::Var),
            (-20i64..20, 1i64..6).prop_map(|(n, d)| Expr::Const(q(n, d))),
        ];
        leaf.prop_recursive(6, 64, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| match (&a, &b) {
                    (Expr::Const(_), Expr::Const(_)) => Expr::Mul(Box::new(a), Box::new(b)),
                    _ => Expr::Div(Box::new(a), Box::new(b)),
                }),
                inner.clone().prop_map(|a| match a {
                    Expr::Const(_) => Expr::Neg(Box::new(Expr::Var)),
                    a => Expr::Neg(Box::new(a)),
                }),
                (inner.clone(), -4i32..5).prop_map(|(a, k)| Expr::Pow(Box::new(a), k)),
                (inner.clone(), 2u32..5).prop_map(|(a, k)| Expr::Root(Box::new(a), k)),
                inner.prop_map(|a| Expr::Ln(Box::new(a))),
            ]
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn print_then_parse_is_identity(e in canonical()) {
            let text = e.to_string();
            let back = Expr::parse(&text).unwrap();
            prop_assert_eq!(back, e, "{}", text);
        }
    }

    #[test]
    fn constants() {
        assert_eq!(Expr::Const(qi(3)).to_string(), "3");
        assert_eq!(Expr::Const(qi(-3)).to_string(), "(-3)");
        assert_eq!(Expr::Const(q(-1, 2)).to_string(), "(-1/2)");
    }
}
