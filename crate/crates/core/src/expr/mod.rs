//! Single-variable expressions over exact rational constants.
//!
//! Grammar (precedence low to high; `^` binds tighter than unary minus):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | factor
//! factor := atom ['^' ['-'] integer]
//! atom   := number | ident | '(' expr ')' | func '(' args ')'
//! func   := 'sqrt' | 'root' | 'ln'
//! ```
//!
//! Numbers are integers or finite decimals (`0.9` is read as `9/10`). The
//! first identifier that is not a function name becomes the variable; a
//! second, different name is an error.

mod diff;
mod eval;
mod lower;
mod parse;
mod print;
pub mod surd;

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use eval::{DomainViolation, ExactEvalError};
pub use lower::NotRational;
pub use parse::{ParseError, ParseErrorKind};

/// Expression tree. Immutable once built.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Expr {
    Const(BigRational),
    Var,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    /// Integer power; negative exponents allowed.
    Pow(Box<Expr>, i32),
    /// Real `k`-th root, `k >= 2`. Odd roots accept negative radicands.
    Root(Box<Expr>, u32),
    Ln(Box<Expr>),
}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr, ParseError> {
        parse::parse(text)
    }

    pub fn constant(c: BigRational) -> Expr {
        Expr::Const(c)
    }

    pub fn int(n: i64) -> Expr {
        Expr::Const(BigRational::from_integer(n.into()))
    }

    pub fn var() -> Expr {
        Expr::Var
    }

    /// `x^alpha` for a rational exponent: an integer power, or
    /// `root(q, x^p)` for `alpha = p/q`.
    pub fn power_of_var(alpha: &BigRational) -> Expr {
        let p: i32 = alpha.numer().try_into().expect("exponent fits i32");
        let q: u32 = alpha.denom().try_into().expect("index fits u32");
        let base = if p == 1 { Expr::Var } else { Expr::Var.pow(p) };
        if q == 1 {
            base
        } else {
            Expr::Root(Box::new(base), q)
        }
    }

    pub fn as_const(&self) -> Option<&BigRational> {
        match self {
            Expr::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const().is_some_and(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_const().is_some_and(One::is_one)
    }

    /// Whether the variable occurs anywhere in the tree.
    pub fn has_var(&self) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var => true,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.has_var() || b.has_var()
            }
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Root(a, _) | Expr::Ln(a) => a.has_var(),
        }
    }

    /// Replaces the variable by `value`.
    pub fn substitute(&self, value: &Expr) -> Expr {
        let s = |e: &Expr| Box::new(e.substitute(value));
        match self {
            Expr::Const(_) => self.clone(),
            Expr::Var => value.clone(),
            Expr::Add(a, b) => Expr::Add(s(a), s(b)),
            Expr::Sub(a, b) => Expr::Sub(s(a), s(b)),
            Expr::Mul(a, b) => Expr::Mul(s(a), s(b)),
            Expr::Div(a, b) => Expr::Div(s(a), s(b)),
            Expr::Neg(a) => Expr::Neg(s(a)),
            Expr::Pow(a, k) => Expr::Pow(s(a), *k),
            Expr::Root(a, k) => Expr::Root(s(a), *k),
            Expr::Ln(a) => Expr::Ln(s(a)),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + match self {
            Expr::Const(_) | Expr::Var => 0,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.size() + b.size()
            }
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Root(a, _) | Expr::Ln(a) => a.size(),
        }
    }

    // Folding constructors. They apply only the identities `0 + e = e`,
    // `1 * e = e`, `e ^ 1 = e` and fold constant subtrees, which keeps
    // derivatives readable without doing real simplification.

    pub fn add(self, rhs: Expr) -> Expr {
        match (&self, &rhs) {
            (Expr::Const(a), Expr::Const(b)) => Expr::Const(a + b),
            _ if self.is_zero() => rhs,
            _ if rhs.is_zero() => self,
            (_, Expr::Neg(inner)) => self.sub(*inner.clone()),
            _ => Expr::Add(Box::new(self), Box::new(rhs)),
        }
    }

    pub fn sub(self, rhs: Expr) -> Expr {
        match (&self, &rhs) {
            (Expr::Const(a), Expr::Const(b)) => Expr::Const(a - b),
            _ if rhs.is_zero() => self,
            _ if self.is_zero() => rhs.neg(),
            _ => Expr::Sub(Box::new(self), Box::new(rhs)),
        }
    }

    pub fn mul(self, rhs: Expr) -> Expr {
        match (&self, &rhs) {
            (Expr::Const(a), Expr::Const(b)) => Expr::Const(a * b),
            _ if self.is_zero() || rhs.is_zero() => Expr::Const(BigRational::zero()),
            _ if self.is_one() => rhs,
            _ if rhs.is_one() => self,
            (Expr::Const(c), _) if *c == -BigRational::one() => rhs.neg(),
            _ => Expr::Mul(Box::new(self), Box::new(rhs)),
        }
    }

    pub fn div(self, rhs: Expr) -> Expr {
        match (&self, &rhs) {
            (Expr::Const(a), Expr::Const(b)) if !b.is_zero() => Expr::Const(a / b),
            _ if rhs.is_one() => self,
            _ if self.is_zero() && !rhs.is_zero() => self,
            _ => Expr::Div(Box::new(self), Box::new(rhs)),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(-c),
            Expr::Neg(inner) => *inner,
            other => Expr::Neg(Box::new(other)),
        }
    }

    pub fn pow(self, k: i32) -> Expr {
        match (&self, k) {
            (_, 0) => Expr::int(1),
            (_, 1) => self,
            (Expr::Const(c), _) if !(c.is_zero() && k < 0) => {
                Expr::Const(crate::algebra::rational::pow_i(c, k).expect("nonzero base"))
            }
            _ => Expr::Pow(Box::new(self), k),
        }
    }

    pub fn root(self, k: u32) -> Expr {
        Expr::Root(Box::new(self), k)
    }

    pub fn ln(self) -> Expr {
        Expr::Ln(Box::new(self))
    }

    pub fn sqrt(self) -> Expr {
        self.root(2)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::write_expr(f, self)
    }
}

impl FromStr for Expr {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Expr::parse(s)
    }
}

impl Serialize for Expr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Expr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Expr::parse(&s).map_err(serde::de::Error::custom)
    }
}
