use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::Expr;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    SecondVariable { first: String, second: String },
    ZeroDenominator,
    UnknownFunction(String),
    BadRootIndex,
    ExponentOverflow,
}

/// Parse failure with a byte offset into the input.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Syntax(msg) => write!(f, "syntax error at offset {}: {msg}", self.offset),
            ParseErrorKind::SecondVariable { first, second } => write!(
                f,
                "second variable name '{second}' at offset {} (already using '{first}')",
                self.offset
            ),
            ParseErrorKind::ZeroDenominator => {
                write!(f, "zero denominator literal at offset {}", self.offset)
            }
            ParseErrorKind::UnknownFunction(name) => {
                write!(f, "unknown function '{name}' at offset {}", self.offset)
            }
            ParseErrorKind::BadRootIndex => {
                write!(f, "root index must be an integer >= 2 at offset {}", self.offset)
            }
            ParseErrorKind::ExponentOverflow => {
                write!(f, "exponent out of range at offset {}", self.offset)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(usize, Tok)>, ParseError> {
        let mut lx = Lexer { src, pos: 0 };
        let mut out = Vec::new();
        loop {
            let (at, t) = lx.next()?;
            let end = t == Tok::End;
            out.push((at, t));
            if end {
                return Ok(out);
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn next(&mut self) -> Result<(usize, Tok), ParseError> {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += self.peek().unwrap().len_utf8();
        }
        let start = self.pos;
        let Some(c) = self.peek() else {
            return Ok((start, Tok::End));
        };
        if c.is_ascii_digit() {
            return self.number(start);
        }
        if c.is_alphabetic() || c == '_' {
            while self
                .peek()
                .is_some_and(|c| c.is_alphanumeric() || c == '_')
            {
                self.pos += self.peek().unwrap().len_utf8();
            }
            return Ok((start, Tok::Ident(self.src[start..self.pos].to_string())));
        }
        if "+-*/^(),".contains(c) {
            self.pos += 1;
            return Ok((start, Tok::Sym(c)));
        }
        Err(ParseError {
            offset: start,
            kind: ParseErrorKind::Syntax(format!("unexpected character '{c}'")),
        })
    }

    fn digits(&mut self) -> &'a str {
        let s = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        &self.src[s..self.pos]
    }

    fn number(&mut self, start: usize) -> Result<(usize, Tok), ParseError> {
        let int = self.digits();
        let mut value = BigRational::from_integer(int.parse::<BigInt>().expect("digits"));
        if self.peek() == Some('.') {
            self.pos += 1;
            let frac = self.digits();
            if frac.is_empty() {
                return Err(ParseError {
                    offset: self.pos,
                    kind: ParseErrorKind::Syntax("expected digits after '.'".into()),
                });
            }
            let scale = BigInt::from(10u32).pow(frac.len() as u32);
            value += BigRational::new(frac.parse::<BigInt>().expect("digits"), scale);
        }
        Ok((start, Tok::Num(value)))
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    var: Option<String>,
}

const FUNCTIONS: [&str; 3] = ["sqrt", "root", "ln"];

pub(super) fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: Lexer::tokens(text)?,
        at: 0,
        var: None,
    };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        t => Err(p.error(format!("unexpected {}", describe(t)))),
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(n) => format!("number {n}"),
        Tok::Ident(s) => format!("'{s}'"),
        Tok::Sym(c) => format!("'{c}'"),
        Tok::End => "end of input".into(),
    }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn offset(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn error(&self, msg: String) -> ParseError {
        ParseError {
            offset: self.offset(),
            kind: ParseErrorKind::Syntax(msg),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            let t = self.peek().clone();
            Err(self.error(format!("expected '{c}', found {}", describe(&t))))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if *self.peek() == Tok::Sym('/') {
                let at = self.offset();
                self.bump();
                let rhs = self.unary()?;
                lhs = match (lhs, rhs) {
                    (Expr::Const(a), Expr::Const(b)) => {
                        if b.is_zero() {
                            return Err(ParseError {
                                offset: at,
                                kind: ParseErrorKind::ZeroDenominator,
                            });
                        }
                        Expr::Const(a / b)
                    }
                    (a, b) => Expr::Div(Box::new(a), Box::new(b)),
                };
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            return Ok(match self.unary()? {
                Expr::Const(c) => Expr::Const(-c),
                e => Expr::Neg(Box::new(e)),
            });
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let at = self.offset();
        let paren = self.eat('(');
        let neg = self.eat('-');
        let k = match self.bump() {
            Tok::Num(n) if n.is_integer() => n.to_integer(),
            t => {
                return Err(ParseError {
                    offset: at,
                    kind: ParseErrorKind::Syntax(format!(
                        "exponent must be an integer, found {}",
                        describe(&t)
                    )),
                })
            }
        };
        if paren {
            self.expect(')')?;
        }
        let k: i32 = (if neg { -k } else { k }).try_into().map_err(|_| ParseError {
            offset: at,
            kind: ParseErrorKind::ExponentOverflow,
        })?;
        Ok(Expr::Pow(Box::new(base), k))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let at = self.offset();
        match self.bump() {
            Tok::Num(n) => Ok(Expr::Const(n)),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) if *self.peek() == Tok::Sym('(') => self.call(at, name),
            Tok::Ident(name) => {
                if FUNCTIONS.contains(&name.as_str()) {
                    return Err(ParseError {
                        offset: self.offset(),
                        kind: ParseErrorKind::Syntax(format!("expected '(' after {name}")),
                    });
                }
                match &self.var {
                    None => self.var = Some(name),
                    Some(first) if *first != name => {
                        return Err(ParseError {
                            offset: at,
                            kind: ParseErrorKind::SecondVariable {
                                first: first.clone(),
                                second: name,
                            },
                        })
                    }
                    Some(_) => {}
                }
                Ok(Expr::Var)
            }
            t => Err(ParseError {
                offset: at,
                kind: ParseErrorKind::Syntax(format!("unexpected {}", describe(&t))),
            }),
        }
    }

    fn call(&mut self, at: usize, name: String) -> Result<Expr, ParseError> {
        self.expect('(')?;
        let e = match name.as_str() {
            "sqrt" => Expr::Root(Box::new(self.expr()?), 2),
            "ln" => Expr::Ln(Box::new(self.expr()?)),
            "root" => {
                let k_at = self.offset();
                let k = match self.bump() {
                    Tok::Num(n) if n.is_integer() && n >= BigRational::from_integer(2.into()) => {
                        u32::try_from(n.to_integer()).map_err(|_| ParseError {
                            offset: k_at,
                            kind: ParseErrorKind::BadRootIndex,
                        })?
                    }
                    _ => {
                        return Err(ParseError {
                            offset: k_at,
                            kind: ParseErrorKind::BadRootIndex,
                        })
                    }
                };
                self.expect(',')?;
                Expr::Root(Box::new(self.expr()?), k)
            }
            _ => {
                return Err(ParseError {
                    offset: at,
                    kind: ParseErrorKind::UnknownFunction(name),
                })
            }
        };
        self.expect(')')?;
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{q, qi};

    fn c(n: i64) -> Box<Expr> {
        Box::new(Expr::Const(qi(n)))
    }

    #[test]
    fn single_power() {
        assert_eq!(Expr::parse("x^4").unwrap(), Expr::Pow(Box::new(Expr::Var), 4));
    }

    #[test]
    fn reciprocal_cubic_shape() {
        let e = Expr::parse("x/(x^3+8)").unwrap();
        let want = Expr::Div(
            Box::new(Expr::Var),
            Box::new(Expr::Add(Box::new(Expr::Pow(Box::new(Expr::Var), 3)), c(8))),
        );
        assert_eq!(e, want);
    }

    #[test]
    fn unary_plus_is_rejected_at_its_offset() {
        let err = Expr::parse("x/(+3").unwrap_err();
        assert_eq!(err.offset, 3);
        assert!(matches!(err.kind, ParseErrorKind::Syntax(_)));
    }

    #[test]
    fn power_binds_tighter_than_negation() {
        let e = Expr::parse("-x^2").unwrap();
        assert_eq!(e, Expr::Neg(Box::new(Expr::Pow(Box::new(Expr::Var), 2))));
    }

    #[test]
    fn decimals_and_fractions_are_exact() {
        assert_eq!(Expr::parse("0.9").unwrap(), Expr::Const(q(9, 10)));
        assert_eq!(Expr::parse("-3/4").unwrap(), Expr::Const(q(-3, 4)));
        assert_eq!(Expr::parse("2.50").unwrap(), Expr::Const(q(5, 2)));
    }

    #[test]
    fn negative_exponents() {
        let want = Expr::Pow(Box::new(Expr::Var), -2);
        assert_eq!(Expr::parse("x^-2").unwrap(), want);
        assert_eq!(Expr::parse("x^(-2)").unwrap(), want);
    }

    #[test]
    fn functions() {
        assert_eq!(
            Expr::parse("root(3, 12 - t^2)").unwrap(),
            Expr::Root(
                Box::new(Expr::Sub(c(12), Box::new(Expr::Pow(Box::new(Expr::Var), 2)))),
                3
            )
        );
        assert_eq!(Expr::parse("ln(a)").unwrap(), Expr::Ln(Box::new(Expr::Var)));
        assert!(matches!(
            Expr::parse("root(1, x)").unwrap_err().kind,
            ParseErrorKind::BadRootIndex
        ));
        assert!(matches!(
            Expr::parse("exp(x)").unwrap_err().kind,
            ParseErrorKind::UnknownFunction(_)
        ));
    }

    #[test]
    fn errors() {
        let e = Expr::parse("x + y").unwrap_err();
        assert_eq!(e.offset, 4);
        assert!(matches!(e.kind, ParseErrorKind::SecondVariable { .. }));
        let e = Expr::parse("x + 1/0").unwrap_err();
        assert_eq!((e.offset, e.kind), (5, ParseErrorKind::ZeroDenominator));
        assert!(Expr::parse("").is_err());
        assert!(Expr::parse("(x").is_err());
        assert!(Expr::parse("x)").is_err());
        assert!(Expr::parse("x^1.5").is_err());
        assert!(Expr::parse("1.").is_err());
    }
}
