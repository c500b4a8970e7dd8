//! Text form of polynomials and rational functions.
//!
//! Printing emits terms in decreasing lex order as `c*x2^3*x3`, joined with
//! ` + ` / ` - `; a non-trivial denominator prints as `(num)/(den)`. Parsing
//! accepts any arithmetic expression over `+ - * / ^` and parentheses, so the
//! printed form parses back to the same canonical value.

use std::fmt::{self, Write as _};

use num::{BigInt, BigRational, One, Signed, ToPrimitive};

use super::{Monomial, PolyError, Polynomial, RationalFunction};

/// Variable naming used for printing and parsing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VarNames {
    /// `x0, x1, ...`
    Indexed,
    Named(Vec<String>),
}

impl VarNames {
    pub fn indexed() -> Self {
        VarNames::Indexed
    }

    pub fn named<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        VarNames::Named(names.into_iter().map(Into::into).collect())
    }

    pub fn len(&self) -> Option<usize> {
        match self {
            VarNames::Indexed => None,
            VarNames::Named(v) => Some(v.len()),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    pub fn name(&self, i: usize) -> String {
        match self {
            VarNames::Named(v) if i < v.len() => v[i].clone(),
            _ => format!("x{i}"),
        }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        match self {
            VarNames::Named(v) => v.iter().position(|n| n == name),
            VarNames::Indexed => name.strip_prefix('x')?.parse().ok(),
        }
    }

    pub fn poly<'a>(&'a self, p: &'a Polynomial) -> PolyDisplay<'a> {
        PolyDisplay { names: self, poly: p }
    }

    pub fn rf<'a>(&'a self, f: &'a RationalFunction) -> RfDisplay<'a> {
        RfDisplay { names: self, rf: f }
    }

    pub fn parse_rf(&self, s: &str) -> Result<RationalFunction, PolyError> {
        let tokens = tokenize(s)?;
        let mut p = Parser { names: self, tokens, pos: 0, src: s };
        let value = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(p.error("trailing input"));
        }
        Ok(value)
    }

    pub fn parse_poly(&self, s: &str) -> Result<Polynomial, PolyError> {
        let f = self.parse_rf(s)?;
        f.as_polynomial()
            .cloned()
            .ok_or_else(|| PolyError::Parse(format!("`{s}` is not a polynomial")))
    }
}

pub struct PolyDisplay<'a> {
    names: &'a VarNames,
    poly: &'a Polynomial,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.poly.terms().rev().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let abs = c.abs();
            let mut out = String::new();
            if !abs.is_one() || m.is_one() {
                write!(out, "{abs}").unwrap();
            }
            for &(v, e) in m.pairs() {
                if !out.is_empty() {
                    out.push('*');
                }
                out.push_str(&self.names.name(v));
                if e != 1 {
                    write!(out, "^{e}").unwrap();
                }
            }
            f.write_str(&out)?;
        }
        Ok(())
    }
}

pub struct RfDisplay<'a> {
    names: &'a VarNames,
    rf: &'a RationalFunction,
}

impl fmt::Display for RfDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rf.is_polynomial() {
            return write!(f, "{}", self.names.poly(self.rf.num()));
        }
        write!(f, "({})/({})", self.names.poly(self.rf.num()), self.names.poly(self.rf.den()))
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Token>, PolyError> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push(Token::Int(digits.parse().expect("digits")));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(PolyError::Parse(format!("unexpected character `{c}` in `{s}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    names: &'a VarNames,
    tokens: Vec<Token>,
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    const MAX_EXPONENT: i64 = 10_000;

    fn error(&self, what: &str) -> PolyError {
        PolyError::Parse(format!("{what} at token {} in `{}`", self.pos, self.src))
    }

    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some(Token::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<RationalFunction, PolyError> {
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFunction, PolyError> {
        let mut acc = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if op == '*' {
                &acc * &rhs
            } else {
                acc.checked_div(&rhs).map_err(|_| self.error("division by zero"))?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RationalFunction, PolyError> {
        if self.peek_op() == Some('-') {
            self.pos += 1;
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<RationalFunction, PolyError> {
        let base = self.atom()?;
        if self.peek_op() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        let negative = if self.peek_op() == Some('-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let e = match self.tokens.get(self.pos) {
            Some(Token::Int(n)) => n.to_i64().filter(|&n| n <= Self::MAX_EXPONENT),
            _ => None,
        }
        .ok_or_else(|| self.error("expected a small integer exponent"))?;
        self.pos += 1;
        base.powi(if negative { -e } else { e })
            .map_err(|_| self.error("zero raised to a negative power"))
    }

    fn atom(&mut self) -> Result<RationalFunction, PolyError> {
        match self.tokens.get(self.pos).cloned() {
            Some(Token::Int(n)) => {
                self.pos += 1;
                Ok(RationalFunction::constant(BigRational::from_integer(n)))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                let i = self
                    .names
                    .index_of(&name)
                    .ok_or_else(|| PolyError::UnknownVariable(name.clone()))?;
                Ok(RationalFunction::from(Polynomial::term(BigRational::one(), Monomial::var(i))))
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.error("expected a number, variable or `(`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> VarNames {
        VarNames::named(["x2", "x3"])
    }

    #[test]
    fn prints_in_decreasing_lex_order() {
        let n = names();
        let p = n.parse_poly("x3^3 + 2*x2^2 - 1/2").unwrap();
        assert_eq!(n.poly(&p).to_string(), "2*x2^2 + x3^3 - 1/2");
        let f = n.parse_rf("x2^2/x3^3").unwrap();
        assert_eq!(n.rf(&f).to_string(), "(x2^2)/(x3^3)");
    }

    #[test]
    fn parses_spec_grammar() {
        let n = names();
        let p = n.parse_poly("3 * x2^3 * x3^1 - x3").unwrap();
        assert_eq!(n.poly(&p).to_string(), "3*x2^3*x3 - x3");
        let f = n.parse_rf("(x2 + x3)/(x2)").unwrap();
        assert_eq!(n.rf(&f).to_string(), "(x2 + x3)/(x2)");
    }

    #[test]
    fn negative_exponent_and_errors() {
        let n = names();
        assert_eq!(n.parse_rf("x2^-1").unwrap(), n.parse_rf("1/x2").unwrap());
        assert!(matches!(n.parse_rf("y"), Err(PolyError::UnknownVariable(_))));
        assert!(n.parse_rf("x2 +").is_err());
        assert!(n.parse_rf("1/0").is_err());
        assert!(n.parse_rf("(x2").is_err());
        assert!(n.parse_poly("1/x2").is_err());
    }

    #[test]
    fn indexed_names() {
        let p = VarNames::indexed().parse_poly("x0*x12").unwrap();
        assert_eq!(p.to_string(), "x0*x12");
    }
}
