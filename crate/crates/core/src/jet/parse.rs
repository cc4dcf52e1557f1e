//! Recursive-descent parser for the ASCII expression grammar.
//!
//! ```text
//! expr    := ('+'|'-')? term (('+'|'-') term)*
//! term    := factor (('*'|'/') factor)*
//! factor  := base ('^' uint)?
//! base    := rational | indep | dep primes | '(' expr ')'
//! ```
//!
//! Primes on the dependent name select jet variables (`y -> u0`, `y' -> u1`,
//! ...), at most [`MAX_PRIME_DEPTH`] of them. Division by a non-constant
//! forces the rational-expression result.

use num_bigint::BigInt;
use num_traits::One;

use super::expr::RationalJetExpr;
use super::poly::{JetPoly, Monomial, Var};
use crate::rational::BigRational;
use crate::JetError;

/// Maximum number of primes after the dependent variable name.
pub const MAX_PRIME_DEPTH: usize = 8;

/// Result of parsing: polynomial when no non-constant division occurred.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedExpr {
    Poly(JetPoly),
    Rational(RationalJetExpr),
}

impl ParsedExpr {
    fn from_expr(e: RationalJetExpr) -> ParsedExpr {
        if e.is_polynomial() {
            ParsedExpr::Poly(e.num().clone())
        } else {
            ParsedExpr::Rational(e)
        }
    }

    /// View as a rational expression either way.
    pub fn into_rational(self) -> RationalJetExpr {
        match self {
            ParsedExpr::Poly(p) => RationalJetExpr::from_poly(p),
            ParsedExpr::Rational(e) => e,
        }
    }

    /// The polynomial, if no denominator survived.
    pub fn as_poly(&self) -> Option<&JetPoly> {
        match self {
            ParsedExpr::Poly(p) => Some(p),
            ParsedExpr::Rational(_) => None,
        }
    }
}

/// Parses `text` with `dep_name` as the dependent variable and `x` as the
/// independent one.
pub fn parse_expr(text: &str, dep_name: &str) -> Result<ParsedExpr, JetError> {
    parse_expr_named(text, "x", dep_name)
}

/// Parses with explicit independent and dependent variable names.
pub fn parse_expr_named(text: &str, indep: &str, dep: &str) -> Result<ParsedExpr, JetError> {
    let mut p = Parser::new(text, indep, dep);
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(ParsedExpr::from_expr(e))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    indep: &'a str,
    dep: &'a str,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, indep: &'a str, dep: &'a str) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
            indep,
            dep,
        }
    }

    fn line_col(&self) -> (usize, usize) {
        let mut line = 1;
        let mut col = 1;
        for &b in &self.src[..self.pos] {
            if b == b'\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        (line, col)
    }

    fn syntax(&self, message: &str) -> JetError {
        let (line, col) = self.line_col();
        JetError::Syntax {
            line,
            col,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        Some(b)
    }

    fn expr(&mut self) -> Result<RationalJetExpr, JetError> {
        let mut sign = BigRational::one();
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                sign = -sign;
            }
            Some(b'+') => {
                self.pos += 1;
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if sign != BigRational::one() {
            acc = acc.neg();
        }
        while let Some(op) = self.peek() {
            match op {
                b'+' => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                b'-' => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalJetExpr, JetError> {
        let mut acc = self.factor()?;
        while let Some(op) = self.peek() {
            match op {
                b'*' => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                b'/' => {
                    self.pos += 1;
                    let f = self.factor()?;
                    if f.is_zero() {
                        return Err(self.syntax("division by zero"));
                    }
                    acc = acc.div(&f).map_err(|_| self.syntax("division by zero"))?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RationalJetExpr, JetError> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if self.pos == start {
                return Err(JetError::BadExponent {
                    found: self
                        .src
                        .get(self.pos)
                        .map(|&b| (b as char).to_string())
                        .unwrap_or_else(|| "end of input".into()),
                });
            }
            let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            let e: u32 = digits.parse().map_err(|_| JetError::BadExponent {
                found: digits.to_string(),
            })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<RationalJetExpr, JetError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.bump() != Some(b')') {
                    return Err(self.syntax("expected ')'"));
                }
                Ok(e)
            }
            Some(b) if b.is_ascii_digit() || b == b'-' && self.starts_number() => self.rational(),
            Some(b) if b.is_ascii_alphabetic() || b == b'_' => self.identifier(),
            Some(b) => Err(self.syntax(&format!("unexpected character '{}'", b as char))),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn starts_number(&mut self) -> bool {
        // '-' here can only be a literal sign inside a rational literal
        self.src
            .get(self.pos + 1)
            .map(|b| b.is_ascii_digit())
            .unwrap_or(false)
    }

    fn integer(&mut self) -> Result<BigInt, JetError> {
        self.skip_ws();
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(self.syntax("expected an integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        s.parse().map_err(|_| self.syntax("invalid integer"))
    }

    fn rational(&mut self) -> Result<RationalJetExpr, JetError> {
        let n = self.integer()?;
        // a '/' directly after a literal is grammar-level division; the
        // rational-literal form n/d is recovered because dividing a constant
        // by a positive-integer constant is the same value.
        Ok(RationalJetExpr::from_poly(JetPoly::constant(
            BigRational::from_integer(n),
        )))
    }

    fn identifier(&mut self) -> Result<RationalJetExpr, JetError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        if name == self.indep {
            return Ok(RationalJetExpr::from_poly(JetPoly::var(Var::X)));
        }
        if name == self.dep {
            let mut primes = 0usize;
            while self.src.get(self.pos) == Some(&b'\'') {
                primes += 1;
                self.pos += 1;
            }
            if primes > MAX_PRIME_DEPTH {
                return Err(JetError::PrimeDepth {
                    depth: primes,
                    max: MAX_PRIME_DEPTH,
                });
            }
            let mut p = JetPoly::zero();
            p.add_term(Monomial::var(Var::U(primes)), BigRational::one());
            return Ok(RationalJetExpr::from_poly(p));
        }
        Err(JetError::UnknownIdentifier {
            name: name.to_string(),
        })
    }
}
