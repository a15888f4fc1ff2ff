//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := atom ('^' integer)? | '-' factor
//! atom   := number | ident | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! Identifiers `x`, `y`, `t` are variables, `sinh`/`cosh`/`exp` are function
//! names, anything else is a parameter. Numbers are unsigned integers or
//! decimals; decimals become exact rationals (`0.125` is `1/8`).

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Zero};

use super::{Expr, Func, Var};

/// Why parsing stopped, with enough detail for a one-line diagnostic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedEnd,
    UnexpectedToken(String),
    UnknownFunction(String),
    ExpectedExponent,
    MissingCloseParen,
    DivisionByZero,
    TrailingInput,
}

/// Parse failure at a byte offset into the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "parse error at offset {}: ", self.position)?;
        match &self.kind {
            ParseErrorKind::UnexpectedChar(c) => write!(out, "unexpected character '{c}'"),
            ParseErrorKind::UnexpectedEnd => write!(out, "unexpected end of input"),
            ParseErrorKind::UnexpectedToken(t) => write!(out, "unexpected token '{t}'"),
            ParseErrorKind::UnknownFunction(f) => write!(out, "unknown function '{f}'"),
            ParseErrorKind::ExpectedExponent => write!(out, "expected integer exponent after '^'"),
            ParseErrorKind::MissingCloseParen => write!(out, "expected ')'"),
            ParseErrorKind::DivisionByZero => write!(out, "division by zero constant"),
            ParseErrorKind::TrailingInput => write!(out, "trailing input after expression"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(BigRational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Number(n) => n.to_string(),
            Token::Ident(s) => s.clone(),
            Token::Plus => "+".to_string(),
            Token::Minus => "-".to_string(),
            Token::Star => "*".to_string(),
            Token::Slash => "/".to_string(),
            Token::Caret => "^".to_string(),
            Token::LParen => "(".to_string(),
            Token::RParen => ")".to_string(),
        }
    }
}

fn lex(input: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let mut tokens = Vec::new();
    let bytes = input.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                tokens.push((Token::Plus, i));
                i += 1;
            }
            '-' => {
                tokens.push((Token::Minus, i));
                i += 1;
            }
            '*' => {
                tokens.push((Token::Star, i));
                i += 1;
            }
            '/' => {
                tokens.push((Token::Slash, i));
                i += 1;
            }
            '^' => {
                tokens.push((Token::Caret, i));
                i += 1;
            }
            '(' => {
                tokens.push((Token::LParen, i));
                i += 1;
            }
            ')' => {
                tokens.push((Token::RParen, i));
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                let mut int_digits = String::new();
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    int_digits.push(bytes[i] as char);
                    i += 1;
                }
                let mut frac_digits = String::new();
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        frac_digits.push(bytes[i] as char);
                        i += 1;
                    }
                }
                if int_digits.is_empty() && frac_digits.is_empty() {
                    return Err(ParseError {
                        position: start,
                        kind: ParseErrorKind::UnexpectedChar('.'),
                    });
                }
                let int_part: BigInt = if int_digits.is_empty() {
                    BigInt::zero()
                } else {
                    int_digits.parse().expect("digits")
                };
                let mut value = BigRational::from_integer(int_part);
                if !frac_digits.is_empty() {
                    let numer: BigInt = frac_digits.parse().expect("digits");
                    let denom = BigInt::from(10u32).pow(frac_digits.len() as u32);
                    value += BigRational::new(numer, denom);
                }
                tokens.push((Token::Number(value), start));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                let mut ident = String::new();
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    ident.push(bytes[i] as char);
                    i += 1;
                }
                tokens.push((Token::Ident(ident), start));
            }
            other => {
                return Err(ParseError {
                    position: i,
                    kind: ParseErrorKind::UnexpectedChar(other),
                })
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    input_len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|&(_, p)| p)
            .unwrap_or(self.input_len)
    }

    fn advance(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            position: self.here(),
            kind,
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = Vec::new();
        terms.push(self.term()?);
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.advance();
                    terms.push(self.term()?);
                }
                Some(Token::Minus) => {
                    self.advance();
                    let t = self.term()?;
                    terms.push(-t);
                }
                _ => break,
            }
        }
        Ok(Expr::sum(terms))
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut factors = Vec::new();
        factors.push(self.factor()?);
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.advance();
                    factors.push(self.factor()?);
                }
                Some(Token::Slash) => {
                    let at = self.here();
                    self.advance();
                    let f = self.factor()?;
                    match f {
                        Expr::Constant(c) => {
                            if c.is_zero() {
                                return Err(ParseError {
                                    position: at,
                                    kind: ParseErrorKind::DivisionByZero,
                                });
                            }
                            factors.push(Expr::Constant(c.recip()));
                        }
                        other => factors.push(other.pow(-1)),
                    }
                }
                _ => break,
            }
        }
        Ok(Expr::product(factors))
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if matches!(self.peek(), Some(Token::Minus)) {
            self.advance();
            let f = self.factor()?;
            return Ok(-f);
        }
        let base = self.atom()?;
        if matches!(self.peek(), Some(Token::Caret)) {
            self.advance();
            let negative = if matches!(self.peek(), Some(Token::Minus)) {
                self.advance();
                true
            } else {
                false
            };
            match self.advance() {
                Some(Token::Number(n)) if n.is_integer() => {
                    let mag: i64 = num_traits::ToPrimitive::to_i64(&n.to_integer())
                        .ok_or_else(|| self.error(ParseErrorKind::ExpectedExponent))?;
                    let exp = if negative { -mag } else { mag };
                    Ok(base.pow(exp))
                }
                _ => Err(self.error(ParseErrorKind::ExpectedExponent)),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.advance() {
            Some(Token::Number(n)) => Ok(Expr::Constant(n)),
            Some(Token::Ident(name)) => {
                let ident_at = self.tokens[self.pos - 1].1;
                if matches!(self.peek(), Some(Token::LParen)) {
                    let func = Func::from_name(&name).ok_or_else(|| ParseError {
                        position: ident_at,
                        kind: ParseErrorKind::UnknownFunction(name.clone()),
                    })?;
                    self.advance();
                    let arg = self.expr()?;
                    match self.advance() {
                        Some(Token::RParen) => Ok(Expr::Call(func, Box::new(arg))),
                        _ => Err(self.error(ParseErrorKind::MissingCloseParen)),
                    }
                } else if let Some(v) = Var::from_name(&name) {
                    Ok(Expr::Variable(v))
                } else {
                    Ok(Expr::Parameter(name))
                }
            }
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.advance() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(self.error(ParseErrorKind::MissingCloseParen)),
                }
            }
            Some(other) => Err(ParseError {
                position: self.tokens[self.pos - 1].1,
                kind: ParseErrorKind::UnexpectedToken(other.describe()),
            }),
            None => Err(self.error(ParseErrorKind::UnexpectedEnd)),
        }
    }
}

/// Parses `input` into an expression in light normal form.
pub fn parse(input: &str) -> Result<Expr, ParseError> {
    let tokens = lex(input)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        input_len: input.len(),
    };
    let expr = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.error(ParseErrorKind::TrailingInput));
    }
    Ok(expr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn parses_initial_condition_shape() {
        let e = parse("(4/3)*rho*sinh(x+y)^2").unwrap();
        let expected = Expr::product(vec![
            Expr::rational(4, 3),
            Expr::parameter("rho"),
            (Expr::var(Var::X) + Expr::var(Var::Y)).sinh().pow(2),
        ]);
        assert_eq!(e, expected);
    }

    #[test]
    fn decimals_become_exact_rationals() {
        assert_eq!(parse("0.125").unwrap(), Expr::rational(1, 8));
        assert_eq!(parse("2.5").unwrap(), Expr::rational(5, 2));
        assert_eq!(parse(".5").unwrap(), Expr::rational(1, 2));
    }

    #[test]
    fn division_and_precedence() {
        assert_eq!(parse("4/3*x").unwrap(), parse("(4/3)*x").unwrap());
        assert_eq!(parse("1/8").unwrap(), Expr::rational(1, 8));
        assert_eq!(
            parse("x/y").unwrap(),
            Expr::product(vec![Expr::var(Var::X), Expr::var(Var::Y).pow(-1)])
        );
        assert_eq!(parse("-x^2").unwrap(), -Expr::var(Var::X).pow(2));
        assert_eq!(parse("x^-2").unwrap(), Expr::var(Var::X).pow(-2));
        assert_eq!(parse("2^3").unwrap(), Expr::integer(8));
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse("sin(x)").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownFunction("sin".to_string()));

        let err = parse("x +").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnexpectedEnd);
        assert_eq!(err.position, 3);

        let err = parse("x ^ y").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::ExpectedExponent);

        let err = parse("(x + y").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::MissingCloseParen);

        let err = parse("x y").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::TrailingInput);

        let err = parse("1/0").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::DivisionByZero);

        let err = parse("x $ y").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnexpectedChar('$'));
        assert_eq!(err.position, 2);
    }

    #[test]
    fn roundtrip_through_display() {
        for src in [
            "(4/3)*rho*sinh(x+y)^2",
            "x - y + 2*t",
            "cosh(2*x)*exp(-t)",
            "1/8*x^3 - rho^2*sinh(4*x + 4*y)",
        ] {
            let once = parse(src).unwrap();
            let twice = parse(&once.to_string()).unwrap();
            assert_eq!(once, twice, "roundtrip failed for {src}");
        }
    }
}
