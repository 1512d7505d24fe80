//! Expression front end.
//!
//! A small arithmetic grammar shared by every expression field of the
//! input format:
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := factor (("*" | "/") factor)*
//! factor := atom ("^" INT)? | "-" factor
//! atom   := NUMBER | IDENT PRIME* | IDENT "(" expr ")" | "(" expr ")"
//! ```
//!
//! `IDENT "(" ... ")"` is only valid when the identifier names a
//! derivation; a prime suffix applies the first declared derivation.
//! Operators are left-associative, whitespace is insignificant, and error
//! positions are 1-based line:column.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Pow;

use crate::error::{Error, Result};
use crate::Rat;

/// The identifiers an expression may mention: plain values (base
/// variables, basis elements, system variables) and derivation names, in
/// declaration order.
#[derive(Debug, Clone, Default)]
pub struct Alphabet {
    pub identifiers: BTreeSet<String>,
    pub derivations: Vec<String>,
}

impl Alphabet {
    pub fn new<I, J>(identifiers: I, derivations: J) -> Self
    where
        I: IntoIterator,
        I::Item: Into<String>,
        J: IntoIterator,
        J::Item: Into<String>,
    {
        Alphabet {
            identifiers: identifiers.into_iter().map(Into::into).collect(),
            derivations: derivations.into_iter().map(Into::into).collect(),
        }
    }

    fn is_derivation(&self, name: &str) -> bool {
        self.derivations.iter().any(|d| d == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprAst {
    Number(Rat),
    Var(String),
    Neg(Box<ExprAst>),
    Add(Box<ExprAst>, Box<ExprAst>),
    Sub(Box<ExprAst>, Box<ExprAst>),
    Mul(Box<ExprAst>, Box<ExprAst>),
    Div(Box<ExprAst>, Box<ExprAst>),
    Pow(Box<ExprAst>, i64),
    DApp(String, Box<ExprAst>),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rat),
    Ident(String),
    Prime,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: u32,
    col: u32,
}

fn syntax_error(line: u32, col: u32, msg: impl Into<String>) -> Error {
    Error::SyntaxError {
        line,
        col,
        msg: msg.into(),
    }
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut line = 1u32;
    let mut col = 1u32;
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        let tok = match c {
            '0'..='9' => {
                let mut digits = String::new();
                while matches!(chars.peek(), Some(d) if d.is_ascii_digit()) {
                    digits.push(bump(&mut chars));
                }
                let mut value = Rat::from_integer(digits.parse::<BigInt>().unwrap());
                if matches!(chars.peek(), Some('.')) {
                    bump(&mut chars);
                    let mut frac = String::new();
                    while matches!(chars.peek(), Some(d) if d.is_ascii_digit()) {
                        frac.push(bump(&mut chars));
                    }
                    if frac.is_empty() {
                        return Err(syntax_error(
                            tline,
                            tcol,
                            "digits expected after decimal point",
                        ));
                    }
                    let scale = BigInt::from(10u32).pow(frac.len() as u32);
                    value += Rat::new(frac.parse::<BigInt>().unwrap(), scale);
                }
                Tok::Num(value)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::new();
                while matches!(chars.peek(), Some(d) if d.is_ascii_alphanumeric() || *d == '_') {
                    name.push(bump(&mut chars));
                }
                Tok::Ident(name)
            }
            '\'' => {
                bump(&mut chars);
                Tok::Prime
            }
            '+' => {
                bump(&mut chars);
                Tok::Plus
            }
            '-' => {
                bump(&mut chars);
                Tok::Minus
            }
            '*' => {
                bump(&mut chars);
                Tok::Star
            }
            '/' => {
                bump(&mut chars);
                Tok::Slash
            }
            '^' => {
                bump(&mut chars);
                Tok::Caret
            }
            '(' => {
                bump(&mut chars);
                Tok::LParen
            }
            ')' => {
                bump(&mut chars);
                Tok::RParen
            }
            other => {
                return Err(syntax_error(
                    tline,
                    tcol,
                    format!("unexpected character '{}'", other),
                ));
            }
        };
        out.push(Token {
            tok,
            line: tline,
            col: tcol,
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    alphabet: &'a Alphabet,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<ExprAst> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.advance();
                    let rhs = self.term()?;
                    lhs = ExprAst::Add(Box::new(lhs), Box::new(rhs));
                }
                Tok::Minus => {
                    self.advance();
                    let rhs = self.term()?;
                    lhs = ExprAst::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<ExprAst> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.advance();
                    let rhs = self.factor()?;
                    lhs = ExprAst::Mul(Box::new(lhs), Box::new(rhs));
                }
                Tok::Slash => {
                    self.advance();
                    let rhs = self.factor()?;
                    lhs = ExprAst::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<ExprAst> {
        if self.peek().tok == Tok::Minus {
            self.advance();
            let inner = self.factor()?;
            return Ok(ExprAst::Neg(Box::new(inner)));
        }
        let base = self.atom()?;
        if self.peek().tok == Tok::Caret {
            self.advance();
            let exponent = self.integer_exponent()?;
            return Ok(ExprAst::Pow(Box::new(base), exponent));
        }
        Ok(base)
    }

    fn integer_exponent(&mut self) -> Result<i64> {
        let negative = if self.peek().tok == Tok::Minus {
            self.advance();
            true
        } else {
            false
        };
        let t = self.advance();
        match t.tok {
            Tok::Num(r) if r.is_integer() => {
                let value: i64 = r
                    .to_integer()
                    .try_into()
                    .map_err(|_| syntax_error(t.line, t.col, "exponent out of range"))?;
                Ok(if negative { -value } else { value })
            }
            _ => Err(Error::NonIntegerExponent {
                line: t.line,
                col: t.col,
            }),
        }
    }

    fn atom(&mut self) -> Result<ExprAst> {
        let t = self.advance();
        match t.tok {
            Tok::Num(r) => Ok(ExprAst::Number(r)),
            Tok::LParen => {
                let inner = self.expr()?;
                let close = self.advance();
                if close.tok != Tok::RParen {
                    return Err(syntax_error(close.line, close.col, "expected ')'"));
                }
                Ok(inner)
            }
            Tok::Ident(name) => {
                if self.peek().tok == Tok::LParen && self.alphabet.is_derivation(&name) {
                    self.advance();
                    let arg = self.expr()?;
                    let close = self.advance();
                    if close.tok != Tok::RParen {
                        return Err(syntax_error(close.line, close.col, "expected ')'"));
                    }
                    return Ok(ExprAst::DApp(name, Box::new(arg)));
                }
                if !self.alphabet.identifiers.contains(&name) {
                    if self.alphabet.is_derivation(&name) {
                        return Err(syntax_error(
                            t.line,
                            t.col,
                            format!("derivation '{}' must be applied to an argument", name),
                        ));
                    }
                    return Err(Error::UnknownIdentifier {
                        name,
                        line: t.line,
                        col: t.col,
                    });
                }
                let mut out = ExprAst::Var(name);
                while self.peek().tok == Tok::Prime {
                    let prime = self.advance();
                    let d = self.alphabet.derivations.first().ok_or_else(|| {
                        syntax_error(
                            prime.line,
                            prime.col,
                            "prime used with no derivation declared",
                        )
                    })?;
                    out = ExprAst::DApp(d.clone(), Box::new(out));
                }
                Ok(out)
            }
            _ => Err(syntax_error(t.line, t.col, "expected a value")),
        }
    }
}

/// Parse one expression over the given alphabet.
pub fn parse_expr(src: &str, alphabet: &Alphabet) -> Result<ExprAst> {
    let tokens = tokenize(src)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        alphabet,
    };
    let ast = parser.expr()?;
    let t = parser.peek();
    if t.tok != Tok::Eof {
        return Err(syntax_error(t.line, t.col, "unexpected trailing input"));
    }
    Ok(ast)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha() -> Alphabet {
        Alphabet::new(["t", "b", "x", "x_2"], ["d"])
    }

    fn var(n: &str) -> Box<ExprAst> {
        Box::new(ExprAst::Var(n.to_string()))
    }

    fn num(n: i64) -> Box<ExprAst> {
        Box::new(ExprAst::Number(Rat::from_integer(n.into())))
    }

    #[test]
    fn prime_is_sugar_for_the_first_derivation() {
        let ast = parse_expr("x'", &alpha()).unwrap();
        assert_eq!(ast, ExprAst::DApp("d".to_string(), var("x")));
        let ast = parse_expr("x''", &alpha()).unwrap();
        assert_eq!(
            ast,
            ExprAst::DApp(
                "d".to_string(),
                Box::new(ExprAst::DApp("d".to_string(), var("x")))
            )
        );
    }

    #[test]
    fn minimal_polynomial_expression() {
        let ast = parse_expr("b^2 - t", &alpha()).unwrap();
        assert_eq!(
            ast,
            ExprAst::Sub(Box::new(ExprAst::Pow(var("b"), 2)), var("t"))
        );
    }

    #[test]
    fn example_geometric_equation() {
        let ast = parse_expr("d(x_2) + x_2/(2*t)", &alpha()).unwrap();
        let dapp = ExprAst::DApp("d".to_string(), var("x_2"));
        let div = ExprAst::Div(var("x_2"), Box::new(ExprAst::Mul(num(2), var("t"))));
        assert_eq!(ast, ExprAst::Add(Box::new(dapp), Box::new(div)));
    }

    #[test]
    fn precedence_and_associativity() {
        // 1 - 2 - 3 associates left
        let ast = parse_expr("1 - 2 - 3", &alpha()).unwrap();
        assert_eq!(
            ast,
            ExprAst::Sub(Box::new(ExprAst::Sub(num(1), num(2))), num(3))
        );
        // -x^2 negates the power
        let ast = parse_expr("-x^2", &alpha()).unwrap();
        assert_eq!(ast, ExprAst::Neg(Box::new(ExprAst::Pow(var("x"), 2))));
        // a/b*c groups as (a/b)*c
        let ast = parse_expr("t/b*x", &alpha()).unwrap();
        assert_eq!(
            ast,
            ExprAst::Mul(Box::new(ExprAst::Div(var("t"), var("b"))), var("x"))
        );
        // negative exponents pass through
        let ast = parse_expr("t^-2", &alpha()).unwrap();
        assert_eq!(ast, ExprAst::Pow(var("t"), -2));
    }

    #[test]
    fn decimal_literals_are_exact() {
        let ast = parse_expr("1.25", &alpha()).unwrap();
        assert_eq!(ast, ExprAst::Number(Rat::new(5.into(), 4.into())));
    }

    #[test]
    fn error_positions_are_one_based() {
        match parse_expr("t + \n  ?", &alpha()) {
            Err(Error::SyntaxError { line, col, .. }) => {
                assert_eq!((line, col), (2, 3));
            }
            other => panic!("expected syntax error, got {:?}", other),
        }
        match parse_expr("t + q", &alpha()) {
            Err(Error::UnknownIdentifier { name, line, col }) => {
                assert_eq!((name.as_str(), line, col), ("q", 1, 5));
            }
            other => panic!("expected unknown identifier, got {:?}", other),
        }
        match parse_expr("t^x", &alpha()) {
            Err(Error::NonIntegerExponent { line, col }) => {
                assert_eq!((line, col), (1, 3));
            }
            other => panic!("expected non-integer exponent, got {:?}", other),
        }
        match parse_expr("t^1.5", &alpha()) {
            Err(Error::NonIntegerExponent { .. }) => {}
            other => panic!("expected non-integer exponent, got {:?}", other),
        }
    }

    #[test]
    fn derivation_name_needs_an_argument_list() {
        assert!(matches!(
            parse_expr("d + 1", &alpha()),
            Err(Error::SyntaxError { .. })
        ));
        // unknown function-style identifier
        assert!(matches!(
            parse_expr("e(x)", &alpha()),
            Err(Error::UnknownIdentifier { .. })
        ));
    }

    #[test]
    fn trailing_input_is_rejected() {
        assert!(matches!(
            parse_expr("t 2", &alpha()),
            Err(Error::SyntaxError { .. })
        ));
        assert!(matches!(
            parse_expr("(t", &alpha()),
            Err(Error::SyntaxError { .. })
        ));
    }
}
