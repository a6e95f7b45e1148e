//! Text forms of fields, field elements and polynomials.
//!
//! Fields: `Q`, `F<p>`, `Q[x]/(<poly>)`, `F<p>[x]/(<poly>)`, `Q(t)`, `F<p>(t)`.
//! Elements and polynomials are arithmetic expressions in integers and the
//! field's variable with `+ - * / ^` and parentheses; a number directly
//! followed by a variable or parenthesis multiplies (`2x`).

use num_bigint::BigInt;

use super::field::{Field, FieldElement};
use super::poly::UniPoly;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(text: &str, offset: usize) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = offset + i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Num(s.parse().unwrap()), col));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Sym(c), col));
            i += 1;
        } else {
            return Err(Error::parse(1, col, format!("unexpected character `{}`", c)));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
enum Expr {
    Num(BigInt),
    Var(String, usize),
    Neg(Box<Expr>),
    Bin(char, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(1, self.col(), msg)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Bin('+', Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Bin('-', Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Bin('*', Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Bin('/', Box::new(lhs), Box::new(self.unary()?));
            } else if matches!(self.peek(), Some(Tok::Ident(_)) | Some(Tok::Sym('('))) {
                lhs = Expr::Bin('*', Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: i64 = n
                        .try_into()
                        .map_err(|_| self.err("exponent too large"))?;
                    Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }))
                }
                _ => Err(self.err("expected an integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(n))
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Expr::Var(s, col))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(t) => Err(self.err(format!("unexpected token {:?}", t))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

fn parse_expr(text: &str, offset: usize) -> Result<Expr> {
    let toks = tokenize(text, offset)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end_col: offset + text.chars().count() + 1,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

fn eval_element(e: &Expr, field: &Field) -> Result<FieldElement> {
    Ok(match e {
        Expr::Num(n) => field.from_bigint(n),
        Expr::Var(name, col) => match (field.variable(), field.generator()) {
            (Some(v), Some(g)) if v == name => g,
            _ => {
                return Err(Error::parse(
                    1,
                    *col,
                    format!("unknown symbol `{}` in {}", name, field),
                ))
            }
        },
        Expr::Neg(a) => -eval_element(a, field)?,
        Expr::Bin(op, a, b) => {
            let (x, y) = (eval_element(a, field)?, eval_element(b, field)?);
            match op {
                '+' => x + y,
                '-' => x - y,
                '*' => x * y,
                _ => x.checked_div(&y)?,
            }
        }
        Expr::Pow(a, k) => {
            let x = eval_element(a, field)?;
            if x.is_zero() && *k < 0 {
                return Err(Error::DivisionByZero);
            }
            x.pow(*k)
        }
    })
}

fn eval_poly(e: &Expr, field: &Field, var: &str) -> Result<UniPoly> {
    Ok(match e {
        Expr::Num(n) => UniPoly::constant(field.from_bigint(n)),
        Expr::Var(name, col) => {
            if name != var {
                return Err(Error::parse(
                    1,
                    *col,
                    format!("unknown variable `{}`, expected `{}`", name, var),
                ));
            }
            UniPoly::x(field)
        }
        Expr::Neg(a) => eval_poly(a, field, var)?.neg(),
        Expr::Bin(op, a, b) => {
            let (x, y) = (eval_poly(a, field, var)?, eval_poly(b, field, var)?);
            match op {
                '+' => x.add(&y),
                '-' => x.sub(&y),
                '*' => x.mul(&y),
                _ => match y.degree() {
                    Some(0) => x.scale(&y.coeff(0).inv()),
                    None => return Err(Error::DivisionByZero),
                    _ => {
                        return Err(Error::InvalidInput(
                            "polynomial division by a nonconstant".into(),
                        ))
                    }
                },
            }
        }
        Expr::Pow(a, k) => {
            if *k < 0 {
                return Err(Error::InvalidInput("negative power in a polynomial".into()));
            }
            eval_poly(a, field, var)?.pow(*k as usize)
        }
    })
}

/// Parses a field element written in the field's variable.
pub fn parse_element(field: &Field, text: &str) -> Result<FieldElement> {
    eval_element(&parse_expr(text, 0)?, field)
}

/// Parses a polynomial over `field` in the variable `var`.
pub fn parse_poly(field: &Field, var: &str, text: &str) -> Result<UniPoly> {
    eval_poly(&parse_expr(text, 0)?, field, var)
}

/// Parses a field descriptor.
pub fn parse_field(text: &str) -> Result<Field> {
    let s = text.trim();
    let lead = text.len() - text.trim_start().len();
    let (base, rest) = if let Some(r) = s.strip_prefix('Q') {
        (Field::rationals(), r)
    } else if let Some(r) = s.strip_prefix('F') {
        let digits = r.chars().take_while(|c| c.is_ascii_digit()).count();
        if digits == 0 {
            return Err(Error::parse(1, lead + 2, "expected a prime after `F`"));
        }
        let p: u64 = r[..digits]
            .parse()
            .map_err(|_| Error::parse(1, lead + 2, "prime too large"))?;
        (Field::prime(p)?, &r[digits..])
    } else {
        return Err(Error::parse(1, lead + 1, "expected `Q` or `F<p>`"));
    };
    let at = lead + (s.len() - rest.len()) + 1;
    if rest.is_empty() {
        return Ok(base);
    }
    if let Some(inner) = rest.strip_prefix('(') {
        let var = inner
            .strip_suffix(')')
            .ok_or_else(|| Error::parse(1, at, "expected `(var)`"))?
            .trim();
        check_ident(var, at + 1)?;
        return Field::rational_functions(&base, var);
    }
    if let Some(inner) = rest.strip_prefix('[') {
        let close = inner
            .find(']')
            .ok_or_else(|| Error::parse(1, at, "expected `]`"))?;
        let var = inner[..close].trim();
        check_ident(var, at + 1)?;
        let tail = inner[close + 1..].trim_start();
        let poly_start = at + 1 + close + 1 + (inner[close + 1..].len() - tail.len());
        let body = tail
            .strip_prefix('/')
            .map(str::trim_start)
            .and_then(|t| t.strip_prefix('('))
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::parse(1, poly_start, "expected `/(<poly>)`"))?;
        let modulus = eval_poly(&parse_expr(body, poly_start + 2)?, &base, var)?;
        return Field::extension(&base, &modulus, var);
    }
    Err(Error::parse(1, at, "expected `[`, `(` or end of input"))
}

fn check_ident(var: &str, col: usize) -> Result<()> {
    let ok = var
        .chars()
        .next()
        .is_some_and(|c| c.is_alphabetic() || c == '_')
        && var.chars().all(|c| c.is_alphanumeric() || c == '_');
    if ok {
        Ok(())
    } else {
        Err(Error::parse(1, col, format!("invalid variable name `{}`", var)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_round_trips() {
        for s in ["Q", "F7", "Q(t)", "F3(t)", "Q[x]/(x^2 - x - 1)", "F2[w]/(w^2 + w + 1)"] {
            let f = parse_field(s).unwrap();
            assert_eq!(f.to_string(), s);
            assert_eq!(parse_field(&f.to_string()).unwrap(), f);
        }
    }

    #[test]
    fn field_errors() {
        assert!(matches!(parse_field("F6"), Err(Error::InvalidField(_))));
        assert!(matches!(parse_field("R"), Err(Error::Parse { .. })));
        assert!(matches!(parse_field("Q[x]/(x^2-1)"), Err(Error::InvalidField(_))));
    }

    #[test]
    fn elements() {
        let q = Field::rationals();
        assert_eq!(parse_element(&q, "1/2 + 1/3").unwrap().to_string(), "5/6");
        assert_eq!(parse_element(&q, "-2^3").unwrap(), q.from_int(-8));
        let f7 = Field::prime(7).unwrap();
        assert_eq!(parse_element(&f7, "3*5").unwrap(), f7.one());
        let qt = parse_field("Q(t)").unwrap();
        let x = parse_element(&qt, "1/t").unwrap();
        assert_eq!(x * qt.generator().unwrap(), qt.one());
        assert!(matches!(parse_element(&q, "1/0"), Err(Error::DivisionByZero)));
    }

    #[test]
    fn implicit_product() {
        let q = Field::rationals();
        let p = parse_poly(&q, "t", "2t^2 - 3(t + 1)").unwrap();
        assert_eq!(p, UniPoly::from_ints(&q, &[-3, -3, 2]));
    }

    #[test]
    fn parse_error_column() {
        let q = Field::rationals();
        match parse_element(&q, "1 + $") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 5),
            other => panic!("{:?}", other),
        }
    }
}
