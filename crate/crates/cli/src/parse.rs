//! Operator expressions over x and Dx.

use hypsolve::arith::{rint, Field, Rat, RatFun, UPoly};
use hypsolve::diffop::QOp;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at column {col}: {msg}")]
    Syntax { col: usize, msg: String },
    #[error("Dx in a denominator at column {0}")]
    DxInDenominator(usize),
    #[error("division by zero at column {0}")]
    DivisionByZero(usize),
    #[error("operator has order {0}; only order 2 is supported")]
    Order(usize),
    #[error("operator is zero")]
    Zero,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    X,
    Dx,
    Num(Rat),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Open,
    Close,
}

const MAX_POWER: u64 = 256;

fn syntax(col: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { col, msg: msg.into() }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let col = i + 1;
        let c = chars[i];
        let tok = match c {
            _ if c.is_whitespace() => {
                i += 1;
                continue;
            }
            'x' => Tok::X,
            'D' if chars.get(i + 1) == Some(&'x') => {
                i += 1;
                Tok::Dx
            }
            '0'..='9' => {
                let start = i;
                while chars.get(i + 1).is_some_and(char::is_ascii_digit) {
                    i += 1;
                }
                let s: String = chars[start..=i].iter().collect();
                Tok::Num(s.parse().map_err(|_| syntax(col, "bad number"))?)
            }
            '+' => Tok::Plus,
            '-' | '−' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::Open,
            ')' => Tok::Close,
            _ => return Err(syntax(col, format!("unexpected '{c}'"))),
        };
        out.push((tok, col));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.1)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<QOp, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                acc = acc.add(&self.term()?);
            } else if self.eat(&Tok::Minus) {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<QOp, ParseError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(&Tok::Star) {
                acc = acc.mul(&self.factor()?);
            } else if self.peek() == Some(&Tok::Slash) {
                let col = self.col();
                self.pos += 1;
                let d = self.factor()?;
                if d.order() > 0 {
                    return Err(ParseError::DxInDenominator(col));
                }
                let g = d.coeff(0);
                if g.is_zero() {
                    return Err(ParseError::DivisionByZero(col));
                }
                let inv = constant(&rint(1)).fdiv(&g).unwrap();
                acc = if acc.order() == 0 || g.is_constant() {
                    acc.scale(&inv)
                } else {
                    return Err(syntax(col, "only coefficients may be divided"));
                };
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<QOp, ParseError> {
        if self.eat(&Tok::Minus) {
            return Ok(self.factor()?.scale(&constant(&rint(-1))));
        }
        let base = self.base()?;
        if !self.eat(&Tok::Caret) {
            return Ok(base);
        }
        let col = self.col();
        let e = match self.peek() {
            Some(Tok::Num(n)) if n.is_integer() => n.to_integer(),
            _ => return Err(syntax(col, "expected a nonnegative integer exponent")),
        };
        self.pos += 1;
        let e: u64 = e.try_into().ok().filter(|&e| e <= MAX_POWER).ok_or_else(|| syntax(col, "exponent too large"))?;
        if base.order() > 0 && e > 2 {
            return Err(ParseError::Order(base.order() * e as usize));
        }
        let mut out = QOp::scalar(constant(&rint(1)));
        for _ in 0..e {
            out = out.mul(&base);
        }
        Ok(out)
    }

    fn base(&mut self) -> Result<QOp, ParseError> {
        let col = self.col();
        let Some(t) = self.peek().cloned() else {
            return Err(syntax(col, "unexpected end of input"));
        };
        self.pos += 1;
        match t {
            Tok::X => Ok(QOp::scalar(RatFun::x())),
            Tok::Dx => Ok(QOp::d(&constant(&rint(1)))),
            Tok::Num(n) => Ok(QOp::scalar(constant(&n))),
            Tok::Open => {
                let e = self.expr()?;
                if !self.eat(&Tok::Close) {
                    return Err(syntax(self.col(), "expected ')'"));
                }
                Ok(e)
            }
            _ => Err(syntax(col, "expected x, Dx, a number or '('")),
        }
    }
}

fn constant(c: &Rat) -> RatFun<Rat> {
    RatFun::from_poly(UPoly::constant(c.clone()), &rint(1))
}

/// Parse without the order restriction, keeping rational coefficients.
pub fn parse_expression(text: &str) -> Result<QOp, ParseError> {
    let toks = tokenize(text)?;
    let end = text.chars().count() + 1;
    let mut p = Parser { toks, pos: 0, end };
    let op = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(syntax(p.col(), "unexpected token"));
    }
    Ok(op)
}

/// A rational function of x.
pub fn parse_ratfun(text: &str) -> Result<RatFun<Rat>, ParseError> {
    let op = parse_expression(text)?;
    if op.order() > 0 {
        return Err(syntax(1, "expected an expression in x only"));
    }
    Ok(op.coeff(0))
}

/// An operator of order at most 2 in primitive form.
pub fn parse_operator(text: &str) -> Result<QOp, ParseError> {
    let op = parse_expression(text)?;
    if op.is_zero() {
        return Err(ParseError::Zero);
    }
    if op.order() > 2 {
        return Err(ParseError::Order(op.order()));
    }
    Ok(op.primitive())
}

#[cfg(test)]
mod tests {
    use super::*;
    use hypsolve::arith::rat;

    fn rf(n: &[i64], d: &[i64]) -> RatFun<Rat> {
        RatFun::from_ints(n, d)
    }

    #[test]
    fn bare_derivation() {
        let l = parse_operator("Dx^2").unwrap();
        assert_eq!(l, QOp::new(vec![rf(&[0], &[1]), rf(&[0], &[1]), rf(&[1], &[1])]));
    }

    #[test]
    fn composition_is_noncommutative() {
        let a = parse_expression("Dx*x").unwrap();
        assert_eq!(a, QOp::new(vec![rf(&[1], &[1]), rf(&[0, 1], &[1])]));
    }

    #[test]
    fn rationals_and_unary_minus() {
        let a = parse_expression("-3/4*x^2 + -(1/2)").unwrap();
        assert_eq!(a.coeff(0), RatFun::new(UPoly::from_coeffs(vec![rat(-1, 2), rint(0), rat(-3, 4)]), UPoly::from_ints(&[1])));
        assert_eq!(parse_ratfun("x/(x+1)^2").unwrap(), rf(&[0, 1], &[1, 2, 1]));
    }

    #[test]
    fn coefficient_denominators_are_cleared() {
        let l = parse_operator("Dx^2 + 1/(2*x)*Dx").unwrap();
        assert_eq!(l, QOp::new(vec![rf(&[0], &[1]), rf(&[1], &[1]), rf(&[0, 2], &[1])]));
    }

    #[test]
    fn errors() {
        assert_eq!(parse_operator("Dx^3"), Err(ParseError::Order(3)));
        assert_eq!(parse_operator("Dx*Dx*Dx + x"), Err(ParseError::Order(3)));
        assert_eq!(parse_operator("x/Dx"), Err(ParseError::DxInDenominator(2)));
        assert_eq!(parse_operator("x/(x-x)"), Err(ParseError::DivisionByZero(2)));
        assert_eq!(parse_operator("0*Dx"), Err(ParseError::Zero));
        assert!(matches!(parse_operator("x + * 2"), Err(ParseError::Syntax { col: 5, .. })));
        assert!(matches!(parse_operator("(x + 1"), Err(ParseError::Syntax { col: 7, .. })));
        assert!(matches!(parse_operator("y"), Err(ParseError::Syntax { col: 1, .. })));
        assert!(matches!(parse_operator("x^y"), Err(ParseError::Syntax { col: 3, .. })));
    }
}
