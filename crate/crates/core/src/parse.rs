//! Recursive-descent parser for `y' = P(y) / ((s0 + s1 x + s2 x²) y + r0 + r1 x + r2 x²)`.
//!
//! Grammar (implicit multiplication allowed between adjacent factors):
//!
//! ```text
//! input   := [ "y'" "=" ] expr
//! expr    := term { ("+" | "-") term }
//! term    := unary { ("*" | "/") unary | unary }
//! unary   := ("+" | "-") unary | power
//! power   := primary [ "^" ["-"] integer ]
//! primary := number | "x" | "y" | "i" | "(" expr ")"
//! ```
//!
//! The expression is expanded into a quotient of bivariate polynomials
//! without cancellation (apart from common monomial factors), then matched
//! against the accepted shape.

use std::collections::BTreeMap;

use crate::equation::RationalAir;
use crate::error::{AbelError, Result};
use crate::{c64, re, C64};

const MAX_EXPONENT: i64 = 16;

/// Sparse polynomial in `x, y`; keys are `(deg_x, deg_y)`.
#[derive(Clone, Debug, Default, PartialEq)]
struct Poly(BTreeMap<(u32, u32), C64>);

impl Poly {
    fn constant(c: C64) -> Self {
        Self::monomial(c, 0, 0)
    }

    fn monomial(c: C64, dx: u32, dy: u32) -> Self {
        let mut m = BTreeMap::new();
        if c.norm() != 0.0 {
            m.insert((dx, dy), c);
        }
        Poly(m)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn as_constant(&self) -> Option<C64> {
        match self.0.len() {
            0 => Some(re(0.0)),
            1 => self.0.get(&(0, 0)).copied(),
            _ => None,
        }
    }

    fn add(&self, other: &Poly) -> Poly {
        let mut m = self.0.clone();
        for (k, v) in &other.0 {
            let e = m.entry(*k).or_insert(re(0.0));
            *e += v;
            if e.norm() == 0.0 {
                m.remove(k);
            }
        }
        Poly(m)
    }

    fn scale(&self, c: C64) -> Poly {
        let mut m = BTreeMap::new();
        for (k, v) in &self.0 {
            let p = v * c;
            if p.norm() != 0.0 {
                m.insert(*k, p);
            }
        }
        Poly(m)
    }

    fn mul(&self, other: &Poly) -> Poly {
        if let Some(c) = other.as_constant() {
            return self.scale(c);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(c);
        }
        let mut out = Poly::default();
        for ((ax, ay), av) in &self.0 {
            for ((bx, by), bv) in &other.0 {
                out = out.add(&Poly::monomial(av * bv, ax + bx, ay + by));
            }
        }
        out
    }

    fn degree_x(&self) -> u32 {
        self.0.keys().map(|k| k.0).max().unwrap_or(0)
    }

    fn degree_y(&self) -> u32 {
        self.0.keys().map(|k| k.1).max().unwrap_or(0)
    }

    fn min_degrees(&self) -> (u32, u32) {
        let mx = self.0.keys().map(|k| k.0).min().unwrap_or(0);
        let my = self.0.keys().map(|k| k.1).min().unwrap_or(0);
        (mx, my)
    }

    fn shift_down(&self, dx: u32, dy: u32) -> Poly {
        Poly(self.0.iter().map(|((x, y), v)| ((x - dx, y - dy), *v)).collect())
    }

    fn coeff(&self, dx: u32, dy: u32) -> C64 {
        self.0.get(&(dx, dy)).copied().unwrap_or(re(0.0))
    }
}

/// `num / den`
#[derive(Clone, Debug)]
struct Rational {
    num: Poly,
    den: Poly,
}

impl Rational {
    fn poly(p: Poly) -> Self {
        Rational { num: p, den: Poly::constant(re(1.0)) }
    }

    fn add(&self, o: &Rational) -> Rational {
        if self.den == o.den {
            return Rational { num: self.num.add(&o.num), den: self.den.clone() };
        }
        Rational { num: self.num.mul(&o.den).add(&o.num.mul(&self.den)), den: self.den.mul(&o.den) }
    }

    fn neg(&self) -> Rational {
        Rational { num: self.num.scale(re(-1.0)), den: self.den.clone() }
    }

    fn mul(&self, o: &Rational) -> Rational {
        Rational { num: self.num.mul(&o.num), den: self.den.mul(&o.den) }.absorb_constant()
    }

    fn recip(&self) -> Option<Rational> {
        if self.num.is_zero() {
            return None;
        }
        Some(Rational { num: self.den.clone(), den: self.num.clone() }.absorb_constant())
    }

    /// Fold a constant denominator into the numerator.
    fn absorb_constant(self) -> Rational {
        match self.den.as_constant() {
            Some(c) if c != re(1.0) && c.norm() != 0.0 => Rational::poly(self.num.scale(c.inv())),
            _ => self,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Tok {
    Num(f64),
    X,
    Y,
    I,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn syntax(column: usize, message: impl Into<String>) -> AbelError {
    AbelError::Syntax { column, message: message.into() }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        while j < chars.len() && chars[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let s: String = chars[start..i].iter().collect();
                let v: f64 = s.parse().map_err(|_| syntax(col, format!("bad number '{s}'")))?;
                out.push((Tok::Num(v), col));
                continue;
            }
            'x' => out.push((Tok::X, col)),
            'y' => out.push((Tok::Y, col)),
            'i' => out.push((Tok::I, col)),
            '+' => out.push((Tok::Plus, col)),
            '-' | '−' => out.push((Tok::Minus, col)),
            '*' => out.push((Tok::Star, col)),
            '/' => out.push((Tok::Slash, col)),
            '^' => out.push((Tok::Caret, col)),
            '(' => out.push((Tok::LParen, col)),
            ')' => out.push((Tok::RParen, col)),
            other => return Err(syntax(col, format!("unexpected character '{other}'"))),
        }
        i += 1;
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Tok {
        self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.peek();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Rational> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.add(&self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Rational> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = acc.mul(&self.unary()?);
                }
                Tok::Slash => {
                    self.bump();
                    let col = self.col();
                    let d = self.unary()?;
                    let r = d.recip().ok_or_else(|| syntax(col, "division by zero"))?;
                    acc = acc.mul(&r);
                }
                Tok::Num(_) | Tok::X | Tok::Y | Tok::I | Tok::LParen => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Rational> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(self.unary()?.neg())
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Rational> {
        let base = self.primary()?;
        if self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let col = self.col();
        let neg = if self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let paren = self.peek() == Tok::LParen;
        if paren {
            self.bump();
        }
        let n = match self.bump() {
            Tok::Num(v) if v.fract() == 0.0 && v >= 0.0 => v as i64,
            _ => return Err(syntax(col, "exponent must be an integer")),
        };
        if paren && self.bump() != Tok::RParen {
            return Err(syntax(self.col(), "expected ')'"));
        }
        if n > MAX_EXPONENT {
            return Err(syntax(col, format!("exponent {n} too large")));
        }
        let mut out = Rational::poly(Poly::constant(re(1.0)));
        for _ in 0..n {
            out = out.mul(&base);
        }
        if neg {
            out = out.recip().ok_or_else(|| syntax(col, "zero raised to a negative power"))?;
        }
        Ok(out)
    }

    fn primary(&mut self) -> Result<Rational> {
        let col = self.col();
        match self.bump() {
            Tok::Num(v) => Ok(Rational::poly(Poly::constant(re(v)))),
            Tok::X => Ok(Rational::poly(Poly::monomial(re(1.0), 1, 0))),
            Tok::Y => Ok(Rational::poly(Poly::monomial(re(1.0), 0, 1))),
            Tok::I => Ok(Rational::poly(Poly::constant(c64(0.0, 1.0)))),
            Tok::LParen => {
                let e = self.expr()?;
                let close = self.col();
                if self.bump() != Tok::RParen {
                    return Err(syntax(close, "expected ')'"));
                }
                Ok(e)
            }
            Tok::End => Err(syntax(col, "unexpected end of input")),
            t => Err(syntax(col, format!("unexpected token {t:?}"))),
        }
    }
}

/// Strip an optional `y' =` or `dy/dx =` prefix; returns the rest and the
/// number of characters removed.
fn strip_lhs(text: &str) -> (&str, usize) {
    let trimmed = text.trim_start();
    for prefix in ["y'", "dy/dx"] {
        if let Some(rest) = trimmed.strip_prefix(prefix) {
            if let Some(after) = rest.trim_start().strip_prefix('=') {
                let skipped = text.len() - after.len();
                return (after, text[..skipped].chars().count());
            }
        }
    }
    (text, 0)
}

/// Parse `y' = P(y)/Q(x, y)` into equation coefficients.
pub fn parse_ode(text: &str) -> Result<RationalAir> {
    let (body, offset) = strip_lhs(text);
    if body.contains('=') {
        let col = offset + body.find('=').map(|b| body[..b].chars().count()).unwrap_or(0) + 1;
        return Err(syntax(col, "unexpected '='"));
    }
    let mut toks = lex(body)?;
    for t in toks.iter_mut() {
        t.1 += offset;
    }
    let mut p = Parser { toks, pos: 0 };
    let r = p.expr()?;
    if p.peek() != Tok::End {
        return Err(syntax(p.col(), format!("unexpected token {:?}", p.peek())));
    }
    let (mx1, my1) = r.num.min_degrees();
    let (mx2, my2) = r.den.min_degrees();
    let (mx, my) = (mx1.min(mx2), my1.min(my2));
    let num = r.num.shift_down(mx, my);
    let den = r.den.shift_down(mx, my);

    if num.is_zero() {
        return Err(AbelError::Shape("numerator is identically zero".into()));
    }
    if num.degree_x() > 0 {
        return Err(AbelError::Shape("numerator depends on x".into()));
    }
    if num.degree_y() > 3 {
        return Err(AbelError::Shape("numerator degree in y exceeds 3".into()));
    }
    if den.degree_y() > 1 {
        return Err(AbelError::Shape("denominator not linear in y".into()));
    }
    if den.degree_x() > 2 {
        return Err(AbelError::Shape("denominator coefficients not quadratic in x".into()));
    }
    RationalAir::new(
        [0, 1, 2, 3].map(|k| num.coeff(0, k)),
        [0, 1, 2].map(|k| den.coeff(k, 1)),
        [0, 1, 2].map(|k| den.coeff(k, 0)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn airy_input() {
        let eq = parse_ode("y' = 1/(y + x^2)").unwrap();
        assert_eq!(eq.num, [re(1.0), re(0.0), re(0.0), re(0.0)]);
        assert_eq!(eq.den_y, [re(1.0), re(0.0), re(0.0)]);
        assert_eq!(eq.den_c, [re(0.0), re(0.0), re(1.0)]);
    }

    #[test]
    fn cubic_numerator() {
        let eq = parse_ode("y' = (y^3 - y)/(x*y + x^2 + 7)").unwrap();
        assert_eq!(eq.num, [re(0.0), re(-1.0), re(0.0), re(1.0)]);
        assert_eq!(eq.den_y, [re(0.0), re(1.0), re(0.0)]);
        assert_eq!(eq.den_c, [re(7.0), re(0.0), re(1.0)]);
    }

    #[test]
    fn shape_errors() {
        let e = parse_ode("y' = y/(y^2 + x)").unwrap_err();
        assert_eq!(e, AbelError::Shape("denominator not linear in y".into()));
        let e = parse_ode("y' = y^4/(y + x)").unwrap_err();
        assert_eq!(e, AbelError::Shape("numerator degree in y exceeds 3".into()));
        let e = parse_ode("y' = 1/(y + x^3)").unwrap_err();
        assert_eq!(e, AbelError::Shape("denominator coefficients not quadratic in x".into()));
        let e = parse_ode("y' = x/(y + x^2)").unwrap_err();
        assert_eq!(e, AbelError::Shape("numerator depends on x".into()));
    }

    #[test]
    fn syntax_errors_carry_columns() {
        match parse_ode("y' = 1/(y + x^2").unwrap_err() {
            AbelError::Syntax { column, .. } => assert_eq!(column, 16),
            e => panic!("{e}"),
        }
        match parse_ode("1/(y # x)").unwrap_err() {
            AbelError::Syntax { column, .. } => assert_eq!(column, 6),
            e => panic!("{e}"),
        }
        assert_eq!(parse_ode("y^0.5/(y+x)").unwrap_err().code(), "parse_syntax");
    }

    #[test]
    fn implicit_multiplication_and_complex() {
        let eq = parse_ode("(2+3i)y/(2x y + (x-1)(x+1))").unwrap();
        assert_eq!(eq.num[1], c64(2.0, 3.0));
        assert_eq!(eq.den_y[1], re(2.0));
        assert_eq!(eq.den_c, [re(-1.0), re(0.0), re(1.0)]);
    }

    #[test]
    fn rational_literals_and_common_monomials() {
        let eq = parse_ode("y' = (y/3)/(y + x^2)").unwrap();
        assert_eq!(eq.num[1], re(1.0 / 3.0));
        // the common factor x cancels
        let eq = parse_ode("x*y/(x*(x*y + 1))").unwrap();
        assert_eq!(eq.num[1], re(1.0));
        assert_eq!(eq.den_y[1], re(1.0));
    }

    #[test]
    fn render_round_trip() {
        let eq = RationalAir::new(
            [c64(0.3, 0.1), re(-1.0), c64(0.0, 0.5), re(2e-7)],
            [re(1.0), c64(0.2, -0.3), re(0.7)],
            [re(-0.4), re(1.1), c64(-0.5, 0.5)],
        )
        .unwrap();
        let back = parse_ode(&eq.to_expr_string()).unwrap();
        assert_eq!(back, eq);
    }
}
