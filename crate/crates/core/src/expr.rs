//! Text syntax for instances and witnesses: integers, single-letter
//! variables, `+ - * / ^` and parentheses. Juxtaposition such as `3x` or
//! `2(x+1)` means multiplication.

use std::sync::Arc;

use crate::algebra::{DensePoly, FiniteField, RatFunc};
use crate::error::{Error, Result};
use crate::function_field::{CurveField, FFElem};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(i64),
    Var(char),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u64),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(i64),
    Var(char),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c.is_ascii_digit() {
            let mut n: i64 = 0;
            while let Some(d) = chars.peek().and_then(|c| c.to_digit(10)) {
                n = n
                    .checked_mul(10)
                    .and_then(|n| n.checked_add(d as i64))
                    .ok_or_else(|| Error::Parse("integer literal too large".into()))?;
                chars.next();
            }
            out.push(Tok::Int(n));
        } else if c.is_ascii_alphabetic() {
            out.push(Tok::Var(c));
            chars.next();
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            chars.next();
        } else {
            return Err(Error::Parse(format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
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
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else if matches!(self.peek(), Some(Tok::Int(_) | Tok::Var(_) | Tok::Op('('))) {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
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
        let base = self.primary()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.pos += 1;
                    Ok(Expr::Pow(Box::new(base), n as u64))
                }
                _ => Err(Error::Parse("exponent must be a non-negative integer".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Var(v)) => {
                self.pos += 1;
                Ok(Expr::Var(v))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            Some(t) => Err(Error::Parse(format!("unexpected token {t:?}"))),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }
}

pub fn parse(s: &str) -> Result<Expr> {
    let mut p = Parser { toks: tokenize(s)?, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos + 1)));
    }
    Ok(e)
}

/// Target ring of an evaluation.
pub trait Ring {
    type V: Clone;
    fn int(&self, n: i64) -> Self::V;
    fn var(&self, v: char) -> Result<Self::V>;
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn sub(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn neg(&self, a: &Self::V) -> Self::V;
    fn div(&self, a: &Self::V, b: &Self::V) -> Result<Self::V>;
    fn pow(&self, a: &Self::V, e: u64) -> Self::V {
        let mut acc = self.int(1);
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }
}

impl Expr {
    pub fn eval<R: Ring>(&self, r: &R) -> Result<R::V> {
        Ok(match self {
            Expr::Int(n) => r.int(*n),
            Expr::Var(v) => r.var(*v)?,
            Expr::Neg(a) => r.neg(&a.eval(r)?),
            Expr::Add(a, b) => r.add(&a.eval(r)?, &b.eval(r)?),
            Expr::Sub(a, b) => r.sub(&a.eval(r)?, &b.eval(r)?),
            Expr::Mul(a, b) => r.mul(&a.eval(r)?, &b.eval(r)?),
            Expr::Div(a, b) => r.div(&a.eval(r)?, &b.eval(r)?)?,
            Expr::Pow(a, e) => r.pow(&a.eval(r)?, *e),
        })
    }
}

fn generator(field: &Arc<FiniteField>) -> Result<crate::algebra::FqElem> {
    if field.degree() == 1 {
        return Err(Error::Parse("'z' needs an extension field".into()));
    }
    Ok(field.generator())
}

/// F_q[x][Y] as coefficient vectors in Y; division only by nonzero constants.
struct Bivariate(Arc<FiniteField>);

impl Bivariate {
    fn trim(&self, mut v: Vec<DensePoly>) -> Vec<DensePoly> {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        v
    }
}

impl Ring for Bivariate {
    type V = Vec<DensePoly>;
    fn int(&self, n: i64) -> Self::V {
        self.trim(vec![DensePoly::constant(&self.0, self.0.from_int(n))])
    }
    fn var(&self, v: char) -> Result<Self::V> {
        let f = &self.0;
        match v {
            'x' => Ok(vec![DensePoly::x(f)]),
            'Y' | 'y' => Ok(vec![DensePoly::zero(f), DensePoly::one(f)]),
            'z' => Ok(vec![DensePoly::constant(f, generator(f)?)]),
            _ => Err(Error::Parse(format!("unknown variable '{v}' (expected x, Y or z)"))),
        }
    }
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V {
        let n = a.len().max(b.len());
        let z = DensePoly::zero(&self.0);
        self.trim((0..n).map(|i| a.get(i).unwrap_or(&z).add(b.get(i).unwrap_or(&z))).collect())
    }
    fn sub(&self, a: &Self::V, b: &Self::V) -> Self::V {
        self.add(a, &self.neg(b))
    }
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![DensePoly::zero(&self.0); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
        self.trim(out)
    }
    fn neg(&self, a: &Self::V) -> Self::V {
        a.iter().map(|c| c.neg()).collect()
    }
    fn div(&self, a: &Self::V, b: &Self::V) -> Result<Self::V> {
        let c = match b.as_slice() {
            [c] if c.is_constant() && !c.is_zero() => c.coeff(0),
            [] => return Err(Error::DivisionByZero),
            _ => return Err(Error::Parse("polynomial input may only divide by nonzero constants".into())),
        };
        let inv = self.0.inv(&c).ok_or(Error::DivisionByZero)?;
        Ok(a.iter().map(|p| p.scale(&inv)).collect())
    }
}

/// F_q[var]; division only by nonzero constants.
struct Univariate(Arc<FiniteField>, char);

impl Ring for Univariate {
    type V = DensePoly;
    fn int(&self, n: i64) -> DensePoly {
        DensePoly::constant(&self.0, self.0.from_int(n))
    }
    fn var(&self, v: char) -> Result<DensePoly> {
        if v == self.1 {
            Ok(DensePoly::x(&self.0))
        } else {
            Err(Error::Parse(format!("unknown variable '{v}' (expected {})", self.1)))
        }
    }
    fn add(&self, a: &DensePoly, b: &DensePoly) -> DensePoly {
        a.add(b)
    }
    fn sub(&self, a: &DensePoly, b: &DensePoly) -> DensePoly {
        a.sub(b)
    }
    fn mul(&self, a: &DensePoly, b: &DensePoly) -> DensePoly {
        a.mul(b)
    }
    fn neg(&self, a: &DensePoly) -> DensePoly {
        a.neg()
    }
    fn div(&self, a: &DensePoly, b: &DensePoly) -> Result<DensePoly> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if !b.is_constant() {
            return Err(Error::Parse("polynomial input may only divide by nonzero constants".into()));
        }
        Ok(a.scale(&self.0.inv(&b.coeff(0)).unwrap()))
    }
}

struct Rational(Arc<FiniteField>);

impl Ring for Rational {
    type V = RatFunc;
    fn int(&self, n: i64) -> RatFunc {
        RatFunc::from_int(&self.0, n)
    }
    fn var(&self, v: char) -> Result<RatFunc> {
        match v {
            'x' => Ok(RatFunc::x(&self.0)),
            'z' => Ok(RatFunc::constant(&self.0, generator(&self.0)?)),
            _ => Err(Error::Parse(format!("unknown variable '{v}' (expected x or z)"))),
        }
    }
    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.add(b)
    }
    fn sub(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.sub(b)
    }
    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.mul(b)
    }
    fn neg(&self, a: &RatFunc) -> RatFunc {
        a.neg()
    }
    fn div(&self, a: &RatFunc, b: &RatFunc) -> Result<RatFunc> {
        a.div(b).ok_or(Error::DivisionByZero)
    }
    fn pow(&self, a: &RatFunc, e: u64) -> RatFunc {
        a.pow(e)
    }
}

struct Curve(Arc<CurveField>);

impl Ring for Curve {
    type V = FFElem;
    fn int(&self, n: i64) -> FFElem {
        FFElem::one(&self.0).scale_int(n)
    }
    fn var(&self, v: char) -> Result<FFElem> {
        match v {
            'x' => Ok(FFElem::x(&self.0)),
            'a' => Ok(FFElem::a(&self.0)),
            'z' => Ok(FFElem::from_rat(&self.0, RatFunc::constant(self.0.base(), generator(self.0.base())?))),
            _ => Err(Error::Parse(format!("unknown variable '{v}' (expected x, a or z)"))),
        }
    }
    fn add(&self, a: &FFElem, b: &FFElem) -> FFElem {
        a.add(b)
    }
    fn sub(&self, a: &FFElem, b: &FFElem) -> FFElem {
        a.sub(b)
    }
    fn mul(&self, a: &FFElem, b: &FFElem) -> FFElem {
        a.mul(b)
    }
    fn neg(&self, a: &FFElem) -> FFElem {
        a.neg()
    }
    fn div(&self, a: &FFElem, b: &FFElem) -> Result<FFElem> {
        a.div(b)
    }
    fn pow(&self, a: &FFElem, e: u64) -> FFElem {
        a.pow(e)
    }
}

/// N_*(x, Y) as its coefficients in Y.
pub fn parse_bivariate(field: &Arc<FiniteField>, s: &str) -> Result<Vec<DensePoly>> {
    parse(s)?.eval(&Bivariate(field.clone()))
}

/// A polynomial in the single variable `var`.
pub fn parse_poly(field: &Arc<FiniteField>, s: &str, var: char) -> Result<DensePoly> {
    parse(s)?.eval(&Univariate(field.clone(), var))
}

pub fn parse_ratfunc(field: &Arc<FiniteField>, s: &str) -> Result<RatFunc> {
    parse(s)?.eval(&Rational(field.clone()))
}

/// An element of K_N written in x, a and z.
pub fn parse_element(curve: &Arc<CurveField>, s: &str) -> Result<FFElem> {
    parse(s)?.eval(&Curve(curve.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_juxtaposition() {
        let f = FiniteField::prime(7).unwrap();
        let n = parse_bivariate(&f, "Y^2 - 3x(x+1)*Y + 2/3").unwrap();
        assert_eq!(n.len(), 3);
        assert_eq!(n[1], DensePoly::from_ints(&f, &[0, -3, -3]));
        assert_eq!(n[0], DensePoly::from_ints(&f, &[3]));
        assert_eq!(parse_bivariate(&f, "-x^2").unwrap()[0], DensePoly::from_ints(&f, &[0, 0, -1]));
    }

    #[test]
    fn rational_round_trip() {
        let f = FiniteField::canonical(3, 2).unwrap();
        let r = parse_ratfunc(&f, "(z*x + 1)/(x^2 + z)").unwrap();
        assert_eq!(parse_ratfunc(&f, &r.format("x")).unwrap(), r);
    }

    #[test]
    fn errors() {
        let f = FiniteField::prime(5).unwrap();
        assert!(parse_bivariate(&f, "Y/x").is_err());
        assert!(parse_bivariate(&f, "x +").is_err());
        assert!(parse_bivariate(&f, "z*Y").is_err());
        assert!(parse_bivariate(&f, "(x").is_err());
        assert!(parse_bivariate(&f, "x $ 1").is_err());
    }
}
