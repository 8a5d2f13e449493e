//! Polynomial growth vectors with exact rational coefficients, and their parser.
//!
//! Grammar (whitespace ignored):
//! `expr := term (("+"|"-") term)*`, `term := coeff? "n" ("^" nat)? | coeff`,
//! `coeff := int | int "/" int`. A leading sign on the first term is also accepted.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Univariate polynomial in the sequence index; `coeffs[d]` multiplies `n^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: vec![] }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Poly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: BigRational) -> Poly {
        Poly::from_coeffs(vec![c])
    }

    pub fn monomial(c: BigRational, d: usize) -> Poly {
        let mut v = vec![BigRational::zero(); d + 1];
        v[d] = c;
        Poly::from_coeffs(v)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, d: usize) -> BigRational {
        self.coeffs.get(d).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn eval(&self, n: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * n + c)
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }
}

impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let len = self.coeffs.len().max(o.coeffs.len());
        Poly::from_coeffs((0..len).map(|d| self.coeff(d) + o.coeff(d)).collect())
    }
}

impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let len = self.coeffs.len().max(o.coeffs.len());
        Poly::from_coeffs((0..len).map(|d| self.coeff(d) - o.coeff(d)).collect())
    }
}

pub fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for d in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[d];
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let body = fmt_rational(&a);
            match d {
                0 => write!(f, "{body}")?,
                _ => {
                    let sep = if a.denom().is_one() { "" } else { " " };
                    if !a.is_one() {
                        write!(f, "{body}{sep}")?;
                    }
                    write!(f, "n")?;
                    if d > 1 {
                        write!(f, "^{d}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }
    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }
    fn nat(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        Ok(txt.parse().expect("digits parse"))
    }
    fn term(&mut self) -> Result<Poly> {
        let coeff = match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let p = self.nat()?;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let q = self.nat()?;
                    if q.is_zero() {
                        return self.err("zero denominator");
                    }
                    Some(BigRational::new(p, q))
                } else {
                    Some(BigRational::from_integer(p))
                }
            }
            _ => None,
        };
        if self.peek() == Some(b'n') {
            self.pos += 1;
            let mut d = 1usize;
            if self.peek() == Some(b'^') {
                self.pos += 1;
                let e = self.nat()?;
                d = e.try_into().map_err(|_| Error::Parse { pos: self.pos, msg: "exponent too large".into() })?;
                if d > 64 {
                    return self.err("exponent too large");
                }
            }
            return Ok(Poly::monomial(coeff.unwrap_or_else(BigRational::one), d));
        }
        match coeff {
            Some(c) => Ok(Poly::constant(c)),
            None => self.err("expected a coefficient or 'n'"),
        }
    }
    fn expr(&mut self) -> Result<Poly> {
        let mut neg = false;
        match self.peek() {
            Some(b'-') => {
                neg = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        let mut acc = self.term()?;
        if neg {
            acc = acc.scale(&-BigRational::one());
        }
        loop {
            match self.peek() {
                None => return Ok(acc),
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                Some(_) => return self.err("expected '+' or '-'"),
            }
        }
    }
}

pub fn parse_poly(text: &str) -> Result<Poly> {
    Parser { s: text.as_bytes(), pos: 0 }.expr()
}

/// One polynomial per element of the ground set {1..n}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthVector {
    pub coords: Vec<Poly>,
}

impl GrowthVector {
    pub fn new(coords: Vec<Poly>) -> GrowthVector {
        GrowthVector { coords }
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn eval(&self, j: i64) -> Vec<BigRational> {
        let x = BigRational::from_integer(j.into());
        self.coords.iter().map(|p| p.eval(&x)).collect()
    }

    /// Coordinates non-increasing for all large indices.
    pub fn is_sorted(&self) -> bool {
        self.coords.windows(2).all(|w| !(&w[0] - &w[1]).leading().is_negative())
    }
}

/// Parses one grammar string per coordinate.
pub fn parse_growth<S: AsRef<str>>(texts: &[S]) -> Result<GrowthVector> {
    let mut coords = Vec::new();
    let mut offset = 0;
    for t in texts {
        let t = t.as_ref();
        coords.push(parse_poly(t).map_err(|e| match e {
            Error::Parse { pos, msg } => Error::Parse { pos: offset + pos, msg },
            other => other,
        })?);
        offset += t.len() + 1;
    }
    Ok(GrowthVector::new(coords))
}
