//! Truncated Laurent series over the rationals with tracked precision.
//!
//! A series `z^low (c_0 + c_1 z + …) + O(z^prec)` knows its coefficients exactly for
//! every order below `prec`; arithmetic computes the window of the result instead of
//! padding it.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::growth::fmt_rational;

/// Numerators over the lcm of the denominators.
fn integer_form(c: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let d = c.iter().fold(BigInt::one(), |acc, x| if x.denom().is_one() { acc } else { acc.lcm(x.denom()) });
    let nums = c.iter().map(|x| if x.denom() == &d { x.numer().clone() } else { x.numer() * (&d / x.denom()) }).collect();
    (nums, d)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Laurent {
    /// Order of `coeffs[0]`; meaningless when `coeffs` is empty.
    low: i64,
    /// Leading entry nonzero; all orders lie below `prec`.
    coeffs: Vec<BigRational>,
    prec: i64,
}

impl Laurent {
    pub fn new(low: i64, coeffs: Vec<BigRational>, prec: i64) -> Laurent {
        let mut low = low;
        let mut c: Vec<BigRational> = coeffs;
        let keep = (prec - low).clamp(0, c.len() as i64) as usize;
        c.truncate(keep);
        let lead = c.iter().position(|x| !x.is_zero()).unwrap_or(c.len());
        c.drain(..lead);
        low += lead as i64;
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        if c.is_empty() {
            low = 0;
        }
        Laurent { low, coeffs: c, prec }
    }

    pub fn from_ints(low: i64, coeffs: &[i64], prec: i64) -> Laurent {
        Laurent::new(low, coeffs.iter().map(|&x| BigRational::from_integer(x.into())).collect(), prec)
    }

    pub fn zero(prec: i64) -> Laurent {
        Laurent { low: 0, coeffs: vec![], prec }
    }

    pub fn constant(c: BigRational, prec: i64) -> Laurent {
        Laurent::new(0, vec![c], prec)
    }

    pub fn one(prec: i64) -> Laurent {
        Laurent::constant(BigRational::one(), prec)
    }

    pub fn monomial(c: BigRational, k: i64, prec: i64) -> Laurent {
        Laurent::new(k, vec![c], prec)
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// `None` when no coefficient below the window is known to be nonzero.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.low)
    }

    /// Known lower bound for the true valuation.
    pub fn val_bound(&self) -> i64 {
        self.valuation().unwrap_or(self.prec)
    }

    pub fn is_known_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.first().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeff(&self, order: i64) -> BigRational {
        if self.coeffs.is_empty() || order < self.low {
            return BigRational::zero();
        }
        self.coeffs.get((order - self.low) as usize).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Coefficients from `low` up to the last nonzero one.
    pub fn terms(&self) -> (i64, &[BigRational]) {
        (self.low, &self.coeffs)
    }

    pub fn with_prec(&self, prec: i64) -> Laurent {
        Laurent::new(self.low, self.coeffs.clone(), prec.min(self.prec))
    }

    fn from_fn(lo: i64, prec: i64, f: impl Fn(i64) -> BigRational) -> Laurent {
        if prec <= lo {
            return Laurent::zero(prec);
        }
        Laurent::new(lo, (lo..prec).map(f).collect(), prec)
    }

    pub fn add(&self, o: &Laurent) -> Laurent {
        let prec = self.prec.min(o.prec);
        let lo = self.val_bound().min(o.val_bound());
        Laurent::from_fn(lo, prec, |k| self.coeff(k) + o.coeff(k))
    }

    pub fn neg(&self) -> Laurent {
        Laurent { low: self.low, coeffs: self.coeffs.iter().map(|x| -x).collect(), prec: self.prec }
    }

    pub fn sub(&self, o: &Laurent) -> Laurent {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &BigRational) -> Laurent {
        Laurent::new(self.low, self.coeffs.iter().map(|x| x * c).collect(), self.prec)
    }

    pub fn mul(&self, o: &Laurent) -> Laurent {
        let (va, vb) = (self.val_bound(), o.val_bound());
        let prec = (self.prec + vb).min(o.prec + va);
        if self.is_known_zero() || o.is_known_zero() {
            return Laurent::zero(prec);
        }
        let lo = va + vb;
        let len = (prec - lo).max(0) as usize;
        // convolve integer numerators over common denominators; rational sums would
        // renormalize after every term
        let (a, da) = integer_form(&self.coeffs[..self.coeffs.len().min(len)]);
        let (b, db) = integer_form(&o.coeffs[..o.coeffs.len().min(len)]);
        let mut c = vec![BigInt::zero(); len];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(len - i) {
                c[i + j] += x * y;
            }
        }
        let d = da * db;
        Laurent::new(lo, c.into_iter().map(|x| BigRational::new(x, d.clone())).collect(), prec)
    }

    /// Multiplicative inverse; needs a known nonzero leading coefficient.
    pub fn inv(&self) -> Result<Laurent> {
        let v = self.valuation().ok_or(Error::DivisionByZeroSeries)?;
        let rel = self.prec - v;
        let a0 = &self.coeffs[0];
        let mut b: Vec<BigRational> = Vec::with_capacity(rel as usize);
        for k in 0..rel as usize {
            let mut s = if k == 0 { BigRational::one() } else { BigRational::zero() };
            for i in 1..=k {
                if let Some(ai) = self.coeffs.get(i) {
                    s -= ai * &b[k - i];
                }
            }
            b.push(s / a0);
        }
        Ok(Laurent::new(-v, b, -v + rel))
    }

    pub fn div(&self, o: &Laurent) -> Result<Laurent> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, k: i64) -> Result<Laurent> {
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        // each factor keeps the relative window prec - low
        let rel = if self.is_known_zero() { 0 } else { self.prec - self.low };
        let mut acc = Laurent::one(rel.max(0));
        for _ in 0..k {
            acc = acc.mul(self);
        }
        Ok(acc)
    }

    /// `f(s(w))` for a substitution `s` of valuation exactly 1.
    pub fn compose(&self, s: &Laurent) -> Result<Laurent> {
        if s.valuation() != Some(1) {
            return Err(Error::Incompatible("substitution must have valuation 1".into()));
        }
        let rel_s = s.prec - 1;
        if self.is_known_zero() {
            return Ok(Laurent::zero(self.prec));
        }
        let prec = self.prec.min(self.low + rel_s);
        // only prec - low orders of s beyond its leading term can matter
        let s = &s.with_prec(1 + prec - self.low);
        let mut acc = Laurent::zero(prec);
        let mut p = s.pow(self.low)?;
        for k in self.low..prec {
            let c = self.coeff(k);
            if !c.is_zero() {
                acc = acc.add(&p.scale(&c)).with_prec(prec);
            }
            p = p.mul(s).with_prec(prec);
        }
        Ok(acc.with_prec(prec))
    }

    /// Square root of a series `1 + O(z)`.
    pub fn sqrt_unit(&self) -> Result<Laurent> {
        if self.valuation() != Some(0) || !self.coeffs[0].is_one() {
            return Err(Error::Incompatible("square root needs constant term 1".into()));
        }
        let rel = self.prec;
        let two = BigRational::from_integer(2.into());
        let mut r: Vec<BigRational> = vec![BigRational::one()];
        for k in 1..rel.max(0) as usize {
            let mut s = self.coeff(k as i64);
            for i in 1..k {
                s -= &r[i] * &r[k - i];
            }
            r.push(s / &two);
        }
        Ok(Laurent::new(0, r, rel))
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let k = self.low + i as i64;
            match k {
                0 => write!(f, "{}", fmt_rational(c))?,
                _ => write!(f, "{} z^{}", fmt_rational(c), k)?,
            }
        }
        if !first {
            write!(f, " + ")?;
        }
        write!(f, "O(z^{})", self.prec)
    }
}
