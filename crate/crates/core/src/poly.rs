//! Dense univariate polynomials over the rationals, just enough for the
//! partial discriminants and their squarefree test.

use std::ops::{Mul, Sub};

use num_traits::{One, Zero};

use crate::rational::{int, Rational};

/// Coefficients are stored lowest degree first; trailing zeros are trimmed so
/// the zero polynomial is the empty vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn from_ascending(coeffs: Vec<Rational>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    /// Builds from coefficients listed highest degree first.
    pub fn from_descending(coeffs: &[Rational]) -> Self {
        Self::from_ascending(coeffs.iter().rev().cloned().collect())
    }

    /// Descending coefficient vector padded with leading zeros to `len` entries.
    pub fn to_descending(&self, len: usize) -> Vec<Rational> {
        assert!(self.coeffs.len() <= len, "polynomial does not fit in {len} coefficients");
        let mut out = vec![Rational::zero(); len - self.coeffs.len()];
        out.extend(self.coeffs.iter().rev().cloned());
        out
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::from_ascending(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * int(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, s: &Rational) -> Poly {
        Poly::from_ascending(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Remainder of Euclidean division by a nonzero `divisor`.
    pub fn rem(&self, divisor: &Poly) -> Poly {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading().unwrap().clone();
        let mut r = self.coeffs.clone();
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let f = &r[top] / &lead;
            if !f.is_zero() {
                let shift = top - dd;
                for (k, c) in divisor.coeffs.iter().enumerate() {
                    r[shift + k] -= &f * c;
                }
            }
            r.pop();
        }
        Poly::from_ascending(r)
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        match a.leading().cloned() {
            Some(lc) => a.scale(&(Rational::one() / lc)),
            None => a,
        }
    }

    /// True when the polynomial has no repeated root over the algebraic closure.
    /// The zero polynomial is not squarefree; nonzero constants are.
    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).degree() == Some(0)
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_ascending(out)
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Rational::zero();
        Poly::from_ascending(
            (0..n)
                .map(|k| self.coeffs.get(k).unwrap_or(&zero) - rhs.coeffs.get(k).unwrap_or(&zero))
                .collect(),
        )
    }
}
