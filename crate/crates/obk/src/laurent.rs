//! Laurent polynomials in `z` with exact rational coefficients.
//!
//! These are the functions on the chart overlap at a fixed u-degree. Terms
//! live in a `BTreeMap` keyed by z-exponent, so iteration order is always
//! ascending and equal values are structurally equal. Zero coefficients are
//! never stored.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::scalar::{format_scalar, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Scalar>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial(0, Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::monomial(0, c)
    }

    /// `c * z^exp`; the zero monomial is the zero polynomial.
    pub fn monomial(exp: i64, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Scalar)>>(iter: I) -> Self {
        let mut p = Self::zero();
        for (exp, c) in iter {
            p.add_term(exp, c);
        }
        p
    }

    /// Add `c * z^exp` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, exp: i64, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn coeff(&self, exp: i64) -> Scalar {
        self.terms.get(&exp).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Terms in ascending z-exponent order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// `Some((exp, coeff))` when the polynomial is a single nonzero monomial.
    pub fn as_monomial(&self) -> Option<(i64, &Scalar)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (*e, c))
        } else {
            None
        }
    }

    /// Multiply by `z^m`.
    pub fn shift(&self, m: i64) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e + m, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Exact division by a nonzero scalar.
    pub fn div_scalar(&self, c: &Scalar) -> Self {
        assert!(!c.is_zero(), "division by zero scalar");
        LaurentPoly {
            terms: self.terms.iter().map(|(e, v)| (*e, v / c)).collect(),
        }
    }

    /// Split at a threshold: `low` keeps the terms with exponent <= t,
    /// `high` the terms with exponent > t, so `low + high == self`.
    pub fn split_threshold(&self, t: i64) -> (LaurentPoly, LaurentPoly) {
        let mut low = LaurentPoly::zero();
        let mut high = LaurentPoly::zero();
        for (e, c) in self.iter() {
            if e <= t {
                low.terms.insert(e, c.clone());
            } else {
                high.terms.insert(e, c.clone());
            }
        }
        (low, high)
    }

    /// All exponents >= 0 (regular at z = 0).
    pub fn is_polynomial(&self) -> bool {
        self.min_exp().is_none_or(|e| e >= 0)
    }

    /// All exponents <= bound.
    pub fn max_exp_at_most(&self, bound: i64) -> bool {
        self.max_exp().is_none_or(|e| e <= bound)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.iter() {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.iter() {
            out.add_term(e, -c.clone());
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in self.iter() {
            for (e2, c2) in rhs.iter() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.iter() {
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let coeff_one = mag.is_one();
            match (e, coeff_one) {
                (0, _) => write!(f, "{}", format_scalar(&mag))?,
                (1, true) => write!(f, "z")?,
                (1, false) => write!(f, "{}*z", format_scalar(&mag))?,
                (_, true) => write!(f, "z^{e}")?,
                (_, false) => write!(f, "{}*z^{e}", format_scalar(&mag))?,
            }
        }
        Ok(())
    }
}
