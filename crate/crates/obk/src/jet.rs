//! Truncated power series in `u` with Laurent-polynomial coefficients in `z`.
//!
//! A `UJet` of truncation order `N` stores exactly `N + 1` coefficients, for
//! u-degrees `0..=N`; arithmetic discards every u-degree above `N`. Binary
//! operations require matching truncation orders: mixing orders silently
//! would mask bugs, so it is an error instead. Truncation changes are only
//! possible through the explicit [`UJet::retruncated`].
//!
//! The two chart-holomorphy predicates come from the glue map
//! `(xi, v) = (z^-1, z^k u)`: a function is regular on the `(z, u)` chart
//! when every z-exponent is >= 0, and regular on the `(xi, v)` chart when the
//! z-exponents at u-degree `i` are all <= k*i.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::One;

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UJet {
    trunc: usize,
    coeffs: Vec<LaurentPoly>,
}

impl UJet {
    pub fn zero(trunc: usize) -> Self {
        UJet {
            trunc,
            coeffs: vec![LaurentPoly::zero(); trunc + 1],
        }
    }

    pub fn one(trunc: usize) -> Self {
        Self::from_laurent(LaurentPoly::one(), trunc)
    }

    pub fn constant(c: Scalar, trunc: usize) -> Self {
        Self::from_laurent(LaurentPoly::constant(c), trunc)
    }

    /// Embed a Laurent polynomial as the u^0 part.
    pub fn from_laurent(p: LaurentPoly, trunc: usize) -> Self {
        let mut jet = Self::zero(trunc);
        jet.coeffs[0] = p;
        jet
    }

    /// `c * z^z_exp * u^u_deg`.
    pub fn monomial(u_deg: usize, z_exp: i64, c: Scalar, trunc: usize) -> Result<Self> {
        if u_deg > trunc {
            return Err(Error::DegreeOutOfRange { u_deg, trunc });
        }
        let mut jet = Self::zero(trunc);
        jet.coeffs[u_deg] = LaurentPoly::monomial(z_exp, c);
        Ok(jet)
    }

    /// Build from explicit u-coefficients; the truncation order is
    /// `coeffs.len() - 1`.
    pub fn from_coeffs(coeffs: Vec<LaurentPoly>) -> Self {
        assert!(!coeffs.is_empty(), "a jet stores at least the u^0 part");
        UJet {
            trunc: coeffs.len() - 1,
            coeffs,
        }
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn coeff(&self, u_deg: usize) -> &LaurentPoly {
        &self.coeffs[u_deg]
    }

    pub fn coeffs(&self) -> &[LaurentPoly] {
        &self.coeffs
    }

    /// Add `c * z^z_exp * u^u_deg` in place; degrees above the truncation
    /// order are rejected.
    pub fn add_term(&mut self, u_deg: usize, z_exp: i64, c: Scalar) -> Result<()> {
        if u_deg > self.trunc {
            return Err(Error::DegreeOutOfRange {
                u_deg,
                trunc: self.trunc,
            });
        }
        self.coeffs[u_deg].add_term(z_exp, c);
        Ok(())
    }

    pub fn set_coeff(&mut self, u_deg: usize, p: LaurentPoly) {
        assert!(u_deg <= self.trunc);
        self.coeffs[u_deg] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(LaurentPoly::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(LaurentPoly::is_zero)
    }

    /// Highest u-degree with a nonzero coefficient.
    pub fn max_u_degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Lowest u-degree with a nonzero coefficient (the u-valuation).
    pub fn u_valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Monomial support as `(u_deg, z_exp)` pairs, ascending.
    pub fn support(&self) -> Vec<(usize, i64)> {
        let mut out = Vec::new();
        for (i, p) in self.coeffs.iter().enumerate() {
            for (e, _) in p.iter() {
                out.push((i, e));
            }
        }
        out
    }

    /// Same jet at a different truncation order: drops coefficients when
    /// shrinking, pads zeros when growing. Deliberately explicit; the
    /// arithmetic never does this on its own.
    pub fn retruncated(&self, trunc: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(trunc + 1, LaurentPoly::zero());
        coeffs.truncate(trunc + 1);
        UJet { trunc, coeffs }
    }

    fn check_same_trunc(&self, other: &UJet) -> Result<()> {
        if self.trunc != other.trunc {
            return Err(Error::TruncMismatch {
                left: self.trunc,
                right: other.trunc,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &UJet) -> Result<UJet> {
        self.check_same_trunc(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(UJet {
            trunc: self.trunc,
            coeffs,
        })
    }

    pub fn checked_sub(&self, other: &UJet) -> Result<UJet> {
        self.check_same_trunc(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(UJet {
            trunc: self.trunc,
            coeffs,
        })
    }

    /// Product truncated at u-order N.
    pub fn checked_mul(&self, other: &UJet) -> Result<UJet> {
        self.check_same_trunc(other)?;
        let mut out = UJet::zero(self.trunc);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j > self.trunc {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                let prod = a * b;
                let acc = &out.coeffs[i + j];
                out.coeffs[i + j] = acc + &prod;
            }
        }
        Ok(out)
    }

    /// Multiplicative inverse mod `u^{N+1}`. The u^0 part must be a single
    /// nonzero monomial `c*z^m`, exactly the jets that are units on the
    /// chart overlap.
    pub fn invert(&self) -> Result<UJet> {
        let (m, c) = self.coeffs[0]
            .as_monomial()
            .ok_or_else(|| Error::NotAUnit {
                got: self.coeffs[0].to_string(),
            })?;
        let lead_inv = LaurentPoly::monomial(-m, Scalar::one() / c);
        let mut inv = UJet::zero(self.trunc);
        inv.coeffs[0] = lead_inv.clone();
        // b_n = -b_0 * sum_{i=1..n} a_i b_{n-i}
        for n in 1..=self.trunc {
            let mut acc = LaurentPoly::zero();
            for i in 1..=n {
                if self.coeffs[i].is_zero() || inv.coeffs[n - i].is_zero() {
                    continue;
                }
                acc = &acc + &(&self.coeffs[i] * &inv.coeffs[n - i]);
            }
            inv.coeffs[n] = -&(&lead_inv * &acc);
        }
        Ok(inv)
    }

    /// Logarithm of a jet with u^0 part equal to 1. The series terminates
    /// because the argument of the log has u-valuation >= 1.
    pub fn log(&self) -> Result<UJet> {
        if !self.coeffs[0].is_one() {
            return Err(Error::BadConstantTerm {
                op: "log",
                expected: "1",
                got: self.coeffs[0].to_string(),
            });
        }
        let w = self.checked_sub(&UJet::one(self.trunc))?;
        let mut acc = UJet::zero(self.trunc);
        let mut pow = UJet::one(self.trunc);
        for m in 1..=self.trunc {
            pow = pow.checked_mul(&w)?;
            if pow.is_zero() {
                break;
            }
            let sign = if m % 2 == 1 { 1 } else { -1 };
            let term = pow.scale(&(crate::scalar::rat(sign, m as i64)));
            acc = acc.checked_add(&term)?;
        }
        Ok(acc)
    }

    /// Exponential of a jet with u^0 part equal to 0; finite for the same
    /// reason as [`UJet::log`], and its exact inverse mod `u^{N+1}`.
    pub fn exp(&self) -> Result<UJet> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::BadConstantTerm {
                op: "exp",
                expected: "0",
                got: self.coeffs[0].to_string(),
            });
        }
        let mut acc = UJet::one(self.trunc);
        let mut pow = UJet::one(self.trunc);
        let mut factorial = Scalar::one();
        for m in 1..=self.trunc {
            pow = pow.checked_mul(self)?;
            if pow.is_zero() {
                break;
            }
            factorial *= crate::scalar::int(m as i64);
            let term = pow.scale(&(Scalar::one() / &factorial));
            acc = acc.checked_add(&term)?;
        }
        Ok(acc)
    }

    /// Regular on the `(z, u)` chart: every z-exponent >= 0.
    pub fn is_u_holomorphic(&self) -> bool {
        self.coeffs.iter().all(LaurentPoly::is_polynomial)
    }

    /// Regular on the `(xi, v)` chart: at u-degree `i` every z-exponent is
    /// <= k*i, which is the exponent image of the glue map.
    pub fn is_v_holomorphic(&self, k: i64) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, p)| p.max_exp_at_most(k * i as i64))
    }

    /// First monomial violating U-holomorphy, if any.
    pub fn u_holomorphy_violation(&self) -> Option<(usize, i64)> {
        for (i, p) in self.coeffs.iter().enumerate() {
            if let Some(e) = p.min_exp() {
                if e < 0 {
                    return Some((i, e));
                }
            }
        }
        None
    }

    /// First monomial violating V-holomorphy for the given `k`, if any.
    pub fn v_holomorphy_violation(&self, k: i64) -> Option<(usize, i64)> {
        for (i, p) in self.coeffs.iter().enumerate() {
            if let Some(e) = p.max_exp() {
                if e > k * i as i64 {
                    return Some((i, e));
                }
            }
        }
        None
    }

    pub fn scale(&self, c: &Scalar) -> UJet {
        UJet {
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// Multiply by `z^m`.
    pub fn shift_z(&self, m: i64) -> UJet {
        UJet {
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|p| p.shift(m)).collect(),
        }
    }

    /// Multiply by a u-independent Laurent polynomial.
    pub fn mul_laurent(&self, p: &LaurentPoly) -> UJet {
        UJet {
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|c| c * p).collect(),
        }
    }
}

impl Add for &UJet {
    type Output = UJet;
    fn add(self, rhs: &UJet) -> UJet {
        self.checked_add(rhs).expect("jet addition")
    }
}

impl Sub for &UJet {
    type Output = UJet;
    fn sub(self, rhs: &UJet) -> UJet {
        self.checked_sub(rhs).expect("jet subtraction")
    }
}

impl Mul for &UJet {
    type Output = UJet;
    fn mul(self, rhs: &UJet) -> UJet {
        self.checked_mul(rhs).expect("jet multiplication")
    }
}

impl Neg for &UJet {
    type Output = UJet;
    fn neg(self) -> UJet {
        UJet {
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|p| -p).collect(),
        }
    }
}

impl fmt::Display for UJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, p) in self.coeffs.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "{p}")?;
                continue;
            }
            if p.is_one() {
                // bare u power
            } else if p.num_terms() > 1 {
                write!(f, "({p})*")?;
            } else {
                write!(f, "{p}*")?;
            }
            if i == 1 {
                write!(f, "u")?;
            } else {
                write!(f, "u^{i}")?;
            }
        }
        Ok(())
    }
}
