//! Transition matrices for rank-n bundles on the total space of O(-k), and
//! the gauge transformations that act on them.
//!
//! The base surface is covered by two charts glued over `z != 0` by
//! `(xi, v) = (z^-1, z^k u)`. A bundle is presented by a square matrix of
//! jets, regular and invertible on the overlap; concretely the u^0 part of
//! its determinant must be a single nonzero monomial `c * z^d`, so that the
//! full determinant is a unit in the truncated ring.
//!
//! A gauge transformation is a pair of invertible matrices, one regular on
//! each chart, acting by `T -> left * T * right`. Inverses are stored, not
//! recomputed: every constructor demands all four matrices and checks the
//! products against the identity exactly, which makes a validated
//! [`GaugeTransform`] a certificate.

use std::fmt;

use crate::error::{Error, Result};
use crate::jet::UJet;
use crate::laurent::LaurentPoly;
use crate::matrix::Mat;
use crate::scalar::Scalar;

/// Embed a matrix of Laurent polynomials as the u^0 part of a jet matrix.
pub fn lift_laurent_matrix(m: &Mat<LaurentPoly>, trunc: usize) -> Mat<UJet> {
    m.map(|p| UJet::from_laurent(p.clone(), trunc))
}

fn check_uniform_trunc(mats: &[&Mat<UJet>]) -> Result<usize> {
    let trunc = mats[0].at(0, 0).trunc();
    for m in mats {
        for (_, _, e) in m.entries() {
            if e.trunc() != trunc {
                return Err(Error::TruncMismatch {
                    left: trunc,
                    right: e.trunc(),
                });
            }
        }
    }
    Ok(trunc)
}

/// The splitting type of the restriction to the zero section: twists of the
/// line summands, sorted descending. With the conventions used here a
/// diagonal transition matrix `z^j` glues the line bundle of degree `-j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplittingType(pub Vec<i64>);

impl SplittingType {
    pub fn exponents(&self) -> &[i64] {
        &self.0
    }

    /// Sum of the exponents; equals the z-degree of the determinant.
    pub fn degree_sum(&self) -> i64 {
        self.0.iter().sum()
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, j) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{j}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionMatrix {
    k: i64,
    entries: Mat<UJet>,
}

impl TransitionMatrix {
    pub fn new(k: i64, entries: Mat<UJet>) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidParameter(format!(
                "base parameter k must be >= 1, got {k}"
            )));
        }
        if !entries.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "transition matrix must be square, got {}x{}",
                entries.rows(),
                entries.cols()
            )));
        }
        check_uniform_trunc(&[&entries])?;
        let t = TransitionMatrix { k, entries };
        let det = t.u0_part().det();
        if det.as_monomial().is_none() {
            return Err(Error::NonMonomialDeterminant {
                det: det.to_string(),
            });
        }
        Ok(t)
    }

    /// The canonical split bundle: `diag(z^{j_1}, ..., z^{j_n})`.
    pub fn diagonal(k: i64, exponents: &[i64], trunc: usize) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::InvalidParameter(
                "at least one diagonal exponent is required".into(),
            ));
        }
        let n = exponents.len();
        let entries = Mat::from_fn(n, n, |r, c| {
            if r == c {
                let one = LaurentPoly::monomial(exponents[r], crate::scalar::int(1));
                UJet::from_laurent(one, trunc)
            } else {
                UJet::zero(trunc)
            }
        });
        Self::new(k, entries)
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn rank(&self) -> usize {
        self.entries.rows()
    }

    pub fn trunc(&self) -> usize {
        self.entries.at(0, 0).trunc()
    }

    pub fn entries(&self) -> &Mat<UJet> {
        &self.entries
    }

    pub fn entry(&self, r: usize, c: usize) -> &UJet {
        self.entries.at(r, c)
    }

    /// Restriction to the zero section `u = 0`: the u^0 part of every entry.
    /// This is a homomorphism for matrix products, so gauge-equivalent
    /// bundles restrict to equivalent transition matrices on the base curve.
    pub fn restrict_zero_section(&self) -> Mat<LaurentPoly> {
        self.u0_part()
    }

    pub fn u0_part(&self) -> Mat<LaurentPoly> {
        self.entries.map(|e| e.coeff(0).clone())
    }

    /// z-exponent of the (monomial) u^0 determinant.
    pub fn det_exponent(&self) -> i64 {
        let det = self.u0_part().det();
        det.as_monomial().expect("validated at construction").0
    }

    /// Leading coefficient of the (monomial) u^0 determinant.
    pub fn det_coeff(&self) -> Scalar {
        let det = self.u0_part().det();
        det.as_monomial().expect("validated at construction").1.clone()
    }

    /// The same data at truncation order `n`. The u^0 part is untouched, so
    /// all construction invariants survive.
    pub fn retruncated(&self, n: usize) -> Self {
        TransitionMatrix {
            k: self.k,
            entries: self.entries.map(|e| e.retruncated(n)),
        }
    }
}

impl fmt::Display for TransitionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k={} rank={} trunc={}", self.k, self.rank(), self.trunc())?;
        write!(f, "{}", self.entries)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaugeTransform {
    k: i64,
    left: Mat<UJet>,
    left_inv: Mat<UJet>,
    right: Mat<UJet>,
    right_inv: Mat<UJet>,
}

fn check_chart(m: &Mat<UJet>, chart: char, k: i64) -> Result<()> {
    for (r, c, e) in m.entries() {
        let bad = match chart {
            'U' => e.u_holomorphy_violation(),
            'V' => e.v_holomorphy_violation(k),
            _ => unreachable!(),
        };
        if let Some((u_deg, z_exp)) = bad {
            return Err(Error::NotHolomorphic {
                chart,
                row: r + 1,
                col: c + 1,
                u_deg,
                z_exp,
            });
        }
    }
    Ok(())
}

fn check_inverse_pair(side: &'static str, a: &Mat<UJet>, b: &Mat<UJet>) -> Result<()> {
    for prod in [a.checked_mul(b)?, b.checked_mul(a)?] {
        for (r, c, e) in prod.entries() {
            let expected = if r == c {
                UJet::one(e.trunc())
            } else {
                UJet::zero(e.trunc())
            };
            if *e != expected {
                let diff = e.checked_sub(&expected)?;
                let (u_deg, z_exp) = diff.support()[0];
                return Err(Error::InverseMismatch {
                    side,
                    row: r + 1,
                    col: c + 1,
                    u_deg,
                    z_exp,
                    got: crate::scalar::format_scalar(&e.coeff(u_deg).coeff(z_exp)),
                    expected: crate::scalar::format_scalar(
                        &expected.coeff(u_deg).coeff(z_exp),
                    ),
                });
            }
        }
    }
    Ok(())
}

impl GaugeTransform {
    /// Validates chart regularity of all four matrices and checks both
    /// two-sided inverse products against the identity, exactly.
    pub fn new(
        k: i64,
        left: Mat<UJet>,
        left_inv: Mat<UJet>,
        right: Mat<UJet>,
        right_inv: Mat<UJet>,
    ) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidParameter(format!(
                "base parameter k must be >= 1, got {k}"
            )));
        }
        let rank = left.rows();
        for (name, m) in [
            ("left", &left),
            ("left_inv", &left_inv),
            ("right", &right),
            ("right_inv", &right_inv),
        ] {
            if !m.is_square() || m.rows() != rank {
                return Err(Error::DimensionMismatch(format!(
                    "gauge factor {name} must be {rank}x{rank}, got {}x{}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        check_uniform_trunc(&[&left, &left_inv, &right, &right_inv])?;
        check_chart(&left, 'V', k)?;
        check_chart(&left_inv, 'V', k)?;
        check_chart(&right, 'U', k)?;
        check_chart(&right_inv, 'U', k)?;
        check_inverse_pair("left", &left, &left_inv)?;
        check_inverse_pair("right", &right, &right_inv)?;
        Ok(GaugeTransform {
            k,
            left,
            left_inv,
            right,
            right_inv,
        })
    }

    pub fn identity(k: i64, rank: usize, trunc: usize) -> Self {
        let id = Mat::identity(rank, &UJet::zero(trunc));
        GaugeTransform {
            k,
            left: id.clone(),
            left_inv: id.clone(),
            right: id.clone(),
            right_inv: id,
        }
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn rank(&self) -> usize {
        self.left.rows()
    }

    pub fn trunc(&self) -> usize {
        self.left.at(0, 0).trunc()
    }

    pub fn left(&self) -> &Mat<UJet> {
        &self.left
    }

    pub fn left_inv(&self) -> &Mat<UJet> {
        &self.left_inv
    }

    pub fn right(&self) -> &Mat<UJet> {
        &self.right
    }

    pub fn right_inv(&self) -> &Mat<UJet> {
        &self.right_inv
    }

    /// Change the truncation order of all four factors. Dropping orders
    /// keeps every invariant because truncation is a ring homomorphism.
    /// Raising the order pads with zeros, which is only correct when the
    /// factors happen to be exact polynomials in u, so that direction is
    /// revalidated from scratch.
    pub fn retruncated(&self, n: usize) -> Result<Self> {
        let left = self.left.map(|e| e.retruncated(n));
        let left_inv = self.left_inv.map(|e| e.retruncated(n));
        let right = self.right.map(|e| e.retruncated(n));
        let right_inv = self.right_inv.map(|e| e.retruncated(n));
        if n <= self.trunc() {
            Ok(GaugeTransform {
                k: self.k,
                left,
                left_inv,
                right,
                right_inv,
            })
        } else {
            GaugeTransform::new(self.k, left, left_inv, right, right_inv)
        }
    }

    /// `T -> left * T * right`. The result is revalidated, which in
    /// particular re-checks the monomial-determinant invariant.
    pub fn apply(&self, t: &TransitionMatrix) -> Result<TransitionMatrix> {
        if self.k != t.k() {
            return Err(Error::KMismatch {
                left: self.k,
                right: t.k(),
            });
        }
        if self.rank() != t.rank() {
            return Err(Error::DimensionMismatch(format!(
                "gauge rank {} does not match bundle rank {}",
                self.rank(),
                t.rank()
            )));
        }
        if self.trunc() != t.trunc() {
            return Err(Error::TruncMismatch {
                left: self.trunc(),
                right: t.trunc(),
            });
        }
        let out = self.left.checked_mul(t.entries())?.checked_mul(&self.right)?;
        TransitionMatrix::new(self.k, out)
    }

    /// Composite that acts as `self` first, then `later`:
    /// `(later . self)(T) = later.left * self.left * T * self.right * later.right`.
    pub fn then(&self, later: &GaugeTransform) -> Result<GaugeTransform> {
        if self.k != later.k {
            return Err(Error::KMismatch {
                left: self.k,
                right: later.k,
            });
        }
        GaugeTransform::new(
            self.k,
            later.left.checked_mul(&self.left)?,
            self.left_inv.checked_mul(&later.left_inv)?,
            self.right.checked_mul(&later.right)?,
            later.right_inv.checked_mul(&self.right_inv)?,
        )
    }

    /// Left factor `I + coef * e_{r,s}` (a row operation); `coef` must be
    /// regular on the V chart.
    pub fn elementary_left(
        k: i64,
        rank: usize,
        r: usize,
        s: usize,
        coef: &UJet,
    ) -> Result<Self> {
        if r == s || r >= rank || s >= rank {
            return Err(Error::InvalidParameter(format!(
                "elementary factor needs distinct indices below rank {rank}, got ({r},{s})"
            )));
        }
        let id = Mat::identity(rank, coef);
        let mut left = id.clone();
        left.set(r, s, coef.clone());
        let mut left_inv = id.clone();
        left_inv.set(r, s, -coef);
        GaugeTransform::new(k, left, left_inv, id.clone(), id)
    }

    /// Right factor `I + coef * e_{r,s}` (a column operation); `coef` must
    /// be regular on the U chart.
    pub fn elementary_right(
        k: i64,
        rank: usize,
        r: usize,
        s: usize,
        coef: &UJet,
    ) -> Result<Self> {
        if r == s || r >= rank || s >= rank {
            return Err(Error::InvalidParameter(format!(
                "elementary factor needs distinct indices below rank {rank}, got ({r},{s})"
            )));
        }
        let id = Mat::identity(rank, coef);
        let mut right = id.clone();
        right.set(r, s, coef.clone());
        let mut right_inv = id.clone();
        right_inv.set(r, s, -coef);
        GaugeTransform::new(k, id.clone(), id, right, right_inv)
    }

    /// Row permutation on the left: row `r` of the result of `apply` is row
    /// `sigma[r]` of the input. Constant matrices are regular on both
    /// charts.
    pub fn permutation_left(k: i64, sigma: &[usize], trunc: usize) -> Result<Self> {
        let rank = sigma.len();
        let mut seen = vec![false; rank];
        for &s in sigma {
            if s >= rank || seen[s] {
                return Err(Error::InvalidParameter(format!(
                    "not a permutation of 0..{rank}: {sigma:?}"
                )));
            }
            seen[s] = true;
        }
        let id = Mat::identity(rank, &UJet::zero(trunc));
        let p = id.permute_rows(sigma);
        let p_inv = p.transpose();
        GaugeTransform::new(k, p, p_inv, id.clone(), id)
    }
}
