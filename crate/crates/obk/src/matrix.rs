//! Small dense matrices over an exact commutative ring.
//!
//! Everything here is sized for matrix ranks in the single digits, so the
//! determinant and adjugate use plain cofactor expansion. The element types
//! are [`Scalar`], [`LaurentPoly`] and [`UJet`]; genericity is captured by
//! the [`Ring`] trait, whose `zero_like`/`one_like` take a witness element
//! because a jet's zero and one carry a truncation order.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::jet::UJet;
use crate::laurent::LaurentPoly;
use crate::scalar::Scalar;

pub trait Ring: Clone + PartialEq {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn ring_add(&self, other: &Self) -> Self;
    fn ring_sub(&self, other: &Self) -> Self;
    fn ring_mul(&self, other: &Self) -> Self;
    fn ring_neg(&self) -> Self;
    fn is_ring_zero(&self) -> bool;
}

impl Ring for Scalar {
    fn zero_like(&self) -> Self {
        Scalar::zero()
    }
    fn one_like(&self) -> Self {
        Scalar::one()
    }
    fn ring_add(&self, other: &Self) -> Self {
        self + other
    }
    fn ring_sub(&self, other: &Self) -> Self {
        self - other
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn ring_neg(&self) -> Self {
        -self
    }
    fn is_ring_zero(&self) -> bool {
        self.is_zero()
    }
}

impl Ring for LaurentPoly {
    fn zero_like(&self) -> Self {
        LaurentPoly::zero()
    }
    fn one_like(&self) -> Self {
        LaurentPoly::one()
    }
    fn ring_add(&self, other: &Self) -> Self {
        self + other
    }
    fn ring_sub(&self, other: &Self) -> Self {
        self - other
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn ring_neg(&self) -> Self {
        -self
    }
    fn is_ring_zero(&self) -> bool {
        self.is_zero()
    }
}

impl Ring for UJet {
    fn zero_like(&self) -> Self {
        UJet::zero(self.trunc())
    }
    fn one_like(&self) -> Self {
        UJet::one(self.trunc())
    }
    fn ring_add(&self, other: &Self) -> Self {
        self.checked_add(other).expect("uniform truncation")
    }
    fn ring_sub(&self, other: &Self) -> Self {
        self.checked_sub(other).expect("uniform truncation")
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self.checked_mul(other).expect("uniform truncation")
    }
    fn ring_neg(&self) -> Self {
        -self
    }
    fn is_ring_zero(&self) -> bool {
        self.is_zero()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Ring> Mat<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::DimensionMismatch(
                "matrix needs at least one row and one column".into(),
            ));
        }
        let cols = rows[0].len();
        if let Some(bad) = rows.iter().position(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!(
                "row {} has {} entries, expected {}",
                bad + 1,
                rows[bad].len(),
                cols
            )));
        }
        let nrows = rows.len();
        let data = rows.into_iter().flatten().collect();
        Ok(Mat {
            rows: nrows,
            cols,
            data,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(rows > 0 && cols > 0);
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Self::from_fn(rows, cols, |_, _| value.clone())
    }

    pub fn identity(n: usize, witness: &T) -> Self {
        Self::from_fn(n, n, |r, c| {
            if r == c {
                witness.one_like()
            } else {
                witness.zero_like()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &T {
        assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut T {
        assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: T) {
        *self.at_mut(r, c) = value;
    }

    pub fn map<U, F: FnMut(&T) -> U>(&self, f: F) -> Mat<U> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        self.data
            .iter()
            .enumerate()
            .map(move |(i, t)| (i / self.cols, i % self.cols, t))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.ring_add(b))
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot subtract {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.ring_sub(b))
                .collect(),
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let out = Self::from_fn(self.rows, other.cols, |r, c| {
            let mut acc = self.at(r, 0).zero_like();
            for m in 0..self.cols {
                let term = self.at(r, m).ring_mul(other.at(m, c));
                acc = acc.ring_add(&term);
            }
            acc
        });
        Ok(out)
    }

    pub fn is_identity(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        self.entries().all(|(r, c, t)| {
            if r == c {
                *t == t.one_like()
            } else {
                t.is_ring_zero()
            }
        })
    }

    /// Reindex columns: column `c` of the result is column `sigma[c]` of
    /// `self`. Right-multiplication by the permutation matrix with columns
    /// `e_{sigma(c)}`.
    pub fn permute_cols(&self, sigma: &[usize]) -> Self {
        assert_eq!(sigma.len(), self.cols);
        Self::from_fn(self.rows, self.cols, |r, c| self.at(r, sigma[c]).clone())
    }

    /// Reindex rows: row `r` of the result is row `sigma[r]` of `self`.
    /// Left-multiplication by the transpose of that same permutation matrix.
    pub fn permute_rows(&self, sigma: &[usize]) -> Self {
        assert_eq!(sigma.len(), self.rows);
        Self::from_fn(self.rows, self.cols, |r, c| self.at(sigma[r], c).clone())
    }

    /// `row[target] += coef * row[source]` in place.
    pub fn row_op(&mut self, target: usize, source: usize, coef: &T) {
        assert!(target != source);
        for c in 0..self.cols {
            let term = coef.ring_mul(self.at(source, c));
            let updated = self.at(target, c).ring_add(&term);
            self.set(target, c, updated);
        }
    }

    /// `col[target] += coef * col[source]` in place.
    pub fn col_op(&mut self, target: usize, source: usize, coef: &T) {
        assert!(target != source);
        for r in 0..self.rows {
            let term = coef.ring_mul(self.at(r, source));
            let updated = self.at(r, target).ring_add(&term);
            self.set(r, target, updated);
        }
    }

    /// `row[r] *= factor` in place.
    pub fn scale_row(&mut self, r: usize, factor: &T) {
        for c in 0..self.cols {
            let updated = factor.ring_mul(self.at(r, c));
            self.set(r, c, updated);
        }
    }

    /// `col[c] *= factor` in place.
    pub fn scale_col(&mut self, c: usize, factor: &T) {
        for r in 0..self.rows {
            let updated = self.at(r, c).ring_mul(factor);
            self.set(r, c, updated);
        }
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> Self {
        let mut rows = Vec::with_capacity(self.rows - 1);
        for r in 0..self.rows {
            if r == skip_row {
                continue;
            }
            let mut row = Vec::with_capacity(self.cols - 1);
            for c in 0..self.cols {
                if c == skip_col {
                    continue;
                }
                row.push(self.at(r, c).clone());
            }
            rows.push(row);
        }
        Mat::from_rows(rows).expect("minor of a matrix at least 2x2")
    }

    /// Cofactor-expansion determinant; fine for the small ranks this crate
    /// works with.
    pub fn det(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        if self.rows == 1 {
            return self.at(0, 0).clone();
        }
        let mut acc = self.at(0, 0).zero_like();
        for r in 0..self.rows {
            if self.at(r, 0).is_ring_zero() {
                continue;
            }
            let cof = self.minor(r, 0).det();
            let term = self.at(r, 0).ring_mul(&cof);
            acc = if r % 2 == 0 {
                acc.ring_add(&term)
            } else {
                acc.ring_sub(&term)
            };
        }
        acc
    }

    /// Adjugate: `self * adj = adj * self = det * I`. Used to invert
    /// matrices whose determinant is a unit.
    pub fn adjugate(&self) -> Self {
        assert!(self.is_square(), "adjugate of a non-square matrix");
        if self.rows == 1 {
            return Mat::from_fn(1, 1, |_, _| self.at(0, 0).one_like());
        }
        // adj[c][r] = (-1)^{r+c} det(minor_{r,c})
        Self::from_fn(self.rows, self.cols, |c, r| {
            let d = self.minor(r, c).det();
            if (r + c) % 2 == 0 {
                d
            } else {
                d.ring_neg()
            }
        })
    }
}

impl<T: fmt::Display> fmt::Display for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            write!(f, "[ ")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " , ")?;
                }
                write!(f, "{}", self.data[r * self.cols + c])?;
            }
            writeln!(f, " ]")?;
        }
        Ok(())
    }
}
