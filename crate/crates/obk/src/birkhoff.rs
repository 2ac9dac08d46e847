//! Factorization of an invertible transition matrix on the punctured line
//! into `A(z^-1) * diag(z^{j_1}, ..., z^{j_n}) * B(z)`.
//!
//! `A` has entries in nonpositive powers of z and is invertible at z = inf;
//! `B` is polynomial with constant nonzero determinant. The diagonal
//! exponents, sorted descending, are a complete invariant of the matrix up
//! to such two-sided equivalence: they are the splitting type of the glued
//! bundle, which decomposes as a direct sum of line bundles on the
//! projective line.
//!
//! The algorithm clears denominators with a global power of z, then makes
//! the polynomial matrix column-proper: as long as the matrix of leading
//! column coefficients is singular, a kernel vector gives a degree-dropping
//! column operation (the highest-degree participating column absorbs the
//! others, so the operation stays polynomial and unimodular). Once the
//! leading matrix is invertible, pulling `z^{deg}` out of each column
//! leaves the `A` factor, and the accumulated inverse column operations
//! form `B`. The sum of the column degrees drops strictly at each step and
//! is bounded below by the determinant degree, so this terminates.

use num_traits::{One, Zero};

use crate::bundle::{lift_laurent_matrix, GaugeTransform, SplittingType, TransitionMatrix};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::matrix::Mat;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BirkhoffFactorization {
    /// Entries in z^-1, invertible at z = inf.
    pub left: Mat<LaurentPoly>,
    /// Diagonal exponents, sorted descending.
    pub exponents: Vec<i64>,
    /// Polynomial entries, constant nonzero determinant.
    pub right: Mat<LaurentPoly>,
}

impl BirkhoffFactorization {
    pub fn splitting(&self) -> SplittingType {
        SplittingType(self.exponents.clone())
    }

    /// `A * diag(z^j) * B`.
    pub fn reconstruct(&self) -> Mat<LaurentPoly> {
        let shifted = Mat::from_fn(self.left.rows(), self.left.cols(), |r, c| {
            self.left.at(r, c).shift(self.exponents[c])
        });
        shifted
            .checked_mul(&self.right)
            .expect("factor shapes fixed at construction")
    }

    /// Re-derive every property the factorization promises, against the
    /// matrix it claims to factor.
    pub fn check(&self, m: &Mat<LaurentPoly>) -> Result<()> {
        let fail = |msg: String| Err(Error::VerificationFailed(msg));
        if self.reconstruct() != *m {
            return fail("factor product does not reproduce the input".into());
        }
        for w in self.exponents.windows(2) {
            if w[0] < w[1] {
                return fail(format!("exponents not sorted: {:?}", self.exponents));
            }
        }
        for (r, c, p) in self.left.entries() {
            if !p.max_exp_at_most(0) {
                return fail(format!("left factor entry ({},{}) has a positive power", r + 1, c + 1));
            }
        }
        // value at z = inf is the z^0 coefficient matrix
        let at_inf = self.left.map(|p| p.coeff(0));
        if at_inf.det().is_zero() {
            return fail("left factor degenerates at z = inf".into());
        }
        for (r, c, p) in self.right.entries() {
            if !p.is_polynomial() {
                return fail(format!("right factor entry ({},{}) has a negative power", r + 1, c + 1));
            }
        }
        match self.right.det().as_monomial() {
            Some((0, _)) => {}
            _ => return fail("right factor determinant is not a nonzero constant".into()),
        }
        Ok(())
    }
}

/// Reduced row echelon form over the rationals; returns the echelon matrix
/// and its pivot columns.
fn rref(mut m: Vec<Vec<Scalar>>) -> (Vec<Vec<Scalar>>, Vec<usize>) {
    let rows = m.len();
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].clone().recip();
        for x in &mut m[r] {
            *x = &*x * &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    let sub = &f * p;
                    *x = &*x - &sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

/// A nonzero rational kernel vector, or None when the matrix is invertible.
/// Deterministic: the first free column gets coefficient 1.
fn kernel_vector(l: &Mat<Scalar>) -> Option<Vec<Scalar>> {
    let rows: Vec<Vec<Scalar>> = (0..l.rows())
        .map(|r| (0..l.cols()).map(|c| l.at(r, c).clone()).collect())
        .collect();
    let cols = l.cols();
    let (ech, pivots) = rref(rows);
    if pivots.len() == cols {
        return None;
    }
    let free = (0..cols).find(|c| !pivots.contains(c)).expect("free column exists");
    let mut w = vec![Scalar::zero(); cols];
    w[free] = Scalar::one();
    for (i, &pc) in pivots.iter().enumerate() {
        w[pc] = -ech[i][free].clone();
    }
    Some(w)
}

pub fn birkhoff_factorize(m: &Mat<LaurentPoly>) -> Result<BirkhoffFactorization> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "factorization needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let det = m.det();
    let Some((det_exp, _)) = det.as_monomial() else {
        return Err(Error::NonMonomialDeterminant {
            det: det.to_string(),
        });
    };
    let n = m.rows();

    // clear denominators with one global power of z
    let min_exp = m
        .entries()
        .filter_map(|(_, _, p)| p.min_exp())
        .min()
        .expect("nonzero determinant implies a nonzero entry");
    let shift = (-min_exp).max(0);
    let mut p = m.map(|e| e.shift(shift));

    // column degrees; a zero column would force a zero determinant
    let col_degree = |p: &Mat<LaurentPoly>, c: usize| -> i64 {
        (0..n)
            .filter_map(|r| p.at(r, c).max_exp())
            .max()
            .expect("no zero columns")
    };
    let mut deg: Vec<i64> = (0..n).map(|c| col_degree(&p, c)).collect();

    let mut right = Mat::identity(n, &LaurentPoly::zero());
    loop {
        let leading = Mat::from_fn(n, n, |r, c| p.at(r, c).coeff(deg[c]));
        let Some(mut w) = kernel_vector(&leading) else {
            break;
        };
        // the highest-degree column in the kernel's support absorbs the
        // others; that keeps every shift exponent nonnegative
        let target = (0..n)
            .filter(|&c| !w[c].is_zero())
            .max_by_key(|&c| (deg[c], std::cmp::Reverse(c)))
            .expect("kernel vector is nonzero");
        let norm = w[target].clone().recip();
        for x in &mut w {
            *x = &*x * &norm;
        }
        let old_deg = deg[target];
        for c in 0..n {
            if c == target || w[c].is_zero() {
                continue;
            }
            let coef = LaurentPoly::monomial(deg[target] - deg[c], w[c].clone());
            p.col_op(target, c, &coef);
            // inverse of the same elementary factor, applied on the left
            right.row_op(c, target, &-&coef);
        }
        deg[target] = col_degree(&p, target);
        debug_assert!(deg[target] < old_deg, "column degree must drop");
    }

    // pull the degree out of each column; what is left is regular and
    // invertible at z = inf
    let left = Mat::from_fn(n, n, |r, c| p.at(r, c).shift(-deg[c]));
    let mut exponents: Vec<i64> = deg.iter().map(|d| d - shift).collect();

    // sort descending by conjugating with a permutation
    let mut sigma: Vec<usize> = (0..n).collect();
    sigma.sort_by(|&a, &b| exponents[b].cmp(&exponents[a]));
    let left = left.permute_cols(&sigma);
    let right = right.permute_rows(&sigma);
    exponents = sigma.iter().map(|&i| exponents[i]).collect();

    debug_assert_eq!(exponents.iter().sum::<i64>(), det_exp);
    let fact = BirkhoffFactorization {
        left,
        exponents,
        right,
    };
    fact.check(m)?;
    Ok(fact)
}

/// Splitting type of the restriction to the zero section.
pub fn splitting_type(t: &TransitionMatrix) -> Result<SplittingType> {
    Ok(birkhoff_factorize(&t.u0_part())?.splitting())
}

/// Gauge the u^0 part to `diag(z^{j_1}, ..., z^{j_n})` with the exponents
/// sorted descending. Returns the gauged matrix together with the gauge
/// certificate; on a matrix already in that shape the gauge is the
/// identity.
pub fn prepare_diagonal(t: &TransitionMatrix) -> Result<(TransitionMatrix, GaugeTransform)> {
    let fact = birkhoff_factorize(&t.u0_part())?;
    let n = t.rank();

    let det_a = fact.left.det();
    let (exp_a, c_a) = det_a.as_monomial().expect("left factor is invertible");
    assert_eq!(exp_a, 0, "left factor determinant is constant");
    let left_inv = fact.left.adjugate().map(|p| p.div_scalar(c_a));

    let det_b = fact.right.det();
    let (exp_b, c_b) = det_b.as_monomial().expect("right factor is invertible");
    assert_eq!(exp_b, 0, "right factor determinant is constant");
    let right_inv = fact.right.adjugate().map(|p| p.div_scalar(c_b));

    let trunc = t.trunc();
    let gauge = GaugeTransform::new(
        t.k(),
        lift_laurent_matrix(&left_inv, trunc),
        lift_laurent_matrix(&fact.left, trunc),
        lift_laurent_matrix(&right_inv, trunc),
        lift_laurent_matrix(&fact.right, trunc),
    )?;
    let out = gauge.apply(t)?;

    let expect = Mat::from_fn(n, n, |r, c| {
        if r == c {
            LaurentPoly::monomial(fact.exponents[r], Scalar::one())
        } else {
            LaurentPoly::zero()
        }
    });
    if out.u0_part() != expect {
        return Err(Error::VerificationFailed(
            "diagonalized u^0 part is not the expected diagonal".into(),
        ));
    }
    Ok((out, gauge))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::UJet;
    use crate::scalar::int;

    fn lp(terms: &[(i64, i64)]) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for &(e, c) in terms {
            p.add_term(e, int(c));
        }
        p
    }

    fn lmat(rows: Vec<Vec<LaurentPoly>>) -> Mat<LaurentPoly> {
        Mat::from_rows(rows).unwrap()
    }

    #[test]
    fn kernel_of_singular_matrix() {
        let l = Mat::from_rows(vec![vec![int(1), int(1)], vec![int(0), int(0)]]).unwrap();
        let w = kernel_vector(&l).unwrap();
        // L * w = 0
        assert_eq!(&w[0] + &w[1], int(0));
        assert!(!w.iter().all(|x| x.is_zero()));
        let inv = Mat::from_rows(vec![vec![int(1), int(0)], vec![int(0), int(1)]]).unwrap();
        assert_eq!(kernel_vector(&inv), None);
    }

    #[test]
    fn diagonal_matrix_is_its_own_factorization() {
        let m = lmat(vec![
            vec![lp(&[(3, 1)]), LaurentPoly::zero()],
            vec![LaurentPoly::zero(), lp(&[(0, 1)])],
        ]);
        let f = birkhoff_factorize(&m).unwrap();
        assert_eq!(f.exponents, vec![3, 0]);
        assert!(f.left.is_identity());
        assert!(f.right.is_identity());
    }

    #[test]
    fn upper_triangular_example() {
        // [[z, 1], [0, z]] splits as (1, 1): already column-proper, the
        // non-diagonal part moves into the left factor.
        let m = lmat(vec![
            vec![lp(&[(1, 1)]), lp(&[(0, 1)])],
            vec![LaurentPoly::zero(), lp(&[(1, 1)])],
        ]);
        let f = birkhoff_factorize(&m).unwrap();
        assert_eq!(f.exponents, vec![1, 1]);
        let expect_left = lmat(vec![
            vec![lp(&[(0, 1)]), lp(&[(-1, 1)])],
            vec![LaurentPoly::zero(), lp(&[(0, 1)])],
        ]);
        assert_eq!(f.left, expect_left);
        assert!(f.right.is_identity());
    }

    #[test]
    fn column_reduction_is_needed() {
        // [[z, 1], [1, 0]] is equivalent to the identity: one reduction
        // step moves the z into the right factor.
        let m = lmat(vec![
            vec![lp(&[(1, 1)]), lp(&[(0, 1)])],
            vec![lp(&[(0, 1)]), LaurentPoly::zero()],
        ]);
        let f = birkhoff_factorize(&m).unwrap();
        assert_eq!(f.exponents, vec![0, 0]);
        let expect_left = lmat(vec![
            vec![LaurentPoly::zero(), lp(&[(0, 1)])],
            vec![lp(&[(0, 1)]), LaurentPoly::zero()],
        ]);
        let expect_right = lmat(vec![
            vec![lp(&[(0, 1)]), LaurentPoly::zero()],
            vec![lp(&[(1, 1)]), lp(&[(0, 1)])],
        ]);
        assert_eq!(f.left, expect_left);
        assert_eq!(f.right, expect_right);
        f.check(&m).unwrap();
    }

    #[test]
    fn unsorted_diagonal_is_permuted() {
        let m = lmat(vec![
            vec![lp(&[(0, 1)]), LaurentPoly::zero()],
            vec![LaurentPoly::zero(), lp(&[(2, 1)])],
        ]);
        let f = birkhoff_factorize(&m).unwrap();
        assert_eq!(f.exponents, vec![2, 0]);
        f.check(&m).unwrap();
    }

    #[test]
    fn negative_exponents_are_recovered() {
        let m = lmat(vec![
            vec![lp(&[(-1, 1)]), LaurentPoly::zero()],
            vec![LaurentPoly::zero(), lp(&[(-3, 1)])],
        ]);
        let f = birkhoff_factorize(&m).unwrap();
        assert_eq!(f.exponents, vec![-1, -3]);
        assert!(f.left.is_identity());
        assert!(f.right.is_identity());
    }

    #[test]
    fn scrambled_split_bundle_recovers_its_type() {
        // [[1,0],[z^-1,1]] * diag(z^2, z^-1) * [[1,z],[0,1]]
        let m = lmat(vec![
            vec![lp(&[(2, 1)]), lp(&[(3, 1)])],
            vec![lp(&[(1, 1)]), lp(&[(2, 1), (-1, 1)])],
        ]);
        let f = birkhoff_factorize(&m).unwrap();
        assert_eq!(f.exponents, vec![2, -1]);
        let expect_left = lmat(vec![
            vec![lp(&[(0, 1)]), LaurentPoly::zero()],
            vec![lp(&[(-1, 1)]), lp(&[(0, 1)])],
        ]);
        let expect_right = lmat(vec![
            vec![lp(&[(0, 1)]), lp(&[(1, 1)])],
            vec![LaurentPoly::zero(), lp(&[(0, 1)])],
        ]);
        assert_eq!(f.left, expect_left);
        assert_eq!(f.right, expect_right);
        assert_eq!(f.splitting().degree_sum(), 1);
        f.check(&m).unwrap();
    }

    #[test]
    fn nonmonomial_determinant_is_rejected() {
        let m = lmat(vec![
            vec![lp(&[(1, 1)]), lp(&[(0, 1)])],
            vec![lp(&[(0, 1)]), lp(&[(1, 1)])],
        ]);
        assert!(matches!(
            birkhoff_factorize(&m),
            Err(Error::NonMonomialDeterminant { .. })
        ));
    }

    #[test]
    fn splitting_ignores_higher_u_orders() {
        let mut e01 = UJet::zero(2);
        e01.add_term(1, 5, int(7)).unwrap();
        let entries = Mat::from_rows(vec![
            vec![UJet::from_laurent(lp(&[(1, 1)]), 2), e01],
            vec![UJet::zero(2), UJet::from_laurent(lp(&[(1, 1)]), 2)],
        ])
        .unwrap();
        let t = TransitionMatrix::new(1, entries).unwrap();
        assert_eq!(splitting_type(&t).unwrap().exponents(), &[1, 1]);
    }

    #[test]
    fn prepare_diagonal_acts_and_certifies() {
        // scrambled u0 part plus a u-term
        let mut e10 = UJet::from_laurent(lp(&[(1, 1)]), 1);
        e10.add_term(1, 0, int(3)).unwrap();
        let entries = Mat::from_rows(vec![
            vec![UJet::from_laurent(lp(&[(2, 1)]), 1), UJet::from_laurent(lp(&[(3, 1)]), 1)],
            vec![e10, UJet::from_laurent(lp(&[(2, 1), (-1, 1)]), 1)],
        ])
        .unwrap();
        let t = TransitionMatrix::new(1, entries).unwrap();
        let (out, gauge) = prepare_diagonal(&t).unwrap();
        let expect = lmat(vec![
            vec![lp(&[(2, 1)]), LaurentPoly::zero()],
            vec![LaurentPoly::zero(), lp(&[(-1, 1)])],
        ]);
        assert_eq!(out.u0_part(), expect);
        assert_eq!(gauge.apply(&t).unwrap(), out);
    }

    #[test]
    fn prepare_diagonal_is_idempotent() {
        let t = TransitionMatrix::diagonal(2, &[3, 0, -2], 2).unwrap();
        let (out, gauge) = prepare_diagonal(&t).unwrap();
        assert_eq!(out, t);
        assert_eq!(gauge, GaugeTransform::identity(2, 3, 2));
    }
}
