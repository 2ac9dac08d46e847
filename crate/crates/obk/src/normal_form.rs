//! Gauge normalization of a transition matrix into canonical algebraic
//! form, and the combinatorics of what survives.
//!
//! After the u^0 part has been diagonalized (see
//! [`crate::birkhoff::prepare_diagonal`]), three stages run in order:
//!
//! 1. [`eliminate_lower`] clears everything strictly below the diagonal,
//!    order by order in u. For a lower entry the admissible moves cover
//!    every z-exponent, so nothing survives.
//! 2. [`normalize_diagonal`] scales each diagonal entry back to a bare
//!    monomial by exponentiating the chart-split logarithm of the
//!    perturbation.
//! 3. [`reduce_upper`] clears as much of each upper entry as the two
//!    charts allow. For the entry at row r, column s the left move (a
//!    V-regular row operation against the column's `z^{j_s}`) reaches
//!    exponents `l <= j_s + k*n` at u-order n, and the right move (a
//!    U-regular column operation against the row's `z^{j_r}`) reaches
//!    `l >= j_r`. The gap `j_s + k*n < l < j_r` is untouchable: that
//!    window is the canonical form, and its size is [`canonical_dim`].
//!
//! Every stage records the elementary factors it applies into a running
//! gauge (with inverses maintained alongside, exactly), and the final
//! [`GaugeTransform`] is validated wholesale: products with the stored
//! inverses are compared with the identity entry by entry.
//!
//! Each u-order needs only a single sweep: with a diagonal u^0 part, an
//! elementary factor at u-order n changes other entries only at orders
//! strictly above n. The sweep loop still re-checks and would report a
//! residual rather than loop forever if that reasoning were ever violated.

use num_traits::One;

use crate::birkhoff::prepare_diagonal;
use crate::bundle::{GaugeTransform, SplittingType, TransitionMatrix};
use crate::error::{Error, Result};
use crate::jet::UJet;
use crate::laurent::LaurentPoly;
use crate::matrix::Mat;
use crate::scalar::Scalar;

/// Highest u-order whose canonical window is nonempty for the exponent
/// pair `(j_hi, j_lo)`: `floor((j_hi - j_lo - 2) / k)`, clamped at 0.
pub fn window_depth(k: i64, j_hi: i64, j_lo: i64) -> usize {
    assert!(k >= 1, "base parameter k must be >= 1");
    let diff = j_hi - j_lo - 2;
    if diff < 0 {
        0
    } else {
        (diff / k) as usize
    }
}

/// The canonical window for one upper entry: all `(i, l)` with
/// `1 <= i <= floor((j_hi - j_lo - 2)/k)` and `k*i + j_lo + 1 <= l <= j_hi - 1`.
pub fn canonical_support(k: i64, j_hi: i64, j_lo: i64) -> Vec<(usize, i64)> {
    let mut out = Vec::new();
    for i in 1..=window_depth(k, j_hi, j_lo) {
        for l in (k * i as i64 + j_lo + 1)..=(j_hi - 1) {
            out.push((i, l));
        }
    }
    out
}

/// Number of free coefficients in the canonical window:
/// the sum of `j_hi - j_lo - k*i - 1` over the window's u-orders.
pub fn canonical_dim(k: i64, j_hi: i64, j_lo: i64) -> usize {
    (1..=window_depth(k, j_hi, j_lo))
        .map(|i| (j_hi - j_lo - k * i as i64 - 1) as usize)
        .sum()
}

/// Total window size over all upper entries of a matrix with the given
/// diagonal exponents (sorted descending).
pub fn canonical_dim_total(k: i64, exponents: &[i64]) -> Result<usize> {
    require_sorted(exponents)?;
    let mut total = 0;
    for r in 0..exponents.len() {
        for s in r + 1..exponents.len() {
            total += canonical_dim(k, exponents[r], exponents[s]);
        }
    }
    Ok(total)
}

// bounds written in the same shape as the window description
#[allow(clippy::int_plus_one)]
fn in_window(k: i64, j_hi: i64, j_lo: i64, i: usize, l: i64) -> bool {
    i >= 1 && l >= k * i as i64 + j_lo + 1 && l <= j_hi - 1
}

/// One residual, separated by a z-exponent threshold into the part the
/// left (V-chart) move will absorb and the part for the right (U-chart)
/// move. `eta_part + xi_part` reconstructs the residual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualSplit {
    pub threshold: i64,
    pub eta_part: LaurentPoly,
    pub xi_part: LaurentPoly,
}

pub fn split_residual(residual: &LaurentPoly, threshold: i64) -> ResidualSplit {
    let (eta_part, xi_part) = residual.split_threshold(threshold);
    ResidualSplit {
        threshold,
        eta_part,
        xi_part,
    }
}

fn require_sorted(exponents: &[i64]) -> Result<()> {
    for i in 0..exponents.len().saturating_sub(1) {
        if exponents[i] < exponents[i + 1] {
            return Err(Error::UnsortedExponents {
                pos: i + 1,
                next: i + 2,
                lo: exponents[i],
                hi: exponents[i + 1],
            });
        }
    }
    Ok(())
}

/// Exponent and coefficient of each diagonal entry's u^0 monomial, after
/// checking that the whole u^0 part is diagonal.
fn diagonal_base(entries: &Mat<UJet>) -> Result<Vec<(i64, Scalar)>> {
    for (r, c, e) in entries.entries() {
        if r != c && !e.coeff(0).is_zero() {
            return Err(Error::BaseNotDiagonal {
                row: r + 1,
                col: c + 1,
                got: e.coeff(0).to_string(),
            });
        }
    }
    let n = entries.rows();
    (0..n)
        .map(|r| {
            let p = entries.at(r, r).coeff(0);
            match p.as_monomial() {
                Some((j, c)) => Ok((j, c.clone())),
                None => Err(Error::BadConstantTerm {
                    op: "diagonal entry",
                    expected: "a single nonzero monomial",
                    got: p.to_string(),
                }),
            }
        })
        .collect()
}

fn require_lower_zero(entries: &Mat<UJet>) -> Result<()> {
    for (r, c, e) in entries.entries() {
        if r > c && !e.is_zero() {
            return Err(Error::NotUpperTriangular {
                row: r + 1,
                col: c + 1,
            });
        }
    }
    Ok(())
}

/// Accumulates elementary gauge factors together with their inverses, and
/// applies each to the working matrix as a row or column operation.
struct GaugeAccum {
    left: Mat<UJet>,
    left_inv: Mat<UJet>,
    right: Mat<UJet>,
    right_inv: Mat<UJet>,
}

impl GaugeAccum {
    fn identity(rank: usize, trunc: usize) -> Self {
        let id = Mat::identity(rank, &UJet::zero(trunc));
        GaugeAccum {
            left: id.clone(),
            left_inv: id.clone(),
            right: id.clone(),
            right_inv: id,
        }
    }

    fn from_gauge(g: &GaugeTransform) -> Self {
        GaugeAccum {
            left: g.left().clone(),
            left_inv: g.left_inv().clone(),
            right: g.right().clone(),
            right_inv: g.right_inv().clone(),
        }
    }

    /// Apply `I + coef*e_{r,s}` on the left of `t` and fold it into the
    /// accumulated gauge.
    fn left_factor(&mut self, t: &mut Mat<UJet>, r: usize, s: usize, coef: &UJet) {
        t.row_op(r, s, coef);
        self.left.row_op(r, s, coef);
        self.left_inv.col_op(s, r, &-coef);
    }

    /// Apply `I + coef*e_{r,s}` on the right of `t` and fold it in.
    fn right_factor(&mut self, t: &mut Mat<UJet>, r: usize, s: usize, coef: &UJet) {
        t.col_op(s, r, coef);
        self.right.col_op(s, r, coef);
        self.right_inv.row_op(r, s, &-coef);
    }

    /// Scale row r by `lambda` on the left and column r by `rho` on the
    /// right; the caller supplies exact inverses.
    fn scale(
        &mut self,
        t: &mut Mat<UJet>,
        r: usize,
        lambda: &UJet,
        lambda_inv: &UJet,
        rho: &UJet,
        rho_inv: &UJet,
    ) {
        t.scale_row(r, lambda);
        self.left.scale_row(r, lambda);
        self.left_inv.scale_col(r, lambda_inv);
        t.scale_col(r, rho);
        self.right.scale_col(r, rho);
        self.right_inv.scale_row(r, rho_inv);
    }

    fn into_gauge(self, k: i64) -> Result<GaugeTransform> {
        GaugeTransform::new(k, self.left, self.left_inv, self.right, self.right_inv)
    }
}

/// Lift a Laurent polynomial to a jet concentrated at one u-order.
fn at_order(p: LaurentPoly, order: usize, trunc: usize) -> UJet {
    let mut jet = UJet::zero(trunc);
    jet.set_coeff(order, p);
    jet
}

fn clear_lower_orders(
    k: i64,
    entries: &mut Mat<UJet>,
    base: &[(i64, Scalar)],
    acc: &mut GaugeAccum,
) -> Result<()> {
    let n = entries.rows();
    let trunc = entries.at(0, 0).trunc();
    for order in 1..=trunc {
        let mut sweeps = 0;
        loop {
            let mut dirty = false;
            for r in 1..n {
                for s in 0..r {
                    let rho = entries.at(r, s).coeff(order).clone();
                    if rho.is_zero() {
                        continue;
                    }
                    dirty = true;
                    if sweeps > n * n + 1 {
                        return Err(Error::ResidualNotCleared {
                            row: r + 1,
                            col: s + 1,
                            u_deg: order,
                            sweeps,
                        });
                    }
                    let (j_row, c_row) = &base[r];
                    let (j_col, c_col) = &base[s];
                    // exponents up to the row exponent go left, the rest
                    // goes right; for a lower entry that covers everything
                    let split = split_residual(&rho, *j_row);
                    if !split.eta_part.is_zero() {
                        let eta = split.eta_part.shift(-j_col).div_scalar(c_col);
                        debug_assert!(eta.max_exp_at_most(k * order as i64));
                        acc.left_factor(entries, r, s, &at_order(-&eta, order, trunc));
                    }
                    if !split.xi_part.is_zero() {
                        let xi = split.xi_part.shift(-j_row).div_scalar(c_row);
                        debug_assert!(xi.is_polynomial());
                        acc.right_factor(entries, r, s, &at_order(-&xi, order, trunc));
                    }
                    debug_assert!(entries.at(r, s).coeff(order).is_zero());
                }
            }
            if !dirty {
                break;
            }
            sweeps += 1;
        }
    }
    Ok(())
}

/// Clear everything strictly below the diagonal. Requires the u^0 part to
/// be diagonal with exponents sorted descending; the returned gauge is
/// triangular-unipotent on both sides.
pub fn eliminate_lower(t: &TransitionMatrix) -> Result<(TransitionMatrix, GaugeTransform)> {
    let base = diagonal_base(t.entries())?;
    let exponents: Vec<i64> = base.iter().map(|(j, _)| *j).collect();
    require_sorted(&exponents)?;

    let mut entries = t.entries().clone();
    let mut acc = GaugeAccum::identity(t.rank(), t.trunc());
    clear_lower_orders(t.k(), &mut entries, &base, &mut acc)?;

    let gauge = acc.into_gauge(t.k())?;
    let out = TransitionMatrix::new(t.k(), entries)?;
    Ok((out, gauge))
}

fn clear_diagonal_orders(
    entries: &mut Mat<UJet>,
    base: &[(i64, Scalar)],
    acc: &mut GaugeAccum,
) -> Result<()> {
    for (r, (j, c)) in base.iter().enumerate() {
        let d = entries.at(r, r);
        // f = 1 + (perturbation), exactly 1 when the entry is canonical
        let f = d.shift_z(-j).scale(&(Scalar::one() / c));
        if f.is_one() && c.is_one() {
            continue;
        }
        let g = f.log()?;
        // negative exponents are regular on the V chart, the rest on U
        let mut g_v = UJet::zero(g.trunc());
        let mut g_u = UJet::zero(g.trunc());
        for (m, p) in g.coeffs().iter().enumerate() {
            let (neg, pos) = p.split_threshold(-1);
            g_v.set_coeff(m, neg);
            g_u.set_coeff(m, pos);
        }
        let lambda = (-&g_v).exp()?;
        let lambda_inv = g_v.exp()?;
        let rho = (-&g_u).exp()?.scale(&(Scalar::one() / c));
        let rho_inv = g_u.exp()?.scale(c);
        acc.scale(entries, r, &lambda, &lambda_inv, &rho, &rho_inv);
        debug_assert_eq!(
            *entries.at(r, r),
            at_order(LaurentPoly::monomial(*j, Scalar::one()), 0, g.trunc())
        );
    }
    Ok(())
}

/// Scale each diagonal entry down to its bare u^0 monomial `z^{j_r}` with
/// a diagonal gauge. Requires the matrix to be upper-triangular.
pub fn normalize_diagonal(t: &TransitionMatrix) -> Result<(TransitionMatrix, GaugeTransform)> {
    require_lower_zero(t.entries())?;
    let n = t.rank();
    let base: Vec<(i64, Scalar)> = (0..n)
        .map(|r| {
            let p = t.entry(r, r).coeff(0);
            match p.as_monomial() {
                Some((j, c)) => Ok((j, c.clone())),
                None => Err(Error::BadConstantTerm {
                    op: "diagonal entry",
                    expected: "a single nonzero monomial",
                    got: p.to_string(),
                }),
            }
        })
        .collect::<Result<_>>()?;

    let mut entries = t.entries().clone();
    let mut acc = GaugeAccum::identity(n, t.trunc());
    clear_diagonal_orders(&mut entries, &base, &mut acc)?;

    let gauge = acc.into_gauge(t.k())?;
    let out = TransitionMatrix::new(t.k(), entries)?;
    Ok((out, gauge))
}

fn clear_upper_orders(
    k: i64,
    entries: &mut Mat<UJet>,
    exponents: &[i64],
    base_coeffs: &[Scalar],
    acc: &mut GaugeAccum,
) -> Result<()> {
    let n = entries.rows();
    let trunc = entries.at(0, 0).trunc();
    for order in 1..=trunc {
        let mut sweeps = 0;
        loop {
            let mut dirty = false;
            for r in 0..n {
                for s in r + 1..n {
                    let j_row = exponents[r];
                    let j_col = exponents[s];
                    let rho = entries.at(r, s).coeff(order).clone();
                    // exponents >= j_row go right, then <= j_col + k*order
                    // goes left; the gap between them is the canonical
                    // window and stays
                    let (rest, high) = rho.split_threshold(j_row - 1);
                    let (low, _window) = rest.split_threshold(j_col + k * order as i64);
                    if low.is_zero() && high.is_zero() {
                        continue;
                    }
                    dirty = true;
                    if sweeps > n * n + 1 {
                        return Err(Error::ResidualNotCleared {
                            row: r + 1,
                            col: s + 1,
                            u_deg: order,
                            sweeps,
                        });
                    }
                    if !high.is_zero() {
                        let xi = high.shift(-j_row).div_scalar(&base_coeffs[r]);
                        debug_assert!(xi.is_polynomial());
                        acc.right_factor(entries, r, s, &at_order(-&xi, order, trunc));
                    }
                    if !low.is_zero() {
                        let eta = low.shift(-j_col).div_scalar(&base_coeffs[s]);
                        debug_assert!(eta.max_exp_at_most(k * order as i64));
                        acc.left_factor(entries, r, s, &at_order(-&eta, order, trunc));
                    }
                }
            }
            if !dirty {
                break;
            }
            sweeps += 1;
        }
    }
    Ok(())
}

/// The canonical form: diagonal exactly `z^{j_r}`, nothing below the
/// diagonal, and each upper entry supported in its window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    k: i64,
    exponents: Vec<i64>,
    trunc: usize,
    upper: Mat<UJet>,
}

impl CanonicalForm {
    /// Validates shape and window membership, so holding a value of this
    /// type is already a certificate.
    pub fn new(k: i64, exponents: Vec<i64>, upper: Mat<UJet>) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidParameter(format!(
                "base parameter k must be >= 1, got {k}"
            )));
        }
        require_sorted(&exponents)?;
        if !upper.is_square() || upper.rows() != exponents.len() {
            return Err(Error::DimensionMismatch(format!(
                "upper part must be {n}x{n}, got {r}x{c}",
                n = exponents.len(),
                r = upper.rows(),
                c = upper.cols()
            )));
        }
        let trunc = upper.at(0, 0).trunc();
        for (r, c, e) in upper.entries() {
            if e.trunc() != trunc {
                return Err(Error::TruncMismatch {
                    left: trunc,
                    right: e.trunc(),
                });
            }
            if r >= c && !e.is_zero() {
                return Err(Error::NotUpperTriangular {
                    row: r + 1,
                    col: c + 1,
                });
            }
            if r < c {
                for (i, l) in e.support() {
                    if !in_window(k, exponents[r], exponents[c], i, l) {
                        return Err(Error::VerificationFailed(format!(
                            "canonical entry ({},{}) has term u^{i} z^{l} outside its window",
                            r + 1,
                            c + 1
                        )));
                    }
                }
            }
        }
        Ok(CanonicalForm {
            k,
            exponents,
            trunc,
            upper,
        })
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exponents
    }

    pub fn splitting(&self) -> SplittingType {
        SplittingType(self.exponents.clone())
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    /// The strictly-upper perturbation matrix; zero exactly when the
    /// bundle splits.
    pub fn upper(&self) -> &Mat<UJet> {
        &self.upper
    }

    pub fn is_split(&self) -> bool {
        self.upper.entries().all(|(_, _, e)| e.is_zero())
    }

    /// All surviving terms as `(row, col, u_deg, z_exp, coeff)`, 0-based
    /// indices, row-major then support order.
    pub fn terms(&self) -> Vec<(usize, usize, usize, i64, Scalar)> {
        let mut out = Vec::new();
        for (r, c, e) in self.upper.entries() {
            for (i, l) in e.support() {
                out.push((r, c, i, l, e.coeff(i).coeff(l)));
            }
        }
        out
    }

    /// Whether the truncation order reaches the whole window of the entry
    /// at `(r, s)`; always true for forms produced by [`normalize`].
    pub fn window_certified(&self, r: usize, s: usize) -> bool {
        assert!(r < s && s < self.rank());
        self.trunc >= window_depth(self.k, self.exponents[r], self.exponents[s])
    }

    pub fn fully_certified(&self) -> bool {
        let n = self.rank();
        (0..n).all(|r| (r + 1..n).all(|s| self.window_certified(r, s)))
    }

    /// Materialize `diag(z^{j_r}) + upper` as a transition matrix.
    pub fn to_matrix(&self) -> TransitionMatrix {
        let mut entries = self.upper.clone();
        for r in 0..self.rank() {
            let diag = at_order(
                LaurentPoly::monomial(self.exponents[r], Scalar::one()),
                0,
                self.trunc,
            );
            entries.set(r, r, diag);
        }
        TransitionMatrix::new(self.k, entries).expect("canonical shape is a valid bundle")
    }
}

fn split_canonical(k: i64, entries: Mat<UJet>, exponents: Vec<i64>) -> Result<CanonicalForm> {
    let n = entries.rows();
    let trunc = entries.at(0, 0).trunc();
    let upper = Mat::from_fn(n, n, |r, c| {
        if r < c {
            entries.at(r, c).clone()
        } else {
            UJet::zero(trunc)
        }
    });
    CanonicalForm::new(k, exponents, upper)
}

/// Clear each upper entry down to its canonical window. Requires an
/// upper-triangular matrix whose diagonal entries are exactly u^0
/// monomials with sorted exponents and whose upper entries are multiples
/// of u; the truncation order must reach the deepest window.
pub fn reduce_upper(t: &TransitionMatrix) -> Result<(CanonicalForm, GaugeTransform)> {
    require_lower_zero(t.entries())?;
    let base = diagonal_base(t.entries())?;
    let exponents: Vec<i64> = base.iter().map(|(j, _)| *j).collect();
    let base_coeffs: Vec<Scalar> = base.iter().map(|(_, c)| c.clone()).collect();
    require_sorted(&exponents)?;
    let n = t.rank();
    for r in 0..n {
        if t.entry(r, r).max_u_degree() != Some(0) {
            return Err(Error::InvalidParameter(format!(
                "diagonal entry ({r1},{r1}) must be exactly its u^0 monomial before the upper reduction",
                r1 = r + 1
            )));
        }
    }
    let needed = window_depth(t.k(), exponents[0], exponents[n - 1]);
    if t.trunc() < needed {
        return Err(Error::TruncationTooSmall {
            needed,
            have: t.trunc(),
        });
    }

    let mut entries = t.entries().clone();
    let mut acc = GaugeAccum::identity(n, t.trunc());
    clear_upper_orders(t.k(), &mut entries, &exponents, &base_coeffs, &mut acc)?;

    let gauge = acc.into_gauge(t.k())?;
    let canon = split_canonical(t.k(), entries, exponents)?;
    Ok((canon, gauge))
}

/// The full pipeline: diagonalize the u^0 part, clear below the diagonal,
/// normalize the diagonal, reduce the upper part to its window. The
/// composed gauge is validated and the certificate
/// `gauge.apply(t) == canonical matrix` is checked exactly before
/// returning.
pub fn normalize(t: &TransitionMatrix) -> Result<(CanonicalForm, GaugeTransform)> {
    let (diagonalized, stage0) = prepare_diagonal(t)?;
    let base = diagonal_base(diagonalized.entries())?;
    let exponents: Vec<i64> = base.iter().map(|(j, _)| *j).collect();
    let n = t.rank();

    let needed = window_depth(t.k(), exponents[0], exponents[n - 1]);
    if t.trunc() < needed {
        return Err(Error::TruncationTooSmall {
            needed,
            have: t.trunc(),
        });
    }

    let mut entries = diagonalized.entries().clone();
    let mut acc = GaugeAccum::from_gauge(&stage0);
    clear_lower_orders(t.k(), &mut entries, &base, &mut acc)?;
    clear_diagonal_orders(&mut entries, &base, &mut acc)?;
    let base_coeffs = vec![Scalar::one(); n];
    clear_upper_orders(t.k(), &mut entries, &exponents, &base_coeffs, &mut acc)?;

    let gauge = acc.into_gauge(t.k())?;
    let canon = split_canonical(t.k(), entries, exponents)?;
    let reproduced = gauge.apply(t)?;
    if reproduced != canon.to_matrix() {
        return Err(Error::VerificationFailed(
            "composed gauge does not reproduce the canonical matrix".into(),
        ));
    }
    Ok((canon, gauge))
}
