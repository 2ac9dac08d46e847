//! Explicit sections of line bundles off the zero section.
//!
//! A line bundle with transition function `z^j` carries the candidate
//! section `s_U = z^{k-j} u` on the U chart and `s_V = v` on the V chart.
//! The cocycle identity `z^j * s_U = s_V` (after rewriting V-chart
//! coordinates through `xi = z^{-1}`, `v = z^k u`) is an exact symbolic
//! fact for every `k >= 1` and every `j`, and [`verify_cocycle`] checks it
//! on the nose.
//!
//! Whether the section actually trivializes the bundle away from the zero
//! section is a separate question: for `k > j` the U-chart expression
//! vanishes along the fiber `{z = 0}`, and for `k < j` it is not even
//! regular on U. [`vanishing_report`] states the per-chart facts and
//! [`VanishingReport::trivializes_off_zero_section`] asserts the full
//! conclusion only when the monomial inspection supports it, which for
//! this family means exactly `j = k`.

use std::fmt;

use num_traits::One;

use crate::jet::UJet;
use crate::laurent::LaurentPoly;
use crate::scalar::Scalar;

/// A section described in both charts. `s_u` lives in the U-chart
/// coordinates `(z, u)`. `s_v` is recorded in the V-chart coordinates:
/// its jet variable is `v` and its Laurent variable is `xi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartSection {
    pub k: i64,
    pub j: i64,
    pub s_u: UJet,
    pub s_v: UJet,
}

impl ChartSection {
    /// Rewrite the V-chart expression into `(z, u)`: a term
    /// `c * xi^a v^m` becomes `c * z^{k m - a} u^m`.
    pub fn s_v_in_u_coords(&self) -> UJet {
        let mut out = UJet::zero(self.s_v.trunc());
        for (m, p) in self.s_v.coeffs().iter().enumerate() {
            let mut rewritten = LaurentPoly::zero();
            for (a, c) in p.iter() {
                rewritten.add_term(self.k * m as i64 - a, c.clone());
            }
            out.set_coeff(m, rewritten);
        }
        out
    }
}

/// The standard section `s_U = z^{k-j} u`, `s_V = v`.
pub fn line_section(k: i64, j: i64) -> ChartSection {
    assert!(k >= 1, "base parameter k must be >= 1");
    let s_u = UJet::monomial(1, k - j, Scalar::one(), 1).expect("u-degree 1 fits trunc 1");
    let s_v = UJet::monomial(1, 0, Scalar::one(), 1).expect("v-degree 1 fits trunc 1");
    ChartSection { k, j, s_u, s_v }
}

/// Exact check of `z^j * s_U = s_V` after the coordinate change, compared
/// through the shorter of the two truncation orders.
pub fn verify_cocycle(s: &ChartSection) -> bool {
    let lhs = s.s_u.shift_z(s.j);
    let rhs = s.s_v_in_u_coords();
    let n = lhs.trunc().min(rhs.trunc());
    lhs.retruncated(n) == rhs.retruncated(n)
}

/// What one chart's expression does: regularity and identical vanishing
/// on the two coordinate loci. `vanishes_on_fiber` refers to `{z = 0}` on
/// U and `{xi = 0}` on V; `vanishes_on_zero_section` to `{u = 0}` and
/// `{v = 0}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChartReport {
    pub holomorphic: bool,
    pub is_monomial: bool,
    pub vanishes_on_fiber: bool,
    pub vanishes_on_zero_section: bool,
}

fn analyze(expr: &UJet) -> ChartReport {
    let support = expr.support();
    let holomorphic = expr.is_u_holomorphic();
    let is_monomial = support.len() == 1;
    let vanishes_on_fiber = !support.is_empty() && support.iter().all(|&(_, l)| l >= 1);
    let vanishes_on_zero_section = !support.is_empty() && support.iter().all(|&(i, _)| i >= 1);
    ChartReport {
        holomorphic,
        is_monomial,
        vanishes_on_fiber,
        vanishes_on_zero_section,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VanishingReport {
    pub u_chart: ChartReport,
    pub v_chart: ChartReport,
}

impl VanishingReport {
    /// True when the monomial inspection proves the section is regular
    /// and nonvanishing everywhere off the zero section. Requires both
    /// chart expressions to be single monomials; beyond monomials the
    /// zero locus is not a union of coordinate loci and this report does
    /// not attempt to describe it.
    pub fn trivializes_off_zero_section(&self) -> bool {
        let ok = |c: &ChartReport| c.holomorphic && c.is_monomial && !c.vanishes_on_fiber;
        ok(&self.u_chart) && ok(&self.v_chart)
    }
}

fn describe_chart(f: &mut fmt::Formatter<'_>, c: &ChartReport, fiber: &str, zs: &str) -> fmt::Result {
    if !c.holomorphic {
        return write!(f, "not holomorphic");
    }
    let mut loci = Vec::new();
    if c.vanishes_on_fiber {
        loci.push(fiber);
    }
    if c.vanishes_on_zero_section {
        loci.push(zs);
    }
    if loci.is_empty() {
        write!(f, "holomorphic, nonvanishing on coordinate loci")
    } else {
        write!(f, "holomorphic, vanishes on {}", loci.join(" and "))
    }
}

impl fmt::Display for VanishingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U chart: ")?;
        describe_chart(f, &self.u_chart, "{z=0}", "{u=0}")?;
        write!(f, "\nV chart: ")?;
        describe_chart(f, &self.v_chart, "{xi=0}", "{v=0}")?;
        write!(
            f,
            "\ntrivializes off the zero section: {}",
            if self.trivializes_off_zero_section() {
                "yes"
            } else {
                "not certified"
            }
        )
    }
}

pub fn vanishing_report(s: &ChartSection) -> VanishingReport {
    VanishingReport {
        u_chart: analyze(&s.s_u),
        v_chart: analyze(&s.s_v),
    }
}

/// Render a V-chart expression in its own coordinates `(xi, v)`, in the
/// same style the U-chart jets print with.
pub fn v_expr_string(expr: &UJet) -> String {
    use num_traits::Signed;

    if expr.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    let mut first = true;
    for (m, p) in expr.coeffs().iter().enumerate() {
        for (a, c) in p.iter() {
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    out.push('-');
                }
                first = false;
            } else if c.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut factors = Vec::new();
            if !mag.is_one() || (a == 0 && m == 0) {
                factors.push(crate::scalar::format_scalar(&mag));
            }
            match a {
                0 => {}
                1 => factors.push("xi".to_string()),
                _ => factors.push(format!("xi^{a}")),
            }
            match m {
                0 => {}
                1 => factors.push("v".to_string()),
                _ => factors.push(format!("v^{m}")),
            }
            out.push_str(&factors.join("*"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn standard_section_satisfies_cocycle_everywhere() {
        for k in 1..=5 {
            for j in -5..=5 {
                let s = line_section(k, j);
                assert!(verify_cocycle(&s), "k={k} j={j}");
            }
        }
    }

    #[test]
    fn degree_matching_case_trivializes() {
        let s = line_section(1, 1);
        assert_eq!(s.s_u, UJet::monomial(1, 0, Scalar::one(), 1).unwrap());
        let report = vanishing_report(&s);
        assert!(report.u_chart.holomorphic && report.v_chart.holomorphic);
        assert!(!report.u_chart.vanishes_on_fiber);
        assert!(report.u_chart.vanishes_on_zero_section);
        assert!(report.v_chart.vanishes_on_zero_section);
        assert!(report.trivializes_off_zero_section());
    }

    #[test]
    fn fiber_vanishing_is_flagged() {
        // k=2, j=0: s_U = z^2 u is identically zero along {z=0}
        let s = line_section(2, 0);
        assert!(verify_cocycle(&s));
        let report = vanishing_report(&s);
        assert!(report.u_chart.vanishes_on_fiber);
        assert!(!report.trivializes_off_zero_section());
    }

    #[test]
    fn non_holomorphic_chart_is_flagged() {
        // k=1, j=3: s_U = z^-2 u fails U-regularity but the cocycle holds
        let s = line_section(1, 3);
        assert!(verify_cocycle(&s));
        let report = vanishing_report(&s);
        assert!(!report.u_chart.holomorphic);
        assert!(report.v_chart.holomorphic);
        assert!(!report.trivializes_off_zero_section());
    }

    #[test]
    fn perturbed_section_fails_cocycle() {
        let mut s_u = UJet::zero(2);
        s_u.add_term(1, 0, int(1)).unwrap();
        s_u.add_term(2, 0, int(1)).unwrap();
        let mut s_v = UJet::zero(2);
        s_v.add_term(1, 0, int(1)).unwrap();
        let s = ChartSection { k: 1, j: 1, s_u, s_v };
        assert!(!verify_cocycle(&s));
    }

    #[test]
    fn constant_section_of_trivial_bundle() {
        let one = UJet::one(1);
        let s = ChartSection {
            k: 1,
            j: 0,
            s_u: one.clone(),
            s_v: one,
        };
        assert!(verify_cocycle(&s));
        let report = vanishing_report(&s);
        assert!(report.u_chart.holomorphic);
        assert!(!report.u_chart.vanishes_on_zero_section);
    }

    #[test]
    fn coordinate_rewrite_moves_exponents() {
        // xi^1 v^2 becomes z^{2k-1} u^2
        let mut s_v = UJet::zero(2);
        s_v.add_term(2, 1, int(3)).unwrap();
        let s = ChartSection {
            k: 3,
            j: 0,
            s_u: UJet::zero(2),
            s_v,
        };
        let rewritten = s.s_v_in_u_coords();
        assert_eq!(rewritten.support(), vec![(2, 5)]);
        assert_eq!(rewritten.coeff(2).coeff(5), int(3));
    }
}
