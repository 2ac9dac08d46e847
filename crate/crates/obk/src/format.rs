//! Plain-text serialization for transition matrices and gauge
//! transformations.
//!
//! A bundle record looks like
//!
//! ```text
//! bundle k=1 rank=2 trunc=2
//! entry 1 1
//! term u=0 z=3 c=1
//! entry 1 2
//! term u=1 z=2 c=-1/2
//! entry 2 2
//! term u=0 z=0 c=1
//! end
//! ```
//!
//! Rows and columns are 1-based, entries not listed are zero, and repeated
//! `entry`/`term` lines accumulate. Blank lines and lines starting with `#`
//! are ignored. A gauge file is four consecutive bundle records holding, in
//! order, `left`, `left_inv`, `right`, `right_inv`.
//!
//! The writers emit a canonical form: entries in row-major order with zero
//! entries skipped, terms sorted by u-degree then z-exponent, coefficients
//! in lowest terms with positive denominator, `\n` line endings and no
//! comments. Parsing a written file reproduces the original value, and
//! rewriting a parsed canonical file reproduces it byte for byte.

use std::fmt::Write as _;
use std::path::Path;

use crate::bundle::{GaugeTransform, TransitionMatrix};
use crate::error::{Error, Result};
use crate::jet::UJet;
use crate::matrix::Mat;
use crate::scalar::{format_scalar, parse_scalar};

struct RawBlock {
    k: i64,
    rank: usize,
    trunc: usize,
    entries: Mat<UJet>,
}

/// `key=value` field with a fixed key.
fn field<'a>(tok: Option<&'a str>, key: &str, line: usize) -> Result<&'a str> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing field {key}=...")))?;
    tok.strip_prefix(key)
        .and_then(|rest| rest.strip_prefix('='))
        .ok_or_else(|| Error::parse(line, format!("expected {key}=..., got {tok}")))
}

fn parse_int<T: std::str::FromStr>(s: &str, what: &str, line: usize) -> Result<T> {
    s.parse()
        .map_err(|_| Error::parse(line, format!("invalid {what}: {s}")))
}

fn no_more(mut toks: std::str::SplitWhitespace<'_>, line: usize) -> Result<()> {
    match toks.next() {
        None => Ok(()),
        Some(t) => Err(Error::parse(line, format!("unexpected trailing token: {t}"))),
    }
}

/// Parse one bundle record from `lines`, consuming up to and including its
/// `end` line. `lines` yields 1-based line numbers with comments and blanks
/// already skipped.
fn parse_block<'a, I>(lines: &mut I) -> Result<RawBlock>
where
    I: Iterator<Item = (usize, &'a str)>,
{
    let (line, header) = lines
        .next()
        .ok_or_else(|| Error::parse(0, "expected a bundle record, found end of input"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("bundle") {
        return Err(Error::parse(line, format!("expected bundle header, got: {header}")));
    }
    let k: i64 = parse_int(field(toks.next(), "k", line)?, "k", line)?;
    let rank: usize = parse_int(field(toks.next(), "rank", line)?, "rank", line)?;
    let trunc: usize = parse_int(field(toks.next(), "trunc", line)?, "trunc", line)?;
    no_more(toks, line)?;
    if k < 1 {
        return Err(Error::parse(line, format!("k must be >= 1, got {k}")));
    }
    if rank < 1 {
        return Err(Error::parse(line, format!("rank must be >= 1, got {rank}")));
    }

    let mut entries = Mat::filled(rank, rank, UJet::zero(trunc));
    let mut current: Option<(usize, usize)> = None;
    loop {
        let (line, text) = lines
            .next()
            .ok_or_else(|| Error::parse(0, "bundle record not closed: missing end"))?;
        let mut toks = text.split_whitespace();
        match toks.next() {
            Some("entry") => {
                let r: usize = parse_int(
                    toks.next()
                        .ok_or_else(|| Error::parse(line, "entry needs a row index"))?,
                    "row index",
                    line,
                )?;
                let c: usize = parse_int(
                    toks.next()
                        .ok_or_else(|| Error::parse(line, "entry needs a column index"))?,
                    "column index",
                    line,
                )?;
                no_more(toks, line)?;
                if r < 1 || r > rank || c < 1 || c > rank {
                    return Err(Error::parse(
                        line,
                        format!("entry ({r},{c}) outside 1..={rank}"),
                    ));
                }
                current = Some((r - 1, c - 1));
            }
            Some("term") => {
                let (r, c) = current
                    .ok_or_else(|| Error::parse(line, "term before any entry line"))?;
                let u: usize = parse_int(field(toks.next(), "u", line)?, "u-degree", line)?;
                let z: i64 = parse_int(field(toks.next(), "z", line)?, "z-exponent", line)?;
                let c_str = field(toks.next(), "c", line)?;
                let coeff = parse_scalar(c_str)
                    .map_err(|e| Error::parse(line, format!("bad coefficient: {e}")))?;
                no_more(toks, line)?;
                entries
                    .at_mut(r, c)
                    .add_term(u, z, coeff)
                    .map_err(|e| Error::parse(line, e.to_string()))?;
            }
            Some("end") => {
                no_more(toks, line)?;
                return Ok(RawBlock {
                    k,
                    rank,
                    trunc,
                    entries,
                });
            }
            Some(other) => {
                return Err(Error::parse(line, format!("unknown keyword: {other}")));
            }
            None => unreachable!("blank lines are filtered out"),
        }
    }
}

fn significant_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| {
            let t = l.trim_start();
            !t.is_empty() && !t.starts_with('#')
        })
}

fn expect_eof<'a, I>(lines: &mut I) -> Result<()>
where
    I: Iterator<Item = (usize, &'a str)>,
{
    match lines.next() {
        None => Ok(()),
        Some((line, text)) => Err(Error::parse(
            line,
            format!("unexpected content after end: {}", text.trim()),
        )),
    }
}

/// Parse a single bundle record; the whole input must be that one record.
pub fn parse_bundle(text: &str) -> Result<TransitionMatrix> {
    let mut lines = significant_lines(text);
    let block = parse_block(&mut lines)?;
    expect_eof(&mut lines)?;
    TransitionMatrix::new(block.k, block.entries)
}

/// Parse a gauge file: four bundle records, in order `left`, `left_inv`,
/// `right`, `right_inv`, with matching headers.
pub fn parse_gauge(text: &str) -> Result<GaugeTransform> {
    let mut lines = significant_lines(text);
    let blocks: Vec<RawBlock> = (0..4)
        .map(|_| parse_block(&mut lines))
        .collect::<Result<_>>()?;
    expect_eof(&mut lines)?;
    let [a, b, c, d]: [RawBlock; 4] = blocks.try_into().ok().expect("collected four blocks");
    for other in [&b, &c, &d] {
        if other.k != a.k {
            return Err(Error::KMismatch {
                left: a.k,
                right: other.k,
            });
        }
        if other.rank != a.rank {
            return Err(Error::DimensionMismatch(format!(
                "gauge blocks disagree on rank: {} vs {}",
                a.rank, other.rank
            )));
        }
        if other.trunc != a.trunc {
            return Err(Error::TruncMismatch {
                left: a.trunc,
                right: other.trunc,
            });
        }
    }
    GaugeTransform::new(a.k, a.entries, b.entries, c.entries, d.entries)
}

fn write_block(out: &mut String, k: i64, entries: &Mat<UJet>, trunc: usize) {
    writeln!(out, "bundle k={} rank={} trunc={}", k, entries.rows(), trunc).unwrap();
    for r in 0..entries.rows() {
        for c in 0..entries.cols() {
            let e = entries.at(r, c);
            if e.is_zero() {
                continue;
            }
            writeln!(out, "entry {} {}", r + 1, c + 1).unwrap();
            for (u, z) in e.support() {
                writeln!(
                    out,
                    "term u={u} z={z} c={}",
                    format_scalar(&e.coeff(u).coeff(z))
                )
                .unwrap();
            }
        }
    }
    out.push_str("end\n");
}

/// Canonical text form of a bundle record.
pub fn write_bundle(t: &TransitionMatrix) -> String {
    let mut out = String::new();
    write_block(&mut out, t.k(), t.entries(), t.trunc());
    out
}

/// Canonical text form of a gauge file (four bundle records).
pub fn write_gauge(g: &GaugeTransform) -> String {
    let mut out = String::new();
    for m in [g.left(), g.left_inv(), g.right(), g.right_inv()] {
        write_block(&mut out, g.k(), m, g.trunc());
    }
    out
}

fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

fn write_string(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

pub fn read_bundle_file(path: impl AsRef<Path>) -> Result<TransitionMatrix> {
    parse_bundle(&read_to_string(path.as_ref())?)
}

pub fn write_bundle_file(path: impl AsRef<Path>, t: &TransitionMatrix) -> Result<()> {
    write_string(path.as_ref(), &write_bundle(t))
}

pub fn read_gauge_file(path: impl AsRef<Path>) -> Result<GaugeTransform> {
    parse_gauge(&read_to_string(path.as_ref())?)
}

pub fn write_gauge_file(path: impl AsRef<Path>, g: &GaugeTransform) -> Result<()> {
    write_string(path.as_ref(), &write_gauge(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn jet(terms: &[(usize, i64, i64)], trunc: usize) -> UJet {
        let mut j = UJet::zero(trunc);
        for &(u, z, c) in terms {
            j.add_term(u, z, int(c)).unwrap();
        }
        j
    }

    #[test]
    fn parses_the_documented_example() {
        let text = "\
# a rank-2 example
bundle k=1 rank=2 trunc=2

entry 1 1
term u=0 z=3 c=1
entry 1 2
term u=1 z=2 c=-1/2
entry 2 2
term u=0 z=0 c=1
end
";
        let t = parse_bundle(text).unwrap();
        assert_eq!(t.k(), 1);
        assert_eq!(t.rank(), 2);
        assert_eq!(t.trunc(), 2);
        assert_eq!(*t.entry(0, 0), jet(&[(0, 3, 1)], 2));
        let mut e01 = UJet::zero(2);
        e01.add_term(1, 2, rat(-1, 2)).unwrap();
        assert_eq!(*t.entry(0, 1), e01);
        assert!(t.entry(1, 0).is_zero());
        assert_eq!(*t.entry(1, 1), jet(&[(0, 0, 1)], 2));
    }

    #[test]
    fn write_then_parse_is_identity() {
        let t = TransitionMatrix::new(
            2,
            Mat::from_rows(vec![
                vec![jet(&[(0, 4, 1), (1, 1, -3), (2, -1, 5)], 2), jet(&[(1, 0, 7)], 2)],
                vec![UJet::zero(2), jet(&[(0, -2, 2)], 2)],
            ])
            .unwrap(),
        )
        .unwrap();
        let text = write_bundle(&t);
        let back = parse_bundle(&text).unwrap();
        assert_eq!(back, t);
        // and rewriting the canonical text is byte-stable
        assert_eq!(write_bundle(&back), text);
    }

    #[test]
    fn repeated_terms_accumulate() {
        let text = "\
bundle k=1 rank=1 trunc=0
entry 1 1
term u=0 z=0 c=1/3
term u=0 z=0 c=2/3
end
";
        let t = parse_bundle(text).unwrap();
        assert!(t.entry(0, 0).is_one());
    }

    #[test]
    fn error_lines_are_reported() {
        let cases: &[(&str, usize, &str)] = &[
            ("entry 1 1\nend\n", 1, "expected bundle header"),
            ("bundle k=1 rank=1 trunc=0\nterm u=0 z=0 c=1\nend\n", 2, "term before any entry"),
            ("bundle k=1 rank=1 trunc=0\nentry 1 1\n", 0, "missing end"),
            ("bundle k=1 rank=1 trunc=0\nentry 2 1\nend\n", 2, "outside"),
            ("bundle k=1 rank=1 trunc=0\nentry 1 1\nterm u=1 z=0 c=1\nend\n", 3, "exceeds truncation"),
            ("bundle k=1 rank=1 trunc=0\nwhat 1\nend\n", 2, "unknown keyword"),
            ("bundle k=0 rank=1 trunc=0\nend\n", 1, "k must be >= 1"),
            ("bundle k=1 rank=1 trunc=0\nend\nbundle", 3, "after end"),
            ("bundle k=1 rank=1\nend\n", 1, "missing field trunc"),
            ("bundle k=1 rank=1 trunc=0 x=2\nend\n", 1, "trailing token"),
            ("bundle k=1 rank=1 trunc=0\nentry 1 1\nterm u=0 z=0 c=1/0\nend\n", 3, "bad coefficient"),
        ];
        for (text, want_line, want_msg) in cases {
            match parse_bundle(text) {
                Err(Error::Parse { line, msg }) => {
                    assert_eq!(line, *want_line, "line for input {text:?}: {msg}");
                    assert!(
                        msg.contains(want_msg),
                        "message {msg:?} should contain {want_msg:?}"
                    );
                }
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn empty_bundle_is_rejected_for_determinant() {
        // all-zero matrix has zero determinant
        let text = "bundle k=1 rank=2 trunc=0\nend\n";
        assert!(matches!(
            parse_bundle(text),
            Err(Error::NonMonomialDeterminant { .. })
        ));
    }

    #[test]
    fn gauge_roundtrip() {
        let coef = jet(&[(1, -2, 1)], 2);
        let g = GaugeTransform::elementary_left(1, 2, 1, 0, &coef).unwrap();
        let text = write_gauge(&g);
        let back = parse_gauge(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(write_gauge(&back), text);
    }

    #[test]
    fn gauge_blocks_must_agree() {
        let id1 = "bundle k=1 rank=1 trunc=0\nentry 1 1\nterm u=0 z=0 c=1\nend\n";
        let id2 = "bundle k=2 rank=1 trunc=0\nentry 1 1\nterm u=0 z=0 c=1\nend\n";
        let text = format!("{id1}{id1}{id1}{id2}");
        assert_eq!(
            parse_gauge(&text),
            Err(Error::KMismatch { left: 1, right: 2 })
        );
    }

    #[test]
    fn gauge_file_validates_inverses() {
        let id = "bundle k=1 rank=1 trunc=0\nentry 1 1\nterm u=0 z=0 c=1\nend\n";
        let two = "bundle k=1 rank=1 trunc=0\nentry 1 1\nterm u=0 z=0 c=2\nend\n";
        let text = format!("{two}{id}{id}{id}");
        assert!(matches!(
            parse_gauge(&text),
            Err(Error::InverseMismatch { side: "left", .. })
        ));
    }

    #[test]
    fn file_helpers_map_io_errors() {
        let err = read_bundle_file("/nonexistent/path/x.obk");
        assert!(matches!(err, Err(Error::Io { .. })));
    }
}
