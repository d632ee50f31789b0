//! Matrix interchange formats.
//!
//! * Matrix Market coordinate real general, 1-based, 17 significant digits.
//! * Exact text: a `dim m n` line, then `i j value` lines, 1-based, where
//!   `value` is `p/q` or, for square-root entries, `sqrt(p/q)` / `-sqrt(p/q)`.
//! * JSON with both the exact text and a float rendering of each entry.

use std::fmt::Write as _;

use num_traits::Zero;
use serde::Serialize;

use crate::arith::{format_rational, parse_rational, Rational, SqrtRational};
use crate::catalog::ExactMatrix;
use crate::error::{Error, Result};
use crate::numeig::FloatTridiag;

pub const MATRIX_MARKET_HEADER: &str = "%%MatrixMarket matrix coordinate real general";

/// `p/q` for rational entries, `±sqrt(p/q)` otherwise.
pub fn format_surd(v: &SqrtRational) -> String {
    match v.to_rational() {
        Some(r) => format_rational(&r),
        None => {
            let body = format!("sqrt({})", format_rational(v.radicand()));
            if v.sign() < 0 {
                format!("-{body}")
            } else {
                body
            }
        }
    }
}

pub fn parse_surd(s: &str) -> Result<SqrtRational> {
    let s = s.trim();
    let (sign, rest) = match s.strip_prefix('-') {
        Some(rest) if rest.starts_with("sqrt(") => (-1, rest),
        _ => (1, s),
    };
    if let Some(inner) = rest.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
        let radicand = parse_rational(inner)?;
        if radicand < Rational::zero() {
            return Err(Error::parse("radicand", format!("negative radicand in {s:?}")));
        }
        return Ok(SqrtRational::new(sign, radicand));
    }
    Ok(SqrtRational::from_rational(&parse_rational(rest)?))
}

fn float_text(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_matrix_market(m: &ExactMatrix) -> String {
    let entries = m.entries();
    let mut out = String::new();
    writeln!(out, "{MATRIX_MARKET_HEADER}").unwrap();
    writeln!(out, "{} {} {}", m.dim(), m.dim(), entries.len()).unwrap();
    for (i, j, v) in entries {
        writeln!(out, "{} {} {}", i + 1, j + 1, float_text(v.to_f64())).unwrap();
    }
    out
}

/// Sparse float matrix read back from Matrix Market text.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatSparse {
    pub dim: usize,
    /// 0-based `(row, col, value)`.
    pub entries: Vec<(usize, usize, f64)>,
}

impl FloatSparse {
    /// Symmetric form of a zero-diagonal tridiagonal matrix.
    pub fn to_symmetric_tridiag(&self) -> Result<FloatTridiag> {
        let n = self.dim;
        let mut upper = vec![0.0; n.saturating_sub(1)];
        let mut lower = vec![0.0; n.saturating_sub(1)];
        for &(i, j, v) in &self.entries {
            if j == i + 1 {
                upper[i] = v;
            } else if i == j + 1 {
                lower[j] = v;
            } else if v != 0.0 {
                return Err(Error::InvalidParams(format!(
                    "entry ({}, {}) is not on a side diagonal",
                    i + 1,
                    j + 1
                )));
            }
        }
        FloatTridiag::symmetrized(&upper, &lower)
    }
}

fn parse_index(tok: Option<&str>, dim: usize, line: usize) -> Result<usize> {
    let tok = tok.ok_or_else(|| Error::parse(format!("line {line}"), "missing index"))?;
    let i: usize = tok
        .parse()
        .map_err(|_| Error::parse(format!("line {line}"), format!("bad index {tok:?}")))?;
    if i == 0 || i > dim {
        return Err(Error::parse(format!("line {line}"), format!("index {i} outside 1..={dim}")));
    }
    Ok(i - 1)
}

fn parse_size_line(line: &str, lineno: usize, count: usize) -> Result<Vec<usize>> {
    let nums: Vec<usize> = line
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::parse(format!("line {lineno}"), format!("bad size line {line:?}")))?;
    if nums.len() != count {
        return Err(Error::parse(format!("line {lineno}"), format!("expected {count} sizes, found {line:?}")));
    }
    if nums[0] != nums[1] {
        return Err(Error::parse(format!("line {lineno}"), "matrix is not square"));
    }
    Ok(nums)
}

pub fn read_matrix_market(text: &str) -> Result<FloatSparse> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, h)) if h.trim().eq_ignore_ascii_case(MATRIX_MARKET_HEADER) => {}
        _ => return Err(Error::parse("line 1", format!("expected header {MATRIX_MARKET_HEADER:?}"))),
    }
    let mut lines = lines.filter(|(_, l)| !l.trim_start().starts_with('%') && !l.trim().is_empty());
    let (lineno, size) = lines.next().ok_or_else(|| Error::parse("line 2", "missing size line"))?;
    let sizes = parse_size_line(size, lineno, 3)?;
    let (dim, nnz) = (sizes[0], sizes[2]);
    let mut entries = Vec::with_capacity(nnz);
    for (lineno, line) in lines {
        let mut toks = line.split_whitespace();
        let i = parse_index(toks.next(), dim, lineno)?;
        let j = parse_index(toks.next(), dim, lineno)?;
        let v = toks
            .next()
            .and_then(|t| t.parse::<f64>().ok())
            .ok_or_else(|| Error::parse(format!("line {lineno}"), "bad value"))?;
        entries.push((i, j, v));
    }
    if entries.len() != nnz {
        return Err(Error::parse("end of input", format!("expected {nnz} entries, found {}", entries.len())));
    }
    Ok(FloatSparse { dim, entries })
}

pub fn write_exact(m: &ExactMatrix) -> String {
    let mut out = String::new();
    writeln!(out, "dim {} {}", m.dim(), m.dim()).unwrap();
    for (i, j, v) in m.entries() {
        writeln!(out, "{} {} {}", i + 1, j + 1, format_surd(&v)).unwrap();
    }
    out
}

/// Exact entries read back from [`write_exact`] output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactSparse {
    pub dim: usize,
    pub entries: Vec<(usize, usize, SqrtRational)>,
}

pub fn read_exact(text: &str) -> Result<ExactSparse> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| !l.trim().is_empty());
    let (lineno, head) = lines.next().ok_or_else(|| Error::parse("line 1", "empty input"))?;
    let sizes = head
        .trim()
        .strip_prefix("dim")
        .ok_or_else(|| Error::parse(format!("line {lineno}"), "expected \"dim m n\""))?;
    let dim = parse_size_line(sizes, lineno, 2)?[0];
    let mut entries = Vec::new();
    for (lineno, line) in lines {
        let mut toks = line.split_whitespace();
        let i = parse_index(toks.next(), dim, lineno)?;
        let j = parse_index(toks.next(), dim, lineno)?;
        let v = toks
            .next()
            .ok_or_else(|| Error::parse(format!("line {lineno}"), "missing value"))?;
        let v = parse_surd(v).map_err(|e| Error::parse(format!("line {lineno}"), e.to_string()))?;
        if toks.next().is_some() {
            return Err(Error::parse(format!("line {lineno}"), "trailing tokens"));
        }
        entries.push((i, j, v));
    }
    Ok(ExactSparse { dim, entries })
}

impl ExactSparse {
    pub fn from_matrix(m: &ExactMatrix) -> Self {
        Self {
            dim: m.dim(),
            entries: m.entries(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct JsonEntry {
    pub row: usize,
    pub col: usize,
    pub exact: String,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct JsonMatrix {
    pub family: String,
    pub params: String,
    pub n: usize,
    pub dim: usize,
    pub entries: Vec<JsonEntry>,
}

pub fn write_json(m: &ExactMatrix, family: &str, params: &str, n: usize) -> String {
    let doc = JsonMatrix {
        family: family.into(),
        params: params.into(),
        n,
        dim: m.dim(),
        entries: m
            .entries()
            .into_iter()
            .map(|(i, j, v)| JsonEntry {
                row: i + 1,
                col: j + 1,
                exact: format_surd(&v),
                value: v.to_f64(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("matrix serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::catalog::{MatrixFamily, ParamSet};
    use crate::numeig::sym_tridiag_eigen;

    fn dual(g: Rational, d: Rational) -> ParamSet {
        ParamSet {
            gamma: Some(g),
            delta: Some(d),
            ..ParamSet::default()
        }
    }

    #[test]
    fn kac_matrix_market() {
        let text = write_matrix_market(&MatrixFamily::Kac.exact(2).unwrap());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], MATRIX_MARKET_HEADER);
        assert_eq!(lines[1], "3 3 4");
        assert_eq!(lines[2], "1 2 1.0000000000000000e0");
        assert_eq!(lines[3], "2 1 2.0000000000000000e0");
        let back = read_matrix_market(&text).unwrap();
        assert_eq!(back.entries, vec![(0, 1, 1.0), (1, 0, 2.0), (1, 2, 2.0), (2, 1, 1.0)]);
    }

    #[test]
    fn exact_round_trip() {
        let f = MatrixFamily::parse("double:DualHahnIII", &dual(rat(1, 2), rat(2, 3))).unwrap();
        let m = f.exact(3).unwrap();
        let text = write_exact(&m);
        assert!(text.contains("sqrt("));
        let back = read_exact(&text).unwrap();
        assert_eq!(back, ExactSparse::from_matrix(&m));
        let again = ExactMatrix::Symmetric(crate::specmat::SymTridiag::new(
            (0..m.dim() - 1)
                .map(|i| back.entries.iter().find(|(r, c, _)| *r == i && *c == i + 1).unwrap().2.clone())
                .collect(),
        ));
        assert_eq!(write_exact(&again), text);
    }

    #[test]
    fn surd_text() {
        for s in ["3", "-7/2", "sqrt(2)", "-sqrt(5/3)"] {
            assert_eq!(format_surd(&parse_surd(s).unwrap()), s);
        }
        assert_eq!(format_surd(&parse_surd("sqrt(9/4)").unwrap()), "3/2");
        assert!(parse_surd("sqrt(-2)").is_err());
        assert!(parse_surd("1.5").is_err());
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = read_exact("dim 3 3\n1 2 1\n2 9 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { ref position, .. } if position == "line 3"), "{err}");
        assert!(read_matrix_market("hello").is_err());
        assert!(read_matrix_market(&format!("{MATRIX_MARKET_HEADER}\n2 2 2\n1 2 1\n")).is_err());
    }

    #[test]
    fn nonsym_market_reimport_matches_spectrum() {
        let f = MatrixFamily::parse("nonsym:DualHahnI", &dual(rat(1, 2), rat(3, 2))).unwrap();
        let n = 6;
        let back = read_matrix_market(&write_matrix_market(&f.exact(n).unwrap())).unwrap();
        let m = back.to_symmetric_tridiag().unwrap();
        let eig = sym_tridiag_eigen(&m, false).unwrap();
        let closed = f.spectrum(n).unwrap().to_f64().unwrap();
        let scale = m.max_abs_entry();
        for (a, b) in eig.values.iter().zip(&closed) {
            assert!((a - b).abs() <= 1e-10 * scale, "{a} vs {b}");
        }
    }

    #[test]
    fn json_has_exact_and_float() {
        let m = MatrixFamily::Kac.exact(1).unwrap();
        let v: serde_json::Value = serde_json::from_str(&write_json(&m, "kac", "", 1)).unwrap();
        assert_eq!(v["dim"], 2);
        assert_eq!(v["entries"][0]["exact"], "1");
        assert_eq!(v["entries"][0]["value"], 1.0);
    }
}
