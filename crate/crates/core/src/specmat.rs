//! Two-diagonal matrices with closed-form spectra: the Sylvester–Kac matrix,
//! its two-parameter extensions, and the matrices of the doubled systems
//! together with their eigenvector matrices.
//!
//! Spectra are certified exactly: the characteristic polynomial of a
//! two-diagonal matrix depends only on the products `b_i c_i`, and it is
//! compared coefficient-wise with `λ^z ∏ (λ² − ε_k²)`.

use num_traits::{Signed, Zero};

use crate::arith::{checked_div, format_rational, from_usize, int, rat, Rational, SqrtRational, SurdSum};
use crate::doubles::DoubleCase;
use crate::error::{Error, Result};
use crate::polyfam::{DualHahnParams, FamilyParams, HahnParams, RacahParams, RacahTruncation};

/// Zero-diagonal tridiagonal matrix given by its superdiagonal `b` and
/// subdiagonal `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoDiagonal {
    upper: Vec<Rational>,
    lower: Vec<Rational>,
}

impl TwoDiagonal {
    pub fn new(upper: Vec<Rational>, lower: Vec<Rational>) -> Result<Self> {
        if upper.len() != lower.len() {
            return Err(Error::InvalidParams(format!(
                "superdiagonal has {} entries, subdiagonal {}",
                upper.len(),
                lower.len()
            )));
        }
        Ok(Self { upper, lower })
    }

    /// Superdiagonal `products[i]`, subdiagonal all ones; diagonally similar
    /// to every two-diagonal matrix with the same products.
    pub fn from_products(products: Vec<Rational>) -> Self {
        let lower = vec![int(1); products.len()];
        Self { upper: products, lower }
    }

    pub fn dim(&self) -> usize {
        self.upper.len() + 1
    }

    pub fn upper(&self) -> &[Rational] {
        &self.upper
    }

    pub fn lower(&self) -> &[Rational] {
        &self.lower
    }

    pub fn products(&self) -> Vec<Rational> {
        self.upper.iter().zip(&self.lower).map(|(b, c)| b * c).collect()
    }

    pub fn max_abs_entry(&self) -> Rational {
        self.upper
            .iter()
            .chain(&self.lower)
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

/// Symmetric zero-diagonal tridiagonal matrix with off-diagonal entries of
/// the form `±√r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymTridiag {
    off: Vec<SqrtRational>,
}

impl SymTridiag {
    pub fn new(off: Vec<SqrtRational>) -> Self {
        Self { off }
    }

    pub fn dim(&self) -> usize {
        self.off.len() + 1
    }

    pub fn off(&self) -> &[SqrtRational] {
        &self.off
    }

    pub fn off_f64(&self) -> Vec<f64> {
        self.off.iter().map(SqrtRational::to_f64).collect()
    }

    /// Back to a two-diagonal matrix through the diagonal similarity that
    /// puts `M_i²` above the diagonal and ones below it.
    pub fn desymmetrize(&self) -> TwoDiagonal {
        TwoDiagonal::from_products(self.off.iter().map(SqrtRational::square).collect())
    }
}

/// Multiset `{0}^z ∪ {±ε_k}` stored through the squares `ε_k²`, which may be
/// negative (imaginary pairs) for parameters outside the real regime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    zeros: usize,
    squares: Vec<Rational>,
}

impl Spectrum {
    pub fn new(zeros: usize, squares: Vec<Rational>) -> Self {
        Self { zeros, squares }
    }

    pub fn dim(&self) -> usize {
        self.zeros + 2 * self.squares.len()
    }

    pub fn zeros(&self) -> usize {
        self.zeros
    }

    pub fn squares(&self) -> &[Rational] {
        &self.squares
    }

    pub fn is_real(&self) -> bool {
        self.squares.iter().all(|s| !s.is_negative())
    }

    /// Sorted eigenvalues; fails when some pair is imaginary.
    pub fn entries(&self) -> Result<Vec<SqrtRational>> {
        let mut out = Vec::with_capacity(self.dim());
        for s in &self.squares {
            let e = SqrtRational::sqrt(s.clone()).ok_or_else(|| {
                Error::InadmissibleParams(format!("eigenvalue square {} is negative", format_rational(s)))
            })?;
            out.push(-e.clone());
            out.push(e);
        }
        out.extend(std::iter::repeat_n(SqrtRational::zero(), self.zeros));
        out.sort();
        Ok(out)
    }

    pub fn to_f64(&self) -> Result<Vec<f64>> {
        Ok(self.entries()?.iter().map(SqrtRational::to_f64).collect())
    }

    /// Coefficients (ascending powers) of `λ^z ∏ (λ² − ε_k²)`.
    pub fn charpoly(&self) -> Vec<Rational> {
        let mut poly = vec![int(1)];
        for s in &self.squares {
            let mut next = vec![Rational::zero(); poly.len() + 2];
            for (i, c) in poly.iter().enumerate() {
                next[i + 2] += c;
                next[i] -= c * s;
            }
            poly = next;
        }
        let mut out = vec![Rational::zero(); self.zeros];
        out.extend(poly);
        out
    }
}

/// `det(λI − A)` in ascending powers, from the minor recurrence
/// `p_k = λ p_{k−1} − b_{k−2} c_{k−2} p_{k−2}`.
pub fn charpoly(m: &TwoDiagonal) -> Vec<Rational> {
    charpoly_from_products(&m.products())
}

pub fn charpoly_from_products(products: &[Rational]) -> Vec<Rational> {
    let mut prev: Vec<Rational> = Vec::new();
    let mut cur = vec![int(1)];
    for k in 0..=products.len() {
        let mut next = vec![Rational::zero(); cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c;
        }
        if k > 0 {
            for (i, c) in prev.iter().enumerate() {
                next[i] -= c * &products[k - 1];
            }
        }
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

pub fn verify_spectrum_exact(m: &TwoDiagonal, s: &Spectrum) -> bool {
    m.dim() == s.dim() && charpoly(m) == s.charpoly()
}

/// Symmetric form with off-diagonal `√(b_i c_i)`.
pub fn symmetrize(m: &TwoDiagonal) -> Result<SymTridiag> {
    m.products()
        .into_iter()
        .enumerate()
        .map(|(index, p)| SqrtRational::sqrt(p).ok_or(Error::NegativeProduct { index }))
        .collect::<Result<Vec<_>>>()
        .map(SymTridiag::new)
}

/// `C_{N+1}`: superdiagonal `1..N`, subdiagonal `N..1`, eigenvalues
/// `−N, −N+2, …, N`.
pub fn sylvester_kac(n: usize) -> (TwoDiagonal, Spectrum) {
    let upper = (1..=n).map(from_usize).collect();
    let lower = (1..=n).rev().map(from_usize).collect();
    let squares = (0..=n)
        .map(|j| n as i64 - 2 * j as i64)
        .filter(|&e| e > 0)
        .map(|e| int(e * e))
        .collect();
    (TwoDiagonal { upper, lower }, Spectrum::new((n + 1) % 2, squares))
}

/// `C_{2N+1}(γ, δ)` with eigenvalues `0, ±2√(k(γ+δ+k+1))`.
pub fn extended_kac_odd(n: usize, gamma: &Rational, delta: &Rational) -> (TwoDiagonal, Spectrum) {
    let mut upper = Vec::with_capacity(2 * n);
    let mut lower = Vec::with_capacity(2 * n);
    for j in 0..n {
        let jj = from_usize(j);
        let big = from_usize(n);
        upper.push(int(2) * (gamma + &jj + int(1)));
        upper.push(int(2) * (&jj + int(1)));
        lower.push(int(2) * (&big - &jj));
        lower.push(int(2) * (delta + &big - &jj));
    }
    let squares = (1..=n)
        .map(|k| {
            let k = from_usize(k);
            int(4) * &k * (gamma + delta + &k + int(1))
        })
        .collect();
    (TwoDiagonal { upper, lower }, Spectrum::new(1, squares))
}

/// `C_{2N}(γ, δ)` with eigenvalues `±2√((γ+k)(δ+k))`.
pub fn extended_kac_even(n: usize, gamma: &Rational, delta: &Rational) -> (TwoDiagonal, Spectrum) {
    let mut upper = Vec::with_capacity(2 * n);
    let mut lower = Vec::with_capacity(2 * n);
    let big = from_usize(n);
    for j in 0..n {
        let jj = from_usize(j);
        upper.push(int(2) * (gamma + &jj + int(1)));
        lower.push(int(2) * (delta + &big - &jj));
        if j + 1 < n {
            upper.push(int(2) * (&jj + int(1)));
            lower.push(int(2) * (&big - &jj - int(1)));
        }
    }
    let squares = (1..=n)
        .map(|k| {
            let k = from_usize(k);
            int(4) * (gamma + &k) * (delta + &k)
        })
        .collect();
    (TwoDiagonal { upper, lower }, Spectrum::new(0, squares))
}

/// Cases for which a matrix and an eigenvector matrix are built. Racah
/// matrices exist only for Racah I and III with `α + 1 = −N`.
pub fn has_matrix(case: DoubleCase, params: &FamilyParams) -> bool {
    match case {
        DoubleCase::RacahII | DoubleCase::RacahIV => false,
        DoubleCase::RacahI | DoubleCase::RacahIII => {
            matches!(params, FamilyParams::Racah(p) if p.truncation() == RacahTruncation::Alpha)
        }
        _ => true,
    }
}

fn require_matrix(case: DoubleCase, params: &FamilyParams) -> Result<()> {
    if case.family() != params.family() {
        return Err(Error::FamilyMismatch {
            expected: case.family().name(),
            found: params.family().name(),
        });
    }
    if !has_matrix(case, params) {
        return Err(Error::Unsupported(format!(
            "no two-diagonal matrix for {case} with these parameters (Racah needs case I or III with α+1 = −N)"
        )));
    }
    Ok(())
}

fn swapped(p: &HahnParams) -> HahnParams {
    HahnParams::new(p.beta.clone(), p.alpha.clone(), p.n_max)
}

fn hahn_one_products(p: &HahnParams) -> Result<Vec<Rational>> {
    let (a, b, big) = (&p.alpha, &p.beta, from_usize(p.n_max));
    let s = a + b;
    let mut out = Vec::with_capacity(2 * p.n_max + 1);
    for k in 0..=p.n_max {
        let k = from_usize(k);
        let num = (&k + a + int(1)) * (&k + &s + int(1)) * (&k + &s + int(2) + &big);
        let den = (int(2) * &k + &s + int(1)) * (int(2) * &k + &s + int(2));
        out.push(checked_div(&num, &den, "Hahn I matrix entry")?);
        if k < big {
            let num = (&k + b + int(1)) * (&k + int(1)) * (&big - &k);
            let den = (int(2) * &k + &s + int(2)) * (int(2) * &k + &s + int(3));
            out.push(checked_div(&num, &den, "Hahn I matrix entry")?);
        }
    }
    Ok(out)
}

fn hahn_two_products(p: &HahnParams) -> Result<Vec<Rational>> {
    let (a, b, big) = (&p.alpha, &p.beta, from_usize(p.n_max));
    let s = a + b;
    let mut out = Vec::with_capacity(2 * p.n_max);
    for k in 0..p.n_max {
        let k = from_usize(k);
        let num = (&k + a + int(1)) * (&k + &s + int(1)) * (&big - &k);
        let den = (int(2) * &k + &s + int(1)) * (int(2) * &k + &s + int(2));
        out.push(checked_div(&num, &den, "Hahn II matrix entry")?);
        let num = (&k + b + int(1)) * (&k + &s + int(2) + &big) * (&k + int(1));
        let den = (int(2) * &k + &s + int(2)) * (int(2) * &k + &s + int(3));
        out.push(checked_div(&num, &den, "Hahn II matrix entry")?);
    }
    Ok(out)
}

fn racah_one_products(p: &RacahParams) -> Result<Vec<Rational>> {
    let (b, g, d, big) = (&p.beta, &p.gamma, &p.delta, from_usize(p.n_max()));
    let mut out = Vec::with_capacity(2 * p.n_max() + 1);
    for k in 0..=p.n_max() {
        let k = from_usize(k);
        let num = (&big - b - &k) * (g + int(1) + &k) * (&big + d + int(1) - &k) * (&k + b + int(1));
        let den = (&big - b - int(2) * &k) * (int(2) * &k - &big + int(1) + b);
        out.push(checked_div(&num, &den, "Racah I matrix entry")?);
        if k < big {
            let num = (g + &big - b - &k) * (&k + int(1)) * (&big - &k) * (&k + b + d + int(2));
            let den = (&big - b - int(2) * &k - int(2)) * (int(2) * &k - &big + int(1) + b);
            out.push(checked_div(&num, &den, "Racah I matrix entry")?);
        }
    }
    Ok(out)
}

fn racah_three_products(p: &RacahParams) -> Result<Vec<Rational>> {
    let (b, g, d, big) = (&p.beta, &p.gamma, &p.delta, from_usize(p.n_max()));
    let mut out = Vec::with_capacity(2 * p.n_max());
    for k in 0..p.n_max() {
        let k = from_usize(k);
        let num = (&k + g + int(1)) * (-&big + b + &k) * (&big - &k) * (&k + b + d + int(1));
        let den = (&big - b - int(2) * &k) * (&big - b - int(2) * &k - int(1));
        out.push(checked_div(&num, &den, "Racah III matrix entry")?);
        let num = (g + &big - b - &k) * (&k + int(1)) * (&k + b + int(1)) * (&k - d - &big);
        let den = (&big - b - int(2) * &k - int(2)) * (&big - b - int(2) * &k - int(1));
        out.push(checked_div(&num, &den, "Racah III matrix entry")?);
    }
    Ok(out)
}

/// Squared off-diagonal entries `M_i²` of the doubled system's matrix. The
/// parameters are those of the matrix formula; for dual Hahn III and
/// Racah I these are the family parameters with `δ` lowered by one.
pub fn double_products(case: DoubleCase, params: &FamilyParams) -> Result<Vec<Rational>> {
    use DoubleCase::*;
    require_matrix(case, params)?;
    match params {
        FamilyParams::DualHahn(p) => {
            let (g, d, big) = (&p.gamma, &p.delta, from_usize(p.n_max));
            let mut out = Vec::new();
            let even_len = if case == DualHahnIII { p.n_max + 1 } else { p.n_max };
            for k in 0..even_len {
                let k = from_usize(k);
                out.push(match case {
                    DualHahnI => (&k + g + int(1)) * (&big - &k),
                    DualHahnII => (&big + d - &k) * (&big - &k),
                    _ => (&k + g + int(1)) * (&big + d + int(1) - &k),
                });
                if k < big {
                    out.push(match case {
                        DualHahnI => (&k + int(1)) * (&big + d - &k),
                        DualHahnII => (&k + int(1)) * (&k + g + int(1)),
                        _ => (&k + int(1)) * (&big - &k),
                    });
                }
            }
            Ok(out)
        }
        FamilyParams::Hahn(p) => match case {
            HahnI => hahn_one_products(p),
            HahnII => hahn_two_products(p),
            HahnIII => hahn_one_products(&swapped(p)),
            _ => hahn_two_products(&swapped(p)),
        },
        FamilyParams::Racah(p) => match case {
            RacahI => racah_one_products(p),
            _ => racah_three_products(p),
        },
        FamilyParams::Krawtchouk(_) => unreachable!("rejected by require_matrix"),
    }
}

/// `ε_k²` in the column order of the eigenvector matrix: `k = 0..=N` for
/// the even-dimensional cases, `k = 1..=N` (plus one zero) otherwise.
pub fn double_spectrum(case: DoubleCase, params: &FamilyParams) -> Result<Spectrum> {
    use DoubleCase::*;
    require_matrix(case, params)?;
    let n = params.n_max();
    let (zeros, ks): (usize, Vec<usize>) = if is_even_layout(case) {
        (0, (0..=n).collect())
    } else {
        (1, (1..=n).collect())
    };
    let squares = ks
        .into_iter()
        .map(|k| {
            let k = from_usize(k);
            match params {
                FamilyParams::DualHahn(p) => {
                    let (g, d) = (&p.gamma, &p.delta);
                    match case {
                        DualHahnI => &k * (&k + g + d + int(1)),
                        DualHahnII => &k * (g + d + int(1) + int(2) * from_usize(n) - &k),
                        _ => (&k + g + int(1)) * (&k + d + int(1)),
                    }
                }
                FamilyParams::Hahn(p) => match case {
                    HahnI => &k + &p.alpha + int(1),
                    HahnIII => &k + &p.beta + int(1),
                    _ => k,
                },
                FamilyParams::Racah(p) => match case {
                    RacahI => (&k + &p.gamma + int(1)) * (&k + &p.delta + int(1)),
                    _ => &k * (&k + &p.gamma + &p.delta + int(1)),
                },
                FamilyParams::Krawtchouk(_) => unreachable!("rejected by require_matrix"),
            }
        })
        .collect();
    Ok(Spectrum::new(zeros, squares))
}

fn is_even_layout(case: DoubleCase) -> bool {
    use DoubleCase::*;
    matches!(case, DualHahnIII | HahnI | HahnIII | RacahI)
}

/// The symmetric matrix of a doubled system with its spectrum. Fails with
/// `InadmissibleParams` when an entry would be imaginary; the product form
/// from [`double_products`] still certifies the spectrum there.
pub fn double_matrix(case: DoubleCase, params: &FamilyParams) -> Result<(SymTridiag, Spectrum)> {
    let off = double_products(case, params)?
        .into_iter()
        .enumerate()
        .map(|(i, p)| {
            SqrtRational::sqrt(p.clone()).ok_or_else(|| {
                Error::InadmissibleParams(format!("M_{i}² = {} is negative", format_rational(&p)))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((SymTridiag::new(off), double_spectrum(case, params)?))
}

/// The integer-friendly non-symmetric forms of the dual Hahn matrices.
///
/// The dual Hahn II form has the products of the symmetric matrix with
/// `γ` and `δ` exchanged; its spectrum is symmetric in `γ, δ`.
pub fn nonsymmetric_form(case: DoubleCase, params: &DualHahnParams) -> Result<TwoDiagonal> {
    let (g, d, n) = (&params.gamma, &params.delta, params.n_max);
    let big = from_usize(n);
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    match case {
        DoubleCase::DualHahnI => {
            for j in 0..n {
                let j = from_usize(j);
                upper.push(g + &j + int(1));
                upper.push(&j + int(1));
                lower.push(&big - &j);
                lower.push(&big - &j + d);
            }
        }
        DoubleCase::DualHahnII => {
            for j in 0..n {
                let j = from_usize(j);
                upper.push(g + &big - &j);
                upper.push(&j + int(1));
                lower.push(&big - &j);
                lower.push(d + &j + int(1));
            }
        }
        DoubleCase::DualHahnIII => {
            for j in 0..=n {
                let jj = from_usize(j);
                upper.push(g + &jj + int(1));
                lower.push(d + &big + int(1) - &jj);
                if j < n {
                    upper.push(&jj + int(1));
                    lower.push(&big - &jj);
                }
            }
        }
        other => {
            return Err(Error::Unsupported(format!(
                "non-symmetric form is only defined for the dual Hahn cases, not {other}"
            )))
        }
    }
    TwoDiagonal::new(upper, lower)
}

/// Orthogonal matrix whose columns are the eigenvectors of the doubled
/// system's matrix; rows `2n` and `2n+1` carry the two normalized families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigvecMatrix {
    case: DoubleCase,
    entries: Vec<Vec<SqrtRational>>,
    eigenvalues: Vec<SqrtRational>,
}

/// One column of a doubled eigenvector matrix.
struct Column {
    index: usize,
    /// grid point of the family in the even rows
    even_point: usize,
    /// grid point of the partner family in the odd rows, if any
    odd_point: Option<usize>,
    odd_sign: i8,
    half: bool,
    eigenvalue: SqrtRational,
}

impl EigvecMatrix {
    pub fn case(&self) -> DoubleCase {
        self.case
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> &SqrtRational {
        &self.entries[row][col]
    }

    pub fn rows(&self) -> &[Vec<SqrtRational>] {
        &self.entries
    }

    /// Diagonal of `D`, aligned with the columns.
    pub fn eigenvalues(&self) -> &[SqrtRational] {
        &self.eigenvalues
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(SqrtRational::to_f64).collect())
            .collect()
    }

    /// `max |UᵀU − I|` in floating point.
    pub fn column_orthonormality_error(&self) -> f64 {
        gram_error(&self.to_f64(), true)
    }

    /// `max |UUᵀ − I|` in floating point.
    pub fn row_orthonormality_error(&self) -> f64 {
        gram_error(&self.to_f64(), false)
    }

    /// `max |MU − UD|` in floating point.
    pub fn residual(&self, m: &SymTridiag) -> f64 {
        let u = self.to_f64();
        let off = m.off_f64();
        let d: Vec<f64> = self.eigenvalues.iter().map(SqrtRational::to_f64).collect();
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let mut v = -u[i][j] * d[j];
                if i > 0 {
                    v += off[i - 1] * u[i - 1][j];
                }
                if i + 1 < n {
                    v += off[i] * u[i + 1][j];
                }
                worst = worst.max(v.abs());
            }
        }
        worst
    }

    /// `MU = UD` and `UᵀU = I` checked entry by entry in exact surd
    /// arithmetic.
    pub fn verify_exact(&self, m: &SymTridiag) -> bool {
        let n = self.dim();
        if m.dim() != n {
            return false;
        }
        let off = m.off();
        for i in 0..n {
            for j in 0..n {
                let mut sum = SurdSum::new();
                sum.add_surd(&-(&self.entries[i][j] * &self.eigenvalues[j]));
                if i > 0 {
                    sum.add_surd(&(&off[i - 1] * &self.entries[i - 1][j]));
                }
                if i + 1 < n {
                    sum.add_surd(&(&off[i] * &self.entries[i + 1][j]));
                }
                if !sum.is_zero() {
                    return false;
                }
            }
        }
        for a in 0..n {
            for b in a..n {
                let mut sum = SurdSum::new();
                for row in &self.entries {
                    sum.add_surd(&(&row[a] * &row[b]));
                }
                if a == b {
                    sum.add_rational(int(-1));
                }
                if !sum.is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

fn gram_error(u: &[Vec<f64>], columns: bool) -> f64 {
    let n = u.len();
    let mut worst = 0.0f64;
    for a in 0..n {
        for b in a..n {
            let dot: f64 = (0..n)
                .map(|k| if columns { u[k][a] * u[k][b] } else { u[a][k] * u[b][k] })
                .sum();
            let target = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((dot - target).abs());
        }
    }
    worst
}

/// Even-row family, odd-row family and whether rows carry the `(−1)^n`
/// factor.
fn eigvec_families(case: DoubleCase, params: &FamilyParams) -> Result<(FamilyParams, FamilyParams, bool)> {
    use DoubleCase::*;
    let one = int(1);
    Ok(match params {
        FamilyParams::DualHahn(p) => {
            let (g, d, n) = (&p.gamma, &p.delta, p.n_max);
            let short = n.saturating_sub(1);
            let (even, odd, alternating) = match case {
                DualHahnI => (
                    DualHahnParams::new(g.clone(), d.clone(), n),
                    DualHahnParams::new(g + &one, d + &one, short),
                    true,
                ),
                DualHahnII => (
                    DualHahnParams::new(g.clone(), d.clone(), n),
                    DualHahnParams::new(g.clone(), d.clone(), short),
                    false,
                ),
                _ => (
                    DualHahnParams::new(g.clone(), d + &one, n),
                    DualHahnParams::new(g + &one, d.clone(), n),
                    true,
                ),
            };
            (FamilyParams::DualHahn(even), FamilyParams::DualHahn(odd), alternating)
        }
        FamilyParams::Hahn(p) => {
            let p = if matches!(case, HahnIII | HahnIV) { swapped(p) } else { p.clone() };
            let n = if matches!(case, HahnI | HahnIII) { p.n_max } else { p.n_max.saturating_sub(1) };
            let odd = HahnParams::new(&p.alpha + &one, p.beta.clone(), n);
            (FamilyParams::Hahn(p), FamilyParams::Hahn(odd), true)
        }
        FamilyParams::Racah(p) => {
            let (a, b, g, d) = (&p.alpha, &p.beta, &p.gamma, &p.delta);
            let (even, odd) = match case {
                RacahI => (
                    RacahParams::new(a.clone(), b.clone(), g.clone(), d + &one, RacahTruncation::Alpha)?,
                    RacahParams::new(a.clone(), b + &one, g + &one, d.clone(), RacahTruncation::Alpha)?,
                ),
                _ => (
                    p.clone(),
                    RacahParams::new(a + &one, b.clone(), g + &one, d + &one, RacahTruncation::Alpha)?,
                ),
            };
            (FamilyParams::Racah(even), FamilyParams::Racah(odd), true)
        }
        FamilyParams::Krawtchouk(_) => unreachable!("rejected by require_matrix"),
    })
}

fn columns(case: DoubleCase, n: usize, spectrum: &Spectrum) -> Result<Vec<Column>> {
    let eps = spectrum
        .squares()
        .iter()
        .map(|s| {
            SqrtRational::sqrt(s.clone()).ok_or_else(|| {
                Error::InadmissibleParams(format!("eigenvalue square {} is negative", format_rational(s)))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut cols = Vec::new();
    if is_even_layout(case) {
        for x in 0..=n {
            cols.push(Column {
                index: n - x,
                even_point: x,
                odd_point: Some(x),
                odd_sign: -1,
                half: true,
                eigenvalue: -eps[x].clone(),
            });
            cols.push(Column {
                index: n + x + 1,
                even_point: x,
                odd_point: Some(x),
                odd_sign: 1,
                half: true,
                eigenvalue: eps[x].clone(),
            });
        }
        return Ok(cols);
    }
    if case == DoubleCase::DualHahnII {
        for x in 0..n {
            let e = &eps[n - x - 1];
            cols.push(Column {
                index: x,
                even_point: x,
                odd_point: Some(x),
                odd_sign: -1,
                half: true,
                eigenvalue: -e.clone(),
            });
            cols.push(Column {
                index: 2 * n - x,
                even_point: x,
                odd_point: Some(x),
                odd_sign: 1,
                half: true,
                eigenvalue: e.clone(),
            });
        }
        cols.push(Column {
            index: n,
            even_point: n,
            odd_point: None,
            odd_sign: 0,
            half: false,
            eigenvalue: SqrtRational::zero(),
        });
        return Ok(cols);
    }
    for x in 1..=n {
        let e = &eps[x - 1];
        cols.push(Column {
            index: n - x,
            even_point: x,
            odd_point: Some(x - 1),
            odd_sign: -1,
            half: true,
            eigenvalue: -e.clone(),
        });
        cols.push(Column {
            index: n + x,
            even_point: x,
            odd_point: Some(x - 1),
            odd_sign: 1,
            half: true,
            eigenvalue: e.clone(),
        });
    }
    cols.push(Column {
        index: n,
        even_point: 0,
        odd_point: None,
        odd_sign: 0,
        half: false,
        eigenvalue: SqrtRational::zero(),
    });
    Ok(cols)
}

/// Eigenvector matrix of [`double_matrix`], built from normalized
/// polynomials with the sign pattern of each case.
pub fn eigvec_matrix(case: DoubleCase, params: &FamilyParams) -> Result<EigvecMatrix> {
    let spectrum = double_spectrum(case, params)?;
    let n = params.n_max();
    let (even, odd, alternating) = eigvec_families(case, params)?;
    let dim = spectrum.dim();
    let half = SqrtRational::new(1, rat(1, 2));
    let even = even.normalized_table()?;
    let odd = odd.normalized_table()?;
    let mut entries = vec![vec![SqrtRational::zero(); dim]; dim];
    let mut eigenvalues = vec![SqrtRational::zero(); dim];
    let even_rows = dim.div_ceil(2);
    let odd_rows = dim / 2;
    for col in columns(case, n, &spectrum)? {
        eigenvalues[col.index] = col.eigenvalue.clone();
        for deg in 0..even_rows {
            let mut v = even.get(deg, col.even_point).clone();
            if col.half {
                v = &v * &half;
            }
            if alternating && deg % 2 == 1 {
                v = -v;
            }
            entries[2 * deg][col.index] = v;
        }
        if let Some(point) = col.odd_point {
            for deg in 0..odd_rows {
                let mut v = odd.get(deg, point) * &half;
                let flip = (col.odd_sign < 0) ^ (alternating && deg % 2 == 1);
                if flip {
                    v = -v;
                }
                entries[2 * deg + 1][col.index] = v;
            }
        }
    }
    Ok(EigvecMatrix {
        case,
        entries,
        eigenvalues,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dual(g: Rational, d: Rational, n: usize) -> FamilyParams {
        FamilyParams::DualHahn(DualHahnParams::new(g, d, n))
    }

    fn hahn(a: Rational, b: Rational, n: usize) -> FamilyParams {
        FamilyParams::Hahn(HahnParams::new(a, b, n))
    }

    /// `β > N + γ` keeps every Racah I/III entry real.
    fn racah(n: usize, b: Rational, g: Rational, d: Rational) -> FamilyParams {
        let a = -from_usize(n) - int(1);
        FamilyParams::Racah(RacahParams::new(a, b, g, d, RacahTruncation::Alpha).unwrap())
    }

    fn sample(case: DoubleCase, n: usize) -> FamilyParams {
        match case.family() {
            crate::polyfam::Family::DualHahn => dual(rat(1, 3), rat(3, 4), n),
            crate::polyfam::Family::Hahn => hahn(rat(2, 5), rat(1, 7), n),
            _ => racah(n, from_usize(n) + rat(7, 3), rat(1, 5), rat(2, 7)),
        }
    }

    const MATRIX_CASES: [DoubleCase; 9] = [
        DoubleCase::DualHahnI,
        DoubleCase::DualHahnII,
        DoubleCase::DualHahnIII,
        DoubleCase::HahnI,
        DoubleCase::HahnII,
        DoubleCase::HahnIII,
        DoubleCase::HahnIV,
        DoubleCase::RacahI,
        DoubleCase::RacahIII,
    ];

    /// Full determinant expansion along the first row, independent of the
    /// minor recurrence. Coefficients ascending.
    fn charpoly_by_expansion(m: &TwoDiagonal) -> Vec<Rational> {
        fn det(a: &[Vec<Vec<Rational>>]) -> Vec<Rational> {
            let n = a.len();
            if n == 0 {
                return vec![int(1)];
            }
            let mut total = vec![Rational::zero(); n + 1];
            for j in 0..n {
                if a[0][j].iter().all(Zero::is_zero) {
                    continue;
                }
                let minor: Vec<Vec<Vec<Rational>>> = a[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, v)| v.clone()).collect())
                    .collect();
                let sub = det(&minor);
                let sign = if j % 2 == 0 { int(1) } else { int(-1) };
                for (p, x) in a[0][j].iter().enumerate() {
                    for (q, y) in sub.iter().enumerate() {
                        total[p + q] += &sign * x * y;
                    }
                }
            }
            total
        }
        let n = m.dim();
        let mut a = vec![vec![vec![Rational::zero()]; n]; n];
        for i in 0..n {
            a[i][i] = vec![Rational::zero(), int(1)];
            if i + 1 < n {
                a[i][i + 1] = vec![-m.upper()[i].clone()];
                a[i + 1][i] = vec![-m.lower()[i].clone()];
            }
        }
        det(&a)
    }

    #[test]
    fn charpoly_small_cases() {
        let m = TwoDiagonal::new(vec![int(3)], vec![int(2)]).unwrap();
        assert_eq!(charpoly(&m), vec![int(-6), int(0), int(1)]);
        let m = TwoDiagonal::new(vec![int(2), int(5)], vec![int(1), int(1)]).unwrap();
        assert_eq!(charpoly(&m), vec![int(0), int(-7), int(0), int(1)]);
        let (kac, _) = sylvester_kac(3);
        assert_eq!(charpoly(&kac), vec![int(9), int(0), int(-10), int(0), int(1)]);
    }

    #[test]
    fn charpoly_matches_expansion() {
        let m = TwoDiagonal::new(
            vec![rat(1, 2), int(3), rat(-2, 7), int(4), rat(5, 3)],
            vec![int(2), rat(1, 3), int(5), rat(-1, 2), int(1)],
        )
        .unwrap();
        assert_eq!(charpoly(&m), charpoly_by_expansion(&m));
    }

    #[test]
    fn sylvester_kac_spectra() {
        let (m, s) = sylvester_kac(2);
        assert_eq!(m.upper(), &[int(1), int(2)]);
        assert_eq!(m.lower(), &[int(2), int(1)]);
        assert_eq!(
            s.entries().unwrap(),
            vec![SqrtRational::from_rational(&int(-2)), SqrtRational::zero(), SqrtRational::from_rational(&int(2))]
        );
        let (_, s) = sylvester_kac(1);
        assert_eq!(s.to_f64().unwrap(), vec![-1.0, 1.0]);
        for n in 1..=20 {
            let (m, s) = sylvester_kac(n);
            assert!(verify_spectrum_exact(&m, &s), "N={n}");
        }
    }

    #[test]
    fn extended_kac_reductions() {
        let half = rat(-1, 2);
        for n in 1..=8 {
            let (odd, s) = extended_kac_odd(n, &half, &half);
            assert_eq!(odd, sylvester_kac(2 * n).0);
            assert!(verify_spectrum_exact(&odd, &s));
            let (even, s) = extended_kac_even(n, &half, &half);
            assert_eq!(even, sylvester_kac(2 * n - 1).0);
            assert!(verify_spectrum_exact(&even, &s));
            // δ = −γ − 1 gives the integer spectrum −2N..2N in steps of 2
            let g = rat(3, 7);
            let (odd, s) = extended_kac_odd(n, &g, &(-&g - int(1)));
            assert!(verify_spectrum_exact(&odd, &s));
            let expect: Vec<f64> = (0..=2 * n).map(|j| 2.0 * j as f64 - 2.0 * n as f64).collect();
            assert_eq!(s.to_f64().unwrap(), expect);
        }
    }

    #[test]
    fn extended_kac_small_examples() {
        let (m, s) = extended_kac_odd(1, &int(1), &int(0));
        assert!(verify_spectrum_exact(&m, &s));
        assert_eq!(s.squares(), &[int(12)]);
        let (m, s) = extended_kac_even(2, &int(0), &int(1));
        assert!(verify_spectrum_exact(&m, &s));
        let mut sq = s.squares().to_vec();
        sq.sort();
        assert_eq!(sq, vec![int(8), int(24)]);
    }

    #[test]
    fn perturbed_matrix_fails_certificate() {
        let (m, s) = extended_kac_odd(4, &rat(1, 3), &rat(2, 5));
        assert!(verify_spectrum_exact(&m, &s));
        for i in 0..m.upper().len() {
            let mut upper = m.upper().to_vec();
            upper[i] += int(1);
            let bumped = TwoDiagonal::new(upper, m.lower().to_vec()).unwrap();
            assert!(!verify_spectrum_exact(&bumped, &s), "entry {i}");
        }
    }

    #[test]
    fn double_matrices_certified() {
        for case in MATRIX_CASES {
            for n in 1..=7 {
                let params = sample(case, n);
                let products = double_products(case, &params).unwrap();
                let s = double_spectrum(case, &params).unwrap();
                assert!(
                    verify_spectrum_exact(&TwoDiagonal::from_products(products), &s),
                    "{case} N={n}"
                );
            }
        }
    }

    #[test]
    fn hahn_three_four_are_swapped_one_two() {
        let p = HahnParams::new(rat(2, 5), rat(1, 7), 5);
        let q = FamilyParams::Hahn(swapped(&p));
        let p = FamilyParams::Hahn(p);
        assert_eq!(
            double_products(DoubleCase::HahnIII, &p).unwrap(),
            double_products(DoubleCase::HahnI, &q).unwrap()
        );
        assert_eq!(
            double_products(DoubleCase::HahnIV, &p).unwrap(),
            double_products(DoubleCase::HahnII, &q).unwrap()
        );
        let s = double_spectrum(DoubleCase::HahnIII, &p).unwrap();
        assert_eq!(s.squares()[0], rat(8, 7));
    }

    #[test]
    fn dual_hahn_three_entries() {
        let p = dual(rat(1, 3), rat(3, 4), 4);
        let (m, _) = double_matrix(DoubleCase::DualHahnIII, &p).unwrap();
        let (g, d, big) = (rat(1, 3), rat(3, 4), int(4));
        for k in 0..=4 {
            let kk = from_usize(k);
            assert_eq!(m.off()[2 * k].square(), (&kk + &g + int(1)) * (&big + &d + int(1) - &kk));
            if k < 4 {
                assert_eq!(m.off()[2 * k + 1].square(), (&kk + int(1)) * (&big - &kk));
            }
        }
    }

    #[test]
    fn racah_without_matrix_is_rejected() {
        let p = sample(DoubleCase::RacahII, 3);
        assert!(matches!(double_products(DoubleCase::RacahII, &p), Err(Error::Unsupported(_))));
        let bd = RacahParams::new(rat(1, 3), rat(1, 2), rat(1, 5), rat(-9, 2), RacahTruncation::BetaDelta).unwrap();
        assert!(matches!(
            double_products(DoubleCase::RacahI, &FamilyParams::Racah(bd)),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn nonsymmetric_forms() {
        let p = DualHahnParams::new(rat(2, 3), rat(1, 4), 5);
        let fp = FamilyParams::DualHahn(p.clone());
        let swapped = FamilyParams::DualHahn(DualHahnParams::new(p.delta.clone(), p.gamma.clone(), 5));
        for case in [DoubleCase::DualHahnI, DoubleCase::DualHahnII, DoubleCase::DualHahnIII] {
            let m = nonsymmetric_form(case, &p).unwrap();
            let s = double_spectrum(case, &fp).unwrap();
            assert!(verify_spectrum_exact(&m, &s), "{case}");
            let reference = if case == DoubleCase::DualHahnII { &swapped } else { &fp };
            assert_eq!(m.products(), double_products(case, reference).unwrap(), "{case}");
        }
        // γ + δ + 1 = 0 makes the first form's spectrum the integers −N..N
        let p = DualHahnParams::new(rat(5, 2), rat(-7, 2), 4);
        let s = double_spectrum(DoubleCase::DualHahnI, &FamilyParams::DualHahn(p.clone())).unwrap();
        assert_eq!(s.to_f64().unwrap(), vec![-4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0, 4.0]);
        assert!(verify_spectrum_exact(&nonsymmetric_form(DoubleCase::DualHahnI, &p).unwrap(), &s));
        // δ = γ integer: integer entries and integer eigenvalues
        let p = DualHahnParams::new(int(2), int(2), 3);
        let m = nonsymmetric_form(DoubleCase::DualHahnIII, &p).unwrap();
        assert!(m.upper().iter().chain(m.lower()).all(Rational::is_integer));
        let s = double_spectrum(DoubleCase::DualHahnIII, &FamilyParams::DualHahn(p)).unwrap();
        assert!(s.entries().unwrap().iter().all(|e| e.to_rational().is_some()));
        assert!(verify_spectrum_exact(&m, &s));
    }

    #[test]
    fn symmetrize_keeps_charpoly() {
        let (m, _) = sylvester_kac(6);
        let s = symmetrize(&m).unwrap();
        for (k, e) in s.off().iter().enumerate() {
            assert_eq!(e.square(), from_usize((k + 1) * (6 - k)));
        }
        assert_eq!(charpoly(&s.desymmetrize()), charpoly(&m));
        let zero = TwoDiagonal::new(vec![int(0); 3], vec![int(0); 3]).unwrap();
        assert!(symmetrize(&zero).unwrap().off().iter().all(SqrtRational::is_zero));
        let neg = TwoDiagonal::new(vec![int(1), int(-2)], vec![int(1), int(3)]).unwrap();
        assert_eq!(symmetrize(&neg), Err(Error::NegativeProduct { index: 1 }));
    }

    #[test]
    fn eigenvectors_exact_small() {
        for case in MATRIX_CASES {
            for n in 1..=3 {
                let params = sample(case, n);
                let (m, _) = double_matrix(case, &params).unwrap();
                let u = eigvec_matrix(case, &params).unwrap();
                assert!(u.verify_exact(&m), "{case} N={n}");
            }
        }
    }

    #[test]
    fn eigenvectors_float_moderate() {
        for case in MATRIX_CASES {
            let params = sample(case, 12);
            let (m, _) = double_matrix(case, &params).unwrap();
            let u = eigvec_matrix(case, &params).unwrap();
            let scale = m.off_f64().iter().fold(0.0f64, |a, b| a.max(b.abs()));
            assert!(u.column_orthonormality_error() <= 1e-12, "{case}");
            assert!(u.row_orthonormality_error() <= 1e-12, "{case}");
            assert!(u.residual(&m) <= 1e-12 * scale, "{case}");
        }
    }

    #[test]
    fn exact_eigenvector_check_is_sharp() {
        let params = sample(DoubleCase::HahnII, 3);
        let (m, _) = double_matrix(DoubleCase::HahnII, &params).unwrap();
        let u = eigvec_matrix(DoubleCase::HahnII, &params).unwrap();
        for (r, c) in [(0, 0), (3, 2), (6, 6)] {
            let mut bad = u.clone();
            bad.entries[r][c] = -bad.entries[r][c].clone();
            if !bad.entries[r][c].is_zero() {
                assert!(!bad.verify_exact(&m), "flip at ({r}, {c})");
            }
        }
        let mut off = m.off().to_vec();
        off[2] = -off[2].clone();
        assert!(!u.verify_exact(&SymTridiag::new(off)));
    }

    #[test]
    fn dual_hahn_three_four_by_four() {
        let params = dual(rat(1, 2), rat(1, 3), 1);
        let (m, s) = double_matrix(DoubleCase::DualHahnIII, &params).unwrap();
        assert_eq!(m.dim(), 4);
        assert_eq!(s.dim(), 4);
        assert!(eigvec_matrix(DoubleCase::DualHahnIII, &params).unwrap().verify_exact(&m));
    }

    proptest! {
        #[test]
        fn symmetrize_invariance(
            pairs in proptest::collection::vec((0i64..30, 1i64..9, 0i64..30, 1i64..9), 1..10)
        ) {
            let upper: Vec<_> = pairs.iter().map(|&(p, q, _, _)| rat(p, q)).collect();
            let lower: Vec<_> = pairs.iter().map(|&(_, _, p, q)| rat(p, q)).collect();
            let m = TwoDiagonal::new(upper, lower).unwrap();
            let s = symmetrize(&m).unwrap();
            prop_assert_eq!(charpoly(&s.desymmetrize()), charpoly(&m));
        }

        #[test]
        fn extended_kac_certified(n in 1usize..=12, gp in -20i64..40, dp in -20i64..40) {
            let g = rat(gp, 7);
            let d = rat(dp, 11);
            let (odd, s) = extended_kac_odd(n, &g, &d);
            prop_assert!(verify_spectrum_exact(&odd, &s));
            let (even, s) = extended_kac_even(n, &g, &d);
            prop_assert!(verify_spectrum_exact(&even, &s));
        }
    }
}
