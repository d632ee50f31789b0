//! Hahn, dual Hahn, Racah and Krawtchouk polynomials: exact evaluation,
//! weights, norms and three-term recurrence data.
//!
//! All four families share the recurrence
//!
//! ```text
//! Λ(x) y_n(x) = A(n) y_{n+1}(x) − (A(n) + C(n)) y_n(x) + C(n) y_{n−1}(x)
//! ```
//!
//! with `y_n(0) = 1`.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{
    as_nonpositive_integer, binom_shifted, checked_div, factorial, format_rational, from_usize,
    hypergeometric_terminating, int, pochhammer, Rational, SqrtRational,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Hahn,
    DualHahn,
    Racah,
    Krawtchouk,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Hahn => "Hahn",
            Family::DualHahn => "dual Hahn",
            Family::Racah => "Racah",
            Family::Krawtchouk => "Krawtchouk",
        }
    }
}

/// `Q_n(x; α, β, N)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HahnParams {
    pub alpha: Rational,
    pub beta: Rational,
    pub n_max: usize,
}

/// `R_n(λ(x); γ, δ, N)` with `λ(x) = x(x+γ+δ+1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DualHahnParams {
    pub gamma: Rational,
    pub delta: Rational,
    pub n_max: usize,
}

/// Which Racah denominator parameter equals `−N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RacahTruncation {
    /// `α + int(1) = −N`
    Alpha,
    /// `β + δ + int(1) = −N`
    BetaDelta,
    /// `γ + int(1) = −N`
    Gamma,
}

impl RacahTruncation {
    pub const ALL: [RacahTruncation; 3] = [
        RacahTruncation::Alpha,
        RacahTruncation::BetaDelta,
        RacahTruncation::Gamma,
    ];
}

/// `R_n(λ(x); α, β, γ, δ)`; `N` is derived from the truncation selector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RacahParams {
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
    pub delta: Rational,
    truncation: RacahTruncation,
    n_max: usize,
}

/// `K_n(x; p, N)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KrawtchoukParams {
    pub p: Rational,
    pub n_max: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FamilyParams {
    Hahn(HahnParams),
    DualHahn(DualHahnParams),
    Racah(RacahParams),
    Krawtchouk(KrawtchoukParams),
}

fn check_degree(deg: usize, n_max: usize) -> Result<()> {
    if deg > n_max {
        Err(Error::DegreeOutOfRange { deg, max: n_max })
    } else {
        Ok(())
    }
}

/// `∏_{j<k} (j(j+c) − λ)`, which equals `(−x)_k (x+c)_k` when `λ = x(x+c)`.
fn lambda_pochhammer(lambda: &Rational, c: &Rational, k: usize) -> Rational {
    (0..k)
        .map(|j| {
            let j = from_usize(j);
            &j * (&j + c) - lambda
        })
        .product()
}

impl HahnParams {
    pub fn new(alpha: Rational, beta: Rational, n_max: usize) -> Self {
        Self { alpha, beta, n_max }
    }

    fn big_n(&self) -> Rational {
        from_usize(self.n_max)
    }

    pub fn eval(&self, deg: usize, x: &Rational) -> Result<Rational> {
        check_degree(deg, self.n_max)?;
        let d = from_usize(deg);
        hypergeometric_terminating(
            &[-&d, &d + &self.alpha + &self.beta + int(1), -x],
            &[&self.alpha + int(1), -self.big_n()],
            &Rational::one(),
        )
    }

    /// `w(x) = binom(α+x, x)·binom(N+β−x, N−x)` on `x = 0..=N`.
    pub fn weight(&self, x: usize) -> Result<Rational> {
        if x > self.n_max {
            return Err(Error::UnsupportedPoint(x.to_string()));
        }
        Ok(binom_shifted(&self.alpha, x) * binom_shifted(&self.beta, self.n_max - x))
    }

    pub fn norm(&self, deg: usize) -> Result<Rational> {
        check_degree(deg, self.n_max)?;
        let (a, b, n) = (&self.alpha, &self.beta, self.n_max);
        let d = from_usize(deg);
        let sign = if deg.is_multiple_of(2) { int(1) } else { int(-1) };
        let num = sign * pochhammer(&(&d + a + b + int(1)), n + 1) * pochhammer(&(b + int(1)), deg) * factorial(deg);
        let den = (int(2) * &d + a + b + int(1))
            * pochhammer(&(a + int(1)), deg)
            * pochhammer(&(-self.big_n()), deg)
            * factorial(n);
        checked_div(&num, &den, "Hahn norm")
    }

    pub fn admissible(&self) -> bool {
        let n = -self.big_n();
        let minus_one = int(-1);
        (self.alpha > minus_one && self.beta > minus_one) || (self.alpha < n && self.beta < n)
    }

    pub fn recurrence(&self) -> RecurrenceData {
        RecurrenceData(FamilyParams::Hahn(self.clone()))
    }
}

impl DualHahnParams {
    pub fn new(gamma: Rational, delta: Rational, n_max: usize) -> Self {
        Self {
            gamma,
            delta,
            n_max,
        }
    }

    fn big_n(&self) -> Rational {
        from_usize(self.n_max)
    }

    /// `γ + δ + int(1)`, the shift in `λ(x) = x(x + γ + δ + int(1))`.
    pub fn lambda_shift(&self) -> Rational {
        &self.gamma + &self.delta + int(1)
    }

    pub fn lambda(&self, x: &Rational) -> Rational {
        x * (x + self.lambda_shift())
    }

    /// Accepts any rational `x`; the series always terminates through `−n`.
    pub fn eval(&self, deg: usize, x: &Rational) -> Result<Rational> {
        check_degree(deg, self.n_max)?;
        hypergeometric_terminating(
            &[-x, x + self.lambda_shift(), -from_usize(deg)],
            &[&self.gamma + int(1), -self.big_n()],
            &Rational::one(),
        )
    }

    /// Evaluation in the variable `λ` directly.
    pub fn eval_lambda(&self, deg: usize, lambda: &Rational) -> Result<Rational> {
        check_degree(deg, self.n_max)?;
        let c = self.lambda_shift();
        let g1 = &self.gamma + int(1);
        let minus_n = -self.big_n();
        let minus_deg = -from_usize(deg);
        let mut sum = Rational::zero();
        for k in 0..=deg {
            let num = pochhammer(&minus_deg, k) * lambda_pochhammer(lambda, &c, k);
            let den = pochhammer(&g1, k) * pochhammer(&minus_n, k) * factorial(k);
            sum += checked_div(&num, &den, "dual Hahn series term")?;
        }
        Ok(sum)
    }

    pub fn weight(&self, x: usize) -> Result<Rational> {
        if x > self.n_max {
            return Err(Error::UnsupportedPoint(x.to_string()));
        }
        let (g, d, n) = (&self.gamma, &self.delta, self.n_max);
        let xx = from_usize(x);
        let sign = if x.is_multiple_of(2) { int(1) } else { int(-1) };
        let num = (int(2) * &xx + g + d + int(1))
            * pochhammer(&(g + int(1)), x)
            * pochhammer(&(-self.big_n()), x)
            * factorial(n);
        let den = sign * pochhammer(&(&xx + g + d + int(1)), n + 1) * pochhammer(&(d + int(1)), x) * factorial(x);
        checked_div(&num, &den, "dual Hahn weight")
    }

    /// `h̄_n = [binom(γ+n, n)·binom(N+δ−n, N−n)]^{−1}`.
    pub fn norm(&self, deg: usize) -> Result<Rational> {
        check_degree(deg, self.n_max)?;
        let inv = binom_shifted(&self.gamma, deg) * binom_shifted(&self.delta, self.n_max - deg);
        checked_div(&Rational::one(), &inv, "dual Hahn norm")
    }

    pub fn admissible(&self) -> bool {
        let n = -self.big_n();
        let minus_one = int(-1);
        (self.gamma > minus_one && self.delta > minus_one) || (self.gamma < n && self.delta < n)
    }

    pub fn recurrence(&self) -> RecurrenceData {
        RecurrenceData(FamilyParams::DualHahn(self.clone()))
    }
}

impl RacahParams {
    /// Fails unless the selected denominator parameter is `−N` for an
    /// integer `N ≥ 0`. (`N = 0` is the one-point family that appears as a
    /// shifted partner of `N = 1`.)
    pub fn new(
        alpha: Rational,
        beta: Rational,
        gamma: Rational,
        delta: Rational,
        truncation: RacahTruncation,
    ) -> Result<Self> {
        let denom = match truncation {
            RacahTruncation::Alpha => &alpha + int(1),
            RacahTruncation::BetaDelta => &beta + &delta + int(1),
            RacahTruncation::Gamma => &gamma + int(1),
        };
        let n_max = as_nonpositive_integer(&denom)
            .ok_or_else(|| {
                Error::InvalidParams(format!(
                    "Racah {truncation:?} denominator is {}, not a nonpositive integer",
                    format_rational(&denom)
                ))
            })?;
        Ok(Self {
            alpha,
            beta,
            gamma,
            delta,
            truncation,
            n_max,
        })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn truncation(&self) -> RacahTruncation {
        self.truncation
    }

    pub fn lambda_shift(&self) -> Rational {
        &self.gamma + &self.delta + int(1)
    }

    pub fn lambda(&self, x: &Rational) -> Rational {
        x * (x + self.lambda_shift())
    }

    fn denominators(&self) -> [Rational; 3] {
        [
            &self.alpha + int(1),
            &self.beta + &self.delta + int(1),
            &self.gamma + int(1),
        ]
    }

    pub fn eval(&self, deg: usize, x: &Rational) -> Result<Rational> {
        check_degree(deg, self.n_max)?;
        let d = from_usize(deg);
        hypergeometric_terminating(
            &[
                -&d,
                &d + &self.alpha + &self.beta + int(1),
                -x,
                x + self.lambda_shift(),
            ],
            &self.denominators(),
            &Rational::one(),
        )
    }

    pub fn eval_lambda(&self, deg: usize, lambda: &Rational) -> Result<Rational> {
        check_degree(deg, self.n_max)?;
        let d = from_usize(deg);
        let c = self.lambda_shift();
        let upper = &d + &self.alpha + &self.beta + int(1);
        let [p, q, r] = self.denominators();
        let mut sum = Rational::zero();
        for k in 0..=deg {
            let num = pochhammer(&-&d, k) * pochhammer(&upper, k) * lambda_pochhammer(lambda, &c, k);
            let den = pochhammer(&p, k) * pochhammer(&q, k) * pochhammer(&r, k) * factorial(k);
            sum += checked_div(&num, &den, "Racah series term")?;
        }
        Ok(sum)
    }

    /// `h_n / h_0 = ∏_{k=1}^{n} C(k)/A(k−1)`.
    pub fn norm(&self, deg: usize) -> Result<Rational> {
        check_degree(deg, self.n_max)?;
        christoffel_norm(&self.recurrence(), deg)
    }

    /// Weight normalized to `Σ_x w(x) = 1`, from the Christoffel numbers
    /// `w(x) = 1 / Σ_n y_n(x)²/h_n`.
    pub fn weight(&self, x: usize) -> Result<Rational> {
        if x > self.n_max {
            return Err(Error::UnsupportedPoint(x.to_string()));
        }
        christoffel_weight(&FamilyParams::Racah(self.clone()), x)
    }

    pub fn recurrence(&self) -> RecurrenceData {
        RecurrenceData(FamilyParams::Racah(self.clone()))
    }
}

impl KrawtchoukParams {
    pub fn new(p: Rational, n_max: usize) -> Self {
        Self { p, n_max }
    }

    /// Upward recurrence from `K_0 = 1`.
    pub fn eval(&self, deg: usize, x: &Rational) -> Result<Rational> {
        check_degree(deg, self.n_max)?;
        let rec = self.recurrence();
        let lam = rec.lambda(x);
        let mut prev = Rational::zero();
        let mut cur = Rational::one();
        for k in 0..deg {
            let a = rec.a(k)?;
            let c = rec.c(k)?;
            let next = checked_div(&((&a + &c + &lam) * &cur - &c * &prev), &a, "Krawtchouk recurrence")?;
            prev = std::mem::replace(&mut cur, next);
        }
        Ok(cur)
    }

    pub fn recurrence(&self) -> RecurrenceData {
        RecurrenceData(FamilyParams::Krawtchouk(self.clone()))
    }
}

/// `h_n / h_0` from the recurrence coefficients.
pub fn christoffel_norm(rec: &RecurrenceData, deg: usize) -> Result<Rational> {
    let mut h = Rational::one();
    for k in 1..=deg {
        h *= checked_div(&rec.c(k)?, &rec.a(k - 1)?, "norm ratio C(k)/A(k-1)")?;
    }
    Ok(h)
}

/// Orthogonality weight at grid point `x` (normalized to total mass 1) via
/// the Christoffel numbers of the recurrence.
pub fn christoffel_weight(params: &FamilyParams, x: usize) -> Result<Rational> {
    let rec = params.recurrence();
    let xx = from_usize(x);
    let mut total = Rational::zero();
    let mut h = Rational::one();
    for deg in 0..=params.n_max() {
        if deg > 0 {
            h *= checked_div(&rec.c(deg)?, &rec.a(deg - 1)?, "norm ratio C(k)/A(k-1)")?;
        }
        let y = params.eval(deg, &xx)?;
        total += checked_div(&(&y * &y), &h, "Christoffel number")?;
    }
    checked_div(&Rational::one(), &total, "Christoffel weight")
}

/// Orthonormal values `√(w(x)/h_n)·y_n(x)` for all degrees and grid points,
/// indexed `[n][x]`. Weights and norms are computed once.
#[derive(Debug, Clone)]
pub struct NormalizedTable {
    values: Vec<Vec<SqrtRational>>,
}

impl NormalizedTable {
    pub fn get(&self, deg: usize, x: usize) -> &SqrtRational {
        &self.values[deg][x]
    }
}

impl FamilyParams {
    pub fn family(&self) -> Family {
        match self {
            FamilyParams::Hahn(_) => Family::Hahn,
            FamilyParams::DualHahn(_) => Family::DualHahn,
            FamilyParams::Racah(_) => Family::Racah,
            FamilyParams::Krawtchouk(_) => Family::Krawtchouk,
        }
    }

    pub fn n_max(&self) -> usize {
        match self {
            FamilyParams::Hahn(p) => p.n_max,
            FamilyParams::DualHahn(p) => p.n_max,
            FamilyParams::Racah(p) => p.n_max,
            FamilyParams::Krawtchouk(p) => p.n_max,
        }
    }

    pub fn eval(&self, deg: usize, x: &Rational) -> Result<Rational> {
        match self {
            FamilyParams::Hahn(p) => p.eval(deg, x),
            FamilyParams::DualHahn(p) => p.eval(deg, x),
            FamilyParams::Racah(p) => p.eval(deg, x),
            FamilyParams::Krawtchouk(p) => p.eval(deg, x),
        }
    }

    pub fn recurrence(&self) -> RecurrenceData {
        RecurrenceData(self.clone())
    }

    /// Orthogonality weight in the family's own normalization (Racah uses
    /// total mass 1).
    pub fn weight(&self, x: usize) -> Result<Rational> {
        match self {
            FamilyParams::Hahn(p) => p.weight(x),
            FamilyParams::DualHahn(p) => p.weight(x),
            FamilyParams::Racah(p) => p.weight(x),
            FamilyParams::Krawtchouk(_) => christoffel_weight(self, x),
        }
    }

    pub fn norm(&self, deg: usize) -> Result<Rational> {
        match self {
            FamilyParams::Hahn(p) => p.norm(deg),
            FamilyParams::DualHahn(p) => p.norm(deg),
            FamilyParams::Racah(p) => p.norm(deg),
            FamilyParams::Krawtchouk(p) => {
                check_degree(deg, p.n_max)?;
                christoffel_norm(&self.recurrence(), deg)
            }
        }
    }

    /// Orthonormal value `√(w(x)/h_n)·y_n(x)`, as a signed square root.
    pub fn normalized(&self, deg: usize, x: usize) -> Result<SqrtRational> {
        let y = self.eval(deg, &from_usize(x))?;
        let ratio = checked_div(&self.weight(x)?, &self.norm(deg)?, "normalization")?;
        if ratio.is_negative() {
            return Err(Error::InadmissibleParams(format!(
                "w({x})/h_{deg} = {} is negative",
                format_rational(&ratio)
            )));
        }
        let sign = if y.is_positive() {
            1
        } else if y.is_negative() {
            -1
        } else {
            0
        };
        Ok(SqrtRational::new(sign, ratio * &y * &y))
    }

    /// `y_n(x)` for `n, x = 0..=N`, indexed `[n][x]`. Degrees are filled in
    /// by the three-term recurrence, falling back to the series wherever
    /// `A(n)` vanishes.
    pub fn values_table(&self) -> Result<Vec<Vec<Rational>>> {
        let n_max = self.n_max();
        let rec = self.recurrence();
        let mut table = vec![vec![Rational::zero(); n_max + 1]; n_max + 1];
        for x in 0..=n_max {
            table[0][x] = Rational::one();
        }
        for deg in 0..n_max {
            let (a, c) = (rec.a(deg)?, rec.c(deg)?);
            for x in 0..=n_max {
                let next = if a.is_zero() {
                    self.eval(deg + 1, &from_usize(x))?
                } else {
                    let lam = rec.lambda(&from_usize(x));
                    let prev = if deg == 0 { Rational::zero() } else { table[deg - 1][x].clone() };
                    ((lam + &a + &c) * &table[deg][x] - &c * prev) / &a
                };
                table[deg + 1][x] = next;
            }
        }
        Ok(table)
    }

    pub fn normalized_table(&self) -> Result<NormalizedTable> {
        let n_max = self.n_max();
        let values = self.values_table()?;
        let norms = (0..=n_max).map(|d| self.norm(d)).collect::<Result<Vec<_>>>()?;
        let weights = match self {
            FamilyParams::Racah(_) | FamilyParams::Krawtchouk(_) => (0..=n_max)
                .map(|x| {
                    let total = (0..=n_max)
                        .map(|d| checked_div(&(&values[d][x] * &values[d][x]), &norms[d], "Christoffel number"))
                        .sum::<Result<Rational>>()?;
                    checked_div(&Rational::one(), &total, "Christoffel weight")
                })
                .collect::<Result<Vec<_>>>()?,
            _ => (0..=n_max).map(|x| self.weight(x)).collect::<Result<Vec<_>>>()?,
        };
        let mut out = vec![Vec::with_capacity(n_max + 1); n_max + 1];
        for (deg, row) in values.iter().enumerate() {
            for (x, y) in row.iter().enumerate() {
                let ratio = checked_div(&weights[x], &norms[deg], "normalization")?;
                if ratio.is_negative() {
                    return Err(Error::InadmissibleParams(format!(
                        "w({x})/h_{deg} = {} is negative",
                        format_rational(&ratio)
                    )));
                }
                let sign = if y.is_positive() {
                    1
                } else if y.is_negative() {
                    -1
                } else {
                    0
                };
                out[deg].push(SqrtRational::new(sign, ratio * y * y));
            }
        }
        Ok(NormalizedTable { values: out })
    }

    pub fn expect_hahn(&self) -> Result<&HahnParams> {
        match self {
            FamilyParams::Hahn(p) => Ok(p),
            other => Err(Error::FamilyMismatch {
                expected: Family::Hahn.name(),
                found: other.family().name(),
            }),
        }
    }

    pub fn expect_dual_hahn(&self) -> Result<&DualHahnParams> {
        match self {
            FamilyParams::DualHahn(p) => Ok(p),
            other => Err(Error::FamilyMismatch {
                expected: Family::DualHahn.name(),
                found: other.family().name(),
            }),
        }
    }

    pub fn expect_racah(&self) -> Result<&RacahParams> {
        match self {
            FamilyParams::Racah(p) => Ok(p),
            other => Err(Error::FamilyMismatch {
                expected: Family::Racah.name(),
                found: other.family().name(),
            }),
        }
    }
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = format_rational;
        match self {
            FamilyParams::Hahn(p) => write!(f, "Hahn(α={}, β={}, N={})", r(&p.alpha), r(&p.beta), p.n_max),
            FamilyParams::DualHahn(p) => {
                write!(f, "dual Hahn(γ={}, δ={}, N={})", r(&p.gamma), r(&p.delta), p.n_max)
            }
            FamilyParams::Racah(p) => write!(
                f,
                "Racah(α={}, β={}, γ={}, δ={}, N={} via {:?})",
                r(&p.alpha),
                r(&p.beta),
                r(&p.gamma),
                r(&p.delta),
                p.n_max,
                p.truncation
            ),
            FamilyParams::Krawtchouk(p) => write!(f, "Krawtchouk(p={}, N={})", r(&p.p), p.n_max),
        }
    }
}

/// Recurrence coefficients `A(n)`, `C(n)` and eigenvalue `Λ(x)` of a family.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceData(FamilyParams);

impl RecurrenceData {
    pub fn params(&self) -> &FamilyParams {
        &self.0
    }

    pub fn a(&self, n: usize) -> Result<Rational> {
        self.a_at(&from_usize(n))
    }

    pub fn c(&self, n: usize) -> Result<Rational> {
        self.c_at(&from_usize(n))
    }

    /// `A` at a rational degree index; the doubling identities need `n − 1`
    /// at `n = 0`.
    pub fn a_at(&self, n: &Rational) -> Result<Rational> {
        let two = int(2);
        match &self.0 {
            FamilyParams::Hahn(p) => {
                let (a, b) = (&p.alpha, &p.beta);
                let s = a + b;
                let num = (n + a + int(1)) * (n + &s + int(1)) * (from_usize(p.n_max) - n);
                let den = (&two * n + &s + int(1)) * (&two * n + &s + int(2));
                safe_ratio(num, den, "Hahn A(n)")
            }
            FamilyParams::DualHahn(p) => Ok((n + &p.gamma + int(1)) * (n - from_usize(p.n_max))),
            FamilyParams::Racah(p) => {
                let (a, b, g, d) = (&p.alpha, &p.beta, &p.gamma, &p.delta);
                let s = a + b;
                let num = (n + a + int(1)) * (n + &s + int(1)) * (n + g + int(1)) * (n + b + d + int(1));
                let den = (&two * n + &s + int(1)) * (&two * n + &s + int(2));
                safe_ratio(num, den, "Racah A(n)")
            }
            FamilyParams::Krawtchouk(p) => Ok(&p.p * (from_usize(p.n_max) - n)),
        }
    }

    pub fn c_at(&self, n: &Rational) -> Result<Rational> {
        let two = int(2);
        match &self.0 {
            FamilyParams::Hahn(p) => {
                let (a, b) = (&p.alpha, &p.beta);
                let s = a + b;
                let num = n * (n + &s + from_usize(p.n_max) + int(1)) * (n + b);
                let den = (&two * n + &s) * (&two * n + &s + int(1));
                safe_ratio(num, den, "Hahn C(n)")
            }
            FamilyParams::DualHahn(p) => Ok(n * (n - &p.delta - from_usize(p.n_max) - int(1))),
            FamilyParams::Racah(p) => {
                let (a, b, g, d) = (&p.alpha, &p.beta, &p.gamma, &p.delta);
                let s = a + b;
                let num = n * (n + &s - g) * (n + a - d) * (n + b);
                let den = (&two * n + &s) * (&two * n + &s + int(1));
                safe_ratio(num, den, "Racah C(n)")
            }
            FamilyParams::Krawtchouk(p) => Ok(n * (Rational::one() - &p.p)),
        }
    }

    pub fn lambda(&self, x: &Rational) -> Rational {
        match &self.0 {
            FamilyParams::Hahn(_) | FamilyParams::Krawtchouk(_) => -x,
            FamilyParams::DualHahn(p) => p.lambda(x),
            FamilyParams::Racah(p) => p.lambda(x),
        }
    }

    /// `Λ(x)y_n − A y_{n+1} + (A+C) y_n − C y_{n−1}` for `0 ≤ n < N`.
    pub fn residue(&self, n: usize, x: &Rational) -> Result<Rational> {
        let p = &self.0;
        let yn = p.eval(n, x)?;
        let next = p.eval(n + 1, x)?;
        let prev = if n == 0 { Rational::zero() } else { p.eval(n - 1, x)? };
        let (a, c) = (self.a(n)?, self.c(n)?);
        Ok(self.lambda(x) * &yn - &a * next + (&a + &c) * &yn - c * prev)
    }
}

/// `num/den`, with `0/0` read as 0. The `0/0` appears for `C(0)` when
/// `α + β` is 0 or −1, where the limit is 0.
fn safe_ratio(num: Rational, den: Rational, what: &str) -> Result<Rational> {
    if den.is_zero() && num.is_zero() {
        Ok(Rational::zero())
    } else {
        checked_div(&num, &den, what)
    }
}
