//! The eleven ways of doubling Hahn, dual Hahn and Racah polynomials.
//!
//! Each case pairs `y_n` (parameters `p`) with `ŷ_n` (hatted parameters
//! `p̂`, evaluated at `x̂ = x + ξ`) through
//!
//! ```text
//! a(n) y_n(x) + b(n) y_{n+1}(x) = d̂(x) ŷ_n(x̂)
//! â(n) ŷ_n(x̂) + b̂(n) ŷ_{n+1}(x̂) = d(x) y_{n+1}(x)
//! ```
//!
//! with the gauge `a = 1, b = −1` scaling fixed by the case tables below.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{checked_div, from_usize, int, Rational};
use crate::error::{Error, Result};
use crate::polyfam::{DualHahnParams, Family, FamilyParams, HahnParams, RacahParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DoubleCase {
    DualHahnI,
    DualHahnII,
    DualHahnIII,
    HahnI,
    HahnII,
    HahnIII,
    HahnIV,
    RacahI,
    RacahII,
    RacahIII,
    RacahIV,
}

impl DoubleCase {
    pub const ALL: [DoubleCase; 11] = [
        DoubleCase::DualHahnI,
        DoubleCase::DualHahnII,
        DoubleCase::DualHahnIII,
        DoubleCase::HahnI,
        DoubleCase::HahnII,
        DoubleCase::HahnIII,
        DoubleCase::HahnIV,
        DoubleCase::RacahI,
        DoubleCase::RacahII,
        DoubleCase::RacahIII,
        DoubleCase::RacahIV,
    ];

    pub fn family(self) -> Family {
        use DoubleCase::*;
        match self {
            DualHahnI | DualHahnII | DualHahnIII => Family::DualHahn,
            HahnI | HahnII | HahnIII | HahnIV => Family::Hahn,
            RacahI | RacahII | RacahIII | RacahIV => Family::Racah,
        }
    }

    pub fn name(self) -> &'static str {
        use DoubleCase::*;
        match self {
            DualHahnI => "DualHahnI",
            DualHahnII => "DualHahnII",
            DualHahnIII => "DualHahnIII",
            HahnI => "HahnI",
            HahnII => "HahnII",
            HahnIII => "HahnIII",
            HahnIV => "HahnIV",
            RacahI => "RacahI",
            RacahII => "RacahII",
            RacahIII => "RacahIII",
            RacahIV => "RacahIV",
        }
    }

    /// Proportionality factor between the recurrence obtained by eliminating
    /// the partner family and the family's own three-term recurrence. The
    /// coefficient tables fix the scale of each relation; with those
    /// conventions the factor is −1 for Hahn I and II and +1 for every other
    /// case.
    pub fn recurrence_sign(self) -> Rational {
        match self {
            DoubleCase::HahnI | DoubleCase::HahnII => int(-1),
            _ => int(1),
        }
    }

    /// Christoffel parameter `ν` whose kernel partner is the hatted family.
    pub fn christoffel_nu(self, params: &FamilyParams) -> Result<Rational> {
        use DoubleCase::*;
        Ok(match self {
            DualHahnI | DualHahnII | DualHahnIII => {
                let p = params.expect_dual_hahn()?;
                match self {
                    DualHahnI => int(0),
                    DualHahnII => from_usize(p.n_max),
                    _ => -p.delta.clone(),
                }
            }
            HahnI | HahnII | HahnIII | HahnIV => {
                let p = params.expect_hahn()?;
                match self {
                    HahnI => -&p.alpha - int(1),
                    HahnII => int(0),
                    HahnIII => from_usize(p.n_max) + &p.beta + int(1),
                    _ => from_usize(p.n_max),
                }
            }
            RacahI | RacahII | RacahIII | RacahIV => {
                let p = params.expect_racah()?;
                match self {
                    RacahI => -p.delta.clone(),
                    RacahII => &p.beta - &p.gamma,
                    RacahIII => int(0),
                    _ => -&p.alpha - int(1),
                }
            }
        })
    }
}

impl fmt::Display for DoubleCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DoubleCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        DoubleCase::ALL
            .into_iter()
            .find(|c| c.name().to_ascii_lowercase() == key)
            .ok_or_else(|| Error::parse("case", format!("unknown doubling case {s:?}")))
    }
}

/// One of the six coefficient functions of a doubling pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coefficient {
    A,
    B,
    AHat,
    BHat,
    D,
    DHat,
}

impl Coefficient {
    pub const ALL: [Coefficient; 6] = [
        Coefficient::A,
        Coefficient::B,
        Coefficient::AHat,
        Coefficient::BHat,
        Coefficient::D,
        Coefficient::DHat,
    ];
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Coefficient::A => "a",
            Coefficient::B => "b",
            Coefficient::AHat => "ahat",
            Coefficient::BHat => "bhat",
            Coefficient::D => "d",
            Coefficient::DHat => "dhat",
        })
    }
}

impl FromStr for Coefficient {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Coefficient::ALL
            .into_iter()
            .find(|c| c.to_string() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::parse("coefficient", format!("unknown coefficient {s:?}")))
    }
}

/// The coefficient functions of one doubling case at fixed parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSextet {
    case: DoubleCase,
    params: FamilyParams,
    hatted: FamilyParams,
    x_shift: Rational,
    flipped: Option<Coefficient>,
}

fn shifted_racah(p: &RacahParams, da: i64, db: i64, dg: i64, dd: i64) -> Result<RacahParams> {
    RacahParams::new(
        &p.alpha + int(da),
        &p.beta + int(db),
        &p.gamma + int(dg),
        &p.delta + int(dd),
        p.truncation(),
    )
}

/// `N − 1` for the cases whose partner family is one degree shorter.
fn shrink(n_max: usize) -> Result<usize> {
    n_max
        .checked_sub(1)
        .ok_or_else(|| Error::InvalidParams("N must be at least 1".into()))
}

pub fn coefficients(case: DoubleCase, params: &FamilyParams) -> Result<CoefficientSextet> {
    use DoubleCase::*;
    let (hatted, x_shift) = match case {
        DualHahnI | DualHahnII | DualHahnIII => {
            let p = params.expect_dual_hahn()?;
            let (g, d) = (&p.gamma, &p.delta);
            let (h, xi) = match case {
                DualHahnI => (
                    DualHahnParams::new(g + int(1), d + int(1), shrink(p.n_max)?),
                    int(-1),
                ),
                DualHahnII => (DualHahnParams::new(g.clone(), d.clone(), shrink(p.n_max)?), int(0)),
                _ => (DualHahnParams::new(g + int(1), d - int(1), p.n_max), int(0)),
            };
            (FamilyParams::DualHahn(h), xi)
        }
        HahnI | HahnII | HahnIII | HahnIV => {
            let p = params.expect_hahn()?;
            let (a, b) = (&p.alpha, &p.beta);
            let h = match case {
                HahnI => HahnParams::new(a + int(1), b.clone(), p.n_max),
                HahnII => HahnParams::new(a + int(1), b.clone(), shrink(p.n_max)?),
                HahnIII => HahnParams::new(a.clone(), b + int(1), p.n_max),
                _ => HahnParams::new(a.clone(), b + int(1), shrink(p.n_max)?),
            };
            let xi = if case == HahnII { int(-1) } else { int(0) };
            (FamilyParams::Hahn(h), xi)
        }
        RacahI | RacahII | RacahIII | RacahIV => {
            let p = params.expect_racah()?;
            let h = match case {
                RacahI => shifted_racah(p, 0, 1, 1, -1)?,
                RacahII => shifted_racah(p, 0, 1, 0, 0)?,
                RacahIII => shifted_racah(p, 1, 0, 1, 1)?,
                _ => shifted_racah(p, 1, 0, 0, 0)?,
            };
            let xi = if case == RacahIII { int(-1) } else { int(0) };
            (FamilyParams::Racah(h), xi)
        }
    };
    Ok(CoefficientSextet {
        case,
        params: params.clone(),
        hatted,
        x_shift,
        flipped: None,
    })
}

impl CoefficientSextet {
    pub fn case(&self) -> DoubleCase {
        self.case
    }

    pub fn params(&self) -> &FamilyParams {
        &self.params
    }

    pub fn hatted(&self) -> &FamilyParams {
        &self.hatted
    }

    /// `ξ` in `x̂ = x + ξ`.
    pub fn x_shift(&self) -> &Rational {
        &self.x_shift
    }

    /// Copy with one coefficient negated, used to check that the suites
    /// detect a wrong sign.
    pub fn with_sign_flip(&self, coef: Coefficient) -> Self {
        Self {
            flipped: Some(coef),
            ..self.clone()
        }
    }

    pub fn flipped(&self) -> Option<Coefficient> {
        self.flipped
    }

    fn apply_flip(&self, coef: Coefficient, v: Rational) -> Rational {
        if self.flipped == Some(coef) {
            -v
        } else {
            v
        }
    }

    pub fn a(&self, n: &Rational) -> Result<Rational> {
        Ok(self.apply_flip(Coefficient::A, self.raw_n(Coefficient::A, n)?))
    }

    pub fn b(&self, n: &Rational) -> Result<Rational> {
        Ok(self.apply_flip(Coefficient::B, self.raw_n(Coefficient::B, n)?))
    }

    pub fn a_hat(&self, n: &Rational) -> Result<Rational> {
        Ok(self.apply_flip(Coefficient::AHat, self.raw_n(Coefficient::AHat, n)?))
    }

    pub fn b_hat(&self, n: &Rational) -> Result<Rational> {
        Ok(self.apply_flip(Coefficient::BHat, self.raw_n(Coefficient::BHat, n)?))
    }

    pub fn d(&self, x: &Rational) -> Result<Rational> {
        Ok(self.apply_flip(Coefficient::D, self.raw_x(Coefficient::D, x)?))
    }

    pub fn d_hat(&self, x: &Rational) -> Result<Rational> {
        Ok(self.apply_flip(Coefficient::DHat, self.raw_x(Coefficient::DHat, x)?))
    }

    pub fn coefficient(&self, coef: Coefficient, arg: &Rational) -> Result<Rational> {
        match coef {
            Coefficient::A => self.a(arg),
            Coefficient::B => self.b(arg),
            Coefficient::AHat => self.a_hat(arg),
            Coefficient::BHat => self.b_hat(arg),
            Coefficient::D => self.d(arg),
            Coefficient::DHat => self.d_hat(arg),
        }
    }

    /// The n-dependent coefficients `a, b, â, b̂`.
    fn raw_n(&self, coef: Coefficient, n: &Rational) -> Result<Rational> {
        use Coefficient::*;
        use DoubleCase::*;
        let one = int(1);
        let two = int(2);
        let n1 = n + &one;
        match (&self.params, self.case) {
            (FamilyParams::DualHahn(p), case) => {
                let (g, d, big_n) = (&p.gamma, &p.delta, from_usize(p.n_max));
                Ok(match (case, coef) {
                    (DualHahnI, A) => one,
                    (DualHahnI, B) => -one,
                    (DualHahnI, AHat) => -(&n1) * (&big_n - n + d),
                    (DualHahnI, BHat) => (&big_n - n - int(1)) * (n + g + int(2)),
                    (DualHahnII, A) => n - d - &big_n,
                    (DualHahnII, B) => -(n + g + int(1)),
                    (DualHahnII, AHat) => n1,
                    (DualHahnII, BHat) => -(n - &big_n + int(1)),
                    (DualHahnIII, A) => -(n - d - &big_n),
                    (DualHahnIII, B) => n - &big_n,
                    (DualHahnIII, AHat) => -n1,
                    (DualHahnIII, BHat) => n + g + int(2),
                    _ => unreachable!("x-dependent coefficient {coef} requested as n-dependent"),
                })
            }
            (FamilyParams::Hahn(p), case) => {
                let (a, b, big_n) = (&p.alpha, &p.beta, from_usize(p.n_max));
                let s = a + b;
                let lower = &two * n + &s + int(2);
                let upper = &two * n + &s + int(3);
                let (num, den) = match (case, coef) {
                    (HahnI, A) => (n + &s + &big_n + int(2), lower),
                    (HahnI, B) => (-(&big_n - n), lower),
                    (HahnI, AHat) => (-(&n1) * (n + b + int(1)), upper),
                    (HahnI, BHat) => ((n + &s + int(2)) * (n + a + int(2)), upper),
                    (HahnII, A) => (one, lower),
                    (HahnII, B) => (-one, lower),
                    (HahnII, AHat) => (-(&n1) * (n + b + int(1)) * (n + &s + &big_n + int(2)), upper),
                    (HahnII, BHat) => ((n + &s + int(2)) * (&big_n - n - int(1)) * (n + a + int(2)), upper),
                    (HahnIII, A) => ((n + b + int(1)) * (n + &big_n + int(2) + &s), lower),
                    (HahnIII, B) => ((&big_n - n) * (n + a + int(1)), lower),
                    (HahnIII, AHat) => (n1, upper),
                    (HahnIII, BHat) => (n + &s + int(2), upper),
                    (HahnIV, A) => (n + b + int(1), lower),
                    (HahnIV, B) => (n + a + int(1), lower),
                    (HahnIV, AHat) => (&n1 * (n + &s + &big_n + int(2)), upper),
                    (HahnIV, BHat) => ((&big_n - n - int(1)) * (n + &s + int(2)), upper),
                    _ => unreachable!("x-dependent coefficient {coef} requested as n-dependent"),
                };
                checked_div(&num, &den, "Hahn doubling coefficient")
            }
            (FamilyParams::Racah(p), case) => {
                let (a, b, g, d) = (&p.alpha, &p.beta, &p.gamma, &p.delta);
                let s = a + b;
                let lower = &two * n + &s + int(2);
                let upper = &two * n + &s + int(3);
                let (num, den) = match (case, coef) {
                    (RacahI, A) => (-(n - d + a + int(1)) * (n + b + int(1)), lower),
                    (RacahI, B) => ((n + b + d + int(1)) * (n + a + int(1)), lower),
                    (RacahI, AHat) => (-(&n1) * (n - g + &s + int(1)), upper),
                    (RacahI, BHat) => ((n + &s + int(2)) * (n + g + int(2)), upper),
                    (RacahII, A) => (-(n - g + &s + int(1)) * (n + b + int(1)), lower),
                    (RacahII, B) => ((n + g + int(1)) * (n + a + int(1)), lower),
                    (RacahII, AHat) => (-(&n1) * (n - d + a + int(1)), upper),
                    (RacahII, BHat) => ((n + b + d + int(2)) * (n + &s + int(2)), upper),
                    (RacahIII, A) => (-one, lower),
                    (RacahIII, B) => (one, lower),
                    (RacahIII, AHat) => (
                        -(&n1) * (n - g + &s + int(1)) * (n - d + a + int(1)) * (n + b + int(1)),
                        upper,
                    ),
                    (RacahIII, BHat) => (
                        (n + g + int(2)) * (n + b + d + int(2)) * (n + a + int(2)) * (n + &s + int(2)),
                        upper,
                    ),
                    (RacahIV, A) => (-(n - g + &s + int(1)) * (n - d + a + int(1)), lower),
                    (RacahIV, B) => ((n + g + int(1)) * (n + b + d + int(1)), lower),
                    (RacahIV, AHat) => (-(&n1) * (n + b + int(1)), upper),
                    (RacahIV, BHat) => ((n + a + int(2)) * (n + &s + int(2)), upper),
                    _ => unreachable!("x-dependent coefficient {coef} requested as n-dependent"),
                };
                checked_div(&num, &den, "Racah doubling coefficient")
            }
            (FamilyParams::Krawtchouk(_), _) => unreachable!("sextets are never built for Krawtchouk"),
        }
    }

    /// The x-dependent coefficients `d, d̂`.
    fn raw_x(&self, coef: Coefficient, x: &Rational) -> Result<Rational> {
        use Coefficient::*;
        use DoubleCase::*;
        let one = int(1);
        let (num, den) = match (&self.params, self.case) {
            (FamilyParams::DualHahn(p), case) => {
                let (g, d, big_n) = (&p.gamma, &p.delta, from_usize(p.n_max));
                match (case, coef) {
                    (DualHahnI, D) => (&big_n * (g + int(1)), one),
                    (DualHahnI, DHat) => (p.lambda(x), &big_n * (g + int(1))),
                    (DualHahnII, D) => (big_n, one),
                    (DualHahnII, DHat) => (-(&big_n - x) * (x + g + d + &big_n + int(1)), big_n),
                    (DualHahnIII, D) => (g + int(1), one),
                    (DualHahnIII, DHat) => ((x + g + int(1)) * (x + d), g + int(1)),
                    _ => unreachable!("n-dependent coefficient {coef} requested as x-dependent"),
                }
            }
            (FamilyParams::Hahn(p), case) => {
                let (a, b, big_n) = (&p.alpha, &p.beta, from_usize(p.n_max));
                match (case, coef) {
                    (HahnI, D) => (a + int(1), one),
                    (HahnI, DHat) => (a + x + int(1), a + int(1)),
                    (HahnII, D) => (&big_n * (a + int(1)), one),
                    (HahnII, DHat) => (x.clone(), &big_n * (a + int(1))),
                    (HahnIII, D) => (one.clone(), one),
                    (HahnIII, DHat) => (b + int(1) + &big_n - x, one),
                    (HahnIV, D) => (big_n, one),
                    (HahnIV, DHat) => (&big_n - x, big_n),
                    _ => unreachable!("n-dependent coefficient {coef} requested as x-dependent"),
                }
            }
            (FamilyParams::Racah(p), case) => {
                let (a, b, g, d) = (&p.alpha, &p.beta, &p.gamma, &p.delta);
                match (case, coef) {
                    (RacahI, D) => (g + int(1), one),
                    (RacahI, DHat) => ((x + d) * (x + g + int(1)), g + int(1)),
                    (RacahII, D) => (b + d + int(1), one),
                    (RacahII, DHat) => ((x + b + d + int(1)) * (x + g - b), b + d + int(1)),
                    (RacahIII, D) => ((g + int(1)) * (b + d + int(1)) * (a + int(1)), one),
                    (RacahIII, DHat) => (p.lambda(x), (g + int(1)) * (b + d + int(1)) * (a + int(1))),
                    (RacahIV, D) => (a + int(1), one),
                    (RacahIV, DHat) => ((x + g + d - a) * (x + a + int(1)), a + int(1)),
                    _ => unreachable!("n-dependent coefficient {coef} requested as x-dependent"),
                }
            }
            (FamilyParams::Krawtchouk(_), _) => unreachable!("sextets are never built for Krawtchouk"),
        };
        checked_div(&num, &den, "doubling coefficient d")
    }

    /// Degrees `n` for which both relations are checked: `0..N`.
    pub fn degrees(&self) -> std::ops::Range<usize> {
        0..self.params.n_max()
    }

    /// Grid points `x = 0..=N` at which the pair is checked for degree `n`.
    ///
    /// When `n + 1` exceeds the hatted degree range the term `b̂(n)ŷ_{n+1}`
    /// has a vanishing coefficient but `ŷ_{n+1}` itself is only finite where
    /// `x̂` lies on the hatted grid, so other points are left out.
    pub fn points(&self, n: usize) -> Vec<usize> {
        let cap = self.hatted.n_max();
        (0..=self.params.n_max())
            .filter(|&x| n < cap || self.on_hatted_grid(&from_usize(x)))
            .collect()
    }

    fn on_hatted_grid(&self, x: &Rational) -> bool {
        let xh = self.x_hat(x);
        xh.is_integer() && xh >= int(0) && xh <= from_usize(self.hatted.n_max())
    }

    fn x_hat(&self, x: &Rational) -> Rational {
        x + &self.x_shift
    }

    /// `coef · ŷ_{n+1}(x̂)`, dropping the term when `n+1` exceeds the hatted
    /// degree range and the coefficient vanishes there.
    fn hatted_next(&self, coef: &Rational, n: usize, x_hat: &Rational) -> Result<Rational> {
        let cap = self.hatted.n_max();
        if n + 1 > cap {
            if !num_traits::Zero::is_zero(coef) {
                return Err(Error::DegreeOutOfRange { deg: n + 1, max: cap });
            }
            if !self.on_hatted_grid(&(x_hat - &self.x_shift)) {
                return Err(Error::UnsupportedPoint(format!(
                    "x̂ = {x_hat} is off the hatted grid at degree {}",
                    n + 1
                )));
            }
            return Ok(int(0));
        }
        Ok(coef * self.hatted.eval(n + 1, x_hat)?)
    }

    /// Residues of both relations at `(n, x)`; both are zero exactly when
    /// the pair holds.
    pub fn verify_pair(&self, n: usize, x: &Rational) -> Result<(Rational, Rational)> {
        let nn = from_usize(n);
        let xh = self.x_hat(x);
        let y_n = self.params.eval(n, x)?;
        let y_next = self.params.eval(n + 1, x)?;
        let yh_n = self.hatted.eval(n, &xh)?;
        let forward = self.a(&nn)? * &y_n + self.b(&nn)? * &y_next - self.d_hat(x)? * &yh_n;
        let backward = self.a_hat(&nn)? * &yh_n + self.hatted_next(&self.b_hat(&nn)?, n, &xh)?
            - self.d(x)? * &y_next;
        Ok((forward, backward))
    }

    /// Residues of the coefficient identities obtained by comparing the
    /// eliminated relations with the three-term recurrences. `A`, `C` and `Λ`
    /// enter multiplied by [`DoubleCase::recurrence_sign`].
    pub fn verify_requirements(&self, n: usize, x: &Rational) -> Result<Vec<(Requirement, Rational)>> {
        let nn = from_usize(n);
        let prev = &nn - int(1);
        let rec = self.params.recurrence();
        let rec_hat = self.hatted.recurrence();
        let xh = self.x_hat(x);

        let a = self.a(&nn)?;
        let a_prev = self.a(&prev)?;
        let b = self.b(&nn)?;
        let b_prev = self.b(&prev)?;
        let ah = self.a_hat(&nn)?;
        let ah_prev = self.a_hat(&prev)?;
        let bh = self.b_hat(&nn)?;
        let bh_prev = self.b_hat(&prev)?;
        let dd = self.d(x)? * self.d_hat(x)?;

        let k = self.case.recurrence_sign();
        let big_a = &k * rec.a_at(&nn)?;
        let big_c = &k * rec.c_at(&nn)?;
        let hat_a = &k * rec_hat.a_at(&nn)?;
        let hat_c = &k * rec_hat.c_at(&nn)?;
        let lam = &k * rec.lambda(x);
        let lam_hat = &k * rec_hat.lambda(&xh);

        Ok(vec![
            (Requirement::HatLower, &a * &ah_prev - &hat_c),
            (Requirement::Lower, &a_prev * &ah_prev - &big_c),
            (Requirement::HatUpper, &b * &bh - &hat_a),
            (Requirement::Upper, &b * &bh_prev - &big_a),
            (
                Requirement::HatDiagonal,
                &a * &bh_prev + &ah * &b + &hat_a + &hat_c - (&dd - &lam_hat),
            ),
            (
                Requirement::Diagonal,
                &a * &bh_prev + &ah_prev * &b_prev + &big_a + &big_c - (&dd - &lam),
            ),
            (
                Requirement::LambdaDifference,
                &lam - &lam_hat
                    - (&ah_prev * (&a - &a_prev - &b_prev) + &b * (&ah + &bh - &bh_prev)),
            ),
        ])
    }

    /// Residues of the recurrences for `ŷ_n` and `y_n` obtained by
    /// eliminating the partner family, for `1 ≤ n < N`.
    pub fn verify_elimination(&self, n: usize, x: &Rational) -> Result<(Rational, Rational)> {
        assert!(n >= 1, "elimination needs n ≥ 1");
        let nn = from_usize(n);
        let prev = &nn - int(1);
        let xh = self.x_hat(x);
        let dd = self.d(x)? * self.d_hat(x)?;

        let yh_prev = self.hatted.eval(n - 1, &xh)?;
        let yh_n = self.hatted.eval(n, &xh)?;
        let hat_eq = self.a(&nn)? * (self.a_hat(&prev)? * &yh_prev + self.b_hat(&prev)? * &yh_n)
            + self.b(&nn)? * (self.a_hat(&nn)? * &yh_n + self.hatted_next(&self.b_hat(&nn)?, n, &xh)?)
            - &dd * &yh_n;

        let y_prev = self.params.eval(n - 1, x)?;
        let y_n = self.params.eval(n, x)?;
        let y_next = self.params.eval(n + 1, x)?;
        let eq = self.a_hat(&prev)? * (self.a(&prev)? * &y_prev + self.b(&prev)? * &y_n)
            + self.b_hat(&prev)? * (self.a(&nn)? * &y_n + self.b(&nn)? * &y_next)
            - &dd * &y_n;
        Ok((hat_eq, eq))
    }
}

/// The coefficient identities a doubling sextet must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Requirement {
    /// `a(n)â(n−1) = Ĉ(n)`
    HatLower,
    /// `a(n−1)â(n−1) = C(n)`
    Lower,
    /// `b(n)b̂(n) = Â(n)`
    HatUpper,
    /// `b(n)b̂(n−1) = A(n)`
    Upper,
    /// `a(n)b̂(n−1) + â(n)b(n) + Â(n) + Ĉ(n) = d d̂ − Λ̂(x̂)`
    HatDiagonal,
    /// `a(n)b̂(n−1) + â(n−1)b(n−1) + A(n) + C(n) = d d̂ − Λ(x)`
    Diagonal,
    /// `Λ(x) − Λ̂(x̂) = â(n−1)[a(n)−a(n−1)−b(n−1)] + b(n)[â(n)+b̂(n)−b̂(n−1)]`
    LambdaDifference,
}

impl fmt::Display for Requirement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Requirement::HatLower => "a(n)ahat(n-1) = Chat(n)",
            Requirement::Lower => "a(n-1)ahat(n-1) = C(n)",
            Requirement::HatUpper => "b(n)bhat(n) = Ahat(n)",
            Requirement::Upper => "b(n)bhat(n-1) = A(n)",
            Requirement::HatDiagonal => "hatted diagonal balance",
            Requirement::Diagonal => "diagonal balance",
            Requirement::LambdaDifference => "Lambda difference",
        })
    }
}
