//! Christoffel and Geronimus transforms.
//!
//! For a parameter `ν` the kernel partner of `y_n` is
//!
//! ```text
//! P_n(x) = (y_{n+1}(x) − a_n y_n(x)) / (Λ(x) − Λ(ν)),   a_n = y_{n+1}(ν)/y_n(ν)
//! ```
//!
//! and the original polynomials come back as `y_n = A(n)P_n − b_n P_{n−1}`
//! with `b_0 = 0`, `b_n = C(n)/a_{n−1}`.

use num_traits::Zero;
use serde::Serialize;

use crate::arith::{checked_div, from_usize, int, Rational};
use crate::doubles::{coefficients, DoubleCase};
use crate::error::{Error, Result};
use crate::polyfam::{FamilyParams, RecurrenceData};

/// `ν` together with `y_k(ν)` for `k = 0..=N`, from which `a_n` and `b_n`
/// are read off.
#[derive(Debug, Clone)]
pub struct ChristoffelData {
    params: FamilyParams,
    rec: RecurrenceData,
    nu: Rational,
    lambda_nu: Rational,
    at_nu: Vec<Rational>,
}

impl ChristoffelData {
    pub fn new(params: &FamilyParams, nu: Rational) -> Result<Self> {
        let at_nu = (0..=params.n_max())
            .map(|k| params.eval(k, &nu))
            .collect::<Result<Vec<_>>>()?;
        let rec = params.recurrence();
        Ok(Self {
            params: params.clone(),
            lambda_nu: rec.lambda(&nu),
            rec,
            nu,
            at_nu,
        })
    }

    /// Data at the classified `ν` of a doubling case.
    pub fn for_case(case: DoubleCase, params: &FamilyParams) -> Result<Self> {
        Self::new(params, case.christoffel_nu(params)?)
    }

    pub fn nu(&self) -> &Rational {
        &self.nu
    }

    pub fn params(&self) -> &FamilyParams {
        &self.params
    }

    /// `y_n(ν)`.
    pub fn value_at_nu(&self, n: usize) -> Result<&Rational> {
        self.at_nu.get(n).ok_or(Error::DegreeOutOfRange {
            deg: n,
            max: self.params.n_max(),
        })
    }

    /// `a_n = y_{n+1}(ν)/y_n(ν)` for `0 ≤ n < N`.
    pub fn a_seq(&self, n: usize) -> Result<Rational> {
        let den = self.value_at_nu(n)?;
        if den.is_zero() {
            return Err(Error::ZeroAtNu { deg: n });
        }
        Ok(self.value_at_nu(n + 1)? / den)
    }

    /// `b_n = C(n)/a_{n−1}`, with `b_0 = 0`.
    pub fn b_seq(&self, n: usize) -> Result<Rational> {
        if n == 0 {
            return Ok(int(0));
        }
        let prev = self.a_seq(n - 1)?;
        if prev.is_zero() {
            return Err(Error::ZeroAtNu { deg: n });
        }
        Ok(self.rec.c(n)? / prev)
    }

    /// `Λ(x) − Λ(ν)`, refusing points where it vanishes.
    fn gap(&self, x: &Rational) -> Result<Rational> {
        let gap = self.rec.lambda(x) - &self.lambda_nu;
        if gap.is_zero() {
            return Err(Error::SupportCollision { x: x.clone() });
        }
        Ok(gap)
    }

    /// Whether `Λ(x) = Λ(ν)`, where the kernel is not evaluated.
    pub fn collides(&self, x: &Rational) -> bool {
        (self.rec.lambda(x) - &self.lambda_nu).is_zero()
    }

    /// `P_n(x)` for `0 ≤ n < N`.
    pub fn kernel(&self, n: usize, x: &Rational) -> Result<Rational> {
        let gap = self.gap(x)?;
        let a_n = self.a_seq(n)?;
        let num = self.params.eval(n + 1, x)? - a_n * self.params.eval(n, x)?;
        Ok(num / gap)
    }

    /// Residues of `b_n a_{n−1} = C(n)` (zero by construction at `n = 0`)
    /// and `A(n)a_n + b_n = A(n) + C(n) + Λ(ν)`.
    pub fn coefficient_residues(&self, n: usize) -> Result<(Rational, Rational)> {
        let (big_a, big_c) = (self.rec.a(n)?, self.rec.c(n)?);
        let b_n = self.b_seq(n)?;
        let lower = if n == 0 {
            b_n.clone() - &big_c
        } else {
            &b_n * self.a_seq(n - 1)? - &big_c
        };
        let diagonal = &big_a * self.a_seq(n)? + &b_n - (&big_a + &big_c + &self.lambda_nu);
        Ok((lower, diagonal))
    }
}

pub fn christoffel_kernel(params: &FamilyParams, nu: &Rational, n: usize, x: &Rational) -> Result<Rational> {
    ChristoffelData::new(params, nu.clone())?.kernel(n, x)
}

/// `A(n)P_n(x) − b_n P_{n−1}(x)` from the kernel values `P_0(x)..=P_n(x)`.
pub fn geronimus_reconstruct(data: &ChristoffelData, kernel: &[Rational], n: usize) -> Result<Rational> {
    let current = kernel.get(n).ok_or(Error::DegreeOutOfRange {
        deg: n,
        max: kernel.len().saturating_sub(1),
    })?;
    let mut out = data.rec.a(n)? * current;
    if n > 0 {
        out -= data.b_seq(n)? * &kernel[n - 1];
    }
    Ok(out)
}

/// `y_n(x)` minus its Geronimus reconstruction, for `0 ≤ n < N`.
pub fn round_trip_residue(data: &ChristoffelData, n: usize, x: &Rational) -> Result<Rational> {
    let kernel = (0..=n)
        .map(|k| data.kernel(k, x))
        .collect::<Result<Vec<_>>>()?;
    Ok(geronimus_reconstruct(data, &kernel, n)? - data.params.eval(n, x)?)
}

/// Multiplier `κ_n` in `P_n(x) = κ_n ŷ_n(x̂)` at the classified `ν`.
pub fn kernel_constant(case: DoubleCase, params: &FamilyParams, n: usize) -> Result<Rational> {
    use DoubleCase::*;
    let nn = from_usize(n);
    let big_n = from_usize(params.n_max());
    let (num, den) = match params {
        FamilyParams::DualHahn(p) => {
            let g1 = &p.gamma + int(1);
            match case {
                DualHahnI => (int(-1), &big_n * g1),
                DualHahnII => (int(-1), &big_n * (&nn + &g1)),
                DualHahnIII => (int(1), g1 * (&nn - &big_n)),
                _ => return Err(mismatch(case, params)),
            }
        }
        FamilyParams::Hahn(p) => {
            let top = int(2) * &nn + &p.alpha + &p.beta + int(2);
            let a1 = &p.alpha + int(1);
            let den = match case {
                HahnI => a1 * (&big_n - &nn),
                HahnII => &big_n * a1,
                HahnIII => (&big_n - &nn) * (&nn + a1),
                HahnIV => &big_n * (&nn + a1),
                _ => return Err(mismatch(case, params)),
            };
            (top, den)
        }
        FamilyParams::Racah(p) => {
            let top = int(2) * &nn + &p.alpha + &p.beta + int(2);
            let a1 = &p.alpha + int(1);
            let g1 = &p.gamma + int(1);
            let bd1 = &p.beta + &p.delta + int(1);
            let den = match case {
                RacahI => &g1 * (&nn + bd1) * (&nn + a1),
                RacahII => bd1 * (&nn + g1) * (&nn + a1),
                RacahIII => g1 * bd1 * a1,
                RacahIV => a1 * (&nn + g1) * (&nn + bd1),
                _ => return Err(mismatch(case, params)),
            };
            (top, den)
        }
        FamilyParams::Krawtchouk(_) => return Err(mismatch(case, params)),
    };
    checked_div(&num, &den, "kernel constant")
}

fn mismatch(case: DoubleCase, params: &FamilyParams) -> Error {
    Error::FamilyMismatch {
        expected: case.family().name(),
        found: params.family().name(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelResidue {
    pub n: usize,
    pub x: usize,
    #[serde(serialize_with = "crate::arith::serialize_rational")]
    pub residue: Rational,
}

/// `P_n(x) − κ_n ŷ_n(x̂)` over `0 ≤ n < N`, `x = 0..=N`, skipping the points
/// with `Λ(x) = Λ(ν)`.
pub fn verify_same_family(case: DoubleCase, params: &FamilyParams) -> Result<Vec<KernelResidue>> {
    let sextet = coefficients(case, params)?;
    let data = ChristoffelData::for_case(case, params)?;
    let mut out = Vec::new();
    for n in 0..params.n_max() {
        let kappa = kernel_constant(case, params, n)?;
        for x in 0..=params.n_max() {
            let xr = from_usize(x);
            if data.collides(&xr) {
                continue;
            }
            let partner = sextet.hatted().eval(n, &(&xr + sextet.x_shift()))?;
            let residue = data.kernel(n, &xr)? - &kappa * partner;
            out.push(KernelResidue { n, x, residue });
        }
    }
    Ok(out)
}

/// Residues of the coefficient identities for `0 ≤ n < N` and of the
/// Geronimus round trip on the non-colliding grid points.
pub fn verify_geronimus(data: &ChristoffelData) -> Result<Vec<KernelResidue>> {
    let big_n = data.params.n_max();
    let mut out = Vec::new();
    for x in 0..=big_n {
        let xr = from_usize(x);
        if data.collides(&xr) {
            continue;
        }
        let kernel = (0..big_n)
            .map(|k| data.kernel(k, &xr))
            .collect::<Result<Vec<_>>>()?;
        for n in 0..big_n {
            let residue = geronimus_reconstruct(data, &kernel, n)? - data.params.eval(n, &xr)?;
            out.push(KernelResidue { n, x, residue });
        }
    }
    Ok(out)
}
