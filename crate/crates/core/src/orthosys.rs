//! Doubled orthogonal systems: the polynomials `P_n(q)` whose even members
//! are one family in `q²` and whose odd members are `q` times the partner
//! family, orthogonal for a common weight on a support of square roots.
//!
//! Built for the dual Hahn I, Hahn I and Hahn II doubles.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{binom_shifted, factorial, from_usize, int, pochhammer, rat, Rational, SqrtRational, SurdSum};
use crate::doubles::DoubleCase;
use crate::error::{Error, Result};
use crate::polyfam::{DualHahnParams, FamilyParams, HahnParams};

/// `scale · (even + odd·q)` with rational `even`, `odd`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvenOddValue {
    pub scale: SqrtRational,
    pub even: Rational,
    pub odd: Rational,
}

impl EvenOddValue {
    /// The value at `q` as an exact sum of surds.
    pub fn at(&self, q: &SqrtRational) -> SurdSum {
        let mut out = SurdSum::new();
        out.add_surd(&(&self.scale * &SqrtRational::from_rational(&self.even)));
        out.add_surd(&(&(&self.scale * &SqrtRational::from_rational(&self.odd)) * q));
        out
    }

    pub fn to_f64(&self, q: f64) -> f64 {
        self.scale.to_f64() * (crate::arith::to_f64(&self.even) + crate::arith::to_f64(&self.odd) * q)
    }
}

/// A support point `q` with `q² ↦ k ∈ 0..=N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportPoint {
    pub q: SqrtRational,
    pub k: usize,
}

/// Polynomial `scale · Σ c_i q^i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledPoly {
    pub scale: SqrtRational,
    pub coeffs: Vec<Rational>,
}

impl ScaledPoly {
    pub fn degree(&self) -> Option<usize> {
        if self.scale.is_zero() {
            return None;
        }
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Value at `q`, split into even and odd powers.
    pub fn eval(&self, q: &SqrtRational) -> EvenOddValue {
        let q2 = q.square();
        let mut even = Rational::zero();
        let mut odd = Rational::zero();
        let mut pow = Rational::one();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i % 2 == 0 {
                even += c * &pow;
            } else {
                odd += c * &pow;
                pow *= &q2;
            }
        }
        EvenOddValue {
            scale: self.scale.clone(),
            even,
            odd,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DoubledSystem {
    case: DoubleCase,
    params: FamilyParams,
    partner: FamilyParams,
    support: Vec<SupportPoint>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrthogonalityResidue {
    pub n: usize,
    pub m: usize,
    pub zero: bool,
    pub residue: String,
}

fn sign_of(j: usize) -> i8 {
    if j.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `y(λ)` as coefficients in `λ`, from `Σ_k t_k ∏_{j<k}(j(j+c) − λ)`.
fn lambda_series_coeffs(terms: &[Rational], c: &Rational) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); terms.len()];
    let mut prod = vec![Rational::one()];
    for (k, t) in terms.iter().enumerate() {
        for (i, p) in prod.iter().enumerate() {
            out[i] += t * p;
        }
        let j = from_usize(k);
        let root = &j * (&j + c);
        let mut next = vec![Rational::zero(); prod.len() + 1];
        for (i, p) in prod.iter().enumerate() {
            next[i] += &root * p;
            next[i + 1] -= p;
        }
        prod = next;
    }
    out
}

/// Coefficients of `p(s + t)` in `t`, given those of `p` in `s`.
fn shift_poly(p: &[Rational], t0: &Rational) -> Vec<Rational> {
    // Horner in the shifted variable
    let mut out: Vec<Rational> = Vec::new();
    for c in p.iter().rev() {
        let mut next = vec![Rational::zero(); out.len() + 1];
        for (i, v) in out.iter().enumerate() {
            next[i + 1] += v;
            next[i] += v * t0;
        }
        next[0] += c;
        out = next;
    }
    out
}

/// `p(q²)` as coefficients in `q`, optionally multiplied by `q`.
fn in_q(p_of_square: &[Rational], times_q: bool) -> Vec<Rational> {
    let offset = usize::from(times_q);
    let mut out = vec![Rational::zero(); 2 * p_of_square.len() + offset];
    for (i, c) in p_of_square.iter().enumerate() {
        out[2 * i + offset] = c.clone();
    }
    while out.len() > 1 && out.last().is_some_and(Zero::is_zero) {
        out.pop();
    }
    out
}

fn dual_hahn_coeffs(p: &DualHahnParams, deg: usize) -> Vec<Rational> {
    let d = from_usize(deg);
    let terms: Vec<Rational> = (0..=deg)
        .map(|k| {
            pochhammer(&-&d, k) / (pochhammer(&(&p.gamma + int(1)), k) * pochhammer(&-from_usize(p.n_max), k) * factorial(k))
        })
        .collect();
    lambda_series_coeffs(&terms, &p.lambda_shift())
}

/// `Q_n(x)` as coefficients in `x`, from `Σ_k t_k (−x)_k`.
fn hahn_coeffs(p: &HahnParams, deg: usize) -> Vec<Rational> {
    let d = from_usize(deg);
    let s1 = &d + &p.alpha + &p.beta + int(1);
    let mut out = vec![Rational::zero(); deg + 1];
    let mut prod = vec![Rational::one()];
    for k in 0..=deg {
        let t = pochhammer(&-&d, k) * pochhammer(&s1, k)
            / (pochhammer(&(&p.alpha + int(1)), k) * pochhammer(&-from_usize(p.n_max), k) * factorial(k));
        for (i, v) in prod.iter().enumerate() {
            out[i] += &t * v;
        }
        // (−x)_{k+1} = (−x)_k (k − x)
        let j = from_usize(k);
        let mut next = vec![Rational::zero(); prod.len() + 1];
        for (i, v) in prod.iter().enumerate() {
            next[i] += &j * v;
            next[i + 1] -= v;
        }
        prod = next;
    }
    out
}

impl DoubledSystem {
    pub fn new(case: DoubleCase, params: &FamilyParams) -> Result<Self> {
        let (partner, support) = match (case, params) {
            (DoubleCase::DualHahnI, FamilyParams::DualHahn(p)) => {
                if p.gamma <= int(-1) || p.delta <= int(-1) {
                    return Err(Error::InadmissibleParams("the dual Hahn I system needs γ, δ > −1".into()));
                }
                let partner = DualHahnParams::new(&p.gamma + int(1), &p.delta + int(1), p.n_max.saturating_sub(1));
                let mut support = vec![SupportPoint { q: SqrtRational::zero(), k: 0 }];
                for k in 1..=p.n_max {
                    let e = SqrtRational::new(1, p.lambda(&from_usize(k)));
                    support.push(SupportPoint { q: -e.clone(), k });
                    support.push(SupportPoint { q: e, k });
                }
                (FamilyParams::DualHahn(partner), support)
            }
            (DoubleCase::HahnI | DoubleCase::HahnII, FamilyParams::Hahn(p)) => {
                if p.alpha <= int(-1) || p.beta <= int(-1) {
                    return Err(Error::InadmissibleParams("the Hahn systems need α, β > −1".into()));
                }
                let one = case == DoubleCase::HahnI;
                let partner = HahnParams::new(
                    &p.alpha + int(1),
                    p.beta.clone(),
                    if one { p.n_max } else { p.n_max.saturating_sub(1) },
                );
                let mut support = Vec::new();
                if !one {
                    support.push(SupportPoint { q: SqrtRational::zero(), k: 0 });
                }
                for k in usize::from(!one)..=p.n_max {
                    let square = if one { from_usize(k) + &p.alpha + int(1) } else { from_usize(k) };
                    let e = SqrtRational::new(1, square);
                    support.push(SupportPoint { q: -e.clone(), k });
                    support.push(SupportPoint { q: e, k });
                }
                (FamilyParams::Hahn(partner), support)
            }
            (DoubleCase::DualHahnI | DoubleCase::HahnI | DoubleCase::HahnII, _) => {
                return Err(Error::FamilyMismatch {
                    expected: case.family().name(),
                    found: params.family().name(),
                })
            }
            _ => {
                return Err(Error::Unsupported(format!(
                    "doubled systems are built for DualHahnI, HahnI and HahnII, not {case}"
                )))
            }
        };
        let mut support = support;
        support.sort_by(|a, b| a.q.cmp(&b.q));
        Ok(Self {
            case,
            params: params.clone(),
            partner,
            support,
        })
    }

    pub fn case(&self) -> DoubleCase {
        self.case
    }

    pub fn dim(&self) -> usize {
        self.support.len()
    }

    /// Support points in increasing order.
    pub fn support(&self) -> &[SupportPoint] {
        &self.support
    }

    fn n_max(&self) -> usize {
        self.params.n_max()
    }

    /// Prefactor of `P_n`: `(−1)^j/√2` for `n = 2j`, and the displayed
    /// square-root factor for `n = 2j+1`.
    fn scale(&self, n: usize) -> Result<SqrtRational> {
        let j = n / 2;
        let jj = from_usize(j);
        let big = from_usize(self.n_max());
        if n.is_multiple_of(2) {
            return Ok(SqrtRational::new(sign_of(j), rat(1, 2)));
        }
        let radicand = match &self.params {
            FamilyParams::DualHahn(p) => {
                let g1 = &p.gamma + int(1);
                (&jj + &g1) * (&big - &jj) / (&g1 * &g1 * &big * &big)
            }
            FamilyParams::Hahn(p) => {
                let (a, s) = (&p.alpha, &p.alpha + &p.beta);
                let a1 = a + int(1);
                if self.case == DoubleCase::HahnI {
                    (&jj + &a1) * (&jj + &s + int(1)) * (int(2) * &jj + int(2) + &s)
                        / ((&jj + &big + &s + int(2)) * (int(2) * &jj + &s + int(1)) * &a1 * &a1)
                } else {
                    (&big - &jj) * (&jj + &a1) * (&jj + &s + int(1)) * (int(2) * &jj + &s + int(2))
                        / ((int(2) * &jj + &s + int(1)) * &a1 * &a1 * &big * &big)
                }
            }
            _ => unreachable!("checked in new"),
        };
        Ok(SqrtRational::new(-sign_of(j), radicand / int(2)))
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        if n >= self.dim() {
            Err(Error::DegreeOutOfRange { deg: n, max: self.dim() - 1 })
        } else {
            Ok(())
        }
    }

    /// `P_n(q)` at a support point, from the family evaluated at the grid
    /// point the support point maps to.
    pub fn eval(&self, n: usize, point: &SupportPoint) -> Result<EvenOddValue> {
        self.check_degree(n)?;
        let j = n / 2;
        let scale = self.scale(n)?;
        let k = from_usize(point.k);
        if n.is_multiple_of(2) {
            return Ok(EvenOddValue {
                scale,
                even: self.params.eval(j, &k)?,
                odd: Rational::zero(),
            });
        }
        let shifted = match self.case {
            DoubleCase::HahnI => k,
            _ => &k - int(1),
        };
        Ok(EvenOddValue {
            scale,
            even: Rational::zero(),
            odd: self.partner.eval(j, &shifted)?,
        })
    }

    /// `P_n` at an arbitrary rational or surd `q` with `q²` rational, by
    /// evaluating the explicit polynomial in `q`.
    pub fn polynomial(&self, n: usize) -> Result<ScaledPoly> {
        self.check_degree(n)?;
        let j = n / 2;
        let scale = self.scale(n)?;
        let coeffs = match (&self.params, &self.partner) {
            (FamilyParams::DualHahn(p), FamilyParams::DualHahn(ph)) => {
                if n.is_multiple_of(2) {
                    in_q(&dual_hahn_coeffs(p, j), false)
                } else {
                    // argument q² − γ − δ − 2
                    let shift = -(&p.gamma + &p.delta + int(2));
                    in_q(&shift_poly(&dual_hahn_coeffs(ph, j), &shift), true)
                }
            }
            (FamilyParams::Hahn(p), FamilyParams::Hahn(ph)) => {
                let base = if n.is_multiple_of(2) { p } else { ph };
                let shift = match self.case {
                    DoubleCase::HahnI => -(&p.alpha + int(1)),
                    _ if n % 2 == 1 => int(-1),
                    _ => int(0),
                };
                in_q(&shift_poly(&hahn_coeffs(base, j), &shift), n % 2 == 1)
            }
            _ => unreachable!("checked in new"),
        };
        Ok(ScaledPoly { scale, coeffs })
    }

    /// Weight at a support point as displayed, including the doubled
    /// `q = 0` point where the display has `1 + δ_{q,0}`.
    pub fn weight(&self, point: &SupportPoint) -> Result<Rational> {
        let k = point.k;
        let kk = from_usize(k);
        let doubled = if point.q.is_zero() { int(2) } else { int(1) };
        let w = match &self.params {
            FamilyParams::DualHahn(p) => {
                let (g, d, n) = (&p.gamma, &p.delta, p.n_max);
                let c = g + d + int(1);
                let sign = if k.is_multiple_of(2) { int(1) } else { int(-1) };
                sign * (int(2) * &kk + &c) * pochhammer(&(g + int(1)), k) * pochhammer(&-from_usize(n), k) * factorial(n)
                    / (pochhammer(&(&kk + &c), n + 1) * pochhammer(&(d + int(1)), k) * factorial(k))
            }
            FamilyParams::Hahn(p) => {
                let n = p.n_max;
                binom_shifted(&p.alpha, k) * binom_shifted(&p.beta, n - k)
            }
            _ => unreachable!("checked in new"),
        };
        Ok(w * doubled)
    }

    /// Right-hand side of the orthogonality relation for `P_n`, indexed by
    /// `⌊n/2⌋`.
    pub fn norm(&self, n: usize) -> Result<Rational> {
        self.check_degree(n)?;
        let j = n / 2;
        Ok(match &self.params {
            FamilyParams::DualHahn(p) => {
                int(1) / (binom_shifted(&p.gamma, j) * binom_shifted(&p.delta, p.n_max - j))
            }
            FamilyParams::Hahn(p) => {
                let (a, b, big) = (&p.alpha, &p.beta, p.n_max);
                let s1 = from_usize(j) + a + b + int(1);
                let sign = if j.is_multiple_of(2) { int(1) } else { int(-1) };
                sign * pochhammer(&s1, big + 1) * pochhammer(&(b + int(1)), j) * factorial(j)
                    / ((from_usize(j) + &s1) * pochhammer(&(a + int(1)), j) * pochhammer(&-from_usize(big), j) * factorial(big))
            }
            _ => unreachable!("checked in new"),
        })
    }

    /// `Σ_q w(q) P_n(q) P_m(q) − norm(n) δ_{nm}` in exact surd arithmetic.
    pub fn inner_product_residue(&self, n: usize, m: usize) -> Result<SurdSum> {
        let mut sum = SurdSum::new();
        for point in &self.support {
            let w = SqrtRational::from_rational(&self.weight(point)?);
            let a = self.eval(n, point)?.at(&point.q);
            let b = self.eval(m, point)?.at(&point.q);
            sum.add_sum(&a.product(&b).scale(&w));
        }
        if n == m {
            sum.add_rational(-self.norm(n)?);
        }
        Ok(sum)
    }

    pub fn verify_orthogonality(&self) -> Result<Vec<OrthogonalityResidue>> {
        let mut out = Vec::new();
        for n in 0..self.dim() {
            for m in n..self.dim() {
                let r = self.inner_product_residue(n, m)?;
                out.push(OrthogonalityResidue {
                    n,
                    m,
                    zero: r.is_zero(),
                    residue: r.to_string(),
                });
            }
        }
        Ok(out)
    }

    /// Whether the support equals the spectrum of the doubled system's
    /// matrix as a multiset.
    pub fn support_matches_spectrum(&self) -> Result<bool> {
        let spectrum = crate::specmat::double_spectrum(self.case, &self.params)?.entries()?;
        let support: Vec<SqrtRational> = self.support.iter().map(|p| p.q.clone()).collect();
        Ok(spectrum == support)
    }

    /// `P_n` has degree exactly `n` in `q` and agrees with [`Self::eval`] on
    /// every support point.
    pub fn verify_degree(&self, n: usize) -> Result<bool> {
        let poly = self.polynomial(n)?;
        if poly.degree() != Some(n) {
            return Ok(false);
        }
        for point in &self.support {
            let mut diff = poly.eval(&point.q).at(&point.q);
            let direct = self.eval(n, point)?.at(&point.q);
            diff.add_sum(&direct.negated());
            if !diff.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
