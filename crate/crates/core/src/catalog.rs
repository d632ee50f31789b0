//! Named matrix families with closed-form spectra, parameterized by `N`.
//!
//! Selectors: `kac`, `kac-odd`, `kac-even`, `double:<case>`,
//! `nonsym:<case>`.

use std::fmt;

use crate::arith::{format_rational, from_usize, int, Rational, SqrtRational};
use crate::doubles::DoubleCase;
use crate::error::{Error, Result};
use crate::numeig::FloatTridiag;
use crate::polyfam::{DualHahnParams, Family, FamilyParams, HahnParams, RacahParams, RacahTruncation};
use crate::specmat::{
    charpoly_from_products, double_matrix, double_spectrum, extended_kac_even, extended_kac_odd, nonsymmetric_form,
    symmetrize, sylvester_kac, verify_spectrum_exact, Spectrum, SymTridiag, TwoDiagonal,
};

/// Named parameters as given on a command line.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParamSet {
    pub alpha: Option<Rational>,
    pub beta: Option<Rational>,
    pub gamma: Option<Rational>,
    pub delta: Option<Rational>,
}

impl ParamSet {
    fn need(&self, name: &str, v: &Option<Rational>, who: &str) -> Result<Rational> {
        v.clone()
            .ok_or_else(|| Error::InvalidParams(format!("{who} needs --{name}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatrixFamily {
    Kac,
    KacOdd { gamma: Rational, delta: Rational },
    KacEven { gamma: Rational, delta: Rational },
    /// Symmetric matrix of a doubled system. `params` holds the free
    /// parameters: `(γ, δ)` for dual Hahn, `(α, β)` for Hahn, and
    /// `(β, γ, δ)` for Racah, whose `α = −N−1`.
    Double { case: DoubleCase, params: Vec<Rational> },
    /// Non-symmetric rational form of a dual Hahn double.
    NonSymmetric { case: DoubleCase, gamma: Rational, delta: Rational },
}

/// An exactly represented matrix: rational two-diagonal, or symmetric with
/// square-root entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactMatrix {
    TwoDiagonal(TwoDiagonal),
    Symmetric(SymTridiag),
}

impl ExactMatrix {
    pub fn dim(&self) -> usize {
        match self {
            ExactMatrix::TwoDiagonal(m) => m.dim(),
            ExactMatrix::Symmetric(m) => m.dim(),
        }
    }

    /// Off-diagonal entries `(row, col, value)`, 0-based, row-major.
    pub fn entries(&self) -> Vec<(usize, usize, SqrtRational)> {
        let (upper, lower): (Vec<SqrtRational>, Vec<SqrtRational>) = match self {
            ExactMatrix::TwoDiagonal(m) => (
                m.upper().iter().map(SqrtRational::from_rational).collect(),
                m.lower().iter().map(SqrtRational::from_rational).collect(),
            ),
            ExactMatrix::Symmetric(m) => (m.off().to_vec(), m.off().to_vec()),
        };
        let mut out = Vec::new();
        for i in 0..self.dim() {
            if i > 0 && !lower[i - 1].is_zero() {
                out.push((i, i - 1, lower[i - 1].clone()));
            }
            if i < upper.len() && !upper[i].is_zero() {
                out.push((i, i + 1, upper[i].clone()));
            }
        }
        out
    }

    /// Products `b_i c_i`, rational in both representations.
    pub fn products(&self) -> Vec<Rational> {
        match self {
            ExactMatrix::TwoDiagonal(m) => m.products(),
            ExactMatrix::Symmetric(m) => m.off().iter().map(SqrtRational::square).collect(),
        }
    }
}

fn case_family_arity(case: DoubleCase) -> usize {
    match case.family() {
        Family::Racah => 3,
        _ => 2,
    }
}

impl MatrixFamily {
    pub fn parse(selector: &str, p: &ParamSet) -> Result<Self> {
        let who = selector;
        if let Some(case) = selector.strip_prefix("double:") {
            let case: DoubleCase = case.parse()?;
            let params = match case.family() {
                Family::DualHahn => vec![p.need("gamma", &p.gamma, who)?, p.need("delta", &p.delta, who)?],
                Family::Hahn => vec![p.need("alpha", &p.alpha, who)?, p.need("beta", &p.beta, who)?],
                Family::Racah => vec![
                    p.need("beta", &p.beta, who)?,
                    p.need("gamma", &p.gamma, who)?,
                    p.need("delta", &p.delta, who)?,
                ],
                Family::Krawtchouk => unreachable!("no Krawtchouk doubles"),
            };
            return Ok(MatrixFamily::Double { case, params });
        }
        if let Some(case) = selector.strip_prefix("nonsym:") {
            let case: DoubleCase = case.parse()?;
            if case.family() != Family::DualHahn {
                return Err(Error::Unsupported(format!("non-symmetric forms exist for dual Hahn doubles, not {case}")));
            }
            return Ok(MatrixFamily::NonSymmetric {
                case,
                gamma: p.need("gamma", &p.gamma, who)?,
                delta: p.need("delta", &p.delta, who)?,
            });
        }
        match selector {
            "kac" => Ok(MatrixFamily::Kac),
            "kac-odd" => Ok(MatrixFamily::KacOdd {
                gamma: p.need("gamma", &p.gamma, who)?,
                delta: p.need("delta", &p.delta, who)?,
            }),
            "kac-even" => Ok(MatrixFamily::KacEven {
                gamma: p.need("gamma", &p.gamma, who)?,
                delta: p.need("delta", &p.delta, who)?,
            }),
            _ => Err(Error::parse(
                "family",
                format!("unknown family {selector:?}; expected kac, kac-odd, kac-even, double:<case> or nonsym:<case>"),
            )),
        }
    }

    pub fn label(&self) -> String {
        match self {
            MatrixFamily::Kac => "kac".into(),
            MatrixFamily::KacOdd { .. } => "kac-odd".into(),
            MatrixFamily::KacEven { .. } => "kac-even".into(),
            MatrixFamily::Double { case, .. } => format!("double:{case}"),
            MatrixFamily::NonSymmetric { case, .. } => format!("nonsym:{case}"),
        }
    }

    pub fn params_text(&self) -> String {
        let pairs: Vec<(&str, &Rational)> = match self {
            MatrixFamily::Kac => vec![],
            MatrixFamily::KacOdd { gamma, delta }
            | MatrixFamily::KacEven { gamma, delta }
            | MatrixFamily::NonSymmetric { gamma, delta, .. } => vec![("gamma", gamma), ("delta", delta)],
            MatrixFamily::Double { case, params } => {
                let names: &[&str] = match case.family() {
                    Family::DualHahn => &["gamma", "delta"],
                    Family::Hahn => &["alpha", "beta"],
                    _ => &["beta", "gamma", "delta"],
                };
                names.iter().copied().zip(params).collect()
            }
        };
        pairs
            .iter()
            .map(|(k, v)| format!("{k}={}", format_rational(v)))
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn check_n(n: usize) -> Result<()> {
        if n == 0 {
            Err(Error::InvalidParams("N must be at least 1".into()))
        } else {
            Ok(())
        }
    }

    /// The polynomial-family parameters behind a `double:` family at `N`.
    pub fn family_params(&self, n: usize) -> Result<(DoubleCase, FamilyParams)> {
        Self::check_n(n)?;
        let dual = |case: DoubleCase, gamma: &Rational, delta: &Rational| {
            (case, FamilyParams::DualHahn(DualHahnParams::new(gamma.clone(), delta.clone(), n)))
        };
        match self {
            MatrixFamily::Double { case, params } => {
                if params.len() != case_family_arity(*case) {
                    return Err(Error::InvalidParams(format!("{case} takes {} parameters", case_family_arity(*case))));
                }
                let fp = match case.family() {
                    Family::DualHahn => FamilyParams::DualHahn(DualHahnParams::new(params[0].clone(), params[1].clone(), n)),
                    Family::Hahn => FamilyParams::Hahn(HahnParams::new(params[0].clone(), params[1].clone(), n)),
                    _ => FamilyParams::Racah(RacahParams::new(
                        -from_usize(n) - int(1),
                        params[0].clone(),
                        params[1].clone(),
                        params[2].clone(),
                        RacahTruncation::Alpha,
                    )?),
                };
                Ok((*case, fp))
            }
            MatrixFamily::NonSymmetric { case, gamma, delta } => Ok(dual(*case, gamma, delta)),
            _ => Err(Error::Unsupported(format!("{} is not built from a polynomial family", self.label()))),
        }
    }

    pub fn exact(&self, n: usize) -> Result<ExactMatrix> {
        Self::check_n(n)?;
        Ok(match self {
            MatrixFamily::Kac => ExactMatrix::TwoDiagonal(sylvester_kac(n).0),
            MatrixFamily::KacOdd { gamma, delta } => ExactMatrix::TwoDiagonal(extended_kac_odd(n, gamma, delta).0),
            MatrixFamily::KacEven { gamma, delta } => ExactMatrix::TwoDiagonal(extended_kac_even(n, gamma, delta).0),
            MatrixFamily::Double { .. } => {
                let (case, fp) = self.family_params(n)?;
                ExactMatrix::Symmetric(double_matrix(case, &fp)?.0)
            }
            MatrixFamily::NonSymmetric { .. } => {
                let (case, fp) = self.family_params(n)?;
                ExactMatrix::TwoDiagonal(nonsymmetric_form(case, fp.expect_dual_hahn()?)?)
            }
        })
    }

    pub fn spectrum(&self, n: usize) -> Result<Spectrum> {
        Self::check_n(n)?;
        Ok(match self {
            MatrixFamily::Kac => sylvester_kac(n).1,
            MatrixFamily::KacOdd { gamma, delta } => extended_kac_odd(n, gamma, delta).1,
            MatrixFamily::KacEven { gamma, delta } => extended_kac_even(n, gamma, delta).1,
            MatrixFamily::Double { .. } | MatrixFamily::NonSymmetric { .. } => {
                let (case, fp) = self.family_params(n)?;
                double_spectrum(case, &fp)?
            }
        })
    }

    /// Exact characteristic-polynomial certificate of [`Self::spectrum`].
    pub fn certify(&self, n: usize) -> Result<bool> {
        let spectrum = self.spectrum(n)?;
        Ok(match self.exact(n)? {
            ExactMatrix::TwoDiagonal(m) => verify_spectrum_exact(&m, &spectrum),
            m @ ExactMatrix::Symmetric(_) => charpoly_from_products(&m.products()) == spectrum.charpoly(),
        })
    }

    /// The `N` whose matrix has dimension `dim`.
    pub fn n_for_dim(&self, dim: usize) -> Result<usize> {
        let candidates = [dim.checked_sub(1), dim.checked_sub(1).map(|d| d / 2), Some(dim / 2), dim.checked_sub(2).map(|d| d / 2)];
        for n in candidates.into_iter().flatten().filter(|&n| n >= 1) {
            if self.spectrum(n)?.dim() == dim {
                return Ok(n);
            }
        }
        Err(Error::InvalidParams(format!("{} has no matrix of dimension {dim}", self.label())))
    }

    pub fn float_symmetric(&self, n: usize) -> Result<FloatTridiag> {
        match self.exact(n)? {
            ExactMatrix::TwoDiagonal(m) => FloatTridiag::from_exact(&symmetrize(&m)?),
            ExactMatrix::Symmetric(m) => FloatTridiag::from_exact(&m),
        }
    }
}

impl fmt::Display for MatrixFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params = self.params_text();
        if params.is_empty() {
            write!(f, "{}", self.label())
        } else {
            write!(f, "{} {params}", self.label())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn params(g: Rational, d: Rational) -> ParamSet {
        ParamSet {
            gamma: Some(g),
            delta: Some(d),
            ..ParamSet::default()
        }
    }

    #[test]
    fn parse_selectors() {
        let p = params(rat(1, 2), rat(1, 3));
        assert_eq!(MatrixFamily::parse("kac", &p).unwrap(), MatrixFamily::Kac);
        assert_eq!(MatrixFamily::parse("double:DualHahnI", &p).unwrap().label(), "double:DualHahnI");
        assert_eq!(MatrixFamily::parse("nonsym:dual-hahn-iii", &p).unwrap().label(), "nonsym:DualHahnIII");
        assert!(matches!(MatrixFamily::parse("double:HahnI", &p), Err(Error::InvalidParams(_))));
        assert!(matches!(MatrixFamily::parse("nonsym:HahnI", &p), Err(Error::Unsupported(_))));
        assert!(matches!(MatrixFamily::parse("clement", &p), Err(Error::Parse { .. })));
    }

    #[test]
    fn kac_entries() {
        let m = MatrixFamily::Kac.exact(2).unwrap();
        let e: Vec<(usize, usize, f64)> = m.entries().into_iter().map(|(i, j, v)| (i, j, v.to_f64())).collect();
        assert_eq!(e, vec![(0, 1, 1.0), (1, 0, 2.0), (1, 2, 2.0), (2, 1, 1.0)]);
        assert!(matches!(MatrixFamily::Kac.exact(0), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn every_selector_certifies() {
        let dual = params(rat(1, 2), rat(1, 3));
        let hahn = ParamSet {
            alpha: Some(rat(2, 5)),
            beta: Some(rat(3, 4)),
            ..ParamSet::default()
        };
        let racah = ParamSet {
            beta: Some(rat(31, 3)),
            gamma: Some(rat(1, 5)),
            delta: Some(rat(2, 7)),
            ..ParamSet::default()
        };
        let mut families = vec![
            MatrixFamily::Kac,
            MatrixFamily::parse("kac-odd", &dual).unwrap(),
            MatrixFamily::parse("kac-even", &dual).unwrap(),
        ];
        for case in DoubleCase::ALL {
            let p = match case.family() {
                Family::DualHahn => &dual,
                Family::Hahn => &hahn,
                _ => &racah,
            };
            if matches!(case, DoubleCase::RacahII | DoubleCase::RacahIV) {
                continue;
            }
            families.push(MatrixFamily::parse(&format!("double:{case}"), p).unwrap());
            if case.family() == Family::DualHahn {
                families.push(MatrixFamily::parse(&format!("nonsym:{case}"), p).unwrap());
            }
        }
        for f in &families {
            for n in 1..=5 {
                assert!(f.certify(n).unwrap(), "{f} N={n}");
                assert_eq!(f.float_symmetric(n).unwrap().dim(), f.spectrum(n).unwrap().dim(), "{f}");
            }
        }
    }

    #[test]
    fn dimensions_to_n() {
        let p = params(rat(1, 2), rat(1, 2));
        assert_eq!(MatrixFamily::Kac.n_for_dim(101).unwrap(), 100);
        assert_eq!(MatrixFamily::parse("double:DualHahnI", &p).unwrap().n_for_dim(201).unwrap(), 100);
        assert_eq!(MatrixFamily::parse("double:DualHahnIII", &p).unwrap().n_for_dim(202).unwrap(), 100);
        assert_eq!(MatrixFamily::parse("kac-even", &p).unwrap().n_for_dim(200).unwrap(), 100);
        assert!(MatrixFamily::parse("double:DualHahnI", &p).unwrap().n_for_dim(200).is_err());
        assert!(MatrixFamily::Kac.n_for_dim(1).is_err());
    }

    #[test]
    fn nonsym_integer_line() {
        // δ = −γ − 1 gives integer entries
        let f = MatrixFamily::parse("nonsym:DualHahnI", &params(int(1), int(-2))).unwrap();
        let m = f.exact(3).unwrap();
        assert!(m.entries().iter().all(|(_, _, v)| v.to_rational().is_some_and(|r| r.is_integer())));
    }
}
