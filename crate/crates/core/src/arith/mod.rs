//! Exact rational arithmetic: Pochhammer symbols, rational binomials and
//! terminating generalized hypergeometric series.
//!
//! Everything here works over [`Rational`] (arbitrary precision, always in
//! lowest terms), so no result is ever rounded.

mod surd;

pub use surd::{SqrtRational, SurdSum};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `p/q` in lowest terms. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn from_usize(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Returns `m` when `r == -m` for a nonnegative integer `m`.
pub fn as_nonpositive_integer(r: &Rational) -> Option<usize> {
    if r.is_integer() && !r.is_positive() {
        (-r.numer()).to_usize()
    } else {
        None
    }
}

/// Returns `m` when `r == m` for a nonnegative integer `m`.
pub fn as_nonnegative_integer(r: &Rational) -> Option<usize> {
    if r.is_integer() && !r.is_negative() {
        r.numer().to_usize()
    } else {
        None
    }
}

pub fn checked_div(num: &Rational, den: &Rational, what: &str) -> Result<Rational> {
    if den.is_zero() {
        Err(Error::DivisionByZero(what.to_string()))
    } else {
        Ok(num / den)
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Rising factorial `(a)_k = a(a+1)⋯(a+k-1)`, with `(a)_0 = 1`.
pub fn pochhammer(a: &Rational, k: usize) -> Rational {
    let mut acc = Rational::one();
    let mut term = a.clone();
    for _ in 0..k {
        if term.is_zero() {
            return Rational::zero();
        }
        acc *= &term;
        term += Rational::one();
    }
    acc
}

pub fn factorial(k: usize) -> Rational {
    pochhammer(&Rational::one(), k)
}

/// `binom(a + k, k) = (a+1)_k / k!` for rational `a`.
pub fn binom_shifted(a: &Rational, k: usize) -> Rational {
    pochhammer(&(a + Rational::one()), k) / factorial(k)
}

/// Index after which every term of the series vanishes: the smallest `n`
/// such that some numerator equals `-n`.
pub fn termination_index(numerators: &[Rational]) -> Option<usize> {
    numerators.iter().filter_map(as_nonpositive_integer).min()
}

/// Sum of the terminating series
/// `Σ_{k=0}^{n} ∏(a_i)_k / ∏(b_j)_k · z^k / k!`.
///
/// `n` is the smallest index with some `a_i = -n`. Any denominator whose
/// Pochhammer symbol vanishes for `k ≤ n` is a pole.
pub fn hypergeometric_terminating(
    numerators: &[Rational],
    denominators: &[Rational],
    z: &Rational,
) -> Result<Rational> {
    let n = termination_index(numerators).ok_or(Error::NonTerminating)?;
    for d in denominators {
        if let Some(m) = as_nonpositive_integer(d) {
            if m < n {
                return Err(Error::DenominatorPole {
                    param: d.clone(),
                    terminate: n,
                });
            }
        }
    }

    let mut sum = Rational::one();
    let mut term = Rational::one();
    for k in 0..n {
        let kk = from_usize(k);
        let mut num = z.clone();
        for a in numerators {
            num *= a + &kk;
        }
        let mut den = &kk + Rational::one();
        for b in denominators {
            den *= b + &kk;
        }
        term = term * num / den;
        if term.is_zero() {
            break;
        }
        sum += &term;
    }
    Ok(sum)
}

/// Parses `"p/q"` or a plain integer. Whitespace around the tokens is
/// ignored; decimals are rejected so values stay exact.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str, pos: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::parse(pos, format!("expected an integer, found {t:?}")))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let p = parse_int(p, "numerator")?;
            let q = parse_int(q, "denominator")?;
            if q.is_zero() {
                return Err(Error::parse("denominator", "zero denominator"));
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(parse_int(s, "value")?)),
    }
}

/// `p/q` text form, or just `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Serde adapter writing a rational in its `p/q` text form.
pub fn serialize_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Brute-force term-by-term evaluation; shares nothing with the ratio
    // recurrence used in `hypergeometric_terminating`.
    fn series_oracle(num: &[Rational], den: &[Rational], z: &Rational, n: usize) -> Rational {
        (0..=n)
            .map(|k| {
                let top: Rational = num.iter().map(|a| pochhammer(a, k)).product();
                let bottom: Rational = den.iter().map(|b| pochhammer(b, k)).product();
                let mut zk = Rational::one();
                for _ in 0..k {
                    zk *= z;
                }
                top / bottom * zk / factorial(k)
            })
            .sum()
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(&rat(7, 3), 0), int(1));
        assert_eq!(pochhammer(&int(3), 2), int(12));
        assert_eq!(pochhammer(&int(-2), 3), int(0));
        assert_eq!(pochhammer(&rat(1, 2), 3), rat(15, 8));
    }

    #[test]
    fn binomials() {
        assert_eq!(binom_shifted(&int(3), 2), int(10));
        assert_eq!(binom_shifted(&rat(-1, 2), 2), rat(3, 8));
    }

    #[test]
    fn zero_numerator_gives_one() {
        let v = hypergeometric_terminating(&[int(0), rat(1, 3)], &[rat(5, 2)], &int(1)).unwrap();
        assert_eq!(v, int(1));
    }

    #[test]
    fn degree_one_expansion() {
        let (b, c, d, e) = (rat(2, 3), rat(-5, 7), rat(9, 4), rat(1, 5));
        let v = hypergeometric_terminating(
            &[int(-1), b.clone(), c.clone()],
            &[d.clone(), e.clone()],
            &int(1),
        )
        .unwrap();
        assert_eq!(v, int(1) - &b * &c / (&d * &e));
    }

    #[test]
    fn upper_zero_kills_tail() {
        let v = hypergeometric_terminating(&[int(-1), int(1), int(0)], &[int(1), int(-5)], &int(1))
            .unwrap();
        assert_eq!(v, int(1));
    }

    #[test]
    fn error_paths() {
        assert_eq!(
            hypergeometric_terminating(&[rat(1, 2)], &[int(3)], &int(1)),
            Err(Error::NonTerminating)
        );
        assert!(matches!(
            hypergeometric_terminating(&[int(-3), int(2)], &[int(-1)], &int(1)),
            Err(Error::DenominatorPole { .. })
        ));
        // −N with N equal to the termination index is fine.
        assert!(hypergeometric_terminating(&[int(-3), int(2)], &[int(-3)], &int(1)).is_ok());
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational(" -4 ").unwrap(), int(-4));
        assert_eq!(parse_rational("-1/2").unwrap(), rat(-1, 2));
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1/0").is_err());
        assert_eq!(format_rational(&rat(-6, 4)), "-3/2");
        assert_eq!(format_rational(&int(5)), "5");
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-40i64..40, 1i64..9).prop_map(|(p, q)| rat(p, q))
    }

    proptest! {
        #[test]
        fn pochhammer_splits(a in small_rational(), j in 0usize..6, k in 0usize..6) {
            let jj = from_usize(j);
            prop_assert_eq!(pochhammer(&a, j + k), pochhammer(&a, j) * pochhammer(&(&a + jj), k));
        }

        #[test]
        fn series_matches_oracle(
            n in 0usize..6,
            b in small_rational(),
            c in small_rational(),
            d in (1i64..30, 1i64..7).prop_map(|(p, q)| rat(p, q)),
            e in (1i64..30, 1i64..7).prop_map(|(p, q)| rat(p, q)),
            z in small_rational(),
        ) {
            let num = vec![int(-(n as i64)), b, c];
            let den = vec![d, e];
            let got = hypergeometric_terminating(&num, &den, &z).unwrap();
            prop_assert_eq!(got, series_oracle(&num, &den, &z, n));
        }

        #[test]
        fn series_is_symmetric_in_parameters(
            n in 0usize..5,
            b in small_rational(),
            c in small_rational(),
            d in (1i64..30, 1i64..7).prop_map(|(p, q)| rat(p, q)),
            e in (1i64..30, 1i64..7).prop_map(|(p, q)| rat(p, q)),
        ) {
            let m = int(-(n as i64));
            let z = int(1);
            let v1 = hypergeometric_terminating(&[m.clone(), b.clone(), c.clone()], &[d.clone(), e.clone()], &z).unwrap();
            let v2 = hypergeometric_terminating(&[c, m, b], &[e, d], &z).unwrap();
            prop_assert_eq!(v1, v2);
        }

        #[test]
        fn scaling_to_common_denominator_is_exact(
            n in 0usize..5,
            bp in -20i64..20, cp in -20i64..20, dp in 1i64..20, s in 1i64..9,
        ) {
            let direct = hypergeometric_terminating(
                &[int(-(n as i64)), rat(bp, s), rat(cp, s)],
                &[rat(dp, s)],
                &int(1),
            ).unwrap();
            // Same parameters, routed through integers scaled by s and divided back.
            let scale = int(s);
            let via = hypergeometric_terminating(
                &[int(-(n as i64) * s) / &scale, int(bp) / &scale, int(cp) / &scale],
                &[int(dp) / &scale],
                &int(1),
            ).unwrap();
            prop_assert_eq!(direct, via);
        }
    }
}
