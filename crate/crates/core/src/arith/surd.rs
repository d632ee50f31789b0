use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{format_rational, to_f64, Rational};

/// `sign · √radicand` with a rational radicand.
///
/// Only products are supported; sums of surds go through [`SurdSum`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SqrtRational {
    sign: i8,
    radicand: Rational,
}

impl SqrtRational {
    /// Panics when `radicand < 0`. Zero radicand forces sign 0.
    pub fn new(sign: i8, radicand: Rational) -> Self {
        assert!(!radicand.is_negative(), "negative radicand {radicand}");
        if radicand.is_zero() || sign == 0 {
            Self::zero()
        } else {
            Self {
                sign: sign.signum(),
                radicand,
            }
        }
    }

    pub fn zero() -> Self {
        Self {
            sign: 0,
            radicand: Rational::zero(),
        }
    }

    /// `+√r`, or `None` when `r < 0`.
    pub fn sqrt(r: Rational) -> Option<Self> {
        (!r.is_negative()).then(|| Self::new(1, r))
    }

    /// The rational `r` itself, written as `sign(r)·√(r²)`.
    pub fn from_rational(r: &Rational) -> Self {
        let sign = if r.is_positive() {
            1
        } else if r.is_negative() {
            -1
        } else {
            0
        };
        Self::new(sign, r * r)
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn radicand(&self) -> &Rational {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// The square of the value, always rational.
    pub fn square(&self) -> Rational {
        self.radicand.clone()
    }

    /// `sign · radicand`; monotone in the represented value.
    pub fn signed_square(&self) -> Rational {
        match self.sign {
            0 => Rational::zero(),
            1 => self.radicand.clone(),
            _ => -self.radicand.clone(),
        }
    }

    /// The value as a rational when the radicand is a perfect square.
    pub fn to_rational(&self) -> Option<Rational> {
        let root = rational_sqrt(&self.radicand)?;
        Some(if self.sign < 0 { -root } else { root })
    }

    pub fn to_f64(&self) -> f64 {
        f64::from(self.sign) * to_f64(&self.radicand).sqrt()
    }

    pub fn abs(&self) -> Self {
        Self::new(self.sign.abs(), self.radicand.clone())
    }
}

impl Neg for SqrtRational {
    type Output = SqrtRational;
    fn neg(self) -> Self {
        Self {
            sign: -self.sign,
            radicand: self.radicand,
        }
    }
}

impl Mul for &SqrtRational {
    type Output = SqrtRational;
    fn mul(self, rhs: &SqrtRational) -> SqrtRational {
        SqrtRational::new(self.sign * rhs.sign, &self.radicand * &rhs.radicand)
    }
}

impl Mul<&Rational> for &SqrtRational {
    type Output = SqrtRational;
    fn mul(self, rhs: &Rational) -> SqrtRational {
        self * &SqrtRational::from_rational(rhs)
    }
}

impl PartialOrd for SqrtRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SqrtRational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.signed_square().cmp(&other.signed_square())
    }
}

impl fmt::Display for SqrtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.to_rational() {
            return write!(f, "{}", format_rational(&r));
        }
        let sign = if self.sign < 0 { "-" } else { "" };
        if self.radicand.is_integer() {
            write!(f, "{sign}√{}", self.radicand.numer())
        } else {
            write!(f, "{sign}√({})", format_rational(&self.radicand))
        }
    }
}

/// Exact square root of a nonnegative integer, if it is a perfect square.
pub(crate) fn integer_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

pub(crate) fn rational_sqrt(r: &Rational) -> Option<Rational> {
    let p = integer_sqrt(r.numer())?;
    let q = integer_sqrt(r.denom())?;
    Some(Rational::new(p, q))
}

const SMALL_PRIMES: [u32; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// Splits `√r = c·√k` with `k` a positive integer stripped of small square
/// factors. `k` is not guaranteed squarefree; [`SurdSum`] merges keys whose
/// ratio is still a square.
fn split_surd(r: &Rational) -> (Rational, BigInt) {
    // √(p/q) = √(p·q)/q
    let mut k = r.numer() * r.denom();
    let mut outside = BigInt::one();
    for &p in &SMALL_PRIMES {
        let sq = BigInt::from(p * p);
        while (&k % &sq).is_zero() {
            k /= &sq;
            outside *= p;
        }
    }
    if let Some(root) = integer_sqrt(&k) {
        outside *= root;
        k = BigInt::one();
    }
    (Rational::new(outside, r.denom().clone()), k)
}

/// A finite sum `Σ c_i·√k_i` with rational coefficients, kept grouped by
/// radicand so that zero can be decided exactly.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SurdSum {
    terms: BTreeMap<BigInt, Rational>,
}

impl SurdSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_rational(r: Rational) -> Self {
        let mut s = Self::new();
        s.add_rational(r);
        s
    }

    pub fn add_rational(&mut self, r: Rational) {
        self.add_raw(BigInt::one(), r);
    }

    /// Adds `coef · √radicand`.
    pub fn add_scaled_sqrt(&mut self, coef: &Rational, radicand: &Rational) {
        assert!(!radicand.is_negative(), "negative radicand {radicand}");
        if coef.is_zero() || radicand.is_zero() {
            return;
        }
        let (outside, key) = split_surd(radicand);
        self.add_raw(key, coef * outside);
    }

    pub fn add_surd(&mut self, s: &SqrtRational) {
        let coef = Rational::from_integer(BigInt::from(s.sign()));
        self.add_scaled_sqrt(&coef, s.radicand());
    }

    pub fn add_sum(&mut self, other: &SurdSum) {
        for (k, c) in &other.terms {
            self.add_raw(k.clone(), c.clone());
        }
    }

    fn add_raw(&mut self, key: BigInt, coef: Rational) {
        if coef.is_zero() {
            return;
        }
        let entry = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *entry += coef;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Multiplies every term by `s`.
    pub fn scale(&self, s: &SqrtRational) -> SurdSum {
        let mut out = SurdSum::new();
        if s.is_zero() {
            return out;
        }
        let sign = Rational::from_integer(BigInt::from(s.sign()));
        for (k, c) in &self.terms {
            let radicand = Rational::from_integer(k.clone()) * s.radicand();
            out.add_scaled_sqrt(&(c * &sign), &radicand);
        }
        out
    }

    pub fn scale_rational(&self, r: &Rational) -> SurdSum {
        let mut out = SurdSum::new();
        for (k, c) in &self.terms {
            out.add_raw(k.clone(), c * r);
        }
        out
    }

    pub fn negated(&self) -> SurdSum {
        self.scale_rational(&-Rational::one())
    }

    pub fn product(&self, other: &SurdSum) -> SurdSum {
        let mut out = SurdSum::new();
        for (k, c) in &self.terms {
            for (l, d) in &other.terms {
                let radicand = Rational::from_integer(k * l);
                out.add_scaled_sqrt(&(c * d), &radicand);
            }
        }
        out
    }

    /// Merges radicands whose ratio is a perfect square. Afterwards the
    /// remaining square roots are linearly independent over the rationals.
    fn normalized(&self) -> SurdSum {
        let mut keys: Vec<(BigInt, Rational)> =
            self.terms.iter().map(|(k, c)| (k.clone(), c.clone())).collect();
        let mut i = 0;
        while i < keys.len() {
            let mut j = i + 1;
            while j < keys.len() {
                let prod = &keys[i].0 * &keys[j].0;
                if let Some(root) = integer_sqrt(&prod) {
                    // √k_j = root/k_i · √k_i
                    let factor = Rational::new(root, keys[i].0.clone());
                    let moved = keys.remove(j).1 * factor;
                    keys[i].1 += moved;
                } else {
                    j += 1;
                }
            }
            i += 1;
        }
        let mut out = SurdSum::new();
        for (k, c) in keys {
            out.add_raw(k, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() || self.normalized().terms.is_empty()
    }

    /// The value as a rational when every irrational part cancels.
    pub fn to_rational(&self) -> Option<Rational> {
        let n = self.normalized();
        match n.terms.len() {
            0 => Some(Rational::zero()),
            1 => n.terms.get(&BigInt::one()).cloned(),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(k, c)| to_f64(c) * to_f64(&Rational::from_integer(k.clone())).sqrt())
            .sum()
    }
}

impl fmt::Display for SurdSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.normalized();
        if n.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = n
            .terms
            .iter()
            .map(|(k, c)| {
                if k.is_one() {
                    format_rational(c)
                } else {
                    format!("{}·√{}", format_rational(c), k)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
