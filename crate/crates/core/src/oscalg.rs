//! Generator matrices `J±`, `J0`, `P` built from the dual Hahn double
//! matrices, and exact checks of the deformed su(2)-type relations they
//! satisfy.

use num_traits::Zero;
use serde::Serialize;

use crate::arith::{from_usize, int, rat, Rational, SqrtRational, SurdSum};
use crate::doubles::DoubleCase;
use crate::error::{Error, Result};
use crate::polyfam::{DualHahnParams, FamilyParams};

type SurdMatrix = Vec<Vec<SurdSum>>;

#[derive(Debug, Clone)]
pub struct AlgebraRealization {
    case: DoubleCase,
    params: DualHahnParams,
    /// `M_k²`, so that `J+` has `2M_k` at position `(k+1, k)`.
    squares: Vec<Rational>,
    j0: Vec<Rational>,
    parity: Vec<i8>,
}

/// `(ν, σ, ρ)` with `[J+, J−] = sign·(2J0 + 2νJ0P + (σ/2)P + (ρ/2)I)`.
///
/// `sign` is −1 only for dual Hahn II, whose commutator starts with `−2J0`;
/// equivalently the normal form holds there for the pair `J+`, `−J−`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureConstants {
    #[serde(serialize_with = "crate::arith::serialize_rational")]
    pub nu: Rational,
    #[serde(serialize_with = "crate::arith::serialize_rational")]
    pub sigma: Rational,
    #[serde(serialize_with = "crate::arith::serialize_rational")]
    pub rho: Rational,
    pub sign: i8,
}

impl StructureConstants {
    /// Diagonal entry of the normal form at a `J0` eigenvalue and parity.
    pub fn commutator_entry(&self, j0: &Rational, parity: i8) -> Rational {
        let p = int(parity.into());
        let value = int(2) * j0 + int(2) * &self.nu * j0 * &p + &self.sigma / int(2) * &p + &self.rho / int(2);
        value * int(self.sign.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AlgebraRelation {
    ParitySquare,
    ParityCommutesWithJ0,
    ParityAnticommutesWithJPlus,
    ParityAnticommutesWithJMinus,
    J0RaisesJPlus,
    J0LowersJMinus,
    Commutator,
}

impl AlgebraRelation {
    pub const ALL: [AlgebraRelation; 7] = [
        AlgebraRelation::ParitySquare,
        AlgebraRelation::ParityCommutesWithJ0,
        AlgebraRelation::ParityAnticommutesWithJPlus,
        AlgebraRelation::ParityAnticommutesWithJMinus,
        AlgebraRelation::J0RaisesJPlus,
        AlgebraRelation::J0LowersJMinus,
        AlgebraRelation::Commutator,
    ];
}

/// Nonzero entries of one relation's residue matrix, rendered exactly.
#[derive(Debug, Clone, Serialize)]
pub struct RelationResidue {
    pub relation: AlgebraRelation,
    pub nonzero: Vec<(usize, usize, String)>,
}

impl RelationResidue {
    pub fn is_zero(&self) -> bool {
        self.nonzero.is_empty()
    }
}

/// `M_k²` for `k = 0..dim−1` as displayed for the three dual Hahn doubles.
fn offdiagonal_squares(case: DoubleCase, p: &DualHahnParams) -> Result<Vec<Rational>> {
    let (g, d) = (&p.gamma, &p.delta);
    let big = from_usize(p.n_max);
    let dim = match case {
        DoubleCase::DualHahnIII => 2 * p.n_max + 2,
        _ => 2 * p.n_max + 1,
    };
    let mut out = Vec::with_capacity(dim - 1);
    for i in 0..dim - 1 {
        let k = from_usize(i / 2);
        let even = i % 2 == 0;
        let sq = match (case, even) {
            (DoubleCase::DualHahnI, true) => (&k + g + int(1)) * (&big - &k),
            (DoubleCase::DualHahnI, false) => (&k + int(1)) * (&big + d - &k),
            (DoubleCase::DualHahnII, true) => (&big + d - &k) * (&big - &k),
            (DoubleCase::DualHahnII, false) => (&k + int(1)) * (&k + g + int(1)),
            (DoubleCase::DualHahnIII, true) => (&k + g + int(1)) * (&big + d + int(1) - &k),
            (DoubleCase::DualHahnIII, false) => (&k + int(1)) * (&big - &k),
            _ => unreachable!("checked by caller"),
        };
        if sq < Rational::zero() {
            return Err(Error::InadmissibleParams(format!(
                "M_{i}² = {sq} is negative; the generators need real entries"
            )));
        }
        out.push(sq);
    }
    Ok(out)
}

fn dense_zero(dim: usize) -> SurdMatrix {
    vec![vec![SurdSum::new(); dim]; dim]
}

fn mat_mul(a: &SurdMatrix, b: &SurdMatrix) -> SurdMatrix {
    let dim = a.len();
    let mut out = dense_zero(dim);
    for i in 0..dim {
        for k in 0..dim {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..dim {
                if !b[k][j].is_zero() {
                    out[i][j].add_sum(&a[i][k].product(&b[k][j]));
                }
            }
        }
    }
    out
}

fn mat_sub(a: &SurdMatrix, b: &SurdMatrix) -> SurdMatrix {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| {
            ra.iter()
                .zip(rb)
                .map(|(x, y)| {
                    let mut s = x.clone();
                    s.add_sum(&y.negated());
                    s
                })
                .collect()
        })
        .collect()
}

fn residue(relation: AlgebraRelation, m: &SurdMatrix) -> RelationResidue {
    let mut nonzero = Vec::new();
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if !v.is_zero() {
                nonzero.push((i, j, v.to_string()));
            }
        }
    }
    RelationResidue { relation, nonzero }
}

impl AlgebraRealization {
    pub fn new(case: DoubleCase, params: &FamilyParams) -> Result<Self> {
        if !matches!(case, DoubleCase::DualHahnI | DoubleCase::DualHahnII | DoubleCase::DualHahnIII) {
            return Err(Error::Unsupported(format!(
                "generator realizations exist for the dual Hahn doubles only, not {case}"
            )));
        }
        let p = params.expect_dual_hahn()?;
        if p.n_max == 0 {
            return Err(Error::InvalidParams("generator realizations need N ≥ 1".into()));
        }
        let squares = offdiagonal_squares(case, p)?;
        let dim = squares.len() + 1;
        // J0 = diag(−N, …, N) or diag(−N−1/2, …, N+1/2)
        let start = if case == DoubleCase::DualHahnIII {
            -from_usize(p.n_max) - rat(1, 2)
        } else {
            -from_usize(p.n_max)
        };
        let j0 = (0..dim).map(|i| &start + from_usize(i)).collect();
        let parity = (0..dim).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
        Ok(Self {
            case,
            params: p.clone(),
            squares,
            j0,
            parity,
        })
    }

    pub fn case(&self) -> DoubleCase {
        self.case
    }

    pub fn dim(&self) -> usize {
        self.j0.len()
    }

    /// `M_k²` for `k = 0..dim−1`.
    pub fn offdiagonal_squares(&self) -> &[Rational] {
        &self.squares
    }

    pub fn j0(&self) -> &[Rational] {
        &self.j0
    }

    pub fn parity(&self) -> &[i8] {
        &self.parity
    }

    /// Entry `(k+1, k)` of `J+`, which is `2M_k`.
    pub fn j_plus_entry(&self, k: usize) -> SqrtRational {
        SqrtRational::new(1, int(4) * &self.squares[k])
    }

    pub fn j_plus(&self) -> SurdMatrix {
        let mut m = dense_zero(self.dim());
        for k in 0..self.squares.len() {
            m[k + 1][k].add_surd(&self.j_plus_entry(k));
        }
        m
    }

    pub fn j_minus(&self) -> SurdMatrix {
        let plus = self.j_plus();
        (0..self.dim()).map(|i| (0..self.dim()).map(|j| plus[j][i].clone()).collect()).collect()
    }

    fn diagonal(values: impl Iterator<Item = Rational>, dim: usize) -> SurdMatrix {
        let mut m = dense_zero(dim);
        for (i, v) in values.enumerate() {
            m[i][i].add_rational(v);
        }
        m
    }

    pub fn j0_matrix(&self) -> SurdMatrix {
        Self::diagonal(self.j0.iter().cloned(), self.dim())
    }

    pub fn parity_matrix(&self) -> SurdMatrix {
        Self::diagonal(self.parity.iter().map(|&p| int(p.into())), self.dim())
    }

    /// `[J+, J−]` by exact matrix multiplication.
    pub fn commutator(&self) -> SurdMatrix {
        let (plus, minus) = (self.j_plus(), self.j_minus());
        mat_sub(&mat_mul(&plus, &minus), &mat_mul(&minus, &plus))
    }

    /// Right-hand side of the commutator relation, as displayed per case.
    pub fn displayed_commutator(&self) -> SurdMatrix {
        let (g, d) = (&self.params.gamma, &self.params.delta);
        let big = from_usize(self.params.n_max);
        let two_n1 = int(2) * &big + int(1);
        let diff = g - d;
        let values = self.j0.iter().zip(&self.parity).map(|(j0, &p)| {
            let p = int(p.into());
            match self.case {
                DoubleCase::DualHahnI => {
                    int(2) * j0 + int(2) * (g + d + int(1)) * j0 * &p - &two_n1 * &diff * &p + &diff
                }
                DoubleCase::DualHahnII => {
                    int(-2) * j0 + int(2) * (g + d + &two_n1) * j0 * &p + &two_n1 * &diff * &p - &diff
                }
                _ => {
                    let c = (int(2) * &big + int(2)) * (g + d + int(1)) + (int(2) * g + int(1)) * (int(2) * d + int(1));
                    int(2) * j0 + int(2) * &diff * j0 * &p - c * &p + &diff
                }
            }
        });
        Self::diagonal(values, self.dim())
    }

    /// Residues of all seven relations. Every residue is computed entrywise
    /// in exact surd arithmetic.
    pub fn verify(&self) -> Vec<RelationResidue> {
        let dim = self.dim();
        let (plus, minus, j0, p) = (self.j_plus(), self.j_minus(), self.j0_matrix(), self.parity_matrix());
        let identity = Self::diagonal(std::iter::repeat_n(int(1), dim), dim);
        let neg = |m: &SurdMatrix| -> SurdMatrix { m.iter().map(|r| r.iter().map(SurdSum::negated).collect()).collect() };
        let anti = |a: &SurdMatrix, b: &SurdMatrix| {
            // ab + ba
            mat_sub(&mat_mul(a, b), &neg(&mat_mul(b, a)))
        };
        let comm = |a: &SurdMatrix, b: &SurdMatrix| mat_sub(&mat_mul(a, b), &mat_mul(b, a));
        vec![
            residue(AlgebraRelation::ParitySquare, &mat_sub(&mat_mul(&p, &p), &identity)),
            residue(AlgebraRelation::ParityCommutesWithJ0, &comm(&p, &j0)),
            residue(AlgebraRelation::ParityAnticommutesWithJPlus, &anti(&p, &plus)),
            residue(AlgebraRelation::ParityAnticommutesWithJMinus, &anti(&p, &minus)),
            residue(AlgebraRelation::J0RaisesJPlus, &mat_sub(&comm(&j0, &plus), &plus)),
            residue(AlgebraRelation::J0LowersJMinus, &mat_sub(&comm(&j0, &minus), &neg(&minus))),
            residue(
                AlgebraRelation::Commutator,
                &mat_sub(&self.commutator(), &self.displayed_commutator()),
            ),
        ]
    }

    pub fn structure_constants(&self) -> StructureConstants {
        let (g, d) = (&self.params.gamma, &self.params.delta);
        let big = from_usize(self.params.n_max);
        let two_n1 = int(2) * &big + int(1);
        let diff = g - d;
        match self.case {
            DoubleCase::DualHahnI => StructureConstants {
                nu: g + d + int(1),
                sigma: int(-2) * &two_n1 * &diff,
                rho: int(2) * &diff,
                sign: 1,
            },
            // −(−2J0 + 2cJ0P + (2N+1)(γ−δ)P − (γ−δ)I) in normal form
            DoubleCase::DualHahnII => StructureConstants {
                nu: -(g + d + &two_n1),
                sigma: int(-2) * &two_n1 * &diff,
                rho: int(2) * &diff,
                sign: -1,
            },
            _ => {
                let c = (int(2) * &big + int(2)) * (g + d + int(1)) + (int(2) * g + int(1)) * (int(2) * d + int(1));
                StructureConstants {
                    nu: diff.clone(),
                    sigma: int(-2) * c,
                    rho: int(2) * diff,
                    sign: 1,
                }
            }
        }
    }
}

pub fn build_generators(case: DoubleCase, params: &FamilyParams) -> Result<AlgebraRealization> {
    AlgebraRealization::new(case, params)
}

pub fn verify_algebra(case: DoubleCase, params: &FamilyParams) -> Result<Vec<RelationResidue>> {
    Ok(AlgebraRealization::new(case, params)?.verify())
}

pub fn structure_constants(case: DoubleCase, params: &FamilyParams) -> Result<StructureConstants> {
    Ok(AlgebraRealization::new(case, params)?.structure_constants())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specmat::double_matrix;
    use proptest::prelude::*;

    const CASES: [DoubleCase; 3] = [DoubleCase::DualHahnI, DoubleCase::DualHahnII, DoubleCase::DualHahnIII];

    fn dh(g: Rational, d: Rational, n: usize) -> FamilyParams {
        FamilyParams::DualHahn(DualHahnParams::new(g, d, n))
    }

    fn assert_all_zero(case: DoubleCase, params: &FamilyParams) {
        for r in verify_algebra(case, params).unwrap() {
            assert!(r.is_zero(), "{case} {:?}: {:?}", r.relation, r.nonzero);
        }
    }

    #[test]
    fn squares_match_double_matrices() {
        let params = dh(rat(2, 3), rat(3, 7), 4);
        for case in CASES {
            let alg = build_generators(case, &params).unwrap();
            let (m, _) = double_matrix(case, &params).unwrap();
            let from_matrix: Vec<Rational> = m.off().iter().map(SqrtRational::square).collect();
            assert_eq!(alg.offdiagonal_squares(), from_matrix.as_slice(), "{case}");
        }
    }

    #[test]
    fn commutator_is_the_diagonal_of_squares() {
        let params = dh(rat(2, 3), rat(3, 7), 3);
        for case in CASES {
            let alg = build_generators(case, &params).unwrap();
            let comm = alg.commutator();
            let sq = alg.offdiagonal_squares();
            for (i, row) in comm.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    if i != j {
                        assert!(v.is_zero());
                        continue;
                    }
                    let below = if i == 0 { Rational::zero() } else { sq[i - 1].clone() };
                    let here = sq.get(i).cloned().unwrap_or_else(Rational::zero);
                    assert_eq!(v.to_rational(), Some(int(4) * (below - here)));
                }
            }
        }
    }

    #[test]
    fn dimensions_and_j0() {
        let params = dh(rat(1, 2), rat(1, 2), 2);
        let one = build_generators(DoubleCase::DualHahnI, &params).unwrap();
        assert_eq!(one.dim(), 5);
        assert_eq!(one.j0(), &[int(-2), int(-1), int(0), int(1), int(2)]);
        let three = build_generators(DoubleCase::DualHahnIII, &params).unwrap();
        assert_eq!(three.dim(), 6);
        assert_eq!(three.j0().first(), Some(&rat(-5, 2)));
        assert_eq!(three.j0().last(), Some(&rat(5, 2)));
    }

    #[test]
    fn su2_point() {
        let params = dh(rat(-1, 2), rat(-1, 2), 5);
        for case in [DoubleCase::DualHahnI, DoubleCase::DualHahnIII] {
            let c = structure_constants(case, &params).unwrap();
            assert_eq!((c.nu, c.sigma, c.rho), (int(0), int(0), int(0)), "{case}");
            assert_all_zero(case, &params);
        }
        // plain su(2): [J+, J−] = 2J0
        let alg = build_generators(DoubleCase::DualHahnI, &params).unwrap();
        let comm = alg.commutator();
        for (i, j0) in alg.j0().iter().enumerate() {
            assert_eq!(comm[i][i].to_rational(), Some(int(2) * j0));
        }
    }

    #[test]
    fn no_quadratic_term_on_the_integer_line() {
        // δ = −γ − 1 removes the J0P term
        let params = dh(rat(-1, 3), rat(-2, 3), 4);
        assert_eq!(structure_constants(DoubleCase::DualHahnI, &params).unwrap().nu, int(0));
        assert_all_zero(DoubleCase::DualHahnI, &params);
    }

    #[test]
    fn equal_parameters_drop_j0p_in_third_case() {
        let params = dh(rat(3, 2), rat(3, 2), 3);
        let c = structure_constants(DoubleCase::DualHahnIII, &params).unwrap();
        assert_eq!(c.nu, int(0));
        assert_eq!(c.rho, int(0));
    }

    #[test]
    fn rejects_other_cases_and_imaginary_entries() {
        let params = dh(rat(1, 2), rat(1, 2), 2);
        assert!(matches!(build_generators(DoubleCase::HahnI, &params), Err(Error::Unsupported(_))));
        let bad = dh(rat(-7, 2), rat(1, 2), 2);
        assert!(matches!(
            build_generators(DoubleCase::DualHahnI, &bad),
            Err(Error::InadmissibleParams(_))
        ));
    }

    fn param() -> impl Strategy<Value = Rational> {
        (-9i64..40).prop_flat_map(|p| (Just(p), 1i64..12)).prop_map(|(p, q)| rat(p, q).max(rat(-9, 10)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn relations_hold(g in param(), d in param(), n in 1usize..=10) {
            let params = dh(g, d, n);
            for case in CASES {
                assert_all_zero(case, &params);
                // normal form reproduces the commutator
                let alg = build_generators(case, &params).unwrap();
                let c = alg.structure_constants();
                let comm = alg.commutator();
                for (i, (j0, &p)) in alg.j0().iter().zip(alg.parity()).enumerate() {
                    prop_assert_eq!(comm[i][i].to_rational(), Some(c.commutator_entry(j0, p)));
                }
            }
        }
    }
}
