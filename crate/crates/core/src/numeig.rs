//! Symmetric tridiagonal eigensolver (implicit QL with Wilkinson shifts)
//! and the benchmark harness that compares it against closed-form spectra.

use std::time::Instant;

use serde::Serialize;

use crate::catalog::MatrixFamily;
use crate::error::{Error, Result};
use crate::specmat::SymTridiag;

/// Iterations allowed per eigenvalue before giving up.
pub const DEFAULT_SWEEP_BUDGET: usize = 30;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FloatTridiag {
    pub diagonal: Vec<f64>,
    pub off: Vec<f64>,
}

impl FloatTridiag {
    pub fn new(diagonal: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diagonal.is_empty() || off.len() + 1 != diagonal.len() {
            return Err(Error::InvalidParams(format!(
                "tridiagonal needs dim ≥ 1 and dim − 1 off-diagonal entries, got {} and {}",
                diagonal.len(),
                off.len()
            )));
        }
        if diagonal.iter().chain(&off).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParams("non-finite matrix entry".into()));
        }
        Ok(Self { diagonal, off })
    }

    pub fn zero_diagonal(off: Vec<f64>) -> Result<Self> {
        Self::new(vec![0.0; off.len() + 1], off)
    }

    /// Symmetric form of a float two-diagonal matrix: off-diagonal
    /// `√(b_i c_i)`.
    pub fn symmetrized(upper: &[f64], lower: &[f64]) -> Result<Self> {
        if upper.len() != lower.len() {
            return Err(Error::InvalidParams("superdiagonal and subdiagonal lengths differ".into()));
        }
        let off = upper
            .iter()
            .zip(lower)
            .enumerate()
            .map(|(index, (b, c))| {
                let p = b * c;
                if p < 0.0 {
                    Err(Error::NegativeProduct { index })
                } else {
                    Ok(p.sqrt())
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::zero_diagonal(off)
    }

    pub fn from_exact(m: &SymTridiag) -> Result<Self> {
        Self::zero_diagonal(m.off_f64())
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.diagonal.iter().chain(&self.off).fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `‖AV − VΛ‖_max` for eigenvector columns `vectors[.][j]`.
    pub fn residual(&self, values: &[f64], vectors: &[Vec<f64>]) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                let mut av = self.diagonal[i] * vectors[i][j];
                if i > 0 {
                    av += self.off[i - 1] * vectors[i - 1][j];
                }
                if i + 1 < n {
                    av += self.off[i] * vectors[i + 1][j];
                }
                worst = worst.max((av - values[j] * vectors[i][j]).abs());
            }
        }
        worst
    }
}

#[derive(Debug, Clone)]
pub struct Eigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Row-major; column `j` is the eigenvector of `values[j]`.
    pub vectors: Option<Vec<Vec<f64>>>,
    pub iterations: usize,
}

pub fn sym_tridiag_eigen(m: &FloatTridiag, want_vectors: bool) -> Result<Eigen> {
    sym_tridiag_eigen_with_budget(m, want_vectors, DEFAULT_SWEEP_BUDGET)
}

pub fn sym_tridiag_eigen_with_budget(m: &FloatTridiag, want_vectors: bool, budget: usize) -> Result<Eigen> {
    let n = m.dim();
    let mut d = m.diagonal.clone();
    let mut e = m.off.clone();
    e.push(0.0);
    let mut z: Vec<Vec<f64>> = if want_vectors {
        (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect()
    } else {
        Vec::new()
    };
    let mut total = 0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut mm = l;
            while mm + 1 < n {
                let dd = d[mm].abs() + d[mm + 1].abs();
                if e[mm].abs() <= f64::EPSILON * dd {
                    break;
                }
                mm += 1;
            }
            if mm == l {
                break;
            }
            if iter == budget {
                return Err(Error::NoConvergence { index: l, iterations: iter });
            }
            iter += 1;
            total += 1;
            // Wilkinson shift from the leading 2×2 block
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[mm] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = mm;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[mm] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if want_vectors {
                    for row in z.iter_mut() {
                        let f = row[i + 1];
                        row[i + 1] = s * row[i] + c * f;
                        row[i] = c * row[i] - s * f;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[mm] = 0.0;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = want_vectors.then(|| z.iter().map(|row| order.iter().map(|&j| row[j]).collect()).collect());
    Ok(Eigen {
        values,
        vectors,
        iterations: total,
    })
}

/// `max |computed − closed|` after matching. Both inputs sorted ascending.
/// Matching is by position unless the closed form has clustered values,
/// where each computed value takes the nearest unused closed-form value.
pub fn match_error(computed: &[f64], closed: &[f64], scale: f64) -> f64 {
    let cluster = 1e-8 * scale.max(1.0);
    let clustered = closed.windows(2).any(|w| w[1] - w[0] < cluster && w[1] != w[0]);
    if !clustered {
        return computed.iter().zip(closed).fold(0.0, |m, (a, b)| m.max((a - b).abs()));
    }
    log::warn!("closed-form spectrum has clustered eigenvalues; matching greedily");
    let mut used = vec![false; closed.len()];
    let mut worst = 0.0f64;
    for a in computed {
        let (best, err) = closed
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, b)| (j, (a - b).abs()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap_or((0, f64::INFINITY));
        if best < used.len() {
            used[best] = true;
        }
        worst = worst.max(err);
    }
    worst
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub family: String,
    pub params: String,
    pub n: usize,
    pub dim: usize,
    pub max_abs_entry: f64,
    pub max_abs_eig_error: f64,
    pub residual_norm: Option<f64>,
    pub symmetry_error: f64,
    pub iterations: usize,
    pub nanoseconds: u128,
}

impl BenchReport {
    /// `max_abs_eig_error ≤ rel · max|entry|`.
    pub fn within(&self, rel: f64) -> bool {
        self.max_abs_eig_error <= rel * self.max_abs_entry
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// One report per (size, repetition). Sizes are the family's `N`.
pub fn benchmark(family: &MatrixFamily, sizes: &[usize], repetitions: usize, want_vectors: bool) -> Result<Vec<BenchReport>> {
    let mut out = Vec::new();
    for &n in sizes {
        if repetitions == 0 {
            continue;
        }
        let matrix = family.float_symmetric(n)?;
        let closed = family.spectrum(n)?.to_f64()?;
        let scale = matrix.max_abs_entry();
        for _ in 0..repetitions {
            let start = Instant::now();
            let eig = sym_tridiag_eigen(&matrix, want_vectors).map_err(|e| {
                log::error!(
                    "{} {} N={n}: {e}; off-diagonal {:?}",
                    family.label(),
                    family.params_text(),
                    matrix.off
                );
                e
            })?;
            let nanoseconds = start.elapsed().as_nanos();
            let symmetry_error = eig
                .values
                .iter()
                .zip(eig.values.iter().rev())
                .fold(0.0f64, |m, (a, b)| m.max((a + b).abs()));
            out.push(BenchReport {
                family: family.label(),
                params: family.params_text(),
                n,
                dim: matrix.dim(),
                max_abs_entry: scale,
                max_abs_eig_error: match_error(&eig.values, &closed, scale),
                residual_norm: eig.vectors.as_ref().map(|v| matrix.residual(&eig.values, v)),
                symmetry_error,
                iterations: eig.iterations,
                nanoseconds,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::specmat::{extended_kac_odd, symmetrize, sylvester_kac};
    use proptest::prelude::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn two_by_two() {
        let m = FloatTridiag::zero_diagonal(vec![1.0]).unwrap();
        let eig = sym_tridiag_eigen(&m, true).unwrap();
        assert!(close(&eig.values, &[-1.0, 1.0], 1e-15));
        assert!(m.residual(&eig.values, eig.vectors.as_ref().unwrap()) < 1e-15);
    }

    #[test]
    fn one_by_one() {
        let m = FloatTridiag::new(vec![2.5], vec![]).unwrap();
        assert_eq!(sym_tridiag_eigen(&m, false).unwrap().values, vec![2.5]);
    }

    #[test]
    fn kac_three() {
        let (kac, _) = sylvester_kac(3);
        let m = FloatTridiag::from_exact(&symmetrize(&kac).unwrap()).unwrap();
        let eig = sym_tridiag_eigen(&m, false).unwrap();
        assert!(close(&eig.values, &[-3.0, -1.0, 1.0, 3.0], 1e-13));
    }

    #[test]
    fn odd_extension_matches_closed_form() {
        let (g, d) = (rat(1, 4), rat(3, 4));
        let (m, spectrum) = extended_kac_odd(3, &g, &d);
        let m = FloatTridiag::from_exact(&symmetrize(&m).unwrap()).unwrap();
        let eig = sym_tridiag_eigen(&m, false).unwrap();
        // 0, ±2√(k(k+2))
        let mut expect: Vec<f64> = vec![0.0];
        for k in 1..=3 {
            let e = 2.0 * ((k * (k + 2)) as f64).sqrt();
            expect.extend([e, -e]);
        }
        expect.sort_by(f64::total_cmp);
        assert!(close(&eig.values, &expect, 1e-12));
        assert!(close(&eig.values, &spectrum.to_f64().unwrap(), 1e-12));
    }

    #[test]
    fn budget_exhaustion_reports() {
        let m = FloatTridiag::zero_diagonal(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!(matches!(
            sym_tridiag_eigen_with_budget(&m, false, 0),
            Err(Error::NoConvergence { index: 0, iterations: 0 })
        ));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(FloatTridiag::new(vec![], vec![]).is_err());
        assert!(FloatTridiag::new(vec![0.0, 0.0], vec![]).is_err());
        assert!(FloatTridiag::zero_diagonal(vec![f64::NAN]).is_err());
        assert!(matches!(
            FloatTridiag::symmetrized(&[1.0], &[-1.0]),
            Err(Error::NegativeProduct { index: 0 })
        ));
    }

    #[test]
    fn clustered_matching_is_greedy() {
        let closed = [0.0, 1.0, 1.0 + 1e-12, 2.0];
        let computed = [0.0, 1.0 + 1e-12, 1.0, 2.0];
        assert!(match_error(&computed, &closed, 1.0) < 1e-15);
    }

    #[test]
    fn zero_repetitions_is_empty() {
        let r = benchmark(&MatrixFamily::Kac, &[5, 7], 0, false).unwrap();
        assert!(r.is_empty());
    }

    #[test]
    fn kac_bench_with_vectors() {
        let r = benchmark(&MatrixFamily::Kac, &[40, 200], 1, true).unwrap();
        for rep in &r {
            assert!(rep.within(1e-10), "{rep:?}");
            assert!(rep.residual_norm.unwrap() <= 1e-11 * rep.max_abs_entry, "{rep:?}");
            assert!(rep.symmetry_error <= 1e-10 * rep.max_abs_entry);
        }
    }

    /// Dense Jacobi rotation oracle for small symmetric matrices.
    fn jacobi_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
        let n = diag.len();
        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n {
            a[i][i] = diag[i];
            if i + 1 < n {
                a[i][i + 1] = off[i];
                a[i + 1][i] = off[i];
            }
        }
        for _ in 0..100 {
            let mut off_norm = 0.0;
            for p in 0..n {
                for q in p + 1..n {
                    off_norm += a[p][q] * a[p][q];
                    if a[p][q].abs() < 1e-300 {
                        continue;
                    }
                    let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let (akp, akq) = (a[k][p], a[k][q]);
                        a[k][p] = c * akp - s * akq;
                        a[k][q] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let (apk, aqk) = (a[p][k], a[q][k]);
                        a[p][k] = c * apk - s * aqk;
                        a[q][k] = s * apk + c * aqk;
                    }
                }
            }
            if off_norm < 1e-30 {
                break;
            }
        }
        let mut v: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    proptest! {
        #[test]
        fn agrees_with_jacobi(
            diag in proptest::collection::vec(-5.0f64..5.0, 1..12),
            seed in proptest::collection::vec(-5.0f64..5.0, 11),
        ) {
            let off = seed[..diag.len() - 1].to_vec();
            let m = FloatTridiag::new(diag.clone(), off.clone()).unwrap();
            let eig = sym_tridiag_eigen(&m, true).unwrap();
            let oracle = jacobi_eigenvalues(&diag, &off);
            prop_assert!(close(&eig.values, &oracle, 1e-9));
            let scale = m.max_abs_entry().max(1.0);
            prop_assert!(m.residual(&eig.values, eig.vectors.as_ref().unwrap()) <= 1e-12 * scale);
        }
    }
}
