//! Seeded randomized verification suites over all doubling cases.
//!
//! Every check is exact: a failure means a nonzero rational (or surd)
//! residue, reported with its case, parameters and grid location.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{from_usize, int, rat, Rational};
use crate::catalog::{MatrixFamily, ParamSet};
use crate::doubles::{coefficients, Coefficient, CoefficientSextet, DoubleCase};
use crate::error::{Error, Result};
use crate::orthosys::DoubledSystem;
use crate::oscalg::AlgebraRealization;
use crate::polyfam::{DualHahnParams, Family, FamilyParams, HahnParams, RacahParams, RacahTruncation};
use crate::specmat::{double_matrix, eigvec_matrix, has_matrix};
use crate::transforms::{verify_geronimus, verify_same_family, ChristoffelData};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SuiteKind {
    Pairs,
    Requirements,
    Christoffel,
    Orthogonality,
    Spectra,
    Algebra,
}

impl SuiteKind {
    pub const ALL: [SuiteKind; 6] = [
        SuiteKind::Pairs,
        SuiteKind::Requirements,
        SuiteKind::Christoffel,
        SuiteKind::Orthogonality,
        SuiteKind::Spectra,
        SuiteKind::Algebra,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteKind::Pairs => "pairs",
            SuiteKind::Requirements => "requirements",
            SuiteKind::Christoffel => "christoffel",
            SuiteKind::Orthogonality => "orthogonality",
            SuiteKind::Spectra => "spectra",
            SuiteKind::Algebra => "algebra",
        }
    }

    /// `all` expands to every suite.
    pub fn parse_selector(s: &str) -> Result<Vec<SuiteKind>> {
        if s == "all" {
            Ok(Self::ALL.to_vec())
        } else {
            Ok(vec![s.parse()?])
        }
    }
}

impl fmt::Display for SuiteKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::parse("suite", format!("unknown suite {s:?}")))
    }
}

/// A coefficient sign flip applied to every sextet the pair and requirement
/// suites build (optionally only for one case).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mutation {
    pub case: Option<DoubleCase>,
    pub coefficient: Coefficient,
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub max_n: usize,
    /// Random parameter draws per case.
    pub draws: usize,
    pub seed: u64,
    pub mutation: Option<Mutation>,
    /// Cases the per-case suites iterate over.
    pub cases: Vec<DoubleCase>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            max_n: 6,
            draws: 20,
            seed: 42,
            mutation: None,
            cases: DoubleCase::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub case: String,
    pub params: String,
    pub location: String,
    pub residue: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}] at {}: residue {}", self.case, self.params, self.location, self.residue)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: SuiteKind,
    pub checks: usize,
    pub failures: Vec<Failure>,
}

impl SuiteReport {
    fn new(suite: SuiteKind) -> Self {
        Self {
            suite,
            checks: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checks > 0
    }

    fn check(&mut self, zero: bool, case: &str, params: &impl fmt::Display, location: impl FnOnce() -> String, residue: impl FnOnce() -> String) {
        self.checks += 1;
        if !zero {
            self.failures.push(Failure {
                case: case.to_string(),
                params: params.to_string(),
                location: location(),
                residue: residue(),
            });
        }
    }

    fn error(&mut self, case: &str, params: &impl fmt::Display, location: &str, err: &Error) {
        self.checks += 1;
        self.failures.push(Failure {
            case: case.to_string(),
            params: params.to_string(),
            location: location.to_string(),
            residue: format!("error: {err}"),
        });
    }
}

/// Deterministic admissible parameter draws.
///
/// Two rational lattices are used, `(11p+7)/77` and `(13p+5)/91`; a sum or
/// difference of one value from each is never an integer, which keeps the
/// Racah grids free of repeated `λ(x)` and vanishing norm ratios.
pub struct ParamSampler {
    rng: ChaCha8Rng,
}

impl ParamSampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Value `> −1` from the first lattice.
    pub fn first(&mut self) -> Rational {
        rat(11 * self.rng.gen_range(-7i64..40) + 7, 77)
    }

    /// Value `> −1` from the second lattice.
    pub fn second(&mut self) -> Rational {
        rat(13 * self.rng.gen_range(-7i64..40) + 5, 91)
    }

    pub fn dual_hahn(&mut self, n: usize) -> FamilyParams {
        FamilyParams::DualHahn(DualHahnParams::new(self.first(), self.second(), n))
    }

    pub fn hahn(&mut self, n: usize) -> FamilyParams {
        FamilyParams::Hahn(HahnParams::new(self.first(), self.second(), n))
    }

    /// Any of the three truncations.
    pub fn racah(&mut self, n: usize) -> FamilyParams {
        let (u, v, w) = (self.first(), self.first(), self.second());
        let minus = -from_usize(n) - int(1);
        let t = RacahTruncation::ALL[self.rng.gen_range(0..3)];
        let (a, b, g, d) = match t {
            RacahTruncation::Alpha => (minus, u, w, v),
            RacahTruncation::BetaDelta => (u, v.clone(), w, minus - v),
            RacahTruncation::Gamma => (u, v, minus, w),
        };
        FamilyParams::Racah(RacahParams::new(a, b, g, d, t).expect("truncation holds by construction"))
    }

    /// `α + 1 = −N` with `β > N + γ + 1`, where the Racah I/III matrices
    /// are real.
    pub fn racah_real(&mut self, n: usize) -> FamilyParams {
        let g = self.second();
        let b = from_usize(n) + &g + int(2) + self.first();
        let d = self.first();
        let a = -from_usize(n) - int(1);
        FamilyParams::Racah(RacahParams::new(a, b, g, d, RacahTruncation::Alpha).expect("α + 1 = −N"))
    }

    pub fn for_case(&mut self, case: DoubleCase, n: usize) -> FamilyParams {
        match case.family() {
            Family::DualHahn => self.dual_hahn(n),
            Family::Hahn => self.hahn(n),
            _ => self.racah(n),
        }
    }

    /// Parameters at which the case has a real matrix.
    pub fn matrix_params(&mut self, case: DoubleCase, n: usize) -> FamilyParams {
        match case.family() {
            Family::Racah => self.racah_real(n),
            _ => self.for_case(case, n),
        }
    }
}

/// `N` for draw `k`: cycles through `1..=max_n` so every size is covered.
fn draw_n(k: usize, max_n: usize) -> usize {
    1 + k % max_n.max(1)
}

fn sextet(case: DoubleCase, params: &FamilyParams, mutation: Option<Mutation>) -> Result<CoefficientSextet> {
    let s = coefficients(case, params)?;
    Ok(match mutation {
        Some(m) if m.case.is_none_or(|c| c == case) => s.with_sign_flip(m.coefficient),
        _ => s,
    })
}

fn zero(r: &Rational) -> bool {
    num_traits::Zero::is_zero(r)
}

fn run_pairs(config: &SuiteConfig, requirements: bool) -> SuiteReport {
    let kind = if requirements { SuiteKind::Requirements } else { SuiteKind::Pairs };
    let mut report = SuiteReport::new(kind);
    let mut sampler = ParamSampler::new(config.seed ^ if requirements { 0x5eed } else { 0 });
    for &case in &config.cases {
        for k in 0..config.draws {
            let params = sampler.for_case(case, draw_n(k, config.max_n));
            let s = match sextet(case, &params, config.mutation) {
                Ok(s) => s,
                Err(e) => {
                    report.error(case.name(), &params, "coefficients", &e);
                    continue;
                }
            };
            for n in s.degrees() {
                for x in s.points(n) {
                    let xr = from_usize(x);
                    let at = || format!("n={n} x={x}");
                    if requirements {
                        match s.verify_requirements(n, &xr) {
                            Ok(rs) => {
                                for (req, r) in rs {
                                    report.check(zero(&r), case.name(), &params, || format!("{req} n={n} x={x}"), || r.to_string());
                                }
                            }
                            Err(e) => report.error(case.name(), &params, &at(), &e),
                        }
                    } else {
                        match s.verify_pair(n, &xr) {
                            Ok((r1, r2)) => {
                                report.check(zero(&r1), case.name(), &params, || format!("first relation {}", at()), || r1.to_string());
                                report.check(zero(&r2), case.name(), &params, || format!("second relation {}", at()), || r2.to_string());
                            }
                            Err(e) => report.error(case.name(), &params, &at(), &e),
                        }
                    }
                }
            }
        }
    }
    report
}

fn run_christoffel(config: &SuiteConfig) -> SuiteReport {
    let mut report = SuiteReport::new(SuiteKind::Christoffel);
    let mut sampler = ParamSampler::new(config.seed ^ 0xc4);
    for &case in &config.cases {
        for k in 0..config.draws {
            let params = sampler.for_case(case, draw_n(k, config.max_n));
            let name = case.name();
            match verify_same_family(case, &params) {
                Ok(rs) => {
                    for r in rs {
                        report.check(zero(&r.residue), name, &params, || format!("kernel partner n={} x={}", r.n, r.x), || r.residue.to_string());
                    }
                }
                Err(e) => report.error(name, &params, "kernel partner", &e),
            }
            let data = match ChristoffelData::for_case(case, &params) {
                Ok(d) => d,
                Err(e) => {
                    report.error(name, &params, "Christoffel data", &e);
                    continue;
                }
            };
            for n in 0..params.n_max() {
                match data.coefficient_residues(n) {
                    Ok((lower, diagonal)) => {
                        report.check(zero(&lower), name, &params, || format!("b_n a_(n-1) = C(n) n={n}"), || lower.to_string());
                        report.check(zero(&diagonal), name, &params, || format!("A(n)a_n + b_n balance n={n}"), || diagonal.to_string());
                    }
                    Err(e) => report.error(name, &params, &format!("coefficients n={n}"), &e),
                }
            }
            match verify_geronimus(&data) {
                Ok(rs) => {
                    for r in rs {
                        report.check(zero(&r.residue), name, &params, || format!("Geronimus round trip n={} x={}", r.n, r.x), || r.residue.to_string());
                    }
                }
                Err(e) => report.error(name, &params, "Geronimus round trip", &e),
            }
        }
    }
    report
}

fn family_orthogonality(report: &mut SuiteReport, params: &FamilyParams) {
    let n = params.n_max();
    let name = params.family().name();
    let table = match params.values_table() {
        Ok(t) => t,
        Err(e) => return report.error(name, params, "values", &e),
    };
    let weights: Result<Vec<Rational>> = (0..=n).map(|x| params.weight(x)).collect();
    let weights = match weights {
        Ok(w) => w,
        Err(e) => return report.error(name, params, "weights", &e),
    };
    for i in 0..=n {
        for j in i..=n {
            let sum: Rational = (0..=n).map(|x| &weights[x] * &table[i][x] * &table[j][x]).sum();
            let expect = if i == j {
                match params.norm(i) {
                    Ok(h) => h,
                    Err(e) => return report.error(name, params, "norm", &e),
                }
            } else {
                int(0)
            };
            let r = sum - expect;
            report.check(zero(&r), name, params, || format!("orthogonality n={i} m={j}"), || r.to_string());
        }
    }
}

/// Largest `N` at which eigenvector matrices are verified in exact surd
/// arithmetic (cost grows quickly with the number of distinct radicands).
pub const EXACT_EIGVEC_MAX_N: usize = 3;

fn run_orthogonality(config: &SuiteConfig) -> SuiteReport {
    let mut report = SuiteReport::new(SuiteKind::Orthogonality);
    let mut sampler = ParamSampler::new(config.seed ^ 0x0a7);
    for k in 0..config.draws {
        let n = draw_n(k, config.max_n);
        family_orthogonality(&mut report, &sampler.hahn(n));
        family_orthogonality(&mut report, &sampler.dual_hahn(n));
        family_orthogonality(&mut report, &sampler.racah(n));
    }
    let systems = [DoubleCase::DualHahnI, DoubleCase::HahnI, DoubleCase::HahnII];
    for case in systems.into_iter().filter(|c| config.cases.contains(c)) {
        for k in 0..config.draws {
            let params = sampler.for_case(case, draw_n(k, config.max_n));
            let system = match DoubledSystem::new(case, &params) {
                Ok(s) => s,
                Err(e) => {
                    report.error(case.name(), &params, "doubled system", &e);
                    continue;
                }
            };
            match system.verify_orthogonality() {
                Ok(rs) => {
                    for r in rs {
                        report.check(r.zero, case.name(), &params, || format!("doubled orthogonality n={} m={}", r.n, r.m), || r.residue.clone());
                    }
                }
                Err(e) => report.error(case.name(), &params, "doubled orthogonality", &e),
            }
            match system.support_matches_spectrum() {
                Ok(ok) => report.check(ok, case.name(), &params, || "support = spectrum".into(), || "support differs".into()),
                Err(e) => report.error(case.name(), &params, "support = spectrum", &e),
            }
        }
    }
    for &case in &config.cases {
        for k in 0..config.draws.min(4) {
            let n = draw_n(k, config.max_n.min(EXACT_EIGVEC_MAX_N));
            let params = sampler.matrix_params(case, n);
            if !has_matrix(case, &params) {
                continue;
            }
            let checked = double_matrix(case, &params).and_then(|(m, _)| Ok(eigvec_matrix(case, &params)?.verify_exact(&m)));
            match checked {
                Ok(ok) => report.check(ok, case.name(), &params, || "exact MU = UD and UᵀU = I".into(), || "nonzero entry".into()),
                Err(e) => report.error(case.name(), &params, "eigenvector matrix", &e),
            }
        }
    }
    report
}

fn run_spectra(config: &SuiteConfig) -> SuiteReport {
    let mut report = SuiteReport::new(SuiteKind::Spectra);
    let mut sampler = ParamSampler::new(config.seed ^ 0x5bec);
    let certify = |report: &mut SuiteReport, family: &MatrixFamily, n: usize| match family.certify(n) {
        Ok(ok) => report.check(ok, &family.label(), &family.params_text(), || format!("charpoly N={n}"), || "charpoly differs".into()),
        Err(e) => report.error(&family.label(), &family.params_text(), &format!("N={n}"), &e),
    };
    for n in 1..=config.max_n {
        certify(&mut report, &MatrixFamily::Kac, n);
    }
    for k in 0..config.draws {
        let n = draw_n(k, config.max_n);
        let (g, d) = (sampler.first(), sampler.second());
        let p = ParamSet {
            gamma: Some(g),
            delta: Some(d),
            ..ParamSet::default()
        };
        for sel in ["kac-odd", "kac-even", "nonsym:DualHahnI", "nonsym:DualHahnII", "nonsym:DualHahnIII"] {
            let family = MatrixFamily::parse(sel, &p).expect("selector is valid");
            certify(&mut report, &family, n);
        }
        for &case in &config.cases {
            let params = sampler.matrix_params(case, n);
            if !has_matrix(case, &params) {
                continue;
            }
            let family = MatrixFamily::Double {
                case,
                params: match &params {
                    FamilyParams::DualHahn(p) => vec![p.gamma.clone(), p.delta.clone()],
                    FamilyParams::Hahn(p) => vec![p.alpha.clone(), p.beta.clone()],
                    FamilyParams::Racah(p) => vec![p.beta.clone(), p.gamma.clone(), p.delta.clone()],
                    FamilyParams::Krawtchouk(_) => unreachable!("no Krawtchouk doubles"),
                },
            };
            certify(&mut report, &family, n);
        }
    }
    // special lines: γ = δ = −1/2 reduces to the Kac matrix, δ = −γ − 1
    // gives integer spectra
    for n in 1..=config.max_n {
        let half = ParamSet {
            gamma: Some(rat(-1, 2)),
            delta: Some(rat(-1, 2)),
            ..ParamSet::default()
        };
        for sel in ["kac-odd", "kac-even"] {
            certify(&mut report, &MatrixFamily::parse(sel, &half).expect("valid"), n);
        }
        let g = sampler.first();
        let line = ParamSet {
            delta: Some(-&g - int(1)),
            gamma: Some(g),
            ..ParamSet::default()
        };
        certify(&mut report, &MatrixFamily::parse("kac-odd", &line).expect("valid"), n);
    }
    report
}

fn run_algebra(config: &SuiteConfig) -> SuiteReport {
    let mut report = SuiteReport::new(SuiteKind::Algebra);
    let mut sampler = ParamSampler::new(config.seed ^ 0xa1);
    let cases = [DoubleCase::DualHahnI, DoubleCase::DualHahnII, DoubleCase::DualHahnIII];
    for case in cases.into_iter().filter(|c| config.cases.contains(c)) {
        for k in 0..config.draws {
            let params = sampler.dual_hahn(draw_n(k, config.max_n));
            check_algebra(&mut report, case, &params);
        }
        let su2 = FamilyParams::DualHahn(DualHahnParams::new(rat(-1, 2), rat(-1, 2), config.max_n.max(1)));
        check_algebra(&mut report, case, &su2);
        if case != DoubleCase::DualHahnII {
            if let Ok(alg) = AlgebraRealization::new(case, &su2) {
                let c = alg.structure_constants();
                let ok = c.nu == int(0) && c.sigma == int(0) && c.rho == int(0);
                report.check(ok, case.name(), &su2, || "su(2) structure constants".into(), || format!("({}, {}, {})", c.nu, c.sigma, c.rho));
            }
        }
    }
    report
}

fn check_algebra(report: &mut SuiteReport, case: DoubleCase, params: &FamilyParams) {
    let alg = match AlgebraRealization::new(case, params) {
        Ok(a) => a,
        Err(e) => return report.error(case.name(), params, "generators", &e),
    };
    for r in alg.verify() {
        report.check(r.is_zero(), case.name(), params, || format!("{:?}", r.relation), || format!("{:?}", r.nonzero));
    }
    let c = alg.structure_constants();
    let comm = alg.commutator();
    for (i, (j0, &p)) in alg.j0().iter().zip(alg.parity()).enumerate() {
        let expect = c.commutator_entry(j0, p);
        let ok = comm[i][i].to_rational().as_ref() == Some(&expect);
        report.check(ok, case.name(), params, || format!("normal form row {i}"), || format!("{} vs {expect}", comm[i][i]));
    }
}

pub fn run_suite(kind: SuiteKind, config: &SuiteConfig) -> SuiteReport {
    log::info!("running {kind} suite (max N {}, {} draws, seed {})", config.max_n, config.draws, config.seed);
    match kind {
        SuiteKind::Pairs => run_pairs(config, false),
        SuiteKind::Requirements => run_pairs(config, true),
        SuiteKind::Christoffel => run_christoffel(config),
        SuiteKind::Orthogonality => run_orthogonality(config),
        SuiteKind::Spectra => run_spectra(config),
        SuiteKind::Algebra => run_algebra(config),
    }
}
