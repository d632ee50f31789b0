//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit status
//! if any criterion fails.

use std::time::{Duration, Instant};

use doubling_core::arith::{int, rat};
use doubling_core::catalog::{MatrixFamily, ParamSet};
use doubling_core::doubles::{Coefficient, DoubleCase};
use doubling_core::numeig::benchmark;
use doubling_core::polyfam::{DualHahnParams, FamilyParams, HahnParams, RacahParams, RacahTruncation};
use doubling_core::specmat::{double_matrix, eigvec_matrix, extended_kac_even, extended_kac_odd, has_matrix, sylvester_kac};
use doubling_core::suite::{run_suite, Mutation, SuiteConfig, SuiteKind, SuiteReport};

struct Outcome {
    passed: bool,
    detail: String,
}

fn from_reports(reports: &[SuiteReport], elapsed: Duration, limit: Option<Duration>) -> Outcome {
    let checks: usize = reports.iter().map(|r| r.checks).sum();
    let first = reports.iter().flat_map(|r| r.failures.first()).next();
    let in_time = limit.is_none_or(|l| elapsed <= l);
    let mut detail = format!("{checks} exact checks in {:.1}s", elapsed.as_secs_f64());
    if let Some(f) = first {
        detail.push_str(&format!("; first failure: {f}"));
    }
    if !in_time {
        detail.push_str(&format!("; over the {:.0}s budget", limit.unwrap().as_secs_f64()));
    }
    Outcome {
        passed: reports.iter().all(SuiteReport::passed) && in_time,
        detail,
    }
}

fn config(max_n: usize) -> SuiteConfig {
    SuiteConfig {
        max_n,
        draws: 20,
        seed: 20_240_601,
        ..SuiteConfig::default()
    }
}

fn timed(kinds: &[SuiteKind], cfg: &SuiteConfig, limit: Option<Duration>) -> Outcome {
    let start = Instant::now();
    let reports: Vec<SuiteReport> = kinds.iter().map(|&k| run_suite(k, cfg)).collect();
    from_reports(&reports, start.elapsed(), limit)
}

fn pair_relations() -> Outcome {
    timed(&[SuiteKind::Pairs], &config(8), Some(Duration::from_secs(60)))
}

fn requirement_system() -> Outcome {
    timed(&[SuiteKind::Requirements], &config(8), Some(Duration::from_secs(60)))
}

fn spectrum_certification() -> Outcome {
    let start = Instant::now();
    let mut report = run_suite(SuiteKind::Spectra, &config(12));
    let mut extra = Vec::new();
    for n in 1..=20 {
        if !MatrixFamily::Kac.certify(n).unwrap_or(false) {
            extra.push(format!("kac N={n}"));
        }
    }
    let half = rat(-1, 2);
    for n in 1..=12 {
        // γ = δ = −1/2: the extensions are Kac matrices of dimension 2N+1, 2N
        if extended_kac_odd(n, &half, &half).0 != sylvester_kac(2 * n).0 {
            extra.push(format!("kac-odd reduction N={n}"));
        }
        if extended_kac_even(n, &half, &half).0 != sylvester_kac(2 * n - 1).0 {
            extra.push(format!("kac-even reduction N={n}"));
        }
        // δ = −γ − 1: odd extension spectrum is −2N..2N in steps of 2
        let g = rat(3, 7);
        let (_, s) = extended_kac_odd(n, &g, &(-&g - int(1)));
        let expect: Vec<_> = (1..=n as i64).map(|k| int(4 * k * k)).collect();
        if s.squares() != expect.as_slice() || s.zeros() != 1 {
            extra.push(format!("integer spectrum N={n}"));
        }
    }
    report.checks += 20 + 36;
    let mut out = from_reports(std::slice::from_ref(&report), start.elapsed(), None);
    if !extra.is_empty() {
        out.passed = false;
        out.detail.push_str(&format!("; failed: {}", extra.join(", ")));
    }
    out
}

fn sample_matrix_params(case: DoubleCase, n: usize) -> FamilyParams {
    match case.family() {
        doubling_core::polyfam::Family::DualHahn => FamilyParams::DualHahn(DualHahnParams::new(rat(3, 4), rat(2, 5), n)),
        doubling_core::polyfam::Family::Hahn => FamilyParams::Hahn(HahnParams::new(rat(1, 3), rat(5, 7), n)),
        _ => FamilyParams::Racah(
            RacahParams::new(
                -int(n as i64) - int(1),
                int(n as i64) + rat(7, 3),
                rat(1, 5),
                rat(2, 7),
                RacahTruncation::Alpha,
            )
            .expect("α + 1 = −N"),
        ),
    }
}

fn orthogonality() -> Outcome {
    let start = Instant::now();
    let mut exact = run_suite(SuiteKind::Orthogonality, &config(8));
    let mut worst_orth = 0.0f64;
    let mut worst_res = 0.0f64;
    let mut failed = Vec::new();
    for case in DoubleCase::ALL {
        for n in [1, 2, 3, 4, 5, 8, 12, 16, 20, 30, 40] {
            let params = sample_matrix_params(case, n);
            if !has_matrix(case, &params) {
                continue;
            }
            let (m, u) = match (double_matrix(case, &params), eigvec_matrix(case, &params)) {
                (Ok((m, _)), Ok(u)) => (m, u),
                (Err(e), _) | (_, Err(e)) => {
                    failed.push(format!("{case} N={n}: {e}"));
                    continue;
                }
            };
            let scale = m.off_f64().iter().fold(0.0f64, |a, v| a.max(v.abs()));
            let orth = u.column_orthonormality_error();
            let res = u.residual(&m) / scale;
            worst_orth = worst_orth.max(orth);
            worst_res = worst_res.max(res);
            if orth > 1e-12 || res > 1e-12 {
                failed.push(format!("{case} N={n}: ‖UᵀU−I‖ {orth:e}, ‖MU−UD‖/max|M| {res:e}"));
            }
            exact.checks += 1;
        }
    }
    let mut out = from_reports(std::slice::from_ref(&exact), start.elapsed(), None);
    out.detail.push_str(&format!(
        "; float N ≤ 40: max ‖UᵀU−I‖ {worst_orth:.1e}, max ‖MU−UD‖/max|M| {worst_res:.1e}"
    ));
    if !failed.is_empty() {
        out.passed = false;
        out.detail.push_str(&format!("; failed: {}", failed.join(", ")));
    }
    out
}

fn doubled_systems() -> Outcome {
    let cfg = SuiteConfig {
        cases: vec![DoubleCase::DualHahnI, DoubleCase::HahnI, DoubleCase::HahnII],
        ..config(8)
    };
    timed(&[SuiteKind::Orthogonality], &cfg, None)
}

fn christoffel_geronimus() -> Outcome {
    timed(&[SuiteKind::Christoffel], &config(8), None)
}

fn algebra() -> Outcome {
    timed(&[SuiteKind::Algebra], &config(10), None)
}

fn eigensolver_benchmark() -> Outcome {
    let start = Instant::now();
    let dual = ParamSet {
        gamma: Some(rat(1, 2)),
        delta: Some(rat(1, 2)),
        ..ParamSet::default()
    };
    let hahn = ParamSet {
        alpha: Some(rat(2, 3)),
        beta: Some(rat(3, 5)),
        ..ParamSet::default()
    };
    let mut runs: Vec<(MatrixFamily, Vec<usize>)> = vec![
        (MatrixFamily::Kac, vec![100, 500, 1000]),
        (MatrixFamily::parse("kac-odd", &dual).unwrap(), vec![50, 250, 500]),
        (MatrixFamily::parse("kac-even", &dual).unwrap(), vec![50, 250, 500]),
    ];
    for case in ["DualHahnI", "DualHahnII", "HahnII", "HahnIV"] {
        let p = if case.starts_with("Dual") { &dual } else { &hahn };
        runs.push((MatrixFamily::parse(&format!("double:{case}"), p).unwrap(), vec![50, 500]));
    }
    for case in ["DualHahnIII", "HahnI", "HahnIII"] {
        let p = if case.starts_with("Dual") { &dual } else { &hahn };
        runs.push((MatrixFamily::parse(&format!("double:{case}"), p).unwrap(), vec![50, 499]));
    }
    for case in ["DualHahnI", "DualHahnII", "DualHahnIII"] {
        runs.push((MatrixFamily::parse(&format!("nonsym:{case}"), &dual).unwrap(), vec![499]));
    }
    let mut worst = 0.0f64;
    let mut max_dim = 0;
    let mut failed = Vec::new();
    let mut records = 0;
    for (family, sizes) in &runs {
        match benchmark(family, sizes, 1, false) {
            Ok(reports) => {
                for r in reports {
                    records += 1;
                    max_dim = max_dim.max(r.dim);
                    worst = worst.max(r.max_abs_eig_error / r.max_abs_entry);
                    if !r.within(1e-10) {
                        failed.push(format!("{} dim {}: {:e}", r.family, r.dim, r.max_abs_eig_error));
                    }
                }
            }
            Err(e) => failed.push(format!("{family}: {e}")),
        }
    }
    let elapsed = start.elapsed();
    let mut detail = format!(
        "{records} runs up to dim {max_dim}, max error/max|entry| {worst:.1e}, {:.1}s",
        elapsed.as_secs_f64()
    );
    let in_time = elapsed <= Duration::from_secs(30);
    if !in_time {
        detail.push_str("; over the 30s budget");
    }
    if !failed.is_empty() {
        detail.push_str(&format!("; failed: {}", failed.join(", ")));
    }
    Outcome {
        passed: failed.is_empty() && in_time && max_dim >= 1001,
        detail,
    }
}

fn mutation_sensitivity() -> Outcome {
    let start = Instant::now();
    let mut missed = Vec::new();
    let mut total = 0;
    for case in DoubleCase::ALL {
        for coefficient in Coefficient::ALL {
            total += 1;
            let cfg = SuiteConfig {
                max_n: 4,
                draws: 4,
                seed: 99,
                mutation: Some(Mutation {
                    case: Some(case),
                    coefficient,
                }),
                cases: vec![case],
            };
            let caught = [SuiteKind::Pairs, SuiteKind::Requirements]
                .iter()
                .any(|&k| !run_suite(k, &cfg).failures.is_empty());
            if !caught {
                missed.push(format!("{case}/{coefficient}"));
            }
        }
    }
    let mut detail = format!(
        "{}/{total} single sign flips caught in {:.1}s",
        total - missed.len(),
        start.elapsed().as_secs_f64()
    );
    if !missed.is_empty() {
        detail.push_str(&format!("; missed: {}", missed.join(", ")));
    }
    Outcome {
        passed: missed.is_empty(),
        detail,
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 pair relations exact, 11 cases, N ≤ 8, 20 draws, < 60s", pair_relations),
        ("2 requirement system exact", requirement_system),
        ("3 spectra certified by characteristic polynomial", spectrum_certification),
        ("4 orthogonality exact (N ≤ 8) and eigenvector matrices to 1e-12 (N ≤ 40)", orthogonality),
        ("5 doubled systems orthogonal, support = spectrum", doubled_systems),
        ("6 Christoffel/Geronimus identities exact", christoffel_geronimus),
        ("7 algebra relations exact (N ≤ 10), su(2) point", algebra),
        ("8 eigensolver within 1e-10·max|entry| to dim 1001, < 30s", eigensolver_benchmark),
        ("9 every single coefficient sign flip is caught", mutation_sensitivity),
    ];
    let mut all = true;
    for (name, run) in criteria {
        let outcome = run();
        all &= outcome.passed;
        println!("{} criterion {name}: {}", if outcome.passed { "PASS" } else { "FAIL" }, outcome.detail);
    }
    if !all {
        std::process::exit(1);
    }
}
