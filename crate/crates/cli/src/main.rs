use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use doubling_core::arith::{format_rational, from_usize, int, parse_rational, Rational};
use doubling_core::catalog::{MatrixFamily, ParamSet};
use doubling_core::doubles::{Coefficient, DoubleCase};
use doubling_core::io::{write_exact, write_json, write_matrix_market};
use doubling_core::numeig::benchmark;
use doubling_core::polyfam::{DualHahnParams, FamilyParams, HahnParams, KrawtchoukParams, RacahParams, RacahTruncation};
use doubling_core::suite::{run_suite, Mutation, SuiteConfig, SuiteKind};

#[derive(Parser)]
#[command(name = "doubling", version, about = "Doubled Hahn, dual Hahn and Racah systems: test matrices, spectra, exact verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a matrix (kac, kac-odd, kac-even, double:<case>, nonsym:<case>)
    Gen {
        family: String,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long = "n", value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, value_enum, default_value_t = Format::Mm)]
        format: Format,
        /// Write to a file instead of stdout
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// List the closed-form spectrum: sign, radicand, value
    Spectrum {
        family: String,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long = "n", value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// Run exact verification suites (pairs, requirements, christoffel,
    /// orthogonality, spectra, algebra, all)
    Verify {
        suite: String,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long, default_value_t = 20)]
        draws: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Negate one coefficient, e.g. `bhat` or `HahnII:bhat`
        #[arg(long)]
        flip: Option<String>,
        /// Failures printed per suite
        #[arg(long, default_value_t = 10)]
        show: usize,
    },
    /// Benchmark the float eigensolver against closed-form spectra (JSON lines)
    Bench {
        family: String,
        #[command(flatten)]
        params: ParamArgs,
        /// Comma-separated matrix dimensions
        #[arg(long, default_value = "")]
        dims: String,
        #[arg(long, default_value_t = 1)]
        reps: usize,
        /// Also compute eigenvectors and report the residual
        #[arg(long)]
        vectors: bool,
    },
    /// Tabulate y_n(x) exactly over a grid range
    Poly {
        #[arg(value_enum)]
        family: PolyFamily,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long = "n", value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Degree
        #[arg(long)]
        deg: usize,
        #[arg(long)]
        x_from: Option<usize>,
        #[arg(long)]
        x_to: Option<usize>,
        /// Add weight and norm columns
        #[arg(long)]
        weights: bool,
        /// Racah truncation: which denominator parameter equals −N
        #[arg(long, value_enum, default_value_t = Truncation::Alpha)]
        truncation: Truncation,
        /// Krawtchouk p
        #[arg(long, value_parser = parse_rat)]
        p: Option<Rational>,
    },
}

#[derive(Args, Clone, Default)]
struct ParamArgs {
    #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
    alpha: Option<Rational>,
    #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
    beta: Option<Rational>,
    #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
    gamma: Option<Rational>,
    #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
    delta: Option<Rational>,
}

impl ParamArgs {
    fn set(&self) -> ParamSet {
        ParamSet {
            alpha: self.alpha.clone(),
            beta: self.beta.clone(),
            gamma: self.gamma.clone(),
            delta: self.delta.clone(),
        }
    }

    fn need(v: &Option<Rational>, name: &str) -> Result<Rational> {
        v.clone().with_context(|| format!("missing --{name}"))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Mm,
    Exact,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolyFamily {
    Hahn,
    DualHahn,
    Racah,
    Krawtchouk,
}

#[derive(Clone, Copy, ValueEnum)]
enum Truncation {
    Alpha,
    BetaDelta,
    Gamma,
}

fn parse_rat(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn family(selector: &str, params: &ParamArgs) -> Result<MatrixFamily> {
    Ok(MatrixFamily::parse(selector, &params.set())?)
}

fn emit(output: Option<&PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn cmd_gen(selector: &str, params: &ParamArgs, n: usize, format: Format, output: Option<&PathBuf>) -> Result<()> {
    let f = family(selector, params)?;
    let m = f.exact(n)?;
    let text = match format {
        Format::Mm => write_matrix_market(&m),
        Format::Exact => write_exact(&m),
        Format::Json => write_json(&m, &f.label(), &f.params_text(), n) + "\n",
    };
    emit(output, &text)
}

fn cmd_spectrum(selector: &str, params: &ParamArgs, n: usize) -> Result<()> {
    let f = family(selector, params)?;
    let mut out = std::io::stdout().lock();
    for e in f.spectrum(n)?.entries()? {
        writeln!(out, "{} {} {}", e.sign(), format_rational(e.radicand()), e.to_f64())?;
    }
    Ok(())
}

fn parse_flip(s: &str) -> Result<Mutation> {
    let (case, coef) = match s.split_once(':') {
        Some((case, coef)) => (Some(case.parse::<DoubleCase>()?), coef),
        None => (None, s),
    };
    Ok(Mutation {
        case,
        coefficient: coef.parse::<Coefficient>()?,
    })
}

fn cmd_verify(suite: &str, config: SuiteConfig, show: usize) -> Result<bool> {
    let kinds = SuiteKind::parse_selector(suite)?;
    let mut out = std::io::stdout().lock();
    let mut ok = true;
    for kind in kinds {
        let report = run_suite(kind, &config);
        if report.passed() {
            writeln!(out, "PASS {kind}: {} checks", report.checks)?;
        } else {
            ok = false;
            writeln!(out, "FAIL {kind}: {} of {} checks nonzero", report.failures.len(), report.checks)?;
            for f in report.failures.iter().take(show) {
                writeln!(out, "  {f}")?;
            }
        }
    }
    Ok(ok)
}

fn cmd_bench(selector: &str, params: &ParamArgs, dims: &str, reps: usize, vectors: bool) -> Result<()> {
    let f = family(selector, params)?;
    let dims: Vec<usize> = dims
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<usize>().with_context(|| format!("bad dimension {s:?}")))
        .collect::<Result<_>>()?;
    let sizes = dims.iter().map(|&d| Ok(f.n_for_dim(d)?)).collect::<Result<Vec<_>>>()?;
    let mut out = std::io::stdout().lock();
    for r in benchmark(&f, &sizes, reps, vectors)? {
        writeln!(out, "{}", r.to_json_line())?;
    }
    Ok(())
}

fn poly_params(family: PolyFamily, p: &ParamArgs, n: usize, truncation: Truncation, kp: Option<Rational>) -> Result<FamilyParams> {
    Ok(match family {
        PolyFamily::Hahn => FamilyParams::Hahn(HahnParams::new(ParamArgs::need(&p.alpha, "alpha")?, ParamArgs::need(&p.beta, "beta")?, n)),
        PolyFamily::DualHahn => FamilyParams::DualHahn(DualHahnParams::new(ParamArgs::need(&p.gamma, "gamma")?, ParamArgs::need(&p.delta, "delta")?, n)),
        PolyFamily::Krawtchouk => FamilyParams::Krawtchouk(KrawtchoukParams::new(kp.context("missing --p")?, n)),
        PolyFamily::Racah => {
            let minus = -from_usize(n) - int(1);
            let (a, b, g, d, t) = match truncation {
                Truncation::Alpha => (minus, ParamArgs::need(&p.beta, "beta")?, ParamArgs::need(&p.gamma, "gamma")?, ParamArgs::need(&p.delta, "delta")?, RacahTruncation::Alpha),
                Truncation::BetaDelta => {
                    let b = ParamArgs::need(&p.beta, "beta")?;
                    let d = &minus - &b;
                    (ParamArgs::need(&p.alpha, "alpha")?, b, ParamArgs::need(&p.gamma, "gamma")?, d, RacahTruncation::BetaDelta)
                }
                Truncation::Gamma => (ParamArgs::need(&p.alpha, "alpha")?, ParamArgs::need(&p.beta, "beta")?, minus, ParamArgs::need(&p.delta, "delta")?, RacahTruncation::Gamma),
            };
            FamilyParams::Racah(RacahParams::new(a, b, g, d, t)?)
        }
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_poly(
    family: PolyFamily,
    params: &ParamArgs,
    n: usize,
    deg: usize,
    range: (Option<usize>, Option<usize>),
    weights: bool,
    truncation: Truncation,
    kp: Option<Rational>,
) -> Result<()> {
    let fp = poly_params(family, params, n, truncation, kp)?;
    let (lo, hi) = (range.0.unwrap_or(0), range.1.unwrap_or(n));
    if lo > hi || hi > n {
        bail!("x range {lo}..={hi} is not inside 0..={n}");
    }
    let norm = if weights { Some(fp.norm(deg)?) } else { None };
    let mut text = format!("# {fp} n={deg}\n");
    for x in lo..=hi {
        let y = format_rational(&fp.eval(deg, &from_usize(x))?);
        match &norm {
            Some(h) => text.push_str(&format!("{x} {y} {} {}\n", format_rational(&fp.weight(x)?), format_rational(h))),
            None => text.push_str(&format!("{x} {y}\n")),
        }
    }
    emit(None, &text)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Gen { family, params, n, format, output } => cmd_gen(&family, &params, n as usize, format, output.as_ref())?,
        Command::Spectrum { family, params, n } => cmd_spectrum(&family, &params, n as usize)?,
        Command::Verify { suite, max_n, draws, seed, flip, show } => {
            if max_n == 0 {
                bail!("--max-n must be at least 1");
            }
            let config = SuiteConfig {
                max_n,
                draws,
                seed,
                mutation: flip.as_deref().map(parse_flip).transpose()?,
                ..SuiteConfig::default()
            };
            return cmd_verify(&suite, config, show);
        }
        Command::Bench { family, params, dims, reps, vectors } => cmd_bench(&family, &params, &dims, reps, vectors)?,
        Command::Poly {
            family,
            params,
            n,
            deg,
            x_from,
            x_to,
            weights,
            truncation,
            p,
        } => cmd_poly(family, &params, n as usize, deg, (x_from, x_to), weights, truncation, p)?,
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
