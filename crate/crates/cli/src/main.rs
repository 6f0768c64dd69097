use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tyler_rmt::formats::{
    format_eigenvalues_csv, format_law_table, format_matrix_csv, parse_grid, parse_matrix_csv,
};
use tyler_rmt::harness::persist::atomic_write;
use tyler_rmt::harness::{
    run_sweep, run_trial, write_results, CouplingKind, ExperimentConfig, PopulationTemplate,
    RadialKind, SweepOutcome, SweepSummary,
};
use tyler_rmt::prelude::*;

const EXIT_INPUT: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_IO: u8 = 4;

/// Tyler's M-estimator and random-matrix spectral tools.
#[derive(Parser)]
#[command(name = "tyler-rmt", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a d×n sample from a generalized spherical population.
    Sample(SampleArgs),
    /// Fit Tyler's shape estimate to a d×n data CSV.
    Tyler(TylerArgs),
    /// Eigenvalues of a symmetric matrix CSV, ascending.
    Spectrum(SpectrumArgs),
    /// Tabulate pdf and cdf of a reference law on a grid.
    Law(LawArgs),
    /// Run one trial of an experiment config.
    Trial(TrialArgs),
    /// Run every trial of an experiment config.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, value_parser = parse_radial)]
    radial: RadialKind,
    /// Denominator degrees of freedom for scaled-f-root.
    #[arg(long)]
    radial_p: Option<u32>,
    /// Degrees of freedom of the chi part; defaults to the dimension.
    #[arg(long)]
    radial_df: Option<u32>,
    /// Radius for the constant law.
    #[arg(long)]
    radial_c: Option<f64>,
    #[arg(long, value_enum, default_value = "independent")]
    coupling: CouplingArg,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum CouplingArg {
    Independent,
    #[value(name = "sign-u1")]
    SignU1,
}

#[derive(Args)]
struct TylerArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 1000)]
    max_iter: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Take eigenvalues of sqrt(n/d)(A - I) instead of A.
    #[arg(long, requires = "n")]
    standardize: bool,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum LawArg {
    Semicircle,
    Mp,
}

#[derive(Args)]
struct LawArgs {
    #[arg(long, value_enum)]
    law: LawArg,
    /// Ratio d/n for the Marčenko-Pastur law.
    #[arg(long, required_if_eq("law", "mp"))]
    y: Option<f64>,
    /// Grid as LO:HI:STEP.
    #[arg(long, allow_hyphen_values = true)]
    grid: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct TrialArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pair: usize,
    #[arg(long, default_value_t = 0)]
    replicate: usize,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output directory; falls back to the config's `output`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; overrides the config's `threads`.
    #[arg(long)]
    threads: Option<usize>,
}

/// A failure with the process exit status it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Io { .. } => EXIT_IO,
            Error::NoConvergence(_)
            | Error::SingularShape { .. }
            | Error::DegenerateDraw { .. }
            | Error::MomentOverflow { .. } => EXIT_NUMERICAL,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn parse_radial(s: &str) -> std::result::Result<RadialKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    atomic_write(path, text.as_bytes())
}

fn sample(args: SampleArgs) -> Result<()> {
    let template = PopulationTemplate {
        radial: args.radial,
        df: args.radial_df,
        p: args.radial_p,
        c: args.radial_c,
        coupling: match args.coupling {
            CouplingArg::Independent => CouplingKind::Independent,
            CouplingArg::SignU1 => CouplingKind::SignU1,
        },
    };
    let spec = template.at(args.dim, args.seed)?;
    let x = sample_population(&spec, args.n)?;
    write_text(&args.out, &format_matrix_csv(x.as_matrix()))
}

fn diagnostics_json(report: &TylerReport) -> String {
    serde_json::json!({
        "iterations": report.iterations,
        "residual": report.residual,
        "converged": report.converged,
        "boundary_regime": report.boundary_regime,
        "jittered": report.jittered,
    })
    .to_string()
}

fn fit_tyler(args: TylerArgs) -> Result<()> {
    let x = DataMatrix::new(parse_matrix_csv(&read_text(&args.input)?)?)?;
    let cfg = TylerConfig {
        tol: args.tol,
        max_iter: args.max_iter,
    };
    let report = match tyler(&x, &cfg) {
        Ok(report) => report,
        Err(Error::NoConvergence(partial)) => {
            eprintln!("{}", diagnostics_json(&partial));
            return Err(Error::NoConvergence(partial));
        }
        Err(e) => return Err(e),
    };
    eprintln!("{}", diagnostics_json(&report));
    write_text(&args.out, &format_matrix_csv(report.estimate.as_matrix()))
}

fn spectrum(args: SpectrumArgs) -> Result<()> {
    let entries = parse_matrix_csv(&read_text(&args.input)?)?;
    let a = SymmetricMatrix::from_full(entries, MatrixRole::General, 1e-9)?;
    let a = match args.n {
        Some(n) if args.standardize => {
            if n == 0 {
                return Err(Error::invalid("--n must be positive"));
            }
            standardize(&a.with_role(MatrixRole::Scatter), n)
        }
        _ => a,
    };
    write_text(
        &args.out,
        &format_eigenvalues_csv(&symmetric_eigenvalues(&a)?),
    )
}

fn law(args: LawArgs) -> Result<()> {
    let law = match args.law {
        LawArg::Semicircle => ReferenceLaw::Semicircle,
        LawArg::Mp => ReferenceLaw::marchenko_pastur(
            args.y
                .ok_or_else(|| Error::invalid("--y is required for mp"))?,
        )?,
    };
    let grid = parse_grid(&args.grid)?;
    write_text(&args.out, &format_law_table(&law, &grid))
}

fn load_config(path: &Path) -> Result<ExperimentConfig> {
    ExperimentConfig::from_json_str(&read_text(path)?)
}

fn report_sweep(outcome: &SweepOutcome, dir: &Path) -> std::result::Result<(), Failure> {
    let s = &outcome.summary;
    eprintln!(
        "{} trials ({} failed) written to {}",
        s.total_trials,
        s.failed_trials,
        dir.display()
    );
    if outcome.all_failed() {
        return Err(Failure {
            code: EXIT_NUMERICAL,
            message: "numerical failure: every trial failed".into(),
        });
    }
    Ok(())
}

fn trial(args: TrialArgs) -> std::result::Result<(), Failure> {
    let cfg = load_config(&args.config)?;
    let run = run_trial(&cfg, args.pair, args.replicate)?;
    let summary = SweepSummary::from_results(std::slice::from_ref(&run.result), &cfg.estimators);
    let outcome = SweepOutcome {
        runs: vec![run],
        summary,
    };
    write_results(&outcome, Some(&cfg), &args.out, cfg.raw_spectra)?;
    report_sweep(&outcome, &args.out)
}

fn sweep(args: SweepArgs) -> std::result::Result<(), Failure> {
    let mut cfg = load_config(&args.config)?;
    if let Some(threads) = args.threads {
        cfg.threads = Some(threads);
        cfg.validate()?;
    }
    let dir = args
        .out
        .or_else(|| cfg.output.clone())
        .ok_or_else(|| Error::Config("no output directory: pass --out or set \"output\"".into()))?;
    let outcome = run_sweep(&cfg)?;
    write_results(&outcome, Some(&cfg), &dir, cfg.raw_spectra)?;
    report_sweep(&outcome, &dir)
}

fn run(cli: Cli) -> std::result::Result<(), Failure> {
    match cli.command {
        Command::Sample(a) => sample(a).map_err(Failure::from),
        Command::Tyler(a) => fit_tyler(a).map_err(Failure::from),
        Command::Spectrum(a) => spectrum(a).map_err(Failure::from),
        Command::Law(a) => law(a).map_err(Failure::from),
        Command::Trial(a) => trial(a),
        Command::Sweep(a) => sweep(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
