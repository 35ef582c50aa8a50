use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crlab::{run_suites, Config, Exec, Report, Result, RunOptions, SuiteName};

/// Numerical laboratory for the sublaplacian, the Tanaka–Webster connection and lengthy
/// geodesics on odd-dimensional spheres.
#[derive(Parser, Debug)]
#[command(name = "crlab", version)]
struct Cli {
    /// Flat `key = value` configuration file applied before command-line flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write the JSON report here.
    #[arg(long, global = true)]
    report: Option<PathBuf>,

    /// Write geodesic traces as CSV into this directory.
    #[arg(long, global = true)]
    csv_dir: Option<PathBuf>,

    /// Run every sweep on the current thread.
    #[arg(long, global = true)]
    sequential: bool,

    /// Record wall-clock time in the report.
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sublaplacian spectrum on harmonic polynomials of degree 1..=degree.
    Spectrum {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Pointwise Bochner identity on random harmonic combinations.
    Bochner {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Divergence and integral identities, commutation rules, connection axioms.
    Lemmas {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Connection and Hamiltonian geodesics, distance estimates.
    Geodesics {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        step_size: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        pairs: Option<usize>,
    },
    /// Lower bound for Reeb-invariant eigenvalues.
    Bound {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        degree_max: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Extremal eigenfunction a(|z₁|² − |z₂|²) + 2b Re(z₁z̄₂) on the 3-sphere.
    S3 {
        #[arg(long, allow_hyphen_values = true)]
        a: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Every suite in turn.
    All {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn configure(cli: &Cli) -> Result<(Config, Vec<SuiteName>)> {
    let mut c = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    c.timing |= cli.timing;
    let suites = match cli.command {
        Command::Spectrum { n, degree } => {
            set(&mut c.n, n);
            set(&mut c.degree, degree);
            vec![SuiteName::Spectrum]
        }
        Command::Bochner { n, trials, seed, tol } => {
            set(&mut c.n, n);
            set(&mut c.trials, trials);
            set(&mut c.seed, seed);
            set(&mut c.tol, tol);
            vec![SuiteName::Bochner]
        }
        Command::Lemmas { n, trials, seed } => {
            set(&mut c.n, n);
            set(&mut c.trials, trials);
            set(&mut c.seed, seed);
            vec![SuiteName::Lemmas]
        }
        Command::Geodesics { n, steps, step_size, seed, trials, pairs } => {
            set(&mut c.n, n);
            set(&mut c.steps, steps);
            set(&mut c.step_size, step_size);
            set(&mut c.seed, seed);
            set(&mut c.geodesic_trials, trials);
            set(&mut c.cc_pairs, pairs);
            vec![SuiteName::Geodesics]
        }
        Command::Bound { n, degree_max, seed } => {
            set(&mut c.n, n);
            set(&mut c.degree_max, degree_max);
            set(&mut c.seed, seed);
            vec![SuiteName::Bound]
        }
        Command::S3 { a, b, samples } => {
            set(&mut c.a, a);
            set(&mut c.b, b);
            set(&mut c.reach_samples, samples);
            vec![SuiteName::S3]
        }
        Command::All { n, seed } => {
            set(&mut c.n, n);
            set(&mut c.seed, seed);
            SuiteName::ALL.to_vec()
        }
    };
    c.validate()?;
    Ok((c, suites))
}

fn print_summary(report: &Report) {
    for suite in &report.suites {
        for check in &suite.checks {
            let status = if check.passed() { "PASS" } else { "FAIL" };
            println!("{status}  {:<40} residual {:.3e}", check.id, check.residual);
        }
        let verdict = if suite.passed() { "passed" } else { "FAILED" };
        println!("suite {} {verdict} (max residual {:.3e})", suite.name, suite.max_residual);
    }
}

fn run(cli: &Cli) -> Result<bool> {
    let (config, suites) = configure(cli)?;
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    let opts = RunOptions { exec, csv_dir: cli.csv_dir.clone() };
    let report = run_suites(&suites, &config, &opts)?;
    print_summary(&report);
    if let Some(path) = &cli.report {
        report.save(path)?;
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
