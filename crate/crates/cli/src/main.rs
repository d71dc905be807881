use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use z2sl_core::backlund::{self, BacklundVariant};
use z2sl_core::lax::{self, Variant};
use z2sl_core::report::{Check, SuiteReport, VerificationReport};
use z2sl_core::virasoro::{self, Sector};
use z2sl_core::{algebra, reps, soldering, solutions};

#[derive(Parser)]
#[command(name = "z2sl", version, about = "Exact verifier for the Z2xZ2-graded super-Liouville system")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one verification suite, or all of them.
    Verify {
        #[command(subcommand)]
        suite: Suite,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    /// Include per-check wall times.
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum LaxArg {
    Superspace,
    Alternative,
    Spectral,
}

#[derive(Clone, Copy, ValueEnum)]
enum BacklundArg {
    Free,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum SectorArg {
    Rrr,
    Rnsns,
    Nsnsr,
}

#[derive(Subcommand)]
enum Suite {
    /// Structure constants, grading and graded Jacobi.
    Algebra,
    /// Tensor realization, 6-dim representation and action table.
    Rep,
    /// Currents, constraints, component equations and gauge reduction.
    Soldering,
    /// Zero-curvature formulations; all variants when none is given.
    Lax {
        #[arg(long, value_enum)]
        variant: Option<LaxArg>,
    },
    /// The explicit general solution.
    Solution,
    /// Backlund transformations; both variants when none is given.
    Backlund {
        #[arg(long, value_enum)]
        variant: Option<BacklundArg>,
    },
    /// Poisson ansatz, current algebra, modes and Jacobi.
    Virasoro {
        #[arg(long, value_enum, default_value_t = SectorArg::Rrr)]
        sector: SectorArg,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(i64).range(2..))]
        window: i64,
    },
    /// Every suite; virasoro runs all three sectors.
    All {
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(i64).range(2..))]
        window: i64,
    },
}

type Job = (String, Box<dyn Fn() -> Vec<Check> + Send + Sync>);

fn job(name: impl Into<String>, f: impl Fn() -> Vec<Check> + Send + Sync + 'static) -> Job {
    (name.into(), Box::new(f))
}

fn lax_jobs(v: Option<LaxArg>) -> Vec<Job> {
    let variants = match v {
        None => Variant::ALL.to_vec(),
        Some(LaxArg::Superspace) => vec![Variant::Superspace],
        Some(LaxArg::Alternative) => vec![Variant::Alternative],
        Some(LaxArg::Spectral) => vec![Variant::Spectral],
    };
    variants.into_iter().map(|v| job(format!("lax.{}", v.name()), move || lax::verify(v))).collect()
}

fn backlund_jobs(v: Option<BacklundArg>) -> Vec<Job> {
    let variants = match v {
        None => BacklundVariant::ALL.to_vec(),
        Some(BacklundArg::Free) => vec![BacklundVariant::Free],
        Some(BacklundArg::Auto) => vec![BacklundVariant::Auto],
    };
    variants.into_iter().map(|v| job(format!("backlund.{}", v.name()), move || backlund::verify(v))).collect()
}

fn sector(s: SectorArg) -> Sector {
    match s {
        SectorArg::Rrr => Sector::Rrr,
        SectorArg::Rnsns => Sector::RNsNs,
        SectorArg::Nsnsr => Sector::NsNsR,
    }
}

fn virasoro_job(sectors: Vec<Sector>, window: i64) -> Job {
    let name = match sectors.as_slice() {
        [s] => format!("virasoro.{}", s.key()),
        _ => "virasoro".to_string(),
    };
    job(name, move || virasoro::verify(&sectors, window))
}

fn jobs(suite: &Suite) -> Vec<Job> {
    match suite {
        Suite::Algebra => vec![job("algebra", algebra::verify)],
        Suite::Rep => vec![job("rep", reps::verify)],
        Suite::Soldering => vec![job("soldering", soldering::verify)],
        Suite::Lax { variant } => lax_jobs(*variant),
        Suite::Solution => vec![job("solution", solutions::verify)],
        Suite::Backlund { variant } => backlund_jobs(*variant),
        Suite::Virasoro { sector: s, window } => vec![virasoro_job(vec![sector(*s)], *window)],
        Suite::All { window } => {
            let mut all = vec![job("algebra", algebra::verify), job("rep", reps::verify), job("soldering", soldering::verify)];
            all.extend(lax_jobs(None));
            all.push(job("solution", solutions::verify));
            all.extend(backlund_jobs(None));
            all.push(virasoro_job(Sector::ALL.to_vec(), *window));
            all
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("Z2L_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| format!("Z2L_THREADS must be a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let Command::Verify { suite, output } = cli.command;
    let suites: Vec<SuiteReport> = jobs(&suite)
        .par_iter()
        .map(|(name, f)| {
            let mut r = SuiteReport::new(name.clone());
            r.timed(f);
            r
        })
        .collect();
    let report = VerificationReport::new(suites);
    let text = match output.format {
        Format::Json => report.to_json(output.timings) + "\n",
        Format::Text => report.to_text(output.timings),
    };
    let written = match &output.out {
        Some(path) => fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    if !report.passed {
        for s in &report.suites {
            for c in s.failures() {
                eprintln!("FAIL {}.{}: {}", s.suite, c.id, c.residual.as_deref().unwrap_or(""));
            }
        }
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
