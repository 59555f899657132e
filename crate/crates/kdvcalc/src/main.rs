//! Command-line surface: generate densities, charge integrands, and
//! fluxes, and run the verification suites.
//!
//! Artifacts go to standard output (or `-o <path>`); diagnostics go to
//! standard error. Exit code 0 means success, 1 means a verification
//! failure, 2 means a usage error.

use std::error::Error;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use kdvcalc::conserve::charge_integrand;
use kdvcalc::densities::DensitySeries;
use kdvcalc::jetpoly::DiffPoly;
use kdvcalc::suite::{all_pass, calculus_suite, verify_suite, Check, DEFAULT_SEED};

#[derive(Parser)]
#[command(
    name = "kdvcalc",
    version,
    about = "Exact conserved densities, charges, and fluxes for the KdV equation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the conserved densities rho[0..=m].
    Densities(OrderArgs),
    /// Print the charge integrands Q[m] for even m (odd ones vanish).
    Charges(OrderArgs),
    /// Print the fluxes flux[0..=m] of the conservation laws.
    Flux(OrderArgs),
    /// Run the density/charge verification table up to order m.
    Verify(OrderArgs),
    /// Run the randomized calculus identity suite.
    CalculusCheck(CalculusArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Latex,
    Json,
}

#[derive(Args)]
struct OrderArgs {
    /// Highest order m.
    #[arg(short = 'm', long = "max-order")]
    max_order: usize,
    /// Output format; check tables render latex as text.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the artifact to this file instead of standard output.
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CalculusArgs {
    /// Random cases per identity.
    #[arg(short = 'm', long = "max-order", default_value_t = 100)]
    max_order: usize,
    /// Output format; check tables render latex as text.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the artifact to this file instead of standard output.
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
    /// Seed for the sampled forms.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Serialize)]
struct PolyEntry {
    m: usize,
    poly: DiffPoly,
}

#[derive(Serialize)]
struct DensitiesDoc {
    densities: Vec<PolyEntry>,
}

#[derive(Serialize)]
struct ChargesDoc {
    charges: Vec<PolyEntry>,
}

#[derive(Serialize)]
struct FluxDoc {
    fluxes: Vec<PolyEntry>,
}

#[derive(Serialize)]
struct ChecksDoc {
    checks: Vec<Check>,
    pass: bool,
}

#[derive(Serialize)]
struct CalculusDoc {
    seed: u64,
    cases: usize,
    checks: Vec<Check>,
    pass: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Box<dyn Error>> {
    match command {
        Command::Densities(args) => {
            let mut series = DensitySeries::new();
            let items: Vec<PolyEntry> = (0..=args.max_order)
                .map(|m| PolyEntry {
                    m,
                    poly: series.rho(m),
                })
                .collect();
            let artifact = render_polys(&items, args.format, "rho[", "\\rho^{(", |doc| {
                DensitiesDoc { densities: doc }
            })?;
            emit(&artifact, args.output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Charges(args) => {
            let mut series = DensitySeries::new();
            let mut items = Vec::new();
            for m in (0..=args.max_order).step_by(2) {
                items.push(PolyEntry {
                    m,
                    poly: charge_integrand(&mut series, m)?,
                });
            }
            let artifact = render_polys(&items, args.format, "Q[", "Q^{(", |doc| ChargesDoc {
                charges: doc,
            })?;
            emit(&artifact, args.output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Flux(args) => {
            let mut series = DensitySeries::new();
            let items: Vec<PolyEntry> = (0..=args.max_order)
                .map(|m| PolyEntry {
                    m,
                    poly: series.flux(m),
                })
                .collect();
            let artifact = render_polys(&items, args.format, "flux[", "F^{(", |doc| FluxDoc {
                fluxes: doc,
            })?;
            emit(&artifact, args.output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(args) => {
            let checks = verify_suite(args.max_order);
            let artifact = render_checks(&checks, args.format, |checks, pass| ChecksDoc {
                checks,
                pass,
            })?;
            emit(&artifact, args.output.as_deref())?;
            Ok(report_failures(&checks))
        }
        Command::CalculusCheck(args) => {
            let checks = calculus_suite(args.seed, args.max_order);
            let (seed, cases) = (args.seed, args.max_order);
            let artifact = render_checks(&checks, args.format, |checks, pass| CalculusDoc {
                seed,
                cases,
                checks,
                pass,
            })?;
            emit(&artifact, args.output.as_deref())?;
            Ok(report_failures(&checks))
        }
    }
}

fn render_polys<D: Serialize>(
    items: &[PolyEntry],
    format: Format,
    text_label: &str,
    latex_label: &str,
    wrap: impl FnOnce(Vec<PolyEntry>) -> D,
) -> Result<String, Box<dyn Error>> {
    match format {
        Format::Text => {
            let mut out = String::new();
            for e in items {
                out.push_str(&format!("{text_label}{}] = {}\n", e.m, e.poly));
            }
            Ok(out)
        }
        Format::Latex => {
            let mut out = String::new();
            for e in items {
                out.push_str(&format!("{latex_label}{})}} = {}\n", e.m, e.poly.latex()));
            }
            Ok(out)
        }
        Format::Json => {
            let doc = wrap(items.iter().map(|e| PolyEntry { m: e.m, poly: e.poly.clone() }).collect());
            Ok(serde_json::to_string(&doc)? + "\n")
        }
    }
}

fn render_checks<D: Serialize>(
    checks: &[Check],
    format: Format,
    wrap: impl FnOnce(Vec<Check>, bool) -> D,
) -> Result<String, Box<dyn Error>> {
    match format {
        Format::Text | Format::Latex => {
            let mut out = String::new();
            for c in checks {
                out.push_str(&render_check_line(c));
                out.push('\n');
            }
            Ok(out)
        }
        Format::Json => {
            let doc = wrap(checks.to_vec(), all_pass(checks));
            Ok(serde_json::to_string(&doc)? + "\n")
        }
    }
}

fn render_check_line(c: &Check) -> String {
    if c.pass {
        if c.detail.is_empty() {
            format!("PASS {}", c.name)
        } else {
            format!("PASS {} ({})", c.name, c.detail)
        }
    } else {
        format!("FAIL {}: {}", c.name, c.detail)
    }
}

fn report_failures(checks: &[Check]) -> ExitCode {
    let failures: Vec<&Check> = checks.iter().filter(|c| !c.pass).collect();
    if failures.is_empty() {
        return ExitCode::SUCCESS;
    }
    for c in &failures {
        eprintln!("{}", render_check_line(c));
    }
    eprintln!("{} of {} checks failed", failures.len(), checks.len());
    ExitCode::FAILURE
}

fn emit(artifact: &str, path: Option<&std::path::Path>) -> Result<(), Box<dyn Error>> {
    match path {
        Some(p) => std::fs::write(p, artifact)?,
        None => print!("{artifact}"),
    }
    Ok(())
}
