//! Command-line front end: `check`, `search`, `family` and `fuzz`.
//!
//! Exit codes: 0 success, 1 input or usage error, 2 a theorem-status check failed,
//! 3 the search found a violation candidate.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::checks::CheckRegistry;
use crate::curvature;
use crate::error::Result;
use crate::extremizer::{multistart, SearchConfig, VIOLATION_MARGIN};
use crate::families::{FamilyParams, FamilyRegistry};
use crate::fuzz::{run_fuzz, FuzzConfig};
use crate::inequalities::DEFAULT_TOL;
use crate::report::{self, FamilyReportDocument, InputDocument, ReportDocument, SearchReportDocument, TOOL_VERSION};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_CHECK_FAILED: u8 = 2;
pub const EXIT_VIOLATION: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "ddvv", version, about = "Check and search the DDVV normal scalar curvature inequality")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute invariants and run every inequality on a shape-operator document.
    Check(CheckArgs),
    /// Multistart search for maximizers of the commutator objective on the unit sphere.
    Search(SearchArgs),
    /// Generate a Lagrangian family member and verify its closed forms.
    Family(FamilyArgs),
    /// Run the randomized property suite.
    Fuzz(FuzzArgs),
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Comma-separated subset of checks to run (default: all).
    #[arg(long, value_delimiter = ',')]
    pub checks: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value_t = 64)]
    pub restarts: usize,
    #[arg(long, default_value_t = 5000)]
    pub iters: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.1)]
    pub step_init: f64,
    #[arg(long, default_value_t = 0.5)]
    pub step_shrink: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub grad_tol: f64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    /// One of: h-umbilical, minimal-c3, s3-equality, ultraminimal-c4, eq51.
    pub name: String,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<f64>,
    /// Holomorphic curvature parameter `c` (space of curvature 4c) for the complex-space-form check.
    #[arg(long = "csf-c", allow_hyphen_values = true)]
    pub csf_c: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FuzzArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Writes `value` to `path`, or to standard output when no path is given.
fn emit<T: serde::Serialize>(path: Option<&PathBuf>, value: &T) -> Result<()> {
    match path {
        Some(p) => report::write_json(p, value),
        None => {
            println!("{}", report::to_json(value)?);
            Ok(())
        }
    }
}

pub fn cmd_check(args: &CheckArgs) -> Result<u8> {
    let input = InputDocument::read(&args.input)?;
    let shape = input.to_shape_set()?;
    let registry = match &args.checks {
        Some(names) => CheckRegistry::default().select(names)?,
        None => CheckRegistry::default(),
    };
    let checks = registry.run_all(&shape, args.tol)?;
    let failed = checks.iter().any(|c| c.is_theorem_failure());
    let doc = ReportDocument {
        input: InputDocument::from_shape_set(&shape, input.label.clone()),
        invariants: curvature::invariants(&shape),
        checks,
        tool_version: TOOL_VERSION.to_string(),
        seeds: Vec::new(),
        timestamp: report::timestamp(),
    };
    emit(args.output.as_ref(), &doc)?;
    if let Some(csv) = &args.csv {
        report::write_checks_csv(csv, doc.checks.iter().map(|c| &c.result))?;
    }
    for c in &doc.checks {
        eprintln!(
            "{:<22} lhs={:<24e} rhs={:<24e} holds={} equality={}",
            c.result.label, c.result.lhs, c.result.rhs, c.result.holds, c.result.equality
        );
    }
    Ok(if failed { EXIT_CHECK_FAILED } else { EXIT_OK })
}

pub fn cmd_search(args: &SearchArgs) -> Result<u8> {
    let config = SearchConfig {
        n: args.n,
        m: args.m,
        restarts: args.restarts,
        max_iters: args.iters,
        step_init: args.step_init,
        step_shrink: args.step_shrink,
        grad_tol: args.grad_tol,
        seed: args.seed,
    };
    let report = multistart(&config)?;
    let violation = !report.violation_candidates.is_empty();
    let best = report.best_value;
    let doc = SearchReportDocument { report, tool_version: TOOL_VERSION.to_string(), timestamp: report::timestamp() };
    emit(args.output.as_ref(), &doc)?;
    let line = format!("best_value = {best:.17e}");
    if args.output.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
    if violation {
        eprintln!("violation candidate: objective exceeds 1 + {VIOLATION_MARGIN:e}");
        return Ok(EXIT_VIOLATION);
    }
    Ok(EXIT_OK)
}

pub fn cmd_family(args: &FamilyArgs) -> Result<u8> {
    let registry = FamilyRegistry::default();
    let family = registry.get(&args.name)?;
    let params = FamilyParams {
        n: args.n,
        lambda: args.lambda,
        mu: args.mu,
        a: args.a,
        b: args.b,
        c: args.c,
        d: args.d,
        csf_c: args.csf_c,
    };
    let eval = family.evaluate(&params, args.tol)?;
    let passed = eval.passed();
    let doc = FamilyReportDocument {
        family: family.name().to_string(),
        params,
        input: InputDocument::from_shape_set(&eval.shape, Some(family.name().to_string())),
        invariants: curvature::invariants(&eval.shape),
        comparisons: eval.comparisons,
        checks: eval.checks,
        passed,
        tool_version: TOOL_VERSION.to_string(),
        timestamp: report::timestamp(),
    };
    emit(args.output.as_ref(), &doc)?;
    if let Some(csv) = &args.csv {
        report::write_checks_csv(csv, &doc.checks)?;
    }
    for c in &doc.comparisons {
        eprintln!("{:<22} closed={:<24e} oracle={:<24e} rel_err={:e}", c.quantity, c.closed_form, c.oracle, c.rel_err);
    }
    for c in &doc.checks {
        eprintln!("{:<22} lhs={:<24e} rhs={:<24e} holds={} equality={}", c.label, c.lhs, c.rhs, c.holds, c.equality);
    }
    Ok(if passed { EXIT_OK } else { EXIT_CHECK_FAILED })
}

pub fn cmd_fuzz(args: &FuzzArgs) -> Result<u8> {
    let summary = run_fuzz(&FuzzConfig { n: args.n, m: args.m, samples: args.samples, seed: args.seed, tol: args.tol })?;
    println!("{:<22} {:>5} {:>9} {:>9} {:>14}", "property", "hard", "passed", "failed", "worst");
    for p in &summary.properties {
        println!("{:<22} {:>5} {:>9} {:>9} {:>14.6e}", p.name, p.hard, p.passed, p.failed, p.worst);
    }
    println!("hard failures: {}, soft failures: {}", summary.hard_failures, summary.soft_failures);
    if let Some(path) = &args.output {
        report::write_json(path, &summary)?;
    }
    Ok(if summary.hard_failures == 0 { EXIT_OK } else { EXIT_CHECK_FAILED })
}

/// Dispatches a parsed command line and maps errors to exit code 1.
pub fn run(cli: &Cli) -> u8 {
    let result = match &cli.command {
        Command::Check(a) => cmd_check(a),
        Command::Search(a) => cmd_search(a),
        Command::Family(a) => cmd_family(a),
        Command::Fuzz(a) => cmd_fuzz(a),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        EXIT_INPUT
    })
}
