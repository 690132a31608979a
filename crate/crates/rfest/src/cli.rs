//! Command-line front end. Exit codes: 0 success, 1 failed check or solver
//! error, 2 unusable input.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand};

use crate::config::{read_json, BoundarySpec, RunConfig, SymbolSpec};
use crate::error::{CliError, Result};
use crate::pipeline::{self, Sweep};

#[derive(Debug, Parser)]
#[command(name = "rfest", version, about = "Optimal filters for R_Ω h = f with weakly singular covariance kernels")]
pub struct Cli {
    /// Worker threads for point evaluation (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Audit a symbol for md-ellipticity, proper ellipticity and the Shapiro–Lopatinskii condition.
    CheckSymbols {
        #[arg(long)]
        symbols: PathBuf,
        #[arg(long)]
        boundary: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Smallest acceptable Shapiro–Lopatinskii determinant.
        #[arg(long, default_value_t = 1e-3)]
        sl_floor: f64,
    },
    /// Solve the exterior problem and write the filter densities.
    Solve {
        #[arg(long)]
        config: PathBuf,
        /// Artifact directory (default: `output` from the config).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply R_Ω to a solved filter and compare with f.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        artifacts: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Residuals over quadrature orders or MFS source counts.
    Convergence(ConvergenceArgs),
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("sweep").required(true).args(["levels", "sources"])))]
pub struct ConvergenceArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Quadrature orders, e.g. 8,16,32.
    #[arg(long, value_delimiter = ',')]
    pub levels: Option<Vec<usize>>,
    /// MFS source counts, e.g. 100,200,400.
    #[arg(long, value_delimiter = ',')]
    pub sources: Option<Vec<usize>>,
    #[arg(long)]
    pub out: PathBuf,
}

/// Runs a parsed command; `Ok(false)` means a check failed (exit 1).
pub fn run(cli: &Cli) -> Result<bool> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be positive".into()));
        }
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match &cli.command {
        Command::CheckSymbols { symbols, boundary, out, sl_floor } => check_symbols(symbols, boundary, out, *sl_floor),
        Command::Solve { config, out } => solve(config, out.as_deref()),
        Command::Verify { config, artifacts, out } => verify(config, artifacts, out),
        Command::Convergence(args) => convergence(args),
    }
}

fn check_symbols(symbols: &Path, boundary: &Path, out: &Path, sl_floor: f64) -> Result<bool> {
    let q = read_json::<SymbolSpec>(symbols)?.interior()?;
    let b = read_json::<BoundarySpec>(boundary)?.build()?;
    let report = pipeline::check_symbols(&q, &b, sl_floor)?;
    pipeline::write_json(out, &report)?;
    println!(
        "md-elliptic: {}  proper: {}  slMinDet: {}",
        report.md_elliptic,
        report.proper_elliptic,
        report.sl_min_det.map_or("n/a".to_string(), pipeline::fmt)
    );
    for f in &report.failures {
        println!("failed: {f}");
    }
    Ok(report.passed)
}

fn solve(config: &Path, out: Option<&Path>) -> Result<bool> {
    let cfg = RunConfig::load(config)?;
    let dir = out
        .map(Path::to_path_buf)
        .or_else(|| cfg.output.clone())
        .ok_or_else(|| CliError::Config("no output directory: pass --out or set \"output\"".into()))?;
    let p = cfg.problem()?;
    let solved = pipeline::solve(&p, &p.solver, p.verify.quad_order)?;
    let m = pipeline::write_solve_artifacts(&dir, &cfg, &solved)?;
    println!(
        "surface density on {} nodes: min {} max {}",
        m.surface_nodes,
        pipeline::fmt(m.surface_density.min),
        pipeline::fmt(m.surface_density.max)
    );
    for w in &m.warnings {
        eprintln!("warning: {w}");
    }
    Ok(true)
}

fn verify(config: &Path, artifacts: &Path, out: &Path) -> Result<bool> {
    let cfg = RunConfig::load(config)?;
    let p = cfg.problem()?;
    let h = pipeline::load_filter(&p, artifacts)?;
    let points = pipeline::verification_points(&p)?;
    let report = pipeline::verify(&p, &h, &points, p.verify.quad_order)?;
    let s = pipeline::write_residuals(out, &report, p.verify.tol)?;
    println!("sup error {} (tol {}), l2 error {}", pipeline::fmt(s.sup_error), pipeline::fmt(s.tol), pipeline::fmt(s.l2_error));
    if s.near_boundary > 0 {
        eprintln!("warning: {} verification points lie within 1e-3 of the boundary", s.near_boundary);
    }
    Ok(s.passed)
}

fn convergence(args: &ConvergenceArgs) -> Result<bool> {
    let cfg = RunConfig::load(&args.config)?;
    let p = cfg.problem()?;
    let (sweep, params) = match (&args.levels, &args.sources) {
        (Some(l), None) => (Sweep::QuadOrder, l),
        (None, Some(s)) => (Sweep::MfsSources, s),
        _ => unreachable!("clap enforces exactly one sweep"),
    };
    if params.is_empty() {
        return Err(CliError::Config("empty sweep".into()));
    }
    let s = pipeline::convergence(&p, sweep, params)?;
    pipeline::write_convergence(&args.out, &s)?;
    for r in &s.rows {
        println!("{} {} {} {}", r.level, r.param, pipeline::fmt(r.sup_residual), pipeline::fmt(r.l2_residual));
    }
    match s.strictly_decreasing {
        Some(d) => println!("strictly decreasing: {d}"),
        None => println!("single level"),
    }
    Ok(true)
}

/// Parses `args`, runs, reports errors on stderr and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
