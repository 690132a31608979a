//! check → solve → assemble → verify, plus the artifacts each stage writes.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use rfest_core::exterior::Representation;
use rfest_core::filter::{assemble_filter, solve_exterior, SolverConfig};
use rfest_core::forward::{is_near_boundary, FilterOperator};
use rfest_core::geometry::surface_quadrature;
use rfest_core::lowdisc::interior_points;
use rfest_core::symbol::{audit, AuditConfig, BoundarySymbol, EllipticityReport};
use rfest_core::{DistributionalFilter, ExteriorSolution, Point3, ResidualReport, SymbolPoly};
use serde::{Deserialize, Serialize};

use crate::config::{Problem, RunConfig};
use crate::error::{CliError, Result};

pub const MANIFEST: &str = "manifest.json";
pub const SURFACE_DENSITY: &str = "surface_density.csv";
pub const EXTERIOR: &str = "exterior.json";

/// Floats in CSV output: 17 significant digits.
pub fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    fs::write(path, contents).map_err(|source| CliError::Write { path: path.to_path_buf(), source })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("report types serialize");
    text.push('\n');
    write_file(path, text.as_bytes())
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    let file = fs::File::create(path).map_err(|source| CliError::Write { path: path.to_path_buf(), source })?;
    Ok(csv::Writer::from_writer(file))
}

/// `<stem>.summary.json` next to a CSV output.
pub fn summary_path(csv: &Path) -> PathBuf {
    csv.with_extension("summary.json")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RootCount {
    pub xi_prime: Vec<f64>,
    pub count: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymbolReport {
    pub md_elliptic: bool,
    pub worst_ratio: f64,
    pub proper_elliptic: bool,
    pub upper_root_counts: Vec<RootCount>,
    pub clustered_roots: bool,
    pub sl_min_det: Option<f64>,
    pub sl_max_det: Option<f64>,
    pub sl_floor: f64,
    pub passed: bool,
    pub failures: Vec<String>,
}

pub fn check_symbols(q: &SymbolPoly, boundary: &[BoundarySymbol], sl_floor: f64) -> Result<SymbolReport> {
    let r: EllipticityReport = audit(q, boundary, &AuditConfig::default())?;
    let (sl_min_det, sl_max_det) = match r.sl_determinants {
        Some((lo, hi)) => (Some(lo), Some(hi)),
        None => (None, None),
    };
    let mut failures = r.failures;
    let sl_ok = sl_min_det.is_some_and(|d| d >= sl_floor);
    if let Some(d) = sl_min_det.filter(|_| !sl_ok) {
        failures.push(format!("Shapiro-Lopatinskii determinant {d:e} below floor {sl_floor:e}"));
    }
    let passed = r.md_elliptic && r.proper_elliptic && sl_ok;
    Ok(SymbolReport {
        md_elliptic: r.md_elliptic,
        worst_ratio: r.worst_ratio,
        proper_elliptic: r.proper_elliptic,
        upper_root_counts: r.upper_root_counts.into_iter().map(|(xi_prime, count)| RootCount { xi_prime, count }).collect(),
        clustered_roots: r.clustered_roots,
        sl_min_det,
        sl_max_det,
        sl_floor,
        passed,
        failures,
    })
}

/// Output of the solve stage.
#[derive(Debug, Clone)]
pub struct Solved {
    pub filter: DistributionalFilter,
    pub solution: ExteriorSolution,
    pub warnings: Vec<String>,
}

/// Solves the exterior problem and assembles `h` on a surface rule of `order`.
pub fn solve(p: &Problem, solver: &SolverConfig, order: usize) -> Result<Solved> {
    let solution = solve_exterior(&p.kernel, &p.f, &p.domain, solver)?;
    let surface = surface_quadrature(&p.domain, order)?;
    let filter = assemble_filter(&p.f, &solution, &surface, &p.kernel)?;
    let mut warnings = Vec::new();
    if solution.ill_conditioned {
        warnings.push(format!(
            "MFS least-squares system is ill-conditioned (pivot ratio {:e}); strengths may be unreliable",
            solution.conditioning.unwrap_or(f64::INFINITY)
        ));
    }
    Ok(Solved { filter, solution, warnings })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityStats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VolumeDensity {
    /// `Q f = −Δf + a² f`, evaluated from the source family.
    pub operator: String,
    pub a: f64,
    pub f: crate::config::SourceSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExteriorSummary {
    pub method: String,
    pub lmax: Option<usize>,
    pub n_sources: Option<usize>,
    pub conditioning: Option<f64>,
    pub ill_conditioned: bool,
    pub boundary_residual: Option<f64>,
    pub boundary_rms: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub config: RunConfig,
    pub surface_order: usize,
    pub surface_nodes: usize,
    pub surface_density: DensityStats,
    pub volume_density: VolumeDensity,
    pub surface_density_file: String,
    pub exterior_file: String,
    pub warnings: Vec<String>,
}

fn exterior_summary(sol: &ExteriorSolution) -> ExteriorSummary {
    let (method, lmax, n_sources) = match &sol.representation {
        Representation::Spectral { radial, .. } => ("spectral", Some(radial.lmax), None),
        Representation::Mfs { sources, .. } => ("mfs", None, Some(sources.len())),
    };
    ExteriorSummary {
        method: method.into(),
        lmax,
        n_sources,
        conditioning: sol.conditioning,
        ill_conditioned: sol.ill_conditioned,
        boundary_residual: sol.boundary_residual,
        boundary_rms: sol.boundary_rms,
    }
}

pub fn write_solve_artifacts(dir: &Path, cfg: &RunConfig, solved: &Solved) -> Result<Manifest> {
    fs::create_dir_all(dir).map_err(|source| CliError::Write { path: dir.to_path_buf(), source })?;
    let h = &solved.filter;
    let path = dir.join(SURFACE_DENSITY);
    let mut w = csv_writer(&path)?;
    w.write_record(["node_id", "x", "y", "z", "sigma"])?;
    for (i, (y, s)) in h.surface.nodes.iter().zip(&h.surface_density).enumerate() {
        w.write_record([i.to_string(), fmt(y.x), fmt(y.y), fmt(y.z), fmt(*s)])?;
    }
    w.flush().map_err(|source| CliError::Write { path: path.clone(), source })?;

    write_json(&dir.join(EXTERIOR), &exterior_summary(&solved.solution))?;
    let d = &h.surface_density;
    let manifest = Manifest {
        config: cfg.clone(),
        surface_order: h.surface.order,
        surface_nodes: d.len(),
        surface_density: DensityStats {
            min: d.iter().copied().fold(f64::INFINITY, f64::min),
            max: d.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            mean: d.iter().sum::<f64>() / d.len() as f64,
        },
        volume_density: VolumeDensity { operator: "-laplacian + a^2".into(), a: h.kernel.a, f: cfg.problem.f.clone() },
        surface_density_file: SURFACE_DENSITY.into(),
        exterior_file: EXTERIOR.into(),
        warnings: solved.warnings.clone(),
    };
    write_json(&dir.join(MANIFEST), &manifest)?;
    Ok(manifest)
}

#[derive(Debug, Deserialize)]
struct DensityRow {
    node_id: usize,
    x: f64,
    y: f64,
    z: f64,
    sigma: f64,
}

/// Rebuilds `h` from the configuration and the solve artifacts in `dir`.
pub fn load_filter(p: &Problem, dir: &Path) -> Result<DistributionalFilter> {
    let manifest_path = dir.join(MANIFEST);
    if !manifest_path.is_file() {
        return Err(CliError::MissingArtifact(manifest_path));
    }
    let manifest: Manifest = crate::config::read_json(&manifest_path)?;
    let density_path = dir.join(&manifest.surface_density_file);
    if !density_path.is_file() {
        return Err(CliError::MissingArtifact(density_path));
    }
    let bad = |reason: String| CliError::BadArtifact { path: density_path.clone(), reason };
    let surface = surface_quadrature(&p.domain, manifest.surface_order)?;
    let mut reader = csv::Reader::from_path(&density_path).map_err(|e| bad(e.to_string()))?;
    let mut density = Vec::with_capacity(surface.len());
    for (i, row) in reader.deserialize::<DensityRow>().enumerate() {
        let row = row.map_err(|e| bad(e.to_string()))?;
        let node = surface.nodes.get(i).ok_or_else(|| bad(format!("more rows than the {} surface nodes", surface.len())))?;
        if row.node_id != i || (Point3::new(row.x, row.y, row.z) - node).norm() > 1e-12 * (1.0 + node.norm()) {
            return Err(bad(format!("row {i} does not match surface node {i} of the configured domain")));
        }
        density.push(row.sigma);
    }
    if density.len() != surface.len() {
        return Err(bad(format!("{} rows for {} surface nodes", density.len(), surface.len())));
    }
    Ok(DistributionalFilter { kernel: p.kernel, domain: p.domain.clone(), source: p.f.clone(), surface, surface_density: density })
}

pub fn verification_points(p: &Problem) -> Result<Vec<Point3>> {
    let v = &p.verify;
    interior_points(&p.domain, v.n_points, v.margin, v.seed)
        .ok_or_else(|| CliError::Config(format!("no room for points {} from the boundary", v.margin)))
}

/// `R_Ω h − f` at the verification points, evaluated in parallel.
pub fn verify(p: &Problem, h: &DistributionalFilter, points: &[Point3], order: usize) -> Result<ResidualReport> {
    let op = FilterOperator::new(h, order)?;
    let values = points.par_iter().map(|x| op.apply(x)).collect::<std::result::Result<Vec<f64>, _>>()?;
    let targets = points.iter().map(|x| p.f.value(x)).collect();
    let near = points.iter().filter(|x| is_near_boundary(&p.domain, x)).count();
    Ok(ResidualReport::from_values(points.to_vec(), values, targets, order, near))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResidualSummary {
    pub sup_error: f64,
    pub l2_error: f64,
    pub order: usize,
    pub n_points: usize,
    pub near_boundary: usize,
    pub tol: f64,
    pub passed: bool,
}

pub fn write_residuals(path: &Path, r: &ResidualReport, tol: f64) -> Result<ResidualSummary> {
    let mut w = csv_writer(path)?;
    w.write_record(["point_id", "x", "y", "z", "Rh", "f", "abs_err"])?;
    for (i, ((x, v), t)) in r.points.iter().zip(&r.values).zip(&r.targets).enumerate() {
        w.write_record([i.to_string(), fmt(x.x), fmt(x.y), fmt(x.z), fmt(*v), fmt(*t), fmt((v - t).abs())])?;
    }
    w.flush().map_err(|source| CliError::Write { path: path.to_path_buf(), source })?;
    let summary = ResidualSummary {
        sup_error: r.sup_error,
        l2_error: r.l2_error,
        order: r.quad_order,
        n_points: r.points.len(),
        near_boundary: r.near_boundary,
        tol,
        passed: r.sup_error <= tol,
    };
    write_json(&summary_path(path), &summary)?;
    Ok(summary)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sweep {
    /// Interior residual of `R_Ω h − f` per quadrature order.
    QuadOrder,
    /// Held-out MFS boundary residual per source count.
    MfsSources,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub level: usize,
    pub param: usize,
    pub sup_residual: f64,
    pub l2_residual: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvergenceSummary {
    pub sweep: Sweep,
    /// Absent for a single level.
    pub strictly_decreasing: Option<bool>,
    pub rows: Vec<ConvergenceRow>,
}

pub fn convergence(p: &Problem, sweep: Sweep, params: &[usize]) -> Result<ConvergenceSummary> {
    let mut rows = Vec::with_capacity(params.len());
    match sweep {
        Sweep::QuadOrder => {
            let points = verification_points(p)?;
            for (i, &order) in params.iter().enumerate() {
                let solved = solve(p, &p.solver, order)?;
                let r = verify(p, &solved.filter, &points, order)?;
                rows.push(ConvergenceRow { level: i + 1, param: order, sup_residual: r.sup_error, l2_residual: r.l2_error });
            }
        }
        Sweep::MfsSources => {
            let SolverConfig::Mfs(base) = p.solver else {
                return Err(CliError::Config("a source sweep needs an MFS solver".into()));
            };
            for (i, &n_sources) in params.iter().enumerate() {
                // residuals are reported, not gated
                let cfg = rfest_core::MfsConfig { n_sources, tol: f64::INFINITY, ..base };
                let sol = solve_exterior(&p.kernel, &p.f, &p.domain, &SolverConfig::Mfs(cfg))?;
                rows.push(ConvergenceRow {
                    level: i + 1,
                    param: n_sources,
                    sup_residual: sol.boundary_residual.unwrap_or(f64::NAN),
                    l2_residual: sol.boundary_rms.unwrap_or(f64::NAN),
                });
            }
        }
    }
    let strictly_decreasing = (rows.len() > 1).then(|| rows.windows(2).all(|w| w[1].sup_residual < w[0].sup_residual));
    Ok(ConvergenceSummary { sweep, strictly_decreasing, rows })
}

pub fn write_convergence(path: &Path, s: &ConvergenceSummary) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["level", "param", "sup_residual", "l2_residual"])?;
    for r in &s.rows {
        w.write_record([r.level.to_string(), r.param.to_string(), fmt(r.sup_residual), fmt(r.l2_residual)])?;
    }
    w.flush().map_err(|source| CliError::Write { path: path.to_path_buf(), source })?;
    write_json(&summary_path(path), s)
}
