//! JSON schemas for run configurations and symbols, and their conversion
//! into core types.

use std::fs;
use std::path::{Path, PathBuf};

use rfest_core::exterior::MfsConfig;
use rfest_core::filter::SolverConfig;
use rfest_core::geometry::{build_ball, build_star_surface};
use rfest_core::symbol::BoundarySymbol;
use rfest_core::{Domain, KernelParams, Point3, SourceField, SymbolPoly};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum KernelSpec {
    #[serde(rename = "modified_helmholtz_3d")]
    ModifiedHelmholtz3D { a: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadialSpec {
    pub lm_coeffs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainSpec {
    Ball { center: [f64; 3], radius: f64 },
    Star { center: [f64; 3], radial: RadialSpec },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonomialSpec {
    pub alpha: [u32; 3],
    pub coeff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum SourceSpec {
    Constant { value: f64 },
    /// `e^{d·x}`; `|d|` must equal the kernel constant.
    ExpLinear { direction: [f64; 3] },
    Gaussian { center: [f64; 3], width: f64 },
    Polynomial { coeffs: Vec<MonomialSpec> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case", deny_unknown_fields)]
pub enum SolverSpec {
    Spectral {
        #[serde(rename = "Lmax")]
        lmax: usize,
    },
    Mfs { n_sources: usize, beta: f64, tol: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub kernel: KernelSpec,
    pub domain: DomainSpec,
    pub f: SourceSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifySpec {
    pub n_points: usize,
    pub tol: f64,
    /// Surface and volume quadrature order.
    pub quad_order: usize,
    /// Offset into the Halton sequence.
    pub seed: u64,
    /// Minimum distance of verification points from the boundary.
    pub margin: f64,
}

impl Default for VerifySpec {
    fn default() -> Self {
        Self { n_points: 50, tol: 1e-6, quad_order: 32, seed: 0, margin: 0.01 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemSpec,
    pub solver: SolverSpec,
    #[serde(default)]
    pub verify: VerifySpec,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub alpha: Vec<u32>,
    pub coeff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolSpec {
    pub dimension: usize,
    pub order: u32,
    pub terms: Vec<TermSpec>,
}

/// A boundary file holds one operator or a list of them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BoundarySpec {
    One(SymbolSpec),
    Many(Vec<SymbolSpec>),
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.to_path_buf(), source })
}

fn invalid(e: rfest_core::Error) -> CliError {
    CliError::Config(e.to_string())
}

fn point(p: [f64; 3]) -> Point3 {
    Point3::new(p[0], p[1], p[2])
}

impl KernelSpec {
    pub fn build(&self) -> Result<KernelParams> {
        match self {
            Self::ModifiedHelmholtz3D { a } => KernelParams::modified_helmholtz(*a).map_err(invalid),
        }
    }
}

impl DomainSpec {
    pub fn build(&self) -> Result<Domain> {
        match self {
            Self::Ball { center, radius } => build_ball(point(*center), *radius).map_err(invalid),
            Self::Star { center, radial } => build_star_surface(point(*center), &radial.lm_coeffs).map_err(invalid),
        }
    }
}

impl SourceSpec {
    pub fn build(&self) -> SourceField {
        match self {
            Self::Constant { value } => SourceField::Constant(*value),
            Self::ExpLinear { direction } => SourceField::ExpLinear { rate: point(*direction) },
            Self::Gaussian { center, width } => SourceField::Gaussian { center: point(*center), width: *width },
            Self::Polynomial { coeffs } => SourceField::Polynomial(coeffs.iter().map(|m| (m.alpha, m.coeff)).collect()),
        }
    }
}

impl SolverSpec {
    pub fn build(&self) -> SolverConfig {
        match self {
            Self::Spectral { lmax } => SolverConfig::Spectral { lmax: *lmax },
            Self::Mfs { n_sources, beta, tol } => SolverConfig::Mfs(MfsConfig { n_sources: *n_sources, beta: *beta, tol: *tol }),
        }
    }
}

impl SymbolSpec {
    fn terms(&self) -> impl Iterator<Item = (Vec<u32>, f64)> + '_ {
        self.terms.iter().map(|t| (t.alpha.clone(), t.coeff))
    }

    pub fn interior(&self) -> Result<SymbolPoly> {
        SymbolPoly::new(self.dimension, self.order, self.terms()).map_err(invalid)
    }

    pub fn boundary(&self) -> Result<BoundarySymbol> {
        BoundarySymbol::new(self.dimension, self.order, self.terms()).map_err(invalid)
    }
}

impl BoundarySpec {
    pub fn build(&self) -> Result<Vec<BoundarySymbol>> {
        match self {
            Self::One(s) => Ok(vec![s.boundary()?]),
            Self::Many(list) => list.iter().map(SymbolSpec::boundary).collect(),
        }
    }
}

/// A validated problem ready for the pipeline.
#[derive(Debug, Clone)]
pub struct Problem {
    pub kernel: KernelParams,
    pub domain: Domain,
    pub f: SourceField,
    pub solver: SolverConfig,
    pub verify: VerifySpec,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        read_json(path)
    }

    pub fn problem(&self) -> Result<Problem> {
        let kernel = self.problem.kernel.build()?;
        let f = self.problem.f.build();
        f.validate(kernel.a).map_err(invalid)?;
        let v = &self.verify;
        if v.quad_order < rfest_core::geometry::MIN_ORDER {
            return Err(CliError::Config(format!("verify.quad_order must be at least {}", rfest_core::geometry::MIN_ORDER)));
        }
        if !(v.tol > 0.0) || !(v.margin >= 0.0) {
            return Err(CliError::Config("verify.tol must be positive and verify.margin nonnegative".into()));
        }
        Ok(Problem { kernel, domain: self.problem.domain.build()?, f, solver: self.solver.build(), verify: v.clone() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BALL: &str = r#"{
        "problem": {
            "kernel": {"family": "modified_helmholtz_3d", "a": 1.0},
            "domain": {"kind": "ball", "center": [0, 0, 0], "radius": 1.0},
            "f": {"family": "constant", "value": 1.0}
        },
        "solver": {"method": "spectral", "Lmax": 16}
    }"#;

    #[test]
    fn parses_documented_shapes() {
        let cfg: RunConfig = serde_json::from_str(BALL).unwrap();
        assert_eq!(cfg.verify, VerifySpec::default());
        assert_eq!(cfg.solver, SolverSpec::Spectral { lmax: 16 });
        let p = cfg.problem().unwrap();
        assert!(p.domain.is_ball());

        let mfs: SolverSpec = serde_json::from_str(r#"{"method":"mfs","n_sources":400,"beta":0.7,"tol":1e-8}"#).unwrap();
        assert_eq!(mfs, SolverSpec::Mfs { n_sources: 400, beta: 0.7, tol: 1e-8 });
        let star: DomainSpec = serde_json::from_str(r#"{"kind":"star","center":[0,0,0],"radial":{"lm_coeffs":[3.5449077018110318]}}"#).unwrap();
        assert!(star.build().is_ok());
        let f: SourceSpec = serde_json::from_str(r#"{"family":"exp_linear","direction":[0,0,-1]}"#).unwrap();
        assert_eq!(f.build(), SourceField::ExpLinear { rate: Point3::new(0.0, 0.0, -1.0) });
        let g: SourceSpec = serde_json::from_str(r#"{"family":"polynomial","coeffs":[{"alpha":[2,0,0],"coeff":1.5}]}"#).unwrap();
        assert_eq!(g.build(), SourceField::Polynomial(vec![([2, 0, 0], 1.5)]));
    }

    #[test]
    fn rejects_invalid_problems() {
        let mut cfg: RunConfig = serde_json::from_str(BALL).unwrap();
        cfg.problem.f = SourceSpec::ExpLinear { direction: [0.0, 0.0, -2.0] };
        assert!(matches!(cfg.problem(), Err(CliError::Config(_))));
        cfg.problem.f = SourceSpec::Constant { value: 1.0 };
        cfg.problem.domain = DomainSpec::Ball { center: [0.0; 3], radius: -1.0 };
        assert!(matches!(cfg.problem(), Err(CliError::Config(_))));
        assert!(serde_json::from_str::<RunConfig>(r#"{"problem": 3}"#).is_err());
    }

    #[test]
    fn boundary_file_accepts_one_or_many() {
        let one: BoundarySpec = serde_json::from_str(r#"{"dimension":3,"order":0,"terms":[{"alpha":[0,0,0],"coeff":1}]}"#).unwrap();
        assert_eq!(one.build().unwrap().len(), 1);
        let many: BoundarySpec = serde_json::from_str(
            r#"[{"dimension":3,"order":0,"terms":[{"alpha":[0,0,0],"coeff":1}]},
                {"dimension":3,"order":1,"terms":[{"alpha":[0,0,1],"coeff":1}]}]"#,
        )
        .unwrap();
        assert_eq!(many.build().unwrap().len(), 2);
    }
}
