//! Reduction of `R_Ω h = f` to an exterior Dirichlet problem and assembly of
//! the distributional solution
//!
//! `h = (−Δ + a²) f + (∂f/∂n − ∂u/∂n) δ_∂Ω`,
//!
//! where `u` solves the exterior problem with `u = f` on `∂Ω`. Also provides
//! the two pairings `⟨h, φ⟩` used to check the jump formula: one from the
//! assembled densities, one from `F = f` in Ω, `u` outside, via `(F, Qφ)`.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::exterior::{self, BoundaryData, ExteriorSolution, MfsConfig};
use crate::geometry::{surface_quadrature, AngularRule, Domain, Point3, SurfaceQuadrature};
use crate::kernel::{KernelFamily, KernelParams};
use crate::quadrature::GaussLegendre;
use crate::smooth::falling_step;
use crate::sph;

/// Right-hand side `f` with analytic value, gradient and Laplacian.
#[derive(Debug, Clone, PartialEq)]
pub enum SourceField {
    Constant(f64),
    /// `e^{b·x}`; requires `|b| = a` so that `(−Δ + a²) f = 0`.
    ExpLinear { rate: Point3 },
    /// `e^{−|x − c|² / w²}`.
    Gaussian { center: Point3, width: f64 },
    /// `Σ c_ijk x^i y^j z^k`.
    Polynomial(Vec<([u32; 3], f64)>),
    /// `Σ α_k f_k`.
    Combination(Vec<(f64, SourceField)>),
}

fn ipow(x: f64, k: u32) -> f64 {
    x.powi(k as i32)
}

fn dpow(x: f64, k: u32) -> f64 {
    if k == 0 {
        0.0
    } else {
        k as f64 * x.powi(k as i32 - 1)
    }
}

fn ddpow(x: f64, k: u32) -> f64 {
    if k < 2 {
        0.0
    } else {
        (k * (k - 1)) as f64 * x.powi(k as i32 - 2)
    }
}

impl SourceField {
    pub fn value(&self, x: &Point3) -> f64 {
        match self {
            Self::Constant(c) => *c,
            Self::ExpLinear { rate } => rate.dot(x).exp(),
            Self::Gaussian { center, width } => (-(x - center).norm_squared() / (width * width)).exp(),
            Self::Polynomial(terms) => terms
                .iter()
                .map(|(e, c)| c * ipow(x.x, e[0]) * ipow(x.y, e[1]) * ipow(x.z, e[2]))
                .sum(),
            Self::Combination(parts) => parts.iter().map(|(w, f)| w * f.value(x)).sum(),
        }
    }

    pub fn gradient(&self, x: &Point3) -> Point3 {
        match self {
            Self::Constant(_) => Point3::zeros(),
            Self::ExpLinear { rate } => rate * rate.dot(x).exp(),
            Self::Gaussian { center, width } => {
                let w2 = width * width;
                (x - center) * (-2.0 / w2 * self.value(x))
            }
            Self::Polynomial(terms) => {
                let mut g = Point3::zeros();
                for (e, c) in terms {
                    let (px, py, pz) = (ipow(x.x, e[0]), ipow(x.y, e[1]), ipow(x.z, e[2]));
                    g += Point3::new(dpow(x.x, e[0]) * py * pz, px * dpow(x.y, e[1]) * pz, px * py * dpow(x.z, e[2])) * *c;
                }
                g
            }
            Self::Combination(parts) => parts.iter().map(|(w, f)| f.gradient(x) * *w).sum(),
        }
    }

    pub fn laplacian(&self, x: &Point3) -> f64 {
        match self {
            Self::Constant(_) => 0.0,
            Self::ExpLinear { rate } => rate.norm_squared() * rate.dot(x).exp(),
            Self::Gaussian { center, width } => {
                let w2 = width * width;
                let r2 = (x - center).norm_squared();
                (4.0 * r2 / (w2 * w2) - 6.0 / w2) * self.value(x)
            }
            Self::Polynomial(terms) => terms
                .iter()
                .map(|(e, c)| {
                    let (px, py, pz) = (ipow(x.x, e[0]), ipow(x.y, e[1]), ipow(x.z, e[2]));
                    c * (ddpow(x.x, e[0]) * py * pz + px * ddpow(x.y, e[1]) * pz + px * py * ddpow(x.z, e[2]))
                })
                .sum(),
            Self::Combination(parts) => parts.iter().map(|(w, f)| w * f.laplacian(x)).sum(),
        }
    }

    /// `(−Δ + a²) f` at `x`.
    pub fn apply_q(&self, x: &Point3, a: f64) -> f64 {
        match self {
            // annihilated exactly, not up to rounding
            Self::ExpLinear { .. } => 0.0,
            Self::Combination(parts) => parts.iter().map(|(w, f)| w * f.apply_q(x, a)).sum(),
            _ => -self.laplacian(x) + a * a * self.value(x),
        }
    }

    /// Checks family constraints that depend on the kernel constant.
    pub fn validate(&self, a: f64) -> Result<()> {
        match self {
            Self::ExpLinear { rate } => {
                let norm = rate.norm();
                if (norm - a).abs() > 1e-12 * a {
                    return Err(Error::ExpLinearRate { norm, a });
                }
                Ok(())
            }
            Self::Gaussian { width, .. } if !(*width > 0.0) => {
                Err(Error::InvalidParameter("gaussian width must be positive"))
            }
            Self::Combination(parts) => parts.iter().try_for_each(|(_, f)| f.validate(a)),
            _ => Ok(()),
        }
    }
}

/// Smooth compactly supported (or negligible beyond `support_radius`) test functions.
#[derive(Debug, Clone, PartialEq)]
pub enum TestFunction {
    /// `exp(1 − 1/(1 − s²))`, `s = |x − c|/radius`, zero for `s ≥ 1`.
    Bump { center: Point3, radius: f64 },
    /// `e^{−|x − c|²/w²}`, below `e^{−64}` beyond `8w`.
    Gaussian { center: Point3, width: f64 },
    /// 1 on `|x − c| ≤ inner`, smooth decay to 0 at `outer`.
    Plateau { center: Point3, inner: f64, outer: f64 },
}

impl TestFunction {
    pub fn center(&self) -> Point3 {
        match self {
            Self::Bump { center, .. } | Self::Gaussian { center, .. } | Self::Plateau { center, .. } => *center,
        }
    }

    pub fn support_radius(&self) -> f64 {
        match self {
            Self::Bump { radius, .. } => *radius,
            Self::Gaussian { width, .. } => 8.0 * width,
            Self::Plateau { outer, .. } => *outer,
        }
    }

    /// Radii about the center where the profile changes character.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Self::Bump { radius, .. } => vec![*radius],
            Self::Gaussian { .. } => Vec::new(),
            Self::Plateau { inner, outer, .. } => vec![*inner, *outer],
        }
    }

    /// Profile `(φ, φ′, φ″)` as a function of the distance to the center.
    fn profile(&self, r: f64) -> (f64, f64, f64) {
        match self {
            Self::Bump { radius, .. } => {
                let s = r / radius;
                if s >= 1.0 {
                    return (0.0, 0.0, 0.0);
                }
                let d = 1.0 - s * s;
                let psi = (1.0 - 1.0 / d).exp();
                let g1 = -2.0 * s / (d * d);
                let g2 = -2.0 / (d * d) - 8.0 * s * s / (d * d * d);
                (psi, psi * g1 / radius, psi * (g2 + g1 * g1) / (radius * radius))
            }
            Self::Gaussian { width, .. } => {
                let w2 = width * width;
                let v = (-r * r / w2).exp();
                (v, -2.0 * r / w2 * v, (4.0 * r * r / (w2 * w2) - 2.0 / w2) * v)
            }
            Self::Plateau { inner, outer, .. } => {
                if r <= *inner {
                    return (1.0, 0.0, 0.0);
                }
                if r >= *outer {
                    return (0.0, 0.0, 0.0);
                }
                let span = outer - inner;
                let (v, d1, d2) = falling_step((r - inner) / span);
                (v, d1 / span, d2 / (span * span))
            }
        }
    }

    pub fn value(&self, x: &Point3) -> f64 {
        self.profile((x - self.center()).norm()).0
    }

    pub fn laplacian(&self, x: &Point3) -> f64 {
        let r = (x - self.center()).norm();
        let (_, d1, d2) = self.profile(r);
        if r < 1e-8 * self.support_radius() {
            // φ′/r → φ″(0) for a smooth radial profile
            return 3.0 * d2;
        }
        d2 + 2.0 * d1 / r
    }

    /// `(−Δ + a²) φ` at `x`.
    pub fn apply_q(&self, x: &Point3, a: f64) -> f64 {
        -self.laplacian(x) + a * a * self.value(x)
    }
}

/// The boundary-value problem that replaces `R_Ω h = f`.
#[derive(Debug, Clone, PartialEq)]
pub struct BvpSpec {
    pub kernel: KernelParams,
    /// Number of Dirichlet traces `D_n^j u = D_n^j f`, `0 ≤ j < a`.
    pub dirichlet_count: u32,
    /// `μ/2`; always zero on the executable path.
    pub extra_condition_count: u32,
    /// `γ_j f` at the nodes of the surface rule, `j = 0..dirichlet_count`.
    pub traces: Vec<BoundaryData>,
    pub solver_available: bool,
}

/// Builds the exterior problem for `f` on the surface rule `surf`.
pub fn reduce_to_bvp(k: &KernelParams, f: &SourceField, surf: &SurfaceQuadrature) -> Result<BvpSpec> {
    let orders = k.orders;
    if orders.mu > 0 {
        return Err(Error::UnsupportedMu { mu: orders.mu, extra_conditions: orders.mu / 2 });
    }
    if k.family == KernelFamily::ModifiedHelmholtz3D {
        f.validate(k.a)?;
    }
    let mut traces = Vec::with_capacity(orders.a as usize);
    for j in 0..orders.a {
        let values = match j {
            0 => surf.nodes.iter().map(|x| f.value(x)).collect(),
            1 => surf.nodes.iter().zip(&surf.normals).map(|(x, n)| f.gradient(x).dot(n)).collect(),
            _ => return Err(Error::UnsupportedTraceOrder(j)),
        };
        traces.push(BoundaryData::NodeValues(values));
    }
    Ok(BvpSpec {
        kernel: *k,
        dirichlet_count: orders.a,
        extra_condition_count: orders.mu / 2,
        traces,
        solver_available: k.family == KernelFamily::ModifiedHelmholtz3D && orders.a == 1,
    })
}

/// How to solve the exterior problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolverConfig {
    Spectral { lmax: usize },
    Mfs(MfsConfig),
}

/// Solves the exterior problem with Dirichlet data `f|_∂Ω`.
pub fn solve_exterior(k: &KernelParams, f: &SourceField, domain: &Domain, solver: &SolverConfig) -> Result<ExteriorSolution> {
    f.validate(k.a)?;
    match solver {
        SolverConfig::Spectral { lmax } => {
            if !domain.is_ball() {
                return Err(Error::SpectralRequiresBall);
            }
            // oversampled so that aliasing from degrees above lmax stays negligible
            let surf = surface_quadrature(domain, 2 * lmax + 2)?;
            let values: Vec<f64> = surf.nodes.iter().map(|x| f.value(x)).collect();
            let data = BoundaryData::project(&surf, &values, *lmax)?;
            exterior::solve_ball_spectral(domain, k.a, &data)
        }
        SolverConfig::Mfs(cfg) => {
            let surf = surface_quadrature(domain, cfg.collocation_order())?;
            let data = BoundaryData::from_fn(&surf, |x| f.value(x));
            exterior::solve_mfs(&surf, k.a, &data, cfg)
        }
    }
}

/// Trace mismatch tolerated by [`assemble_filter`].
pub const TRACE_TOL: f64 = 1e-6;

/// `h = {Qf} + σ δ_∂Ω`: interior density plus a single layer.
///
/// There is deliberately no slot for `D_n^k δ` layers with `k ≥ 1`: they
/// would carry the jump `u − f`, which assembly requires to vanish.
#[derive(Debug, Clone)]
pub struct DistributionalFilter {
    pub kernel: KernelParams,
    pub domain: Domain,
    pub source: SourceField,
    pub surface: SurfaceQuadrature,
    /// `∂f/∂n − ∂u/∂n` at the nodes of `surface`.
    pub surface_density: Vec<f64>,
}

impl DistributionalFilter {
    /// The classical part `(−Δ + a²) f` at `x ∈ Ω`.
    pub fn volume_density(&self, x: &Point3) -> f64 {
        self.source.apply_q(x, self.kernel.a)
    }

    /// The filter `0`.
    pub fn zero(kernel: KernelParams, surface: SurfaceQuadrature) -> Self {
        let n = surface.len();
        Self {
            kernel,
            domain: surface.domain.clone(),
            source: SourceField::Constant(0.0),
            surface,
            surface_density: vec![0.0; n],
        }
    }
}

/// Assembles `h` from `f` and the exterior solution `u` with `u = f` on `∂Ω`.
pub fn assemble_filter(
    f: &SourceField,
    sol: &ExteriorSolution,
    surf: &SurfaceQuadrature,
    k: &KernelParams,
) -> Result<DistributionalFilter> {
    f.validate(k.a)?;
    if (sol.a - k.a).abs() > 1e-14 * k.a {
        return Err(Error::InvalidParameter("exterior solution was computed for a different kernel"));
    }
    let u = sol.boundary_values(surf);
    let sup = surf.nodes.iter().zip(&u).map(|(x, v)| (v - f.value(x)).abs()).fold(0.0, f64::max);
    if !(sup <= TRACE_TOL) {
        return Err(Error::TraceMismatch { sup });
    }
    let dudn = sol.normal_derivative_trace(surf)?;
    let surface_density = surf
        .nodes
        .iter()
        .zip(&surf.normals)
        .zip(&dudn)
        .map(|((x, n), du)| f.gradient(x).dot(n) - du)
        .collect();
    Ok(DistributionalFilter {
        kernel: *k,
        domain: surf.domain.clone(),
        source: f.clone(),
        surface: surf.clone(),
        surface_density,
    })
}

/// Integrates `inside` over `Ω ∩ B(c_φ, reach)` and `outside` over
/// `Ω_− ∩ B(c_φ, reach)` in spherical coordinates centered at the test
/// function, so its radial profile is resolved one-dimensionally.
fn centered_integrals(
    domain: &Domain,
    phi: &TestFunction,
    order: usize,
    reach: f64,
    mut inside: impl FnMut(&Point3) -> f64,
    mut outside: impl FnMut(&Point3) -> Result<f64>,
) -> Result<(f64, f64)> {
    let c = phi.center();
    let rule = AngularRule::new(order);
    let radial = GaussLegendre::new(order);
    let breaks: Vec<f64> = phi.breakpoints().into_iter().filter(|b| *b < reach).collect();
    let (mut total_in, mut total_out) = (0.0, 0.0);
    let mut pieces: Vec<(f64, f64, bool)> = Vec::new();
    for (&(t, p), &w) in rule.angles.iter().zip(&rule.weights) {
        let dir = sph::direction(t, p);
        pieces.clear();
        let mut cursor = 0.0;
        for (r0, r1) in domain.ray_segments(&c, &dir) {
            let (r0, r1) = (r0.min(reach), r1.min(reach));
            if r0 > cursor {
                pieces.push((cursor, r0, false));
            }
            if r1 > r0 {
                pieces.push((r0, r1, true));
            }
            cursor = r1;
        }
        if reach > cursor {
            pieces.push((cursor, reach, false));
        }
        let (mut sum_in, mut sum_out) = (0.0, 0.0);
        for &(r0, r1, is_inside) in &pieces {
            let mut knots = vec![r0];
            knots.extend(breaks.iter().copied().filter(|b| *b > r0 && *b < r1));
            knots.push(r1);
            for pair in knots.windows(2) {
                for (r, wr) in radial.mapped(pair[0], pair[1]) {
                    let x = c + dir * r;
                    if is_inside {
                        sum_in += wr * r * r * inside(&x);
                    } else {
                        sum_out += wr * r * r * outside(&x)?;
                    }
                }
            }
        }
        total_in += w * sum_in;
        total_out += w * sum_out;
    }
    Ok((total_in, total_out))
}

/// `⟨h, φ⟩ = ∫_Ω (Qf) φ dV + ∮ σ φ dS`; the volume part uses a rule of the
/// given order centered at φ, the layer part uses `h.surface`.
pub fn pairing_via_jump(h: &DistributionalFilter, phi: &TestFunction, order: usize) -> Result<f64> {
    let (interior, _) = centered_integrals(
        &h.domain,
        phi,
        order,
        phi.support_radius(),
        |x| h.volume_density(x) * phi.value(x),
        |_| Ok(0.0),
    )?;
    let layer: f64 = h
        .surface
        .nodes
        .iter()
        .zip(&h.surface.weights)
        .zip(&h.surface_density)
        .map(|((x, w), s)| w * s * phi.value(x))
        .sum();
    Ok(interior + layer)
}

/// `(F, Qφ)` with `F = f` in Ω and `F = u` in `Ω_−`. The exterior part is
/// only integrated inside `B(c, truncation)`, which must contain `supp φ`.
pub fn pairing_direct(f: &SourceField, sol: &ExteriorSolution, phi: &TestFunction, order: usize, truncation: f64) -> Result<f64> {
    let domain = &sol.domain;
    let reach = (phi.center() - domain.center).norm() + phi.support_radius();
    if reach > truncation {
        return Err(Error::TruncationTooSmall { support: reach, truncation });
    }
    let a = sol.a;
    let (interior, exterior) = centered_integrals(
        domain,
        phi,
        order,
        phi.support_radius(),
        |x| f.value(x) * phi.apply_q(x, a),
        |x| {
            let q = phi.apply_q(x, a);
            if q == 0.0 {
                return Ok(0.0);
            }
            Ok(sol.eval(x)? * q)
        },
    )?;
    Ok(interior + exterior)
}

/// Mass `∫ φ dV` of a test function by its radial profile.
pub fn test_function_mass(phi: &TestFunction, order: usize) -> f64 {
    let radial = GaussLegendre::new(order);
    let mut knots = vec![0.0];
    knots.extend(phi.breakpoints());
    if *knots.last().unwrap() < phi.support_radius() {
        knots.push(phi.support_radius());
    }
    let mut total = 0.0;
    for pair in knots.windows(2) {
        for (r, w) in radial.mapped(pair[0], pair[1]) {
            total += w * r * r * phi.profile(r).0;
        }
    }
    4.0 * core::f64::consts::PI * total
}

/// `Σ α_k f_k`.
pub fn combine(parts: Vec<(f64, SourceField)>) -> SourceField {
    SourceField::Combination(parts)
}
