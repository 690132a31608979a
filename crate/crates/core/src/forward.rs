//! Application of `R_Ω` to a distributional filter by weakly singular
//! quadrature, residual reports, and the discrete quadratic form `(Rh, h)`.
//!
//! Volume potentials use spherical coordinates centered at the evaluation
//! point, so the `r²` Jacobian cancels the `1/r` kernel; the polar axis
//! points at the nearest boundary point and the polar cosine is split into
//! panels around the grazing directions, where the ray exit distance has
//! nearby complex branch points. Single-layer potentials near `∂Ω` use the
//! distance itself as the integration variable along meridians about the
//! nearest boundary point, which removes the `1/|x − y|` peak exactly on
//! spheres.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::filter::{DistributionalFilter, SourceField};
use crate::geometry::{Domain, Frame, Point3, SurfaceQuadrature, VolumeQuadrature};
use crate::kernel::{KernelFamily, KernelParams};
use crate::quadrature::GaussLegendre;
use crate::sph::{self, Harmonics};

/// Points closer than `NEAR_BOUNDARY · scale` to `∂Ω` are flagged.
pub const NEAR_BOUNDARY: f64 = 1e-3;
/// Points closer than `ON_SURFACE · scale` to `∂Ω` are rejected by the layer potential.
pub const ON_SURFACE: f64 = 1e-6;

fn require_closed_form(k: &KernelParams) -> Result<()> {
    if k.family != KernelFamily::ModifiedHelmholtz3D {
        return Err(Error::NoClosedForm);
    }
    Ok(())
}

/// `∫_Ω R(x, y) ρ(y) dy` for `x ∈ Ω̄`.
pub fn apply_volume(k: &KernelParams, domain: &Domain, density: impl Fn(&Point3) -> f64, x: &Point3, order: usize) -> Result<f64> {
    require_closed_form(k)?;
    if order < crate::geometry::MIN_ORDER {
        return Err(Error::OrderTooLow { order, min: crate::geometry::MIN_ORDER });
    }
    let proj = domain.nearest_boundary(x);
    if !proj.inside && proj.distance > 1e-12 * domain.scale() {
        return Err(Error::PointOutsideDomain);
    }
    let axis = if proj.distance > 0.0 { (proj.point - x) / proj.distance } else { (proj.point - domain.center).normalize() };
    let frame = Frame::around(&axis);
    let rho_star = (proj.point - domain.center).norm();
    let w = (3.0 * (2.0 * proj.distance / rho_star).sqrt()).min(0.5);

    let gl = GaussLegendre::new(order);
    let nphi = 2 * order;
    let dphi = 2.0 * PI / nphi as f64;
    let mut total = 0.0;
    for (lo, hi) in [(-1.0, -w), (-w, w), (w, 1.0)] {
        for (c, wc) in gl.mapped(lo, hi) {
            let mut ring = 0.0;
            for j in 0..nphi {
                let dir = frame.direction(c, dphi * j as f64);
                for (r0, r1) in domain.ray_segments(x, &dir) {
                    for (r, wr) in gl.mapped(r0, r1) {
                        ring += wr * r * k.radial_times_r(r) * density(&(x + dir * r));
                    }
                }
            }
            total += wc * dphi * ring;
        }
    }
    Ok(total)
}

/// A single-layer density with a smooth interpolant on `∂Ω`.
#[derive(Debug, Clone)]
pub struct SingleLayer {
    surface: SurfaceQuadrature,
    density: Vec<f64>,
    lmax: usize,
    coeffs: Vec<f64>,
}

impl SingleLayer {
    /// Interpolates node values by their harmonic projection of degree `order − 1`
    /// in the parametric angles of the surface.
    pub fn new(surface: &SurfaceQuadrature, density: &[f64]) -> Result<Self> {
        if density.len() != surface.len() {
            return Err(Error::DataMismatch { expected: surface.len(), found: density.len() });
        }
        let lmax = surface.order - 1;
        let mut coeffs = vec![0.0; sph::coeff_count(lmax)];
        let mut h = Harmonics::new(lmax);
        for ((&(t, p), &w), &v) in surface.angles.iter().zip(&surface.angular_weights).zip(density) {
            if v == 0.0 {
                continue;
            }
            h.eval(t, p);
            for (c, y) in coeffs.iter_mut().zip(&h.values) {
                *c += w * v * y;
            }
        }
        Ok(Self { surface: surface.clone(), density: density.to_vec(), lmax, coeffs })
    }

    fn is_zero(&self) -> bool {
        self.density.iter().all(|v| *v == 0.0)
    }

    /// `∮ R(x, y) σ(y) dS(y)` for `x` off `∂Ω`.
    pub fn potential(&self, k: &KernelParams, x: &Point3) -> Result<f64> {
        require_closed_form(k)?;
        let domain = &self.surface.domain;
        let proj = domain.nearest_boundary(x);
        if proj.distance < ON_SURFACE * domain.scale() {
            return Err(Error::OnSurface { distance: proj.distance });
        }
        if self.is_zero() {
            return Ok(0.0);
        }
        let rho_star = (proj.point - domain.center).norm();
        let s = (x - domain.center).norm();
        if proj.distance >= 0.5 * rho_star || s < 1e-3 * rho_star {
            let sum = self
                .surface
                .nodes
                .iter()
                .zip(&self.surface.weights)
                .zip(&self.density)
                .map(|((y, w), d)| w * d * k.radial((x - y).norm()))
                .sum();
            return Ok(sum);
        }
        Ok(self.near_potential(k, x, proj.point, proj.distance, s, rho_star))
    }

    fn near_potential(&self, k: &KernelParams, x: &Point3, p_star: Point3, delta: f64, s: f64, rho_star: f64) -> f64 {
        let domain = &self.surface.domain;
        let frame = Frame::around(&(p_star - domain.center));
        let kappa = 2.0 * rho_star * s;
        let u_max = (delta * delta + 2.0 * kappa).sqrt();
        let order = self.surface.order;
        let gl = GaussLegendre::new(order);
        let nphi = 2 * order;
        let dphi = 2.0 * PI / nphi as f64;
        // geometric panels resolve the O(δ) scale next to the closest point
        let mut knots = vec![delta];
        let mut next = 4.0 * delta;
        while next < u_max {
            knots.push(next);
            next *= 4.0;
        }
        knots.push(u_max);
        let mut h = Harmonics::new(self.lmax);
        let mut total = 0.0;
        for pair in knots.windows(2) {
            for (u, wu) in gl.mapped(pair[0], pair[1]) {
                let t = ((u * u - delta * delta) / kappa).clamp(0.0, 2.0);
                let c = 1.0 - t;
                let mut ring = 0.0;
                for j in 0..nphi {
                    let dir = frame.direction(c, dphi * j as f64);
                    let sp = domain.surface_point(&dir);
                    let (th, ph) = sph::angles_of(&dir);
                    h.eval(th, ph);
                    let sigma = h.synthesize(&self.coeffs);
                    let d = (x - sp.point).norm();
                    ring += k.radial(d) * sigma * sp.jacobian;
                }
                // dt = 2u du / κ
                total += wu * dphi * ring * 2.0 * u / kappa;
            }
        }
        total
    }
}

/// Single-layer potential of node values `density` on `surf`, evaluated at `x`.
pub fn apply_surface(k: &KernelParams, surf: &SurfaceQuadrature, density: &[f64], x: &Point3) -> Result<f64> {
    SingleLayer::new(surf, density)?.potential(k, x)
}

/// `R_Ω h` for an assembled filter, with the layer interpolant built once.
#[derive(Debug, Clone)]
pub struct FilterOperator<'a> {
    pub filter: &'a DistributionalFilter,
    layer: SingleLayer,
    pub order: usize,
}

impl<'a> FilterOperator<'a> {
    pub fn new(filter: &'a DistributionalFilter, order: usize) -> Result<Self> {
        Ok(Self { filter, layer: SingleLayer::new(&filter.surface, &filter.surface_density)?, order })
    }

    /// `(R_Ω h)(x)` for `x ∈ Ω` off `∂Ω`.
    pub fn apply(&self, x: &Point3) -> Result<f64> {
        let h = self.filter;
        let volume = match &h.source {
            SourceField::ExpLinear { .. } => 0.0,
            SourceField::Constant(c) if *c == 0.0 => 0.0,
            _ => apply_volume(&h.kernel, &h.domain, |y| h.volume_density(y), x, self.order)?,
        };
        Ok(volume + self.layer.potential(&h.kernel, x)?)
    }
}

/// `(R_Ω h)(x) = ∫_Ω R(x,y) (Qf)(y) dy + ∮ R(x,y) σ(y) dS(y)`.
pub fn apply_filter(h: &DistributionalFilter, x: &Point3, order: usize) -> Result<f64> {
    FilterOperator::new(h, order)?.apply(x)
}

/// Pointwise and aggregate errors of `R_Ω h` against `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub points: Vec<Point3>,
    pub values: Vec<f64>,
    pub targets: Vec<f64>,
    pub sup_error: f64,
    pub l2_error: f64,
    pub quad_order: usize,
    /// Points closer than [`NEAR_BOUNDARY`]·scale to `∂Ω`.
    pub near_boundary: usize,
}

impl ResidualReport {
    pub fn from_values(points: Vec<Point3>, values: Vec<f64>, targets: Vec<f64>, quad_order: usize, near_boundary: usize) -> Self {
        let errs: Vec<f64> = values.iter().zip(&targets).map(|(v, t)| (v - t).abs()).collect();
        let sup_error = errs.iter().copied().fold(0.0, f64::max);
        let l2_error = if errs.is_empty() {
            0.0
        } else {
            (errs.iter().map(|e| e * e).sum::<f64>() / errs.len() as f64).sqrt()
        };
        Self { points, values, targets, sup_error, l2_error, quad_order, near_boundary }
    }
}

/// Evaluates `R_Ω h − f` at `points`.
pub fn residual_report(h: &DistributionalFilter, f: &SourceField, points: &[Point3], order: usize) -> Result<ResidualReport> {
    let op = FilterOperator::new(h, order)?;
    let mut values = Vec::with_capacity(points.len());
    let mut near = 0;
    for x in points {
        if is_near_boundary(&h.domain, x) {
            near += 1;
        }
        values.push(op.apply(x)?);
    }
    let targets = points.iter().map(|x| f.value(x)).collect();
    Ok(ResidualReport::from_values(points.to_vec(), values, targets, order, near))
}

pub fn is_near_boundary(domain: &Domain, x: &Point3) -> bool {
    domain.nearest_boundary(x).distance < NEAR_BOUNDARY * domain.scale()
}

/// `Σ_i Σ_j w_i w_j R(x_i, x_j) d_i d_j`, with the diagonal replaced by the
/// integral of `R` over the ball of volume `w_i`.
pub fn quadratic_form(k: &KernelParams, vol: &VolumeQuadrature, density: &[f64]) -> Result<f64> {
    require_closed_form(k)?;
    if density.len() != vol.len() {
        return Err(Error::DataMismatch { expected: vol.len(), found: density.len() });
    }
    let a = k.a;
    let n = vol.len();
    let wd: Vec<f64> = vol.weights.iter().zip(density).map(|(w, d)| w * d).collect();
    let mut total = 0.0;
    for i in 0..n {
        if wd[i] == 0.0 {
            continue;
        }
        let xi = vol.nodes[i];
        let mut row = 0.0;
        for j in (i + 1)..n {
            row += wd[j] * k.radial((xi - vol.nodes[j]).norm());
        }
        let rho = (3.0 * vol.weights[i] / (4.0 * PI)).cbrt();
        let own = (1.0 - (-a * rho).exp() * (1.0 + a * rho)) / (a * a);
        total += 2.0 * wd[i] * row + wd[i] * density[i] * own;
    }
    Ok(total)
}
