//! Bounded star-shaped domains in ℝ³, their boundary data and product
//! quadrature rules.
//!
//! A domain is either a ball or a star-shaped body `{c + r ω : r < ρ(ω)}`
//! whose radial function `ρ` is a finite real spherical-harmonic expansion.
//! Surface rules are Gauss–Legendre in `cos θ` times the trapezoid rule in
//! `φ`, pushed through the parametrization with its exact Jacobian.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::lowdisc::fibonacci_sphere;
use crate::quadrature::GaussLegendre;
use crate::sph::{self, Harmonics};

pub type Point3 = nalgebra::Vector3<f64>;

/// Smallest admissible quadrature order.
pub const MIN_ORDER: usize = 4;

/// Radial function `ρ(θ, φ) = Σ c_lm Y_lm(θ, φ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialFunction {
    lmax: usize,
    coeffs: Vec<f64>,
    min: f64,
    max: f64,
}

/// Value and surface gradient of `ρ` in a given direction.
#[derive(Debug, Clone, Copy)]
pub struct RadialSample {
    pub rho: f64,
    pub d_theta: f64,
    pub d_phi_over_sin: f64,
    pub theta: f64,
    pub phi: f64,
}

impl RadialFunction {
    pub fn lmax(&self) -> usize {
        self.lmax
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn value(&self, theta: f64, phi: f64) -> f64 {
        let mut h = Harmonics::new(self.lmax);
        h.eval(theta, phi);
        h.synthesize(&self.coeffs)
    }

    pub fn sample(&self, theta: f64, phi: f64) -> RadialSample {
        let mut h = Harmonics::new(self.lmax);
        h.eval_with_gradient(theta, phi);
        let dot = |v: &[f64]| self.coeffs.iter().zip(v).map(|(c, y)| c * y).sum::<f64>();
        RadialSample {
            rho: dot(&h.values),
            d_theta: dot(&h.d_theta),
            d_phi_over_sin: dot(&h.d_phi_over_sin),
            theta,
            phi,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Ball { radius: f64 },
    Star { radial: RadialFunction },
}

/// Ω: a ball or a body star-shaped about `center`.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    pub center: Point3,
    pub shape: Shape,
}

/// A point of `∂Ω` reached along a direction from the center.
#[derive(Debug, Clone, Copy)]
pub struct SurfacePoint {
    pub point: Point3,
    pub normal: Point3,
    /// `dS / dω`: surface measure per unit solid angle seen from the center.
    pub jacobian: f64,
}

/// Closest boundary point to a query point.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryProjection {
    pub point: Point3,
    pub distance: f64,
    pub inside: bool,
}

/// Builds a ball with the given center and radius.
pub fn build_ball(center: Point3, radius: f64) -> Result<Domain> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::NonPositiveRadius(radius));
    }
    Ok(Domain { center, shape: Shape::Ball { radius } })
}

/// Builds a star-shaped domain from the real spherical-harmonic coefficients
/// of its radial function (indexed `l² + l + m`).
///
/// Positivity is validated on a 64×128 cell-centred angular grid; the first
/// offending sample is reported.
pub fn build_star_surface(center: Point3, coeffs: &[f64]) -> Result<Domain> {
    let lmax = sph::degree_for_count(coeffs.len()).ok_or(Error::BadCoefficientCount(coeffs.len()))?;
    let mut h = Harmonics::new(lmax);
    let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
    // the grid includes points close to the poles but never on them
    for i in 0..64 {
        let theta = PI * (i as f64 + 0.5) / 64.0;
        for j in 0..128 {
            let phi = 2.0 * PI * j as f64 / 128.0;
            h.eval(theta, phi);
            let rho = h.synthesize(coeffs);
            if !(rho > 0.0) {
                return Err(Error::NonPositiveRadial { theta, phi, value: rho });
            }
            min = min.min(rho);
            max = max.max(rho);
        }
    }
    for theta in [0.0, PI] {
        h.eval(theta, 0.0);
        let rho = h.synthesize(coeffs);
        if !(rho > 0.0) {
            return Err(Error::NonPositiveRadial { theta, phi: 0.0, value: rho });
        }
        min = min.min(rho);
        max = max.max(rho);
    }
    let radial = RadialFunction { lmax, coeffs: coeffs.to_vec(), min, max };
    let domain = Domain { center, shape: Shape::Star { radial } };
    // outward normals must see the center: n · ω > 0
    for dir in fibonacci_sphere(2048) {
        let sp = domain.surface_point(&dir);
        if sp.normal.dot(&dir) <= 0.0 {
            let (theta, phi) = sph::angles_of(&dir);
            return Err(Error::NonPositiveRadial { theta, phi, value: sp.normal.dot(&dir) });
        }
    }
    Ok(domain)
}

impl Domain {
    /// Characteristic length: the radius of a ball, the mean radius of a star body.
    pub fn scale(&self) -> f64 {
        match &self.shape {
            Shape::Ball { radius } => *radius,
            Shape::Star { radial } => radial.coeffs[0] / (4.0 * PI).sqrt(),
        }
    }

    pub fn max_radius(&self) -> f64 {
        match &self.shape {
            Shape::Ball { radius } => *radius,
            Shape::Star { radial } => radial.max,
        }
    }

    pub fn is_ball(&self) -> bool {
        matches!(self.shape, Shape::Ball { .. })
    }

    /// `ρ(ω)` for a unit direction `ω`.
    pub fn radius_toward(&self, dir: &Point3) -> f64 {
        match &self.shape {
            Shape::Ball { radius } => *radius,
            Shape::Star { radial } => {
                let (t, p) = sph::angles_of(dir);
                radial.value(t, p)
            }
        }
    }

    /// Boundary point, outward normal and `dS/dω` in direction `dir`.
    pub fn surface_point(&self, dir: &Point3) -> SurfacePoint {
        match &self.shape {
            Shape::Ball { radius } => SurfacePoint {
                point: self.center + dir * *radius,
                normal: *dir,
                jacobian: radius * radius,
            },
            Shape::Star { radial } => {
                let (t, p) = sph::angles_of(dir);
                self.star_point(radial, t, p)
            }
        }
    }

    fn star_point(&self, radial: &RadialFunction, theta: f64, phi: f64) -> SurfacePoint {
        let s = radial.sample(theta, phi);
        let omega = sph::direction(theta, phi);
        let (et, ep) = sph::tangent_basis(theta, phi);
        // n ∝ ρ r̂ − ∇_S ρ, |y_θ × y_φ| / sin θ = ρ |ρ r̂ − ∇_S ρ|
        let raw = omega * s.rho - et * s.d_theta - ep * s.d_phi_over_sin;
        let len = raw.norm();
        SurfacePoint { point: self.center + omega * s.rho, normal: raw / len, jacobian: s.rho * len }
    }

    /// `|x − c| / ρ(dir(x − c))`: below 1 inside, 1 on `∂Ω`.
    pub fn level(&self, x: &Point3) -> f64 {
        let v = x - self.center;
        let r = v.norm();
        if r == 0.0 {
            return 0.0;
        }
        r / self.radius_toward(&(v / r))
    }

    /// Closed-domain membership with relative slack `tol`.
    pub fn contains(&self, x: &Point3, tol: f64) -> bool {
        self.level(x) <= 1.0 + tol
    }

    /// Intervals `[r0, r1]` of the ray `x + r ω`, `r >= 0`, lying inside Ω.
    pub fn ray_segments(&self, x: &Point3, dir: &Point3) -> Vec<(f64, f64)> {
        match &self.shape {
            Shape::Ball { radius } => {
                let v = x - self.center;
                let b = v.dot(dir);
                let c = v.norm_squared() - radius * radius;
                let disc = b * b - c;
                if disc <= 0.0 {
                    return Vec::new();
                }
                let sq = disc.sqrt();
                // stable roots of r² + 2br + c
                let (near, far) = if b > 0.0 { (-b - sq, c / (-b - sq)) } else { (c / (-b + sq), -b + sq) };
                if far <= 0.0 {
                    return Vec::new();
                }
                vec![(near.max(0.0), far)]
            }
            Shape::Star { radial } => self.star_ray_segments(radial, x, dir),
        }
    }

    fn star_ray_segments(&self, radial: &RadialFunction, x: &Point3, dir: &Point3) -> Vec<(f64, f64)> {
        let gap = |r: f64| -> f64 {
            let v = x + dir * r - self.center;
            let n = v.norm();
            if n == 0.0 {
                return -radial.min;
            }
            let (t, p) = sph::angles_of(&v);
            n - radial.value(t, p)
        };
        let reach = (x - self.center).norm() + radial.max * 1.01;
        let steps = 96;
        let h = reach / steps as f64;
        let mut out = Vec::new();
        let mut prev = gap(0.0);
        let mut start = if prev <= 0.0 { Some(0.0) } else { None };
        for k in 1..=steps {
            let r = h * k as f64;
            let g = gap(r);
            if (prev <= 0.0) != (g <= 0.0) {
                let root = bisect(&gap, r - h, r, prev);
                match start.take() {
                    Some(s0) => out.push((s0, root)),
                    None => start = Some(root),
                }
            }
            prev = g;
        }
        if let Some(s0) = start {
            out.push((s0, reach));
        }
        out
    }

    /// Closest point of `∂Ω` to `x`.
    pub fn nearest_boundary(&self, x: &Point3) -> BoundaryProjection {
        let v = x - self.center;
        let r = v.norm();
        match &self.shape {
            Shape::Ball { radius } => {
                let dir = if r > 0.0 { v / r } else { Point3::z() };
                BoundaryProjection {
                    point: self.center + dir * *radius,
                    distance: (radius - r).abs(),
                    inside: r <= *radius,
                }
            }
            Shape::Star { .. } => self.project_star(x),
        }
    }

    fn project_star(&self, x: &Point3) -> BoundaryProjection {
        let inside = self.level(x) <= 1.0;
        let mut best_dir = Point3::z();
        let mut best = f64::INFINITY;
        for dir in fibonacci_sphere(1500) {
            let d = (self.surface_point(&dir).point - x).norm_squared();
            if d < best {
                best = d;
                best_dir = dir;
            }
        }
        // Gauss–Newton on |x − y(ω)|² in tangent-plane coordinates around ω
        let mut dir = best_dir;
        for _ in 0..30 {
            let frame = Frame::around(&dir);
            let y = self.surface_point(&dir).point;
            let h = 1e-6;
            let at = |u: f64, v: f64| {
                let d = (dir + frame.e1 * u + frame.e2 * v).normalize();
                self.surface_point(&d).point
            };
            let yu = (at(h, 0.0) - at(-h, 0.0)) / (2.0 * h);
            let yv = (at(0.0, h) - at(0.0, -h)) / (2.0 * h);
            let res = y - x;
            let (a11, a12, a22) = (yu.dot(&yu), yu.dot(&yv), yv.dot(&yv));
            let (g1, g2) = (yu.dot(&res), yv.dot(&res));
            let det = a11 * a22 - a12 * a12;
            if det.abs() < 1e-300 {
                break;
            }
            let du = -(a22 * g1 - a12 * g2) / det;
            let dv = -(a11 * g2 - a12 * g1) / det;
            dir = (dir + frame.e1 * du + frame.e2 * dv).normalize();
            if du.abs() + dv.abs() < 1e-13 {
                break;
            }
        }
        let point = self.surface_point(&dir).point;
        let d = (point - x).norm();
        BoundaryProjection { point, distance: d.min(best.sqrt()), inside }
    }
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, flo: f64) -> f64 {
    let lo_inside = flo <= 0.0;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) <= 0.0) == lo_inside {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * hi.max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Orthonormal frame `(e1, e2, e3)` with `e3` along a given axis.
#[derive(Debug, Clone, Copy)]
pub struct Frame {
    pub e1: Point3,
    pub e2: Point3,
    pub e3: Point3,
}

impl Frame {
    pub fn around(axis: &Point3) -> Self {
        let e3 = axis.normalize();
        let helper = if e3.x.abs() < 0.6 { Point3::x() } else { Point3::y() };
        let e1 = (helper - e3 * e3.dot(&helper)).normalize();
        let e2 = e3.cross(&e1);
        Self { e1, e2, e3 }
    }

    /// Unit vector at polar cosine `c` and azimuth `phi` in this frame.
    pub fn direction(&self, c: f64, phi: f64) -> Point3 {
        let s = (1.0 - c * c).max(0.0).sqrt();
        let (sp, cp) = phi.sin_cos();
        self.e3 * c + (self.e1 * cp + self.e2 * sp) * s
    }
}

/// Angular product rule on S²: `order` Gauss nodes in `cos θ`, `2·order`
/// trapezoid nodes in `φ`.
#[derive(Debug, Clone)]
pub struct AngularRule {
    pub order: usize,
    pub angles: Vec<(f64, f64)>,
    pub weights: Vec<f64>,
}

impl AngularRule {
    pub fn new(order: usize) -> Self {
        let gl = GaussLegendre::new(order);
        let nphi = 2 * order;
        let dphi = 2.0 * PI / nphi as f64;
        let mut angles = Vec::with_capacity(order * nphi);
        let mut weights = Vec::with_capacity(order * nphi);
        for (x, w) in gl.nodes.iter().zip(&gl.weights) {
            let theta = x.acos();
            for j in 0..nphi {
                angles.push((theta, dphi * j as f64));
                weights.push(w * dphi);
            }
        }
        Self { order, angles, weights }
    }
}

/// Nodes on `∂Ω` with surface-measure weights and outward unit normals.
#[derive(Debug, Clone)]
pub struct SurfaceQuadrature {
    pub order: usize,
    pub domain: Domain,
    pub nodes: Vec<Point3>,
    pub weights: Vec<f64>,
    pub normals: Vec<Point3>,
    /// Parametric angles of each node, as seen from the domain center.
    pub angles: Vec<(f64, f64)>,
    /// Solid-angle weights of the underlying angular rule.
    pub angular_weights: Vec<f64>,
}

impl SurfaceQuadrature {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Σ w_i g(x_i).
    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }
}

/// Product rule on `∂Ω` with `order × 2·order` nodes.
pub fn surface_quadrature(domain: &Domain, order: usize) -> Result<SurfaceQuadrature> {
    if order < MIN_ORDER {
        return Err(Error::OrderTooLow { order, min: MIN_ORDER });
    }
    let rule = AngularRule::new(order);
    let n = rule.angles.len();
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let mut normals = Vec::with_capacity(n);
    for (&(t, p), &w) in rule.angles.iter().zip(&rule.weights) {
        let sp = match &domain.shape {
            Shape::Ball { .. } => domain.surface_point(&sph::direction(t, p)),
            Shape::Star { radial } => domain.star_point(radial, t, p),
        };
        nodes.push(sp.point);
        weights.push(w * sp.jacobian);
        normals.push(sp.normal);
    }
    Ok(SurfaceQuadrature {
        order,
        domain: domain.clone(),
        nodes,
        weights,
        normals,
        angles: rule.angles,
        angular_weights: rule.weights,
    })
}

/// Nodes in Ω with volume weights.
#[derive(Debug, Clone)]
pub struct VolumeQuadrature {
    pub order: usize,
    pub nodes: Vec<Point3>,
    pub weights: Vec<f64>,
}

impl VolumeQuadrature {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(&Point3) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(x)).sum()
    }
}

/// Radial Gauss rule on `[0, ρ(ω)]` with `r²` Jacobian, times the angular rule.
pub fn volume_quadrature(domain: &Domain, order: usize) -> Result<VolumeQuadrature> {
    if order < MIN_ORDER {
        return Err(Error::OrderTooLow { order, min: MIN_ORDER });
    }
    let rule = AngularRule::new(order);
    let radial = GaussLegendre::new(order);
    let n = rule.angles.len() * order;
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for (&(t, p), &w) in rule.angles.iter().zip(&rule.weights) {
        let dir = sph::direction(t, p);
        let rho = match &domain.shape {
            Shape::Ball { radius } => *radius,
            Shape::Star { radial } => radial.value(t, p),
        };
        for (r, wr) in radial.mapped(0.0, rho) {
            nodes.push(domain.center + dir * r);
            weights.push(w * wr * r * r);
        }
    }
    Ok(VolumeQuadrature { order, nodes, weights })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y20_star() -> Domain {
        let mut c = vec![0.0; 9];
        c[0] = (4.0 * PI).sqrt();
        c[sph::index(2, 0)] = 0.1;
        build_star_surface(Point3::zeros(), &c).unwrap()
    }

    #[test]
    fn ball_rejects_nonpositive_radius() {
        assert_eq!(build_ball(Point3::zeros(), 0.0), Err(Error::NonPositiveRadius(0.0)));
        assert!(build_ball(Point3::zeros(), -1.0).is_err());
    }

    #[test]
    fn ball_area_and_volume() {
        let ball = build_ball(Point3::zeros(), 2.0).unwrap();
        let s = surface_quadrature(&ball, 16).unwrap();
        assert_eq!(s.len(), 16 * 32);
        let area: f64 = s.weights.iter().sum();
        assert!((area - 16.0 * PI).abs() < 1e-10 * 16.0 * PI);
        let v = volume_quadrature(&ball, 16).unwrap();
        let vol: f64 = v.weights.iter().sum();
        assert!((vol - 32.0 * PI / 3.0).abs() < 1e-10 * vol);
    }

    #[test]
    fn unit_ball_sums_and_moments() {
        let ball = build_ball(Point3::zeros(), 1.0).unwrap();
        let s = surface_quadrature(&ball, 16).unwrap();
        let area: f64 = s.weights.iter().sum();
        assert!((area / (4.0 * PI) - 1.0).abs() < 1e-10);
        let v = volume_quadrature(&ball, 16).unwrap();
        let vol: f64 = v.weights.iter().sum();
        assert!((vol / (4.0 * PI / 3.0) - 1.0).abs() < 1e-10);
        let m2 = v.integrate(|x| x.norm_squared());
        assert!((m2 - 4.0 * PI / 5.0).abs() < 1e-10);
    }

    #[test]
    fn y20_is_orthonormal_on_sphere_rule() {
        let ball = build_ball(Point3::zeros(), 1.0).unwrap();
        let s = surface_quadrature(&ball, 16).unwrap();
        let y20: Vec<f64> = s
            .nodes
            .iter()
            .map(|x| (5.0 / (16.0 * PI)).sqrt() * (3.0 * x.z * x.z - 1.0))
            .collect();
        let sq: Vec<f64> = y20.iter().map(|v| v * v).collect();
        assert!((s.integrate(&sq) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn shifted_ball_normals_are_radial() {
        let c = Point3::new(1.0, 0.0, 0.0);
        let ball = build_ball(c, 0.5).unwrap();
        let s = surface_quadrature(&ball, 8).unwrap();
        for (x, n) in s.nodes.iter().zip(&s.normals) {
            assert!((n - (x - c) / 0.5).norm() < 1e-12);
        }
    }

    #[test]
    fn unit_star_matches_unit_ball() {
        let star = build_star_surface(Point3::zeros(), &[(4.0 * PI).sqrt()]).unwrap();
        let ball = build_ball(Point3::zeros(), 1.0).unwrap();
        let a = surface_quadrature(&star, 12).unwrap();
        let b = surface_quadrature(&ball, 12).unwrap();
        for i in 0..a.len() {
            assert!((a.nodes[i] - b.nodes[i]).norm() < 1e-12);
            assert!((a.weights[i] - b.weights[i]).abs() < 1e-12);
            assert!((a.normals[i] - b.normals[i]).norm() < 1e-12);
        }
        let sa: f64 = a.weights.iter().sum();
        let sb: f64 = b.weights.iter().sum();
        assert!((sa - sb).abs() < 1e-10);
    }

    #[test]
    fn negative_radial_function_is_rejected() {
        // ρ = 1 − 1.5 Y10·√(4π/3)... negative near the south pole
        let mut c = vec![0.0; 4];
        c[0] = (4.0 * PI).sqrt();
        c[sph::index(1, 0)] = 1.5 * (4.0 * PI / 3.0).sqrt();
        match build_star_surface(Point3::zeros(), &c) {
            Err(Error::NonPositiveRadial { theta, .. }) => assert!(theta > PI / 2.0),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(build_star_surface(Point3::zeros(), &[1.0, 0.0]), Err(Error::BadCoefficientCount(2)));
    }

    /// Dense midpoint Riemann sum of ρ √(ρ² + |∇ρ|²) over (θ, φ).
    fn riemann_area(domain: &Domain, nt: usize, np: usize) -> f64 {
        let mut area = 0.0;
        for i in 0..nt {
            let t = PI * (i as f64 + 0.5) / nt as f64;
            for j in 0..np {
                let p = 2.0 * PI * (j as f64 + 0.5) / np as f64;
                let sp = domain.surface_point(&sph::direction(t, p));
                area += sp.jacobian * t.sin() * (PI / nt as f64) * (2.0 * PI / np as f64);
            }
        }
        area
    }

    #[test]
    fn perturbed_sphere_area() {
        let star = y20_star();
        let oracle = riemann_area(&star, 512, 1024);
        assert!(oracle > 4.0 * PI);
        let a16: f64 = surface_quadrature(&star, 16).unwrap().weights.iter().sum();
        let a32: f64 = surface_quadrature(&star, 32).unwrap().weights.iter().sum();
        assert!(a16 > 4.0 * PI);
        assert!((a16 - a32).abs() <= 1e-8, "{a16} {a32}");
        // midpoint sum error is O(h²) ≈ 1e-5 here
        assert!((a32 - oracle).abs() < 1e-4, "{a32} {oracle}");
    }

    #[test]
    fn divergence_closure() {
        for domain in [build_ball(Point3::new(0.2, -0.1, 0.3), 1.3).unwrap(), y20_star()] {
            let s = surface_quadrature(&domain, 16).unwrap();
            let v = volume_quadrature(&domain, 16).unwrap();
            let vol: f64 = v.weights.iter().sum();
            let flux: f64 = (0..s.len()).map(|i| s.weights[i] * s.nodes[i].dot(&s.normals[i])).sum();
            assert!((flux - 3.0 * vol).abs() < 1e-8 * vol, "{flux} {vol}");
        }
    }

    #[test]
    fn normals_unit_and_continuous() {
        let star = y20_star();
        let order = 16;
        let s = surface_quadrature(&star, order).unwrap();
        for n in &s.normals {
            assert!((n.norm() - 1.0).abs() < 1e-12);
        }
        let nphi = 2 * order;
        for i in 0..order {
            for j in 0..nphi {
                let a = s.normals[i * nphi + j];
                let b = s.normals[i * nphi + (j + 1) % nphi];
                assert!((a - b).norm() < 4.0 / order as f64);
            }
        }
    }

    #[test]
    fn ray_segments_ball_and_star_agree_on_unit_sphere() {
        let star = build_star_surface(Point3::zeros(), &[(4.0 * PI).sqrt()]).unwrap();
        let ball = build_ball(Point3::zeros(), 1.0).unwrap();
        let x = Point3::new(0.3, -0.2, 0.5);
        for dir in fibonacci_sphere(30) {
            let a = ball.ray_segments(&x, &dir);
            let b = star.ray_segments(&x, &dir);
            assert_eq!(a.len(), 1);
            assert_eq!(b.len(), 1);
            assert!(a[0].0 == 0.0 && b[0].0 == 0.0);
            assert!((a[0].1 - b[0].1).abs() < 1e-12, "{:?} {:?}", a, b);
        }
    }

    #[test]
    fn star_projection_finds_close_boundary_point() {
        let star = y20_star();
        let dir = Point3::new(0.3, 0.4, 0.866).normalize();
        let sp = star.surface_point(&dir);
        let x = sp.point - sp.normal * 0.02;
        let proj = star.nearest_boundary(&x);
        assert!(proj.inside);
        assert!((proj.distance - 0.02).abs() < 1e-8, "{}", proj.distance);
        assert!((proj.point - sp.point).norm() < 1e-6);
    }
}
