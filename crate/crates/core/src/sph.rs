//! Real orthonormal spherical harmonics `Y_lm(θ, φ)`.
//!
//! Convention: no Condon–Shortley phase; `m > 0` carries `√2 cos(mφ)`,
//! `m < 0` carries `√2 sin(|m|φ)`. Coefficients are stored at
//! `index(l, m) = l² + l + m`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::geometry::Point3;

#[inline]
pub fn index(l: usize, m: i64) -> usize {
    (l as i64 * l as i64 + l as i64 + m) as usize
}

#[inline]
pub fn coeff_count(lmax: usize) -> usize {
    (lmax + 1) * (lmax + 1)
}

/// Degree of an expansion holding `count` coefficients, if `count` is a square.
pub fn degree_for_count(count: usize) -> Option<usize> {
    let l = (count as f64).sqrt().round() as usize;
    (l >= 1 && l * l == count).then(|| l - 1)
}

#[inline]
fn tri(l: usize, m: usize) -> usize {
    l * (l + 1) / 2 + m
}

/// Normalized associated Legendre values `P̃_lm(cos θ)` for `m >= 0`, and
/// `P̃_lm / sin θ` for `m >= 1` (finite at the poles).
struct Legendre {
    p: Vec<f64>,
    p_over_sin: Vec<f64>,
}

impl Legendre {
    fn new(lmax: usize, c: f64, s: f64) -> Self {
        let n = tri(lmax, lmax) + 1;
        let mut p = vec![0.0; n];
        let mut q = vec![0.0; n];
        // seed P̃_mm; q holds P̃_mm / s = c_m s^{m-1}
        let mut pmm = (1.0 / (4.0 * PI)).sqrt();
        let mut qmm = 0.0;
        for m in 0..=lmax {
            if m > 0 {
                let f = ((2 * m + 1) as f64 / (2 * m) as f64).sqrt();
                qmm = if m == 1 { f * pmm } else { f * s * qmm };
                pmm *= f * s;
            }
            p[tri(m, m)] = pmm;
            q[tri(m, m)] = qmm;
            if m < lmax {
                let f = ((2 * m + 3) as f64).sqrt();
                p[tri(m + 1, m)] = f * c * pmm;
                q[tri(m + 1, m)] = f * c * qmm;
            }
            for l in (m + 2)..=lmax {
                let (lf, mf) = (l as f64, m as f64);
                let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
                let b = (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0)).sqrt();
                p[tri(l, m)] = a * (c * p[tri(l - 1, m)] - b * p[tri(l - 2, m)]);
                q[tri(l, m)] = a * (c * q[tri(l - 1, m)] - b * q[tri(l - 2, m)]);
            }
        }
        Self { p, p_over_sin: q }
    }

    /// dP̃_lm/dθ for `m >= 1`.
    fn d_theta(&self, l: usize, m: usize, c: f64) -> f64 {
        let lf = l as f64;
        let mf = m as f64;
        let prev = if l > m { self.p_over_sin[tri(l - 1, m)] } else { 0.0 };
        let f = ((2.0 * lf + 1.0) / (2.0 * lf - 1.0) * (lf * lf - mf * mf)).sqrt();
        lf * c * self.p_over_sin[tri(l, m)] - f * prev
    }
}

/// Values of all `Y_lm` up to `lmax`, plus optional surface gradients.
#[derive(Debug, Clone)]
pub struct Harmonics {
    pub lmax: usize,
    pub values: Vec<f64>,
    /// ∂Y/∂θ
    pub d_theta: Vec<f64>,
    /// (1/sin θ) ∂Y/∂φ
    pub d_phi_over_sin: Vec<f64>,
}

impl Harmonics {
    pub fn new(lmax: usize) -> Self {
        let n = coeff_count(lmax);
        Self { lmax, values: vec![0.0; n], d_theta: vec![0.0; n], d_phi_over_sin: vec![0.0; n] }
    }

    /// Fills `values` only.
    pub fn eval(&mut self, theta: f64, phi: f64) {
        self.fill(theta, phi, false);
    }

    /// Fills values and surface-gradient components.
    pub fn eval_with_gradient(&mut self, theta: f64, phi: f64) {
        self.fill(theta, phi, true);
    }

    fn fill(&mut self, theta: f64, phi: f64, gradient: bool) {
        let (s, c) = theta.sin_cos();
        let leg = Legendre::new(self.lmax, c, s.abs());
        let sqrt2 = 2.0.sqrt();
        for l in 0..=self.lmax {
            let p0 = leg.p[tri(l, 0)];
            self.values[index(l, 0)] = p0;
            if gradient {
                self.d_theta[index(l, 0)] = if l == 0 { 0.0 } else { -((l * (l + 1)) as f64).sqrt() * leg.p[tri(l, 1)] };
                self.d_phi_over_sin[index(l, 0)] = 0.0;
            }
            for m in 1..=l {
                let (sm, cm) = (m as f64 * phi).sin_cos();
                let p = leg.p[tri(l, m)];
                self.values[index(l, m as i64)] = sqrt2 * p * cm;
                self.values[index(l, -(m as i64))] = sqrt2 * p * sm;
                if gradient {
                    let dp = leg.d_theta(l, m, c);
                    let q = leg.p_over_sin[tri(l, m)];
                    let mf = m as f64;
                    self.d_theta[index(l, m as i64)] = sqrt2 * dp * cm;
                    self.d_theta[index(l, -(m as i64))] = sqrt2 * dp * sm;
                    self.d_phi_over_sin[index(l, m as i64)] = -sqrt2 * mf * q * sm;
                    self.d_phi_over_sin[index(l, -(m as i64))] = sqrt2 * mf * q * cm;
                }
            }
        }
    }

    /// Σ c_lm Y_lm over the first `coeffs.len()` harmonics.
    pub fn synthesize(&self, coeffs: &[f64]) -> f64 {
        coeffs.iter().zip(&self.values).map(|(c, y)| c * y).sum()
    }
}

/// Polar and azimuthal angles of a nonzero vector, `φ ∈ [0, 2π)`.
pub fn angles_of(v: &Point3) -> (f64, f64) {
    let r = v.norm();
    let theta = (v.z / r).clamp(-1.0, 1.0).acos();
    let mut phi = v.y.atan2(v.x);
    if phi < 0.0 {
        phi += 2.0 * PI;
    }
    (theta, phi)
}

/// Unit vector for the given angles.
pub fn direction(theta: f64, phi: f64) -> Point3 {
    let (s, c) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    Point3::new(s * cp, s * sp, c)
}

/// Local unit basis vectors `(θ̂, φ̂)` at the given angles.
pub fn tangent_basis(theta: f64, phi: f64) -> (Point3, Point3) {
    let (s, c) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    (Point3::new(c * cp, c * sp, -s), Point3::new(-sp, cp, 0.0))
}
