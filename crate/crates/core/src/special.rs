//! Modified spherical Bessel functions of the second kind, normalized as
//! `k₀(z) = e^{-z}/z`, `k₁(z) = e^{-z}(1/z + 1/z²)` and
//! `k_{l+1}(z) = k_{l-1}(z) + (2l+1)/z · k_l(z)`.
//!
//! The conventional `π/2` factor is dropped; only ratios enter the exterior
//! solver. Values are carried as logarithms of `e^z k_l(z)` so that neither
//! large `z` (underflow of `e^{-z}`) nor large `l` at small `z` overflows.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

/// `ln(e^z k_l(z))` for `l = 0..=lmax`.
pub fn log_scaled_k(lmax: usize, z: f64) -> Vec<f64> {
    assert!(z > 0.0, "modified spherical Bessel argument must be positive");
    let mut out = vec![0.0; lmax + 1];
    out[0] = -z.ln();
    let mut ratio = 0.0;
    for l in 1..=lmax {
        // q_l = k_l / k_{l-1}
        ratio = if l == 1 { 1.0 + 1.0 / z } else { 1.0 / ratio + (2 * l - 1) as f64 / z };
        out[l] = out[l - 1] + ratio.ln();
    }
    out
}

/// Logarithmic derivatives `k_l'(z) / k_l(z)` for `l = 0..=lmax`.
pub fn log_derivative_k(lmax: usize, z: f64) -> Vec<f64> {
    let mut out = vec![0.0; lmax + 1];
    out[0] = -(1.0 + 1.0 / z);
    let mut ratio = 0.0;
    for l in 1..=lmax {
        ratio = if l == 1 { 1.0 + 1.0 / z } else { 1.0 / ratio + (2 * l - 1) as f64 / z };
        out[l] = -1.0 / ratio - (l + 1) as f64 / z;
    }
    out
}

/// Unscaled `k_l(z)` by upward recurrence. May over- or underflow; intended
/// for moderate arguments and cross-checks.
pub fn k(l: usize, z: f64) -> f64 {
    let e = (-z).exp();
    let mut k0 = e / z;
    if l == 0 {
        return k0;
    }
    let mut k1 = e * (1.0 / z + 1.0 / (z * z));
    for n in 1..l {
        let k2 = k0 + (2 * n + 1) as f64 / z * k1;
        k0 = k1;
        k1 = k2;
    }
    k1
}

/// Radial factors `k_l(a r) / k_l(a R)` of a decaying exterior solution.
#[derive(Debug, Clone)]
pub struct ExteriorRadial {
    pub a: f64,
    pub radius: f64,
    pub lmax: usize,
    log_at_radius: Vec<f64>,
}

impl ExteriorRadial {
    pub fn new(a: f64, radius: f64, lmax: usize) -> Self {
        Self { a, radius, lmax, log_at_radius: log_scaled_k(lmax, a * radius) }
    }

    /// Writes `k_l(a r)/k_l(a R)` into `out[l]`.
    pub fn ratios(&self, r: f64, out: &mut [f64]) {
        let logs = log_scaled_k(self.lmax, self.a * r);
        let shift = -self.a * (r - self.radius);
        for l in 0..=self.lmax {
            out[l] = (shift + logs[l] - self.log_at_radius[l]).exp();
        }
    }

    /// Writes `d/dr [k_l(a r)/k_l(a R)]` into `out[l]`, given the ratios at `r`.
    pub fn ratio_derivatives(&self, r: f64, ratios: &[f64], out: &mut [f64]) {
        let dlog = log_derivative_k(self.lmax, self.a * r);
        for l in 0..=self.lmax {
            out[l] = self.a * dlog[l] * ratios[l];
        }
    }

    /// `a k_l'(a R) / k_l(a R)`: the Dirichlet-to-Neumann multipliers at `r = R`.
    pub fn boundary_flux_factors(&self) -> Vec<f64> {
        log_derivative_k(self.lmax, self.a * self.radius)
            .into_iter()
            .map(|d| self.a * d)
            .collect()
    }
}
