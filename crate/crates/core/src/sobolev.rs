//! Grid estimators of `H^s` norms, for bounded-ratio checks of
//! `‖h‖_{H^{-1}} / ‖f‖_{H^1}`.
//!
//! Fields live on `N³` cell centers of the box `c + [−L, L]³`. The norm is
//! `(h³/N³ Σ_k (1 + |ξ_k|²)^s |G_k|²)^{1/2}` with `G` the unnormalized DFT of
//! the samples and `ξ_k = (π/L) k`, `k` in the signed range `[−N/2, N/2)`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::filter::{DistributionalFilter, SourceField};
use crate::geometry::{Domain, Point3};
use crate::smooth::falling_step;

/// Box half-width and cells per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub half_width: f64,
    pub resolution: usize,
}

impl GridSpec {
    /// Margin-respecting default: `L = ρ_max + scale` for a domain.
    pub fn for_domain(domain: &Domain, resolution: usize) -> Self {
        Self { half_width: domain.max_radius() + domain.scale(), resolution }
    }

    fn validate(&self, domain: &Domain) -> Result<()> {
        let n = self.resolution;
        if !n.is_power_of_two() || !(32..=256).contains(&n) {
            return Err(Error::BadResolution(n));
        }
        let required = domain.max_radius() + 0.5 * domain.scale();
        if !(self.half_width >= required) {
            return Err(Error::BoxTooSmall { required, half_width: self.half_width });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    pub center: Point3,
    pub half_width: f64,
    pub resolution: usize,
    /// Row-major in `(i, j, k)` with `k` fastest.
    pub samples: Vec<f64>,
}

impl GridField {
    fn zeros(center: Point3, spec: GridSpec) -> Self {
        let n = spec.resolution;
        Self { center, half_width: spec.half_width, resolution: n, samples: vec![0.0; n * n * n] }
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.resolution as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(3)
    }

    fn coordinate(&self, i: usize) -> f64 {
        -self.half_width + (i as f64 + 0.5) * self.spacing()
    }

    pub fn cell_center(&self, i: usize, j: usize, k: usize) -> Point3 {
        self.center + Point3::new(self.coordinate(i), self.coordinate(j), self.coordinate(k))
    }

    fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.resolution + j) * self.resolution + k
    }

    /// Cell containing `x`, if inside the box.
    fn cell_of(&self, x: &Point3) -> Option<usize> {
        let h = self.spacing();
        let n = self.resolution as f64;
        let rel = x - self.center;
        let mut idx = [0usize; 3];
        for (d, slot) in idx.iter_mut().enumerate() {
            let t = ((rel[d] + self.half_width) / h).floor();
            if !(t >= 0.0 && t < n) {
                return None;
            }
            *slot = t as usize;
        }
        Some(self.index(idx[0], idx[1], idx[2]))
    }

    fn fill(&mut self, f: impl Fn(&Point3) -> f64) {
        let n = self.resolution;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let idx = self.index(i, j, k);
                    self.samples[idx] = f(&self.cell_center(i, j, k));
                }
            }
        }
    }

    /// `Σ samples · cell volume`.
    pub fn integral(&self) -> f64 {
        self.samples.iter().sum::<f64>() * self.cell_volume()
    }

    /// `(Σ samples² · cell volume)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        (self.samples.iter().map(|v| v * v).sum::<f64>() * self.cell_volume()).sqrt()
    }
}

/// Samples the volume density at cell centers inside `Ω` and deposits each
/// surface node's `σ_i w_i` into its cell.
pub fn rasterize_filter(h: &DistributionalFilter, spec: GridSpec) -> Result<GridField> {
    let domain = &h.domain;
    spec.validate(domain)?;
    let mut g = GridField::zeros(domain.center, spec);
    g.fill(|x| if domain.contains(x, 0.0) { h.volume_density(x) } else { 0.0 });
    let cell = g.cell_volume();
    for ((y, w), s) in h.surface.nodes.iter().zip(&h.surface.weights).zip(&h.surface_density) {
        // validated box strictly contains Ω̄
        let idx = g.cell_of(y).ok_or(Error::BoxTooSmall { required: domain.max_radius(), half_width: spec.half_width })?;
        g.samples[idx] += s * w / cell;
    }
    Ok(g)
}

/// Smooth cutoff about the domain center: 1 out to `ρ_max`, 0 beyond
/// `ρ_max + 0.45·scale`.
pub fn cutoff(domain: &Domain, x: &Point3) -> f64 {
    let r = (x - domain.center).norm();
    falling_step((r - domain.max_radius()) / (0.45 * domain.scale())).0
}

/// Samples `χ f` with `χ` from [`cutoff`].
pub fn rasterize_extension(f: &SourceField, domain: &Domain, spec: GridSpec) -> Result<GridField> {
    spec.validate(domain)?;
    let mut g = GridField::zeros(domain.center, spec);
    g.fill(|x| {
        let c = cutoff(domain, x);
        if c == 0.0 {
            0.0
        } else {
            c * f.value(x)
        }
    });
    Ok(g)
}

/// In-place radix-2 FFT (forward sign `e^{−2πi jk/n}`) on a strided line.
struct Fft {
    n: usize,
    twiddles: Vec<Complex<f64>>,
}

impl Fft {
    fn new(n: usize) -> Self {
        debug_assert!(n.is_power_of_two());
        let twiddles = (0..n / 2)
            .map(|k| {
                let t = -2.0 * PI * k as f64 / n as f64;
                Complex::new(t.cos(), t.sin())
            })
            .collect();
        Self { n, twiddles }
    }

    fn run(&self, data: &mut [Complex<f64>]) {
        let n = self.n;
        let bits = n.trailing_zeros();
        if bits == 0 {
            return;
        }
        for i in 0..n {
            let j = i.reverse_bits() >> (usize::BITS - bits);
            if j > i {
                data.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let step = n / len;
            for start in (0..n).step_by(len) {
                for k in 0..len / 2 {
                    let w = self.twiddles[k * step];
                    let a = data[start + k];
                    let b = data[start + k + len / 2] * w;
                    data[start + k] = a + b;
                    data[start + k + len / 2] = a - b;
                }
            }
            len <<= 1;
        }
    }
}

fn fft3(samples: &[f64], n: usize) -> Vec<Complex<f64>> {
    let mut data: Vec<Complex<f64>> = samples.iter().map(|&v| Complex::new(v, 0.0)).collect();
    let fft = Fft::new(n);
    let mut line = vec![Complex::new(0.0, 0.0); n];
    for (stride, outer, inner) in [(1, n * n, 1), (n, n, n), (n * n, 1, n * n)] {
        // lines along the axis with the given stride
        for o in 0..outer {
            for i in 0..inner {
                let base = if stride == 1 { o * n } else if stride == n { o * n * n + i } else { i };
                for t in 0..n {
                    line[t] = data[base + t * stride];
                }
                fft.run(&mut line);
                for t in 0..n {
                    data[base + t * stride] = line[t];
                }
            }
        }
    }
    data
}

fn signed_frequency(k: usize, n: usize) -> f64 {
    if k < n / 2 {
        k as f64
    } else {
        k as f64 - n as f64
    }
}

/// Discrete `H^s` norm of a grid field, `s ∈ [−2, 2]`.
pub fn hs_norm_grid(g: &GridField, s: f64) -> Result<f64> {
    if !(-2.0..=2.0).contains(&s) {
        return Err(Error::InvalidParameter("Sobolev order must lie in [-2, 2]"));
    }
    let n = g.resolution;
    if g.samples.iter().all(|v| *v == 0.0) {
        return Ok(0.0);
    }
    let spectrum = fft3(&g.samples, n);
    let unit = PI / g.half_width;
    let freq: Vec<f64> = (0..n).map(|k| (unit * signed_frequency(k, n)).powi(2)).collect();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            let ij = freq[i] + freq[j];
            let row = &spectrum[(i * n + j) * n..(i * n + j + 1) * n];
            for (k, v) in row.iter().enumerate() {
                total += (1.0 + ij + freq[k]).powf(s) * v.norm_sqr();
            }
        }
    }
    let h = g.spacing();
    Ok((total * h.powi(3) / (n as f64).powi(3)).sqrt())
}

/// `‖h‖_{H^{-1}} / ‖χ f‖_{H^1}` on the grid.
pub fn isomorphism_ratio(f: &SourceField, h: &DistributionalFilter, spec: GridSpec) -> Result<f64> {
    let den = hs_norm_grid(&rasterize_extension(f, &h.domain, spec)?, 1.0)?;
    if !(den >= 1e-12) {
        return Err(Error::DegenerateNorm(den));
    }
    Ok(hs_norm_grid(&rasterize_filter(h, spec)?, -1.0)? / den)
}
