//! Deterministic low-discrepancy point sets.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::geometry::{Domain, Point3};

/// Radical inverse of `index` in `base` (van der Corput).
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while index > 0 {
        r += f * (index % base) as f64;
        index /= base;
        f *= inv;
    }
    r
}

const PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// `dim`-dimensional Halton point with the given index, in `[0, 1)^dim`.
pub fn halton(index: u64, dim: usize) -> Vec<f64> {
    assert!(dim <= PRIMES.len());
    PRIMES[..dim].iter().map(|&b| radical_inverse(index, b)).collect()
}

/// Spherical Fibonacci lattice: `n` quasi-uniform unit vectors.
pub fn fibonacci_sphere(n: usize) -> Vec<Point3> {
    let golden = PI * (3.0 - 5.0.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let s = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            Point3::new(s * phi.cos(), s * phi.sin(), z)
        })
        .collect()
}

/// `count` quasi-uniform unit vectors in `R^dim`.
///
/// Exact equal spacing on the circle, the Fibonacci lattice on `S²`, and
/// normalized Box–Muller-transformed Halton points above that.
pub fn sphere_directions(dim: usize, count: usize) -> Vec<Vec<f64>> {
    match dim {
        0 => Vec::new(),
        1 => [1.0, -1.0].iter().take(count.max(1)).map(|&s| alloc::vec![s]).collect(),
        2 => (0..count)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / count as f64;
                alloc::vec![t.cos(), t.sin()]
            })
            .collect(),
        3 => fibonacci_sphere(count)
            .into_iter()
            .map(|p| alloc::vec![p.x, p.y, p.z])
            .collect(),
        _ => {
            let pairs = dim.div_ceil(2);
            (1..=count as u64)
                .map(|i| {
                    let u = halton(i, 2 * pairs);
                    let mut v: Vec<f64> = Vec::with_capacity(2 * pairs);
                    for k in 0..pairs {
                        let r = (-2.0 * (1.0 - u[2 * k]).ln()).sqrt();
                        let t = 2.0 * PI * u[2 * k + 1];
                        v.push(r * t.cos());
                        v.push(r * t.sin());
                    }
                    v.truncate(dim);
                    let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
                    v.iter().map(|c| c / norm).collect()
                })
                .collect()
        }
    }
}

/// `count` points of `Ω` at least `margin` from `∂Ω`, taken in order from
/// the 3D Halton sequence (starting at index `seed + 1`) scaled to the
/// bounding cube. `None` if the margin leaves no room.
pub fn interior_points(domain: &Domain, count: usize, margin: f64, seed: u64) -> Option<Vec<Point3>> {
    let reach = domain.max_radius();
    let mut out = Vec::with_capacity(count);
    let mut index = seed;
    let budget = seed + 1000 * (count as u64 + 1);
    while out.len() < count {
        index += 1;
        if index > budget {
            return None;
        }
        let h = halton(index, 3);
        let x = domain.center + Point3::new(2.0 * h[0] - 1.0, 2.0 * h[1] - 1.0, 2.0 * h[2] - 1.0) * reach;
        if domain.level(&x) > 1.0 {
            continue;
        }
        let p = domain.nearest_boundary(&x);
        if p.inside && p.distance >= margin {
            out.push(x);
        }
    }
    Some(out)
}
