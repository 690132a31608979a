//! Constant-coefficient operator symbols and numerical audits of the
//! ellipticity hypotheses: md-ellipticity, proper ellipticity (root
//! splitting of `z ↦ q(ξ′, z)`) and the Shapiro–Lopatinskii determinant.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use nalgebra::{DMatrix, Schur};
use num_complex::Complex;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::lowdisc::sphere_directions;

pub type C64 = Complex<f64>;

/// Default md-ellipticity threshold on `|q(ξ)| ⟨ξ⟩^{-ν}`.
pub const MD_EPSILON: f64 = 1e-8;
/// Roots closer than this (relative) are reported as clustered.
pub const CLUSTER_TOL: f64 = 1e-6;

/// `p(ξ) = Σ_{|α| ≤ k} c_α ξ^α` with even order `k` and nonvanishing top part.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolPoly {
    dimension: usize,
    order: u32,
    terms: BTreeMap<Vec<u32>, f64>,
}

fn check_terms(
    dimension: usize,
    order: u32,
    terms: impl IntoIterator<Item = (Vec<u32>, f64)>,
) -> Result<BTreeMap<Vec<u32>, f64>> {
    let mut map = BTreeMap::new();
    for (alpha, c) in terms {
        let deg: u32 = alpha.iter().sum();
        if alpha.len() != dimension || deg > order {
            return Err(Error::BadMultiIndex { index: alpha, dimension, order });
        }
        *map.entry(alpha).or_insert(0.0) += c;
    }
    map.retain(|_, c| *c != 0.0);
    if !map.keys().any(|a| a.iter().sum::<u32>() == order) {
        return Err(Error::DegenerateSymbol(order));
    }
    Ok(map)
}

fn monomial(alpha: &[u32], xi: &[f64]) -> f64 {
    alpha.iter().zip(xi).map(|(&k, &x)| x.powi(k as i32)).product()
}

impl SymbolPoly {
    pub fn new(dimension: usize, order: u32, terms: impl IntoIterator<Item = (Vec<u32>, f64)>) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: dimension });
        }
        if order % 2 != 0 {
            return Err(Error::OddOrder(order));
        }
        let terms = check_terms(dimension, order, terms)?;
        Ok(Self { dimension, order, terms })
    }

    /// The constant symbol 1 (the identity operator).
    pub fn identity(dimension: usize) -> Self {
        Self::new(dimension, 0, [(vec![0; dimension], 1.0)]).expect("identity symbol")
    }

    /// `|ξ|² + shift`, the symbol of `−Δ + shift`.
    pub fn helmholtz(dimension: usize, shift: f64) -> Self {
        let mut terms = Vec::with_capacity(dimension + 1);
        for i in 0..dimension {
            let mut a = vec![0; dimension];
            a[i] = 2;
            terms.push((a, 1.0));
        }
        terms.push((vec![0; dimension], shift));
        Self::new(dimension, 2, terms).expect("helmholtz symbol")
    }

    /// `|ξ|²`, the symbol of `−Δ`.
    pub fn laplacian(dimension: usize) -> Self {
        Self::helmholtz(dimension, 0.0)
    }

    /// Product of two symbols of the same dimension.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dimension != other.dimension {
            return Err(Error::DimensionMismatch { expected: self.dimension, found: other.dimension });
        }
        let mut terms = Vec::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let ab: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                terms.push((ab, ca * cb));
            }
        }
        Self::new(self.dimension, self.order + other.order, terms)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], f64)> {
        self.terms.iter().map(|(a, c)| (a.as_slice(), *c))
    }

    pub fn eval(&self, xi: &[f64]) -> f64 {
        self.terms.iter().map(|(a, c)| c * monomial(a, xi)).sum()
    }

    /// Coefficients (ascending powers of `z`) of `z ↦ q(ξ′, z)`, `z = ξ_n`.
    pub fn z_polynomial(&self, xi_prime: &[f64]) -> Vec<f64> {
        let n = self.dimension;
        let mut coeffs = vec![0.0; self.order as usize + 1];
        for (a, c) in &self.terms {
            coeffs[a[n - 1] as usize] += c * monomial(&a[..n - 1], xi_prime);
        }
        coeffs
    }
}

/// Boundary symbol `b(ξ′, ξ_n)` of order `ρ` (no parity requirement).
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySymbol {
    dimension: usize,
    order: u32,
    terms: BTreeMap<Vec<u32>, f64>,
}

impl BoundarySymbol {
    pub fn new(dimension: usize, order: u32, terms: impl IntoIterator<Item = (Vec<u32>, f64)>) -> Result<Self> {
        let terms = check_terms(dimension, order, terms)?;
        Ok(Self { dimension, order, terms })
    }

    /// `γ₀ D_n^j`: the Dirichlet trace of the `j`-th normal derivative.
    pub fn normal_power(dimension: usize, j: u32) -> Self {
        let mut a = vec![0; dimension];
        a[dimension - 1] = j;
        Self::new(dimension, j, [(a, 1.0)]).expect("normal power symbol")
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Principal part scaled to order zero: `Σ_j b_j(ξ′) χ^{−ρ+j} z^j`.
    pub fn scaled_z_polynomial(&self, xi_prime: &[f64], chi: f64) -> Vec<C64> {
        let n = self.dimension;
        let mut coeffs = vec![C64::new(0.0, 0.0); self.order as usize + 1];
        for (a, c) in &self.terms {
            if a.iter().sum::<u32>() != self.order {
                continue;
            }
            let j = a[n - 1];
            let scale = chi.powi(j as i32 - self.order as i32);
            coeffs[j as usize] += C64::new(c * monomial(&a[..n - 1], xi_prime) * scale, 0.0);
        }
        coeffs
    }
}

/// Operator orders and kernel singularity data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderInfo {
    pub mu: u32,
    pub nu: u32,
    pub a: u32,
    pub gamma: i64,
    pub log_singular: bool,
    pub dimension: usize,
}

/// Orders of `R = Q⁻¹P` from the symbols of `P` and `Q` in dimension `n`.
pub fn derive_orders(p: &SymbolPoly, q: &SymbolPoly, n: usize) -> Result<OrderInfo> {
    for s in [p, q] {
        if s.dimension != n {
            return Err(Error::DimensionMismatch { expected: n, found: s.dimension });
        }
    }
    orders_from(p.order, q.order, n)
}

/// Same as [`derive_orders`] from bare orders.
pub fn orders_from(mu: u32, nu: u32, n: usize) -> Result<OrderInfo> {
    if mu >= nu {
        return Err(Error::NotSmaller { mu, nu });
    }
    if (nu - mu) % 2 != 0 {
        return Err(Error::OrderParity { mu, nu });
    }
    Ok(OrderInfo {
        mu,
        nu,
        a: (nu - mu) / 2,
        gamma: n as i64 + mu as i64 - nu as i64,
        log_singular: n % 2 == 0 && nu as usize > n,
        dimension: n,
    })
}

fn japanese(xi: &[f64]) -> f64 {
    (1.0 + xi.iter().map(|x| x * x).sum::<f64>()).sqrt()
}

/// Outcome of the md-ellipticity sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct MdEllipticity {
    pub md_elliptic: bool,
    /// `max ⟨ξ⟩^ν / |q(ξ)|` over the samples.
    pub worst_ratio: f64,
    pub epsilon: f64,
    pub samples: usize,
}

/// Default radii for the md-ellipticity sweep.
///
/// For `x`-independent symbols "large |x| + |ξ|" includes every `ξ`, so the
/// sweep reaches down to `|ξ| = 10⁻⁶` as well as up to `10³`.
pub const DEFAULT_RADII: [f64; 7] = [1e-6, 1e-3, 0.1, 1.0, 10.0, 100.0, 1000.0];

/// Samples `|q(ξ)| ⟨ξ⟩^{-ν}` over `radii × directions` and compares it with
/// `epsilon`.
pub fn check_md_ellipticity(q: &SymbolPoly, radii: &[f64], directions: usize, epsilon: f64) -> Result<MdEllipticity> {
    if radii.is_empty() || radii.windows(2).any(|w| w[0] >= w[1]) || radii.iter().any(|r| *r < 0.0) {
        return Err(Error::InvalidParameter("radii must be nonnegative and strictly increasing"));
    }
    if *radii.last().unwrap() < 1e3 {
        return Err(Error::InvalidParameter("largest radius must be at least 1e3"));
    }
    if directions < 50 {
        return Err(Error::InvalidParameter("at least 50 directions are required"));
    }
    let dirs = sphere_directions(q.dimension, directions);
    let mut worst: f64 = 0.0;
    let mut samples = 0;
    for &r in radii {
        for d in &dirs {
            let xi: Vec<f64> = d.iter().map(|c| c * r).collect();
            let v = q.eval(&xi).abs();
            if v == 0.0 {
                return Err(Error::ZeroOnGrid { xi });
            }
            worst = worst.max(japanese(&xi).powi(q.order as i32) / v);
            samples += 1;
            if r == 0.0 {
                break;
            }
        }
    }
    Ok(MdEllipticity { md_elliptic: 1.0 / worst >= epsilon, worst_ratio: worst, epsilon, samples })
}

/// Roots of `z ↦ q(ξ′, z)` split by half-plane.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSplit {
    pub upper: Vec<C64>,
    pub lower: Vec<C64>,
    /// Two roots lie within [`CLUSTER_TOL`] relative distance.
    pub clustered: bool,
}

/// All complex roots of the real polynomial `Σ c_k z^k` via the eigenvalues
/// of its companion matrix, polished by Newton steps.
pub fn polynomial_roots(coeffs: &[f64]) -> Vec<C64> {
    let mut deg = coeffs.len();
    while deg > 0 && coeffs[deg - 1] == 0.0 {
        deg -= 1;
    }
    if deg <= 1 {
        return Vec::new();
    }
    let d = deg - 1;
    let lead = coeffs[d];
    let mut comp = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        comp[(i, d - 1)] = -coeffs[i] / lead;
    }
    let poly: Vec<C64> = coeffs[..deg].iter().map(|&c| C64::new(c, 0.0)).collect();
    // the unbounded Schur sweep can stall on defective companions (multiple roots)
    let eig: Vec<C64> = match Schur::try_new(comp, f64::EPSILON, 2000) {
        Some(schur) => schur.complex_eigenvalues().iter().copied().collect(),
        None => aberth(&poly),
    };
    eig.iter()
        .map(|&z0| {
            let mut z = z0;
            for _ in 0..3 {
                let (p, dp) = horner_with_derivative(&poly, z);
                if dp.norm() == 0.0 {
                    break;
                }
                let step = p / dp;
                let next = z - step;
                if horner_with_derivative(&poly, next).0.norm() >= p.norm() {
                    break;
                }
                z = next;
            }
            z
        })
        .collect()
}

/// Aberth–Ehrlich simultaneous iteration for all roots of `poly`.
fn aberth(poly: &[C64]) -> Vec<C64> {
    let d = poly.len() - 1;
    let lead = poly[d].norm();
    let bound = 1.0 + poly[..d].iter().map(|c| c.norm() / lead).fold(0.0, f64::max);
    let mut z: Vec<C64> = (0..d)
        .map(|k| C64::from_polar(0.5 * bound, 2.0 * core::f64::consts::PI * (k as f64 + 0.25) / d as f64))
        .collect();
    for _ in 0..500 {
        let mut moved: f64 = 0.0;
        for i in 0..d {
            let (p, dp) = horner_with_derivative(poly, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: C64 = (0..d).filter(|&j| j != i).map(|j| C64::new(1.0, 0.0) / (z[i] - z[j])).sum();
            let step = ratio / (C64::new(1.0, 0.0) - ratio * repulsion);
            z[i] -= step;
            moved = moved.max(step.norm() / (1.0 + z[i].norm()));
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn horner_with_derivative(poly: &[C64], z: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &c in poly.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Evaluates a complex polynomial (ascending coefficients).
pub fn eval_poly(poly: &[C64], z: C64) -> C64 {
    horner_with_derivative(poly, z).0
}

/// Roots of `q(ξ′, ·)` in the upper half-plane; exactly `ν/2` are required.
pub fn upper_half_roots(q: &SymbolPoly, xi_prime: &[f64]) -> Result<RootSplit> {
    if xi_prime.len() + 1 != q.dimension {
        return Err(Error::DimensionMismatch { expected: q.dimension - 1, found: xi_prime.len() });
    }
    let roots = polynomial_roots(&q.z_polynomial(xi_prime));
    let expected = q.order as usize / 2;
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for &z in &roots {
        if z.im.abs() < 1e-10 * (1.0 + z.norm()) {
            return Err(Error::RealRoot { xi_prime: xi_prime.to_vec(), re: z.re, im: z.im });
        }
        if z.im > 0.0 {
            upper.push(z);
        } else {
            lower.push(z);
        }
    }
    if upper.len() != expected || lower.len() != expected {
        return Err(Error::WrongCount { xi_prime: xi_prime.to_vec(), found: upper.len(), expected });
    }
    let mut clustered = false;
    for i in 0..roots.len() {
        for j in (i + 1)..roots.len() {
            let scale = roots[i].norm().max(roots[j].norm()).max(1e-300);
            if (roots[i] - roots[j]).norm() < CLUSTER_TOL * scale {
                clustered = true;
            }
        }
    }
    Ok(RootSplit { upper, lower, clustered })
}

/// Monic polynomial with the given roots, ascending coefficients.
pub fn monic_from_roots(roots: &[C64]) -> Vec<C64> {
    let mut p = vec![C64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![C64::new(0.0, 0.0); p.len() + 1];
        for (k, &c) in p.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * r;
        }
        p = next;
    }
    p
}

/// Long division by a monic divisor: `(quotient, remainder)` with
/// `deg remainder < deg divisor`.
pub fn divide_monic(dividend: &[C64], divisor: &[C64]) -> (Vec<C64>, Vec<C64>) {
    let dd = divisor.len() - 1;
    let mut rem = dividend.to_vec();
    if rem.len() <= dd {
        rem.resize(dd, C64::new(0.0, 0.0));
        return (vec![C64::new(0.0, 0.0)], rem);
    }
    let qlen = rem.len() - dd;
    let mut quot = vec![C64::new(0.0, 0.0); qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        for (i, &d) in divisor.iter().enumerate() {
            rem[k + i] -= c * d;
        }
    }
    rem.truncate(dd);
    (quot, rem)
}

/// `det(r_mj)` where `r_m = b_m mod q⁺`, for already scaled boundary
/// polynomials and the scaled upper roots `χ⁻¹τ_j`.
pub fn lopatinskii_determinant(scaled_upper_roots: &[C64], scaled_boundary: &[Vec<C64>]) -> C64 {
    let k = scaled_upper_roots.len();
    let q_plus = monic_from_roots(scaled_upper_roots);
    let mut m = DMatrix::<C64>::zeros(k, k);
    for (row, b) in scaled_boundary.iter().enumerate() {
        let (_, r) = divide_monic(b, &q_plus);
        for (j, c) in r.iter().enumerate().take(k) {
            m[(row, j)] = *c;
        }
    }
    m.determinant()
}

/// Default `ξ′` sample set: the origin plus `radii × directions` in `ℝ^{n−1}`.
pub fn xi_prime_samples(dimension: usize, radii: &[f64], directions: usize) -> Vec<Vec<f64>> {
    let mut out = vec![vec![0.0; dimension - 1]];
    let dirs = sphere_directions(dimension - 1, directions);
    for &r in radii {
        if r == 0.0 {
            continue;
        }
        for d in &dirs {
            out.push(d.iter().map(|c| c * r).collect());
        }
    }
    out
}

/// `(min |det|, max |det|)` of the Shapiro–Lopatinskii matrix over samples.
pub fn lopatinskii_check(q: &SymbolPoly, boundary: &[BoundarySymbol], samples: &[Vec<f64>]) -> Result<(f64, f64)> {
    let expected = q.order as usize / 2;
    if boundary.len() != expected {
        return Err(Error::BoundaryCount { expected, found: boundary.len() });
    }
    for b in boundary {
        if b.dimension != q.dimension {
            return Err(Error::DimensionMismatch { expected: q.dimension, found: b.dimension });
        }
    }
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for xi in samples {
        let roots = upper_half_roots(q, xi)?;
        let chi = japanese(xi);
        let scaled: Vec<C64> = roots.upper.iter().map(|t| t / chi).collect();
        let polys: Vec<Vec<C64>> = boundary.iter().map(|b| b.scaled_z_polynomial(xi, chi)).collect();
        let det = lopatinskii_determinant(&scaled, &polys).norm();
        lo = lo.min(det);
        hi = hi.max(det);
    }
    Ok((lo, hi))
}

/// Full audit of `Q` with boundary operators.
#[derive(Debug, Clone, PartialEq)]
pub struct EllipticityReport {
    pub md_elliptic: bool,
    pub worst_ratio: f64,
    pub proper_elliptic: bool,
    pub upper_root_counts: Vec<(Vec<f64>, usize)>,
    pub clustered_roots: bool,
    /// `(slMinDet, slMaxDet)`, absent when the roots could not be split.
    pub sl_determinants: Option<(f64, f64)>,
    pub failures: Vec<String>,
}

/// Sampling parameters for [`audit`].
#[derive(Debug, Clone)]
pub struct AuditConfig {
    pub radii: Vec<f64>,
    pub directions: usize,
    pub epsilon: f64,
    pub xi_prime_radii: Vec<f64>,
    pub xi_prime_directions: usize,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self {
            radii: DEFAULT_RADII.to_vec(),
            directions: 64,
            epsilon: MD_EPSILON,
            xi_prime_radii: vec![1.0, 10.0, 100.0, 1000.0],
            xi_prime_directions: 12,
        }
    }
}

/// Runs all three checks, folding failures into the report.
pub fn audit(q: &SymbolPoly, boundary: &[BoundarySymbol], cfg: &AuditConfig) -> Result<EllipticityReport> {
    let mut failures = Vec::new();
    let (md_elliptic, worst_ratio) = match check_md_ellipticity(q, &cfg.radii, cfg.directions, cfg.epsilon) {
        Ok(md) => {
            if !md.md_elliptic {
                failures.push(alloc::format!(
                    "md-ellipticity failed: sup <xi>^nu/|q| = {:e} exceeds 1/epsilon",
                    md.worst_ratio
                ));
            }
            (md.md_elliptic, md.worst_ratio)
        }
        Err(e @ Error::ZeroOnGrid { .. }) => {
            failures.push(alloc::format!("md-ellipticity failed: {e}"));
            (false, f64::INFINITY)
        }
        Err(e) => return Err(e),
    };
    let samples = xi_prime_samples(q.dimension, &cfg.xi_prime_radii, cfg.xi_prime_directions);
    let mut counts = Vec::with_capacity(samples.len());
    let mut proper = true;
    let mut clustered = false;
    for xi in &samples {
        match upper_half_roots(q, xi) {
            Ok(split) => {
                clustered |= split.clustered;
                counts.push((xi.clone(), split.upper.len()));
            }
            Err(e @ (Error::RealRoot { .. } | Error::WrongCount { .. })) => {
                if proper {
                    failures.push(alloc::format!("proper ellipticity failed: {e}"));
                }
                proper = false;
                let n = polynomial_roots(&q.z_polynomial(xi)).iter().filter(|z| z.im > 0.0).count();
                counts.push((xi.clone(), n));
            }
            Err(e) => return Err(e),
        }
    }
    let sl = if proper {
        match lopatinskii_check(q, boundary, &samples) {
            Ok(pair) => Some(pair),
            Err(e @ Error::BoundaryCount { .. }) => {
                failures.push(e.to_string());
                None
            }
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    Ok(EllipticityReport {
        md_elliptic,
        worst_ratio,
        proper_elliptic: proper,
        upper_root_counts: counts,
        clustered_roots: clustered,
        sl_determinants: sl,
        failures,
    })
}
