//! Covariance kernels `R(x, y)` of `R = Q⁻¹P` and their singularity class.

use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::geometry::Point3;
use crate::symbol::{orders_from, OrderInfo};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelFamily {
    /// `e^{−a r} / (4π r)`: `P = I`, `Q = −Δ + a²` in ℝ³.
    ModifiedHelmholtz3D,
    /// Order bookkeeping only; no closed-form kernel.
    Symbolic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    pub family: KernelFamily,
    pub a: f64,
    pub orders: OrderInfo,
}

/// Singularity class of a kernel with the given orders.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SingularityProfile {
    pub gamma: i64,
    pub log_flag: bool,
    pub continuous: bool,
}

impl KernelParams {
    /// The modified Helmholtz kernel with decay constant `a > 0`.
    pub fn modified_helmholtz(a: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::InvalidParameter("kernel constant a must be positive"));
        }
        Ok(Self { family: KernelFamily::ModifiedHelmholtz3D, a, orders: orders_from(0, 2, 3)? })
    }

    /// A kernel known only through its operator orders.
    pub fn symbolic(orders: OrderInfo) -> Self {
        Self { family: KernelFamily::Symbolic, a: f64::NAN, orders }
    }

    /// `R(x, y)`.
    pub fn value(&self, x: &Point3, y: &Point3) -> Result<f64> {
        if self.family != KernelFamily::ModifiedHelmholtz3D {
            return Err(Error::NoClosedForm);
        }
        let r = (x - y).norm();
        if r < 1e-14 * (1.0 + x.norm()) {
            return Err(Error::CoincidentPoints);
        }
        Ok(self.radial(r))
    }

    /// `e^{−a r} / (4π r)` without the coincidence guard.
    #[inline]
    pub fn radial(&self, r: f64) -> f64 {
        (-self.a * r).exp() / (4.0 * PI * r)
    }

    /// `r · R(r) = e^{−a r} / (4π)`: the kernel times the polar Jacobian factor.
    #[inline]
    pub fn radial_times_r(&self, r: f64) -> f64 {
        (-self.a * r).exp() / (4.0 * PI)
    }

    /// `∂R/∂r`.
    #[inline]
    pub fn radial_derivative(&self, r: f64) -> f64 {
        -(1.0 + self.a * r) * (-self.a * r).exp() / (4.0 * PI * r * r)
    }

    pub fn singularity(&self) -> SingularityProfile {
        singularity_profile(&self.orders)
    }
}

pub fn singularity_profile(orders: &OrderInfo) -> SingularityProfile {
    SingularityProfile { gamma: orders.gamma, log_flag: orders.log_singular, continuous: orders.gamma < 0 }
}
