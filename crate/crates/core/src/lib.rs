//! Optimal-filter solver for the first-kind integral equation `R_Ω h = f`
//! with a weakly singular covariance kernel `R = Q⁻¹P`.
//!
//! The equation is reduced to an exterior Dirichlet problem for `Q`; the
//! solution `h` is assembled as an interior density plus a single layer on
//! `∂Ω`, and can be checked independently by applying the integral operator
//! with singularity-cancelling quadrature.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! parallel drivers live in the `rfest` companion crate.
#![no_std]

extern crate alloc;

pub mod error;
pub mod exterior;
pub mod filter;
pub mod forward;
pub mod geometry;
pub mod kernel;
pub mod lowdisc;
pub mod lstsq;
pub mod quadrature;
pub mod sobolev;
pub mod special;
pub mod sph;
pub mod symbol;

mod smooth;

pub use error::{Error, Result};
pub use exterior::{BoundaryData, ExteriorSolution, MfsConfig};
pub use filter::{BvpSpec, DistributionalFilter, SourceField, TestFunction};
pub use forward::ResidualReport;
pub use geometry::{Domain, Point3, SurfaceQuadrature, VolumeQuadrature};
pub use kernel::{KernelFamily, KernelParams};
pub use symbol::{EllipticityReport, OrderInfo, SymbolPoly};
