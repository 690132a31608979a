use alloc::vec::Vec;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("symbol order {0} is odd; only even orders are supported")]
    OddOrder(u32),
    #[error("symbol has no nonzero coefficient of top order {0}")]
    DegenerateSymbol(u32),
    #[error("multi-index {index:?} does not fit dimension {dimension} and order {order}")]
    BadMultiIndex { index: Vec<u32>, dimension: usize, order: u32 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("order difference nu - mu = {nu} - {mu} is odd")]
    OrderParity { mu: u32, nu: u32 },
    #[error("order of P ({mu}) must be strictly smaller than order of Q ({nu})")]
    NotSmaller { mu: u32, nu: u32 },
    #[error("symbol vanishes at sample xi = {xi:?}")]
    ZeroOnGrid { xi: Vec<f64> },
    #[error("q(xi', z) has a real root z = {re} + {im}i at xi' = {xi_prime:?}")]
    RealRoot { xi_prime: Vec<f64>, re: f64, im: f64 },
    #[error("q(xi', z) has {found} roots in the upper half-plane at xi' = {xi_prime:?}, expected {expected}")]
    WrongCount { xi_prime: Vec<f64>, found: usize, expected: usize },
    #[error("expected {expected} boundary operators, found {found}")]
    BoundaryCount { expected: usize, found: usize },

    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("radial function is {value} at theta = {theta}, phi = {phi}")]
    NonPositiveRadial { theta: f64, phi: f64, value: f64 },
    #[error("spherical-harmonic coefficient count {0} is not a perfect square")]
    BadCoefficientCount(usize),
    #[error("quadrature order {order} is below the minimum {min}")]
    OrderTooLow { order: usize, min: usize },

    #[error("kernel evaluated at coincident points")]
    CoincidentPoints,
    #[error("kernel family has no closed-form evaluation")]
    NoClosedForm,

    #[error("boundary data has {found} values, quadrature has {expected} nodes")]
    DataMismatch { expected: usize, found: usize },
    #[error("the spectral solver requires a ball domain")]
    SpectralRequiresBall,
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("boundary residual {residual:e} exceeds tolerance {tol:e}")]
    ResidualTooLarge { residual: f64, tol: f64 },
    #[error("point lies inside the domain")]
    PointInsideDomain,
    #[error("point lies outside the domain")]
    PointOutsideDomain,
    #[error("point lies within {distance:e} of the boundary")]
    OnSurface { distance: f64 },

    #[error("P has order {mu} > 0: {extra_conditions} extra boundary conditions would be required")]
    UnsupportedMu { mu: u32, extra_conditions: u32 },
    #[error("normal-derivative traces of order {0} are not available")]
    UnsupportedTraceOrder(u32),
    #[error("exponential rate |b| = {norm} does not equal a = {a}")]
    ExpLinearRate { norm: f64, a: f64 },
    #[error("exterior trace differs from f by {sup:e} on the boundary")]
    TraceMismatch { sup: f64 },
    #[error("test function support radius {support} exceeds truncation radius {truncation}")]
    TruncationTooSmall { support: f64, truncation: f64 },

    #[error("grid half-width {half_width} is below the required {required}")]
    BoxTooSmall { required: f64, half_width: f64 },
    #[error("grid resolution {0} must be a power of two in [32, 256]")]
    BadResolution(usize),
    #[error("denominator norm {0:e} is degenerate")]
    DegenerateNorm(f64),
}
