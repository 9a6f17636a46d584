//! Pinned tolerances and scales used by the check suites.
//!
//! "Coefficient-exact" means exact up to float rounding: per-coefficient
//! relative 1e−12. Integral routes computed at exactness-sufficient
//! quadrature order agree to 1e−9 relative. The residual scale is always
//! 1 + the largest absolute route value, so tolerances behave absolutely
//! near zero and relatively for large values.

/// Per-coefficient relative tolerance for algebraic identities.
pub const COEFF_REL: f64 = 1e-12;

/// Relative agreement between integral routes of the same quantity.
pub const ROUTE_REL: f64 = 1e-9;

/// Relative divergence-theorem residual at exactness-sufficient order.
pub const STOKES_REL: f64 = 1e-10;

/// Absolute bound on the structural dF/dJ residuals.
pub const MAXWELL_ABS: f64 = 1e-12;

/// Default step for the finite-difference flow oracle.
pub const LIE_FD_STEP: f64 = 1e-3;

/// Absolute pointwise deviation of the flow oracle at [`LIE_FD_STEP`].
pub const LIE_FD_ABS: f64 = 1e-6;

/// Default step for the finite-difference force oracle.
pub const FORCE_FD_STEP: f64 = 1e-3;

/// Relative agreement of the force finite-difference route at [`FORCE_FD_STEP`].
pub const FORCE_FD_REL: f64 = 1e-5;

/// Acceptable band for measured central-difference convergence orders.
pub const ORDER_MIN: f64 = 1.9;
pub const ORDER_MAX: f64 = 2.1;

/// Relative agreement between vector-calculus reductions and the
/// coordinate-free routes.
pub const REDUCTION_REL: f64 = 1e-8;

/// Pointwise integrand identity residual bound.
pub const POINTWISE_REL: f64 = 1e-9;

/// Hand-derived golden values reproduce to this (scaled) tolerance.
pub const GOLDEN_ABS: f64 = 1e-10;

/// Linearity spot checks.
pub const LINEARITY_REL: f64 = 1e-10;

/// Number of fixed quasi-random sample points for pointwise comparisons.
pub const SAMPLE_COUNT: usize = 32;

/// Reject per-point Jacobian inversion above this condition number.
pub const JACOBIAN_COND_MAX: f64 = 1e8;

/// Scenario validation warns above this total polynomial degree.
pub const DEGREE_WARN: u32 = 24;

/// Residual scale: 1 + the largest absolute value among the routes.
pub fn scale_of(values: &[f64]) -> f64 {
    1.0 + values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// |a − b| and the scaled tolerance check in one place.
pub fn within(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * scale_of(&[a, b])
}
