//! Verification engine for premetric p-form electrodynamics-like theories.
//!
//! The crate implements exterior calculus over R^n with exact multivariate
//! polynomial coefficients, the dictionary between exterior calculus and
//! vector analysis in R^3, polynomial flows with pullbacks and Lie
//! derivatives, Gauss-Legendre quadrature over axis-aligned box chains, and
//! the potential-energy and force functionals of p-form electrodynamics.
//! Every quantity of interest is computed by several independent routes
//! (volume/boundary/split integrals, Cartan vs finite-difference flows,
//! coordinate-free vs vector-calculus reductions) so that agreement between
//! routes certifies the implementation.

pub mod checks;
pub mod ed;
pub mod error;
pub mod exterior;
pub mod flows;
pub mod force;
pub mod poly;
pub mod quadrature;
pub mod r3;
pub mod reduction;
pub mod report;
pub mod rng;
pub mod scenario;
pub mod tol;

pub use checks::{run, Command};
pub use ed::{energy, energy_under_motion, EDSystem, EnergyReport};
pub use error::{Error, Result};
pub use exterior::{
    all_multi_indices, coefficient_residual, linear_combination, max_pointwise_deviation,
    DifferentialForm, MultiIndex, VectorField,
};
pub use flows::{lie_derivative, lie_fd_oracle, pullback, sample_points, Motion, SmoothMap};
pub use force::{force, force_alt, force_fd, force_with_motion, ForceReport};
pub use poly::Polynomial;
pub use quadrature::{
    integrate_boundary, integrate_scalar, integrate_volume, stokes_residual, BoxDomain,
    QuadratureRule, Region,
};
pub use reduction::{
    electrostatic_force_terms, magnetostatic_force_terms, magnetostatic_pointwise_residual,
    transported_energy_p0, transported_energy_p1, ElectricConvention, ElectrostaticTerms,
    MagnetostaticTerms,
};
pub use report::{CheckRecord, Report};
pub use rng::Rng;
pub use scenario::Scenario;
