//! The force functional F_Ω(w) on virtual velocities, computed by three
//! independent routes:
//!
//!   cartan    ∫_Ω d(g ∧ L_w α)            (= ∫_{∂Ω} g ∧ L_w α, also computed)
//!   alt       ∫_Ω J∧(w⌟F) + (−1)^{n−p−1} g∧d(w⌟F) + J∧d(w⌟α)
//!   fd        central difference of the transported energy at t = 0
//!
//! The convention is F = +dP/dt. Agreement of the three routes (plus the
//! boundary form of the first) is the object under test.

use std::collections::BTreeMap;

use crate::ed::{energy_under_motion, EDSystem};
use crate::error::{Error, Result};
use crate::exterior::VectorField;
use crate::flows::{lie_derivative, Motion};
use crate::quadrature::{integrate_boundary, integrate_volume, QuadratureRule, Region};
use crate::tol;

/// All force routes, the finite-difference convergence-order estimate, and
/// pairwise residuals.
#[derive(Debug, Clone, PartialEq)]
pub struct ForceReport {
    /// ∫_Ω d(g ∧ L_w α).
    pub cartan: f64,
    /// ∫_{∂Ω} g ∧ L_w α.
    pub boundary: f64,
    /// The interior-product route.
    pub alt: f64,
    /// Central difference of the transported energy.
    pub fd: f64,
    pub fd_step: f64,
    /// Measured convergence order of the fd route; `None` when the
    /// difference quotient is exact to rounding and no order is measurable.
    pub fd_order: Option<f64>,
    pub residuals: BTreeMap<String, f64>,
}

impl ForceReport {
    pub fn scale(&self) -> f64 {
        tol::scale_of(&[self.cartan, self.boundary, self.alt, self.fd])
    }
}

/// F_Ω(w) with the default first-order motion x + t·w and default fd step.
pub fn force(
    sys: &EDSystem,
    region: &Region,
    w: &VectorField,
    rule: &QuadratureRule,
) -> Result<ForceReport> {
    force_with_motion(sys, region, &Motion::linear(w.clone()), tol::FORCE_FD_STEP, rule)
}

/// The primary route alone, ∫_Ω d(g ∧ L_w α), without the fd machinery.
pub fn force_cartan(
    sys: &EDSystem,
    region: &Region,
    w: &VectorField,
    rule: &QuadratureRule,
) -> Result<f64> {
    let power_flux = sys.maxwell_form().wedge(&lie_derivative(w, sys.potential())?)?;
    let d_flux = power_flux.d();
    integrate_volume(&d_flux, region, &rule.raised_for(&d_flux))
}

/// F_Ω(w) with an explicit motion for the fd route (its generator is w).
pub fn force_with_motion(
    sys: &EDSystem,
    region: &Region,
    motion: &Motion,
    h: f64,
    rule: &QuadratureRule,
) -> Result<ForceReport> {
    let w = motion.velocity();
    let power_flux = sys.maxwell_form().wedge(&lie_derivative(w, sys.potential())?)?;
    let d_flux = power_flux.d();
    let cartan = integrate_volume(&d_flux, region, &rule.raised_for(&d_flux))?;
    let boundary = integrate_boundary(&power_flux, region, &rule.raised_for(&power_flux))?;
    let alt = force_alt(sys, region, w, rule)?;
    let fd = force_fd(sys, region, motion, h, rule)?;
    // order is measured a decade above h, where truncation still dominates
    // the f64 rounding of the integrals
    let fd_order = fd_order_estimate(sys, region, motion, 10.0 * h, rule)?;

    let mut residuals = BTreeMap::new();
    residuals.insert("cartan_vs_alt".to_string(), (cartan - alt).abs());
    residuals.insert("cartan_vs_boundary".to_string(), (cartan - boundary).abs());
    residuals.insert("cartan_vs_fd".to_string(), (cartan - fd).abs());

    Ok(ForceReport {
        cartan,
        boundary,
        alt,
        fd,
        fd_step: h,
        fd_order,
        residuals,
    })
}

/// The alternative route ∫ J∧(w⌟F) + (−1)^{n−p−1} g∧d(w⌟F) + J∧d(w⌟α).
/// For p = 0 the last term is absent: the interior product of the 0-form α
/// is undefined and L_w α = w⌟F already.
pub fn force_alt(
    sys: &EDSystem,
    region: &Region,
    w: &VectorField,
    rule: &QuadratureRule,
) -> Result<f64> {
    if w.dim() != sys.dim() {
        return Err(Error::DimensionMismatch {
            expected: sys.dim(),
            got: w.dim(),
        });
    }
    let faraday = sys.faraday();
    let current = sys.current();
    let w_f = faraday.contract(w)?;

    let j_term = current.wedge(&w_f)?;
    let mut total = integrate_volume(&j_term, region, &rule.raised_for(&j_term))?;

    let g_term = sys.maxwell_form().wedge(&w_f.d())?;
    total += sys.parity_sign() * integrate_volume(&g_term, region, &rule.raised_for(&g_term))?;

    if sys.degree() > 0 {
        let w_alpha = sys.potential().contract(w)?;
        let j_alpha_term = current.wedge(&w_alpha.d())?;
        total += integrate_volume(&j_alpha_term, region, &rule.raised_for(&j_alpha_term))?;
    }
    Ok(total)
}

/// Central difference (P_{+h} − P_{−h}) / 2h of the transported energy.
pub fn force_fd(
    sys: &EDSystem,
    region: &Region,
    motion: &Motion,
    h: f64,
    rule: &QuadratureRule,
) -> Result<f64> {
    if !h.is_finite() || h <= 0.0 {
        return Err(Error::NonpositiveStep(h));
    }
    let plus = energy_under_motion(sys, region, motion, h, rule)?;
    let minus = energy_under_motion(sys, region, motion, -h, rule)?;
    Ok((plus - minus) / (2.0 * h))
}

/// Three-point Richardson estimate of the fd convergence order, from the
/// quotient of successive step-halving differences (4 ⇒ order 2). Returns
/// `None` when the differences are below rounding noise (the quotient is
/// already exact, e.g. for energies polynomial of degree ≤ 2 in t).
pub fn fd_order_estimate(
    sys: &EDSystem,
    region: &Region,
    motion: &Motion,
    h: f64,
    rule: &QuadratureRule,
) -> Result<Option<f64>> {
    let f1 = force_fd(sys, region, motion, h, rule)?;
    let f2 = force_fd(sys, region, motion, h / 2.0, rule)?;
    let f4 = force_fd(sys, region, motion, h / 4.0, rule)?;
    let d1 = (f1 - f2).abs();
    let d2 = (f2 - f4).abs();
    let noise = 1e-12 * tol::scale_of(&[f1, f2, f4]);
    if d1 <= noise || d2 <= noise {
        return Ok(None);
    }
    Ok(Some((d1 / d2).log2()))
}
