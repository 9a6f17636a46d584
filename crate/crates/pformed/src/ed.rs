//! The p-form electrodynamics layer: systems (g, α) on R^n, the traction
//! stress σ(α) = g∧α, structural Maxwell residuals, and the potential-energy
//! functional computed by three independent routes.
//!
//! Energy routes:
//!   volume   ∫_Ω d(g∧α)
//!   boundary ∫_{∂Ω} g∧α
//!   split    ∫_Ω J∧α + (−1)^{n−p−1} ∫_Ω g∧F        with F = dα, J = dg
//! The three must agree at exactness-sufficient quadrature order; the report
//! carries all routes and their residuals so the agreement stays observable.

use crate::error::{Error, Result};
use crate::exterior::DifferentialForm;
use crate::flows::{pullback, Motion};
use crate::quadrature::{integrate_boundary, integrate_volume, QuadratureRule, Region};
use crate::tol;

/// A potential/Maxwell-form pair on R^n: α of grade p, g of grade n−p−1.
/// The Faraday form F = dα and the current J = dg are derived.
#[derive(Debug, Clone, PartialEq)]
pub struct EDSystem {
    n: usize,
    p: usize,
    g: DifferentialForm,
    alpha: DifferentialForm,
}

impl EDSystem {
    pub fn new(n: usize, p: usize, g: DifferentialForm, alpha: DifferentialForm) -> Result<Self> {
        if p + 1 > n {
            return Err(Error::Scenario(format!(
                "potential degree p must satisfy p <= n-1, got p = {p}, n = {n}"
            )));
        }
        if g.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: g.dim(),
            });
        }
        if alpha.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: alpha.dim(),
            });
        }
        if g.grade() != n - p - 1 {
            return Err(Error::GradeMismatch {
                expected: n - p - 1,
                got: g.grade(),
            });
        }
        if alpha.grade() != p {
            return Err(Error::GradeMismatch {
                expected: p,
                got: alpha.grade(),
            });
        }
        Ok(Self { n, p, g, alpha })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.p
    }

    pub fn maxwell_form(&self) -> &DifferentialForm {
        &self.g
    }

    pub fn potential(&self) -> &DifferentialForm {
        &self.alpha
    }

    /// F = dα, grade p+1.
    pub fn faraday(&self) -> DifferentialForm {
        self.alpha.d()
    }

    /// J = dg, grade n−p.
    pub fn current(&self) -> DifferentialForm {
        self.g.d()
    }

    /// (−1)^{n−p−1}, the sign in front of the g∧F term.
    pub fn parity_sign(&self) -> f64 {
        if (self.n - self.p - 1).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    /// Traction stress σ(α) = g ∧ α, an (n−1)-form.
    pub fn traction(&self) -> Result<DifferentialForm> {
        self.g.wedge(&self.alpha)
    }

    /// (‖dF‖, ‖dJ‖) as max absolute coefficients. Both vanish structurally
    /// since F and J are themselves exterior derivatives.
    pub fn maxwell_residual(&self) -> (f64, f64) {
        (
            self.faraday().d().max_abs_coeff(),
            self.current().d().max_abs_coeff(),
        )
    }

    /// Same system with α replaced (used by linearity checks).
    pub fn with_potential(&self, alpha: DifferentialForm) -> Result<Self> {
        Self::new(self.n, self.p, self.g.clone(), alpha)
    }

    pub fn with_maxwell_form(&self, g: DifferentialForm) -> Result<Self> {
        Self::new(self.n, self.p, g, self.alpha.clone())
    }
}

/// All three energy routes and their pairwise residuals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport {
    pub volume: f64,
    pub boundary: f64,
    pub split: f64,
}

impl EnergyReport {
    pub fn residual_volume_boundary(&self) -> f64 {
        (self.volume - self.boundary).abs()
    }

    pub fn residual_volume_split(&self) -> f64 {
        (self.volume - self.split).abs()
    }

    pub fn max_residual(&self) -> f64 {
        self.residual_volume_boundary()
            .max(self.residual_volume_split())
    }

    pub fn scale(&self) -> f64 {
        tol::scale_of(&[self.volume, self.boundary, self.split])
    }
}

/// Potential energy of the system restricted to the region, by all routes.
/// The supplied rule is raised (never lowered) to the exactness bound of each
/// assembled integrand.
pub fn energy(sys: &EDSystem, region: &Region, rule: &QuadratureRule) -> Result<EnergyReport> {
    if region.dim() != sys.dim() {
        return Err(Error::DimensionMismatch {
            expected: sys.dim(),
            got: region.dim(),
        });
    }
    let sigma = sys.traction()?;
    let d_sigma = sigma.d();
    let volume = integrate_volume(&d_sigma, region, &rule.raised_for(&d_sigma))?;
    let boundary = integrate_boundary(&sigma, region, &rule.raised_for(&sigma))?;

    let j_alpha = sys.current().wedge(sys.potential())?;
    let g_f = sys.maxwell_form().wedge(&sys.faraday())?;
    let split = integrate_volume(&j_alpha, region, &rule.raised_for(&j_alpha))?
        + sys.parity_sign() * integrate_volume(&g_f, region, &rule.raised_for(&g_f))?;

    Ok(EnergyReport {
        volume,
        boundary,
        split,
    })
}

/// Energy after transporting g with the motion while α stays fixed in space:
/// P_t = ∫_Ω J ∧ ψ_t*α + (−1)^{n−p−1} ∫_Ω g ∧ ψ_t*F with ψ_t = motion.at(t).
/// At t = 0 this equals the split route of [`energy`].
pub fn energy_under_motion(
    sys: &EDSystem,
    region: &Region,
    motion: &Motion,
    t: f64,
    rule: &QuadratureRule,
) -> Result<f64> {
    if motion.dim() != sys.dim() {
        return Err(Error::DimensionMismatch {
            expected: sys.dim(),
            got: motion.dim(),
        });
    }
    if region.dim() != sys.dim() {
        return Err(Error::DimensionMismatch {
            expected: sys.dim(),
            got: region.dim(),
        });
    }
    let psi = motion.at(t);
    let pulled_alpha = pullback(&psi, sys.potential())?;
    let pulled_faraday = pullback(&psi, &sys.faraday())?;
    let j_term = sys.current().wedge(&pulled_alpha)?;
    let g_term = sys.maxwell_form().wedge(&pulled_faraday)?;
    Ok(
        integrate_volume(&j_term, region, &rule.raised_for(&j_term))?
            + sys.parity_sign() * integrate_volume(&g_term, region, &rule.raised_for(&g_term))?,
    )
}
