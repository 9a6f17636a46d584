//! Scenario files: the JSON description of a system, region, virtual motion
//! and verification parameters.
//!
//! Polynomials are term lists `[{"coeff": c, "exp": [e1, ..., en]}, ...]`;
//! forms are maps from a basis multi-index literal `"[i,j,...]"` (1-based,
//! `"[]"` for 0-forms) to a polynomial. The Maxwell form may instead be given
//! through its R^3 vector proxy (`d_proxy` for p = 0, `h_proxy` for p = 1),
//! and the potential through `alpha_scalar` (p = 0) or `alpha_proxy` (p = 1).

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::ed::EDSystem;
use crate::error::{Error, Result};
use crate::exterior::{DifferentialForm, VectorField};
use crate::flows::Motion;
use crate::poly::Polynomial;
use crate::quadrature::{BoxDomain, QuadratureRule, Region};
use crate::r3;
use crate::tol;

#[derive(Debug, Clone, Deserialize)]
pub struct TermLiteral {
    pub coeff: f64,
    pub exp: Vec<u32>,
}

pub type PolyLiteral = Vec<TermLiteral>;
pub type FormLiteral = BTreeMap<String, PolyLiteral>;

#[derive(Debug, Clone, Deserialize)]
pub struct BoxLiteral {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct RegionLiteral {
    pub boxes: Vec<BoxLiteral>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub n: usize,
    pub p: usize,
    #[serde(default)]
    pub g: Option<FormLiteral>,
    #[serde(default)]
    pub d_proxy: Option<Vec<PolyLiteral>>,
    #[serde(default)]
    pub h_proxy: Option<Vec<PolyLiteral>>,
    #[serde(default)]
    pub alpha: Option<FormLiteral>,
    #[serde(default)]
    pub alpha_scalar: Option<PolyLiteral>,
    #[serde(default)]
    pub alpha_proxy: Option<Vec<PolyLiteral>>,
    pub velocity: Option<Vec<PolyLiteral>>,
    #[serde(default)]
    pub second_order: Option<Vec<PolyLiteral>>,
    pub region: Option<RegionLiteral>,
    #[serde(default)]
    pub quad_order: Option<usize>,
    #[serde(default)]
    pub fd_step: Option<f64>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub tolerances: Option<ToleranceOverrides>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    pub route_rel: Option<f64>,
    pub coeff_rel: Option<f64>,
    pub stokes_rel: Option<f64>,
    pub maxwell_abs: Option<f64>,
    pub lie_fd_abs: Option<f64>,
    pub force_fd_rel: Option<f64>,
    pub reduction_rel: Option<f64>,
    pub pointwise_rel: Option<f64>,
    pub golden_abs: Option<f64>,
}

/// Effective tolerances after applying scenario overrides to the defaults.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub route_rel: f64,
    pub coeff_rel: f64,
    pub stokes_rel: f64,
    pub maxwell_abs: f64,
    pub lie_fd_abs: f64,
    pub force_fd_rel: f64,
    pub reduction_rel: f64,
    pub pointwise_rel: f64,
    pub golden_abs: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            route_rel: tol::ROUTE_REL,
            coeff_rel: tol::COEFF_REL,
            stokes_rel: tol::STOKES_REL,
            maxwell_abs: tol::MAXWELL_ABS,
            lie_fd_abs: tol::LIE_FD_ABS,
            force_fd_rel: tol::FORCE_FD_REL,
            reduction_rel: tol::REDUCTION_REL,
            pointwise_rel: tol::POINTWISE_REL,
            golden_abs: tol::GOLDEN_ABS,
        }
    }
}

impl Tolerances {
    fn with_overrides(overrides: &ToleranceOverrides) -> Self {
        let d = Self::default();
        Self {
            route_rel: overrides.route_rel.unwrap_or(d.route_rel),
            coeff_rel: overrides.coeff_rel.unwrap_or(d.coeff_rel),
            stokes_rel: overrides.stokes_rel.unwrap_or(d.stokes_rel),
            maxwell_abs: overrides.maxwell_abs.unwrap_or(d.maxwell_abs),
            lie_fd_abs: overrides.lie_fd_abs.unwrap_or(d.lie_fd_abs),
            force_fd_rel: overrides.force_fd_rel.unwrap_or(d.force_fd_rel),
            reduction_rel: overrides.reduction_rel.unwrap_or(d.reduction_rel),
            pointwise_rel: overrides.pointwise_rel.unwrap_or(d.pointwise_rel),
            golden_abs: overrides.golden_abs.unwrap_or(d.golden_abs),
        }
    }
}

/// A validated scenario, ready to run.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub system: EDSystem,
    pub motion: Motion,
    pub region: Region,
    pub quad_order: usize,
    pub fd_step: f64,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub warnings: Vec<String>,
}

impl Scenario {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ScenarioFile = serde_json::from_str(text)?;
        Self::validate(file)
    }

    pub fn rule(&self) -> QuadratureRule {
        QuadratureRule::new(self.quad_order).expect("validated order")
    }

    pub fn velocity(&self) -> &VectorField {
        self.motion.velocity()
    }

    fn validate(file: ScenarioFile) -> Result<Self> {
        let n = file.n;
        let p = file.p;
        if n == 0 {
            return Err(Error::Scenario("dimension n must be >= 1".into()));
        }
        if p + 1 > n {
            return Err(Error::Scenario(format!(
                "potential degree must satisfy p <= n-1, got p = {p}, n = {n}"
            )));
        }

        let g = parse_maxwell_form(&file, n, p)?;
        if g.grade() != n - p - 1 {
            return Err(Error::Scenario(format!(
                "grade(g) must be n-p-1 = {} (got {})",
                n - p - 1,
                g.grade()
            )));
        }
        let alpha = parse_potential(&file, n, p)?;
        if alpha.grade() != p {
            return Err(Error::Scenario(format!(
                "grade(alpha) must be p = {p} (got {})",
                alpha.grade()
            )));
        }
        let system = EDSystem::new(n, p, g, alpha)?;

        let velocity = match &file.velocity {
            Some(comps) => parse_vector(comps, n, "velocity")?,
            None => {
                return Err(Error::Scenario("missing velocity field w".into()));
            }
        };
        let motion = match &file.second_order {
            Some(comps) => {
                Motion::with_second_order(velocity, parse_vector(comps, n, "second_order")?)?
            }
            None => Motion::linear(velocity),
        };

        let region_literal = file
            .region
            .as_ref()
            .ok_or_else(|| Error::Scenario("missing region".into()))?;
        let mut boxes = Vec::new();
        for b in &region_literal.boxes {
            if b.min.len() != n || b.max.len() != n {
                return Err(Error::Scenario(format!(
                    "region box must have {n} coordinates per corner"
                )));
            }
            boxes.push(BoxDomain::new(b.min.clone(), b.max.clone())?);
        }
        let region = Region::new(boxes)?;

        let quad_order = file.quad_order.unwrap_or(QuadratureRule::DEFAULT_ORDER);
        QuadratureRule::new(quad_order)?;
        let fd_step = file.fd_step.unwrap_or(tol::FORCE_FD_STEP);
        if !fd_step.is_finite() || fd_step <= 0.0 {
            return Err(Error::Scenario(format!(
                "fd_step must be positive, got {fd_step}"
            )));
        }

        let mut warnings = Vec::new();
        let max_degree = system
            .maxwell_form()
            .max_total_degree()
            .max(system.potential().max_total_degree())
            .max(
                motion
                    .velocity()
                    .components()
                    .iter()
                    .map(|c| c.total_degree())
                    .max()
                    .unwrap_or(0),
            );
        if max_degree > tol::DEGREE_WARN {
            warnings.push(format!(
                "total polynomial degree {max_degree} exceeds {}; pullbacks grow degree multiplicatively",
                tol::DEGREE_WARN
            ));
        }

        let tolerances = file
            .tolerances
            .as_ref()
            .map(Tolerances::with_overrides)
            .unwrap_or_default();

        Ok(Scenario {
            system,
            motion,
            region,
            quad_order,
            fd_step,
            seed: file.seed.unwrap_or(0),
            tolerances,
            warnings,
        })
    }
}

fn parse_poly(lit: &PolyLiteral, dim: usize, what: &str) -> Result<Polynomial> {
    let mut terms = Vec::new();
    for t in lit {
        if t.exp.len() != dim {
            return Err(Error::Scenario(format!(
                "{what}: exponent vector {:?} must have length {dim}",
                t.exp
            )));
        }
        terms.push((t.exp.clone(), t.coeff));
    }
    Polynomial::from_terms(dim, &terms)
}

fn parse_vector(lits: &[PolyLiteral], dim: usize, what: &str) -> Result<VectorField> {
    if lits.len() != dim {
        return Err(Error::Scenario(format!(
            "{what} must have {dim} components, got {}",
            lits.len()
        )));
    }
    let comps = lits
        .iter()
        .map(|l| parse_poly(l, dim, what))
        .collect::<Result<Vec<_>>>()?;
    VectorField::new(comps)
}

fn parse_index_key(key: &str) -> Result<Vec<usize>> {
    let inner = key
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| {
            Error::Scenario(format!("form key {key:?} must look like \"[i,j,...]\""))
        })?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::Scenario(format!("bad index {s:?} in form key {key:?}")))
        })
        .collect()
}

/// Parse a form literal; the grade is read off the keys themselves (falling
/// back to `default_grade` for an empty literal) so that grade-invariant
/// violations are reported by the scenario validator, not the parser.
fn parse_form(
    lit: &FormLiteral,
    dim: usize,
    default_grade: usize,
    what: &str,
) -> Result<DifferentialForm> {
    let grade = match lit.keys().next() {
        Some(key) => parse_index_key(key)?.len(),
        None => default_grade,
    };
    let mut form = DifferentialForm::zero(dim, grade);
    for (key, poly) in lit {
        let indices = parse_index_key(key)?;
        if indices.len() != grade {
            return Err(Error::Scenario(format!(
                "{what}: multi-index {key} has grade {} but other entries have grade {grade}",
                indices.len()
            )));
        }
        let coeff = parse_poly(poly, dim, what)?;
        let term = DifferentialForm::from_term(dim, &indices, coeff)
            .map_err(|e| Error::Scenario(format!("{what}: {e}")))?;
        form = form.try_add(&term)?;
    }
    Ok(form)
}

fn parse_maxwell_form(file: &ScenarioFile, n: usize, p: usize) -> Result<DifferentialForm> {
    let given: usize = [
        file.g.is_some(),
        file.d_proxy.is_some(),
        file.h_proxy.is_some(),
    ]
    .iter()
    .filter(|b| **b)
    .count();
    if given != 1 {
        return Err(Error::Scenario(
            "exactly one of g, d_proxy, h_proxy must be given".into(),
        ));
    }
    if let Some(lit) = &file.g {
        return parse_form(lit, n, n - p - 1, "g");
    }
    if let Some(d) = &file.d_proxy {
        if n != 3 || p != 0 {
            return Err(Error::Scenario(
                "d_proxy requires n = 3 and p = 0 (g = D ⌟ dV)".into(),
            ));
        }
        return r3::proxy_to_2form(&parse_vector(d, 3, "d_proxy")?);
    }
    let h = file.h_proxy.as_ref().expect("counted above");
    if n != 3 || p != 1 {
        return Err(Error::Scenario(
            "h_proxy requires n = 3 and p = 1 (g = H^flat)".into(),
        ));
    }
    r3::flat(&parse_vector(h, 3, "h_proxy")?)
}

fn parse_potential(file: &ScenarioFile, n: usize, p: usize) -> Result<DifferentialForm> {
    let given: usize = [
        file.alpha.is_some(),
        file.alpha_scalar.is_some(),
        file.alpha_proxy.is_some(),
    ]
    .iter()
    .filter(|b| **b)
    .count();
    if given != 1 {
        return Err(Error::Scenario(
            "exactly one of alpha, alpha_scalar, alpha_proxy must be given".into(),
        ));
    }
    if let Some(lit) = &file.alpha {
        return parse_form(lit, n, p, "alpha");
    }
    if let Some(lit) = &file.alpha_scalar {
        if p != 0 {
            return Err(Error::Scenario("alpha_scalar requires p = 0".into()));
        }
        return Ok(DifferentialForm::from_scalar(parse_poly(
            lit,
            n,
            "alpha_scalar",
        )?));
    }
    let a = file.alpha_proxy.as_ref().expect("counted above");
    if n != 3 || p != 1 {
        return Err(Error::Scenario(
            "alpha_proxy requires n = 3 and p = 1 (alpha = (α♯)^flat)".into(),
        ));
    }
    r3::flat(&parse_vector(a, 3, "alpha_proxy")?)
}
