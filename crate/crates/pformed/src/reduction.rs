//! Vector-calculus reductions of the force and transported-energy
//! functionals in R^3, with term-by-term decompositions (Lorentz, Kelvin,
//! stress, pressure, ...) and the pointwise integrand identity check.
//!
//! Electrostatics (potential degree 0, fields D and scalar α):
//!   charge_term   ∫ ρ E·w dV              with ρ = ∇·D
//!   dipole_term   ∫ D_j E_{j,i} w_i dV
//!   stress_term   ∫ E_i D_j w_{i,j} dV
//!   boundary_form ∫_{∂Ω} E_i D_j ν_j w_i dA
//! The first three sum to the boundary form. With E = +∇α the sum equals the
//! coordinate-free force (F = +dP/dt); with E = −∇α every term flips sign,
//! giving the opposite force convention F = −dP/dt.
//!
//! Magnetostatics (potential degree 1, fields H and α♯, J = ∇×H, B = ∇×α♯):
//!   lorentz        ∫ (J×B)·w
//!   grad_alpha     ∫ J_k α_{i,k} w_i
//!   current_stress ∫ J_j α_i w_{i,j}
//!   hb_stress      ∫ H_i B_j w_{i,j}
//!   kelvin        −∫ H_j B_{j,k} w_k
//!   pressure      −∫ H_j B_j w_{k,k}
//! The total equals the coordinate-free p = 1 force.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exterior::VectorField;
use crate::flows::{lie_derivative, Motion};
use crate::poly::Polynomial;
use crate::quadrature::{
    integrate_boundary, integrate_point_fn, integrate_scalar, QuadratureRule, Region,
};
use crate::r3;
use crate::tol;

/// Sign convention for the electric field derived from the potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElectricConvention {
    /// E = +∇α (the convention of the general p-form layer).
    GradAlpha,
    /// E = −∇α (the classical electrostatic convention).
    MinusGradAlpha,
}

impl ElectricConvention {
    fn field(&self, alpha: &Polynomial) -> VectorField {
        let grad = VectorField::gradient(alpha);
        match self {
            ElectricConvention::GradAlpha => grad,
            ElectricConvention::MinusGradAlpha => grad.scaled(-1.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElectrostaticTerms {
    pub charge: f64,
    pub dipole: f64,
    pub stress: f64,
    pub boundary: f64,
}

impl ElectrostaticTerms {
    /// Sum of the three interior terms; equals `boundary` identically.
    pub fn interior_sum(&self) -> f64 {
        self.charge + self.dipole + self.stress
    }

    pub fn as_map(&self) -> BTreeMap<String, f64> {
        BTreeMap::from([
            ("charge_term".to_string(), self.charge),
            ("dipole_term".to_string(), self.dipole),
            ("stress_term".to_string(), self.stress),
            ("boundary_form".to_string(), self.boundary),
        ])
    }

    pub fn scale(&self) -> f64 {
        tol::scale_of(&[self.charge, self.dipole, self.stress, self.boundary])
    }
}

fn expect_dim3_fields(dims: &[usize]) -> Result<()> {
    for &d in dims {
        if d != 3 {
            return Err(Error::DimensionMismatch { expected: 3, got: d });
        }
    }
    Ok(())
}

/// Electrostatic force decomposition for fields D, potential α and virtual
/// velocity w on a region of R^3.
pub fn electrostatic_force_terms(
    d_field: &VectorField,
    alpha: &Polynomial,
    w: &VectorField,
    region: &Region,
    rule: &QuadratureRule,
    convention: ElectricConvention,
) -> Result<ElectrostaticTerms> {
    expect_dim3_fields(&[d_field.dim(), alpha.dim(), w.dim(), region.dim()])?;
    let e_field = convention.field(alpha);
    let rho = r3::div(d_field)?;

    // ∫ ρ E·w
    let charge_density = &rho * &r3::dot(&e_field, w)?;
    let charge = integrate_exact(&charge_density, region, rule)?;

    // ∫ D_j E_{j,i} w_i
    let mut dipole_density = Polynomial::zero(3);
    for j in 1..=3 {
        for i in 1..=3 {
            let de = d_field.component(j) * &e_field.component(j).partial(i)?;
            dipole_density = &dipole_density + &(&de * w.component(i));
        }
    }
    let dipole = integrate_exact(&dipole_density, region, rule)?;

    // ∫ E_i D_j w_{i,j}
    let mut stress_density = Polynomial::zero(3);
    for i in 1..=3 {
        for j in 1..=3 {
            let ed = e_field.component(i) * d_field.component(j);
            stress_density = &stress_density + &(&ed * &w.component(i).partial(j)?);
        }
    }
    let stress = integrate_exact(&stress_density, region, rule)?;

    // ∫_{∂Ω} E_i D_j ν_j w_i dA = ∫_{∂Ω} ((E·w) D) ⌟ dV
    let e_dot_w = r3::dot(&e_field, w)?;
    let flux_vector =
        VectorField::new((1..=3).map(|j| d_field.component(j) * &e_dot_w).collect())?;
    let flux_form = r3::proxy_to_2form(&flux_vector)?;
    let boundary = integrate_boundary(&flux_form, region, &rule.raised_for(&flux_form))?;

    Ok(ElectrostaticTerms {
        charge,
        dipole,
        stress,
        boundary,
    })
}

fn integrate_exact(f: &Polynomial, region: &Region, rule: &QuadratureRule) -> Result<f64> {
    integrate_scalar(f, region, &rule.raised_for_degree(f.max_axis_degree()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagnetostaticTerms {
    pub lorentz: f64,
    pub grad_alpha: f64,
    pub current_stress: f64,
    pub hb_stress: f64,
    pub kelvin: f64,
    pub pressure: f64,
}

impl MagnetostaticTerms {
    pub fn total(&self) -> f64 {
        self.lorentz + self.grad_alpha + self.current_stress + self.hb_stress + self.kelvin
            + self.pressure
    }

    pub fn as_map(&self) -> BTreeMap<String, f64> {
        BTreeMap::from([
            ("lorentz".to_string(), self.lorentz),
            ("grad_alpha".to_string(), self.grad_alpha),
            ("current_stress".to_string(), self.current_stress),
            ("hb_stress".to_string(), self.hb_stress),
            ("kelvin".to_string(), self.kelvin),
            ("pressure".to_string(), self.pressure),
        ])
    }

    pub fn scale(&self) -> f64 {
        tol::scale_of(&[
            self.lorentz,
            self.grad_alpha,
            self.current_stress,
            self.hb_stress,
            self.kelvin,
            self.pressure,
        ])
    }
}

/// Magnetostatic force decomposition for magnetization H, vector potential
/// α♯ and virtual velocity w; J = ∇×H and B = ∇×α♯ are derived.
pub fn magnetostatic_force_terms(
    h_field: &VectorField,
    alpha_sharp: &VectorField,
    w: &VectorField,
    region: &Region,
    rule: &QuadratureRule,
) -> Result<MagnetostaticTerms> {
    expect_dim3_fields(&[h_field.dim(), alpha_sharp.dim(), w.dim(), region.dim()])?;
    let j_field = r3::curl(h_field)?;
    let b_field = r3::curl(alpha_sharp)?;

    let lorentz_density = r3::dot(&r3::cross(&j_field, &b_field)?, w)?;
    let lorentz = integrate_exact(&lorentz_density, region, rule)?;

    let mut grad_alpha_density = Polynomial::zero(3);
    for k in 1..=3 {
        for i in 1..=3 {
            let t = j_field.component(k) * &alpha_sharp.component(i).partial(k)?;
            grad_alpha_density = &grad_alpha_density + &(&t * w.component(i));
        }
    }
    let grad_alpha = integrate_exact(&grad_alpha_density, region, rule)?;

    let mut current_stress_density = Polynomial::zero(3);
    for j in 1..=3 {
        for i in 1..=3 {
            let t = j_field.component(j) * alpha_sharp.component(i);
            current_stress_density = &current_stress_density + &(&t * &w.component(i).partial(j)?);
        }
    }
    let current_stress = integrate_exact(&current_stress_density, region, rule)?;

    let mut hb_stress_density = Polynomial::zero(3);
    for i in 1..=3 {
        for j in 1..=3 {
            let t = h_field.component(i) * b_field.component(j);
            hb_stress_density = &hb_stress_density + &(&t * &w.component(i).partial(j)?);
        }
    }
    let hb_stress = integrate_exact(&hb_stress_density, region, rule)?;

    let mut kelvin_density = Polynomial::zero(3);
    for j in 1..=3 {
        for k in 1..=3 {
            let t = h_field.component(j) * &b_field.component(j).partial(k)?;
            kelvin_density = &kelvin_density + &(&t * w.component(k));
        }
    }
    let kelvin = -integrate_exact(&kelvin_density, region, rule)?;

    let mut div_w = Polynomial::zero(3);
    for k in 1..=3 {
        div_w = &div_w + &w.component(k).partial(k)?;
    }
    let pressure_density = &r3::dot(h_field, &b_field)? * &div_w;
    let pressure = -integrate_exact(&pressure_density, region, rule)?;

    Ok(MagnetostaticTerms {
        lorentz,
        grad_alpha,
        current_stress,
        hb_stress,
        kelvin,
        pressure,
    })
}

/// Pointwise identity between the exterior power density of the p = 1 force
/// and its vector-calculus expansion:
///   density(d(g ∧ L_w α)) = J_k α_{k,l} w_l − H_j B_{j,l} w_l
///                           + H_j B_i w_{j,i} − H_j B_j w_{i,i} + J_k α_l w_{l,k}
/// evaluated at the sample points; returns the largest absolute difference.
pub fn magnetostatic_pointwise_residual(
    h_field: &VectorField,
    alpha_sharp: &VectorField,
    w: &VectorField,
    points: &[Vec<f64>],
) -> Result<f64> {
    expect_dim3_fields(&[h_field.dim(), alpha_sharp.dim(), w.dim()])?;
    let g = r3::flat(h_field)?;
    let alpha = r3::flat(alpha_sharp)?;
    let lhs = r3::density_of_3form(&g.wedge(&lie_derivative(w, &alpha)?)?.d())?;

    let j_field = r3::curl(h_field)?;
    let b_field = r3::curl(alpha_sharp)?;
    let mut rhs = Polynomial::zero(3);
    for k in 1..=3 {
        for l in 1..=3 {
            // J_k α_{k,l} w_l
            let t = j_field.component(k) * &alpha_sharp.component(k).partial(l)?;
            rhs = &rhs + &(&t * w.component(l));
            // J_k α_l w_{l,k}
            let t = j_field.component(k) * alpha_sharp.component(l);
            rhs = &rhs + &(&t * &w.component(l).partial(k)?);
        }
    }
    for j in 1..=3 {
        for l in 1..=3 {
            // −H_j B_{j,l} w_l
            let t = h_field.component(j) * &b_field.component(j).partial(l)?;
            rhs = &rhs - &(&t * w.component(l));
        }
        for i in 1..=3 {
            // H_j B_i w_{j,i}
            let t = h_field.component(j) * b_field.component(i);
            rhs = &rhs + &(&t * &w.component(j).partial(i)?);
        }
    }
    let hb = r3::dot(h_field, &b_field)?;
    let mut div_w = Polynomial::zero(3);
    for i in 1..=3 {
        div_w = &div_w + &w.component(i).partial(i)?;
    }
    rhs = &rhs - &(&hb * &div_w);

    let diff = &lhs - &rhs;
    let mut worst = 0.0f64;
    for x in points {
        worst = worst.max(diff.eval(x)?.abs());
    }
    Ok(worst)
}

/// Transported electrostatic energy at finite t:
///   P(t) = ∫ ρ α(ψ_t(x)) dV − ∫ ψ_{ti,j} D_j E_i(ψ_t(x)) dV,  E = −∇α,
/// with ρ = ∇·D. Equals [`crate::ed::energy_under_motion`] of the
/// corresponding degree-0 system; everything here stays polynomial.
pub fn transported_energy_p0(
    d_field: &VectorField,
    alpha: &Polynomial,
    region: &Region,
    motion: &Motion,
    t: f64,
    rule: &QuadratureRule,
) -> Result<f64> {
    expect_dim3_fields(&[d_field.dim(), alpha.dim(), motion.dim(), region.dim()])?;
    let psi = motion.at(t);
    check_jacobian_positive(&psi, region, rule)?;

    let rho = r3::div(d_field)?;
    let alpha_moved = alpha.compose(psi.components())?;
    let charge_part = &rho * &alpha_moved;

    let e_field = VectorField::gradient(alpha).scaled(-1.0);
    let jac = psi.jacobian_matrix();
    let mut field_part = Polynomial::zero(3);
    for i in 1..=3 {
        let e_moved = e_field.component(i).compose(psi.components())?;
        for j in 1..=3 {
            let t = &jac[i - 1][j - 1] * d_field.component(j);
            field_part = &field_part + &(&t * &e_moved);
        }
    }
    let density = &charge_part - &field_part;
    integrate_exact(&density, region, rule)
}

/// Transported magnetostatic energy at finite t:
///   P(t) = ∫ ψ_{ti,k} J_k α_i(ψ_t(x)) dV − ∫ H_j (Dψ_t)⁻¹_{ji} B_i(ψ_t(x)) det(Dψ_t) dV
/// with J = ∇×H and B = ∇×α♯. The second integrand is rational (inverse
/// Jacobian), inverted numerically per quadrature point with a positivity and
/// condition check; the supplied rule is used as given.
pub fn transported_energy_p1(
    h_field: &VectorField,
    alpha_sharp: &VectorField,
    region: &Region,
    motion: &Motion,
    t: f64,
    rule: &QuadratureRule,
) -> Result<f64> {
    expect_dim3_fields(&[h_field.dim(), alpha_sharp.dim(), motion.dim(), region.dim()])?;
    let psi = motion.at(t);
    let j_field = r3::curl(h_field)?;
    let b_field = r3::curl(alpha_sharp)?;

    // polynomial current part
    let jac = psi.jacobian_matrix();
    let mut current_part = Polynomial::zero(3);
    for i in 1..=3 {
        let alpha_moved = alpha_sharp.component(i).compose(psi.components())?;
        for k in 1..=3 {
            let t = &jac[i - 1][k - 1] * j_field.component(k);
            current_part = &current_part + &(&t * &alpha_moved);
        }
    }
    let deg = current_part.max_axis_degree();
    let current_total = integrate_scalar(&current_part, region, &rule.raised_for_degree(deg))?;

    // rational magnetization part, per quadrature point
    let field_total = integrate_point_fn(region, rule, |x| {
        let m = psi.jacobian_at(x)?;
        let det = det3(&m);
        if !det.is_finite() || det <= 0.0 {
            return Err(Error::NonpositiveJacobian {
                point: x.to_vec(),
                value: det,
            });
        }
        let inv = invert3(&m, det);
        let cond = norm_inf3(&m) * norm_inf3(&inv);
        if cond > tol::JACOBIAN_COND_MAX {
            return Err(Error::IllConditionedJacobian {
                point: x.to_vec(),
                condition: cond,
            });
        }
        let moved = psi.eval(x)?;
        let h = h_field.eval(x)?;
        let b = b_field.eval(&moved)?;
        let mut acc = 0.0;
        for j in 0..3 {
            for i in 0..3 {
                acc += h[j] * inv[j][i] * b[i];
            }
        }
        Ok(acc * det)
    })?;

    Ok(current_total - field_total)
}

fn check_jacobian_positive(
    psi: &crate::flows::SmoothMap,
    region: &Region,
    rule: &QuadratureRule,
) -> Result<()> {
    let det = psi.jacobian_det();
    integrate_point_fn(region, rule, |x| {
        let v = det.eval(x)?;
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::NonpositiveJacobian {
                point: x.to_vec(),
                value: v,
            });
        }
        Ok(0.0)
    })?;
    Ok(())
}

fn det3(m: &[Vec<f64>]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn invert3(m: &[Vec<f64>], det: f64) -> Vec<Vec<f64>> {
    let c = |r1: usize, c1: usize, r2: usize, c2: usize| m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1];
    let adj = [
        [c(1, 1, 2, 2), -c(0, 1, 2, 2), c(0, 1, 1, 2)],
        [-c(1, 0, 2, 2), c(0, 0, 2, 2), -c(0, 0, 1, 2)],
        [c(1, 0, 2, 1), -c(0, 0, 2, 1), c(0, 0, 1, 1)],
    ];
    adj.iter()
        .map(|row| row.iter().map(|v| v / det).collect())
        .collect()
}

fn norm_inf3(m: &[Vec<f64>]) -> f64 {
    m.iter()
        .map(|row| row.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ed::EDSystem;
    use crate::exterior::DifferentialForm;
    use crate::ed::{energy, energy_under_motion};
    use crate::flows::sample_points;
    use crate::force::force;
    use crate::rng::{random_polynomial, random_vector_field, Rng};

    fn x(i: usize) -> Polynomial {
        Polynomial::var(3, i)
    }

    fn unit_region() -> Region {
        Region::unit_box(3)
    }

    #[test]
    fn electrostatic_hand_terms() {
        // D = (1,0,0), α = x1²/2, w = e1, E = −∇α: terms (0, −1, 0), boundary −1
        let d = VectorField::constant(&[1.0, 0.0, 0.0]);
        let alpha = x(1).pow(2).scaled(0.5);
        let w = VectorField::constant(&[1.0, 0.0, 0.0]);
        let terms = electrostatic_force_terms(
            &d,
            &alpha,
            &w,
            &unit_region(),
            &QuadratureRule::default(),
            ElectricConvention::MinusGradAlpha,
        )
        .unwrap();
        assert!(terms.charge.abs() < 1e-13);
        assert!((terms.dipole + 1.0).abs() < 1e-13);
        assert!(terms.stress.abs() < 1e-13);
        assert!((terms.boundary + 1.0).abs() < 1e-13);
        assert!(tol::within(terms.interior_sum(), terms.boundary, tol::ROUTE_REL));
    }

    #[test]
    fn divergence_free_displacement_has_no_charge_term() {
        let mut rng = Rng::new(83);
        // D = curl of something is divergence-free
        let d = r3::curl(&random_vector_field(&mut rng, 3, 3)).unwrap();
        let alpha = random_polynomial(&mut rng, 3, 3, 4);
        let w = random_vector_field(&mut rng, 3, 2);
        let terms = electrostatic_force_terms(
            &d,
            &alpha,
            &w,
            &unit_region(),
            &QuadratureRule::default(),
            ElectricConvention::MinusGradAlpha,
        )
        .unwrap();
        assert!(terms.charge.abs() < 1e-12);
    }

    #[test]
    fn uniform_potential_leaves_only_charge_coupling() {
        // α constant: E = 0, so dipole and stress vanish and charge term is 0
        let mut rng = Rng::new(89);
        let d = random_vector_field(&mut rng, 3, 3);
        let alpha = Polynomial::constant(3, 2.5);
        let w = random_vector_field(&mut rng, 3, 2);
        let terms = electrostatic_force_terms(
            &d,
            &alpha,
            &w,
            &unit_region(),
            &QuadratureRule::default(),
            ElectricConvention::MinusGradAlpha,
        )
        .unwrap();
        assert_eq!(terms.dipole, 0.0);
        assert_eq!(terms.stress, 0.0);
        assert_eq!(terms.charge, 0.0);
    }

    #[test]
    fn electrostatic_sign_map_against_general_force() {
        // sum with E = +∇α equals +F; with E = −∇α equals −F
        let mut rng = Rng::new(97);
        let d = random_vector_field(&mut rng, 3, 3);
        let alpha = random_polynomial(&mut rng, 3, 3, 4);
        let w = random_vector_field(&mut rng, 3, 3);
        let region = unit_region();
        let q = QuadratureRule::default();

        let sys = EDSystem::new(
            3,
            0,
            r3::proxy_to_2form(&d).unwrap(),
            DifferentialForm::from_scalar(alpha.clone()),
        )
        .unwrap();
        let general = force(&sys, &region, &w, &q).unwrap().cartan;

        let plus = electrostatic_force_terms(&d, &alpha, &w, &region, &q, ElectricConvention::GradAlpha)
            .unwrap();
        let minus =
            electrostatic_force_terms(&d, &alpha, &w, &region, &q, ElectricConvention::MinusGradAlpha)
                .unwrap();
        assert!(tol::within(plus.interior_sum(), general, tol::REDUCTION_REL));
        assert!(tol::within(minus.interior_sum(), -general, tol::REDUCTION_REL));
        assert!(tol::within(plus.interior_sum(), plus.boundary, tol::ROUTE_REL));
        assert!(tol::within(minus.interior_sum(), minus.boundary, tol::ROUTE_REL));
    }

    #[test]
    fn boundary_form_vanishes_when_field_does() {
        // ∇α = 0 on every face ⇒ the boundary form (and the term sum) vanish
        let mut rng = Rng::new(91);
        let one = Polynomial::constant(3, 1.0);
        let bump = (1..=3)
            .map(|i| &x(i) * &(&one - &x(i)))
            .fold(one.clone(), |acc, f| &acc * &f);
        let alpha = &bump * &bump;
        let d = random_vector_field(&mut rng, 3, 2);
        let w = random_vector_field(&mut rng, 3, 2);
        let terms = electrostatic_force_terms(
            &d,
            &alpha,
            &w,
            &unit_region(),
            &QuadratureRule::default(),
            ElectricConvention::MinusGradAlpha,
        )
        .unwrap();
        assert!(terms.boundary.abs() < 1e-12, "{terms:?}");
        assert!(terms.interior_sum().abs() < 1e-10, "{terms:?}");
    }

    #[test]
    fn magnetostatic_hand_terms() {
        // H = (0,0,1), α♯ = (0,x1,0), w = (x1,0,0): only pressure survives, total −1
        let h = VectorField::constant(&[0.0, 0.0, 1.0]);
        let a = VectorField::new(vec![Polynomial::zero(3), x(1), Polynomial::zero(3)]).unwrap();
        let w = VectorField::new(vec![x(1), Polynomial::zero(3), Polynomial::zero(3)]).unwrap();
        let terms =
            magnetostatic_force_terms(&h, &a, &w, &unit_region(), &QuadratureRule::default()).unwrap();
        assert_eq!(terms.lorentz, 0.0);
        assert_eq!(terms.grad_alpha, 0.0);
        assert_eq!(terms.current_stress, 0.0);
        assert_eq!(terms.hb_stress, 0.0);
        assert_eq!(terms.kelvin, 0.0);
        assert!((terms.pressure + 1.0).abs() < 1e-13);
        assert!((terms.total() + 1.0).abs() < 1e-13);
    }

    #[test]
    fn term_names_are_stable() {
        let mut rng = Rng::new(73);
        let h = random_vector_field(&mut rng, 3, 2);
        let a = random_vector_field(&mut rng, 3, 2);
        let w = random_vector_field(&mut rng, 3, 2);
        let q = QuadratureRule::default();
        let m = magnetostatic_force_terms(&h, &a, &w, &unit_region(), &q)
            .unwrap()
            .as_map();
        let keys: Vec<&str> = m.keys().map(|k| k.as_str()).collect();
        assert_eq!(
            keys,
            ["current_stress", "grad_alpha", "hb_stress", "kelvin", "lorentz", "pressure"]
        );
        let d = random_vector_field(&mut rng, 3, 2);
        let alpha = random_polynomial(&mut rng, 3, 2, 3);
        let e = electrostatic_force_terms(
            &d,
            &alpha,
            &w,
            &unit_region(),
            &q,
            ElectricConvention::MinusGradAlpha,
        )
        .unwrap()
        .as_map();
        let keys: Vec<&str> = e.keys().map(|k| k.as_str()).collect();
        assert_eq!(
            keys,
            ["boundary_form", "charge_term", "dipole_term", "stress_term"]
        );
    }

    #[test]
    fn zero_velocity_zeroes_all_terms() {
        let mut rng = Rng::new(101);
        let h = random_vector_field(&mut rng, 3, 3);
        let a = random_vector_field(&mut rng, 3, 3);
        let terms = magnetostatic_force_terms(
            &h,
            &a,
            &VectorField::zero(3),
            &unit_region(),
            &QuadratureRule::default(),
        )
        .unwrap();
        assert_eq!(terms.total(), 0.0);
    }

    #[test]
    fn magnetostatic_total_matches_general_force() {
        let mut rng = Rng::new(103);
        let h = random_vector_field(&mut rng, 3, 3);
        let a = random_vector_field(&mut rng, 3, 3);
        let w = random_vector_field(&mut rng, 3, 3);
        let region = unit_region();
        let q = QuadratureRule::default();
        let terms = magnetostatic_force_terms(&h, &a, &w, &region, &q).unwrap();
        let sys = EDSystem::new(3, 1, r3::flat(&h).unwrap(), r3::flat(&a).unwrap()).unwrap();
        let general = force(&sys, &region, &w, &q).unwrap().cartan;
        assert!(
            tol::within(terms.total(), general, tol::REDUCTION_REL),
            "{} vs {general}",
            terms.total()
        );
    }

    #[test]
    fn half_lorentz_from_rotation_potential() {
        // uniform B with α♯ = ½ B×x and uniform J with H = ½ J×x, constant w:
        // the grad_alpha term is −½ (J×B)·w · vol
        let b = VectorField::constant(&[1.0, 2.0, 3.0]);
        let j = VectorField::constant(&[4.0, 5.0, 6.0]);
        let half_cross = |v: &VectorField| {
            let pos = VectorField::new(vec![x(1), x(2), x(3)]).unwrap();
            r3::cross(v, &pos).unwrap().scaled(0.5)
        };
        let a = half_cross(&b);
        let h = half_cross(&j);
        assert_eq!(r3::curl(&a).unwrap(), b);
        assert_eq!(r3::curl(&h).unwrap(), j);
        let w = VectorField::constant(&[7.0, -8.0, 9.0]);
        let terms =
            magnetostatic_force_terms(&h, &a, &w, &unit_region(), &QuadratureRule::default()).unwrap();
        let jxb_dot_w = r3::dot(&r3::cross(&j, &b).unwrap(), &w)
            .unwrap()
            .eval(&[0.0; 3])
            .unwrap();
        let expect = -0.5 * jxb_dot_w;
        assert!(
            (terms.grad_alpha - expect).abs() <= tol::GOLDEN_ABS * tol::scale_of(&[expect]),
            "{} vs {expect}",
            terms.grad_alpha
        );
    }

    #[test]
    fn pointwise_identity_on_random_fields() {
        let mut rng = Rng::new(107);
        let pts = sample_points(3, tol::SAMPLE_COUNT);
        for _ in 0..5 {
            let h = random_vector_field(&mut rng, 3, 3);
            let a = random_vector_field(&mut rng, 3, 3);
            let w = random_vector_field(&mut rng, 3, 3);
            let r = magnetostatic_pointwise_residual(&h, &a, &w, &pts).unwrap();
            assert!(r <= tol::POINTWISE_REL, "residual {r}");
        }
    }

    #[test]
    fn pointwise_identity_degenerate_fields() {
        let mut rng = Rng::new(109);
        let pts = sample_points(3, tol::SAMPLE_COUNT);
        let a = random_vector_field(&mut rng, 3, 3);
        let w = random_vector_field(&mut rng, 3, 3);
        let zero = VectorField::zero(3);
        assert!(magnetostatic_pointwise_residual(&zero, &a, &w, &pts).unwrap() <= tol::POINTWISE_REL);
        let h = random_vector_field(&mut rng, 3, 3);
        assert_eq!(
            magnetostatic_pointwise_residual(&h, &zero, &w, &pts).unwrap(),
            0.0
        );
    }

    #[test]
    fn transported_p0_at_zero_is_static_energy() {
        let mut rng = Rng::new(113);
        let d = random_vector_field(&mut rng, 3, 3);
        let alpha = random_polynomial(&mut rng, 3, 3, 4);
        let motion = Motion::linear(random_vector_field(&mut rng, 3, 2));
        let region = unit_region();
        let q = QuadratureRule::default();
        let at_zero = transported_energy_p0(&d, &alpha, &region, &motion, 0.0, &q).unwrap();
        let sys = EDSystem::new(
            3,
            0,
            r3::proxy_to_2form(&d).unwrap(),
            DifferentialForm::from_scalar(alpha),
        )
        .unwrap();
        let stat = energy(&sys, &region, &q).unwrap().split;
        assert!(tol::within(at_zero, stat, tol::ROUTE_REL));
    }

    #[test]
    fn transported_p0_translation_of_constant_fields() {
        // constant D and constant ∇α: the energy varies only through α∘ψ_t
        let d = VectorField::constant(&[2.0, 0.0, 0.0]);
        let alpha = x(1); // E = (−1, 0, 0)
        let motion = Motion::linear(VectorField::constant(&[1.0, 0.0, 0.0]));
        let region = unit_region();
        let q = QuadratureRule::default();
        // ρ = 0, so P(t) = ∫ ψ_{ti,j} D_j (∇α)_i(ψ_t) dV = 2·vol = 2 for every t
        for &t in &[0.0, 0.1, 0.3] {
            let p = transported_energy_p0(&d, &alpha, &region, &motion, t, &q).unwrap();
            assert!((p - 2.0).abs() < 1e-12, "t={t}: {p}");
        }
    }

    #[test]
    fn transported_p0_matches_pform_route() {
        let mut rng = Rng::new(127);
        let d = random_vector_field(&mut rng, 3, 3);
        let alpha = random_polynomial(&mut rng, 3, 3, 4);
        let motion = Motion::linear(random_vector_field(&mut rng, 3, 2));
        let region = unit_region();
        let q = QuadratureRule::default();
        let sys = EDSystem::new(
            3,
            0,
            r3::proxy_to_2form(&d).unwrap(),
            DifferentialForm::from_scalar(alpha.clone()),
        )
        .unwrap();
        for &t in &[0.0, 0.05, 0.2] {
            let oracle = transported_energy_p0(&d, &alpha, &region, &motion, t, &q).unwrap();
            let pform = energy_under_motion(&sys, &region, &motion, t, &q).unwrap();
            assert!(tol::within(oracle, pform, tol::REDUCTION_REL), "t={t}");
        }
    }

    #[test]
    fn transported_p1_at_zero_is_static_energy() {
        let mut rng = Rng::new(131);
        let h = random_vector_field(&mut rng, 3, 3);
        let a = random_vector_field(&mut rng, 3, 3);
        let motion = Motion::linear(random_vector_field(&mut rng, 3, 2));
        let region = unit_region();
        let q = QuadratureRule::new(12).unwrap();
        let at_zero = transported_energy_p1(&h, &a, &region, &motion, 0.0, &q).unwrap();
        let sys = EDSystem::new(3, 1, r3::flat(&h).unwrap(), r3::flat(&a).unwrap()).unwrap();
        let stat = energy(&sys, &region, &q).unwrap().split;
        assert!(tol::within(at_zero, stat, tol::ROUTE_REL));
    }

    #[test]
    fn transported_p1_matches_pform_route() {
        let mut rng = Rng::new(137);
        let h = random_vector_field(&mut rng, 3, 3);
        let a = random_vector_field(&mut rng, 3, 3);
        let motion = Motion::linear(random_vector_field(&mut rng, 3, 2));
        let region = unit_region();
        let q = QuadratureRule::new(14).unwrap();
        let sys = EDSystem::new(3, 1, r3::flat(&h).unwrap(), r3::flat(&a).unwrap()).unwrap();
        for &t in &[0.01, 0.05] {
            let oracle = transported_energy_p1(&h, &a, &region, &motion, t, &q).unwrap();
            let pform = energy_under_motion(&sys, &region, &motion, t, &q).unwrap();
            assert!(
                tol::within(oracle, pform, tol::REDUCTION_REL),
                "t={t}: {oracle} vs {pform}"
            );
        }
    }

    #[test]
    fn near_singular_jacobian_is_rejected() {
        // ψ_t squeezes the third axis to 1e-9 of its size: det stays positive
        // but the condition number crosses the 1e8 rejection threshold
        let h = VectorField::constant(&[0.0, 0.0, 1.0]);
        let a = VectorField::new(vec![Polynomial::zero(3), x(1), Polynomial::zero(3)]).unwrap();
        let squeeze = Motion::linear(
            VectorField::new(vec![
                Polynomial::zero(3),
                Polynomial::zero(3),
                x(3).scaled(-2.0 * (1.0 - 1e-9)),
            ])
            .unwrap(),
        );
        let err = transported_energy_p1(
            &h,
            &a,
            &unit_region(),
            &squeeze,
            0.5,
            &QuadratureRule::default(),
        );
        assert!(matches!(err, Err(Error::IllConditionedJacobian { .. })), "{err:?}");
    }

    #[test]
    fn folding_motion_is_rejected() {
        // ψ_t(x) = x − t·3x folds the box for t large enough that 1 − 3t ≤ 0
        let d = VectorField::constant(&[1.0, 0.0, 0.0]);
        let alpha = x(1);
        let squeeze = Motion::linear(
            VectorField::new(vec![x(1).scaled(-3.0), x(2).scaled(-3.0), x(3).scaled(-3.0)]).unwrap(),
        );
        let err = transported_energy_p0(
            &d,
            &alpha,
            &unit_region(),
            &squeeze,
            0.5,
            &QuadratureRule::default(),
        );
        assert!(matches!(err, Err(Error::NonpositiveJacobian { .. })));
    }
}
