//! The dictionary between exterior calculus in R^3 and classical vector
//! analysis: sharp/flat with the Euclidean identity metric, the vector proxy
//! of a 2-form (γ = γ̄ ⌟ dV), densities of 3-forms, and grad/curl/div/cross.
//!
//! The Levi-Civita and Kronecker symbols are pure integer functions; no
//! tensor storage is involved.

use crate::error::{Error, Result};
use crate::exterior::{DifferentialForm, VectorField};
use crate::poly::Polynomial;

fn expect_dim3(dim: usize) -> Result<()> {
    if dim != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: dim,
        });
    }
    Ok(())
}

pub fn kronecker(i: usize, j: usize) -> i32 {
    (i == j) as i32
}

/// ε_{ijk} on 1-based indices; 0 on a repeated index.
pub fn levi_civita(i: usize, j: usize, k: usize) -> i32 {
    match (i, j, k) {
        (1, 2, 3) | (2, 3, 1) | (3, 1, 2) => 1,
        (3, 2, 1) | (1, 3, 2) | (2, 1, 3) => -1,
        _ => 0,
    }
}

/// α^♯: componentwise identification of a 1-form with a vector field.
pub fn sharp(omega: &DifferentialForm) -> Result<VectorField> {
    expect_dim3(omega.dim())?;
    if omega.grade() != 1 {
        return Err(Error::GradeMismatch {
            expected: 1,
            got: omega.grade(),
        });
    }
    VectorField::new(vec![
        omega.coeff_of(&[1]),
        omega.coeff_of(&[2]),
        omega.coeff_of(&[3]),
    ])
}

/// v^♭: inverse of [`sharp`].
pub fn flat(v: &VectorField) -> Result<DifferentialForm> {
    expect_dim3(v.dim())?;
    let mut out = DifferentialForm::zero(3, 1);
    for axis in 1..=3 {
        let term = DifferentialForm::from_term(3, &[axis], v.component(axis).clone())?;
        out = out.try_add(&term)?;
    }
    Ok(out)
}

/// The unique vector γ̄ with γ = γ̄ ⌟ dV, i.e. γ̄^l = ½ ε^{ljk} γ_{jk}.
pub fn proxy_of_2form(gamma: &DifferentialForm) -> Result<VectorField> {
    expect_dim3(gamma.dim())?;
    if gamma.grade() != 2 {
        return Err(Error::GradeMismatch {
            expected: 2,
            got: gamma.grade(),
        });
    }
    VectorField::new(vec![
        gamma.coeff_of(&[2, 3]),
        gamma.coeff_of(&[1, 3]).scaled(-1.0),
        gamma.coeff_of(&[1, 2]),
    ])
}

/// γ̄ ⌟ dV.
pub fn proxy_to_2form(v: &VectorField) -> Result<DifferentialForm> {
    expect_dim3(v.dim())?;
    DifferentialForm::volume(3).contract(v)
}

/// The density ρ with τ = ρ dV.
pub fn density_of_3form(tau: &DifferentialForm) -> Result<Polynomial> {
    expect_dim3(tau.dim())?;
    if tau.grade() != 3 {
        return Err(Error::GradeMismatch {
            expected: 3,
            got: tau.grade(),
        });
    }
    Ok(tau.coeff_of(&[1, 2, 3]))
}

pub fn grad(f: &Polynomial) -> Result<VectorField> {
    expect_dim3(f.dim())?;
    Ok(VectorField::gradient(f))
}

pub fn curl(v: &VectorField) -> Result<VectorField> {
    expect_dim3(v.dim())?;
    let p = |i: usize, j: usize| v.component(i).partial(j).expect("axis in range");
    VectorField::new(vec![
        &p(3, 2) - &p(2, 3),
        &p(1, 3) - &p(3, 1),
        &p(2, 1) - &p(1, 2),
    ])
}

pub fn div(v: &VectorField) -> Result<Polynomial> {
    expect_dim3(v.dim())?;
    let mut out = Polynomial::zero(3);
    for axis in 1..=3 {
        out = &out + &v.component(axis).partial(axis)?;
    }
    Ok(out)
}

pub fn cross(u: &VectorField, v: &VectorField) -> Result<VectorField> {
    expect_dim3(u.dim())?;
    expect_dim3(v.dim())?;
    let mut comps = vec![Polynomial::zero(3); 3];
    for i in 1..=3 {
        for j in 1..=3 {
            for k in 1..=3 {
                let eps = levi_civita(i, j, k);
                if eps != 0 {
                    let term = (u.component(j) * v.component(k)).scaled(eps as f64);
                    comps[i - 1] = &comps[i - 1] + &term;
                }
            }
        }
    }
    VectorField::new(comps)
}

/// u · v (valid in any dimension).
pub fn dot(u: &VectorField, v: &VectorField) -> Result<Polynomial> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            got: v.dim(),
        });
    }
    let mut out = Polynomial::zero(u.dim());
    for axis in 1..=u.dim() {
        out = &out + &(u.component(axis) * v.component(axis));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::coefficient_residual;
    use crate::rng::{random_polynomial, random_vector_field, Rng};

    fn x(i: usize) -> Polynomial {
        Polynomial::var(3, i)
    }

    #[test]
    fn sharp_examples() {
        let a = DifferentialForm::from_term(3, &[1], x(2)).unwrap();
        assert_eq!(
            sharp(&a).unwrap(),
            VectorField::new(vec![x(2), Polynomial::zero(3), Polynomial::zero(3)]).unwrap()
        );
        let dx3 = DifferentialForm::basis(3, &[3]).unwrap();
        assert_eq!(sharp(&dx3).unwrap(), VectorField::constant(&[0.0, 0.0, 1.0]));
        assert!(sharp(&DifferentialForm::zero(3, 1)).unwrap().is_zero());
    }

    #[test]
    fn sharp_rejects_wrong_grade() {
        let two_form = DifferentialForm::basis(3, &[1, 2]).unwrap();
        assert!(sharp(&two_form).is_err());
    }

    #[test]
    fn flat_inverts_sharp() {
        let mut rng = Rng::new(7);
        for _ in 0..10 {
            let v = random_vector_field(&mut rng, 3, 3);
            let back = sharp(&flat(&v).unwrap()).unwrap();
            assert_eq!(back, v);
        }
    }

    #[test]
    fn proxy_of_basis_two_forms() {
        let g23 = DifferentialForm::basis(3, &[2, 3]).unwrap();
        assert_eq!(
            proxy_of_2form(&g23).unwrap(),
            VectorField::constant(&[1.0, 0.0, 0.0])
        );
        let g12 = DifferentialForm::basis(3, &[1, 2]).unwrap();
        assert_eq!(
            proxy_of_2form(&g12).unwrap(),
            VectorField::constant(&[0.0, 0.0, 1.0])
        );
    }

    #[test]
    fn proxy_of_13_component_picks_up_sign() {
        // x1 dx1∧dx3 -> (0, −x1, 0), and the round trip γ̄ ⌟ dV reproduces γ.
        let g = DifferentialForm::from_term(3, &[1, 3], x(1)).unwrap();
        let v = proxy_of_2form(&g).unwrap();
        assert_eq!(
            v,
            VectorField::new(vec![Polynomial::zero(3), x(1).scaled(-1.0), Polynomial::zero(3)])
                .unwrap()
        );
        let back = proxy_to_2form(&v).unwrap();
        assert_eq!(coefficient_residual(&back, &g).unwrap(), 0.0);
    }

    #[test]
    fn proxy_round_trip_random() {
        let mut rng = Rng::new(11);
        for _ in 0..10 {
            let v = random_vector_field(&mut rng, 3, 3);
            let v2 = proxy_of_2form(&proxy_to_2form(&v).unwrap()).unwrap();
            assert_eq!(v2, v);
        }
    }

    #[test]
    fn density_examples() {
        let t = DifferentialForm::volume(3).scaled(5.0);
        assert_eq!(density_of_3form(&t).unwrap(), Polynomial::constant(3, 5.0));
        let t = DifferentialForm::volume(3).poly_scaled(&x(2)).unwrap();
        assert_eq!(density_of_3form(&t).unwrap(), x(2));
        // odd permutation dx2∧dx1∧dx3 -> density −1
        let t = DifferentialForm::from_term(3, &[2, 1, 3], Polynomial::constant(3, 1.0)).unwrap();
        assert_eq!(density_of_3form(&t).unwrap(), Polynomial::constant(3, -1.0));
    }

    #[test]
    fn curl_div_cross_examples() {
        let v = VectorField::new(vec![Polynomial::zero(3), x(1), Polynomial::zero(3)]).unwrap();
        assert_eq!(curl(&v).unwrap(), VectorField::constant(&[0.0, 0.0, 1.0]));

        let r = VectorField::new(vec![x(1), x(2), x(3)]).unwrap();
        assert_eq!(div(&r).unwrap(), Polynomial::constant(3, 3.0));

        let e1 = VectorField::constant(&[1.0, 0.0, 0.0]);
        let e2 = VectorField::constant(&[0.0, 1.0, 0.0]);
        assert_eq!(cross(&e1, &e2).unwrap(), VectorField::constant(&[0.0, 0.0, 1.0]));
    }

    #[test]
    fn wrong_dimension_is_rejected() {
        let v2 = VectorField::constant(&[1.0, 2.0]);
        assert!(div(&v2).is_err());
        assert!(flat(&v2).is_err());
        assert!(grad(&Polynomial::var(2, 1)).is_err());
    }

    #[test]
    fn eps_delta_identity_exhaustive() {
        // ε_{ijk} ε_{ipq} = δ_{jp} δ_{kq} − δ_{jq} δ_{kp}
        for j in 1..=3 {
            for k in 1..=3 {
                for p in 1..=3 {
                    for q in 1..=3 {
                        let lhs: i32 = (1..=3).map(|i| levi_civita(i, j, k) * levi_civita(i, p, q)).sum();
                        let rhs = kronecker(j, p) * kronecker(k, q) - kronecker(j, q) * kronecker(k, p);
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn exterior_product_matches_cross_product() {
        // α∧β has proxy α♯ × β♯
        let mut rng = Rng::new(23);
        for _ in 0..10 {
            let a = random_vector_field(&mut rng, 3, 3);
            let b = random_vector_field(&mut rng, 3, 3);
            let wedge = flat(&a).unwrap().wedge(&flat(&b).unwrap()).unwrap();
            let lhs = proxy_to_2form(&cross(&a, &b).unwrap()).unwrap();
            assert!(coefficient_residual(&lhs, &wedge).unwrap() <= 1e-14);
        }
    }

    #[test]
    fn divergence_identity() {
        // d(v ⌟ dV) = (∇·v) dV
        let mut rng = Rng::new(29);
        for _ in 0..10 {
            let v = random_vector_field(&mut rng, 3, 3);
            let lhs = density_of_3form(&proxy_to_2form(&v).unwrap().d()).unwrap();
            let rhs = div(&v).unwrap();
            assert!((&lhs - &rhs).max_abs_coeff() <= 1e-14);
        }
    }

    #[test]
    fn curl_identity() {
        // proxy of d(α) is ∇×α♯
        let mut rng = Rng::new(31);
        for _ in 0..10 {
            let f = random_polynomial(&mut rng, 3, 3, 4);
            let a = VectorField::new(vec![
                f.clone(),
                random_polynomial(&mut rng, 3, 3, 4),
                random_polynomial(&mut rng, 3, 3, 4),
            ])
            .unwrap();
            let lhs = proxy_of_2form(&flat(&a).unwrap().d()).unwrap();
            let rhs = curl(&a).unwrap();
            for axis in 1..=3 {
                assert!((lhs.component(axis) - rhs.component(axis)).max_abs_coeff() <= 1e-14);
            }
        }
    }
}
