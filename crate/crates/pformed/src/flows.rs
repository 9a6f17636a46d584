//! Polynomial maps, pullbacks, Jacobians, and Lie derivatives by the Cartan
//! route alongside a finite-difference flow oracle.
//!
//! Motions are the two-term polynomial family ψ_t(x) = x + t·w(x) + t²·u(x);
//! enough to probe motion-independence of the t-derivative at 0 without any
//! ODE integration. Pullbacks are always by ψ_t itself (never its inverse),
//! so everything stays polynomial.

use crate::error::{Error, Result};
use crate::exterior::{DifferentialForm, VectorField};
use crate::poly::Polynomial;

/// A polynomial map R^n → R^n together with its symbolic Jacobian.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothMap {
    dim: usize,
    components: Vec<Polynomial>,
}

impl SmoothMap {
    pub fn new(components: Vec<Polynomial>) -> Result<Self> {
        let dim = components.len();
        for c in &components {
            if c.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: c.dim(),
                });
            }
        }
        Ok(Self { dim, components })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            components: (1..=dim).map(|a| Polynomial::var(dim, a)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn component(&self, axis: usize) -> &Polynomial {
        assert!(axis >= 1 && axis <= self.dim);
        &self.components[axis - 1]
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.components.iter().map(|c| c.eval(x)).collect()
    }

    /// Partial-derivative matrix m[i][j] = ∂ψ^{i+1}/∂x^{j+1}.
    pub fn jacobian_matrix(&self) -> Vec<Vec<Polynomial>> {
        self.components
            .iter()
            .map(|c| {
                (1..=self.dim)
                    .map(|a| c.partial(a).expect("axis in range"))
                    .collect()
            })
            .collect()
    }

    /// Numeric Jacobian matrix at a point.
    pub fn jacobian_at(&self, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.jacobian_matrix()
            .iter()
            .map(|row| row.iter().map(|p| p.eval(x)).collect())
            .collect()
    }

    /// Symbolic determinant of the Jacobian matrix (Laplace expansion).
    pub fn jacobian_det(&self) -> Polynomial {
        let m = self.jacobian_matrix();
        poly_det(&m, self.dim)
    }
}

fn poly_det(m: &[Vec<Polynomial>], dim: usize) -> Polynomial {
    let n = m.len();
    if n == 0 {
        return Polynomial::constant(dim, 1.0);
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut det = Polynomial::zero(dim);
    for (col, entry) in m[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<Polynomial>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != col)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let cofactor = poly_det(&minor, dim);
        let signed = if col % 2 == 0 {
            entry * &cofactor
        } else {
            (entry * &cofactor).scaled(-1.0)
        };
        det = &det + &signed;
    }
    det
}

/// ψ*ω: substitute ψ into the coefficients and wedge the pulled-back
/// dψ^i = ψ^i_{,j} dx^j. Exact polynomial output; grade preserved.
pub fn pullback(map: &SmoothMap, omega: &DifferentialForm) -> Result<DifferentialForm> {
    if map.dim() != omega.dim() {
        return Err(Error::DimensionMismatch {
            expected: omega.dim(),
            got: map.dim(),
        });
    }
    let dim = map.dim();
    // dψ^i as 1-forms, computed once
    let dpsi: Vec<DifferentialForm> = map
        .components()
        .iter()
        .map(|c| DifferentialForm::from_scalar(c.clone()).d())
        .collect();
    let mut out = DifferentialForm::zero(dim, omega.grade());
    for (idx, coeff) in omega.terms() {
        let composed = coeff.compose(map.components())?;
        let mut term = DifferentialForm::from_scalar(composed);
        for &axis in idx.indices() {
            term = term.wedge(&dpsi[axis - 1])?;
        }
        out = out.try_add(&term)?;
    }
    Ok(out)
}

/// A virtual motion ψ_t(x) = x + t·w(x) + t²·u(x) with ψ_0 = id and
/// velocity w at t = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Motion {
    velocity: VectorField,
    second_order: Option<VectorField>,
}

impl Motion {
    pub fn linear(velocity: VectorField) -> Self {
        Self {
            velocity,
            second_order: None,
        }
    }

    pub fn with_second_order(velocity: VectorField, second_order: VectorField) -> Result<Self> {
        if velocity.dim() != second_order.dim() {
            return Err(Error::DimensionMismatch {
                expected: velocity.dim(),
                got: second_order.dim(),
            });
        }
        Ok(Self {
            velocity,
            second_order: Some(second_order),
        })
    }

    pub fn dim(&self) -> usize {
        self.velocity.dim()
    }

    pub fn velocity(&self) -> &VectorField {
        &self.velocity
    }

    pub fn second_order(&self) -> Option<&VectorField> {
        self.second_order.as_ref()
    }

    pub fn at(&self, t: f64) -> SmoothMap {
        let dim = self.dim();
        let components = (1..=dim)
            .map(|a| {
                let mut c = &Polynomial::var(dim, a) + &self.velocity.component(a).scaled(t);
                if let Some(u) = &self.second_order {
                    c = &c + &u.component(a).scaled(t * t);
                }
                c
            })
            .collect();
        SmoothMap { dim, components }
    }
}

/// L_v ω by the Cartan formula v⌟dω + d(v⌟ω). The interior-product term is
/// dropped for 0-forms (undefined) and the v⌟dω term for top forms (zero).
pub fn lie_derivative(v: &VectorField, omega: &DifferentialForm) -> Result<DifferentialForm> {
    if v.dim() != omega.dim() {
        return Err(Error::DimensionMismatch {
            expected: omega.dim(),
            got: v.dim(),
        });
    }
    if omega.grade() == 0 {
        return omega.d().contract(v);
    }
    if omega.grade() > omega.dim() {
        // necessarily the empty form; keep its nominal grade
        return Ok(DifferentialForm::zero(omega.dim(), omega.grade()));
    }
    if omega.grade() == omega.dim() {
        return Ok(omega.contract(v)?.d());
    }
    let circulation = omega.d().contract(v)?;
    let transport = omega.contract(v)?.d();
    circulation.try_add(&transport)
}

/// Central-difference flow derivative (ψ_t*ω − ψ_{−t}*ω) / 2t, returned as a
/// form; converges to [`lie_derivative`] with error O(t²).
pub fn lie_fd_oracle(motion: &Motion, omega: &DifferentialForm, t: f64) -> Result<DifferentialForm> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::NonpositiveStep(t));
    }
    let fwd = pullback(&motion.at(t), omega)?;
    let bwd = pullback(&motion.at(-t), omega)?;
    Ok(fwd.try_sub(&bwd)?.scaled(0.5 / t))
}

const HALTON_BASES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

fn radical_inverse(mut k: u64, base: u64) -> f64 {
    let mut inv = 0.0;
    let mut denom = 1.0;
    while k > 0 {
        denom *= base as f64;
        inv += (k % base) as f64 / denom;
        k /= base;
    }
    inv
}

/// Fixed quasi-random (Halton) sample points in the open unit box.
pub fn sample_points(dim: usize, count: usize) -> Vec<Vec<f64>> {
    assert!(dim <= HALTON_BASES.len(), "sample_points supports dim <= 8");
    (1..=count as u64)
        .map(|k| {
            (0..dim)
                .map(|d| radical_inverse(k, HALTON_BASES[d]))
                .collect()
        })
        .collect()
}
