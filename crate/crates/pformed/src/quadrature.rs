//! Regions (axis-aligned box chains), boundary decomposition with induced
//! orientation, and tensor-product Gauss-Legendre quadrature for integrating
//! polynomial forms.
//!
//! Orientation convention: on the upper face x^i = b_i the induced
//! orientation sign is (−1)^{i−1} applied to the remaining coordinates in
//! increasing order; the lower face gets the opposite sign. This makes the
//! divergence theorem hold with the outward normal, and shared interior faces
//! of adjacent boxes cancel exactly.
//!
//! Accumulation always uses pairwise summation over cells in canonical order
//! (boxes in listed order, nodes lexicographic), so results are deterministic.

use crate::error::{Error, Result};
use crate::exterior::DifferentialForm;
use crate::poly::Polynomial;

/// Gauss-Legendre nodes and weights on [−1, 1], computed by Newton iteration
/// on the Legendre recurrence. Exact (to rounding) for polynomials of degree
/// ≤ 2·order − 1.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1);
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() <= 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=n {
        let kf = k as f64;
        let pk = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = pk;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// Pairwise summation in the given (canonical) order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
        }
    }
}

/// Points per axis of a tensor-product Gauss-Legendre rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureRule {
    order: usize,
}

impl QuadratureRule {
    pub const DEFAULT_ORDER: usize = 8;

    pub fn new(order: usize) -> Result<Self> {
        if order < 1 {
            return Err(Error::InvalidQuadratureOrder(order));
        }
        Ok(Self { order })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Smallest order integrating per-axis degree `deg` exactly.
    pub fn exact_for_degree(deg: u32) -> Self {
        Self {
            order: ((deg as usize) + 2) / 2,
        }
    }

    /// This rule, raised (never lowered) to integrate `form` exactly.
    pub fn raised_for(&self, form: &DifferentialForm) -> Self {
        let needed = Self::exact_for_degree(form.max_axis_degree()).order;
        Self {
            order: self.order.max(needed),
        }
    }

    pub fn raised_for_degree(&self, deg: u32) -> Self {
        let needed = Self::exact_for_degree(deg).order;
        Self {
            order: self.order.max(needed),
        }
    }
}

impl Default for QuadratureRule {
    fn default() -> Self {
        Self {
            order: Self::DEFAULT_ORDER,
        }
    }
}

/// An axis-aligned box [min_1, max_1] × ... × [min_n, max_n].
#[derive(Debug, Clone, PartialEq)]
pub struct BoxDomain {
    min: Vec<f64>,
    max: Vec<f64>,
}

impl BoxDomain {
    pub fn new(min: Vec<f64>, max: Vec<f64>) -> Result<Self> {
        if min.len() != max.len() {
            return Err(Error::DimensionMismatch {
                expected: min.len(),
                got: max.len(),
            });
        }
        for (axis, (a, b)) in min.iter().zip(&max).enumerate() {
            if !(a.is_finite() && b.is_finite()) || a >= b {
                return Err(Error::DegenerateBox { axis: axis + 1 });
            }
        }
        Ok(Self { min, max })
    }

    pub fn unit(dim: usize) -> Self {
        Self {
            min: vec![0.0; dim],
            max: vec![1.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.min.len()
    }

    pub fn min(&self) -> &[f64] {
        &self.min
    }

    pub fn max(&self) -> &[f64] {
        &self.max
    }

    fn overlaps(&self, other: &Self) -> bool {
        self.min
            .iter()
            .zip(&self.max)
            .zip(other.min.iter().zip(&other.max))
            .all(|((a1, b1), (a2, b2))| a1.max(*a2) < b1.min(*b2))
    }
}

/// A chain of boxes with pairwise disjoint interiors.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    boxes: Vec<BoxDomain>,
}

impl Region {
    pub fn new(boxes: Vec<BoxDomain>) -> Result<Self> {
        if boxes.is_empty() {
            return Err(Error::EmptyRegion);
        }
        let dim = boxes[0].dim();
        for b in &boxes {
            if b.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: b.dim(),
                });
            }
        }
        for i in 0..boxes.len() {
            for j in (i + 1)..boxes.len() {
                if boxes[i].overlaps(&boxes[j]) {
                    return Err(Error::OverlappingBoxes { first: i, second: j });
                }
            }
        }
        Ok(Self { boxes })
    }

    pub fn unit_box(dim: usize) -> Self {
        Self {
            boxes: vec![BoxDomain::unit(dim)],
        }
    }

    pub fn single(b: BoxDomain) -> Self {
        Self { boxes: vec![b] }
    }

    pub fn dim(&self) -> usize {
        self.boxes[0].dim()
    }

    pub fn boxes(&self) -> &[BoxDomain] {
        &self.boxes
    }
}

/// Mapped nodes/weights for one axis of one box.
fn mapped_axis(nodes: &[f64], weights: &[f64], a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        nodes.iter().map(|&t| mid + half * t).collect(),
        weights.iter().map(|&w| w * half).collect(),
    )
}

/// Visit every tensor-product cell of the given axes in lexicographic order.
fn for_each_cell<F>(axes: &[(Vec<f64>, Vec<f64>)], mut visit: F) -> Result<()>
where
    F: FnMut(&[f64], f64) -> Result<()>,
{
    let dims = axes.len();
    if dims == 0 {
        return visit(&[], 1.0);
    }
    let counts: Vec<usize> = axes.iter().map(|(n, _)| n.len()).collect();
    let mut idx = vec![0usize; dims];
    let mut point = vec![0.0; dims];
    loop {
        let mut w = 1.0;
        for d in 0..dims {
            point[d] = axes[d].0[idx[d]];
            w *= axes[d].1[idx[d]];
        }
        visit(&point, w)?;
        // lexicographic increment, last axis fastest
        let mut d = dims;
        loop {
            if d == 0 {
                return Ok(());
            }
            d -= 1;
            idx[d] += 1;
            if idx[d] < counts[d] {
                break;
            }
            idx[d] = 0;
        }
    }
}

/// Integrate a pointwise density over the region; the workhorse behind both
/// the volume integral and the vector-calculus reductions.
pub fn integrate_point_fn<F>(region: &Region, rule: &QuadratureRule, mut f: F) -> Result<f64>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let (nodes, weights) = gauss_legendre(rule.order());
    let mut cells = Vec::new();
    for b in region.boxes() {
        let axes: Vec<(Vec<f64>, Vec<f64>)> = b
            .min()
            .iter()
            .zip(b.max())
            .map(|(&a, &bb)| mapped_axis(&nodes, &weights, a, bb))
            .collect();
        for_each_cell(&axes, |x, w| {
            cells.push(w * f(x)?);
            Ok(())
        })?;
    }
    Ok(pairwise_sum(&cells))
}

/// ∫_R f dV for a scalar polynomial density.
pub fn integrate_scalar(f: &Polynomial, region: &Region, rule: &QuadratureRule) -> Result<f64> {
    if f.dim() != region.dim() {
        return Err(Error::DimensionMismatch {
            expected: region.dim(),
            got: f.dim(),
        });
    }
    integrate_point_fn(region, rule, |x| f.eval(x))
}

/// ∫_R τ for an n-form τ on an n-dimensional region.
pub fn integrate_volume(
    tau: &DifferentialForm,
    region: &Region,
    rule: &QuadratureRule,
) -> Result<f64> {
    let n = region.dim();
    if tau.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: tau.dim(),
        });
    }
    if tau.grade() != n {
        return Err(Error::GradeMismatch {
            expected: n,
            got: tau.grade(),
        });
    }
    let density = tau.coeff_of(&(1..=n).collect::<Vec<_>>());
    integrate_point_fn(region, rule, |x| density.eval(x))
}

/// ∫_{∂R} ω for an (n−1)-form, summing the 2n faces of every box with the
/// induced outward orientation. Interior faces of adjacent boxes cancel.
pub fn integrate_boundary(
    omega: &DifferentialForm,
    region: &Region,
    rule: &QuadratureRule,
) -> Result<f64> {
    let n = region.dim();
    if omega.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: omega.dim(),
        });
    }
    if omega.grade() + 1 != n {
        return Err(Error::GradeMismatch {
            expected: n - 1,
            got: omega.grade(),
        });
    }
    let (nodes, weights) = gauss_legendre(rule.order());
    let mut faces = Vec::new();
    for b in region.boxes() {
        for axis in 1..=n {
            // coefficient of dx^1∧...(axis omitted)...∧dx^n restricted to the face
            let idx: Vec<usize> = (1..=n).filter(|&a| a != axis).collect();
            let coeff = omega.coeff_of(&idx);
            let upper_sign = if (axis - 1) % 2 == 0 { 1.0 } else { -1.0 };
            for (bound, sign) in [
                (b.min()[axis - 1], -upper_sign),
                (b.max()[axis - 1], upper_sign),
            ] {
                if coeff.is_zero() {
                    faces.push(0.0);
                    continue;
                }
                let axes: Vec<(Vec<f64>, Vec<f64>)> = (1..=n)
                    .filter(|&a| a != axis)
                    .map(|a| mapped_axis(&nodes, &weights, b.min()[a - 1], b.max()[a - 1]))
                    .collect();
                let mut cells = Vec::new();
                let mut point = vec![0.0; n];
                for_each_cell(&axes, |face_x, w| {
                    let mut k = 0;
                    for a in 1..=n {
                        point[a - 1] = if a == axis {
                            bound
                        } else {
                            let v = face_x[k];
                            k += 1;
                            v
                        };
                    }
                    cells.push(w * coeff.eval(&point)?);
                    Ok(())
                })?;
                faces.push(sign * pairwise_sum(&cells));
            }
        }
    }
    Ok(pairwise_sum(&faces))
}

/// |∫_R dω − ∫_{∂R} ω|: the divergence-theorem residual.
pub fn stokes_residual(
    omega: &DifferentialForm,
    region: &Region,
    rule: &QuadratureRule,
) -> Result<f64> {
    let vol = integrate_volume(&omega.d(), region, rule)?;
    let bdry = integrate_boundary(omega, region, rule)?;
    Ok((vol - bdry).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;

    fn x(i: usize) -> Polynomial {
        Polynomial::var(3, i)
    }

    #[test]
    fn gauss_legendre_low_orders() {
        let (n1, w1) = gauss_legendre(1);
        assert_eq!(n1, vec![0.0]);
        assert_eq!(w1, vec![2.0]);

        let (n2, w2) = gauss_legendre(2);
        let r = 1.0 / 3.0f64.sqrt();
        assert!((n2[0] + r).abs() < 1e-15 && (n2[1] - r).abs() < 1e-15);
        assert!((w2[0] - 1.0).abs() < 1e-15 && (w2[1] - 1.0).abs() < 1e-15);

        let (n3, w3) = gauss_legendre(3);
        assert!((n3[1]).abs() < 1e-15);
        assert!((n3[2] - (0.6f64).sqrt()).abs() < 1e-14);
        assert!((w3[1] - 8.0 / 9.0).abs() < 1e-14);
        assert!((w3[0] - 5.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn volume_of_unit_box() {
        let r = Region::unit_box(3);
        let q = QuadratureRule::new(2).unwrap();
        let v = integrate_volume(&DifferentialForm::volume(3), &r, &q).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn volume_of_x1_density() {
        let r = Region::unit_box(3);
        let q = QuadratureRule::new(2).unwrap();
        let tau = DifferentialForm::volume(3).poly_scaled(&x(1)).unwrap();
        let v = integrate_volume(&tau, &r, &q).unwrap();
        assert!((v - 0.5).abs() < 1e-14);
    }

    #[test]
    fn volume_of_mixed_monomial() {
        // ∫_[0,1]^3 x1^2 x2 = 1/6, exact already at order 2
        let r = Region::unit_box(3);
        let q = QuadratureRule::new(2).unwrap();
        let density = &x(1).pow(2) * &x(2);
        let tau = DifferentialForm::volume(3).poly_scaled(&density).unwrap();
        let v = integrate_volume(&tau, &r, &q).unwrap();
        assert!((v - 1.0 / 6.0).abs() < 1e-14);
    }

    #[test]
    fn gauss_matches_analytic_monomial_integrals() {
        // ∫ c·Πx_i^{e_i} over a box is c·Π (b^{e+1} − a^{e+1})/(e+1); exact
        // whenever every e_i ≤ 2·order − 1
        let mut rng = crate::rng::Rng::new(3);
        for _ in 0..40 {
            let order = 1 + rng.below(6);
            let n = 2 + rng.below(3);
            let exps: Vec<u32> = (0..n).map(|_| rng.below(2 * order) as u32).collect();
            let coeff = 2.0 * rng.symmetric();
            let min: Vec<f64> = (0..n).map(|_| rng.symmetric()).collect();
            let max: Vec<f64> = min.iter().map(|&a| a + 0.25 + rng.uniform()).collect();
            let region = Region::single(BoxDomain::new(min.clone(), max.clone()).unwrap());
            let f = Polynomial::monomial(n, &exps, coeff);
            let got = integrate_scalar(&f, &region, &QuadratureRule::new(order).unwrap()).unwrap();
            let analytic = coeff
                * exps
                    .iter()
                    .zip(min.iter().zip(&max))
                    .map(|(&e, (&a, &b))| {
                        let p = e as i32 + 1;
                        (b.powi(p) - a.powi(p)) / p as f64
                    })
                    .product::<f64>();
            assert!(
                (got - analytic).abs() <= 1e-12 * (1.0 + got.abs() + analytic.abs()),
                "order {order}, exps {exps:?}: {got} vs {analytic}"
            );
        }
    }

    #[test]
    fn volume_integral_is_additive_over_chains() {
        let f = &(&x(1).pow(3) * &x(2)) + &x(3).pow(2);
        let q = QuadratureRule::new(3).unwrap();
        let left = BoxDomain::new(vec![0.0, 0.0, 0.0], vec![1.0, 1.0, 1.0]).unwrap();
        let right = BoxDomain::new(vec![1.0, 0.0, 0.0], vec![2.5, 1.0, 1.0]).unwrap();
        let chain = Region::new(vec![left.clone(), right.clone()]).unwrap();
        let total = integrate_scalar(&f, &chain, &q).unwrap();
        let parts = integrate_scalar(&f, &Region::single(left), &q).unwrap()
            + integrate_scalar(&f, &Region::single(right), &q).unwrap();
        assert!((total - parts).abs() <= 1e-13 * (1.0 + total.abs()));
    }

    #[test]
    fn gauss_exactness_threshold() {
        // per-axis degree 2·order−1 integrates exactly; one degree more does not
        let q = QuadratureRule::new(2).unwrap();
        let r = Region::unit_box(3);
        let exact = integrate_scalar(&x(1).pow(3), &r, &q).unwrap();
        assert!((exact - 0.25).abs() < 1e-14);
        let inexact = integrate_scalar(&x(1).pow(4), &r, &q).unwrap();
        assert!((inexact - 0.2).abs() > 1e-6);
        let fixed = integrate_scalar(&x(1).pow(4), &r, &QuadratureRule::new(3).unwrap()).unwrap();
        assert!((fixed - 0.2).abs() < 1e-14);
    }

    #[test]
    fn boundary_of_flux_form() {
        // ω = x1 dx2∧dx3: only the x1 = 1 face contributes; equals ∫ div dV
        let r = Region::unit_box(3);
        let q = QuadratureRule::new(3).unwrap();
        let omega = DifferentialForm::from_term(3, &[2, 3], x(1)).unwrap();
        let b = integrate_boundary(&omega, &r, &q).unwrap();
        assert!((b - 1.0).abs() < 1e-14);
    }

    #[test]
    fn boundary_of_constant_form_closes() {
        let r = Region::unit_box(3);
        let q = QuadratureRule::new(2).unwrap();
        let omega = DifferentialForm::basis(3, &[2, 3]).unwrap();
        let b = integrate_boundary(&omega, &r, &q).unwrap();
        assert!(b.abs() < 1e-14);
    }

    #[test]
    fn box_chain_matches_union() {
        // two adjacent unit boxes vs the single [0,2]×[0,1]^2 box
        let chain = Region::new(vec![
            BoxDomain::new(vec![0.0, 0.0, 0.0], vec![1.0, 1.0, 1.0]).unwrap(),
            BoxDomain::new(vec![1.0, 0.0, 0.0], vec![2.0, 1.0, 1.0]).unwrap(),
        ])
        .unwrap();
        let merged = Region::single(BoxDomain::new(vec![0.0, 0.0, 0.0], vec![2.0, 1.0, 1.0]).unwrap());
        let q = QuadratureRule::new(4).unwrap();
        let omega = DifferentialForm::from_term(3, &[2, 3], &x(1) * &x(2))
            .unwrap()
            .try_add(&DifferentialForm::from_term(3, &[1, 3], x(3).pow(2)).unwrap())
            .unwrap();
        let a = integrate_boundary(&omega, &chain, &q).unwrap();
        let b = integrate_boundary(&omega, &merged, &q).unwrap();
        assert!((a - b).abs() < 1e-13, "chain {a} vs union {b}");
    }

    #[test]
    fn stokes_examples() {
        let r = Region::unit_box(3);
        let q = QuadratureRule::new(4).unwrap();
        let omega = DifferentialForm::from_term(3, &[2, 3], &x(1).pow(2) * &x(2)).unwrap();
        assert!(stokes_residual(&omega, &r, &q).unwrap() < 1e-13);

        let omega = DifferentialForm::basis(3, &[2, 3]).unwrap();
        assert!(stokes_residual(&omega, &r, &q).unwrap() < 1e-14);
    }

    #[test]
    fn stokes_for_coefficients_vanishing_on_boundary() {
        // bump = Π x_i (1 − x_i) vanishes on every face of the unit box
        let one = Polynomial::constant(3, 1.0);
        let bump = (1..=3)
            .map(|i| &x(i) * &(&one - &x(i)))
            .fold(one.clone(), |acc, f| &acc * &f);
        let omega = DifferentialForm::from_term(3, &[2, 3], bump).unwrap();
        let r = Region::unit_box(3);
        let q = QuadratureRule::new(4).unwrap();
        let b = integrate_boundary(&omega, &r, &q).unwrap();
        let v = integrate_volume(&omega.d(), &r, &q).unwrap();
        assert!(b.abs() < 1e-14);
        assert!(v.abs() < 1e-14);
    }

    #[test]
    fn lower_face_orientation_sign() {
        // ω = (1 − x1) dx2∧dx3 is supported only on the lower x1 face, which
        // carries the opposite of the upper-face sign: the integral is −1
        let f = &Polynomial::constant(3, 1.0) - &x(1);
        let omega = DifferentialForm::from_term(3, &[2, 3], f).unwrap();
        let b = integrate_boundary(&omega, &Region::unit_box(3), &QuadratureRule::new(2).unwrap())
            .unwrap();
        assert!((b + 1.0).abs() < 1e-14);
    }

    #[test]
    fn zero_order_rule_is_rejected() {
        assert!(matches!(
            QuadratureRule::new(0),
            Err(Error::InvalidQuadratureOrder(0))
        ));
    }

    #[test]
    fn region_validation() {
        assert!(matches!(
            BoxDomain::new(vec![0.0, 0.0], vec![1.0, 0.0]),
            Err(Error::DegenerateBox { axis: 2 })
        ));
        let a = BoxDomain::new(vec![0.0], vec![2.0]).unwrap();
        let b = BoxDomain::new(vec![1.0], vec![3.0]).unwrap();
        assert!(matches!(
            Region::new(vec![a.clone(), b]),
            Err(Error::OverlappingBoxes { first: 0, second: 1 })
        ));
        // shared faces are fine
        let c = BoxDomain::new(vec![2.0], vec![3.0]).unwrap();
        assert!(Region::new(vec![a, c]).is_ok());
        assert!(matches!(Region::new(vec![]), Err(Error::EmptyRegion)));
    }

    #[test]
    fn grade_checks() {
        let r = Region::unit_box(3);
        let q = QuadratureRule::default();
        let one_form = DifferentialForm::basis(3, &[1]).unwrap();
        assert!(integrate_volume(&one_form, &r, &q).is_err());
        assert!(integrate_boundary(&one_form, &r, &q).is_err());
    }

    #[test]
    fn pairwise_sum_matches_naive() {
        let xs: Vec<f64> = (1..=101).map(|i| i as f64 * 0.25).collect();
        let naive: f64 = xs.iter().sum();
        assert!((pairwise_sum(&xs) - naive).abs() < 1e-9);
    }

    #[test]
    fn rule_raising() {
        let q = QuadratureRule::new(2).unwrap();
        assert_eq!(q.raised_for_degree(3).order(), 2);
        assert_eq!(q.raised_for_degree(7).order(), 4);
        assert_eq!(QuadratureRule::exact_for_degree(0).order(), 1);
    }
}
