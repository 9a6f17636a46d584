//! The alternating-algebra kernel: multi-indices, differential forms with
//! polynomial coefficients, vector fields, wedge product, exterior derivative
//! and interior product.
//!
//! All multi-indices are kept strictly increasing; every sign in the crate is
//! produced by one normalization point, [`sort_indices_signed`], which counts
//! transpositions while sorting. Axes are 1-based throughout, matching the
//! dx^1, ..., dx^n basis notation.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::poly::Polynomial;

/// Sort a list of 1-based axis indices, returning the permutation sign.
/// Returns `None` when an index repeats (the associated basis form is zero).
pub fn sort_indices_signed(mut idx: Vec<usize>) -> Option<(Vec<usize>, f64)> {
    let mut sign = 1.0;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((idx, sign))
}

/// A strictly increasing list of 1-based axis indices, naming a basis form
/// dx^{i1} ∧ ... ∧ dx^{ik}.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.contains(&0) {
            return Err(Error::InvalidMultiIndex(format!(
                "indices are 1-based, got {indices:?}"
            )));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidMultiIndex(format!(
                "indices must be strictly increasing, got {indices:?}"
            )));
        }
        Ok(MultiIndex(indices))
    }

    pub fn grade(&self) -> usize {
        self.0.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, axis: usize) -> bool {
        self.0.contains(&axis)
    }

    /// The index with the entry at `pos` removed (still strictly increasing).
    pub fn without_position(&self, pos: usize) -> Self {
        let mut v = self.0.clone();
        v.remove(pos);
        MultiIndex(v)
    }

    /// All axes of 1..=dim not present in this index, in increasing order.
    pub fn complement(&self, dim: usize) -> Self {
        MultiIndex((1..=dim).filter(|a| !self.contains(*a)).collect())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|i| format!("dx{i}")).collect();
        write!(f, "{}", parts.join("^"))
    }
}

/// Every strictly increasing multi-index of the given grade on 1..=dim.
pub fn all_multi_indices(dim: usize, grade: usize) -> Vec<MultiIndex> {
    fn rec(dim: usize, grade: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
        if cur.len() == grade {
            out.push(MultiIndex(cur.clone()));
            return;
        }
        for a in start..=dim {
            cur.push(a);
            rec(dim, grade, a + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if grade <= dim {
        rec(dim, grade, 1, &mut Vec::new(), &mut out);
    }
    out
}

/// A grade-k differential form on R^n with polynomial coefficients.
///
/// Zero coefficients are pruned after every operation, so the zero form is
/// always the empty coefficient map. Grades above `dim` are representable but
/// necessarily empty (they arise as wedge products of too-high total grade).
#[derive(Debug, Clone, PartialEq)]
pub struct DifferentialForm {
    dim: usize,
    grade: usize,
    coeffs: BTreeMap<MultiIndex, Polynomial>,
}

impl DifferentialForm {
    pub fn zero(dim: usize, grade: usize) -> Self {
        Self {
            dim,
            grade,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_scalar(p: Polynomial) -> Self {
        let mut form = Self::zero(p.dim(), 0);
        form.accumulate(MultiIndex::empty(), p);
        form
    }

    /// The standard volume form dx^1 ∧ ... ∧ dx^n.
    pub fn volume(dim: usize) -> Self {
        let idx = MultiIndex((1..=dim).collect());
        let mut form = Self::zero(dim, dim);
        form.accumulate(idx, Polynomial::constant(dim, 1.0));
        form
    }

    /// Basis form dx^{i1} ∧ ... ∧ dx^{ik} for strictly increasing indices.
    pub fn basis(dim: usize, indices: &[usize]) -> Result<Self> {
        Self::from_term(dim, indices, Polynomial::constant(dim, 1.0))
    }

    /// Build `coeff · dx^{i1} ∧ ... ∧ dx^{ik}` from possibly unsorted indices;
    /// the permutation sign is absorbed into the coefficient, and a repeated
    /// index yields the zero form.
    pub fn from_term(dim: usize, indices: &[usize], coeff: Polynomial) -> Result<Self> {
        if coeff.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: coeff.dim(),
            });
        }
        if let Some(&bad) = indices.iter().find(|&&a| a < 1 || a > dim) {
            return Err(Error::AxisOutOfRange { axis: bad, dim });
        }
        let mut form = Self::zero(dim, indices.len());
        if let Some((sorted, sign)) = sort_indices_signed(indices.to_vec()) {
            form.accumulate(MultiIndex(sorted), coeff.scaled(sign));
        }
        Ok(form)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Polynomial)> {
        self.coeffs.iter()
    }

    /// Coefficient of the given multi-index (zero polynomial when absent).
    pub fn coeff(&self, idx: &MultiIndex) -> Polynomial {
        self.coeffs
            .get(idx)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(self.dim))
    }

    pub fn coeff_of(&self, indices: &[usize]) -> Polynomial {
        match MultiIndex::new(indices.to_vec()) {
            Ok(idx) => self.coeff(&idx),
            Err(_) => Polynomial::zero(self.dim),
        }
    }

    fn accumulate(&mut self, idx: MultiIndex, p: Polynomial) {
        if p.is_zero() {
            return;
        }
        debug_assert_eq!(idx.grade(), self.grade);
        match self.coeffs.entry(idx) {
            Entry::Vacant(e) => {
                e.insert(p);
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + &p;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn scaled(&self, a: f64) -> Self {
        let mut out = Self::zero(self.dim, self.grade);
        if a == 0.0 {
            return out;
        }
        for (idx, p) in &self.coeffs {
            out.accumulate(idx.clone(), p.scaled(a));
        }
        out
    }

    /// Multiply every coefficient by a scalar polynomial field.
    pub fn poly_scaled(&self, f: &Polynomial) -> Result<Self> {
        if f.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: f.dim(),
            });
        }
        let mut out = Self::zero(self.dim, self.grade);
        for (idx, p) in &self.coeffs {
            out.accumulate(idx.clone(), p * f);
        }
        Ok(out)
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        linear_combination(1.0, self, 1.0, rhs)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        linear_combination(1.0, self, -1.0, rhs)
    }

    /// Wedge product. Grades add; a total grade above `dim` yields the empty
    /// form of that grade.
    pub fn wedge(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: rhs.dim,
            });
        }
        let grade = self.grade + rhs.grade;
        let mut out = Self::zero(self.dim, grade);
        if grade > self.dim {
            return Ok(out);
        }
        for (ia, pa) in &self.coeffs {
            for (ib, pb) in &rhs.coeffs {
                let mut concat = ia.0.clone();
                concat.extend_from_slice(&ib.0);
                if let Some((sorted, sign)) = sort_indices_signed(concat) {
                    out.accumulate(MultiIndex(sorted), (pa * pb).scaled(sign));
                }
            }
        }
        Ok(out)
    }

    /// Exterior derivative. For a top-grade form the result is the zero form
    /// of the same grade (there is nothing above grade n).
    pub fn d(&self) -> Self {
        if self.grade >= self.dim {
            return Self::zero(self.dim, self.grade);
        }
        let mut out = Self::zero(self.dim, self.grade + 1);
        for (idx, p) in &self.coeffs {
            for axis in 1..=self.dim {
                let dp = p.partial(axis).expect("axis in range");
                if dp.is_zero() {
                    continue;
                }
                let mut concat = vec![axis];
                concat.extend_from_slice(&idx.0);
                if let Some((sorted, sign)) = sort_indices_signed(concat) {
                    out.accumulate(MultiIndex(sorted), dp.scaled(sign));
                }
            }
        }
        out
    }

    /// Interior product v ⌟ ω: alternating-sign slot insertion,
    /// ∂_i ⌟ (dx^{j1}∧...∧dx^{jk}) = Σ_r (−1)^{r−1} δ_i^{jr} dx^{j1}∧...ĵr...∧dx^{jk}.
    pub fn contract(&self, v: &VectorField) -> Result<Self> {
        if self.dim != v.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.dim(),
            });
        }
        if self.grade == 0 {
            return Err(Error::ContractScalar);
        }
        let mut out = Self::zero(self.dim, self.grade - 1);
        for (idx, p) in &self.coeffs {
            for (r, &axis) in idx.0.iter().enumerate() {
                let comp = v.component(axis);
                if comp.is_zero() {
                    continue;
                }
                let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
                out.accumulate(idx.without_position(r), (p * comp).scaled(sign));
            }
        }
        Ok(out)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs
            .values()
            .fold(0.0, |m, p| m.max(p.max_abs_coeff()))
    }

    pub fn max_axis_degree(&self) -> u32 {
        self.coeffs
            .values()
            .map(|p| p.max_axis_degree())
            .max()
            .unwrap_or(0)
    }

    pub fn max_total_degree(&self) -> u32 {
        self.coeffs
            .values()
            .map(|p| p.total_degree())
            .max()
            .unwrap_or(0)
    }

    /// Evaluate every coefficient at a point.
    pub fn coeffs_at(&self, x: &[f64]) -> Result<BTreeMap<MultiIndex, f64>> {
        let mut out = BTreeMap::new();
        for (idx, p) in &self.coeffs {
            out.insert(idx.clone(), p.eval(x)?);
        }
        Ok(out)
    }
}

impl fmt::Display for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(idx, p)| {
                if idx.grade() == 0 {
                    format!("{p}")
                } else {
                    format!("({p}) {idx}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// a·ω + b·η for forms of matching dimension and grade.
pub fn linear_combination(
    a: f64,
    omega: &DifferentialForm,
    b: f64,
    eta: &DifferentialForm,
) -> Result<DifferentialForm> {
    if omega.dim != eta.dim {
        return Err(Error::DimensionMismatch {
            expected: omega.dim,
            got: eta.dim,
        });
    }
    if omega.grade != eta.grade {
        return Err(Error::GradeMismatch {
            expected: omega.grade,
            got: eta.grade,
        });
    }
    let mut out = DifferentialForm::zero(omega.dim, omega.grade);
    for (idx, p) in &omega.coeffs {
        out.accumulate(idx.clone(), p.scaled(a));
    }
    for (idx, p) in &eta.coeffs {
        out.accumulate(idx.clone(), p.scaled(b));
    }
    Ok(out)
}

/// Largest absolute coefficient of ω − η; the workhorse of every
/// coefficient-exact identity check.
pub fn coefficient_residual(omega: &DifferentialForm, eta: &DifferentialForm) -> Result<f64> {
    Ok(omega.try_sub(eta)?.max_abs_coeff())
}

/// Largest |ω_I(x) − η_I(x)| over all sample points and multi-indices.
pub fn max_pointwise_deviation(
    omega: &DifferentialForm,
    eta: &DifferentialForm,
    points: &[Vec<f64>],
) -> Result<f64> {
    let diff = omega.try_sub(eta)?;
    let mut worst = 0.0f64;
    for x in points {
        for v in diff.coeffs_at(x)?.values() {
            worst = worst.max(v.abs());
        }
    }
    Ok(worst)
}

/// An n-tuple of polynomial scalar fields on R^n.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    dim: usize,
    components: Vec<Polynomial>,
}

impl VectorField {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            components: vec![Polynomial::zero(dim); dim],
        }
    }

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

    pub fn constant(values: &[f64]) -> Self {
        let dim = values.len();
        Self {
            dim,
            components: values
                .iter()
                .map(|&v| Polynomial::constant(dim, v))
                .collect(),
        }
    }

    /// The coordinate basis field ∂_axis (1-based).
    pub fn basis(dim: usize, axis: usize) -> Self {
        assert!(axis >= 1 && axis <= dim);
        let mut comps = vec![Polynomial::zero(dim); dim];
        comps[axis - 1] = Polynomial::constant(dim, 1.0);
        Self {
            dim,
            components: comps,
        }
    }

    /// ∇f as a vector field (valid in any dimension).
    pub fn gradient(f: &Polynomial) -> Self {
        let dim = f.dim();
        let components = (1..=dim)
            .map(|a| f.partial(a).expect("axis in range"))
            .collect();
        Self { dim, components }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn component(&self, axis: usize) -> &Polynomial {
        assert!(axis >= 1 && axis <= self.dim, "axis {axis} out of range");
        &self.components[axis - 1]
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self {
            dim: self.dim,
            components: self.components.iter().map(|c| c.scaled(a)).collect(),
        }
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: rhs.dim,
            });
        }
        Ok(Self {
            dim: self.dim,
            components: self
                .components
                .iter()
                .zip(&rhs.components)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.components.iter().map(|c| c.eval(x)).collect()
    }

    pub fn max_axis_degree(&self) -> u32 {
        self.components
            .iter()
            .map(|c| c.max_axis_degree())
            .max()
            .unwrap_or(0)
    }
}
