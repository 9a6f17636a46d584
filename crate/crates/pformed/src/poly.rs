//! Sparse multivariate polynomials over f64, the coefficient ring for every
//! scalar field in the crate.
//!
//! A polynomial on R^n is a finite map from exponent vectors (length n) to
//! coefficients. Operations are exact up to float rounding of coefficients:
//! terms are never truncated, and zero coefficients are pruned eagerly so the
//! zero polynomial is always the empty term map.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<Vec<u32>, f64>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        let mut p = Self::zero(dim);
        if c != 0.0 {
            p.terms.insert(vec![0; dim], c);
        }
        p
    }

    /// The coordinate function x^axis (1-based axis).
    pub fn var(dim: usize, axis: usize) -> Self {
        assert!(axis >= 1 && axis <= dim, "axis {axis} out of range 1..={dim}");
        let mut exps = vec![0; dim];
        exps[axis - 1] = 1;
        Self::monomial(dim, &exps, 1.0)
    }

    pub fn monomial(dim: usize, exps: &[u32], coeff: f64) -> Self {
        assert_eq!(exps.len(), dim, "exponent vector length must equal dim");
        let mut p = Self::zero(dim);
        if coeff != 0.0 {
            p.terms.insert(exps.to_vec(), coeff);
        }
        p
    }

    pub fn from_terms(dim: usize, terms: &[(Vec<u32>, f64)]) -> Result<Self> {
        let mut p = Self::zero(dim);
        for (exps, c) in terms {
            if exps.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: exps.len(),
                });
            }
            p.add_term(exps.clone(), *c);
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &f64)> {
        self.terms.iter()
    }

    fn add_term(&mut self, exps: Vec<u32>, c: f64) {
        if c == 0.0 {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = *e.get() + c;
                if s == 0.0 {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        let mut acc = 0.0;
        for (exps, c) in &self.terms {
            let mut m = *c;
            for (xi, &e) in x.iter().zip(exps) {
                if e > 0 {
                    m *= xi.powi(e as i32);
                }
            }
            acc += m;
        }
        Ok(acc)
    }

    /// Exact term-by-term partial derivative along a 1-based axis.
    pub fn partial(&self, axis: usize) -> Result<Self> {
        if axis < 1 || axis > self.dim {
            return Err(Error::AxisOutOfRange {
                axis,
                dim: self.dim,
            });
        }
        let i = axis - 1;
        let mut out = Self::zero(self.dim);
        for (exps, c) in &self.terms {
            let e = exps[i];
            if e == 0 {
                continue;
            }
            let mut dexps = exps.clone();
            dexps[i] = e - 1;
            out.add_term(dexps, c * e as f64);
        }
        Ok(out)
    }

    pub fn scaled(&self, a: f64) -> Self {
        let mut out = Self::zero(self.dim);
        if a == 0.0 {
            return out;
        }
        for (exps, c) in &self.terms {
            out.terms.insert(exps.clone(), c * a);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::constant(self.dim, 1.0);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Substitute `maps[i]` for the i-th coordinate. All `maps` must share a
    /// common dimension, which becomes the dimension of the result.
    pub fn compose(&self, maps: &[Polynomial]) -> Result<Self> {
        if maps.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: maps.len(),
            });
        }
        let out_dim = if maps.is_empty() { 0 } else { maps[0].dim };
        for m in maps {
            if m.dim != out_dim {
                return Err(Error::DimensionMismatch {
                    expected: out_dim,
                    got: m.dim,
                });
            }
        }
        let mut acc = Polynomial::zero(out_dim);
        for (exps, c) in &self.terms {
            let mut term = Polynomial::constant(out_dim, *c);
            for (m, &e) in maps.iter().zip(exps) {
                if e > 0 {
                    term = &term * &m.pow(e);
                }
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    /// Largest exponent appearing on any single axis.
    pub fn max_axis_degree(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|e| e.iter().copied())
            .max()
            .unwrap_or(0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim, "polynomial dimensions differ");
        let mut out = self.clone();
        for (exps, c) in &rhs.terms {
            out.add_term(exps.clone(), *c);
        }
        out
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &rhs.scaled(-1.0)
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scaled(-1.0)
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim, "polynomial dimensions differ");
        let mut out = Polynomial::zero(self.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exps, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exps, c) in &self.terms {
            if first {
                if *c < 0.0 {
                    write!(f, "-")?;
                }
                first = false;
            } else if *c < 0.0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            let has_vars = exps.iter().any(|&e| e > 0);
            if a != 1.0 || !has_vars {
                write!(f, "{a}")?;
                if has_vars {
                    write!(f, " ")?;
                }
            }
            let mut sep = "";
            for (i, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                write!(f, "{sep}x{}", i + 1)?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
                sep = " ";
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Polynomial {
        Polynomial::var(3, i)
    }

    #[test]
    fn eval_product_of_vars() {
        let f = &x(1) * &x(2);
        assert_eq!(f.eval(&[2.0, 3.0, 0.0]).unwrap(), 6.0);
    }

    #[test]
    fn eval_zero_polynomial() {
        let f = Polynomial::zero(3);
        assert_eq!(f.eval(&[1.0, 2.0, 3.0]).unwrap(), 0.0);
    }

    #[test]
    fn eval_square_plus_one() {
        let f = &(&x(1) * &x(1)) + &Polynomial::constant(3, 1.0);
        assert_eq!(f.eval(&[-1.0, 0.0, 0.0]).unwrap(), 2.0);
    }

    #[test]
    fn eval_dimension_mismatch() {
        let f = x(1);
        assert!(matches!(
            f.eval(&[1.0, 2.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn partial_of_product() {
        let f = &x(1) * &x(2);
        assert_eq!(f.partial(1).unwrap(), x(2));
    }

    #[test]
    fn partial_of_constant_is_zero() {
        let f = Polynomial::constant(3, 7.5);
        assert!(f.partial(2).unwrap().is_zero());
    }

    #[test]
    fn partial_of_cube() {
        let f = x(1).pow(3);
        let expect = Polynomial::monomial(3, &[2, 0, 0], 3.0);
        assert_eq!(f.partial(1).unwrap(), expect);
    }

    #[test]
    fn partial_axis_out_of_range() {
        assert!(matches!(
            x(1).partial(4),
            Err(Error::AxisOutOfRange { axis: 4, dim: 3 })
        ));
    }

    #[test]
    fn cancellation_prunes_terms() {
        let f = &x(1) - &x(1);
        assert!(f.is_zero());
        assert_eq!(f.num_terms(), 0);
    }

    #[test]
    fn compose_linear_shift() {
        // f(x) = x1^2, psi = (x1 + x2, x2, x3): f o psi = x1^2 + 2 x1 x2 + x2^2
        let f = x(1).pow(2);
        let maps = vec![&x(1) + &x(2), x(2), x(3)];
        let g = f.compose(&maps).unwrap();
        assert_eq!(g.eval(&[1.0, 2.0, 0.0]).unwrap(), 9.0);
        assert_eq!(g.total_degree(), 2);
    }

    #[test]
    fn degrees() {
        let f = Polynomial::monomial(3, &[2, 1, 0], 1.0);
        assert_eq!(f.total_degree(), 3);
        assert_eq!(f.max_axis_degree(), 2);
    }

    #[test]
    fn display_reads_naturally() {
        let f = &(&x(1) * &x(2)).scaled(2.0) - &Polynomial::constant(3, 1.0);
        assert_eq!(format!("{f}"), "-1 + 2 x1 x2");
    }
}
