//! Seeded xoshiro256** generator and random field constructors for the
//! reproducible property suites. Pure u64 arithmetic, so identical seeds give
//! byte-identical reports on every platform.

use crate::ed::EDSystem;
use crate::exterior::{all_multi_indices, DifferentialForm, VectorField};
use crate::poly::Polynomial;

/// xoshiro256** seeded through SplitMix64.
#[derive(Debug, Clone)]
pub struct Rng {
    s: [u64; 4],
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        let mut sm = seed;
        let mut next = || {
            sm = sm.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = sm;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            z ^ (z >> 31)
        };
        Self {
            s: [next(), next(), next(), next()],
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let result = self.s[1]
            .wrapping_mul(5)
            .rotate_left(7)
            .wrapping_mul(9);
        let t = self.s[1] << 17;
        self.s[2] ^= self.s[0];
        self.s[3] ^= self.s[1];
        self.s[1] ^= self.s[2];
        self.s[0] ^= self.s[3];
        self.s[2] ^= t;
        self.s[3] = self.s[3].rotate_left(45);
        result
    }

    /// Uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [−1, 1].
    pub fn symmetric(&mut self) -> f64 {
        2.0 * self.uniform() - 1.0
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

/// Sparse random polynomial with coefficients in [−1, 1] and total degree
/// bounded by `max_degree`.
pub fn random_polynomial(rng: &mut Rng, dim: usize, max_degree: u32, terms: usize) -> Polynomial {
    let mut p = Polynomial::zero(dim);
    for _ in 0..terms {
        let mut exps = vec![0u32; dim];
        let degree = rng.below(max_degree as usize + 1) as u32;
        for _ in 0..degree {
            exps[rng.below(dim)] += 1;
        }
        p = &p + &Polynomial::monomial(dim, &exps, rng.symmetric());
    }
    p
}

/// Random grade-k form with a coefficient on every basis multi-index.
pub fn random_form(rng: &mut Rng, dim: usize, grade: usize, max_degree: u32) -> DifferentialForm {
    let mut form = DifferentialForm::zero(dim, grade);
    for idx in all_multi_indices(dim, grade) {
        let p = random_polynomial(rng, dim, max_degree, 3);
        let term = DifferentialForm::from_term(dim, idx.indices(), p).expect("valid indices");
        form = form.try_add(&term).expect("matching grade");
    }
    form
}

pub fn random_vector_field(rng: &mut Rng, dim: usize, max_degree: u32) -> VectorField {
    VectorField::new(
        (0..dim)
            .map(|_| random_polynomial(rng, dim, max_degree, 3))
            .collect(),
    )
    .expect("components share dim")
}

/// Random system of dimension n and potential degree p.
pub fn random_system(rng: &mut Rng, n: usize, p: usize, max_degree: u32) -> EDSystem {
    let g = random_form(rng, n, n - p - 1, max_degree);
    let alpha = random_form(rng, n, p, max_degree);
    EDSystem::new(n, p, g, alpha).expect("grades consistent by construction")
}
