//! Seeded random inputs for the verification checks.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64`, so a seed fixes
//! every fixture on every platform. Coefficients are drawn uniformly from
//! `{-3, ..., 3} \ {0}`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::clifford::Multivector;
use crate::error::{Error, Result};
use crate::operators::{kernel_basis, OperatorTag, RsOperators};
use crate::poly::{MVPolynomial, Monomial, VarGroup};
use crate::scalar::{frac, int, Rational};
use crate::spaces::{monogenic_basis, vector_mul, Side};

/// Number of basis elements combined into one random fixture.
const SPARSITY: usize = 3;

pub struct Fixtures {
    rng: ChaCha8Rng,
}

impl Fixtures {
    pub fn new(seed: u64) -> Self {
        Fixtures { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Derives an independent stream for one check from a base seed.
    pub fn for_check(seed: u64, label: &str) -> Self {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in label.bytes() {
            h = (h ^ b as u64).wrapping_mul(0x0100_0000_01b3);
        }
        Self::new(seed ^ h)
    }

    pub fn coefficient(&mut self) -> i64 {
        let v = self.rng.gen_range(1..=3);
        if self.rng.gen_bool(0.5) {
            v
        } else {
            -v
        }
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    /// A random vector with entries in `{-3, ..., 3}`, not zero.
    pub fn vector(&mut self, m: usize) -> Multivector {
        loop {
            let coords: Vec<Rational> = (0..m).map(|_| int(self.rng.gen_range(-3..=3))).collect();
            let v = Multivector::vector(m, &coords);
            if !v.is_zero() {
                return v;
            }
        }
    }

    pub fn dilation_factor(&mut self) -> Rational {
        let choices = [(1, 2), (2, 1), (3, 2), (2, 3), (3, 1)];
        let (n, d) = choices[self.index(choices.len())];
        frac(n, d)
    }

    /// Sparse scalar polynomial in `x` with at most three terms of degree
    /// `1..=max_degree` (a constant when `max_degree` is 0).
    pub fn scalar_x_poly(&mut self, m: usize, max_degree: u32) -> MVPolynomial {
        if max_degree == 0 {
            return MVPolynomial::scalar_int(m, self.coefficient());
        }
        let terms = self.rng.gen_range(1..=SPARSITY);
        let mut p = MVPolynomial::zero(m);
        for _ in 0..terms {
            let deg = self.rng.gen_range(1..=max_degree);
            let mut exps = vec![0u8; m];
            for _ in 0..deg {
                exps[self.index(m)] += 1;
            }
            let c = Multivector::from_int(m, self.coefficient());
            p = &p + &MVPolynomial::term(Monomial::from_exponents(VarGroup::X, &exps), c);
        }
        if p.is_zero() {
            MVPolynomial::var(m, VarGroup::X, 1)
        } else {
            p
        }
    }

    /// Random nonzero combination of a few elements of `basis`.
    pub fn combination(&mut self, basis: &[MVPolynomial]) -> Result<MVPolynomial> {
        if basis.is_empty() {
            return Err(Error::Hypothesis("empty basis".into()));
        }
        loop {
            let mut p = MVPolynomial::zero(basis[0].dim());
            for _ in 0..SPARSITY.min(basis.len()) {
                let b = &basis[self.index(basis.len())];
                p = &p + &b.scale(&int(self.coefficient()));
            }
            if !p.is_zero() {
                return Ok(p);
            }
        }
    }

    /// `Σ p_t(x) b_t` with `b_t` in `M_k` (from `side`) and `p_t` scalar
    /// polynomials of degree at most `x_degree`.
    pub fn monogenic_field(&mut self, m: usize, k: u32, side: Side, x_degree: u32) -> Result<MVPolynomial> {
        let basis = monogenic_basis(m, k, side)?;
        self.field_over(&basis.elements, m, x_degree)
    }

    /// Same as [`Fixtures::monogenic_field`] with values in `u M_{k-1}`
    /// (left) or `M_{k-1} u` (right).
    pub fn u_factor_field(&mut self, m: usize, k: u32, side: Side, x_degree: u32) -> Result<MVPolynomial> {
        if k == 0 {
            return Err(Error::Hypothesis("u M_{k-1} needs k >= 1".into()));
        }
        let basis = monogenic_basis(m, k - 1, side)?;
        let lifted: Vec<MVPolynomial> = basis.elements.iter().map(|q| vector_mul(q, VarGroup::U, side)).collect();
        self.field_over(&lifted, m, x_degree)
    }

    fn field_over(&mut self, basis: &[MVPolynomial], m: usize, x_degree: u32) -> Result<MVPolynomial> {
        loop {
            let mut f = MVPolynomial::zero(m);
            for _ in 0..SPARSITY {
                let b = &basis[self.index(basis.len())];
                let p = self.scalar_x_poly(m, x_degree);
                f = &f + &(&p * b);
            }
            if !f.is_zero() {
                return Ok(f);
            }
        }
    }

    /// Domain element of `tag` with values chosen by `side`.
    pub fn domain_field(&mut self, tag: OperatorTag, side: Side, m: usize, k: u32, x_degree: u32) -> Result<MVPolynomial> {
        if tag.takes_u_factor() {
            self.u_factor_field(m, k, side, x_degree)
        } else {
            self.monogenic_field(m, k, side, x_degree)
        }
    }

    /// Random element of the kernel of `tag`, linear in `x`.
    pub fn kernel_field(&mut self, ops: &RsOperators, tag: OperatorTag, side: Side) -> Result<MVPolynomial> {
        let ker = kernel_basis(ops, tag, side, 1)?;
        self.combination(&ker)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::check_monogenic;

    #[test]
    fn seeds_are_reproducible() {
        let a = Fixtures::new(7).monogenic_field(3, 1, Side::Left, 2).unwrap();
        let b = Fixtures::new(7).monogenic_field(3, 1, Side::Left, 2).unwrap();
        assert_eq!(a, b);
        let c = Fixtures::new(8).monogenic_field(3, 1, Side::Left, 2).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn coefficients_in_range() {
        let mut fx = Fixtures::new(1);
        for _ in 0..200 {
            let c = fx.coefficient();
            assert!(c != 0 && c.abs() <= 3);
        }
    }

    #[test]
    fn fields_have_the_right_values() {
        let mut fx = Fixtures::new(3);
        let f = fx.monogenic_field(4, 2, Side::Right, 2).unwrap();
        check_monogenic(&f, 2, Side::Right, VarGroup::U).unwrap();
        assert!(f.degree(VarGroup::X) <= 2);
        let g = fx.u_factor_field(3, 2, Side::Left, 2).unwrap();
        crate::spaces::extract_u_factor(&g, 2, Side::Left, VarGroup::U).unwrap();
        let ops = RsOperators::new(3, 1);
        let h = fx.kernel_field(&ops, OperatorTag::Rk, Side::Left).unwrap();
        assert!(ops.rk(&h).unwrap().is_zero());
    }
}
