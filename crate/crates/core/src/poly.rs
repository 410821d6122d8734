//! Polynomials in commuting vector variables with multivector coefficients.
//!
//! Variables come in named groups (`x`, `u`, `y`, `w`), each holding `m`
//! real coordinates. The commuting variable layer is kept separate from the
//! noncommuting coefficients: a product of two terms multiplies monomials
//! and then takes the geometric product of the coefficients in order, left
//! factor first.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::clifford::{check_dim, Blade, Multivector, TermJson, MAX_DIM};
use crate::error::{Error, Result};
use crate::scalar::{int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarGroup {
    X,
    U,
    Y,
    W,
}

impl VarGroup {
    pub const ALL: [VarGroup; 4] = [VarGroup::X, VarGroup::U, VarGroup::Y, VarGroup::W];

    fn slot(self) -> usize {
        self as usize * MAX_DIM
    }

    pub fn name(self) -> char {
        match self {
            VarGroup::X => 'x',
            VarGroup::U => 'u',
            VarGroup::Y => 'y',
            VarGroup::W => 'w',
        }
    }
}

impl fmt::Display for VarGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

const SLOTS: usize = 4 * MAX_DIM;

/// Exponent vector over all four variable groups.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial([u8; SLOTS]);

impl Default for Monomial {
    fn default() -> Self {
        Monomial([0; SLOTS])
    }
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    /// Coordinate `g_i`, 1-based.
    pub fn var(g: VarGroup, i: usize) -> Self {
        let mut e = Self::one();
        e.0[g.slot() + i - 1] = 1;
        e
    }

    pub fn from_exponents(g: VarGroup, exps: &[u8]) -> Self {
        let mut e = Self::one();
        e.0[g.slot()..g.slot() + exps.len()].copy_from_slice(exps);
        e
    }

    pub fn exp(&self, g: VarGroup, i: usize) -> u8 {
        self.0[g.slot() + i - 1]
    }

    pub fn exponents(&self, g: VarGroup) -> &[u8] {
        &self.0[g.slot()..g.slot() + MAX_DIM]
    }

    pub fn degree(&self, g: VarGroup) -> u32 {
        self.exponents(g).iter().map(|e| *e as u32).sum()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|e| *e as u32).sum()
    }

    pub fn mul(&self, rhs: &Monomial) -> Monomial {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(rhs.0.iter()) {
            *a += *b;
        }
        out
    }

    /// Splits into the `g` part and everything else.
    pub fn split(&self, g: VarGroup) -> (Monomial, Monomial) {
        let mut only = Self::one();
        let mut rest = *self;
        let r = g.slot()..g.slot() + MAX_DIM;
        only.0[r.clone()].copy_from_slice(&self.0[r.clone()]);
        rest.0[r].fill(0);
        (only, rest)
    }

    /// Moves the exponents of group `from` onto group `to`.
    pub fn rename(&self, from: VarGroup, to: VarGroup) -> Monomial {
        let mut out = *self;
        let src: [u8; MAX_DIM] = self.0[from.slot()..from.slot() + MAX_DIM].try_into().unwrap();
        out.0[from.slot()..from.slot() + MAX_DIM].fill(0);
        for (k, e) in src.iter().enumerate() {
            out.0[to.slot() + k] += e;
        }
        out
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|e| *e == 0)
    }

    fn decrement(&self, g: VarGroup, i: usize) -> Monomial {
        let mut out = *self;
        out.0[g.slot() + i - 1] -= 1;
        out
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for g in VarGroup::ALL {
            for i in 1..=MAX_DIM {
                let e = self.exp(g, i);
                if e == 0 {
                    continue;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                write!(f, "{}{}", g.name(), i)?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Polynomial with `Cl_m` coefficients: `Σ_α c_α x^α`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MVPolynomial {
    m: usize,
    terms: BTreeMap<Monomial, Multivector>,
}

impl MVPolynomial {
    pub fn zero(m: usize) -> Self {
        MVPolynomial { m, terms: BTreeMap::new() }
    }

    pub fn constant(c: Multivector) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn one(m: usize) -> Self {
        Self::constant(Multivector::one(m))
    }

    pub fn term(mono: Monomial, c: Multivector) -> Self {
        let mut p = Self::zero(c.dim());
        p.add_term(mono, &c);
        p
    }

    /// Scalar coordinate `g_i`.
    pub fn var(m: usize, g: VarGroup, i: usize) -> Self {
        Self::term(Monomial::var(g, i), Multivector::one(m))
    }

    /// The vector variable `Σ_i e_i g_i`.
    pub fn vector_var(m: usize, g: VarGroup) -> Self {
        let mut p = Self::zero(m);
        for i in 1..=m {
            p.add_term(Monomial::var(g, i), &Multivector::generator(m, i));
        }
        p
    }

    /// `‖g‖² = Σ_i g_i²`.
    pub fn norm_sq_var(m: usize, g: VarGroup) -> Self {
        let mut p = Self::zero(m);
        for i in 1..=m {
            p.add_term(Monomial::var(g, i).mul(&Monomial::var(g, i)), &Multivector::one(m));
        }
        p
    }

    /// `⟨a, b⟩ = Σ_i a_i b_i` for two variable groups.
    pub fn inner_var(m: usize, a: VarGroup, b: VarGroup) -> Self {
        let mut p = Self::zero(m);
        for i in 1..=m {
            p.add_term(Monomial::var(a, i).mul(&Monomial::var(b, i)), &Multivector::one(m));
        }
        p
    }

    pub fn scalar_int(m: usize, n: i64) -> Self {
        Self::constant(Multivector::from_int(m, n))
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of monomials.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of (monomial, blade) coefficients.
    pub fn coefficient_count(&self) -> usize {
        self.terms.values().map(|c| c.len()).sum()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Multivector)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, mono: &Monomial) -> Multivector {
        self.terms.get(mono).cloned().unwrap_or_else(|| Multivector::zero(self.m))
    }

    pub(crate) fn add_term(&mut self, mono: Monomial, c: &Multivector) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign_ref(c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn add_scaled_term(&mut self, mono: Monomial, c: &Multivector, s: &Rational) {
        if s.is_zero() {
            return;
        }
        if s.is_one() {
            self.add_term(mono, c);
        } else {
            self.add_term(mono, &c.scale(s));
        }
    }

    pub fn from_terms(m: usize, terms: impl IntoIterator<Item = (Monomial, Multivector)>) -> Self {
        let mut p = Self::zero(m);
        for (mono, c) in terms {
            p.add_term(mono, &c);
        }
        p
    }

    fn same_dim(&self, rhs: &Self) -> Result<()> {
        if self.m == rhs.m {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(self.m, rhs.m))
        }
    }

    pub fn p_add(&self, rhs: &Self) -> Result<Self> {
        self.same_dim(rhs)?;
        let mut out = self.clone();
        for (mono, c) in &rhs.terms {
            out.add_term(*mono, c);
        }
        Ok(out)
    }

    pub fn p_sub(&self, rhs: &Self) -> Result<Self> {
        self.same_dim(rhs)?;
        let mut out = self.clone();
        for (mono, c) in &rhs.terms {
            out.add_term(*mono, &-c);
        }
        Ok(out)
    }

    /// Ring product; coefficients of `self` multiply those of `rhs` on the left.
    pub fn p_mul(&self, rhs: &Self) -> Result<Self> {
        self.same_dim(rhs)?;
        let mut out = Self::zero(self.m);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), &ca.product_unchecked(cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(self.m);
        }
        MVPolynomial { m: self.m, terms: self.terms.iter().map(|(k, c)| (*k, c.scale(s))).collect() }
    }

    /// `a · self`.
    pub fn left_mul(&self, a: &Multivector) -> Self {
        assert_eq!(a.dim(), self.m, "dimension mismatch");
        let mut out = Self::zero(self.m);
        for (k, c) in &self.terms {
            out.add_term(*k, &a.product_unchecked(c));
        }
        out
    }

    /// `self · a`.
    pub fn right_mul(&self, a: &Multivector) -> Self {
        assert_eq!(a.dim(), self.m, "dimension mismatch");
        let mut out = Self::zero(self.m);
        for (k, c) in &self.terms {
            out.add_term(*k, &c.product_unchecked(a));
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.m);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn map_coefficients(&self, f: impl Fn(&Multivector) -> Multivector) -> Self {
        let mut out = Self::zero(self.m);
        for (k, c) in &self.terms {
            out.add_term(*k, &f(c));
        }
        out
    }

    /// Coefficientwise reversion.
    pub fn reverse(&self) -> Self {
        self.map_coefficients(Multivector::reverse)
    }

    /// Coefficientwise Clifford conjugation.
    pub fn conjugate(&self) -> Self {
        self.map_coefficients(Multivector::conjugate)
    }

    /// `∂ / ∂ g_i`.
    pub fn derivative(&self, g: VarGroup, i: usize) -> Self {
        let mut out = Self::zero(self.m);
        for (mono, c) in &self.terms {
            let e = mono.exp(g, i);
            if e > 0 {
                out.add_scaled_term(mono.decrement(g, i), c, &int(e as i64));
            }
        }
        out
    }

    /// `D_g p = Σ_i e_i ∂p/∂g_i`.
    pub fn dirac_left(&self, g: VarGroup) -> Self {
        let mut out = Self::zero(self.m);
        for i in 1..=self.m {
            let e = Multivector::generator(self.m, i);
            for (mono, c) in &self.terms {
                let k = mono.exp(g, i);
                if k > 0 {
                    out.add_scaled_term(mono.decrement(g, i), &e.product_unchecked(c), &int(k as i64));
                }
            }
        }
        out
    }

    /// `p D_g = Σ_i ∂p/∂g_i e_i`.
    pub fn dirac_right(&self, g: VarGroup) -> Self {
        let mut out = Self::zero(self.m);
        for i in 1..=self.m {
            let e = Multivector::generator(self.m, i);
            for (mono, c) in &self.terms {
                let k = mono.exp(g, i);
                if k > 0 {
                    out.add_scaled_term(mono.decrement(g, i), &c.product_unchecked(&e), &int(k as i64));
                }
            }
        }
        out
    }

    /// `Σ_i g_i ∂p/∂g_i`.
    pub fn euler(&self, g: VarGroup) -> Self {
        let mut out = Self::zero(self.m);
        for (mono, c) in &self.terms {
            out.add_scaled_term(*mono, c, &int(mono.degree(g) as i64));
        }
        out
    }

    /// Componentwise Laplacian `Σ_i ∂²p/∂g_i²`.
    pub fn laplacian(&self, g: VarGroup) -> Self {
        let mut out = Self::zero(self.m);
        for (mono, c) in &self.terms {
            for i in 1..=self.m {
                let k = mono.exp(g, i) as i64;
                if k > 1 {
                    out.add_scaled_term(mono.decrement(g, i).decrement(g, i), c, &int(k * (k - 1)));
                }
            }
        }
        out
    }

    /// `(min, max)` degree in `g`, `None` for the zero polynomial.
    pub fn degree_range(&self, g: VarGroup) -> Option<(u32, u32)> {
        let mut it = self.terms.keys().map(|k| k.degree(g));
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), d| (lo.min(d), hi.max(d))))
    }

    pub fn degree(&self, g: VarGroup) -> u32 {
        self.degree_range(g).map_or(0, |r| r.1)
    }

    /// Homogeneous of degree `k` in `g` (the zero polynomial qualifies).
    pub fn is_homogeneous(&self, g: VarGroup, k: u32) -> bool {
        self.terms.keys().all(|mono| mono.degree(g) == k)
    }

    pub fn depends_on(&self, g: VarGroup) -> bool {
        self.terms.keys().any(|mono| mono.degree(g) > 0)
    }

    /// Part of the polynomial of exact degree `d` in `g`.
    pub fn homogeneous_part(&self, g: VarGroup, d: u32) -> Self {
        MVPolynomial {
            m: self.m,
            terms: self.terms.iter().filter(|(k, _)| k.degree(g) == d).map(|(k, c)| (*k, c.clone())).collect(),
        }
    }

    /// All coefficients are scalars, so the polynomial commutes with everything.
    pub fn is_scalar_valued(&self) -> bool {
        self.terms.values().all(Multivector::is_scalar)
    }

    /// Replaces each coordinate `g_i` by `images[i-1]`, which must be
    /// scalar-valued polynomials (they commute with every coefficient).
    pub fn substitute(&self, g: VarGroup, images: &[MVPolynomial]) -> Result<Self> {
        if images.len() != self.m {
            return Err(Error::DimensionMismatch(images.len(), self.m));
        }
        for im in images {
            self.same_dim(im)?;
            if !im.is_scalar_valued() {
                return Err(Error::Unsupported("substitution images must be scalar-valued".into()));
            }
        }
        let mut powers: HashMap<(usize, u8), MVPolynomial> = HashMap::new();
        let mut cache: HashMap<Monomial, MVPolynomial> = HashMap::new();
        let mut out = Self::zero(self.m);
        for (mono, c) in &self.terms {
            let (only, rest) = mono.split(g);
            let image = match cache.get(&only) {
                Some(p) => p.clone(),
                None => {
                    let mut acc = Self::one(self.m);
                    for i in 1..=self.m {
                        let e = only.exp(g, i);
                        if e == 0 {
                            continue;
                        }
                        let pw = powers.entry((i, e)).or_insert_with(|| images[i - 1].pow(e as u32)).clone();
                        acc = &acc * &pw;
                    }
                    cache.insert(only, acc.clone());
                    acc
                }
            };
            for (k, s) in &image.terms {
                out.add_scaled_term(k.mul(&rest), c, &s.scalar_part());
            }
        }
        Ok(out)
    }

    /// `g_i ↦ Σ_j M_ij g_j`.
    pub fn substitute_linear(&self, g: VarGroup, matrix: &[Vec<Rational>]) -> Result<Self> {
        self.substitute_affine(g, g, matrix, &vec![Rational::zero(); self.m])
    }

    /// `from_i ↦ Σ_j M_ij to_j + t_i`.
    pub fn substitute_affine(&self, from: VarGroup, to: VarGroup, matrix: &[Vec<Rational>], offset: &[Rational]) -> Result<Self> {
        if matrix.len() != self.m || offset.len() != self.m || matrix.iter().any(|r| r.len() != self.m) {
            return Err(Error::DimensionMismatch(matrix.len(), self.m));
        }
        let images: Vec<MVPolynomial> = (0..self.m)
            .map(|i| {
                let mut p = Self::constant(Multivector::scalar(self.m, offset[i].clone()));
                for j in 0..self.m {
                    p.add_term(Monomial::var(to, j + 1), &Multivector::scalar(self.m, matrix[i][j].clone()));
                }
                p
            })
            .collect();
        self.substitute(from, &images)
    }

    /// Renames variable group `from` to `to`.
    pub fn rename(&self, from: VarGroup, to: VarGroup) -> Self {
        let mut out = Self::zero(self.m);
        for (k, c) in &self.terms {
            out.add_term(k.rename(from, to), c);
        }
        out
    }

    /// Substitutes a rational point for group `g`, leaving the other groups symbolic.
    pub fn evaluate_group(&self, g: VarGroup, point: &[Rational]) -> Result<Self> {
        if point.len() != self.m {
            return Err(Error::DimensionMismatch(point.len(), self.m));
        }
        let mut out = Self::zero(self.m);
        for (mono, c) in &self.terms {
            let (only, rest) = mono.split(g);
            let mut s = Rational::one();
            for (i, p) in point.iter().enumerate() {
                for _ in 0..only.exp(g, i + 1) {
                    s *= p;
                }
            }
            out.add_scaled_term(rest, c, &s);
        }
        Ok(out)
    }

    /// Full evaluation; every group the polynomial depends on must be assigned.
    pub fn evaluate(&self, points: &[(VarGroup, Vec<Rational>)]) -> Result<Multivector> {
        let mut p = self.clone();
        for (g, pt) in points {
            p = p.evaluate_group(*g, pt)?;
        }
        if let Some(g) = VarGroup::ALL.into_iter().find(|g| p.depends_on(*g)) {
            return Err(Error::Hypothesis(format!("group {g} left unassigned")));
        }
        Ok(p.coefficient(&Monomial::one()))
    }

    pub fn to_json(&self) -> PolynomialJson {
        PolynomialJson {
            m: self.m,
            terms: self
                .terms
                .iter()
                .map(|(mono, c)| {
                    let grab = |g: VarGroup| {
                        (mono.degree(g) > 0).then(|| mono.exponents(g)[..self.m].iter().map(|e| *e as u32).collect())
                    };
                    PolyTermJson {
                        x: grab(VarGroup::X),
                        u: grab(VarGroup::U),
                        y: grab(VarGroup::Y),
                        w: grab(VarGroup::W),
                        coeff: c.to_json().terms,
                    }
                })
                .collect(),
        }
    }

    pub fn from_json(json: &PolynomialJson) -> Result<Self> {
        check_dim(json.m)?;
        let mut out = Self::zero(json.m);
        for t in &json.terms {
            let mut mono = Monomial::one();
            for (g, exps) in [(VarGroup::X, &t.x), (VarGroup::U, &t.u), (VarGroup::Y, &t.y), (VarGroup::W, &t.w)] {
                if let Some(e) = exps {
                    if e.len() != json.m {
                        return Err(Error::Parse(format!("exponent list for {g} has length {}", e.len())));
                    }
                    let e: Vec<u8> = e
                        .iter()
                        .map(|v| u8::try_from(*v).map_err(|_| Error::Parse("exponent too large".into())))
                        .collect::<Result<_>>()?;
                    mono = mono.mul(&Monomial::from_exponents(g, &e));
                }
            }
            let mut c = Multivector::zero(json.m);
            for tj in &t.coeff {
                c = &c + &Multivector::from_blade(json.m, Blade::from_indices(&tj.blade, json.m)?, tj.value()?);
            }
            out.add_term(mono, &c);
        }
        Ok(out)
    }
}

/// JSON form of a polynomial: per-term exponent lists for the groups present and
/// the coefficient in the multivector term format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub m: usize,
    pub terms: Vec<PolyTermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyTermJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<Vec<u32>>,
    pub coeff: Vec<TermJson>,
}

impl fmt::Display for MVPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (mono, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            if mono.is_one() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MVPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MVPolynomial[m={}]({self})", self.m)
    }
}

impl Add for &MVPolynomial {
    type Output = MVPolynomial;
    fn add(self, rhs: Self) -> MVPolynomial {
        self.p_add(rhs).expect("dimension mismatch")
    }
}

impl Sub for &MVPolynomial {
    type Output = MVPolynomial;
    fn sub(self, rhs: Self) -> MVPolynomial {
        self.p_sub(rhs).expect("dimension mismatch")
    }
}

impl Mul for &MVPolynomial {
    type Output = MVPolynomial;
    fn mul(self, rhs: Self) -> MVPolynomial {
        self.p_mul(rhs).expect("dimension mismatch")
    }
}

impl Neg for &MVPolynomial {
    type Output = MVPolynomial;
    fn neg(self) -> MVPolynomial {
        self.scale(&int(-1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::frac;

    fn e(m: usize, i: usize) -> Multivector {
        Multivector::generator(m, i)
    }

    fn var(m: usize, g: VarGroup, i: usize) -> MVPolynomial {
        MVPolynomial::var(m, g, i)
    }

    /// `u1 e1 - u2 e2`
    fn f_counter(m: usize) -> MVPolynomial {
        &var(m, VarGroup::U, 1).right_mul(&e(m, 1)) - &var(m, VarGroup::U, 2).right_mul(&e(m, 2))
    }

    #[test]
    fn products_respect_coefficient_order() {
        let m = 3;
        let a = var(m, VarGroup::U, 1).left_mul(&e(m, 1));
        let b = var(m, VarGroup::U, 2).left_mul(&e(m, 2));
        let u1u2 = Monomial::var(VarGroup::U, 1).mul(&Monomial::var(VarGroup::U, 2));
        assert_eq!(&a * &b, MVPolynomial::term(u1u2, &e(m, 1) * &e(m, 2)));
        let a = var(m, VarGroup::U, 1).left_mul(&e(m, 2));
        let b = var(m, VarGroup::U, 2).left_mul(&e(m, 1));
        assert_eq!(&a * &b, MVPolynomial::term(u1u2, -&(&e(m, 1) * &e(m, 2))));
        assert!((&a + &(-&a)).is_zero());
    }

    #[test]
    fn dirac_examples() {
        let m = 3;
        assert!(f_counter(m).dirac_left(VarGroup::U).is_zero());
        assert!(f_counter(m).dirac_right(VarGroup::U).is_zero());
        assert_eq!(var(m, VarGroup::X, 1).dirac_left(VarGroup::X), MVPolynomial::constant(e(m, 1)));
        // (Σ e_i u_i) D_u = Σ e_i e_i = -m
        let u = MVPolynomial::vector_var(m, VarGroup::U);
        assert_eq!(u.dirac_right(VarGroup::U), MVPolynomial::scalar_int(m, -(m as i64)));
        let q = &(&var(m, VarGroup::U, 1) * &var(m, VarGroup::U, 2)) + &var(m, VarGroup::U, 3);
        assert_eq!(q.dirac_right(VarGroup::U), q.dirac_left(VarGroup::U));
        // absent group: zero
        assert!(f_counter(m).dirac_left(VarGroup::X).is_zero());
    }

    #[test]
    fn dirac_of_u_times_monogenic() {
        // D_u (u p) = (-m - 2k + 2) p for left monogenic p of degree k-1
        let m = 4;
        let p = f_counter(m); // degree 1, so k = 2
        let up = &MVPolynomial::vector_var(m, VarGroup::U) * &p;
        assert_eq!(up.dirac_left(VarGroup::U), p.scale(&int(-(m as i64) - 4 + 2)));
    }

    #[test]
    fn euler_examples() {
        let m = 3;
        let u1 = var(m, VarGroup::U, 1);
        let u2 = var(m, VarGroup::U, 2);
        let p = &u1 * &u2;
        assert_eq!(p.euler(VarGroup::U), p.scale(&int(2)));
        assert!(MVPolynomial::one(m).euler(VarGroup::U).is_zero());
        let p = &(&u1 * &u1) * &u2;
        assert_eq!(p.euler(VarGroup::U), p.scale(&int(3)));
    }

    #[test]
    fn linear_substitution_examples() {
        let m = 2;
        let p = &var(m, VarGroup::U, 1) - &var(m, VarGroup::U, 2);
        let id = vec![vec![int(1), int(0)], vec![int(0), int(1)]];
        assert_eq!(p.substitute_linear(VarGroup::U, &id).unwrap(), p);
        let swap = vec![vec![int(0), int(1)], vec![int(1), int(0)]];
        assert_eq!(p.substitute_linear(VarGroup::U, &swap).unwrap(), -&p);
        let q = &(&var(m, VarGroup::U, 1) * &var(m, VarGroup::U, 2)) * &f_counter(m);
        let dil = vec![vec![frac(3, 2), int(0)], vec![int(0), frac(3, 2)]];
        assert_eq!(q.substitute_linear(VarGroup::U, &dil).unwrap(), q.scale(&frac(27, 8)));
    }

    #[test]
    fn evaluation() {
        let m = 3;
        let p = var(m, VarGroup::U, 1).right_mul(&e(m, 1));
        let v = p.evaluate(&[(VarGroup::U, vec![int(2), int(0), int(0)])]).unwrap();
        assert_eq!(v, Multivector::vector(m, &[int(2), int(0), int(0)]));
        assert!(MVPolynomial::zero(m).evaluate(&[]).unwrap().is_zero());
        assert!(p.evaluate(&[]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let m = 3;
        let p = &(&f_counter(m) * &var(m, VarGroup::X, 2)).scale(&frac(-5, 7)) + &MVPolynomial::scalar_int(m, 3);
        let json = serde_json::to_string(&p.to_json()).unwrap();
        let back: PolynomialJson = serde_json::from_str(&json).unwrap();
        assert_eq!(MVPolynomial::from_json(&back).unwrap(), p);
        assert_eq!(serde_json::to_string(&MVPolynomial::from_json(&back).unwrap().to_json()).unwrap(), json);
    }

    #[test]
    fn dimension_mismatch() {
        assert_eq!(MVPolynomial::one(2).p_mul(&MVPolynomial::one(3)), Err(Error::DimensionMismatch(2, 3)));
    }
}
