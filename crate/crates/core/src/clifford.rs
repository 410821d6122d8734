//! Exact arithmetic in the real Clifford algebra `Cl_m` with `e_i^2 = -1`,
//! and in its complexification.
//!
//! Basis blades are stored as bitmasks over the generators: bit `i - 1` set
//! means `e_i` occurs in the (ascending) product. A multivector is a sparse
//! map from blades to exact coefficients with no explicit zeros.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{parse_rational, ComplexRational, Rational, Scalar};

/// Largest supported algebra dimension.
pub const MAX_DIM: usize = 12;

pub fn check_dim(m: usize) -> Result<()> {
    if (2..=MAX_DIM).contains(&m) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(m))
    }
}

/// A basis blade `e_A`, `A ⊂ {1..m}`, encoded as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Blade(pub u16);

impl Blade {
    pub const SCALAR: Blade = Blade(0);

    /// Generator `e_i`, 1-based.
    pub fn generator(i: usize) -> Blade {
        debug_assert!((1..=MAX_DIM).contains(&i));
        Blade(1 << (i - 1))
    }

    /// Blade from (not necessarily sorted) generator indices. Repeated
    /// indices are rejected; use a product of generators for those.
    pub fn from_indices(indices: &[usize], m: usize) -> Result<Blade> {
        let mut bits = 0u16;
        for &i in indices {
            if i == 0 || i > m {
                return Err(Error::GeneratorOutOfRange { index: i, m });
            }
            let b = 1u16 << (i - 1);
            if bits & b != 0 {
                return Err(Error::Parse(format!("repeated generator e{i}")));
            }
            bits |= b;
        }
        Ok(Blade(bits))
    }

    pub fn grade(self) -> u32 {
        self.0.count_ones()
    }

    /// Ascending 1-based generator indices.
    pub fn indices(self) -> Vec<usize> {
        (0..16).filter(|b| self.0 & (1 << b) != 0).map(|b| b + 1).collect()
    }

    pub fn fits(self, m: usize) -> bool {
        (self.0 as u32) >> m == 0
    }

    /// `e_A e_B = sign * e_{A xor B}`; returns `(A xor B, sign is negative)`.
    pub fn product(self, rhs: Blade) -> (Blade, bool) {
        // transpositions needed to sort the concatenated index lists
        let mut a = self.0 >> 1;
        let mut swaps = 0;
        while a != 0 {
            swaps += (a & rhs.0).count_ones();
            a >>= 1;
        }
        // each shared generator contracts to e_i^2 = -1
        let contractions = (self.0 & rhs.0).count_ones();
        (Blade(self.0 ^ rhs.0), (swaps + contractions) % 2 == 1)
    }

    /// Sign of reversion on this blade: `(-1)^{r(r-1)/2}`.
    pub fn reverse_negates(self) -> bool {
        let r = self.grade();
        (r * r.saturating_sub(1) / 2) % 2 == 1
    }

    /// Sign of Clifford conjugation on this blade: `(-1)^{r(r+1)/2}`.
    pub fn conjugate_negates(self) -> bool {
        let r = self.grade();
        (r * (r + 1) / 2) % 2 == 1
    }
}

/// Element of `Cl_m` (or `Cl_m ⊗ C` when `S` is complex).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Multivector<S = Rational> {
    m: usize,
    terms: BTreeMap<Blade, S>,
}

pub type ComplexMultivector = Multivector<ComplexRational>;

impl<S: Scalar> Multivector<S> {
    pub fn zero(m: usize) -> Self {
        Multivector { m, terms: BTreeMap::new() }
    }

    pub fn scalar(m: usize, s: S) -> Self {
        Self::from_blade(m, Blade::SCALAR, s)
    }

    pub fn one(m: usize) -> Self {
        Self::scalar(m, S::one())
    }

    pub fn from_blade(m: usize, blade: Blade, s: S) -> Self {
        debug_assert!(blade.fits(m));
        let mut terms = BTreeMap::new();
        if !s.is_zero() {
            terms.insert(blade, s);
        }
        Multivector { m, terms }
    }

    /// Generator `e_i` (1-based).
    pub fn generator(m: usize, i: usize) -> Self {
        Self::from_blade(m, Blade::generator(i), S::one())
    }

    /// Builds from `(blade, coefficient)` pairs, merging repeats.
    pub fn from_terms(m: usize, terms: impl IntoIterator<Item = (Blade, S)>) -> Self {
        let mut out = Self::zero(m);
        for (b, s) in terms {
            out.add_term(b, s);
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &S)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, blade: Blade) -> S {
        self.terms.get(&blade).cloned().unwrap_or_else(S::zero)
    }

    pub fn scalar_part(&self) -> S {
        self.coefficient(Blade::SCALAR)
    }

    pub(crate) fn add_term(&mut self, blade: Blade, s: S) {
        if s.is_zero() {
            return;
        }
        match self.terms.entry(blade) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(s);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add_ref(&s);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub(crate) fn add_assign_ref(&mut self, rhs: &Self) {
        debug_assert_eq!(self.m, rhs.m);
        for (b, s) in &rhs.terms {
            self.add_term(*b, s.clone());
        }
    }

    pub(crate) fn sub_assign_ref(&mut self, rhs: &Self) {
        debug_assert_eq!(self.m, rhs.m);
        for (b, s) in &rhs.terms {
            self.add_term(*b, s.neg_ref());
        }
    }

    /// Multiply every coefficient by `s` (which commutes with everything).
    pub fn scale(&self, s: &S) -> Self {
        if s.is_zero() {
            return Self::zero(self.m);
        }
        Multivector {
            m: self.m,
            terms: self.terms.iter().map(|(b, c)| (*b, c.mul_ref(s))).collect(),
        }
    }

    /// Grades with a nonzero component.
    pub fn grades(&self) -> Vec<u32> {
        let mut g: Vec<u32> = self.terms.keys().map(|b| b.grade()).collect();
        g.sort_unstable();
        g.dedup();
        g
    }

    pub fn grade_part(&self, r: u32) -> Self {
        Multivector {
            m: self.m,
            terms: self.terms.iter().filter(|(b, _)| b.grade() == r).map(|(b, s)| (*b, s.clone())).collect(),
        }
    }

    pub fn is_scalar(&self) -> bool {
        self.terms.keys().all(|b| *b == Blade::SCALAR)
    }

    /// True for zero or a pure grade-1 element.
    pub fn is_vector(&self) -> bool {
        self.terms.keys().all(|b| b.grade() == 1)
    }

    /// Geometric product `self * rhs`.
    pub fn geometric_product(&self, rhs: &Self) -> Result<Self> {
        if self.m != rhs.m {
            return Err(Error::DimensionMismatch(self.m, rhs.m));
        }
        Ok(self.product_unchecked(rhs))
    }

    pub(crate) fn product_unchecked(&self, rhs: &Self) -> Self {
        let mut out = Self::zero(self.m);
        for (a, sa) in &self.terms {
            for (b, sb) in &rhs.terms {
                let (blade, neg) = a.product(*b);
                let c = sa.mul_ref(sb);
                out.add_term(blade, if neg { c.neg_ref() } else { c });
            }
        }
        out
    }

    fn map_signs(&self, negate: impl Fn(Blade) -> bool) -> Self {
        Multivector {
            m: self.m,
            terms: self
                .terms
                .iter()
                .map(|(b, s)| (*b, if negate(*b) { s.neg_ref() } else { s.clone() }))
                .collect(),
        }
    }

    /// Reversion: grade `r` scaled by `(-1)^{r(r-1)/2}`.
    pub fn reverse(&self) -> Self {
        self.map_signs(Blade::reverse_negates)
    }

    /// Clifford conjugation: grade `r` scaled by `(-1)^{r(r+1)/2}`.
    pub fn conjugate(&self) -> Self {
        self.map_signs(Blade::conjugate_negates)
    }

    /// Grade involution: grade `r` scaled by `(-1)^r`.
    pub fn involute(&self) -> Self {
        self.map_signs(|b| b.grade() % 2 == 1)
    }
}

impl Multivector<Rational> {
    pub fn from_int(m: usize, n: i64) -> Self {
        Self::scalar(m, Rational::from_integer(BigInt::from(n)))
    }

    /// Vector `Σ c_i e_i`.
    pub fn vector(m: usize, coords: &[Rational]) -> Self {
        debug_assert!(coords.len() <= m);
        Self::from_terms(m, coords.iter().enumerate().map(|(i, c)| (Blade::generator(i + 1), c.clone())))
    }

    /// Coordinates of a grade-1 element, `None` if other grades are present.
    pub fn as_vector(&self) -> Option<Vec<Rational>> {
        if !self.is_vector() {
            return None;
        }
        Some((1..=self.m).map(|i| self.coefficient(Blade::generator(i))).collect())
    }

    /// Euclidean `‖a‖² = Σ_A a_A²`; for vectors this is `-a²`.
    pub fn norm_sq(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |acc, s| acc + s * s)
    }

    /// `v^{-1} = -v / ‖v‖²`.
    pub fn vector_inverse(&self) -> Result<Self> {
        if !self.is_vector() {
            return Err(Error::NotAVector(self.to_string()));
        }
        if self.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(self.scale(&(-self.norm_sq().recip())))
    }

    /// `a x ã` for a unit vector `a`: reflects `x` in the hyperplane orthogonal to `a`.
    pub fn reflect(a: &Self, x: &Self) -> Result<Self> {
        if a.m != x.m {
            return Err(Error::DimensionMismatch(a.m, x.m));
        }
        if !a.is_vector() || a.is_zero() {
            return Err(Error::NotAVector(a.to_string()));
        }
        if !x.is_vector() {
            return Err(Error::NotAVector(x.to_string()));
        }
        let n = a.norm_sq();
        if !n.is_one() {
            return Err(Error::NotUnit(n.to_string()));
        }
        Ok(a.product_unchecked(x).product_unchecked(&a.reverse()))
    }

    /// Membership in the Lipschitz group (nonzero products of vectors, up to scale):
    /// parity-homogeneous, `a ã` a nonzero scalar and `a e_i ã` a vector for every `i`.
    pub fn is_versor(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        let parities: Vec<u32> = self.grades().iter().map(|g| g % 2).collect();
        if parities.iter().any(|p| *p != parities[0]) {
            return false;
        }
        let rev = self.reverse();
        let n = self.product_unchecked(&rev);
        if !n.is_scalar() || n.is_zero() {
            return false;
        }
        (1..=self.m).all(|i| self.product_unchecked(&Self::generator(self.m, i)).product_unchecked(&rev).is_vector())
    }

    /// Inverse of a versor, `a^{-1} = ā / (a ā)`. Fails when `a ā` is not an invertible scalar.
    pub fn versor_inverse(&self) -> Result<Self> {
        let bar = self.conjugate();
        let n = self.product_unchecked(&bar);
        if !n.is_scalar() || n.is_zero() {
            return Err(Error::Singular(format!("{self} is not invertible as a versor")));
        }
        Ok(bar.scale(&n.scalar_part().recip()))
    }

    /// Embeds into the complexified algebra.
    pub fn complexify(&self) -> ComplexMultivector {
        Multivector {
            m: self.m,
            terms: self.terms.iter().map(|(b, s)| (*b, Complex::new(s.clone(), Rational::zero()))).collect(),
        }
    }

    /// Parses the text form written by `Display`, e.g. `3/2*e1e2 + -1*e3 + 5`.
    pub fn parse(m: usize, text: &str) -> Result<Self> {
        check_dim(m)?;
        let text = text.trim();
        let mut out = Self::zero(m);
        if text == "0" {
            return Ok(out);
        }
        for term in text.split(" + ") {
            let (coef, blade) = match term.split_once('*') {
                Some((c, b)) => (c, parse_blade(m, b)?),
                None => (term, Blade::SCALAR),
            };
            let q = parse_rational(coef).ok_or_else(|| Error::Parse(format!("bad coefficient {coef:?}")))?;
            out.add_term(blade, q);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> MultivectorJson {
        MultivectorJson {
            m: self.m,
            terms: self
                .terms
                .iter()
                .map(|(b, s)| TermJson { blade: b.indices(), num: s.numer().to_string(), den: s.denom().to_string() })
                .collect(),
        }
    }

    pub fn from_json(json: &MultivectorJson) -> Result<Self> {
        check_dim(json.m)?;
        let mut out = Self::zero(json.m);
        for t in &json.terms {
            out.add_term(Blade::from_indices(&t.blade, json.m)?, t.value()?);
        }
        Ok(out)
    }
}

fn parse_blade(m: usize, s: &str) -> Result<Blade> {
    let s = s.trim();
    let body = s.strip_prefix('e').ok_or_else(|| Error::Parse(format!("bad blade {s:?}")))?;
    let idx: Vec<usize> = body
        .split('e')
        .map(|d| d.parse::<usize>().map_err(|_| Error::Parse(format!("bad blade {s:?}"))))
        .collect::<Result<_>>()?;
    Blade::from_indices(&idx, m)
}

/// JSON form `{m, terms: [{blade: [i, ...], num, den}]}`; integers are
/// decimal strings so arbitrary precision survives the round trip.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultivectorJson {
    pub m: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub blade: Vec<usize>,
    pub num: String,
    pub den: String,
}

impl TermJson {
    pub(crate) fn value(&self) -> Result<Rational> {
        let n: BigInt = self.num.parse().map_err(|_| Error::Parse(format!("bad numerator {:?}", self.num)))?;
        let d: BigInt = self.den.parse().map_err(|_| Error::Parse(format!("bad denominator {:?}", self.den)))?;
        if d.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Rational::new(n, d))
    }
}

impl fmt::Display for Multivector<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (b, s)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            if *b == Blade::SCALAR {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}*")?;
                for i in b.indices() {
                    write!(f, "e{i}")?;
                }
            }
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for Multivector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().map(|(b, s)| (b.indices(), s))).finish()
    }
}

impl<S: Scalar> Add for &Multivector<S> {
    type Output = Multivector<S>;
    fn add(self, rhs: Self) -> Multivector<S> {
        assert_eq!(self.m, rhs.m, "dimension mismatch");
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl<S: Scalar> Sub for &Multivector<S> {
    type Output = Multivector<S>;
    fn sub(self, rhs: Self) -> Multivector<S> {
        assert_eq!(self.m, rhs.m, "dimension mismatch");
        let mut out = self.clone();
        out.sub_assign_ref(rhs);
        out
    }
}

impl<S: Scalar> Neg for &Multivector<S> {
    type Output = Multivector<S>;
    fn neg(self) -> Multivector<S> {
        self.scale(&S::one().neg_ref())
    }
}

/// Geometric product; panics on dimension mismatch (see [`Multivector::geometric_product`]).
impl<S: Scalar> Mul for &Multivector<S> {
    type Output = Multivector<S>;
    fn mul(self, rhs: Self) -> Multivector<S> {
        assert_eq!(self.m, rhs.m, "dimension mismatch");
        self.product_unchecked(rhs)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $f:ident),*) => {$(
        impl<S: Scalar> $tr for Multivector<S> {
            type Output = Multivector<S>;
            fn $f(self, rhs: Self) -> Multivector<S> { (&self).$f(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

/// Witt basis of `Cl_{2n}(C)` and the primitive idempotent generating the spinor space.
#[derive(Debug, Clone)]
pub struct WittBasis {
    /// `f_j = (e_j - i e_{j+n}) / 2`
    pub f: Vec<ComplexMultivector>,
    /// `f_j† = -(e_j + i e_{j+n}) / 2`
    pub f_dagger: Vec<ComplexMultivector>,
    /// `I = f_1 f_1† ... f_n f_n†`
    pub idempotent: ComplexMultivector,
}

pub fn witt_basis(m: usize) -> Result<WittBasis> {
    check_dim(m)?;
    if m % 2 == 1 {
        return Err(Error::OddDimension(m));
    }
    let n = m / 2;
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let re = |q: Rational| Complex::new(q, Rational::zero());
    let im = |q: Rational| Complex::new(Rational::zero(), q);
    let mut f = Vec::with_capacity(n);
    let mut fd = Vec::with_capacity(n);
    for j in 1..=n {
        f.push(ComplexMultivector::from_terms(
            m,
            [(Blade::generator(j), re(half.clone())), (Blade::generator(j + n), im(-half.clone()))],
        ));
        fd.push(ComplexMultivector::from_terms(
            m,
            [(Blade::generator(j), re(-half.clone())), (Blade::generator(j + n), im(-half.clone()))],
        ));
    }
    let mut idempotent = ComplexMultivector::one(m);
    for (a, b) in f.iter().zip(&fd) {
        idempotent = &(&idempotent * a) * b;
    }
    Ok(WittBasis { f, f_dagger: fd, idempotent })
}

impl WittBasis {
    /// Projects `a` into the spinor left ideal `Cl_m(C) I`.
    pub fn to_spinor(&self, a: &Multivector) -> ComplexMultivector {
        &a.complexify() * &self.idempotent
    }

    /// Membership in the left ideal: `s I = s`.
    pub fn is_spinor(&self, s: &ComplexMultivector) -> bool {
        &(s * &self.idempotent) == s
    }
}

impl Multivector<Rational> {
    pub fn is_positive_scalar(&self) -> bool {
        self.is_scalar() && self.scalar_part().is_positive()
    }
}
