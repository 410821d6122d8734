//! Polynomials divided by a power of the norm of one vector variable.
//!
//! A [`RadialForm`] represents `N(y, w) · ‖y‖^{-t}`. This is exactly the
//! class of functions produced by the inversion `x = y^{-1}`,
//! `u = y w y / ‖y‖²` and the Cauchy kernel `G(y) = y / ‖y‖^m`; it is closed
//! under the Dirac operator in `y`, under every operator acting only on the
//! other variable groups, and under multiplication by polynomials.

use std::fmt;

use num_traits::{One, Zero};

use crate::clifford::Multivector;
use crate::error::{Error, Result};
use crate::poly::{MVPolynomial, Monomial, VarGroup};
use crate::scalar::{int, rational_sqrt, Rational};

#[derive(Clone, PartialEq, Eq)]
pub struct RadialForm {
    numerator: MVPolynomial,
    weight: u32,
    radial: VarGroup,
}

/// Quotient and remainder of `p` by `‖g‖²`, using `g_1²` as leading term.
pub fn divide_by_norm_sq(p: &MVPolynomial, g: VarGroup) -> (MVPolynomial, MVPolynomial) {
    let m = p.dim();
    let mut rem = p.clone();
    let mut quot = MVPolynomial::zero(m);
    let top = p.terms().map(|(k, _)| k.exp(g, 1)).max().unwrap_or(0);
    let mut a = top;
    while a >= 2 {
        let batch: Vec<(Monomial, Multivector)> =
            rem.terms().filter(|(k, _)| k.exp(g, 1) == a).map(|(k, c)| (*k, c.clone())).collect();
        for (mono, c) in batch {
            // mono = g1^2 * lowered
            let lowered = {
                let mut e = mono.exponents(g).to_vec();
                e[0] -= 2;
                let (_, rest) = mono.split(g);
                rest.mul(&Monomial::from_exponents(g, &e))
            };
            quot.add_term(lowered, &c);
            rem.add_term(mono, &-&c);
            let neg = -&c;
            for j in 2..=m {
                let sq = Monomial::var(g, j).mul(&Monomial::var(g, j));
                rem.add_term(lowered.mul(&sq), &neg);
            }
        }
        a -= 1;
    }
    (quot, rem)
}

impl RadialForm {
    /// `numerator · ‖radial‖^{-weight}`, canonicalized.
    pub fn new(numerator: MVPolynomial, weight: u32, radial: VarGroup) -> Self {
        let mut r = RadialForm { numerator, weight, radial };
        r.canonicalize();
        r
    }

    pub fn from_polynomial(p: MVPolynomial, radial: VarGroup) -> Self {
        RadialForm { numerator: p, weight: 0, radial }
    }

    pub fn zero(m: usize, radial: VarGroup) -> Self {
        Self::from_polynomial(MVPolynomial::zero(m), radial)
    }

    /// `‖g‖^{-t}`.
    pub fn norm_power(m: usize, g: VarGroup, t: u32) -> Self {
        Self::new(MVPolynomial::one(m), t, g)
    }

    /// Cauchy kernel `G(g) = g / ‖g‖^m`.
    pub fn cauchy_kernel(m: usize, g: VarGroup) -> Self {
        Self::new(MVPolynomial::vector_var(m, g), m as u32, g)
    }

    pub fn numerator(&self) -> &MVPolynomial {
        &self.numerator
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn radial(&self) -> VarGroup {
        self.radial
    }

    pub fn dim(&self) -> usize {
        self.numerator.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Divides out `‖y‖²` factors while the weight allows it.
    fn canonicalize(&mut self) {
        if self.numerator.is_zero() {
            self.weight = 0;
            return;
        }
        while self.weight >= 2 {
            let (q, r) = divide_by_norm_sq(&self.numerator, self.radial);
            if !r.is_zero() {
                break;
            }
            self.numerator = q;
            self.weight -= 2;
        }
    }

    fn raised_to(&self, weight: u32) -> MVPolynomial {
        debug_assert!(weight >= self.weight && (weight - self.weight) % 2 == 0);
        let s = MVPolynomial::norm_sq_var(self.dim(), self.radial);
        &self.numerator * &s.pow((weight - self.weight) / 2)
    }

    fn common(&self, rhs: &Self) -> Result<(MVPolynomial, MVPolynomial, u32)> {
        if self.dim() != rhs.dim() {
            return Err(Error::DimensionMismatch(self.dim(), rhs.dim()));
        }
        if self.radial != rhs.radial && !self.is_zero() && !rhs.is_zero() && (self.weight > 0 || rhs.weight > 0) {
            return Err(Error::Unsupported(format!("radial groups {} and {} differ", self.radial, rhs.radial)));
        }
        if self.is_zero() {
            return Ok((MVPolynomial::zero(self.dim()), rhs.numerator.clone(), rhs.weight));
        }
        if rhs.is_zero() {
            return Ok((self.numerator.clone(), MVPolynomial::zero(self.dim()), self.weight));
        }
        if (self.weight + rhs.weight) % 2 == 1 {
            return Err(Error::WeightParity(self.weight, rhs.weight));
        }
        let w = self.weight.max(rhs.weight);
        Ok((self.raised_to(w), rhs.raised_to(w), w))
    }

    fn radial_of(&self, rhs: &Self) -> VarGroup {
        if self.weight > 0 || rhs.is_zero() {
            self.radial
        } else {
            rhs.radial
        }
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        let (a, b, w) = self.common(rhs)?;
        Ok(Self::new(&a + &b, w, self.radial_of(rhs)))
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        let (a, b, w) = self.common(rhs)?;
        Ok(Self::new(&a - &b, w, self.radial_of(rhs)))
    }

    /// Equality as functions away from `y = 0`: cross-multiplied numerators agree.
    pub fn equals(&self, rhs: &Self) -> bool {
        match self.common(rhs) {
            Ok((a, b, _)) => a == b,
            Err(_) => self.is_zero() && rhs.is_zero(),
        }
    }

    /// `p · self`.
    pub fn left_mul_poly(&self, p: &MVPolynomial) -> Self {
        Self::new(p * &self.numerator, self.weight, self.radial)
    }

    /// `self · p`.
    pub fn right_mul_poly(&self, p: &MVPolynomial) -> Self {
        Self::new(&self.numerator * p, self.weight, self.radial)
    }

    /// Product of two forms with the same radial group.
    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.radial != rhs.radial && self.weight > 0 && rhs.weight > 0 {
            return Err(Error::Unsupported("product of forms over different radial groups".into()));
        }
        Ok(Self::new(&self.numerator * &rhs.numerator, self.weight + rhs.weight, self.radial_of(rhs)))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.numerator.scale(s), self.weight, self.radial)
    }

    /// Multiplies by `‖y‖^e`.
    pub fn mul_norm_power(&self, e: i64) -> Result<Self> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let t = self.weight as i64 - e;
        if t >= 0 {
            return Ok(Self::new(self.numerator.clone(), t as u32, self.radial));
        }
        if t % 2 != 0 {
            return Err(Error::WeightParity(self.weight, e.unsigned_abs() as u32));
        }
        let s = MVPolynomial::norm_sq_var(self.dim(), self.radial);
        Ok(Self::new(&self.numerator * &s.pow((-t / 2) as u32), 0, self.radial))
    }

    /// Applies an operator that does not involve the radial group (for
    /// example `D_w` or a projection in `w`) to the numerator.
    pub fn map_numerator(&self, f: impl FnOnce(&MVPolynomial) -> MVPolynomial) -> Self {
        Self::new(f(&self.numerator), self.weight, self.radial)
    }

    pub fn try_map_numerator(&self, f: impl FnOnce(&MVPolynomial) -> Result<MVPolynomial>) -> Result<Self> {
        Ok(Self::new(f(&self.numerator)?, self.weight, self.radial))
    }

    /// Left Dirac operator in the radial group:
    /// `D_y (N ‖y‖^{-t}) = (‖y‖² D_y N - t y N) ‖y‖^{-t-2}`.
    pub fn dirac_left_radial(&self) -> Self {
        let m = self.dim();
        let g = self.radial;
        let dn = self.numerator.dirac_left(g);
        if self.weight == 0 {
            return Self::new(dn, 0, g);
        }
        let s = MVPolynomial::norm_sq_var(m, g);
        let y = MVPolynomial::vector_var(m, g);
        let num = &(&s * &dn) - &(&y * &self.numerator).scale(&int(self.weight as i64));
        Self::new(num, self.weight + 2, g)
    }

    /// Right Dirac operator in the radial group.
    pub fn dirac_right_radial(&self) -> Self {
        let m = self.dim();
        let g = self.radial;
        let dn = self.numerator.dirac_right(g);
        if self.weight == 0 {
            return Self::new(dn, 0, g);
        }
        let s = MVPolynomial::norm_sq_var(m, g);
        let y = MVPolynomial::vector_var(m, g);
        let num = &(&dn * &s) - &(&self.numerator * &y).scale(&int(self.weight as i64));
        Self::new(num, self.weight + 2, g)
    }

    /// Evaluates at rational points. The norm power is kept apart because
    /// odd weights need a square root.
    pub fn evaluate(&self, points: &[(VarGroup, Vec<Rational>)]) -> Result<RadialValue> {
        let radius_sq = match points.iter().find(|(g, _)| *g == self.radial) {
            Some((_, p)) => p.iter().fold(Rational::zero(), |acc, v| acc + v * v),
            None if self.weight == 0 => Rational::one(),
            None => return Err(Error::Hypothesis(format!("group {} left unassigned", self.radial))),
        };
        if radius_sq.is_zero() && self.weight > 0 {
            return Err(Error::Singular(format!("{} = 0", self.radial)));
        }
        Ok(RadialValue { numerator: self.numerator.evaluate(points)?, radius_sq, weight: self.weight })
    }

    /// Inversion image `G(y) F(y^{-1}, y w y / ‖y‖²)` of a form in
    /// `(point, direction)` variables, homogeneous of degree `k` in the
    /// direction group, written in the `(to_point, to_direction)` variables.
    pub fn inversion_image(&self, frame: Frame, to: Frame, k: u32) -> Result<Self> {
        self.invert(frame, to, k, true)
    }

    /// Same substitution as [`RadialForm::inversion_image`] without the kernel factor.
    pub fn inversion_transport(&self, frame: Frame, to: Frame, k: u32) -> Result<Self> {
        self.invert(frame, to, k, false)
    }

    fn invert(&self, frame: Frame, to: Frame, k: u32, with_kernel: bool) -> Result<Self> {
        let m = self.dim();
        if !self.numerator.is_homogeneous(frame.direction, k) {
            return Err(Error::NotHomogeneous { group: frame.direction.name(), degree: k });
        }
        if self.weight > 0 && self.radial != frame.point {
            return Err(Error::Unsupported("radial group must be the point group".into()));
        }
        if self.is_zero() {
            return Ok(Self::zero(m, to.point));
        }
        let s = MVPolynomial::norm_sq_var(m, to.point);
        let inner = MVPolynomial::inner_var(m, to.direction, to.point);
        // u_i ‖y‖² = w_i ‖y‖² - 2 y_i ⟨w, y⟩
        let dir_images: Vec<MVPolynomial> = (1..=m)
            .map(|i| {
                &(&MVPolynomial::var(m, to.direction, i) * &s)
                    - &(&MVPolynomial::var(m, to.point, i) * &inner).scale(&int(2))
            })
            .collect();
        // x_i ‖y‖² = -y_i
        let point_images: Vec<MVPolynomial> =
            (1..=m).map(|i| MVPolynomial::var(m, to.point, i).scale(&int(-1))).collect();

        let (_, a_max) = self.numerator.degree_range(frame.point).unwrap_or((0, 0));
        let mut num = MVPolynomial::zero(m);
        for a in 0..=a_max {
            let part = self.numerator.homogeneous_part(frame.point, a);
            if part.is_zero() {
                continue;
            }
            let sub = part.substitute(frame.direction, &dir_images)?.substitute(frame.point, &point_images)?;
            num = &num + &(&sub * &s.pow(a_max - a));
        }
        // ‖y‖^{-t} becomes ‖y'‖^{t}
        let kernel_weight = if with_kernel { m as i64 } else { 0 };
        let weight = 2 * a_max as i64 + 2 * k as i64 + kernel_weight - self.weight as i64;
        if with_kernel {
            num = &MVPolynomial::vector_var(m, to.point) * &num;
        }
        if weight >= 0 {
            return Ok(Self::new(num, weight as u32, to.point));
        }
        if weight % 2 != 0 {
            return Err(Error::WeightParity(self.weight, m as u32));
        }
        Ok(Self::new(&num * &s.pow((-weight / 2) as u32), 0, to.point))
    }
}

/// A pair of variable groups playing the roles of base point and direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Frame {
    pub point: VarGroup,
    pub direction: VarGroup,
}

impl Frame {
    pub const XU: Frame = Frame { point: VarGroup::X, direction: VarGroup::U };
    pub const YW: Frame = Frame { point: VarGroup::Y, direction: VarGroup::W };
}

/// `G(y) f(y^{-1}, y w y / ‖y‖²)` for `f(x, u)` homogeneous of degree `k` in `u`.
pub fn inversion_image(f: &MVPolynomial, k: u32) -> Result<RadialForm> {
    RadialForm::from_polynomial(f.clone(), VarGroup::X).inversion_image(Frame::XU, Frame::YW, k)
}

/// `D_y r` for a form over `y`.
pub fn dirac_left_radial(r: &RadialForm) -> RadialForm {
    r.dirac_left_radial()
}

/// Value of a [`RadialForm`] at a point: `numerator · (radius_sq)^{-weight/2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadialValue {
    pub numerator: Multivector,
    pub radius_sq: Rational,
    pub weight: u32,
}

impl RadialValue {
    /// Combined value when it is rational (even weight or a square radius).
    pub fn to_multivector(&self) -> Option<Multivector> {
        let r = if self.weight % 2 == 0 {
            crate::scalar::pow(&self.radius_sq, -((self.weight / 2) as i32))
        } else {
            let root = rational_sqrt(&self.radius_sq)?;
            crate::scalar::pow(&root, -(self.weight as i32))
        };
        Some(self.numerator.scale(&r))
    }
}

impl fmt::Display for RadialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.weight == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "[{}] / |{}|^{}", self.numerator, self.radial, self.weight)
        }
    }
}

impl fmt::Debug for RadialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RadialForm({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::frac;

    const Y: VarGroup = VarGroup::Y;

    #[test]
    fn division_by_norm() {
        let m = 3;
        let s = MVPolynomial::norm_sq_var(m, Y);
        let p = &MVPolynomial::var(m, Y, 2) + &MVPolynomial::vector_var(m, VarGroup::W);
        let (q, r) = divide_by_norm_sq(&(&p * &s), Y);
        assert!(r.is_zero());
        assert_eq!(q, p);
        let (_, r) = divide_by_norm_sq(&(&p * &MVPolynomial::var(m, Y, 1)), Y);
        assert!(!r.is_zero());
    }

    #[test]
    fn canonical_forms_compare() {
        let m = 3;
        let s = MVPolynomial::norm_sq_var(m, Y);
        let y = MVPolynomial::vector_var(m, Y);
        let a = RadialForm::new(&y * &s, 5, Y);
        assert_eq!(a.weight(), 3);
        assert_eq!(a.numerator(), &y);
        let b = RadialForm::new(y.clone(), 3, Y);
        assert_eq!(a, b);
        assert!(a.equals(&b));
        assert!(!a.equals(&RadialForm::new(y, 5, Y)));
    }

    #[test]
    fn dirac_of_norm_power() {
        // D_y ‖y‖^{-t} = -t y ‖y‖^{-t-2}
        let m = 4;
        for t in [1, 2, 3, 6] {
            let d = RadialForm::norm_power(m, Y, t).dirac_left_radial();
            let expect = RadialForm::new(MVPolynomial::vector_var(m, Y).scale(&int(-(t as i64))), t + 2, Y);
            assert!(d.equals(&expect), "t = {t}");
        }
    }

    #[test]
    fn kernel_is_monogenic() {
        for m in 2..=6 {
            assert!(RadialForm::cauchy_kernel(m, Y).dirac_left_radial().is_zero());
            assert!(RadialForm::cauchy_kernel(m, Y).dirac_right_radial().is_zero());
        }
    }

    #[test]
    fn evaluation() {
        let m = 3;
        let v = RadialForm::norm_power(m, Y, 2).evaluate(&[(Y, vec![int(1), int(2), int(2)])]).unwrap();
        assert_eq!(v.to_multivector().unwrap(), Multivector::scalar(m, frac(1, 9)));
        let v = RadialForm::norm_power(m, Y, 3).evaluate(&[(Y, vec![int(1), int(2), int(2)])]).unwrap();
        assert_eq!(v.to_multivector().unwrap(), Multivector::scalar(m, frac(1, 27)));
        let v = RadialForm::norm_power(m, Y, 1).evaluate(&[(Y, vec![int(1), int(1), int(0)])]).unwrap();
        assert_eq!(v.to_multivector(), None);
        assert_eq!(v.weight, 1);
        assert!(RadialForm::zero(m, Y).evaluate(&[(Y, vec![int(0); 3])]).unwrap().numerator.is_zero());
        assert!(RadialForm::norm_power(m, Y, 2).evaluate(&[(Y, vec![int(0); 3])]).is_err());
    }

    #[test]
    fn inversion_of_constant_is_kernel() {
        let m = 3;
        let img = inversion_image(&MVPolynomial::one(m), 0).unwrap();
        assert_eq!(img, RadialForm::cauchy_kernel(m, Y));
    }

    #[test]
    fn inversion_of_x1() {
        // y (-y1) ‖y‖^{-m-2}
        let m = 3;
        let img = inversion_image(&MVPolynomial::var(m, VarGroup::X, 1), 0).unwrap();
        let expect = RadialForm::new(
            &MVPolynomial::vector_var(m, Y) * &MVPolynomial::var(m, Y, 1).scale(&int(-1)),
            m as u32 + 2,
            Y,
        );
        assert_eq!(img, expect);
    }

    #[test]
    fn non_homogeneous_rejected() {
        let m = 3;
        let f = &MVPolynomial::var(m, VarGroup::U, 1) + &MVPolynomial::one(m);
        assert!(matches!(inversion_image(&f, 1), Err(Error::NotHomogeneous { .. })));
    }
}
