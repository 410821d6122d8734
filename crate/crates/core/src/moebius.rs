//! Möbius transformations `x = (a y + b)(c y + d)^{-1}` given by Vahlen
//! matrices, their conformal weights and the intertwining identity for `R_k`.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::clifford::Multivector;
use crate::error::{Error, Result};
use crate::operators::{OperatorTag, RsOperators};
use crate::poly::{MVPolynomial, VarGroup};
use crate::radial::{Frame, RadialForm};
use crate::scalar::{int, pow, rational_sqrt, Rational};
use crate::spaces::Side;

const X: VarGroup = VarGroup::X;
const U: VarGroup = VarGroup::U;
const Y: VarGroup = VarGroup::Y;
const W: VarGroup = VarGroup::W;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapClass {
    Translation,
    Dilation,
    Reflection,
    Inversion,
    Composite,
}

impl MapClass {
    pub const ELEMENTARY: [MapClass; 4] = [MapClass::Inversion, MapClass::Translation, MapClass::Dilation, MapClass::Reflection];

    pub fn name(self) -> &'static str {
        match self {
            MapClass::Translation => "translation",
            MapClass::Dilation => "dilation",
            MapClass::Reflection => "reflection",
            MapClass::Inversion => "inversion",
            MapClass::Composite => "composite",
        }
    }
}

impl fmt::Display for MapClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MapClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [MapClass::Translation, MapClass::Dilation, MapClass::Reflection, MapClass::Inversion, MapClass::Composite]
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown map {s:?}")))
    }
}

/// A Vahlen matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoebiusMap {
    pub a: Multivector,
    pub b: Multivector,
    pub c: Multivector,
    pub d: Multivector,
    pub class: MapClass,
}

/// Outcome of [`MoebiusMap::validate_vahlen`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VahlenReport {
    pub valid: bool,
    pub determinant: Option<i8>,
    pub diagnostics: Vec<String>,
}

fn norm_power(n2: &Rational, e: u32) -> Result<Rational> {
    if e % 2 == 0 {
        return Ok(pow(n2, (e / 2) as i32));
    }
    let r = rational_sqrt(n2).ok_or_else(|| Error::Unsupported(format!("norm sqrt({n2}) is irrational")))?;
    Ok(pow(&r, e as i32))
}

impl MoebiusMap {
    pub fn new(a: Multivector, b: Multivector, c: Multivector, d: Multivector) -> Result<Self> {
        let m = a.dim();
        for e in [&b, &c, &d] {
            if e.dim() != m {
                return Err(Error::DimensionMismatch(e.dim(), m));
            }
        }
        Ok(MoebiusMap { a, b, c, d, class: MapClass::Composite })
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn identity(m: usize) -> Self {
        MoebiusMap {
            a: Multivector::one(m),
            b: Multivector::zero(m),
            c: Multivector::zero(m),
            d: Multivector::one(m),
            class: MapClass::Translation,
        }
    }

    /// `y ↦ y + t`.
    pub fn translation(t: &Multivector) -> Result<Self> {
        if !t.is_vector() {
            return Err(Error::NotAVector(t.to_string()));
        }
        let m = t.dim();
        Ok(MoebiusMap { a: Multivector::one(m), b: t.clone(), c: Multivector::zero(m), d: Multivector::one(m), class: MapClass::Translation })
    }

    /// `a = μ`, `d = 1/μ`, so `y ↦ μ² y` with determinant one.
    pub fn dilation(m: usize, mu: &Rational) -> Result<Self> {
        if *mu <= Rational::zero() {
            return Err(Error::Hypothesis(format!("dilation factor must be positive, got {mu}")));
        }
        Ok(MoebiusMap {
            a: Multivector::scalar(m, mu.clone()),
            b: Multivector::zero(m),
            c: Multivector::zero(m),
            d: Multivector::scalar(m, mu.recip()),
            class: MapClass::Dilation,
        })
    }

    /// `a = e_j`, `d = -e_j`, so `y ↦ e_j y e_j`, the reflection in the
    /// hyperplane orthogonal to `e_j`.
    pub fn reflection(m: usize, j: usize) -> Result<Self> {
        if j == 0 || j > m {
            return Err(Error::GeneratorOutOfRange { index: j, m });
        }
        let e = Multivector::generator(m, j);
        Ok(MoebiusMap { a: e.clone(), b: Multivector::zero(m), c: Multivector::zero(m), d: -&e, class: MapClass::Reflection })
    }

    /// `y ↦ y^{-1}`.
    pub fn inversion(m: usize) -> Self {
        MoebiusMap { a: Multivector::zero(m), b: Multivector::one(m), c: Multivector::one(m), d: Multivector::zero(m), class: MapClass::Inversion }
    }

    /// Matrix product `self · other`, which acts as `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        let class = if self.class == other.class && matches!(self.class, MapClass::Translation | MapClass::Dilation) {
            self.class
        } else {
            MapClass::Composite
        };
        Ok(MoebiusMap {
            a: &(&self.a * &other.a) + &(&self.b * &other.c),
            b: &(&self.a * &other.b) + &(&self.b * &other.d),
            c: &(&self.c * &other.a) + &(&self.d * &other.c),
            d: &(&self.c * &other.b) + &(&self.d * &other.d),
            class,
        })
    }

    /// Checks the three Vahlen conditions exactly.
    ///
    /// The mixed products are accepted when they lie in `R ⊕ R^m`, since the
    /// identity and the inversion produce scalars there.
    pub fn validate_vahlen(&self) -> VahlenReport {
        let mut diagnostics = Vec::new();
        for (name, e) in [("a", &self.a), ("b", &self.b), ("c", &self.c), ("d", &self.d)] {
            if !e.is_zero() && !e.is_versor() {
                diagnostics.push(format!("condition 1: {name} = {e} is not a product of vectors"));
            }
        }
        let products = [
            ("a rev(b)", &self.a * &self.b.reverse()),
            ("c rev(d)", &self.c * &self.d.reverse()),
            ("rev(b) c", &self.b.reverse() * &self.c),
            ("rev(d) a", &self.d.reverse() * &self.a),
        ];
        for (name, p) in products {
            if p.grades().iter().any(|g| *g > 1) {
                diagnostics.push(format!("condition 2: {name} = {p} is not in R + R^m"));
            }
        }
        let det = &(&self.a * &self.d.reverse()) - &(&self.b * &self.c.reverse());
        let determinant = if det == Multivector::one(self.dim()) {
            Some(1)
        } else if det == Multivector::from_int(self.dim(), -1) {
            Some(-1)
        } else {
            diagnostics.push(format!("condition 3: a rev(d) - b rev(c) = {det}, expected ±1"));
            None
        };
        VahlenReport { valid: diagnostics.is_empty(), determinant, diagnostics }
    }

    fn denominator_at(&self, x: &Multivector) -> Result<Multivector> {
        if !x.is_vector() {
            return Err(Error::NotAVector(x.to_string()));
        }
        let v = &(&self.c * x) + &self.d;
        if v.is_zero() {
            return Err(Error::Singular(format!("pole of the map at {x}")));
        }
        Ok(v)
    }

    /// `(a x + b)(c x + d)^{-1}`.
    pub fn apply(&self, x: &Multivector) -> Result<Multivector> {
        let v = self.denominator_at(x)?;
        let out = &(&(&self.a * x) + &self.b) * &v.versor_inverse()?;
        if !out.is_vector() {
            return Err(Error::NotAVector(out.to_string()));
        }
        Ok(out)
    }

    /// `J_1 = rev(c x + d) / ‖c x + d‖^m`.
    pub fn j1_weight(&self, x: &Multivector) -> Result<Multivector> {
        let v = self.denominator_at(x)?;
        Ok(v.reverse().scale(&norm_power(&v.norm_sq(), self.dim() as u32)?.recip()))
    }

    /// `J_{-1} = (c x + d) / ‖c x + d‖^{m+2}`.
    pub fn jm1_weight(&self, x: &Multivector) -> Result<Multivector> {
        let v = self.denominator_at(x)?;
        Ok(v.scale(&norm_power(&v.norm_sq(), self.dim() as u32 + 2)?.recip()))
    }

    fn is_pure_inversion(&self) -> bool {
        let m = self.dim();
        self.a.is_zero() && self.d.is_zero() && self.b == Multivector::one(m) && self.c == Multivector::one(m)
    }

    fn affine_parts(&self) -> Result<Option<AffineParts>> {
        if !self.c.is_zero() {
            return Ok(None);
        }
        let m = self.dim();
        let dinv = self.d.versor_inverse()?;
        let n2 = self.d.norm_sq();
        let coords = |v: &Multivector| -> Result<Vec<Rational>> {
            v.as_vector().ok_or_else(|| Error::NotAVector(v.to_string()))
        };
        let mut point = vec![vec![Rational::zero(); m]; m];
        let mut dir = vec![vec![Rational::zero(); m]; m];
        for j in 1..=m {
            let e = Multivector::generator(m, j);
            let col = coords(&(&(&self.a * &e) * &dinv))?;
            let wcol = coords(&(&(&self.d.reverse() * &e) * &self.d).scale(&n2.recip()))?;
            for i in 0..m {
                point[i][j - 1] = col[i].clone();
                dir[i][j - 1] = wcol[i].clone();
            }
        }
        let offset = coords(&(&self.b * &dinv))?;
        let j1 = self.d.reverse().scale(&norm_power(&n2, m as u32)?.recip());
        let jm1_inv = dinv.scale(&norm_power(&n2, m as u32 + 2)?);
        Ok(Some(AffineParts { point, offset, dir, j1, jm1_inv }))
    }

    /// `J_1(φ, y)` as a form in `y`.
    pub fn j1_symbolic(&self) -> Result<RadialForm> {
        let m = self.dim();
        if self.is_pure_inversion() {
            return Ok(RadialForm::cauchy_kernel(m, Y));
        }
        match self.affine_parts()? {
            Some(p) => Ok(RadialForm::from_polynomial(MVPolynomial::constant(p.j1), Y)),
            None => Err(Error::Unsupported("symbolic weights need an elementary factor".into())),
        }
    }

    /// `J_{-1}(φ, y)` as a form in `y`.
    pub fn jm1_symbolic(&self) -> Result<RadialForm> {
        let m = self.dim();
        if self.is_pure_inversion() {
            return Ok(RadialForm::new(MVPolynomial::vector_var(m, Y), m as u32 + 2, Y));
        }
        match self.affine_parts()? {
            Some(p) => Ok(RadialForm::from_polynomial(MVPolynomial::constant(p.jm1_inv.versor_inverse()?), Y)),
            None => Err(Error::Unsupported("symbolic weights need an elementary factor".into())),
        }
    }

    /// Left-multiplies a form in `y` by `J_{-1}(φ, y)^{-1}`, which is
    /// `-y ‖y‖^m` for the inversion.
    pub fn apply_jm1_inverse(&self, r: &RadialForm) -> Result<RadialForm> {
        let m = self.dim();
        if self.is_pure_inversion() {
            return r.left_mul_poly(&MVPolynomial::vector_var(m, Y).scale(&int(-1))).mul_norm_power(m as i64);
        }
        match self.affine_parts()? {
            Some(p) => Ok(r.left_mul_poly(&MVPolynomial::constant(p.jm1_inv))),
            None => Err(Error::Unsupported("symbolic weights need an elementary factor".into())),
        }
    }

    /// `J_1(φ, y) f(φ(y), rev(cy+d) w (cy+d) / ‖cy+d‖²)` for `f(x, u)`
    /// homogeneous of degree `k` in `u`.
    pub fn transform_function(&self, f: &MVPolynomial, k: u32) -> Result<RadialForm> {
        self.pull_back(f, k, true)
    }

    /// The same change of variables without the weight factor.
    pub fn transport(&self, f: &MVPolynomial, k: u32) -> Result<RadialForm> {
        self.pull_back(f, k, false)
    }

    fn pull_back(&self, f: &MVPolynomial, k: u32, weighted: bool) -> Result<RadialForm> {
        let m = self.dim();
        if f.dim() != m {
            return Err(Error::DimensionMismatch(f.dim(), m));
        }
        if f.depends_on(Y) || f.depends_on(W) {
            return Err(Error::Unsupported("input must be written in the (x, u) variables".into()));
        }
        if !f.is_homogeneous(U, k) {
            return Err(Error::NotHomogeneous { group: 'u', degree: k });
        }
        if self.is_pure_inversion() {
            let r = RadialForm::from_polynomial(f.clone(), X);
            return if weighted {
                r.inversion_image(Frame::XU, Frame::YW, k)
            } else {
                r.inversion_transport(Frame::XU, Frame::YW, k)
            };
        }
        let Some(p) = self.affine_parts()? else {
            return Err(Error::Unsupported(format!("{} map without factorization into elementary factors", self.class)));
        };
        let zero = vec![Rational::zero(); m];
        let g = f.substitute_affine(U, W, &p.dir, &zero)?.substitute_affine(X, Y, &p.point, &p.offset)?;
        let g = if weighted { g.left_mul(&p.j1) } else { g };
        Ok(RadialForm::from_polynomial(g, Y))
    }

    /// Both sides of the intertwining identity in `(y, w)`:
    /// `J_{-1}^{-1} R_{k,y,w} [J_1 f(φ(y), u(y, w))]` and `(R_k f)(φ(y), u(y, w))`.
    pub fn intertwine_sides(&self, f: &MVPolynomial, ops: &RsOperators) -> Result<(RadialForm, RadialForm)> {
        let k = ops.k;
        ops.check_domain(OperatorTag::Rk, Side::Left, f)?;
        let transformed = self.transform_function(f, k)?;
        let lhs = apply_rk_yw(&transformed, ops)?;
        let lhs = self.apply_jm1_inverse(&lhs)?;
        let rhs = self.transport(&ops.rk(f)?, k)?;
        Ok((lhs, rhs))
    }

    /// Left side minus right side of the intertwining identity; zero when it holds.
    pub fn intertwine_residual(&self, f: &MVPolynomial, ops: &RsOperators) -> Result<RadialForm> {
        let (lhs, rhs) = self.intertwine_sides(f, ops)?;
        lhs.try_sub(&rhs)
    }
}

struct AffineParts {
    point: Vec<Vec<Rational>>,
    offset: Vec<Rational>,
    dir: Vec<Vec<Rational>>,
    j1: Multivector,
    jm1_inv: Multivector,
}

/// `R_{k,y,w} = P_{k,w} D_y` on a form in `(y, w)`.
pub fn apply_rk_yw(r: &RadialForm, ops: &RsOperators) -> Result<RadialForm> {
    if r.weight() > 0 && r.radial() != Y {
        return Err(Error::Unsupported("form must be radial in y".into()));
    }
    let proj = ops.projector().clone().in_group(W);
    r.dirac_left_radial().try_map_numerator(|n| proj.apply(n, Side::Left))
}

/// `G(y) f(y^{-1}, y w y / ‖y‖²)`.
pub fn transform_inversion(f: &MVPolynomial, k: u32) -> Result<RadialForm> {
    MoebiusMap::inversion(f.dim()).transform_function(f, k)
}

/// `R_{k,w}` of the inversion image of `f`; zero whenever `R_k f = 0`.
pub fn conformal_residual(f: &MVPolynomial, ops: &RsOperators) -> Result<RadialForm> {
    ops.check_domain(OperatorTag::Rk, Side::Left, f)?;
    apply_rk_yw(&transform_inversion(f, ops.k)?, ops)
}

/// Sanity value used by the report layer: whether two forms agree up to sign.
pub fn differs_by_sign(a: &RadialForm, b: &RadialForm) -> bool {
    !a.is_zero() && a.try_add(b).map(|s| s.is_zero()).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::frac;

    fn ce(m: usize) -> MVPolynomial {
        let a = MVPolynomial::var(m, U, 1).left_mul(&Multivector::generator(m, 1));
        let b = MVPolynomial::var(m, U, 2).left_mul(&Multivector::generator(m, 2));
        &a - &b
    }

    fn vec3(a: i64, b: i64, c: i64) -> Multivector {
        Multivector::vector(3, &[int(a), int(b), int(c)])
    }

    #[test]
    fn vahlen_conditions() {
        let m = 3;
        let r = MoebiusMap::identity(m).validate_vahlen();
        assert!(r.valid && r.determinant == Some(1));
        let r = MoebiusMap::inversion(m).validate_vahlen();
        assert!(r.valid && r.determinant == Some(-1), "{r:?}");
        for map in [MoebiusMap::reflection(m, 2).unwrap(), MoebiusMap::dilation(m, &frac(3, 2)).unwrap(), MoebiusMap::translation(&vec3(1, 0, -2)).unwrap()] {
            assert!(map.validate_vahlen().valid, "{map:?}");
        }
        let e12 = &Multivector::generator(m, 1) * &Multivector::generator(m, 2);
        let bad = MoebiusMap::new(e12, Multivector::generator(m, 3), Multivector::zero(m), Multivector::one(m)).unwrap();
        let r = bad.validate_vahlen();
        assert!(!r.valid);
        assert!(r.diagnostics.iter().any(|d| d.starts_with("condition 2")), "{r:?}");
    }

    #[test]
    fn apply_elementary_maps() {
        let m = 3;
        let x = vec3(2, 0, 0);
        assert_eq!(MoebiusMap::inversion(m).apply(&x).unwrap(), Multivector::generator(m, 1).scale(&frac(-1, 2)));
        assert_eq!(MoebiusMap::translation(&vec3(1, 1, 1)).unwrap().apply(&x).unwrap(), vec3(3, 1, 1));
        assert_eq!(MoebiusMap::dilation(m, &int(2)).unwrap().apply(&x).unwrap(), vec3(8, 0, 0));
        assert_eq!(MoebiusMap::reflection(m, 1).unwrap().apply(&vec3(2, 1, 0)).unwrap(), vec3(-2, 1, 0));
        assert!(matches!(MoebiusMap::inversion(m).apply(&Multivector::zero(m)), Err(Error::Singular(_))));
    }

    #[test]
    fn weights() {
        let m = 3;
        let x = vec3(0, 3, 4);
        assert_eq!(MoebiusMap::identity(m).j1_weight(&x).unwrap(), Multivector::one(m));
        assert_eq!(MoebiusMap::identity(m).jm1_weight(&x).unwrap(), Multivector::one(m));
        // G(x) = x / ‖x‖^3 with ‖x‖ = 5
        assert_eq!(MoebiusMap::inversion(m).j1_weight(&x).unwrap(), x.scale(&frac(1, 125)));
        assert_eq!(MoebiusMap::inversion(m).jm1_weight(&x).unwrap(), x.scale(&frac(1, 3125)));
        let dil = MoebiusMap::dilation(m, &int(2)).unwrap();
        assert_eq!(dil.j1_weight(&x).unwrap(), Multivector::scalar(m, int(4)));
        assert_eq!(dil.jm1_weight(&x).unwrap(), Multivector::scalar(m, int(16)));
        assert_eq!(MoebiusMap::inversion(m).j1_symbolic().unwrap(), RadialForm::cauchy_kernel(m, Y));
        assert!(MoebiusMap::inversion(m).j1_symbolic().unwrap().dirac_left_radial().is_zero());
    }

    #[test]
    fn transforms() {
        let m = 3;
        let f = &MVPolynomial::var(m, X, 1) * &ce(m);
        assert_eq!(MoebiusMap::identity(m).transform_function(&f, 1).unwrap(), RadialForm::from_polynomial(f.rename(X, Y).rename(U, W), Y));
        let t = MoebiusMap::translation(&vec3(1, 0, 0)).unwrap();
        let expect = &(&MVPolynomial::var(m, Y, 1) + &MVPolynomial::one(m)) * &ce(m).rename(U, W);
        assert_eq!(t.transform_function(&f, 1).unwrap(), RadialForm::from_polynomial(expect, Y));
        let img = transform_inversion(&ce(m), 1).unwrap();
        assert_eq!(img, crate::radial::inversion_image(&ce(m), 1).unwrap());
    }

    #[test]
    fn translations_compose() {
        let m = 3;
        let f = &(&MVPolynomial::var(m, X, 1) * &MVPolynomial::var(m, X, 2)) * &ce(m);
        let t1 = MoebiusMap::translation(&vec3(1, 0, 2)).unwrap();
        let t2 = MoebiusMap::translation(&vec3(0, -3, 1)).unwrap();
        let once = t1.transform_function(&f, 1).unwrap();
        let back = once.numerator().rename(Y, X).rename(W, U);
        let twice = t2.transform_function(&back, 1).unwrap();
        let both = t1.compose(&t2).unwrap();
        assert_eq!(both.class, MapClass::Translation);
        assert_eq!(twice, both.transform_function(&f, 1).unwrap());
    }

    #[test]
    fn intertwining_samples() {
        let m = 3;
        let ops = RsOperators::new(m, 1);
        let f = &MVPolynomial::var(m, X, 1) * &ce(m);
        for map in [
            MoebiusMap::translation(&vec3(1, -1, 2)).unwrap(),
            MoebiusMap::dilation(m, &frac(2, 3)).unwrap(),
            MoebiusMap::inversion(m),
        ] {
            assert!(map.intertwine_residual(&ce(m), &ops).unwrap().is_zero(), "{map:?}");
            assert!(map.intertwine_residual(&f, &ops).unwrap().is_zero(), "{map:?}");
        }
    }

    #[test]
    fn reflection_intertwining_is_off_by_sign() {
        // with J_1 = -e_j and J_{-1}^{-1} = e_j the two sides differ by -1,
        // already for the Dirac operator (k = 0)
        let m = 3;
        let cases = [(0, MVPolynomial::var(m, X, 1).left_mul(&Multivector::generator(m, 2))), (1, &MVPolynomial::var(m, X, 1) * &ce(m))];
        for (k, f) in cases {
            let (lhs, rhs) = MoebiusMap::reflection(m, 1).unwrap().intertwine_sides(&f, &RsOperators::new(m, k)).unwrap();
            assert!(!lhs.equals(&rhs));
            assert!(differs_by_sign(&lhs, &rhs), "k = {k}");
        }
    }

    #[test]
    fn conformal_kernel() {
        let m = 3;
        assert!(conformal_residual(&ce(m), &RsOperators::new(m, 1)).unwrap().is_zero());
        assert!(conformal_residual(&MVPolynomial::one(m), &RsOperators::new(m, 0)).unwrap().is_zero());
    }
}
