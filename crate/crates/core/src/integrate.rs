//! Exact integration over the unit sphere and unit ball, Fischer pairings and
//! the Stokes/Cauchy identities for the Rarita-Schwinger type operators.
//!
//! Every integral is expressed in units of the sphere area `ω_{m-1}`, so the
//! results are rational multivectors.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::clifford::Multivector;
use crate::error::{Error, Result};
use crate::operators::{OperatorTag, RsOperators};
use crate::poly::{MVPolynomial, VarGroup};
use crate::scalar::Rational;
use crate::spaces::{monogenic_basis, vector_mul, Side};

const X: VarGroup = VarGroup::X;
const U: VarGroup = VarGroup::U;

fn moment_cache() -> &'static RwLock<HashMap<(usize, Vec<u32>), Rational>> {
    static CACHE: OnceLock<RwLock<HashMap<(usize, Vec<u32>), Rational>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `(1/ω_{m-1}) ∫_{S^{m-1}} u^α dS`.
///
/// Equals `Π (α_i - 1)!! / Π_{j<|α|/2} (m + 2j)` when every `α_i` is even and
/// zero otherwise.
pub fn sphere_moment(alpha: &[u32], m: usize) -> Rational {
    if alpha.iter().any(|a| a % 2 == 1) {
        return Rational::zero();
    }
    let mut key: Vec<u32> = alpha.iter().copied().filter(|a| *a > 0).collect();
    key.sort_unstable();
    if key.is_empty() {
        return Rational::one();
    }
    let key = (m, key);
    if let Some(v) = moment_cache().read().expect("moment cache poisoned").get(&key) {
        return v.clone();
    }
    let mut num = BigInt::one();
    for a in &key.1 {
        let mut j = *a as i64 - 1;
        while j > 1 {
            num *= j;
            j -= 2;
        }
    }
    let half: u32 = key.1.iter().sum::<u32>() / 2;
    let mut den = BigInt::one();
    for j in 0..half {
        den *= m as i64 + 2 * j as i64;
    }
    let v = Rational::new(num, den);
    moment_cache().write().expect("moment cache poisoned").insert(key, v.clone());
    v
}

fn integrate_group(p: &MVPolynomial, g: VarGroup, radial: impl Fn(u32) -> Rational) -> MVPolynomial {
    let m = p.dim();
    let mut out = MVPolynomial::zero(m);
    for (mono, c) in p.terms() {
        let (only, rest) = mono.split(g);
        let alpha: Vec<u32> = only.exponents(g).iter().map(|e| *e as u32).collect();
        let mom = sphere_moment(&alpha, m);
        if mom.is_zero() {
            continue;
        }
        let w = mom * radial(only.degree(g));
        out.add_term(rest, &c.scale(&w));
    }
    out
}

/// Integrates out the group `g` over the unit sphere.
pub fn sphere_integral(p: &MVPolynomial, g: VarGroup) -> MVPolynomial {
    integrate_group(p, g, |_| Rational::one())
}

/// Integrates out the group `g` over the unit ball: a degree-`d` homogeneous
/// part contributes its sphere integral times `1/(d + m)`.
pub fn ball_integral(p: &MVPolynomial, g: VarGroup) -> MVPolynomial {
    let m = p.dim() as i64;
    integrate_group(p, g, |d| Rational::new(BigInt::one(), BigInt::from(d as i64 + m)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pairing {
    /// `∫ P(u) Q(u) dS(u)`
    Plain,
    /// `∫ conj(P(u)) Q(u) dS(u)`
    Conjugated,
}

/// Sphere pairing in `g`; other variable groups are carried along.
pub fn fischer_pairing(a: &MVPolynomial, b: &MVPolynomial, g: VarGroup, pairing: Pairing) -> MVPolynomial {
    let left = match pairing {
        Pairing::Plain => a.clone(),
        Pairing::Conjugated => a.conjugate(),
    };
    sphere_integral(&(&left * b), g)
}

/// Pairing in `u`.
pub fn pairing_u(a: &MVPolynomial, b: &MVPolynomial, conjugated: bool) -> MVPolynomial {
    fischer_pairing(a, b, U, if conjugated { Pairing::Conjugated } else { Pairing::Plain })
}

/// The value of a polynomial with no variables left.
pub fn constant_value(p: &MVPolynomial) -> Result<Multivector> {
    let m = p.dim();
    let mut out = Multivector::zero(m);
    for (mono, c) in p.terms() {
        if !mono.is_one() {
            return Err(Error::Unsupported(format!("polynomial still depends on {mono}")));
        }
        out = &out + c;
    }
    Ok(out)
}

/// `(∫_B div F, ∫_{∂B} F·n)` for a polynomial vector field in `x`.
pub fn divergence_check(field: &[MVPolynomial]) -> Result<(Multivector, Multivector)> {
    let m = field.first().map_or(0, MVPolynomial::dim);
    if field.len() != m {
        return Err(Error::DimensionMismatch(field.len(), m));
    }
    let mut div = MVPolynomial::zero(m);
    let mut flux = MVPolynomial::zero(m);
    for (i, fi) in field.iter().enumerate() {
        div = &div + &fi.derivative(X, i + 1);
        flux = &flux + &(&MVPolynomial::var(m, X, i + 1) * fi);
    }
    Ok((constant_value(&ball_integral(&div, X))?, constant_value(&sphere_integral(&flux, X))?))
}

/// `(q, u p)_u` (conjugated) for every `q` in the `M_k` basis and `p` in the
/// `M_{k-1}` basis.
pub fn orthogonality_residuals(m: usize, k: u32) -> Result<Vec<Multivector>> {
    let qs = monogenic_basis(m, k, Side::Left)?;
    let ps = monogenic_basis(m, k - 1, Side::Left)?;
    let ups: Vec<MVPolynomial> = ps.elements.iter().map(|p| vector_mul(p, U, Side::Left)).collect();
    let mut out = Vec::with_capacity(qs.elements.len() * ups.len());
    for q in &qs.elements {
        let qc = q.conjugate();
        for up in &ups {
            out.push(constant_value(&sphere_integral(&(&qc * up), U))?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StokesTheorem {
    Rk,
    Qk,
    Tk,
    TkStar,
    Alt,
    CauchyRk,
    CauchyQk,
}

impl StokesTheorem {
    pub const ALL: [StokesTheorem; 7] = [
        StokesTheorem::Rk,
        StokesTheorem::Qk,
        StokesTheorem::Tk,
        StokesTheorem::TkStar,
        StokesTheorem::Alt,
        StokesTheorem::CauchyRk,
        StokesTheorem::CauchyQk,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StokesTheorem::Rk => "rk",
            StokesTheorem::Qk => "qk",
            StokesTheorem::Tk => "tk",
            StokesTheorem::TkStar => "tkstar",
            StokesTheorem::Alt => "alt",
            StokesTheorem::CauchyRk => "cauchy-rk",
            StokesTheorem::CauchyQk => "cauchy-qk",
        }
    }

    /// Operator acting on `f` from the left and on `g` from the right.
    ///
    /// The twistor theorems pair `T_k` with `T_{k,r}^*` and `T_k^*` with
    /// `T_{k,r}`: `f` lives in the domain of the left operator and `g` in the
    /// domain of the right one.
    pub fn operators(self) -> (OperatorTag, OperatorTag) {
        match self {
            StokesTheorem::Rk | StokesTheorem::CauchyRk => (OperatorTag::Rk, OperatorTag::Rk),
            StokesTheorem::Qk | StokesTheorem::CauchyQk => (OperatorTag::Qk, OperatorTag::Qk),
            StokesTheorem::Tk => (OperatorTag::Tk, OperatorTag::TkStar),
            StokesTheorem::TkStar | StokesTheorem::Alt => (OperatorTag::TkStar, OperatorTag::Tk),
        }
    }

    pub fn is_cauchy(self) -> bool {
        matches!(self, StokesTheorem::CauchyRk | StokesTheorem::CauchyQk)
    }
}

impl fmt::Display for StokesTheorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StokesTheorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StokesTheorem::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown theorem {s:?}")))
    }
}

/// Both sides of one integral identity on the unit ball, in units of `ω_{m-1}²`.
///
/// `lhs` is the volume side (for the Cauchy variants, the boundary integral),
/// `rhs` the first boundary form (zero for the Cauchy variants) and
/// `alternates` the remaining boundary forms, each of which must equal `rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralReport {
    pub theorem: StokesTheorem,
    pub m: usize,
    pub k: u32,
    pub lhs: Multivector,
    pub rhs: Multivector,
    pub alternates: Vec<Multivector>,
    pub residual: Multivector,
    pub pass: bool,
    /// Whether the same identity also balances with the conjugated pairing.
    pub conjugated_balances: bool,
}

struct Sides {
    lhs: Multivector,
    rhs: Multivector,
    alternates: Vec<Multivector>,
}

fn assemble(theorem: StokesTheorem, f: &MVPolynomial, g: &MVPolynomial, ops: &RsOperators, pairing: Pairing) -> Result<Sides> {
    let m = ops.m;
    let (ftag, gtag) = theorem.operators();
    let proj = ops.projector();
    let pair = |a: &MVPolynomial, b: &MVPolynomial| fischer_pairing(a, b, U, pairing);
    let n = MVPolynomial::vector_var(m, X);

    let xf = &n * f;
    let gx = g * &n;
    let pf = if ftag.projects_to_monogenic() { proj.apply(&xf, Side::Left)? } else { proj.complement(&xf, Side::Left)? };
    let pg = if gtag.projects_to_monogenic() { proj.apply(&gx, Side::Right)? } else { proj.complement(&gx, Side::Right)? };
    let b1 = constant_value(&sphere_integral(&pair(g, &pf), X))?;
    let b2 = constant_value(&sphere_integral(&pair(&pg, f), X))?;
    let mut alternates = vec![b2];
    if theorem == StokesTheorem::Alt {
        alternates.push(constant_value(&sphere_integral(&pair(g, &xf), X))?);
    }

    let of = ops.apply(ftag, Side::Left, f)?;
    let og = ops.apply(gtag, Side::Right, g)?;
    let volume = &pair(&og, f) + &pair(g, &of);
    let vol = constant_value(&ball_integral(&volume, X))?;

    if theorem.is_cauchy() {
        if !of.is_zero() || !og.is_zero() {
            return Err(Error::Hypothesis(format!("{theorem}: f and g must lie in the operator kernels")));
        }
        alternates.insert(0, vol);
        return Ok(Sides { lhs: b1, rhs: Multivector::zero(m), alternates });
    }
    Ok(Sides { lhs: vol, rhs: b1, alternates })
}

fn balanced(s: &Sides) -> (Multivector, bool) {
    let residual = &s.lhs - &s.rhs;
    let ok = residual.is_zero() && s.alternates.iter().all(|a| *a == s.rhs);
    (residual, ok)
}

/// Validates the hypotheses of `theorem` on `(f, g)` and compares the volume
/// and boundary sides exactly, using the unconjugated pairing.
///
/// `f` must lie in the domain of the left operator and `g` in the domain of
/// the right operator (see [`StokesTheorem::operators`]).
pub fn stokes_check(theorem: StokesTheorem, f: &MVPolynomial, g: &MVPolynomial, ops: &RsOperators) -> Result<IntegralReport> {
    let (ftag, gtag) = theorem.operators();
    ops.check_domain(ftag, Side::Left, f).map_err(|e| Error::Hypothesis(format!("{theorem}: f: {e}")))?;
    ops.check_domain(gtag, Side::Right, g).map_err(|e| Error::Hypothesis(format!("{theorem}: g: {e}")))?;
    let plain = assemble(theorem, f, g, ops, Pairing::Plain)?;
    let (residual, pass) = balanced(&plain);
    let conjugated_balances = match assemble(theorem, f, g, ops, Pairing::Conjugated) {
        Ok(s) => balanced(&s).1,
        Err(_) => false,
    };
    Ok(IntegralReport {
        theorem,
        m: ops.m,
        k: ops.k,
        lhs: plain.lhs,
        rhs: plain.rhs,
        alternates: plain.alternates,
        residual,
        pass,
        conjugated_balances,
    })
}
