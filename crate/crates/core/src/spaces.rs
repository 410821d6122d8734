//! Harmonic and monogenic polynomial spaces in `u`, the Almansi-Fischer
//! decomposition `H_k = M_k ⊕ u M_{k-1}` and the projection `P_k`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::clifford::{check_dim, Blade, ComplexMultivector, Multivector, WittBasis};
use crate::error::{Error, Result};
use crate::linalg::{self, SparseVec};
use crate::poly::{MVPolynomial, Monomial, PolynomialJson, VarGroup};
use crate::scalar::{int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpaceKind {
    Harmonic,
    LeftMonogenic,
    RightMonogenic,
}

impl SpaceKind {
    pub fn monogenic(side: Side) -> Self {
        match side {
            Side::Left => SpaceKind::LeftMonogenic,
            Side::Right => SpaceKind::RightMonogenic,
        }
    }
}

/// Basis over the rationals of a homogeneous polynomial space in one group.
///
/// Harmonic bases are scalar-valued; the `Cl_m`-valued harmonic space is
/// their span tensored with the blades (see [`PolySpaceBasis::cl_valued_elements`]).
/// Monogenic bases are `Cl_m`-valued.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySpaceBasis {
    pub m: usize,
    pub k: u32,
    pub kind: SpaceKind,
    pub group: VarGroup,
    pub elements: Vec<MVPolynomial>,
    pub scalar_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolySpaceBasisJson {
    pub m: usize,
    pub k: u32,
    pub kind: SpaceKind,
    pub group: VarGroup,
    pub scalar_rank: usize,
    pub elements: Vec<PolynomialJson>,
}

impl PolySpaceBasis {
    /// Dimension over the rationals of the `Cl_m`-valued space.
    pub fn cl_rank(&self) -> usize {
        match self.kind {
            SpaceKind::Harmonic => self.scalar_rank << self.m,
            _ => self.scalar_rank,
        }
    }

    /// Rational basis of the `Cl_m`-valued space.
    pub fn cl_valued_elements(&self) -> Vec<MVPolynomial> {
        match self.kind {
            SpaceKind::Harmonic => {
                let blades: Vec<Multivector> = (0u16..(1 << self.m))
                    .map(|b| Multivector::from_blade(self.m, Blade(b), int(1)))
                    .collect();
                self.elements.iter().flat_map(|p| blades.iter().map(move |b| p.right_mul(b))).collect()
            }
            _ => self.elements.clone(),
        }
    }

    pub fn to_json(&self) -> PolySpaceBasisJson {
        PolySpaceBasisJson {
            m: self.m,
            k: self.k,
            kind: self.kind,
            group: self.group,
            scalar_rank: self.scalar_rank,
            elements: self.elements.iter().map(MVPolynomial::to_json).collect(),
        }
    }

    pub fn from_json(json: &PolySpaceBasisJson) -> Result<Self> {
        let elements = json.elements.iter().map(MVPolynomial::from_json).collect::<Result<Vec<_>>>()?;
        if elements.len() != json.scalar_rank {
            return Err(Error::Parse(format!("{} elements but scalar_rank {}", elements.len(), json.scalar_rank)));
        }
        Ok(PolySpaceBasis { m: json.m, k: json.k, kind: json.kind, group: json.group, elements, scalar_rank: json.scalar_rank })
    }
}

/// Degree-`k` monomials in the `m` variables of `g`, in monomial order.
pub fn monomials(m: usize, g: VarGroup, k: u32) -> Vec<Monomial> {
    fn rec(m: usize, g: VarGroup, i: usize, left: u32, exps: &mut Vec<u8>, out: &mut BTreeSet<Monomial>) {
        if i == m - 1 {
            exps[i] = left as u8;
            out.insert(Monomial::from_exponents(g, exps));
            return;
        }
        for e in 0..=left {
            exps[i] = e as u8;
            rec(m, g, i + 1, left - e, exps, out);
        }
        exps[i] = 0;
    }
    let mut out = BTreeSet::new();
    rec(m, g, 0, k, &mut vec![0; m], &mut out);
    out.into_iter().collect()
}

type CacheKey = (usize, u32, SpaceKind, VarGroup);

fn cache() -> &'static RwLock<HashMap<CacheKey, Arc<PolySpaceBasis>>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, Arc<PolySpaceBasis>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn cached(key: CacheKey, build: impl FnOnce() -> PolySpaceBasis) -> Arc<PolySpaceBasis> {
    if let Some(b) = cache().read().expect("basis cache poisoned").get(&key) {
        return b.clone();
    }
    let built = Arc::new(build());
    cache().write().expect("basis cache poisoned").entry(key).or_insert(built).clone()
}

/// Scalar-valued harmonic polynomials of degree `k` in `u`.
pub fn harmonic_basis(m: usize, k: u32) -> Result<Arc<PolySpaceBasis>> {
    harmonic_basis_in(m, k, VarGroup::U)
}

pub fn harmonic_basis_in(m: usize, k: u32, g: VarGroup) -> Result<Arc<PolySpaceBasis>> {
    check_dim(m)?;
    Ok(cached((m, k, SpaceKind::Harmonic, g), || {
        let cols = monomials(m, g, k);
        let mut rows: BTreeMap<Monomial, SparseVec> = BTreeMap::new();
        for (j, mono) in cols.iter().enumerate() {
            let lap = MVPolynomial::term(*mono, Multivector::one(m)).laplacian(g);
            for (target, c) in lap.terms() {
                rows.entry(*target).or_default().insert(j, c.scalar_part());
            }
        }
        let kernel = linalg::nullspace(cols.len(), rows.into_values());
        let elements: Vec<MVPolynomial> = kernel
            .iter()
            .map(|v| MVPolynomial::from_terms(m, v.iter().map(|(j, c)| (cols[*j], Multivector::scalar(m, c.clone())))))
            .collect();
        debug_assert!(elements.iter().all(|p| p.laplacian(g).is_zero()));
        PolySpaceBasis { m, k, kind: SpaceKind::Harmonic, group: g, scalar_rank: elements.len(), elements }
    }))
}

/// `Cl_m`-valued degree-`k` polynomials in `u` annihilated by the Dirac
/// operator acting from `side`.
pub fn monogenic_basis(m: usize, k: u32, side: Side) -> Result<Arc<PolySpaceBasis>> {
    monogenic_basis_in(m, k, side, VarGroup::U)
}

pub fn monogenic_basis_in(m: usize, k: u32, side: Side, g: VarGroup) -> Result<Arc<PolySpaceBasis>> {
    check_dim(m)?;
    Ok(cached((m, k, SpaceKind::monogenic(side), g), || {
        let monos = monomials(m, g, k);
        let nblades = 1usize << m;
        // column = mono_index * 2^m + blade
        let mut rows: BTreeMap<(Monomial, u16), SparseVec> = BTreeMap::new();
        for (mi, mono) in monos.iter().enumerate() {
            for b in 0..nblades as u16 {
                let col = mi * nblades + b as usize;
                for i in 1..=m {
                    let e = mono.exp(g, i);
                    if e == 0 {
                        continue;
                    }
                    let mut lowered = mono.exponents(g).to_vec();
                    lowered[i - 1] -= 1;
                    let target = Monomial::from_exponents(g, &lowered);
                    let (blade, neg) = match side {
                        Side::Left => Blade::generator(i).product(Blade(b)),
                        Side::Right => Blade(b).product(Blade::generator(i)),
                    };
                    let v = if neg { int(-(e as i64)) } else { int(e as i64) };
                    let row = rows.entry((target, blade.0)).or_default();
                    let slot = row.entry(col).or_insert_with(Rational::zero);
                    *slot += v;
                }
            }
        }
        let kernel = linalg::nullspace(monos.len() * nblades, rows.into_values());
        let elements: Vec<MVPolynomial> = kernel
            .iter()
            .map(|v| {
                let mut by_mono: BTreeMap<usize, Vec<(Blade, Rational)>> = BTreeMap::new();
                for (col, c) in v {
                    by_mono.entry(col / nblades).or_default().push((Blade((col % nblades) as u16), c.clone()));
                }
                MVPolynomial::from_terms(
                    m,
                    by_mono.into_iter().map(|(mi, t)| (monos[mi], Multivector::from_terms(m, t))),
                )
            })
            .collect();
        PolySpaceBasis { m, k, kind: SpaceKind::monogenic(side), group: g, scalar_rank: elements.len(), elements }
    }))
}

/// Dirac operator in `g` from the given side.
pub fn dirac(p: &MVPolynomial, g: VarGroup, side: Side) -> MVPolynomial {
    match side {
        Side::Left => p.dirac_left(g),
        Side::Right => p.dirac_right(g),
    }
}

/// Multiplies by the vector variable of `g` on the given side.
pub fn vector_mul(p: &MVPolynomial, g: VarGroup, side: Side) -> MVPolynomial {
    let v = MVPolynomial::vector_var(p.dim(), g);
    match side {
        Side::Left => &v * p,
        Side::Right => p * &v,
    }
}

/// Homogeneous of degree `k` in `g` and annihilated by `D_g` from `side`.
pub fn check_monogenic(p: &MVPolynomial, k: u32, side: Side, g: VarGroup) -> Result<()> {
    if !p.is_homogeneous(g, k) {
        return Err(Error::NotHomogeneous { group: g.name(), degree: k });
    }
    if !dirac(p, g, side).is_zero() {
        return Err(Error::NotMonogenic(side.name(), g.name()));
    }
    Ok(())
}

pub fn check_harmonic(p: &MVPolynomial, k: u32, g: VarGroup) -> Result<()> {
    if !p.is_homogeneous(g, k) {
        return Err(Error::NotHomogeneous { group: g.name(), degree: k });
    }
    if !p.laplacian(g).is_zero() {
        return Err(Error::NotHarmonic(g.name()));
    }
    Ok(())
}

/// `-(m + 2k - 2)`, the eigenvalue of `q ↦ D_u(u q)` on `M_{k-1}`.
pub fn u_factor_eigenvalue(m: usize, k: u32) -> Rational {
    int(-(m as i64 + 2 * k as i64 - 2))
}

/// Writes `g = u q` (left) or `g = q u` (right) with `q` monogenic of degree
/// `k - 1`, returning `q`; fails when `g` is not of that form.
pub fn extract_u_factor(g: &MVPolynomial, k: u32, side: Side, group: VarGroup) -> Result<MVPolynomial> {
    let m = g.dim();
    if k == 0 {
        return if g.is_zero() {
            Ok(MVPolynomial::zero(m))
        } else {
            Err(Error::Hypothesis("u M_{-1} is the zero space".into()))
        };
    }
    if !g.is_homogeneous(group, k) {
        return Err(Error::NotHomogeneous { group: group.name(), degree: k });
    }
    let lambda = u_factor_eigenvalue(m, k);
    let q = dirac(g, group, side).scale(&lambda.recip());
    if vector_mul(&q, group, side) != *g || !dirac(&q, group, side).is_zero() {
        let form = match side {
            Side::Left => format!("{group} times a left-monogenic polynomial"),
            Side::Right => format!("a right-monogenic polynomial times {group}"),
        };
        return Err(Error::Hypothesis(format!("input is not {form}")));
    }
    Ok(q)
}

/// The projection `P_k = 1 + u D_u / c` onto `M_k` (or its right mirror).
///
/// `c` defaults to `m + 2k - 2`; [`Projector::with_denominator`] replaces it,
/// which is only useful for checking that the test suite notices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projector {
    pub m: usize,
    pub k: u32,
    pub group: VarGroup,
    denominator: Rational,
}

impl Projector {
    pub fn new(m: usize, k: u32) -> Self {
        Projector { m, k, group: VarGroup::U, denominator: int(m as i64 + 2 * k as i64 - 2) }
    }

    pub fn in_group(mut self, g: VarGroup) -> Self {
        self.group = g;
        self
    }

    pub fn with_denominator(mut self, c: Rational) -> Self {
        self.denominator = c;
        self
    }

    pub fn denominator(&self) -> &Rational {
        &self.denominator
    }

    fn correction(&self, h: &MVPolynomial, side: Side) -> Result<MVPolynomial> {
        if h.dim() != self.m {
            return Err(Error::DimensionMismatch(h.dim(), self.m));
        }
        check_harmonic(h, self.k, self.group)?;
        let d = dirac(h, self.group, side);
        if d.is_zero() {
            return Ok(d);
        }
        if self.denominator.is_zero() {
            return Err(Error::Singular("projection denominator is zero".into()));
        }
        Ok(vector_mul(&d, self.group, side).scale(&self.denominator.recip()))
    }

    /// `P_k h` (left) or `P_{k,r} h = h + (h D_u) u / c` (right).
    pub fn apply(&self, h: &MVPolynomial, side: Side) -> Result<MVPolynomial> {
        Ok(h + &self.correction(h, side)?)
    }

    /// `(I - P_k) h`.
    pub fn complement(&self, h: &MVPolynomial, side: Side) -> Result<MVPolynomial> {
        Ok(-&self.correction(h, side)?)
    }
}

/// `P_k h = (u D_u / (m + 2k - 2) + 1) h`.
#[allow(non_snake_case)]
pub fn project_Pk(h: &MVPolynomial, k: u32) -> Result<MVPolynomial> {
    Projector::new(h.dim(), k).apply(h, Side::Left)
}

/// `P_{k,r} h = h + (h D_u) u / (m + 2k - 2)`.
#[allow(non_snake_case)]
pub fn project_Pk_right(h: &MVPolynomial, k: u32) -> Result<MVPolynomial> {
    Projector::new(h.dim(), k).apply(h, Side::Right)
}

/// `h = p_k + u p_{k-1}` (left) or `h = p_k + p_{k-1} u` (right).
pub fn almansi_fischer_split(h: &MVPolynomial, k: u32, side: Side) -> Result<(MVPolynomial, MVPolynomial)> {
    let m = h.dim();
    let pk = Projector::new(m, k).apply(h, side)?;
    let d = dirac(h, VarGroup::U, side);
    if d.is_zero() {
        return Ok((pk, MVPolynomial::zero(m)));
    }
    let lower = d.scale(&u_factor_eigenvalue(m, k).recip());
    debug_assert_eq!(&pk + &vector_mul(&lower, VarGroup::U, side), *h);
    Ok((pk, lower))
}

/// Polynomial with values in `Cl_m ⊗ C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinorPolynomial {
    pub m: usize,
    pub terms: BTreeMap<Monomial, ComplexMultivector>,
}

impl SpinorPolynomial {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Right-multiplies every coefficient by the primitive idempotent, landing
/// in the spinor space `Cl_m(C) I`.
pub fn spinor_filter(p: &MVPolynomial, witt: &WittBasis) -> SpinorPolynomial {
    let terms = p
        .terms()
        .map(|(mono, c)| (*mono, witt.to_spinor(c)))
        .filter(|(_, c)| !c.is_zero())
        .collect();
    SpinorPolynomial { m: p.dim(), terms }
}

/// Every coefficient lies in the spinor space.
pub fn is_spinor_valued(p: &SpinorPolynomial, witt: &WittBasis) -> bool {
    p.terms.values().all(|c| witt.is_spinor(c))
}
