//! The Rarita-Schwinger operator `R_k = P_k D_x` and its companions
//! `T_k^* = (I - P_k) D_x` on `M_k`-valued input, `T_k = P_k D_x` and
//! `Q_k = (I - P_k) D_x` on `u M_{k-1}`-valued input, with right versions.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::clifford::{Blade, Multivector};
use crate::error::{Error, Result};
use crate::integrate::{fischer_pairing, Pairing};
use crate::linalg::{self, SparseVec};
use crate::poly::{MVPolynomial, Monomial, VarGroup};
use crate::spaces::{check_monogenic, dirac, extract_u_factor, monogenic_basis, monomials, vector_mul, Projector, Side};

const X: VarGroup = VarGroup::X;
const U: VarGroup = VarGroup::U;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorTag {
    Rk,
    Tk,
    TkStar,
    Qk,
}

impl OperatorTag {
    pub const ALL: [OperatorTag; 4] = [OperatorTag::Rk, OperatorTag::Tk, OperatorTag::TkStar, OperatorTag::Qk];

    pub fn name(self) -> &'static str {
        match self {
            OperatorTag::Rk => "rk",
            OperatorTag::Tk => "tk",
            OperatorTag::TkStar => "tkstar",
            OperatorTag::Qk => "qk",
        }
    }

    /// Input is `u M_{k-1}`-valued (rather than `M_k`-valued).
    pub fn takes_u_factor(self) -> bool {
        matches!(self, OperatorTag::Tk | OperatorTag::Qk)
    }

    /// Output is `M_k`-valued (rather than `u M_{k-1}`-valued).
    pub fn projects_to_monogenic(self) -> bool {
        matches!(self, OperatorTag::Rk | OperatorTag::Tk)
    }
}

impl fmt::Display for OperatorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OperatorTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        OperatorTag::ALL
            .into_iter()
            .find(|t| t.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::Parse(format!("unknown operator {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OperatorKind {
    pub tag: OperatorTag,
    pub side: Side,
    pub m: usize,
    pub k: u32,
}

impl OperatorKind {
    pub fn new(tag: OperatorTag, side: Side, m: usize, k: u32) -> Result<Self> {
        if tag.takes_u_factor() && k == 0 {
            return Err(Error::Hypothesis(format!("{tag} needs k >= 1")));
        }
        Ok(OperatorKind { tag, side, m, k })
    }
}

/// The four operators at fixed `(m, k)`, sharing one projector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsOperators {
    pub m: usize,
    pub k: u32,
    projector: Projector,
}

impl RsOperators {
    pub fn new(m: usize, k: u32) -> Self {
        RsOperators { m, k, projector: Projector::new(m, k) }
    }

    pub fn with_projector(m: usize, k: u32, projector: Projector) -> Self {
        RsOperators { m, k, projector }
    }

    pub fn projector(&self) -> &Projector {
        &self.projector
    }

    /// Checks the value-type hypothesis of `tag` on `f`.
    pub fn check_domain(&self, tag: OperatorTag, side: Side, f: &MVPolynomial) -> Result<()> {
        if f.dim() != self.m {
            return Err(Error::DimensionMismatch(f.dim(), self.m));
        }
        if tag.takes_u_factor() {
            extract_u_factor(f, self.k, side, U).map(|_| ())
        } else {
            check_monogenic(f, self.k, side, U)
        }
    }

    /// Checks that `out` has the value type `tag` is meant to produce.
    pub fn check_range(&self, tag: OperatorTag, side: Side, out: &MVPolynomial) -> Result<()> {
        if tag.projects_to_monogenic() {
            check_monogenic(out, self.k, side, U)
        } else {
            extract_u_factor(out, self.k, side, U).map(|_| ())
        }
    }

    /// Applies the operator from `side`: left versions act as `P D_x f`,
    /// right versions as `(f D_x) P_r`.
    pub fn apply(&self, tag: OperatorTag, side: Side, f: &MVPolynomial) -> Result<MVPolynomial> {
        if tag.takes_u_factor() && self.k == 0 {
            return Err(Error::Hypothesis(format!("{tag} needs k >= 1")));
        }
        self.check_domain(tag, side, f)?;
        let d = dirac(f, X, side);
        if tag.projects_to_monogenic() {
            self.projector.apply(&d, side)
        } else {
            self.projector.complement(&d, side)
        }
    }

    pub fn rk(&self, f: &MVPolynomial) -> Result<MVPolynomial> {
        self.apply(OperatorTag::Rk, Side::Left, f)
    }

    pub fn tk_star(&self, f: &MVPolynomial) -> Result<MVPolynomial> {
        self.apply(OperatorTag::TkStar, Side::Left, f)
    }

    pub fn tk(&self, g: &MVPolynomial) -> Result<MVPolynomial> {
        self.apply(OperatorTag::Tk, Side::Left, g)
    }

    pub fn qk(&self, g: &MVPolynomial) -> Result<MVPolynomial> {
        self.apply(OperatorTag::Qk, Side::Left, g)
    }
}

#[allow(non_snake_case)]
pub fn apply_Rk(f: &MVPolynomial, m: usize, k: u32) -> Result<MVPolynomial> {
    RsOperators::new(m, k).rk(f)
}

#[allow(non_snake_case)]
pub fn apply_TkStar(f: &MVPolynomial, m: usize, k: u32) -> Result<MVPolynomial> {
    RsOperators::new(m, k).tk_star(f)
}

#[allow(non_snake_case)]
pub fn apply_Tk(g: &MVPolynomial, m: usize, k: u32) -> Result<MVPolynomial> {
    RsOperators::new(m, k).tk(g)
}

#[allow(non_snake_case)]
pub fn apply_Qk(g: &MVPolynomial, m: usize, k: u32) -> Result<MVPolynomial> {
    RsOperators::new(m, k).qk(g)
}

pub fn apply_right(kind: OperatorKind, f: &MVPolynomial) -> Result<MVPolynomial> {
    RsOperators::new(kind.m, kind.k).apply(kind.tag, Side::Right, f)
}

pub fn apply_kind(kind: OperatorKind, f: &MVPolynomial) -> Result<MVPolynomial> {
    RsOperators::new(kind.m, kind.k).apply(kind.tag, kind.side, f)
}

/// For each `q` in the `M_k` basis, `(q, D_x f)_u - (q, R_k f)_u` with the
/// conjugated Fischer pairing. Each entry is a polynomial in `x`.
pub fn stein_weiss_residual(f: &MVPolynomial, ops: &RsOperators) -> Result<Vec<MVPolynomial>> {
    let rk = ops.rk(f)?;
    let dx = f.dirac_left(X);
    let diff = &dx - &rk;
    let basis = monogenic_basis(ops.m, ops.k, Side::Left)?;
    Ok(basis.elements.iter().map(|q| fischer_pairing(q, &diff, U, Pairing::Conjugated)).collect())
}

/// Interns `(monomial, blade)` pairs as column indices.
#[derive(Default)]
pub(crate) struct Coordinates {
    index: HashMap<(Monomial, Blade), usize>,
}

impl Coordinates {
    pub(crate) fn of(&mut self, p: &MVPolynomial) -> SparseVec {
        let mut v = SparseVec::new();
        for (mono, c) in p.terms() {
            for (b, s) in c.terms() {
                let n = self.index.len();
                let col = *self.index.entry((*mono, *b)).or_insert(n);
                v.insert(col, s.clone());
            }
        }
        v
    }
}

/// Elements of the domain of `tag` (from `side`) that are homogeneous of
/// degree `x_degree` in `x`, as spanning list `x^β · b`.
pub fn domain_ansatz(tag: OperatorTag, side: Side, m: usize, k: u32, x_degree: u32) -> Result<Vec<MVPolynomial>> {
    let inner: Vec<MVPolynomial> = if tag.takes_u_factor() {
        if k == 0 {
            return Err(Error::Hypothesis(format!("{tag} needs k >= 1")));
        }
        monogenic_basis(m, k - 1, side)?.elements.iter().map(|q| vector_mul(q, U, side)).collect()
    } else {
        monogenic_basis(m, k, side)?.elements.clone()
    };
    let xs = monomials(m, X, x_degree);
    Ok(xs
        .iter()
        .flat_map(|xm| {
            let xp = MVPolynomial::term(*xm, Multivector::one(m));
            inner.iter().map(move |b| &xp * b)
        })
        .collect())
}

/// Basis of the kernel of `tag` (from `side`) among domain elements that are
/// homogeneous of degree `x_degree` in `x`.
pub fn kernel_basis(ops: &RsOperators, tag: OperatorTag, side: Side, x_degree: u32) -> Result<Vec<MVPolynomial>> {
    let ansatz = domain_ansatz(tag, side, ops.m, ops.k, x_degree)?;
    let images = ansatz.iter().map(|f| ops.apply(tag, side, f)).collect::<Result<Vec<_>>>()?;
    // transpose: rows indexed by output coordinates, columns by ansatz index
    let mut coords = Coordinates::default();
    let mut rows: HashMap<usize, SparseVec> = HashMap::new();
    for (j, img) in images.iter().enumerate() {
        for (r, v) in coords.of(img) {
            rows.entry(r).or_default().insert(j, v);
        }
    }
    let mut row_list: Vec<(usize, SparseVec)> = rows.into_iter().collect();
    row_list.sort_by_key(|(r, _)| *r);
    let kernel = linalg::nullspace(ansatz.len(), row_list.into_iter().map(|(_, v)| v));
    Ok(kernel
        .iter()
        .map(|v| {
            v.iter().fold(MVPolynomial::zero(ops.m), |acc, (j, c)| &acc + &ansatz[*j].scale(c))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};

    fn ce(m: usize) -> MVPolynomial {
        let a = MVPolynomial::var(m, U, 1).left_mul(&Multivector::generator(m, 1));
        let b = MVPolynomial::var(m, U, 2).left_mul(&Multivector::generator(m, 2));
        &a - &b
    }

    fn x1(m: usize) -> MVPolynomial {
        MVPolynomial::var(m, X, 1)
    }

    #[test]
    fn k_zero_is_dirac() {
        let m = 3;
        let f = &(&x1(m) * &MVPolynomial::var(m, X, 2)).left_mul(&Multivector::generator(m, 3))
            + &MVPolynomial::var(m, X, 3);
        assert_eq!(apply_Rk(&f, m, 0).unwrap(), f.dirac_left(X));
        assert!(apply_TkStar(&f, m, 0).unwrap().is_zero());
        assert_eq!(apply_right(OperatorKind::new(OperatorTag::Rk, Side::Right, m, 0).unwrap(), &f).unwrap(), f.dirac_right(X));
    }

    #[test]
    fn x_independent_input_vanishes() {
        let m = 3;
        assert!(apply_Rk(&ce(m), m, 1).unwrap().is_zero());
        assert!(apply_TkStar(&ce(m), m, 1).unwrap().is_zero());
        let g = MVPolynomial::vector_var(m, U);
        assert!(apply_Tk(&g, m, 1).unwrap().is_zero());
        assert!(apply_Qk(&g, m, 1).unwrap().is_zero());
    }

    #[test]
    fn rk_on_x1_times_counterexample() {
        // D_x f = -u1 - u2 e1e2, D_u of that = -2 e1, so R_1 f = D_x f - (2/3) u e1
        let m = 3;
        let f = &x1(m) * &ce(m);
        let h = f.dirac_left(X);
        let e12 = Multivector::from_blade(m, Blade::from_indices(&[1, 2], m).unwrap(), int(1));
        let expect_h = &MVPolynomial::var(m, U, 1).scale(&int(-1)) - &MVPolynomial::var(m, U, 2).left_mul(&e12);
        assert_eq!(h, expect_h);
        assert_eq!(h.dirac_left(U), MVPolynomial::constant(Multivector::generator(m, 1).scale(&int(-2))));
        let expect = &h + &MVPolynomial::vector_var(m, U).right_mul(&Multivector::generator(m, 1)).scale(&frac(-2, 3));
        let r = apply_Rk(&f, m, 1).unwrap();
        assert_eq!(r, expect);
        assert!(!r.is_zero());
        assert_eq!(&r + &apply_TkStar(&f, m, 1).unwrap(), h);
    }

    #[test]
    fn twistor_pair_sums_to_dirac() {
        let m = 3;
        // g = x1 u
        let g = &x1(m) * &MVPolynomial::vector_var(m, U);
        let t = apply_Tk(&g, m, 1).unwrap();
        let q = apply_Qk(&g, m, 1).unwrap();
        assert_eq!(&t + &q, g.dirac_left(X));
        let h = &MVPolynomial::constant(Multivector::generator(m, 1)) * &MVPolynomial::vector_var(m, U);
        assert_eq!(t, crate::spaces::project_Pk(&h, 1).unwrap());
        let ops = RsOperators::new(m, 1);
        ops.check_range(OperatorTag::Tk, Side::Left, &t).unwrap();
        ops.check_range(OperatorTag::Qk, Side::Left, &q).unwrap();
    }

    #[test]
    fn domain_violations_are_errors() {
        let m = 3;
        let not_monogenic = &x1(m) * &MVPolynomial::var(m, U, 1);
        assert!(matches!(apply_Rk(&not_monogenic, m, 1), Err(Error::NotMonogenic("left", 'u'))));
        assert!(apply_Tk(&ce(m), m, 1).is_err());
        assert!(apply_Qk(&MVPolynomial::one(m), m, 0).is_err());
        assert!(OperatorKind::new(OperatorTag::Qk, Side::Left, m, 0).is_err());
    }

    #[test]
    fn reversion_duality() {
        let m = 3;
        let f = &x1(m) * &ce(m);
        let k = 1;
        let left = apply_Rk(&f, m, k).unwrap().reverse();
        let right = apply_right(OperatorKind::new(OperatorTag::Rk, Side::Right, m, k).unwrap(), &f.reverse()).unwrap();
        assert_eq!(left, right);
        // conjugation flips the sign of the vector variable as well
        let left = apply_Rk(&f, m, k).unwrap().conjugate();
        let right = apply_right(OperatorKind::new(OperatorTag::Rk, Side::Right, m, k).unwrap(), &f.conjugate()).unwrap();
        assert_eq!(left, -&right);
    }

    #[test]
    fn kernels_are_kernels() {
        let ops = RsOperators::new(3, 1);
        for (tag, side) in [(OperatorTag::Rk, Side::Left), (OperatorTag::Qk, Side::Right)] {
            let ker = kernel_basis(&ops, tag, side, 1).unwrap();
            assert!(!ker.is_empty());
            for f in &ker {
                assert!(!f.is_zero());
                assert!(ops.apply(tag, side, f).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn stein_weiss_for_sample() {
        let m = 3;
        let f = &x1(m) * &ce(m);
        let res = stein_weiss_residual(&f, &RsOperators::new(m, 1)).unwrap();
        assert_eq!(res.len(), monogenic_basis(m, 1, Side::Left).unwrap().scalar_rank);
        assert!(res.iter().all(MVPolynomial::is_zero));
    }
}
