//! Exact computer algebra for Clifford analysis.

pub mod clifford;
pub mod error;
pub mod fixtures;
pub mod integrate;
pub mod linalg;
pub mod moebius;
pub mod operators;
pub mod poly;
pub mod radial;
pub mod scalar;
pub mod spaces;
pub mod verify;

pub use clifford::{Blade, Multivector};
pub use error::{Error, Result};
pub use poly::{MVPolynomial, Monomial, VarGroup};
pub use radial::{Frame, RadialForm};
pub use scalar::Rational;
pub use spaces::{PolySpaceBasis, Projector, Side};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/algebra.md")]
    mod algebra {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    mod polynomials {}
    #[doc = include_str!("../../../book/src/spaces.md")]
    mod spaces {}
    #[doc = include_str!("../../../book/src/operators.md")]
    mod operators {}
    #[doc = include_str!("../../../book/src/radial.md")]
    mod radial {}
    #[doc = include_str!("../../../book/src/moebius.md")]
    mod moebius {}
    #[doc = include_str!("../../../book/src/integration.md")]
    mod integration {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
