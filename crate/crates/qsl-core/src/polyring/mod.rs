//! Exact polynomial arithmetic over Q and the classical operators built on it.

pub mod field;
pub mod lines;
pub mod mpoly;
pub mod numfield;
pub mod ops;
pub mod parse;
pub mod quadext;
pub mod rational;
pub mod upoly;

pub use field::{Embed, Field};
pub use lines::{factor_into_lines, normalize_line, LineFactor, LineFactorization, LineTriple};
pub use mpoly::{vars, MPoly, Monomial, Vars};
pub use numfield::NfElem;
pub use ops::{
    binary_coeffs, determinant, discriminant_binary, gcd, hessian, jacobian, resultant,
    resultant_by_name, resultant_formal, transvectant,
};
pub use parse::{parse_poly, ParseError};
pub use quadext::QuadExtScalar;
pub use rational::{parse_rational, ri, rq, Rational};
pub use upoly::UPoly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("resultant undefined for constant operand")]
    ConstantOperand,
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("form is not homogeneous of degree {0}")]
    NotHomogeneous(u32),
    #[error("discriminant needs a form of degree 2 or 3, got {0}")]
    WrongDegree(u32),
}
