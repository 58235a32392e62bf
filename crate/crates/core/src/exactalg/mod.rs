//! Exact arithmetic: rationals, multivariate polynomials, and linear algebra
//! over the rationals and over the field of rational functions.

pub mod matrix;
pub mod poly;
pub mod rat;
pub mod span;

pub use matrix::{PolyMatrix, RatMatrix};
pub use poly::{Monomial, Poly};
pub use rat::Rat;
pub use span::LinearSpan;

use crate::error::Result;

pub fn poly_eval(p: &Poly, pt: &[Rat]) -> Result<Rat> {
    p.eval(pt)
}

pub fn partial(p: &Poly, axis: usize) -> Poly {
    p.partial(axis)
}

pub fn det(m: &PolyMatrix) -> Result<Poly> {
    m.det()
}

pub fn rank_at(m: &PolyMatrix, pt: &[Rat]) -> Result<usize> {
    m.rank_at(pt)
}

pub fn generic_rank(m: &PolyMatrix) -> usize {
    m.generic_rank()
}
