//! Exact polynomial exterior calculus over the rationals, with division
//! criteria for vector fields and distributions, Gröbner-based singular-set
//! queries and a reproduction of the tangent-sheaf splitting analysis for
//! codimension-one foliations of projective 3-space tangent to a vector field.

pub mod division;
pub mod extcalc;
pub mod geometry;
pub mod groebner;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod theoremc;
