//! Exact polynomial algebra over ℚ and GF(p), Gröbner bases, ideal operations,
//! truncated power series, smoothness certificates, and a constructive
//! General Neron Desingularization for 2-dimensional base rings.

pub mod algebra;
pub mod error;
pub mod groebner;
pub mod ideal;
pub mod jets;
pub mod neron;
pub mod poly;
pub mod smooth;

pub use error::{Error, Result};
pub use poly::{Coeff, Field, Monomial, MonomialOrder, Poly, PolyMatrix, Ring, RingRef};
