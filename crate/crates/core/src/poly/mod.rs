pub mod coeff;
pub mod matrix;
pub mod monomial;
pub mod order;
#[allow(clippy::module_inception)]
pub mod poly;
pub mod ring;
pub mod text;

pub use coeff::{Coeff, Field};
pub use matrix::{subsets, PolyMatrix};
pub use monomial::Monomial;
pub use order::MonomialOrder;
pub use poly::{Poly, Term};
pub use ring::{valid_var_name, Ring, RingRef};
