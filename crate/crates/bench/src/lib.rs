//! Inputs shared by the benchmarks.

use neron_core::algebra::Presentation;
use neron_core::neron::Problem;
use neron_core::{Field, MonomialOrder, Poly, Ring, RingRef};

pub fn ring(field: Field, vars: &[&str]) -> RingRef {
    Ring::new(field, vars, MonomialOrder::DegRevLex).unwrap()
}

pub fn polys(r: &RingRef, src: &[&str]) -> Vec<Poly> {
    src.iter().map(|s| Poly::parse(r, s).unwrap()).collect()
}

/// The cyclic 4-roots system.
pub fn cyclic4(field: Field) -> (RingRef, Vec<Poly>) {
    let r = ring(field, &["a", "b", "c", "d"]);
    let g = polys(&r, &["a + b + c + d", "a*b + b*c + c*d + d*a", "a*b*c + b*c*d + c*d*a + d*a*b", "a*b*c*d - 1"]);
    (r, g)
}

/// `Y1*Y2 - x1*x2` with `v(Y) = (x1, x2)`.
pub fn worked(bound: u32) -> Problem {
    let r = ring(Field::Rational, &["x1", "x2", "Y1", "Y2"]);
    let b = Presentation::new(r.clone(), 2, vec![], polys(&r, &["Y1*Y2 - x1*x2"])).unwrap();
    let base = b.base_ring();
    Problem::new(b, polys(&base, &["x1", "x2"]), bound).unwrap()
}
