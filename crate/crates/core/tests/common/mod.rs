#![allow(dead_code)]

use neron_core::{Coeff, Field, Monomial, MonomialOrder, Poly, Ring, RingRef};
use proptest::prelude::*;

pub fn ring(field: Field, vars: &[&str]) -> RingRef {
    Ring::new(field, vars, MonomialOrder::DegRevLex).unwrap()
}

pub fn p(r: &RingRef, s: &str) -> Poly {
    Poly::parse(r, s).unwrap()
}

/// Raw terms: exponent vectors with small integer coefficients.
pub fn raw_poly(nvars: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
    prop::collection::vec((prop::collection::vec(0..=max_deg, nvars), -5i64..=5), 0..=max_terms).prop_map(move |ts| {
        ts.into_iter()
            .filter(|(e, _)| e.iter().sum::<u32>() <= max_deg)
            .collect()
    })
}

pub fn build(r: &RingRef, raw: &[(Vec<u32>, i64)]) -> Poly {
    let mut acc = Poly::zero(r);
    for (e, c) in raw {
        let t = Poly::term(r, Monomial::from_exps(e.clone()), r.field().from_i64(*c));
        acc = &acc + &t;
    }
    acc
}

fn leading(p: &Poly) -> (Monomial, Coeff) {
    let (m, c) = &p.terms()[0];
    (m.clone(), c.clone())
}

/// Full reduction of `f` by `basis`, term by term from the top; written without the
/// kernel's reducer.
pub fn naive_remainder(f: &Poly, basis: &[Poly]) -> Poly {
    let ring = f.ring().clone();
    let mut rem = Poly::zero(&ring);
    let mut work = f.clone();
    while !work.is_zero() {
        let (m, c) = leading(&work);
        let divisor = basis.iter().filter(|g| !g.is_zero()).find(|g| g.terms()[0].0.divides(&m));
        match divisor {
            Some(g) => {
                let (gm, gc) = leading(g);
                let q = Poly::term(&ring, m.div(&gm).unwrap(), c.div(&gc));
                work = &work - &(&q * g);
            }
            None => {
                let t = Poly::term(&ring, m, c);
                rem = &rem + &t;
                work = &work - &t;
            }
        }
    }
    rem
}

pub fn s_poly(f: &Poly, g: &Poly) -> Poly {
    let ring = f.ring().clone();
    let (fm, fc) = leading(f);
    let (gm, gc) = leading(g);
    let l = fm.lcm(&gm);
    let a = Poly::term(&ring, l.div(&fm).unwrap(), gc);
    let b = Poly::term(&ring, l.div(&gm).unwrap(), fc);
    &(&a * f) - &(&b * g)
}
