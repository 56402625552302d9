//! Gröbner bases, normal forms, lift certificates and syzygies.

mod buchberger;
mod lift;
mod syzygy;

pub use lift::{lift, LiftCertificate, TrackedBasis};
pub use syzygy::syzygies;

use buchberger::{reduced_basis, Builder, Elem};

use crate::poly::{Poly, RingRef};

/// A reduced Gröbner basis of an ideal in `ring` (with respect to the ring's order).
#[derive(Clone, Debug, PartialEq)]
pub struct GroebnerBasis {
    ring: RingRef,
    polys: Vec<Poly>,
}

impl GroebnerBasis {
    pub fn new(ring: &RingRef, gens: &[Poly]) -> GroebnerBasis {
        GroebnerBasis { ring: ring.clone(), polys: reduced_basis(ring, gens) }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.polys.len() == 1 && self.polys[0].is_one()
    }

    pub fn reduce(&self, p: &Poly) -> Poly {
        normal_form(p, &self.polys)
    }

    pub fn contains(&self, p: &Poly) -> bool {
        self.reduce(p).is_zero()
    }

    pub fn contains_all(&self, ps: &[Poly]) -> bool {
        ps.iter().all(|p| self.contains(p))
    }
}

/// Buchberger with the normal selection strategy; returns the reduced basis.
pub fn buchberger(ring: &RingRef, gens: &[Poly]) -> GroebnerBasis {
    GroebnerBasis::new(ring, gens)
}

/// Fully reduced remainder of `p` by `basis` (the remainder is unique when `basis` is a Gröbner basis).
pub fn normal_form(p: &Poly, basis: &[Poly]) -> Poly {
    let ring = p.ring();
    let mut b = Builder::new(ring);
    for g in basis.iter().filter(|g| !g.is_zero()) {
        b.elems.push(Elem::new(g.clone(), None));
    }
    b.activate_all();
    b.reduce(p.clone(), None).0
}

/// S-polynomial of two nonzero polynomials.
pub fn s_polynomial(f: &Poly, g: &Poly) -> Poly {
    let (fm, gm) = (f.lm().unwrap(), g.lm().unwrap());
    let l = fm.lcm(gm);
    let a = fm.quotient_of(&l);
    let b = gm.quotient_of(&l);
    let ca = f.lc().unwrap().inv();
    let cb = g.lc().unwrap().inv();
    f.mul_term(&a, &ca).sub_mul_term(&cb, &b, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{Field, MonomialOrder, Ring};

    fn ring(vars: &[&str], order: MonomialOrder) -> RingRef {
        Ring::new(Field::Rational, vars, order).unwrap()
    }

    #[test]
    fn lex_example() {
        let r = ring(&["x", "y"], MonomialOrder::Lex);
        let f = Poly::parse(&r, "x^2 - y").unwrap();
        let g = Poly::parse(&r, "x*y - 1").unwrap();
        let gb = buchberger(&r, &[f, g]);
        let s: Vec<String> = gb.polys().iter().map(|p| p.to_string()).collect();
        assert_eq!(s, vec!["x - y^2", "y^3 - 1"]);
    }

    #[test]
    fn unit_ideal() {
        let r = ring(&["x", "y"], MonomialOrder::DegRevLex);
        let gb = buchberger(&r, &[Poly::parse(&r, "x").unwrap(), Poly::parse(&r, "x - 1").unwrap()]);
        assert!(gb.is_unit());
    }

    #[test]
    fn s_polys_reduce_to_zero() {
        let r = ring(&["x", "y", "z"], MonomialOrder::DegRevLex);
        let gens: Vec<Poly> = ["x^2*y - z^3", "x*y^2 - z", "x*z - y^2 + 1"]
            .iter()
            .map(|s| Poly::parse(&r, s).unwrap())
            .collect();
        let gb = buchberger(&r, &gens);
        for a in gb.polys() {
            for b in gb.polys() {
                assert!(gb.reduce(&s_polynomial(a, b)).is_zero());
            }
        }
        for g in &gens {
            assert!(gb.contains(g));
        }
    }
}
