//! Finitely presented algebras `B = A[Y]/I` over `A = k[x]/J`.

use crate::error::{Error, Result};
use crate::groebner::GroebnerBasis;
use crate::poly::{MonomialOrder, Poly, Ring, RingRef};

#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    /// `k[x, Y]`: the first `nbase` variables are the base variables `x`.
    pub ring: RingRef,
    pub nbase: usize,
    /// Generators of `J` (in `ring`, involving only `x`).
    pub base_ideal: Vec<Poly>,
    /// Generators of `I`.
    pub relations: Vec<Poly>,
}

impl Presentation {
    pub fn new(ring: RingRef, nbase: usize, base_ideal: Vec<Poly>, relations: Vec<Poly>) -> Result<Presentation> {
        if nbase > ring.nvars() {
            return Err(Error::InvalidRing("more base variables than variables".into()));
        }
        for j in &base_ideal {
            if j.support().iter().any(|&v| v >= nbase) {
                return Err(Error::Invalid(format!("base ideal generator {j} involves algebra variables")));
            }
        }
        Ok(Presentation { ring, nbase, base_ideal, relations })
    }

    pub fn base_vars(&self) -> Vec<usize> {
        (0..self.nbase).collect()
    }

    pub fn algebra_vars(&self) -> Vec<usize> {
        (self.nbase..self.ring.nvars()).collect()
    }

    pub fn base_names(&self) -> Vec<String> {
        self.ring.vars()[..self.nbase].to_vec()
    }

    pub fn algebra_names(&self) -> Vec<String> {
        self.ring.vars()[self.nbase..].to_vec()
    }

    pub fn nalg(&self) -> usize {
        self.ring.nvars() - self.nbase
    }

    /// `k[x]` with the default order.
    pub fn base_ring(&self) -> RingRef {
        Ring::new(self.ring.field(), &self.ring.vars()[..self.nbase], MonomialOrder::DegRevLex).unwrap()
    }

    /// `J` as polynomials of `base_ring()`.
    pub fn base_ideal_in_base(&self) -> Vec<Poly> {
        let b = self.base_ring();
        self.base_ideal.iter().map(|p| p.map_to(&b).unwrap()).collect()
    }

    /// `I + J` in `ring`.
    pub fn full_ideal(&self) -> Vec<Poly> {
        let mut g = self.relations.clone();
        g.extend(self.base_ideal.iter().cloned());
        g
    }

    pub fn full_basis(&self) -> GroebnerBasis {
        GroebnerBasis::new(&self.ring, &self.full_ideal())
    }
}
