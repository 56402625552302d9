use super::buchberger::Builder;
use crate::poly::{Poly, RingRef};

/// `target = Σ coefficients[i] * gens[i] + remainder`; membership iff the remainder is zero.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftCertificate {
    pub coefficients: Vec<Poly>,
    pub remainder: Poly,
}

impl LiftCertificate {
    pub fn is_member(&self) -> bool {
        self.remainder.is_zero()
    }

    /// `Σ c_i g_i + remainder`, which must equal the lifted polynomial.
    pub fn reexpand(&self, gens: &[Poly]) -> Poly {
        let mut acc = self.remainder.clone();
        for (c, g) in self.coefficients.iter().zip(gens) {
            acc = &acc + &(c * g);
        }
        acc
    }
}

/// A Gröbner basis whose elements remember how they arise from the generators.
pub struct TrackedBasis {
    ring: RingRef,
    gens: Vec<Poly>,
    builder: Builder,
}

impl TrackedBasis {
    pub fn new(ring: &RingRef, gens: &[Poly]) -> TrackedBasis {
        let m = gens.len();
        let mut b = Builder::new(ring);
        for (i, g) in gens.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            let mut row = vec![Poly::zero(ring); m];
            row[i] = Poly::one(ring);
            let (r, row) = b.reduce(g.clone(), Some(row));
            if !r.is_zero() {
                b.insert(r, row);
            }
        }
        b.run();
        TrackedBasis { ring: ring.clone(), gens: gens.to_vec(), builder: b }
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    pub fn is_unit(&self) -> bool {
        self.builder.active_elems().iter().any(|e| e.poly.is_constant())
    }

    pub fn lift(&self, target: &Poly) -> LiftCertificate {
        let zero = vec![Poly::zero(&self.ring); self.gens.len()];
        let (rem, row) = self.builder.reduce(target.clone(), Some(zero));
        let coefficients = row.unwrap().into_iter().map(|c| -c).collect();
        LiftCertificate { coefficients, remainder: rem }
    }
}

/// Expresses `target` in terms of `gens`; the remainder is the normal form.
pub fn lift(target: &Poly, gens: &[Poly]) -> LiftCertificate {
    TrackedBasis::new(target.ring(), gens).lift(target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{Field, MonomialOrder, Ring};

    #[test]
    fn lift_reexpands() {
        let r = Ring::new(Field::Rational, &["x", "y"], MonomialOrder::DegRevLex).unwrap();
        let g = vec![Poly::parse(&r, "x^2 - y").unwrap(), Poly::parse(&r, "x*y - 1").unwrap()];
        let t = Poly::parse(&r, "y^3 - 1").unwrap();
        let c = lift(&t, &g);
        assert!(c.is_member());
        assert_eq!(c.reexpand(&g), t);
        let u = Poly::parse(&r, "x + 1").unwrap();
        let c = lift(&u, &g);
        assert!(!c.is_member());
        assert_eq!(c.reexpand(&g), u);
    }
}
