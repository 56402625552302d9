//! Ideal operations built on Gröbner bases.

use crate::error::{Error, Result};
use crate::groebner::{GroebnerBasis, TrackedBasis};
use crate::poly::{subsets, Monomial, MonomialOrder, Poly, Ring, RingRef};

/// Default bound on exponents searched by radical-membership witnesses and power tests.
pub const DEFAULT_E_MAX: u32 = 10;

fn elimination_ring(ring: &RingRef, extra: &[&str]) -> RingRef {
    let mut names: Vec<String> = Vec::new();
    for e in extra {
        names.push(ring.fresh_name(e, &names));
    }
    ring.prepend(&names, MonomialOrder::Block(vec![extra.len(), ring.nvars()])).unwrap()
}

fn back(p: &Poly, ring: &RingRef) -> Option<Poly> {
    p.map_to(ring).ok()
}

/// `I ∩ J` via `t I + (1 - t) J` and elimination of `t`.
pub fn intersect(ring: &RingRef, i: &[Poly], j: &[Poly]) -> Vec<Poly> {
    let ext = elimination_ring(ring, &["t"]);
    let t = Poly::var(&ext, 0);
    let one_t = &Poly::one(&ext) - &t;
    let mut gens = Vec::new();
    for g in i {
        gens.push(&t * &g.map_to(&ext).unwrap());
    }
    for g in j {
        gens.push(&one_t * &g.map_to(&ext).unwrap());
    }
    let gb = GroebnerBasis::new(&ext, &gens);
    let out: Vec<Poly> = gb.polys().iter().filter_map(|p| back(p, ring)).collect();
    GroebnerBasis::new(ring, &out).polys().to_vec()
}

/// `I : J`, as the generators of its reduced Gröbner basis.
pub fn ideal_quotient(ring: &RingRef, i: &[Poly], j: &[Poly]) -> Vec<Poly> {
    let gi = GroebnerBasis::new(ring, i);
    let mut acc: Option<Vec<Poly>> = None;
    for g in j {
        if gi.contains(g) {
            continue;
        }
        let inter = intersect(ring, gi.polys(), std::slice::from_ref(g));
        let q: Vec<Poly> = inter.iter().map(|p| p.exact_div(g).expect("intersection with (g) divisible by g")).collect();
        acc = Some(match acc {
            None => q,
            Some(a) => intersect(ring, &a, &q),
        });
    }
    match acc {
        None => vec![Poly::one(ring)],
        Some(a) => GroebnerBasis::new(ring, &a).polys().to_vec(),
    }
}

/// `I ∩ k[remaining variables]`, returned in `ring`.
pub fn eliminate(ring: &RingRef, gens: &[Poly], vars: &[usize]) -> Vec<Poly> {
    let n = ring.nvars();
    let keep: Vec<usize> = (0..n).filter(|v| !vars.contains(v)).collect();
    let mut names: Vec<String> = vars.iter().map(|&v| ring.var_name(v).to_string()).collect();
    names.extend(keep.iter().map(|&v| ring.var_name(v).to_string()));
    let ext = Ring::new(ring.field(), &names, MonomialOrder::Block(vec![vars.len(), keep.len()])).unwrap();
    let mapped: Vec<Poly> = gens.iter().map(|g| g.map_to(&ext).unwrap()).collect();
    let gb = GroebnerBasis::new(&ext, &mapped);
    let out: Vec<Poly> = gb
        .polys()
        .iter()
        .filter(|p| p.support().iter().all(|&k| k >= vars.len()))
        .map(|p| p.map_to(ring).unwrap())
        .collect();
    GroebnerBasis::new(ring, &out).polys().to_vec()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadicalWitness {
    pub in_radical: bool,
    /// Least `e <= e_max` with `f^e ∈ I`, when found.
    pub exponent: Option<u32>,
}

/// Rabinowitsch test for `f ∈ √I`, with the smallest exponent witness up to `e_max`.
pub fn radical_membership(ring: &RingRef, f: &Poly, gens: &[Poly], e_max: u32) -> RadicalWitness {
    let ext = elimination_ring(ring, &["z"]);
    let z = Poly::var(&ext, 0);
    let mut g: Vec<Poly> = gens.iter().map(|p| p.map_to(&ext).unwrap()).collect();
    g.push(&Poly::one(&ext) - &(&z * &f.map_to(&ext).unwrap()));
    let in_radical = GroebnerBasis::new(&ext, &g).is_unit();
    let exponent = if in_radical { power_in_ideal(ring, f, gens, e_max) } else { None };
    RadicalWitness { in_radical, exponent }
}

/// Least `e` in `1..=e_max` with `f^e ∈ I`.
pub fn power_in_ideal(ring: &RingRef, f: &Poly, gens: &[Poly], e_max: u32) -> Option<u32> {
    let gb = GroebnerBasis::new(ring, gens);
    power_in_basis(&gb, f, e_max)
}

pub fn power_in_basis(gb: &GroebnerBasis, f: &Poly, e_max: u32) -> Option<u32> {
    let mut pw = Poly::one(gb.ring());
    for e in 1..=e_max {
        pw = gb.reduce(&(&pw * f));
        if pw.is_zero() {
            return Some(e);
        }
    }
    None
}

/// Krull dimension of `ring / I` from maximal independent sets of the leading ideal;
/// `-1` for the unit ideal.
pub fn krull_dim(ring: &RingRef, gens: &[Poly]) -> i64 {
    let gb = GroebnerBasis::new(ring, gens);
    krull_dim_of_basis(&gb)
}

pub fn krull_dim_of_basis(gb: &GroebnerBasis) -> i64 {
    if gb.is_unit() {
        return -1;
    }
    let n = gb.ring().nvars();
    let lms: Vec<&Monomial> = gb.polys().iter().map(|p| p.lm().unwrap()).collect();
    for k in (0..=n).rev() {
        for set in subsets(n, k) {
            let independent = lms.iter().all(|m| m.exps().iter().enumerate().any(|(i, e)| *e > 0 && !set.contains(&i)));
            if independent {
                return k as i64;
            }
        }
    }
    0
}

fn has_unit_constant(ps: &[Poly]) -> bool {
    ps.iter().any(|p| !p.constant_term().is_zero())
}

/// `f ∈ I` in the localization at the origin: some generator of `I : f` is a unit there.
pub fn local_membership(ring: &RingRef, f: &Poly, gens: &[Poly]) -> bool {
    let gb = GroebnerBasis::new(ring, gens);
    if gb.contains(f) {
        return true;
    }
    has_unit_constant(&ideal_quotient(ring, gb.polys(), std::slice::from_ref(f)))
}

/// `(vars)^n ⊆ I` in the localization at the origin.
pub fn is_m_primary_local(ring: &RingRef, gens: &[Poly], vars: &[usize], n: u32) -> bool {
    let gb = GroebnerBasis::new(ring, gens);
    let mut mons = vec![Monomial::one(ring.nvars())];
    for _ in 0..n {
        let mut next = Vec::new();
        for m in &mons {
            let last = vars.iter().rposition(|&v| m.exp(v) > 0).unwrap_or(0);
            for &v in &vars[last..] {
                next.push(m.mul(&Monomial::var(ring.nvars(), v, 1)));
            }
        }
        mons = next;
    }
    let one = ring.field().one();
    let mut pending = Vec::new();
    for m in mons {
        let p = Poly::term(ring, m, one.clone());
        if !gb.contains(&p) {
            pending.push(p);
        }
    }
    if pending.is_empty() {
        return true;
    }
    pending.iter().all(|p| has_unit_constant(&ideal_quotient(ring, gb.polys(), std::slice::from_ref(p))))
}

/// Exact quotient `a / d` modulo `M`: returns `c` with `a ≡ c d (mod M)`.
///
/// Polynomial division is tried first; otherwise `c` is the coefficient of `d` in a
/// lift of `a` over `[d] ++ M`, normalized modulo `M`.
pub fn divide_exact(a: &Poly, d: &Poly, m: &[Poly]) -> Result<Poly> {
    let ring = a.ring();
    if d.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if let Some(q) = a.exact_div(d) {
        return Ok(q);
    }
    let mut gens = vec![d.clone()];
    gens.extend(m.iter().cloned());
    let cert = TrackedBasis::new(ring, &gens).lift(a);
    if !cert.is_member() {
        return Err(Error::NotDivisible(a.to_string(), d.to_string()));
    }
    let c = cert.coefficients[0].clone();
    if m.is_empty() {
        return Ok(c);
    }
    Ok(GroebnerBasis::new(ring, m).reduce(&c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Field;

    fn setup(vars: &[&str]) -> RingRef {
        Ring::new(Field::Rational, vars, MonomialOrder::DegRevLex).unwrap()
    }

    fn p(r: &RingRef, s: &str) -> Poly {
        Poly::parse(r, s).unwrap()
    }

    #[test]
    fn quotient_and_intersection() {
        let r = setup(&["x", "y"]);
        let q = ideal_quotient(&r, &[p(&r, "x^2"), p(&r, "x*y")], &[p(&r, "x")]);
        assert_eq!(q, vec![p(&r, "x"), p(&r, "y")]);
        let i = intersect(&r, &[p(&r, "x")], &[p(&r, "y")]);
        assert_eq!(i, vec![p(&r, "x*y")]);
    }

    #[test]
    fn radical_and_dimension() {
        let r = setup(&["x", "y"]);
        let w = radical_membership(&r, &p(&r, "x"), &[p(&r, "x^3"), p(&r, "y")], DEFAULT_E_MAX);
        assert_eq!(w, RadicalWitness { in_radical: true, exponent: Some(3) });
        assert_eq!(krull_dim(&r, &[p(&r, "x*y")]), 1);
        assert_eq!(krull_dim(&r, &[]), 2);
        assert_eq!(krull_dim(&r, &[p(&r, "1")]), -1);
    }

    #[test]
    fn local_versus_global() {
        let r = setup(&["x"]);
        let i = [p(&r, "x*(1+x)")];
        assert!(local_membership(&r, &p(&r, "x"), &i));
        assert!(!GroebnerBasis::new(&r, &i).contains(&p(&r, "x")));
        let r2 = setup(&["x1", "x2"]);
        assert!(is_m_primary_local(&r2, &[p(&r2, "x1^2"), p(&r2, "x2^3")], &[0, 1], 4));
        assert!(!is_m_primary_local(&r2, &[p(&r2, "x1^2"), p(&r2, "x2^3")], &[0, 1], 3));
    }

    #[test]
    fn exact_division_modulo() {
        let r = setup(&["x", "y"]);
        let c = divide_exact(&p(&r, "x*y + y^2"), &p(&r, "x"), &[p(&r, "y^2 - x*y")]).unwrap();
        assert!(GroebnerBasis::new(&r, &[p(&r, "y^2 - x*y")]).contains(&(&p(&r, "x*y + y^2") - &(&c * &p(&r, "x")))));
        assert!(matches!(divide_exact(&p(&r, "y"), &p(&r, "x"), &[]), Err(Error::NotDivisible(..))));
    }
}
