use super::GroebnerBasis;
use crate::poly::{MonomialOrder, Poly, RingRef};

/// Generators of the module of relations `Σ a_i g_i = 0`.
///
/// Works in `R[E_0, ..., E_m]` modulo `(E)^2` with `E` ordered first: the vector
/// `(g_i, e_i)` becomes `g_i E_0 + E_i`, and basis elements free of `E_0` are syzygies.
pub fn syzygies(ring: &RingRef, gens: &[Poly]) -> Vec<Vec<Poly>> {
    let m = gens.len();
    if m == 0 {
        return Vec::new();
    }
    let mut tags = Vec::with_capacity(m + 1);
    for i in 0..=m {
        tags.push(ring.fresh_name(&format!("E{i}"), &tags));
    }
    let n = ring.nvars();
    let ext = ring
        .prepend(&tags, MonomialOrder::Block(vec![m + 1, n]))
        .expect("fresh tag names");
    let e = |i: usize| Poly::var(&ext, i);
    let mut input = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let g = g.map_to(&ext).unwrap();
        input.push(&(&g * &e(0)) + &e(i + 1));
    }
    for a in 0..=m {
        for b in a..=m {
            input.push(&e(a) * &e(b));
        }
    }
    let gb = GroebnerBasis::new(&ext, &input);
    let mut out = Vec::new();
    for p in gb.polys() {
        let lm = p.lm().unwrap();
        let edeg: u32 = (0..=m).map(|i| lm.exp(i)).sum();
        if edeg != 1 || lm.exp(0) != 0 {
            continue;
        }
        let mut vec = Vec::with_capacity(m);
        for i in 1..=m {
            let c = p.coefficients_in(i);
            let ci = c.get(1).cloned().unwrap_or_else(|| Poly::zero(&ext));
            vec.push(ci.map_to(ring).expect("syzygy entry outside base ring"));
        }
        out.push(vec);
    }
    out
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{Field, Ring};

    #[test]
    fn relations_vanish() {
        let r = Ring::new(Field::Rational, &["x", "y", "z"], MonomialOrder::DegRevLex).unwrap();
        let g: Vec<Poly> = ["x*y", "x*z", "y*z - x"].iter().map(|s| Poly::parse(&r, s).unwrap()).collect();
        let syz = syzygies(&r, &g);
        assert!(syz.len() >= 2);
        for s in &syz {
            let mut acc = Poly::zero(&r);
            for (a, b) in s.iter().zip(&g) {
                acc = &acc + &(a * b);
            }
            assert!(acc.is_zero());
        }
    }
}
