//! Buchberger's algorithm with the normal selection strategy and the
//! Gebauer–Möller installation of critical pairs.

use std::cmp::Ordering;

use crate::poly::{Coeff, Monomial, Poly, RingRef};

#[derive(Clone)]
pub(crate) struct Elem {
    pub poly: Poly,
    pub row: Option<Vec<Poly>>,
    mask: u64,
}

impl Elem {
    pub fn new(poly: Poly, row: Option<Vec<Poly>>) -> Elem {
        let mask = poly.lm().map(|m| m.divmask()).unwrap_or(0);
        Elem { poly, row, mask }
    }

    fn lm(&self) -> &Monomial {
        self.poly.lm().expect("zero basis element")
    }
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Basis under construction. `active[k]` marks elements not made redundant.
pub(crate) struct Builder {
    ring: RingRef,
    pub elems: Vec<Elem>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
}

impl Builder {
    pub fn new(ring: &RingRef) -> Builder {
        Builder { ring: ring.clone(), elems: Vec::new(), active: Vec::new(), pairs: Vec::new() }
    }

    fn find_divisor(&self, m: &Monomial) -> Option<usize> {
        let mask = m.divmask();
        (0..self.elems.len()).find(|&k| {
            self.active[k] && self.elems[k].mask & !mask == 0 && self.elems[k].lm().divides(m)
        })
    }

    /// Full reduction of `p` (with optional row) by the active elements.
    pub fn reduce(&self, p: Poly, row: Option<Vec<Poly>>) -> (Poly, Option<Vec<Poly>>) {
        let mut p = p;
        let mut row = row;
        let mut rem: Vec<(Monomial, Coeff)> = Vec::new();
        while let Some((m, c)) = p.terms().first().cloned() {
            match self.find_divisor(&m) {
                Some(k) => {
                    let g = &self.elems[k];
                    let q = g.lm().quotient_of(&m);
                    let qc = c.div(g.poly.lc().unwrap());
                    p = p.sub_mul_term(&qc, &q, &g.poly);
                    if let (Some(r), Some(gr)) = (row.as_mut(), g.row.as_ref()) {
                        for (a, b) in r.iter_mut().zip(gr) {
                            if !b.is_zero() {
                                *a = a.sub_mul_term(&qc, &q, b);
                            }
                        }
                    }
                }
                None => {
                    rem.push((m, c));
                    p.terms_mut().remove(0);
                }
            }
        }
        rem.extend(p.into_terms());
        (Poly::from_sorted(&self.ring, rem), row)
    }

    /// Adds a nonzero, fully reduced element and installs its pairs.
    pub fn insert(&mut self, p: Poly, row: Option<Vec<Poly>>) {
        let lc = p.lc().unwrap().clone();
        let (p, row) = if lc.is_one() {
            (p, row)
        } else {
            let inv = lc.inv();
            (p.scale(&inv), row.map(|r| r.iter().map(|x| x.scale(&inv)).collect()))
        };
        let h = Elem::new(p, row);
        let hm = h.lm().clone();
        let t = self.elems.len();

        // Gebauer–Möller: new pairs (h, g)
        let mut cands: Vec<(usize, Monomial, bool)> = (0..t)
            .filter(|&k| self.active[k])
            .map(|k| {
                let gm = self.elems[k].lm();
                (k, hm.lcm(gm), hm.coprime(gm))
            })
            .collect();
        // chain criterion among the new pairs: drop (h,g1) if some (h,g2) has a strictly dividing lcm,
        // or an equal lcm with a smaller index
        let mut keep = vec![true; cands.len()];
        for a in 0..cands.len() {
            for b in 0..cands.len() {
                if a == b || !keep[b] {
                    continue;
                }
                let (la, lb) = (&cands[a].1, &cands[b].1);
                if lb.divides(la) && (lb != la || b < a) {
                    keep[a] = false;
                    break;
                }
            }
        }
        // among kept pairs with coprime leading monomials (product criterion), drop them
        let mut new_pairs = Vec::new();
        for (idx, (k, lcm, coprime)) in cands.drain(..).enumerate() {
            if keep[idx] && !coprime {
                new_pairs.push(Pair { i: k, j: t, lcm });
            }
        }
        // old pairs made redundant by h
        self.pairs.retain(|p| {
            if !hm.divides(&p.lcm) {
                return true;
            }
            let l1 = self.elems[p.i].lm().lcm(&hm);
            let l2 = self.elems[p.j].lm().lcm(&hm);
            l1 == p.lcm || l2 == p.lcm
        });
        self.pairs.extend(new_pairs);
        // elements whose leading monomial is divisible by LM(h) no longer need pairs
        for k in 0..t {
            if self.active[k] && hm.divides(self.elems[k].lm()) {
                self.active[k] = false;
            }
        }
        self.elems.push(h);
        self.active.push(true);
    }

    fn select(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let ord = self.ring.order();
        let mut best = 0;
        for k in 1..self.pairs.len() {
            let (a, b) = (&self.pairs[k], &self.pairs[best]);
            let c = a
                .lcm
                .deg()
                .cmp(&b.lcm.deg())
                .then_with(|| ord.cmp(&a.lcm, &b.lcm))
                .then_with(|| (a.j, a.i).cmp(&(b.j, b.i)));
            if c == Ordering::Less {
                best = k;
            }
        }
        Some(self.pairs.swap_remove(best))
    }

    fn spoly(&self, pr: &Pair) -> (Poly, Option<Vec<Poly>>) {
        let (a, b) = (&self.elems[pr.i], &self.elems[pr.j]);
        let ma = a.lm().quotient_of(&pr.lcm);
        let mb = b.lm().quotient_of(&pr.lcm);
        let one = self.ring.field().one();
        // both are monic
        let s = a.poly.mul_term(&ma, &one).sub_mul_term(&one, &mb, &b.poly);
        let row = match (&a.row, &b.row) {
            (Some(ra), Some(rb)) => Some(
                ra.iter()
                    .zip(rb)
                    .map(|(x, y)| x.mul_term(&ma, &one).sub_mul_term(&one, &mb, y))
                    .collect(),
            ),
            _ => None,
        };
        (s, row)
    }

    pub fn run(&mut self) {
        while let Some(pr) = self.select() {
            let (s, row) = self.spoly(&pr);
            let (r, row) = self.reduce(s, row);
            if !r.is_zero() {
                self.insert(r, row);
            }
        }
    }

    pub fn activate_all(&mut self) {
        self.active = vec![true; self.elems.len()];
    }

    pub fn active_elems(&self) -> Vec<&Elem> {
        (0..self.elems.len()).filter(|&k| self.active[k]).map(|k| &self.elems[k]).collect()
    }
}

/// Reduced Gröbner basis: minimal, monic, inter-reduced, sorted by descending leading monomial.
pub(crate) fn reduced_basis(ring: &RingRef, gens: &[Poly]) -> Vec<Poly> {
    let mut b = Builder::new(ring);
    let mut input: Vec<Poly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    let ord = ring.order().clone();
    input.sort_by(|x, y| ord.cmp(x.lm().unwrap(), y.lm().unwrap()));
    for g in input {
        let (r, _) = b.reduce(g, None);
        if !r.is_zero() {
            b.insert(r, None);
        }
    }
    b.run();
    let mut polys: Vec<Poly> = b.active_elems().into_iter().map(|e| e.poly.clone()).collect();
    // minimalize
    let mut minimal: Vec<Poly> = Vec::new();
    for (k, p) in polys.iter().enumerate() {
        let lm = p.lm().unwrap();
        let redundant = polys.iter().enumerate().any(|(j, q)| {
            let qm = q.lm().unwrap();
            j != k && qm.divides(lm) && (qm != lm || j < k)
        });
        if !redundant {
            minimal.push(p.clone());
        }
    }
    polys = minimal;
    polys.sort_by(|x, y| ord.cmp(y.lm().unwrap(), x.lm().unwrap()));
    // inter-reduce tails
    let mut out = Vec::with_capacity(polys.len());
    for k in 0..polys.len() {
        let others: Vec<Poly> = polys.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, p)| p.clone()).collect();
        let mut tb = Builder::new(ring);
        for o in others {
            tb.elems.push(Elem::new(o, None));
        }
        tb.activate_all();
        let (r, _) = tb.reduce(polys[k].clone(), None);
        out.push(r.monic());
    }
    out
}
