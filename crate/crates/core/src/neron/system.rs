//! Jacobian systems: a relation subset `f`, minors `M_i`, colon elements `L_i` with
//! `d ≡ Σ M_i L_i (mod I)`, and the completed matrices `H_i` with adjugates.

use log::debug;

use crate::algebra::Presentation;
use crate::error::{Error, Result};
use crate::groebner::{GroebnerBasis, TrackedBasis};
use crate::ideal::{is_m_primary_local, power_in_basis};
use crate::poly::{Poly, PolyMatrix};
use crate::smooth::{relation_subsets, subsystem_data};

#[derive(Clone, Debug, PartialEq)]
pub struct MinorTerm {
    /// Positions among the algebra variables.
    pub cols: Vec<usize>,
    /// Completion sign: `det(H_i) = sign * minor(cols)`.
    pub sign: i32,
    /// `M_i = det(H_i)`, the sign already absorbed.
    pub minor: Poly,
    /// `L_i ∈ ((f) + J) : I`, the sign already absorbed.
    pub l: Poly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct JacobianSystem {
    /// Indices into the relations.
    pub subset: Vec<usize>,
    pub gamma: Poly,
    pub exponent: u32,
    /// `d = γ^e`, in the algebra ring.
    pub d: Poly,
    pub terms: Vec<MinorTerm>,
    /// `P = Σ M_i L_i`.
    pub p: Poly,
    /// An element of `((f) + J) : I` congruent to `d` modulo `I + J` (`d` itself when the colon is trivial).
    pub p_hat: Poly,
}

impl JacobianSystem {
    pub fn r(&self) -> usize {
        self.subset.len()
    }

    pub fn q(&self) -> usize {
        self.terms.len()
    }

    pub fn relations(&self, b: &Presentation) -> Vec<Poly> {
        self.subset.iter().map(|&i| b.relations[i].clone()).collect()
    }

    /// `max deg f_i`.
    pub fn max_degree(&self, b: &Presentation) -> u32 {
        self.relations(b).iter().filter_map(|f| f.total_degree()).max().unwrap_or(0)
    }

    pub fn jacobian(&self, b: &Presentation) -> PolyMatrix {
        PolyMatrix::jacobian(&b.ring, &self.relations(b), &b.algebra_vars())
    }

    /// `(H_i, G_i = L_i adj(H_i))` for every minor term.
    pub fn completed(&self, b: &Presentation) -> Result<Vec<(PolyMatrix, PolyMatrix)>> {
        let jac = self.jacobian(b);
        let mut out = Vec::new();
        for t in &self.terms {
            let (h, _) = jac.complete_to_square(&t.cols)?;
            let (adj, _) = jac.completed_adjugate(&t.cols)?;
            out.push((h, adj.scale(&t.l)));
        }
        Ok(out)
    }

    /// Re-expands `(∂f/∂Y) G_i = M_i L_i (Id_r | 0)`, `G_i H_i = M_i L_i Id`, and `d - P ∈ I + J`.
    pub fn check_identities(&self, b: &Presentation) -> std::result::Result<(), String> {
        let jac = self.jacobian(b);
        let (r, n) = (self.r(), b.nalg());
        let mut p = Poly::zero(&b.ring);
        for (t, (h, g)) in self.terms.iter().zip(self.completed(b).map_err(|e| e.to_string())?) {
            let ml = &t.minor * &t.l;
            p = &p + &ml;
            if h.det().map_err(|e| e.to_string())? != t.minor {
                return Err(format!("det(H) differs from the recorded minor for columns {:?}", t.cols));
            }
            let jg = jac.mul(&g).map_err(|e| e.to_string())?;
            for i in 0..r {
                for j in 0..n {
                    let want = if i == j { ml.clone() } else { Poly::zero(&b.ring) };
                    if jg.get(i, j) != &want {
                        return Err(format!("(df/dY) G differs from M L (Id|0) at ({i},{j})"));
                    }
                }
            }
            let gh = g.mul(&h).map_err(|e| e.to_string())?;
            for i in 0..n {
                for j in 0..n {
                    let want = if i == j { ml.clone() } else { Poly::zero(&b.ring) };
                    if gh.get(i, j) != &want {
                        return Err(format!("G H differs from M L Id at ({i},{j})"));
                    }
                }
            }
        }
        if p != self.p {
            return Err("P differs from the sum of M_i L_i".into());
        }
        let full = b.full_basis();
        if !full.contains(&(&self.d - &self.p)) {
            return Err("d - P is not in I + J".into());
        }
        if !full.contains(&(&self.d - &self.p_hat)) {
            return Err("d - P_hat is not in I + J".into());
        }
        let mut fj = self.relations(b);
        fj.extend(b.base_ideal.iter().cloned());
        let fgb = GroebnerBasis::new(&b.ring, &fj);
        for g in &b.relations {
            if !fgb.contains(&(&self.p_hat * g)) {
                return Err("P_hat is not in ((f) + J) : I".into());
            }
            for t in &self.terms {
                if !fgb.contains(&(&t.l * g)) {
                    return Err("some L_i is not in ((f) + J) : I".into());
                }
            }
        }
        Ok(())
    }
}

struct Candidate {
    subset: Vec<usize>,
    exponent: u32,
    colon_trivial: bool,
    /// `(colon generator, cols, minor)` products.
    factors: Vec<(Poly, Vec<usize>, Poly)>,
    colon: Vec<Poly>,
}

/// Finds `f` and the least `e` with `γ^e ∈ ((f) : I) Δ_f + I + J`, prunes the products to
/// a small generating set, and lifts `d = γ^e` to obtain the `M_i`, `L_i`.
pub fn find_jacobian_system(b: &Presentation, gamma: &Poly, subset_bound: usize, e_max: u32) -> Result<JacobianSystem> {
    find_jacobian_system_with(b, gamma, &[], subset_bound, e_max)
}

/// As [`find_jacobian_system`], with the relations `forced` in every subset (they do
/// not count towards the bound).
pub fn find_jacobian_system_with(b: &Presentation, gamma: &Poly, forced: &[usize], subset_bound: usize, e_max: u32) -> Result<JacobianSystem> {
    let ring = &b.ring;
    let gamma = gamma.map_to(ring)?;
    let mut best: Option<Candidate> = None;
    let free: Vec<usize> = (0..b.relations.len()).filter(|i| !forced.contains(i)).collect();
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    if !forced.is_empty() {
        subsets.push(forced.to_vec());
    }
    for s in relation_subsets(free.len(), subset_bound) {
        let mut sub: Vec<usize> = s.iter().map(|&k| free[k]).collect();
        sub.extend_from_slice(forced);
        sub.sort_unstable();
        if sub.len() <= b.nalg() {
            subsets.push(sub);
        }
    }
    for subset in subsets {
        let data = subsystem_data(b, &subset);
        let mut factors = Vec::new();
        let mut gens = b.full_ideal();
        for c in &data.colon {
            for (cols, m) in &data.minors {
                factors.push((c.clone(), cols.clone(), m.clone()));
                gens.push(c * m);
            }
        }
        if factors.is_empty() {
            continue;
        }
        let gb = GroebnerBasis::new(ring, &gens);
        let bound = best.as_ref().map(|c| c.exponent).unwrap_or(e_max);
        if let Some(e) = power_in_basis(&gb, &gamma, bound) {
            let colon_trivial = data.colon.len() == 1 && data.colon[0].is_one();
            let better = match &best {
                None => true,
                Some(c) => e < c.exponent || (e == c.exponent && colon_trivial && !c.colon_trivial),
            };
            debug!("subset {:?}: exponent {}", subset, e);
            if better {
                best = Some(Candidate { subset, exponent: e, colon_trivial, factors, colon: data.colon.clone() });
            }
        }
    }
    let cand = best.ok_or_else(|| {
        Error::step(7, format!("no power γ^e (e <= {e_max}) of γ = {gamma} lies in ((f):I)Δ_f + I for |f| <= {subset_bound}; raise --e-max or --subset-bound"))
    })?;
    let d = gamma.pow(cand.exponent);
    let full = b.full_ideal();

    // greedy pruning of the products, keeping membership of d
    let mut keep: Vec<bool> = vec![true; cand.factors.len()];
    for k in 0..cand.factors.len() {
        keep[k] = false;
        let mut gens = full.clone();
        for (j, (c, _, m)) in cand.factors.iter().enumerate() {
            if keep[j] {
                gens.push(c * m);
            }
        }
        if !GroebnerBasis::new(ring, &gens).contains(&d) {
            keep[k] = true;
        }
    }
    let factors: Vec<&(Poly, Vec<usize>, Poly)> = cand.factors.iter().zip(&keep).filter(|(_, k)| **k).map(|(f, _)| f).collect();
    let mut gens: Vec<Poly> = factors.iter().map(|(c, _, m)| c * m).collect();
    let nprod = gens.len();
    gens.extend(full.iter().cloned());
    let cert = TrackedBasis::new(ring, &gens).lift(&d);
    if !cert.is_member() {
        return Err(Error::step(8, "lift of d over the chosen products failed"));
    }

    // group by column set; reduce L modulo (f) + J, which stays inside the colon ideal
    let f: Vec<Poly> = cand.subset.iter().map(|&i| b.relations[i].clone()).collect();
    let mut fj = f.clone();
    fj.extend(b.base_ideal.iter().cloned());
    let fgb = GroebnerBasis::new(ring, &fj);
    let jac = PolyMatrix::jacobian(ring, &f, &b.algebra_vars());
    let mut terms: Vec<MinorTerm> = Vec::new();
    for (k, (c, cols, _)) in factors.iter().enumerate().take(nprod) {
        let contrib = &cert.coefficients[k] * c;
        match terms.iter_mut().find(|t| &t.cols == cols) {
            Some(t) => t.l = &t.l + &contrib,
            None => terms.push(MinorTerm { cols: cols.clone(), sign: 1, minor: Poly::zero(ring), l: contrib }),
        }
    }
    let mut p = Poly::zero(ring);
    let mut out_terms = Vec::new();
    for mut t in terms {
        let l = fgb.reduce(&t.l);
        if l.is_zero() {
            continue;
        }
        let (_, sign) = jac.complete_to_square(&t.cols)?;
        let rows: Vec<usize> = (0..f.len()).collect();
        let m = jac.minor(&rows, &t.cols);
        t.sign = sign;
        t.minor = if sign < 0 { -m } else { m };
        t.l = if sign < 0 { -l } else { l };
        p = &p + &(&t.minor * &t.l);
        out_terms.push(t);
    }
    out_terms.sort_by(|a, b| a.cols.cmp(&b.cols));
    let p_hat = if cand.colon_trivial {
        d.clone()
    } else {
        let mut g = cand.colon.clone();
        let nc = g.len();
        g.extend(full.iter().cloned());
        let c = TrackedBasis::new(ring, &g).lift(&d);
        if !c.is_member() {
            return Err(Error::step(8, "d is not in the colon ideal modulo I"));
        }
        let mut acc = Poly::zero(ring);
        for (a, cg) in c.coefficients.iter().zip(&cand.colon).take(nc) {
            acc = &acc + &(a * cg);
        }
        acc
    };
    let sys = JacobianSystem {
        subset: cand.subset,
        gamma,
        exponent: cand.exponent,
        d,
        terms: out_terms,
        p,
        p_hat,
    };
    sys.check_identities(b).map_err(|e| Error::step(9, e))?;
    Ok(sys)
}

/// Step 7 gate: `(d^3, d'^3) + J ⊇ (x)^N` in the localization at the origin.
pub fn m_primary_gate(base_ring: &crate::poly::RingRef, base_ideal: &[Poly], d: &Poly, dp: &Poly, n: u32) -> bool {
    let mut gens = base_ideal.to_vec();
    gens.push(d.map_to(base_ring).unwrap().pow(3));
    gens.push(dp.map_to(base_ring).unwrap().pow(3));
    let vars: Vec<usize> = (0..base_ring.nvars()).collect();
    is_m_primary_local(base_ring, &gens, &vars, n)
}
