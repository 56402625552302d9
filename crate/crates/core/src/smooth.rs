//! Smooth locus: the Elkik ideal, standard smooth certificates and the
//! symmetric algebra of the conormal module.

use crate::algebra::Presentation;
use crate::groebner::{syzygies, GroebnerBasis, TrackedBasis};
use crate::ideal::{eliminate, ideal_quotient, krull_dim};
use crate::poly::{subsets, Poly, PolyMatrix, RingRef};

/// Default bound on the size of relation subsets searched.
pub const DEFAULT_SUBSET_BOUND: usize = 3;

/// Where a generator `c * M` of the Elkik ideal comes from.
#[derive(Clone, Debug, PartialEq)]
pub struct ElkikSource {
    /// Indices into the relations of `B`.
    pub subset: Vec<usize>,
    /// Generator of `((f) + J) : I`.
    pub colon: Poly,
    /// Algebra-variable positions (0-based among `Y`) of the minor.
    pub cols: Vec<usize>,
    pub minor: Poly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ElkikIdeal {
    pub generators: Vec<Poly>,
    pub sources: Vec<ElkikSource>,
}

/// Data for one relation subset `f`: its colon ideal and nonzero maximal minors.
#[derive(Clone, Debug)]
pub struct SubsystemData {
    pub subset: Vec<usize>,
    pub colon: Vec<Poly>,
    pub minors: Vec<(Vec<usize>, Poly)>,
}

pub fn subsystem_data(b: &Presentation, subset: &[usize]) -> SubsystemData {
    let ring = &b.ring;
    let f: Vec<Poly> = subset.iter().map(|&i| b.relations[i].clone()).collect();
    let mut fj = f.clone();
    fj.extend(b.base_ideal.iter().cloned());
    let gb = GroebnerBasis::new(ring, &fj);
    let colon = if gb.contains_all(&b.relations) {
        vec![Poly::one(ring)]
    } else {
        ideal_quotient(ring, gb.polys(), &b.relations)
    };
    let yv = b.algebra_vars();
    let jac = PolyMatrix::jacobian(ring, &f, &yv);
    let rows: Vec<usize> = (0..f.len()).collect();
    let minors = subsets(yv.len(), f.len())
        .into_iter()
        .filter_map(|cols| {
            let m = jac.minor(&rows, &cols);
            if m.is_zero() {
                None
            } else {
                Some((cols, m))
            }
        })
        .collect();
    SubsystemData { subset: subset.to_vec(), colon, minors }
}

/// Relation subsets of size `1..=min(bound, l)`, smallest first.
pub fn relation_subsets(l: usize, bound: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for r in 1..=bound.min(l) {
        out.extend(subsets(l, r));
    }
    out
}

/// `H_0 = Σ_f ((f) : I) Δ_f` over subsets `f` with `|f| <= subset_bound`,
/// generators reduced modulo `I + J`.
pub fn elkik_ideal(b: &Presentation, subset_bound: usize) -> ElkikIdeal {
    let full = b.full_basis();
    let mut generators: Vec<Poly> = Vec::new();
    let mut sources = Vec::new();
    if b.relations.is_empty() {
        return ElkikIdeal { generators: vec![Poly::one(&b.ring)], sources };
    }
    for subset in relation_subsets(b.relations.len(), subset_bound) {
        let data = subsystem_data(b, &subset);
        for c in &data.colon {
            for (cols, m) in &data.minors {
                let g = full.reduce(&(c * m));
                if g.is_zero() || generators.iter().any(|h| h == &g || *h == -&g) {
                    continue;
                }
                generators.push(g.clone());
                sources.push(ElkikSource { subset: subset.clone(), colon: c.clone(), cols: cols.clone(), minor: m.clone() });
            }
        }
    }
    ElkikIdeal { generators, sources }
}

/// `(H_0 + I + J) ∩ k[x]`, as polynomials of the base ring.
pub fn elkik_base_part(b: &Presentation, h: &ElkikIdeal) -> Vec<Poly> {
    let mut g = h.generators.clone();
    g.extend(b.full_ideal());
    let base = b.base_ring();
    eliminate(&b.ring, &g, &b.algebra_vars())
        .into_iter()
        .map(|p| p.map_to(&base).unwrap())
        .collect()
}

/// Summary of the non-smooth locus used by the CLI.
#[derive(Clone, Debug, PartialEq)]
pub struct SmoothLocusReport {
    pub elkik: ElkikIdeal,
    pub base_part: Vec<Poly>,
    pub dim_base: i64,
    pub dim_quotient: i64,
    pub smooth: SmoothOutcome,
}

pub fn smooth_locus(b: &Presentation, subset_bound: usize) -> SmoothLocusReport {
    let elkik = elkik_ideal(b, subset_bound);
    let base_part = elkik_base_part(b, &elkik);
    let base = b.base_ring();
    let jb = b.base_ideal_in_base();
    let dim_base = krull_dim(&base, &jb);
    let mut q = jb.clone();
    q.extend(base_part.iter().cloned());
    let dim_quotient = krull_dim(&base, &q);
    let smooth = standard_smooth_certificate(b, subset_bound);
    SmoothLocusReport { elkik, base_part, dim_base, dim_quotient, smooth }
}

/// `1 = Σ a_k c_k M_k + Σ b_j g_j` with `c_k ∈ ((f)+J) : I` and `M_k` maximal minors of `∂f/∂Y`.
#[derive(Clone, Debug, PartialEq)]
pub struct SmoothCertificate {
    pub subset: Vec<usize>,
    /// `(c_k, column set, M_k)`.
    pub factors: Vec<(Poly, Vec<usize>, Poly)>,
    /// Coefficients for the products `c_k M_k`, then the relations, then `J`.
    pub coefficients: Vec<Poly>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SmoothOutcome {
    Smooth(SmoothCertificate),
    /// Every relation subset was tried.
    NotSmooth,
    /// Only subsets up to the bound were tried.
    Exhausted { bound: usize },
}

/// Searches relation subsets for a standard smooth witness.
pub fn standard_smooth_certificate(b: &Presentation, subset_bound: usize) -> SmoothOutcome {
    let l = b.relations.len();
    if l == 0 {
        let cert = SmoothCertificate { subset: vec![], factors: vec![], coefficients: vec![Poly::one(&b.ring)] };
        return SmoothOutcome::Smooth(cert);
    }
    for subset in relation_subsets(l, subset_bound) {
        let data = subsystem_data(b, &subset);
        let mut factors = Vec::new();
        let mut gens = Vec::new();
        for c in &data.colon {
            for (cols, m) in &data.minors {
                factors.push((c.clone(), cols.clone(), m.clone()));
                gens.push(c * m);
            }
        }
        if gens.is_empty() {
            continue;
        }
        gens.extend(b.full_ideal());
        let tb = TrackedBasis::new(&b.ring, &gens);
        if !tb.is_unit() {
            continue;
        }
        let cert = tb.lift(&Poly::one(&b.ring));
        debug_assert!(cert.is_member());
        return SmoothOutcome::Smooth(SmoothCertificate { subset, factors, coefficients: cert.coefficients });
    }
    if subset_bound >= l {
        SmoothOutcome::NotSmooth
    } else {
        SmoothOutcome::Exhausted { bound: subset_bound }
    }
}

/// Re-checks a certificate from scratch: minors, colon membership and the re-expansion of 1.
pub fn validate_smooth_certificate(b: &Presentation, cert: &SmoothCertificate) -> Result<(), String> {
    let ring = &b.ring;
    if cert.subset.iter().any(|&i| i >= b.relations.len()) {
        return Err("relation index out of range".into());
    }
    let f: Vec<Poly> = cert.subset.iter().map(|&i| b.relations[i].clone()).collect();
    let jac = PolyMatrix::jacobian(ring, &f, &b.algebra_vars());
    let rows: Vec<usize> = (0..f.len()).collect();
    let mut fj = f.clone();
    fj.extend(b.base_ideal.iter().cloned());
    let fgb = GroebnerBasis::new(ring, &fj);
    let mut gens = Vec::new();
    for (c, cols, m) in &cert.factors {
        if cols.len() != f.len() || &jac.minor(&rows, cols) != m {
            return Err(format!("minor on columns {cols:?} does not match"));
        }
        for g in &b.relations {
            if !fgb.contains(&(c * g)) {
                return Err(format!("{c} is not in ((f) + J) : I"));
            }
        }
        gens.push(c * m);
    }
    gens.extend(b.full_ideal());
    if cert.coefficients.len() != gens.len() {
        return Err("coefficient count mismatch".into());
    }
    let mut acc = Poly::zero(ring);
    for (a, g) in cert.coefficients.iter().zip(&gens) {
        acc = &acc + &(a * g);
    }
    if !acc.is_one() {
        return Err(format!("re-expansion gives {acc}, not 1"));
    }
    Ok(())
}

/// `S_B(I/I^2)` presented as `A[Y, T]/(I, Σ a_ij T_i)` where `(a_ij)` generate the
/// syzygies of the relations modulo `J`, reduced modulo `I + J`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricAlgebra {
    pub presentation: Presentation,
    /// Names of the new variables `T_1..T_l`, one per relation.
    pub t_names: Vec<String>,
    /// Indices (into the new relations) of the linear syzygy relations.
    pub linear_relations: Vec<usize>,
}

pub fn symmetric_algebra_presentation(b: &Presentation, prefix: &str) -> SymmetricAlgebra {
    let l = b.relations.len();
    let mut t_names: Vec<String> = Vec::new();
    for i in 0..l {
        let nm = b.ring.fresh_name(&format!("{prefix}{}", i + 1), &t_names);
        t_names.push(nm);
    }
    let ring: RingRef = b.ring.extend(&t_names, None).unwrap();
    let mut gens = b.relations.clone();
    gens.extend(b.base_ideal.iter().cloned());
    let syz = syzygies(&b.ring, &gens);
    let full = GroebnerBasis::new(&b.ring, &b.full_ideal());
    let n0 = b.ring.nvars();
    let mut relations: Vec<Poly> = b.relations.iter().map(|p| p.map_to(&ring).unwrap()).collect();
    let mut linear = Vec::new();
    for s in syz {
        let mut rel = Poly::zero(&ring);
        for (i, a) in s.iter().take(l).enumerate() {
            let a = full.reduce(a);
            if a.is_zero() {
                continue;
            }
            rel = &rel + &(&a.map_to(&ring).unwrap() * &Poly::var(&ring, n0 + i));
        }
        if rel.is_zero() || relations.contains(&rel) {
            continue;
        }
        linear.push(relations.len());
        relations.push(rel);
    }
    let base_ideal = b.base_ideal.iter().map(|p| p.map_to(&ring).unwrap()).collect();
    SymmetricAlgebra {
        presentation: Presentation { ring, nbase: b.nbase, base_ideal, relations },
        t_names,
        linear_relations: linear,
    }
}

/// Checks that `T_i -> g_i` maps every linear relation into `I^2 + J`.
pub fn check_symmetric_relations(b: &Presentation, s: &SymmetricAlgebra) -> bool {
    let ring = &s.presentation.ring;
    let mut images: Vec<Poly> = (0..b.ring.nvars()).map(|i| Poly::var(&b.ring, i)).collect();
    images.extend(b.relations.iter().cloned());
    let mut sq = Vec::new();
    for (i, g) in b.relations.iter().enumerate() {
        for h in &b.relations[i..] {
            sq.push(g * h);
        }
    }
    sq.extend(b.base_ideal.iter().cloned());
    let gb = GroebnerBasis::new(&b.ring, &sq);
    s.linear_relations.iter().all(|&k| gb.contains(&s.presentation.relations[k].substitute(&b.ring, &images)))
        && ring.nvars() == images.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{Field, MonomialOrder, Ring};

    fn pres(vars: &[&str], nbase: usize, rels: &[&str]) -> Presentation {
        let r = Ring::new(Field::Rational, vars, MonomialOrder::DegRevLex).unwrap();
        let rels = rels.iter().map(|s| Poly::parse(&r, s).unwrap()).collect();
        Presentation::new(r, nbase, vec![], rels).unwrap()
    }

    #[test]
    fn smooth_line() {
        let b = pres(&["x1", "x2", "Y"], 2, &["Y - x1"]);
        let h = elkik_ideal(&b, 3);
        assert_eq!(h.generators.len(), 1);
        assert!(h.generators[0].is_one());
        match standard_smooth_certificate(&b, 3) {
            SmoothOutcome::Smooth(c) => validate_smooth_certificate(&b, &c).unwrap(),
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn node_elkik() {
        let b = pres(&["x1", "x2", "Y1", "Y2"], 2, &["Y1*Y2 - x1*x2"]);
        let h = elkik_ideal(&b, 3);
        let base = elkik_base_part(&b, &h);
        let r = b.base_ring();
        assert_eq!(base, vec![Poly::parse(&r, "x1*x2").unwrap()]);
        assert_eq!(standard_smooth_certificate(&b, 3), SmoothOutcome::NotSmooth);
    }

    #[test]
    fn symmetric_algebra_relations_in_square() {
        let b = pres(&["x1", "Y1", "Y2", "Y3"], 1, &["Y1*Y2 - x1", "Y1*Y3", "Y2*Y3"]);
        let s = symmetric_algebra_presentation(&b, "T");
        assert!(!s.linear_relations.is_empty());
        assert!(check_symmetric_relations(&b, &s));
    }
}
