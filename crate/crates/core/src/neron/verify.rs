//! Independent re-verification of a certificate.

use std::fmt;

use crate::groebner::GroebnerBasis;
use crate::jets::JetSeries;
use crate::poly::{Poly, PolyMatrix};
use crate::smooth::validate_smooth_certificate;

use super::certificate::{Containment, DesingCertificate, Proof, SmoothWitness};
use super::stage::center_images;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{:<16} {}  {}", c.name, if c.passed { "PASS" } else { "FAIL" }, c.detail)?;
        }
        Ok(())
    }
}

fn result(name: &'static str, r: Result<String, String>) -> CheckResult {
    match r {
        Ok(detail) => CheckResult { name, passed: true, detail },
        Err(detail) => CheckResult { name, passed: false, detail },
    }
}

/// `w U - 1` for some variable `w` not in `U`: returns `(w, U)`.
fn inverse_form(rel: &Poly) -> Option<(usize, Poly)> {
    for v in rel.support() {
        let parts = rel.coefficients_in(v);
        if parts.len() == 2 && parts[0] == -&Poly::one(rel.ring()) && !parts[1].is_zero() {
            return Some((v, parts[1].clone()));
        }
    }
    None
}

struct Ctx<'a> {
    cert: &'a DesingCertificate,
    j_basis: GroebnerBasis,
    units: Vec<Poly>,
}

impl Ctx<'_> {
    fn is_unit(&self, p: &Poly) -> bool {
        (p.is_constant() && !p.is_zero()) || self.units.iter().any(|u| u == p || u.exact_div(p).is_some())
    }

    fn rel(&self, i: usize) -> Result<&Poly, String> {
        self.cert.target.relations.get(i).ok_or_else(|| format!("relation index {i} out of range"))
    }

    fn check_proof(&self, c: &Containment, known: &[bool], subsystem: &[usize]) -> Result<(), String> {
        let ring = &self.cert.target.ring;
        let g = self.rel(c.relation)?;
        let need = |i: usize| -> Result<(), String> {
            if i < known.len() && known[i] {
                Ok(())
            } else {
                Err(format!("relation {i} is used before it is established"))
            }
        };
        match &c.proof {
            Proof::Combination(comb) => {
                let mut acc = g.clone();
                for (i, a) in comb {
                    need(*i)?;
                    acc = &acc - &(a * self.rel(*i)?);
                }
                if !self.j_basis.contains(&acc) {
                    return Err(format!("relation {}: combination leaves {}", c.relation, acc));
                }
            }
            Proof::Substitution { solved, scale, power, combination, modulus } => {
                if !self.is_unit(scale) {
                    return Err(format!("relation {}: {} is not inverted", c.relation, scale));
                }
                let vars: Vec<usize> = solved.iter().map(|(v, _)| *v).collect();
                if scale.support().iter().any(|v| vars.contains(v)) {
                    return Err("the scale involves solved variables".into());
                }
                let mut images: Vec<Poly> = (0..ring.nvars()).map(|i| Poly::var(ring, i)).collect();
                for (v, ri) in solved {
                    need(*ri)?;
                    let parts = self.rel(*ri)?.coefficients_in(*v);
                    if parts.len() != 2 || &parts[1] != scale {
                        return Err(format!("relation {ri} is not {scale} * {} + (...)", ring.var_name(*v)));
                    }
                    if parts[0].support().iter().any(|x| vars.contains(x)) {
                        return Err(format!("relation {ri} does not isolate {}", ring.var_name(*v)));
                    }
                    images[*v] = -&parts[0];
                }
                let parts = g.homogeneous_parts_in(&vars);
                if parts.len() as u32 > power + 1 {
                    return Err(format!("relation {}: power {} below its degree", c.relation, power));
                }
                let mut acc = Poly::zero(ring);
                for (k, part) in parts.iter().enumerate() {
                    if part.is_zero() {
                        continue;
                    }
                    acc = &acc + &(&scale.pow(power - k as u32) * &part.substitute(ring, &images));
                }
                for (i, a) in combination {
                    need(*i)?;
                    acc = &acc - &(a * self.rel(*i)?);
                }
                let mut m: Vec<Poly> = Vec::new();
                for i in modulus {
                    need(*i)?;
                    m.push(self.rel(*i)?.clone());
                }
                m.extend(self.cert.target.base_ideal.iter().cloned());
                if !GroebnerBasis::new(ring, &m).contains(&acc) {
                    return Err(format!("relation {}: substitution residual is not in the modulus", c.relation));
                }
            }
            Proof::Groebner => {
                let mut gens: Vec<Poly> = Vec::new();
                for &i in subsystem {
                    gens.push(self.rel(i)?.clone());
                }
                gens.extend(self.cert.target.base_ideal.iter().cloned());
                if !GroebnerBasis::new(ring, &gens).contains(g) {
                    return Err(format!("relation {} is not in the ideal of the subsystem", c.relation));
                }
            }
        }
        Ok(())
    }

    /// Per relation of `B'`: `Ok` if it is in the subsystem or its proof checks.
    fn relation_status(&self) -> Vec<Result<(), String>> {
        let nrel = self.cert.target.relations.len();
        let SmoothWitness::Minor { relations, containments, .. } = &self.cert.witness else {
            return vec![Ok(()); nrel];
        };
        let mut known = vec![false; nrel];
        let mut status: Vec<Result<(), String>> = vec![Err("no proof given".into()); nrel];
        for &i in relations {
            if i < nrel {
                known[i] = true;
                status[i] = Ok(());
            }
        }
        for c in containments {
            if c.relation >= nrel {
                continue;
            }
            let r = self.check_proof(c, &known, relations);
            if r.is_ok() {
                known[c.relation] = true;
            }
            status[c.relation] = r;
        }
        status
    }
}

fn check_witness(ctx: &Ctx<'_>, status: &[Result<(), String>]) -> Result<String, String> {
    let cert = ctx.cert;
    let t = &cert.target;
    match &cert.witness {
        SmoothWitness::Elkik(sc) => {
            validate_smooth_certificate(t, sc)?;
            Ok(format!("1 in ((f):I)Δ_f with |f| = {}", sc.subset.len()))
        }
        SmoothWitness::Minor { relations, vars, blocks, factors, inverses, .. } => {
            if relations.len() != vars.len() || blocks.iter().sum::<usize>() != vars.len() {
                return Err("the subsystem is not square".into());
            }
            for &i in inverses {
                if !relations.contains(&i) || inverse_form(ctx.rel(i)?).is_none() {
                    return Err(format!("relation {i} is not an inverse relation of the subsystem"));
                }
            }
            let rows: Vec<Poly> = relations.iter().map(|&i| ctx.rel(i).cloned()).collect::<Result<_, _>>()?;
            let jac = PolyMatrix::jacobian(&t.ring, &rows, vars);
            if factors.len() != blocks.len() {
                return Err("one unit factor per block is required".into());
            }
            let mut start = 0;
            for (bi, (&size, (f, e))) in blocks.iter().zip(factors).enumerate() {
                let idx: Vec<usize> = (start..start + size).collect();
                for r in &idx {
                    for c in start + size..vars.len() {
                        if !jac.get(*r, c).is_zero() {
                            return Err(format!("block {} is not lower triangular at ({r}, {c})", bi + 1));
                        }
                    }
                }
                if !ctx.is_unit(f) {
                    return Err(format!("factor of block {} is not inverted", bi + 1));
                }
                let det = jac.submatrix(&idx, &idx).det().map_err(|e| e.to_string())?;
                if det != f.pow(*e) {
                    return Err(format!("the determinant of block {} differs from its recorded unit", bi + 1));
                }
                start += size;
            }
            for (i, s) in status.iter().enumerate() {
                if let Err(e) = s {
                    return Err(format!("relation {i}: {e}"));
                }
            }
            Ok(format!("{}x{} unit minor, {} relations contained", vars.len(), vars.len(), t.relations.len() - relations.len()))
        }
    }
}

fn check_factorization(ctx: &Ctx<'_>, status: &[Result<(), String>]) -> Result<String, String> {
    let cert = ctx.cert;
    let b = &cert.extended.algebra;
    let t = &cert.target;
    if cert.maps.len() != b.nalg() {
        return Err("wrong number of images for B -> B'".into());
    }
    let input = &cert.input.algebra;
    for g in &input.relations {
        let g = g.map_to(&b.ring).map_err(|e| e.to_string())?;
        if !b.relations.contains(&g) {
            return Err(format!("input relation {g} is not a relation of the extended algebra"));
        }
    }
    let im = center_images(b, &t.ring, &cert.maps);
    for g in &b.relations {
        let img = g.substitute(&t.ring, &im);
        let k = t
            .relations
            .iter()
            .position(|r| *r == img)
            .ok_or_else(|| format!("the image of {g} is not among the relations of B'"))?;
        status[k].clone().map_err(|e| format!("image of {g}: {e}"))?;
    }
    Ok(format!("{} relations of B map into the localized ideal", b.relations.len()))
}

fn check_jets(cert: &DesingCertificate) -> Result<String, String> {
    let t = &cert.target;
    let n = cert.n_eff;
    if n == 0 {
        return Err("N_eff = 0: the factorization is indeterminate".into());
    }
    if cert.point.min_prec().map(|p| p < n).unwrap_or(true) {
        return Err("the point carries less precision than N_eff".into());
    }
    let jr = cert.extended.jet_ring();
    for (k, r) in t.relations.iter().enumerate() {
        let v = jr.eval(r, &cert.point, n).map_err(|e| e.to_string())?;
        if !v.rep.is_zero() {
            return Err(format!("relation {k} does not vanish at the point: {v}"));
        }
    }
    if let SmoothWitness::Minor { inverses, .. } = &cert.witness {
        for &i in inverses {
            let (w, _) = inverse_form(&t.relations[i]).ok_or("malformed inverse relation")?;
            let v = cert.point.get(t.ring.var_name(w)).ok_or("inverse variable has no value")?;
            if !jr.is_unit(v) {
                return Err(format!("{} is not a unit", t.ring.var_name(w)));
            }
        }
    }
    let input = &cert.input;
    let b = &cert.extended.algebra;
    for (name, y) in input.algebra.algebra_names().iter().zip(&input.approx) {
        let j = b.algebra_names().iter().position(|x| x == name).ok_or("input variable missing")?;
        let v = jr.eval(&cert.maps[j], &cert.point, n).map_err(|e| e.to_string())?;
        let want: JetSeries = jr.jet(&y.map_to(jr.base()).map_err(|e| e.to_string())?, n);
        if v.rep != want.rep {
            return Err(format!("{name}: composed map gives {v}, expected {want}"));
        }
    }
    Ok(format!("B -> B' -> A' equals v modulo (x)^{n}"))
}

fn check_identities(cert: &DesingCertificate) -> Result<String, String> {
    if cert.systems.is_empty() {
        return Ok("no Jacobian systems (trivial certificate)".into());
    }
    let b = &cert.extended.algebra;
    let t = &cert.target;
    for sys in &cert.systems {
        sys.check_identities(b)?;
        // (∂f/∂Y) Σ G_i = (P Id_r | 0)
        let jac = sys.jacobian(b);
        let mut sum = PolyMatrix::zeros(&b.ring, b.nalg(), b.nalg());
        for (_, g) in sys.completed(b).map_err(|e| e.to_string())? {
            for i in 0..b.nalg() {
                for j in 0..b.nalg() {
                    sum.set(i, j, sum.get(i, j) + g.get(i, j));
                }
            }
        }
        let prod = jac.mul(&sum).map_err(|e| e.to_string())?;
        for i in 0..sys.r() {
            for j in 0..b.nalg() {
                let want = if i == j { sys.p.clone() } else { Poly::zero(&b.ring) };
                if prod.get(i, j) != &want {
                    return Err("(df/dY) Σ G_i differs from (P Id | 0)".into());
                }
            }
        }
    }
    for (k, (st, sys)) in cert.stages.iter().zip(cert.systems.iter().rev()).enumerate() {
        let tv = st.layout.all();
        let shared = st.layout.shared();
        let sp = st.s.pow(st.p);
        for (j, &gi) in st.g_rels.iter().enumerate() {
            let q = &(&t.relations[gi] - &(&sp * &st.b[j])) - &(&sp * &Poly::var(&t.ring, shared[j]));
            if q.order_in(&tv).map(|o| o < 2).unwrap_or(false) {
                return Err(format!("stage {}: Q_{} has terms of degree < 2 in T", k + 1, j + 1));
            }
        }
        let im = center_images(b, &t.ring, &st.centers);
        let mut x = vec![Poly::zero(&t.ring); st.layout.n];
        for (i, (_, g)) in sys.completed(b).map_err(|e| e.to_string())?.iter().enumerate() {
            for (j, xj) in x.iter_mut().enumerate() {
                for kk in 0..st.layout.n {
                    *xj = &*xj + &(&g.get(j, kk).substitute(&t.ring, &im) * &Poly::var(&t.ring, st.layout.vars[i][kk]));
                }
            }
        }
        for (j, &hi) in st.h_rels.iter().enumerate() {
            let want = &(&st.s * &(&Poly::var(&t.ring, st.unknowns[j]) - &st.centers[j])) - &(&st.d * &x[j]);
            if t.relations[hi] != want {
                return Err(format!("stage {}: h_{} differs from s(Y - c) - d Σ G_i(c) T_i", k + 1, j + 1));
            }
        }
    }
    Ok(format!("{} systems, {} stages", cert.systems.len(), cert.stages.len()))
}

/// Runs the four checks. Inconsistent certificates fail the affected checks.
pub fn verify_certificate(cert: &DesingCertificate) -> VerifyReport {
    let t = &cert.target;
    let units = match &cert.witness {
        SmoothWitness::Minor { inverses, .. } => inverses
            .iter()
            .filter_map(|&i| t.relations.get(i))
            .filter_map(inverse_form)
            .map(|(_, u)| u)
            .collect(),
        SmoothWitness::Elkik(_) => Vec::new(),
    };
    let ctx = Ctx { cert, j_basis: GroebnerBasis::new(&t.ring, &t.base_ideal), units };
    let status = guarded(|| Ok(ctx.relation_status())).unwrap_or_else(|e| vec![Err(e); t.relations.len()]);
    let checks = vec![
        result("smooth-witness", guarded(|| check_witness(&ctx, &status))),
        result("factorization", guarded(|| check_factorization(&ctx, &status))),
        result("jets", guarded(|| check_jets(cert))),
        result("identities", guarded(|| check_identities(cert))),
    ];
    VerifyReport { checks }
}

/// Runs a check, turning a panic on inconsistent data into a failure.
fn guarded<T>(f: impl FnOnce() -> Result<T, String>) -> Result<T, String> {
    std::panic::catch_unwind(std::panic::AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("malformed certificate ({msg})"))
    })
}
