//! The output of the algorithm and the driver producing it.

use std::time::Instant;

use log::{debug, info};

use crate::algebra::Presentation;
use crate::error::{Error, Result};
use crate::groebner::TrackedBasis;
use crate::jets::{JetPoint, JetSeries};
use crate::poly::{MonomialOrder, Poly, Ring, RingRef};
use crate::smooth::{elkik_ideal, standard_smooth_certificate, SmoothCertificate, SmoothOutcome};

use super::omega::lift_stage;
use super::pair::{absorb_parameters, choose_regular_pair, prepare_free_conormal, Branch};
use super::problem::{NeronConfig, Problem};
use super::stage::{build_stage, StageData, StageSpec, TLayout};
use super::system::{find_jacobian_system_with, m_primary_gate, JacobianSystem};

/// Why a relation of `B'` lies in the ideal generated by the smooth subsystem, after
/// localization.
#[derive(Clone, Debug, PartialEq)]
pub enum Proof {
    /// `scale^power * g(σ) - Σ c_j rel_j ∈ (modulus) + J`, where `σ` solves the listed
    /// relations `scale * v - (...)` for their variables `v`.
    Substitution {
        solved: Vec<(usize, usize)>,
        scale: Poly,
        power: u32,
        combination: Vec<(usize, Poly)>,
        modulus: Vec<usize>,
    },
    /// `g - Σ c_j rel_j ∈ J`.
    Combination(Vec<(usize, Poly)>),
    /// Membership in `(subsystem) + J`, decided by a Gröbner basis.
    Groebner,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Containment {
    pub relation: usize,
    pub proof: Proof,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SmoothWitness {
    /// A square subsystem whose Jacobian determinant is a unit.
    Minor {
        /// Indices into the relations of `B'`.
        relations: Vec<usize>,
        /// Ring indices of the variables.
        vars: Vec<usize>,
        /// Sizes of the diagonal blocks; the blocks above the diagonal vanish.
        blocks: Vec<usize>,
        /// The determinant as a product of powers.
        factors: Vec<(Poly, u32)>,
        /// Relations of the form `w U - 1`.
        inverses: Vec<usize>,
        containments: Vec<Containment>,
    },
    /// `1 ∈ ((f):I) Δ_f` for `B' = B`.
    Elkik(SmoothCertificate),
}

/// One stage as recorded in the certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct StageRecord {
    pub centers: Vec<Poly>,
    pub unknowns: Vec<usize>,
    pub layout: TLayout,
    pub d: Poly,
    pub p: u32,
    pub s: Poly,
    pub b: Vec<Poly>,
    pub s1: Poly,
    pub s2: Poly,
    pub unit: Poly,
    pub w: usize,
    /// Indices of `h`, `g` and `w U - 1` among the relations of `B'`.
    pub h_rels: Vec<usize>,
    pub g_rels: Vec<usize>,
    pub w_rel: usize,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct StepLog {
    pub trivial: bool,
    pub branch: Option<Branch>,
    pub gamma: Option<Poly>,
    pub gamma_p: Option<Poly>,
    pub t: Option<[u32; 2]>,
    pub symmetric: bool,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DesingCertificate {
    pub input: Problem,
    /// `B` after steps 4 to 6 with the extended approximation.
    pub extended: Problem,
    pub log: StepLog,
    /// The systems for `d` and `d'`.
    pub systems: Vec<JacobianSystem>,
    pub stages: Vec<StageRecord>,
    /// `B'` over `A`.
    pub target: Presentation,
    /// Images of the algebra variables of the extended `B` in `B'`.
    pub maps: Vec<Poly>,
    pub witness: SmoothWitness,
    /// `B' -> A'` on the algebra variables of `B'`.
    pub point: JetPoint,
    pub n_eff: u32,
}

impl DesingCertificate {
    pub fn is_trivial(&self) -> bool {
        self.log.trivial
    }
}

fn jets_of(problem: &Problem) -> Vec<JetSeries> {
    let jr = problem.jet_ring();
    problem.approx.iter().map(|y| jr.jet(y, problem.bound)).collect()
}

fn trivial_certificate(problem: &Problem, cert: SmoothCertificate) -> DesingCertificate {
    let b = &problem.algebra;
    let maps = b.algebra_vars().iter().map(|&v| Poly::var(&b.ring, v)).collect();
    let mut point = JetPoint::default();
    for (name, y) in b.algebra_names().iter().zip(jets_of(problem)) {
        point.set(name, y);
    }
    DesingCertificate {
        input: problem.clone(),
        extended: problem.clone(),
        log: StepLog { trivial: true, ..StepLog::default() },
        systems: Vec::new(),
        stages: Vec::new(),
        target: b.clone(),
        maps,
        witness: SmoothWitness::Elkik(cert),
        point,
        n_eff: problem.bound,
    }
}

/// `a ≡ 1 + α c^2 (mod (c^3, e^3) + J)`-style splitting: lifts `a` over `[c^3, e^3] ∪ J`
/// and returns the coefficient of `c^3`.
fn split_lift(tb: &TrackedBasis, a: &Poly, step: u32, what: &str) -> Result<Poly> {
    if a.is_zero() {
        return Ok(Poly::zero(a.ring()));
    }
    let c = tb.lift(a);
    if !c.is_member() {
        return Err(Error::step(step, format!("{what} = {a} is not in (d'^3, d^3) + J; the approximation is too coarse")));
    }
    Ok(c.coefficients[0].clone())
}

/// Fresh names for the construction, avoiding every name in `taken`.
fn fresh(taken: &mut Vec<String>, base: &str) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('_');
    }
    taken.push(name.clone());
    name
}

/// Runs the algorithm.
pub fn desingularize(problem: &Problem, config: &NeronConfig) -> Result<DesingCertificate> {
    let clock = Instant::now();
    problem.check()?;
    if let SmoothOutcome::Smooth(cert) = standard_smooth_certificate(&problem.algebra, config.subset_bound) {
        info!("B is standard smooth; trivial certificate");
        return Ok(trivial_certificate(problem, cert));
    }
    let mut log = StepLog::default();
    let base = problem.base_ring();
    let jb = problem.algebra.base_ideal_in_base();

    // steps 1-3
    let h0 = elkik_ideal(&problem.algebra, config.subset_bound);
    info!("step 1: H has {} generators ({:?})", h0.generators.len(), clock.elapsed());
    let pair = choose_regular_pair(problem, &h0, config)?;
    info!("steps 2-3: γ = {}, γ' = {} ({:?} branch)", pair.gamma, pair.gamma_p, pair.branch);
    if !pair.regular {
        if !m_primary_gate(&base, &jb, &pair.gamma, &pair.gamma_p, problem.bound) {
            info!("no regular pair; (γ, γ') is not m-primary, so no powers pass the gate");
            return Err(Error::BoundTooSmall);
        }
        log.notes.push("parameters fail the global dimension test but pass the local gate".into());
    }
    log.branch = Some(pair.branch);
    log.gamma = Some(pair.gamma.clone());
    log.gamma_p = Some(pair.gamma_p.clone());

    // steps 4-5
    let mut ext = if pair.branch == Branch::Evaluated {
        let (p, ab) = absorb_parameters(problem, &h0, &pair, config)?;
        log.t = Some(ab.t);
        info!("steps 4-5: t = {:?}, {} new variables", ab.t, ab.new_vars.len());
        p
    } else {
        problem.clone()
    };

    // steps 6-8
    let search = |p: &Problem, forced: &[usize]| -> Result<(JacobianSystem, JacobianSystem)> {
        let s = find_jacobian_system_with(&p.algebra, &pair.gamma, forced, config.subset_bound, config.e_max)?;
        let sp = find_jacobian_system_with(&p.algebra, &pair.gamma_p, forced, config.subset_bound, config.e_max)?;
        Ok((s, sp))
    };
    let (sys, sys_p) = match search(&ext, &[]) {
        Ok(x) => x,
        Err(e) => {
            debug!("no system before step 6: {e}");
            let (p, zrels) = prepare_free_conormal(&ext)?;
            ext = p;
            log.symmetric = true;
            info!("step 6: symmetric algebra, now {} variables", ext.algebra.nalg());
            search(&ext, &zrels)?
        }
    };
    info!(
        "steps 7-8: d = {} (r = {}, q = {}), d' = {} (r' = {}, q' = {}) ({:?})",
        sys.d,
        sys.r(),
        sys.q(),
        sys_p.d,
        sys_p.r(),
        sys_p.q(),
        clock.elapsed()
    );
    if !m_primary_gate(&base, &jb, &sys.d, &sys_p.d, problem.bound) {
        return Err(Error::BoundTooSmall);
    }
    if sys_p.p_hat != sys_p.d || sys.p_hat != sys.d {
        log.notes.push("steps 14 and 20 use an element of (f):I congruent to d' (resp. d) in place of P' (resp. P)".into());
    }

    let b = &ext.algebra;
    let n = b.nalg();
    let l = b.relations.len();
    let (r, q, rp, qp) = (sys.r(), sys.q(), sys_p.r(), sys_p.q());

    // the ring x | Y' | T | W1 | Y | T~ | W2
    let mut taken: Vec<String> = b.ring.vars().to_vec();
    let ynames = b.algebra_names();
    let yp: Vec<String> = ynames.iter().map(|y| fresh(&mut taken, &format!("{y}p"))).collect();
    let tn: Vec<String> = TLayout::names("T", rp, qp, n).iter().map(|s| fresh(&mut taken, s)).collect();
    let w1 = fresh(&mut taken, "W1");
    let un: Vec<String> = TLayout::names("U", r, q, n).iter().map(|s| fresh(&mut taken, s)).collect();
    let w2 = fresh(&mut taken, "W2");
    let mut names = b.base_names();
    names.extend(yp.iter().cloned());
    let t_first = names.len();
    names.extend(tn.iter().cloned());
    let w1_idx = names.len();
    names.push(w1);
    let y_first = names.len();
    names.extend(ynames.iter().cloned());
    let u_first = names.len();
    names.extend(un.iter().cloned());
    let w2_idx = names.len();
    names.push(w2);
    let ring: RingRef = Ring::new(b.ring.field(), &names, match b.ring.order() {
        MonomialOrder::Block(_) => MonomialOrder::DegRevLex,
        o => o.clone(),
    })?;
    let yp_idx: Vec<usize> = (b.nbase..b.nbase + n).collect();
    let y_idx: Vec<usize> = (y_first..y_first + n).collect();
    let to_ring = |p: &Poly| p.map_to(&ring).unwrap();
    let rename = |p: &Poly| -> Poly {
        let mut im: Vec<Poly> = (0..b.nbase).map(|i| Poly::var(&ring, i)).collect();
        im.extend(yp_idx.iter().map(|&v| Poly::var(&ring, v)));
        p.substitute(&ring, &im)
    };

    // step 10: P'(y') = d' s, f'(y') = d'^2 b', P̂'(y') = d' ŝ, modulo d^3
    let im_y: Vec<Poly> = ext.point_images();
    let at_y = |p: &Poly| p.substitute(&base, &im_y);
    let dp = sys_p.d.map_to(&base)?;
    let d = sys.d.map_to(&base)?;
    let mut split_gens = vec![dp.pow(3), d.pow(3)];
    split_gens.extend(jb.iter().cloned());
    let tb = TrackedBasis::new(&base, &split_gens);
    let dp2 = dp.pow(2);
    let s = &Poly::one(&base) + &(&split_lift(&tb, &(&at_y(&sys_p.p) - &dp), 10, "P'(y') - d'")? * &dp2);
    let s_hat = &Poly::one(&base) + &(&split_lift(&tb, &(&at_y(&sys_p.p_hat) - &dp), 14, "P'(y') - d'")? * &dp2);
    let b1: Vec<Poly> = sys_p
        .relations(b)
        .iter()
        .map(|f| split_lift(&tb, &at_y(f), 13, "f'(y')").map(|a| &a * &dp))
        .collect::<Result<_>>()?;
    if !s.is_one() {
        log.notes.push(format!("step 10: s = {s}"));
    }

    // steps 11-15
    let spec1 = StageSpec {
        b,
        system: &sys_p,
        ring: ring.clone(),
        centers: ext.approx.iter().map(to_ring).collect(),
        unknowns: yp_idx.clone(),
        layout: TLayout::consecutive(t_first, rp, qp, n),
        w: w1_idx,
        s: to_ring(&s),
        b_vec: b1.iter().map(to_ring).collect(),
        s_hat: to_ring(&s_hat),
    };
    let st1 = build_stage(&spec1, 12)?;
    info!("steps 11-15: D has {} T variables ({:?})", st1.layout.count(), clock.elapsed());

    // steps 16-21: over D, P(Y') = d and f(Y') = 0, so s~ = 1 and b~ = 0
    let spec2 = StageSpec {
        b,
        system: &sys,
        ring: ring.clone(),
        centers: yp_idx.iter().map(|&v| Poly::var(&ring, v)).collect(),
        unknowns: y_idx.clone(),
        layout: TLayout::consecutive(u_first, r, q, n),
        w: w2_idx,
        s: Poly::one(&ring),
        b_vec: vec![Poly::zero(&ring); r],
        s_hat: Poly::one(&ring),
    };
    let st2 = build_stage(&spec2, 17)?;
    info!("steps 16-21: B' has {} T~ variables ({:?})", st2.layout.count(), clock.elapsed());

    // relations of B'
    let mut relations: Vec<Poly> = b.relations.iter().map(rename).collect();
    let record = |st: &StageData, rels: &mut Vec<Poly>| -> StageRecord {
        let h0 = rels.len();
        rels.extend(st.h.iter().cloned());
        let g0 = rels.len();
        rels.extend(st.g.iter().cloned());
        let wr = rels.len();
        rels.push(st.w_rel.clone());
        StageRecord {
            centers: st.centers.clone(),
            unknowns: st.unknowns.clone(),
            layout: st.layout.clone(),
            d: st.d.clone(),
            p: st.p,
            s: st.s.clone(),
            b: st.b.clone(),
            s1: st.s1.clone(),
            s2: st.s2.clone(),
            unit: st.unit.clone(),
            w: st.w,
            h_rels: (h0..g0).collect(),
            g_rels: (g0..wr).collect(),
            w_rel: wr,
        }
    };
    let rec1 = record(&st1, &mut relations);
    let i_first = relations.len();
    relations.extend(b.relations.iter().map(to_ring));
    let rec2 = record(&st2, &mut relations);
    let base_ideal: Vec<Poly> = b.base_ideal.iter().map(to_ring).collect();
    let target = Presentation::new(ring.clone(), b.nbase, base_ideal, relations)?;

    // containment proofs: I(Y') through stage 1, I(Y) through stage 2
    let mut containments = Vec::new();
    let mut fj = sys_p.relations(b);
    fj.extend(b.base_ideal.iter().cloned());
    let tb_p = TrackedBasis::new(&b.ring, &fj);
    let mut fj2 = sys.relations(b);
    fj2.extend(b.base_ideal.iter().cloned());
    let tb_2 = TrackedBasis::new(&b.ring, &fj2);
    let stages_info = [(&sys_p, &rec1, 0usize, &tb_p, Vec::new()), (&sys, &rec2, i_first, &tb_2, (0..l).collect::<Vec<_>>())];
    for (k, (s_sys, rec, first, tbk, modulus)) in stages_info.iter().enumerate() {
        let map_rel = |p: &Poly| if k == 0 { rename(p) } else { to_ring(p) };
        for (gi, g) in b.relations.iter().enumerate() {
            let proof = if let Some(j) = s_sys.subset.iter().position(|&x| x == gi) {
                Proof::Substitution {
                    solved: rec.unknowns.iter().copied().zip(rec.h_rels.iter().copied()).collect(),
                    scale: rec.s.clone(),
                    power: rec.p,
                    combination: vec![(rec.g_rels[j], rec.d.pow(2))],
                    modulus: modulus.clone(),
                }
            } else {
                let c = tbk.lift(g);
                if c.is_member() {
                    let comb = s_sys
                        .subset
                        .iter()
                        .zip(&c.coefficients)
                        .filter(|(_, a)| !a.is_zero())
                        .map(|(&i, a)| (first + i, map_rel(a)))
                        .collect();
                    Proof::Combination(comb)
                } else {
                    Proof::Groebner
                }
            };
            containments.push(Containment { relation: first + gi, proof });
        }
    }

    // per stage: g against the shared T, h against the unknowns, then the inverse;
    // every block is lower triangular with determinant s', s^n, w
    let mut wrels = Vec::new();
    let mut wvars = Vec::new();
    let mut blocks = Vec::new();
    let mut factors = Vec::new();
    for (rec, st) in [(&rec1, &st1), (&rec2, &st2)] {
        wrels.extend(rec.g_rels.iter().copied());
        wrels.extend(rec.h_rels.iter().copied());
        wrels.push(rec.w_rel);
        wvars.extend(st.layout.shared());
        wvars.extend(st.unknowns.iter().copied());
        wvars.push(st.w);
        blocks.extend([rec.g_rels.len(), n, 1]);
        factors.extend([(st.s1.clone(), 1), (st.s.clone(), n as u32), (st.unit.clone(), 1)]);
    }
    let witness = SmoothWitness::Minor {
        relations: wrels,
        vars: wvars,
        blocks,
        factors,
        inverses: vec![rec1.w_rel, rec2.w_rel],
        containments,
    };

    // the point B' -> A'
    let jr = ext.jet_ring();
    let y = jets_of(&ext);
    let yprime_jets: Vec<JetSeries> = ext.approx.iter().map(|p| jr.jet(p, ext.bound)).collect();
    let lift1 = lift_stage(&jr, b, &sys_p, &st1, &y, &yprime_jets, &JetPoint::default(), 15)?;
    let omega_y: Vec<JetSeries> = yp.iter().map(|nm| lift1.point.get(nm).unwrap().clone()).collect();
    let lift2 = lift_stage(&jr, b, &sys, &st2, &y, &omega_y, &lift1.point, 21)?;
    let point = lift2.point;
    let n_eff = point.min_prec().unwrap_or(0);
    info!("N_eff = {} ({:?})", n_eff, clock.elapsed());
    if n_eff == 0 {
        log.notes.push("no precision left: the factorization through B' is indeterminate".into());
    }
    let maps = y_idx.iter().map(|&v| Poly::var(&ring, v)).collect();
    Ok(DesingCertificate {
        input: problem.clone(),
        extended: ext.clone(),
        log,
        systems: vec![sys, sys_p],
        stages: vec![rec1, rec2],
        target,
        maps,
        witness,
        point,
        n_eff,
    })
}
