//! Steps 1 to 6: the parameters `γ, γ'` and the presentation changes that make them
//! usable in the Jacobian search.

use log::debug;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::Presentation;
use crate::error::{Error, Result};
use crate::groebner::{GroebnerBasis, TrackedBasis};
use crate::ideal::krull_dim;
use crate::poly::{Poly, RingRef};
use crate::smooth::{elkik_base_part, symmetric_algebra_presentation, ElkikIdeal};

use super::problem::{NeronConfig, Problem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// `dim A/(H ∩ A) = 0`: the pair is taken in `H ∩ A`.
    Base,
    /// The pair is taken in `H(y')`; steps 4 and 5 adjoin the coefficients.
    Evaluated,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParameterPair {
    pub gamma: Poly,
    pub gamma_p: Poly,
    pub branch: Branch,
    /// Human-readable origin of each parameter.
    pub provenance: [String; 2],
    /// Whether the dimension certificate `dim 2 -> 1 -> 0` holds.
    pub regular: bool,
}

/// Candidate parameters with their provenance; `gens` are base-ring polynomials.
fn candidates(gens: &[(Poly, String)], config: &NeronConfig) -> Vec<(Poly, String)> {
    let mut out: Vec<(Poly, String)> = Vec::new();
    for (g, why) in gens {
        if !g.is_zero() && g.constant_term().is_zero() && !out.iter().any(|(h, _)| h == g || *h == -g) {
            out.push((g.clone(), why.clone()));
        }
    }
    let base: Vec<(Poly, String)> = out.clone();
    if base.len() < 2 {
        return out;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let ring = base[0].0.ring().clone();
    let field = ring.field();
    let range = config.combo_range.max(1);
    for _ in 0..config.combo_budget {
        let coeffs: Vec<i64> = (0..base.len()).map(|_| rng.gen_range(-range..=range)).collect();
        if coeffs.iter().filter(|&&c| c != 0).count() < 2 {
            continue;
        }
        let mut p = Poly::zero(&ring);
        let mut why = Vec::new();
        for (c, (g, _)) in coeffs.iter().zip(&base) {
            if *c != 0 {
                p = &p + &g.scale(&field.from_i64(*c));
                why.push(format!("{c}*({g})"));
            }
        }
        if !p.is_zero() && !out.iter().any(|(h, _)| *h == p || *h == -&p) {
            out.push((p, why.join(" + ")));
        }
    }
    out
}

/// Steps 2 and 3: a pair with `dim A/(γ) = dim A - 1` and `dim A/(γ, γ') = 0`.
///
/// When no pair passes, the candidate pair with the smallest `dim A/(γ, γ')` is
/// returned with `regular = false`; the caller decides what that means.
pub fn choose_regular_pair(problem: &Problem, h0: &ElkikIdeal, config: &NeronConfig) -> Result<ParameterPair> {
    let b = &problem.algebra;
    let base = problem.base_ring();
    let jb = problem.algebra.base_ideal_in_base();
    let jgb = GroebnerBasis::new(&base, &jb);
    let base_part = elkik_base_part(b, h0);
    let mut q = jb.clone();
    q.extend(base_part.iter().cloned());
    let (branch, gens) = if krull_dim(&base, &q) <= 0 {
        let gens: Vec<(Poly, String)> = base_part
            .iter()
            .map(|g| (jgb.reduce(g), format!("{g} in H ∩ A")))
            .collect();
        (Branch::Base, gens)
    } else {
        let im = problem.point_images();
        let gens: Vec<(Poly, String)> = h0
            .generators
            .iter()
            .map(|g| (jgb.reduce(&g.substitute(&base, &im)), format!("({g})(y')")))
            .collect();
        (Branch::Evaluated, gens)
    };
    let cands = candidates(&gens, config);
    debug!("{:?} branch, {} candidates", branch, cands.len());
    let dim_j = krull_dim(&base, &jb);
    let with = |extra: &[&Poly]| {
        let mut g = jb.clone();
        g.extend(extra.iter().map(|p| (*p).clone()));
        krull_dim(&base, &g)
    };
    let mut best: Option<(i64, usize, usize)> = None;
    for (i, (g, _)) in cands.iter().enumerate() {
        let d1 = with(&[g]);
        let first_ok = d1 == dim_j - 1;
        for (j, (gp, _)) in cands.iter().enumerate() {
            if i == j {
                continue;
            }
            let d2 = with(&[g, gp]);
            if first_ok && d2 == 0 {
                return Ok(ParameterPair {
                    gamma: g.clone(),
                    gamma_p: gp.clone(),
                    branch,
                    provenance: [cands[i].1.clone(), cands[j].1.clone()],
                    regular: true,
                });
            }
            if best.map(|(d, _, _)| d2 < d).unwrap_or(true) {
                best = Some((d2, i, j));
            }
        }
    }
    match (best, cands.first()) {
        (Some((_, i, j)), _) => Ok(ParameterPair {
            gamma: cands[i].0.clone(),
            gamma_p: cands[j].0.clone(),
            branch,
            provenance: [cands[i].1.clone(), cands[j].1.clone()],
            regular: false,
        }),
        (None, Some((g, why))) => Ok(ParameterPair {
            gamma: g.clone(),
            gamma_p: g.clone(),
            branch,
            provenance: [why.clone(), why.clone()],
            regular: false,
        }),
        // every parameter candidate is zero in A: no (d^3, d'^3) can contain (x)^N
        (None, None) if gens.iter().all(|(g, _)| g.is_zero()) && dim_j > 0 => Err(Error::BoundTooSmall),
        (None, None) => Err(Error::NoRegularPair(
            "no element of the non-smooth locus vanishes at the origin without being zero".into(),
        )),
    }
}

/// Fresh algebra-variable names continuing the numbering of `Y`.
fn continue_names(ring: &RingRef, first_alg: Option<&str>, start: usize, count: usize) -> Vec<String> {
    let prefix: String = first_alg
        .map(|s| s.trim_end_matches(|c: char| c.is_ascii_digit()).to_string())
        .filter(|s| !s.is_empty())
        .unwrap_or_else(|| "Y".into());
    let mut out = Vec::new();
    for k in 0..count {
        let nm = ring.fresh_name(&format!("{prefix}{}", start + k + 1), &out);
        out.push(nm);
    }
    out
}

/// What steps 4 and 5 did.
#[derive(Clone, Debug, PartialEq)]
pub struct Absorption {
    pub t: [u32; 2],
    /// The `b_i` used, in the ring of the extended presentation.
    pub b: Vec<Poly>,
    pub new_vars: Vec<String>,
}

/// Steps 4 and 5: writes `γ ≡ Σ b_i(y') z_i` and `γ' ≡ Σ b_i(y') z'_i` modulo
/// `(γ^t, γ'^t)` with the least `t` for which the new relations still vanish at the
/// approximation modulo `(x)^N`, and adjoins `2q` variables.
pub fn absorb_parameters(problem: &Problem, h0: &ElkikIdeal, pair: &ParameterPair, config: &NeronConfig) -> Result<(Problem, Absorption)> {
    let b = &problem.algebra;
    let base = problem.base_ring();
    let jr = problem.jet_ring();
    let im = problem.point_images();
    let bs: Vec<Poly> = h0.generators.clone();
    let q = bs.len();
    let bev: Vec<Poly> = bs.iter().map(|g| g.substitute(&base, &im)).collect();
    let jb = b.base_ideal_in_base();
    let mut coeffs: Vec<Vec<Poly>> = Vec::new();
    let mut ts = [0u32; 2];
    for (k, target) in [&pair.gamma, &pair.gamma_p].into_iter().enumerate() {
        let mut found = None;
        for t in 1..=config.t_max {
            let mut gens = bev.clone();
            gens.push(pair.gamma.pow(t));
            gens.push(pair.gamma_p.pow(t));
            gens.extend(jb.iter().cloned());
            let cert = TrackedBasis::new(&base, &gens).lift(target);
            if !cert.is_member() {
                continue;
            }
            let z: Vec<Poly> = cert.coefficients[..q].iter().map(|c| jr.normalize(c, problem.bound)).collect();
            let mut res = -target;
            for (bi, zi) in bev.iter().zip(&z) {
                res = &res + &(bi * zi);
            }
            if jr.normalize(&res, problem.bound).is_zero() {
                found = Some((t, z));
                break;
            }
        }
        let (t, z) = found.ok_or_else(|| {
            Error::step(4, format!("no t <= {} expresses {} through H(y') modulo (x)^{}; raise --t-max", config.t_max, target, problem.bound))
        })?;
        ts[k] = t;
        coeffs.push(z);
    }
    let names = continue_names(&b.ring, b.algebra_names().first().map(|s| s.as_str()), b.nalg(), 2 * q);
    let ring = b.ring.extend(&names, Some(b.ring.order().clone()).filter(|o| !matches!(o, crate::poly::MonomialOrder::Block(_))))?;
    let n0 = b.ring.nvars();
    let lift = |p: &Poly| p.map_to(&ring).unwrap();
    let mut relations: Vec<Poly> = b.relations.iter().map(lift).collect();
    for (k, g) in [&pair.gamma, &pair.gamma_p].into_iter().enumerate() {
        let mut rel = -&lift(g);
        for (i, bi) in bs.iter().enumerate() {
            rel = &rel + &(&lift(bi) * &Poly::var(&ring, n0 + k * q + i));
        }
        relations.push(rel);
    }
    let base_ideal = b.base_ideal.iter().map(lift).collect();
    let algebra = Presentation::new(ring.clone(), b.nbase, base_ideal, relations)?;
    let mut approx = problem.approx.clone();
    approx.extend(coeffs.into_iter().flatten());
    let out = Problem::new(algebra, approx, problem.bound)?;
    debug!("absorbed with t = {:?}, {} new variables", ts, names.len());
    Ok((out, Absorption { t: ts, b: bs.iter().map(lift).collect(), new_vars: names }))
}

/// Step 6: `B := S_B(I/I^2)`, then `Z_1..Z_n` with relations `Z`; `v` sends the new
/// variables to zero. Also returns the indices of the relations `Z`.
pub fn prepare_free_conormal(problem: &Problem) -> Result<(Problem, Vec<usize>)> {
    let sym = symmetric_algebra_presentation(&problem.algebra, "S");
    let b = sym.presentation;
    let n = b.nalg();
    let mut znames = Vec::new();
    for i in 0..n {
        let nm = b.ring.fresh_name(&format!("Z{}", i + 1), &znames);
        znames.push(nm);
    }
    let ring = b.ring.extend(&znames, None)?;
    let n0 = b.ring.nvars();
    let mut relations: Vec<Poly> = b.relations.iter().map(|p| p.map_to(&ring).unwrap()).collect();
    let zrels: Vec<usize> = (relations.len()..relations.len() + n).collect();
    relations.extend((0..n).map(|i| Poly::var(&ring, n0 + i)));
    let base_ideal = b.base_ideal.iter().map(|p| p.map_to(&ring).unwrap()).collect();
    let algebra = Presentation::new(ring, b.nbase, base_ideal, relations)?;
    let base = problem.base_ring();
    let mut approx = problem.approx.clone();
    approx.resize(algebra.nalg(), Poly::zero(&base));
    Ok((Problem::new(algebra, approx, problem.bound)?, zrels))
}
