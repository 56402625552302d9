//! One smoothing stage: the linear equations `h`, the Taylor remainder `Q`, the
//! equations `g` and the units `s, s', s''` of the localization.

use crate::algebra::Presentation;
use crate::error::{Error, Result};
use crate::poly::{Poly, PolyMatrix, RingRef};

use super::system::JacobianSystem;

/// Positions of the `T` variables: `T_i = (T_1..T_r, T_{i,r+1}..T_{i,n})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TLayout {
    pub r: usize,
    pub q: usize,
    pub n: usize,
    /// `vars[i][k]`: ring index of the variable in slot `k` of `T_i`.
    pub vars: Vec<Vec<usize>>,
}

impl TLayout {
    /// Names for a layout: `{prefix}{k}` for the shared slots, `{prefix}{i}_{k}` otherwise.
    pub fn names(prefix: &str, r: usize, q: usize, n: usize) -> Vec<String> {
        let mut out: Vec<String> = (1..=r).map(|k| format!("{prefix}{k}")).collect();
        for i in 1..=q {
            out.extend((r + 1..=n).map(|k| format!("{prefix}{i}_{k}")));
        }
        out
    }

    /// The layout whose variables start at ring index `first`, in the order of `names`.
    pub fn consecutive(first: usize, r: usize, q: usize, n: usize) -> TLayout {
        let shared: Vec<usize> = (first..first + r).collect();
        let mut next = first + r;
        let mut vars = Vec::new();
        for _ in 0..q {
            let mut v = shared.clone();
            v.extend(next..next + (n - r));
            next += n - r;
            vars.push(v);
        }
        TLayout { r, q, n, vars }
    }

    pub fn count(&self) -> usize {
        self.r + self.q * (self.n - self.r)
    }

    /// All variables, shared ones first.
    pub fn all(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.vars.first().map(|v| v[..self.r].to_vec()).unwrap_or_default();
        for v in &self.vars {
            out.extend_from_slice(&v[self.r..]);
        }
        out
    }

    pub fn shared(&self) -> Vec<usize> {
        self.all()[..self.r].to_vec()
    }
}

/// What a stage is built from.
#[derive(Clone, Debug)]
pub struct StageSpec<'a> {
    pub b: &'a Presentation,
    pub system: &'a JacobianSystem,
    /// The ring holding every variable of the construction.
    pub ring: RingRef,
    /// The point `c` the Taylor expansion is taken at (`y'` or `Y'`).
    pub centers: Vec<Poly>,
    /// Ring indices of the variables `Y` solved by `h`.
    pub unknowns: Vec<usize>,
    pub layout: TLayout,
    /// Ring index of the inverse variable.
    pub w: usize,
    /// `s` with `P(c) ≡ d s`.
    pub s: Poly,
    /// `b` with `f(c) ≡ d^2 b`.
    pub b_vec: Vec<Poly>,
    /// `ŝ` with `P̂(c) ≡ d ŝ`.
    pub s_hat: Poly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StageData {
    pub d: Poly,
    pub p: u32,
    pub s: Poly,
    pub b: Vec<Poly>,
    pub centers: Vec<Poly>,
    pub unknowns: Vec<usize>,
    pub layout: TLayout,
    /// `G_i(c)`.
    pub g_at_center: Vec<PolyMatrix>,
    /// `X = Σ_i G_i(c) T_i`.
    pub direction: Vec<Poly>,
    pub h: Vec<Poly>,
    pub q: Vec<Poly>,
    pub g: Vec<Poly>,
    pub s1: Poly,
    pub s2: Poly,
    /// `s s' s''`.
    pub unit: Poly,
    pub w: usize,
    pub w_rel: Poly,
}

impl StageData {
    /// The relations this stage adds: `h`, `g`, then `w U - 1`.
    pub fn relations(&self) -> Vec<Poly> {
        let mut out = self.h.clone();
        out.extend(self.g.iter().cloned());
        out.push(self.w_rel.clone());
        out
    }

    /// The solved variables: `Y`, the shared `T`, then `w`.
    pub fn solved_vars(&self) -> Vec<usize> {
        let mut out = self.unknowns.clone();
        out.extend(self.layout.shared());
        out.push(self.w);
        out
    }

    /// The substitution `Y -> c + s^{-1} d X` multiplied through: returns `(s c + d X)`,
    /// to be read as `s Y`.
    pub fn scaled_solution(&self) -> Vec<Poly> {
        self.centers.iter().zip(&self.direction).map(|(c, x)| &(&self.s * c) + &(&self.d * x)).collect()
    }
}

/// Images of the variables of `b.ring` in `ring`: base variables by name, `Y_j -> c_j`.
pub fn center_images(b: &Presentation, ring: &RingRef, centers: &[Poly]) -> Vec<Poly> {
    let mut im: Vec<Poly> = b
        .base_names()
        .iter()
        .map(|n| Poly::var_named(ring, n).expect("base variable missing"))
        .collect();
    im.extend(centers.iter().cloned());
    im
}

fn taylor_parts(f: &Poly, images: &[Poly], ring: &RingRef, tvars: &[usize]) -> Vec<Poly> {
    f.substitute(ring, images).homogeneous_parts_in(tvars)
}

pub fn build_stage(spec: &StageSpec<'_>, step: u32) -> Result<StageData> {
    let ring = &spec.ring;
    let sys = spec.system;
    let b = spec.b;
    let lay = &spec.layout;
    let (n, r) = (lay.n, lay.r);
    if n != b.nalg() || r != sys.r() || lay.q != sys.q() || spec.centers.len() != n {
        return Err(Error::step(step, "stage layout does not match the Jacobian system"));
    }
    let d = sys.d.substitute(ring, &center_images(b, ring, &spec.centers));
    let im = center_images(b, ring, &spec.centers);
    let at = |p: &Poly| p.substitute(ring, &im);

    // X = Σ_i G_i(c) T_i
    let completed = sys.completed(b)?;
    let mut g_at_center = Vec::new();
    let mut direction = vec![Poly::zero(ring); n];
    for (i, (_, g)) in completed.iter().enumerate() {
        let mut gc = PolyMatrix::zeros(ring, n, n);
        for j in 0..n {
            for k in 0..n {
                let e = at(g.get(j, k));
                if !e.is_zero() {
                    direction[j] = &direction[j] + &(&e * &Poly::var(ring, lay.vars[i][k]));
                }
                gc.set(j, k, e);
            }
        }
        g_at_center.push(gc);
    }
    let h: Vec<Poly> = (0..n)
        .map(|j| &(&spec.s * &(&Poly::var(ring, spec.unknowns[j]) - &spec.centers[j])) - &(&d * &direction[j]))
        .collect();

    // Taylor split of f(c + X) by degree in T
    let tvars = lay.all();
    let mut shifted = im.clone();
    for j in 0..n {
        shifted[b.nbase + j] = &spec.centers[j] + &direction[j];
    }
    let f = sys.relations(b);
    let p = sys.max_degree(b);
    let shared = lay.shared();
    let p_at = at(&sys.p);
    let mut q = Vec::new();
    let mut g = Vec::new();
    for (k, fk) in f.iter().enumerate() {
        let parts = taylor_parts(fk, &shifted, ring, &tvars);
        let lin = parts.get(1).cloned().unwrap_or_else(|| Poly::zero(ring));
        if lin != &p_at * &Poly::var(ring, shared[k]) {
            return Err(Error::step(step, format!("linear Taylor term of relation {} differs from P(c) T_{}", k + 1, k + 1)));
        }
        let mut qk = Poly::zero(ring);
        for (m, part) in parts.iter().enumerate().skip(2) {
            if part.is_zero() {
                continue;
            }
            qk = &qk + &(&(&spec.s.pow(p - m as u32) * &d.pow(m as u32 - 2)) * part);
        }
        let sp = spec.s.pow(p);
        let gk = &(&(&sp * &spec.b_vec[k]) + &(&sp * &Poly::var(ring, shared[k]))) + &qk;
        q.push(qk);
        g.push(gk);
    }
    let s1 = PolyMatrix::jacobian(ring, &g, &shared).det()?;

    // P̂(c + s^{-1} d X) = d s'' / s^D with D the Y-degree of P̂
    let yvars = b.algebra_vars();
    let dy = sys.p_hat.terms().iter().map(|(m, _)| yvars.iter().map(|&v| m.exp(v)).sum::<u32>()).max().unwrap_or(0);
    let mut s2 = &spec.s.pow(dy) * &spec.s_hat;
    if dy > 0 {
        let parts = taylor_parts(&sys.p_hat, &shifted, ring, &tvars);
        for (m, part) in parts.iter().enumerate().skip(1) {
            if part.is_zero() {
                continue;
            }
            s2 = &s2 + &(&(&spec.s.pow(dy - m as u32) * &d.pow(m as u32 - 1)) * part);
        }
    }
    let unit = &(&spec.s * &s1) * &s2;
    let w_rel = &(&Poly::var(ring, spec.w) * &unit) - &Poly::one(ring);
    Ok(StageData {
        d,
        p,
        s: spec.s.clone(),
        b: spec.b_vec.clone(),
        centers: spec.centers.clone(),
        unknowns: spec.unknowns.clone(),
        layout: lay.clone(),
        g_at_center,
        direction,
        h,
        q,
        g,
        s1,
        s2,
        unit,
        w: spec.w,
        w_rel,
    })
}
