//! Truncated power series over `k[x]/J`, i.e. elements of `k[x]/(J + (x)^prec)`,
//! and Hensel/Newton lifting of approximate solutions.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::groebner::GroebnerBasis;
use crate::ideal::divide_exact;
use crate::poly::{Monomial, Poly, PolyMatrix, RingRef};

/// A jet `rep mod (J + (x)^prec)`; `rep` is kept in normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetSeries {
    pub rep: Poly,
    pub prec: u32,
}

impl fmt::Display for JetSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | prec {}", self.rep, self.prec)
    }
}

/// Jet values for the non-base variables of some ambient ring, by name.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct JetPoint {
    pub names: Vec<String>,
    pub values: Vec<JetSeries>,
}

impl JetPoint {
    pub fn get(&self, name: &str) -> Option<&JetSeries> {
        self.names.iter().position(|n| n == name).map(|i| &self.values[i])
    }

    pub fn set(&mut self, name: &str, v: JetSeries) {
        match self.names.iter().position(|n| n == name) {
            Some(i) => self.values[i] = v,
            None => {
                self.names.push(name.to_string());
                self.values.push(v);
            }
        }
    }

    pub fn min_prec(&self) -> Option<u32> {
        self.values.iter().map(|v| v.prec).min()
    }
}

/// The truncated rings `k[x]/(J + (x)^p)` for all `p`.
pub struct JetRing {
    base: RingRef,
    ideal: Vec<Poly>,
    all_vars: Vec<usize>,
    cache: Mutex<HashMap<u32, GroebnerBasis>>,
}

impl JetRing {
    pub fn new(base: &RingRef, ideal: &[Poly]) -> JetRing {
        let ideal: Vec<Poly> = ideal.iter().filter(|p| !p.is_zero()).cloned().collect();
        JetRing {
            base: base.clone(),
            ideal,
            all_vars: (0..base.nvars()).collect(),
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn base(&self) -> &RingRef {
        &self.base
    }

    pub fn ideal(&self) -> &[Poly] {
        &self.ideal
    }

    fn power_gens(&self, prec: u32) -> Vec<Poly> {
        let n = self.base.nvars();
        let mut mons = vec![Monomial::one(n)];
        for _ in 0..prec {
            let mut next = Vec::new();
            for m in &mons {
                let last = (0..n).rev().find(|&v| m.exp(v) > 0).unwrap_or(0);
                for v in last..n {
                    next.push(m.mul(&Monomial::var(n, v, 1)));
                }
            }
            mons = next;
        }
        let one = self.base.field().one();
        mons.into_iter().map(|m| Poly::term(&self.base, m, one.clone())).collect()
    }

    fn basis(&self, prec: u32) -> GroebnerBasis {
        let mut c = self.cache.lock().unwrap();
        c.entry(prec)
            .or_insert_with(|| {
                let mut gens = self.ideal.clone();
                gens.extend(self.power_gens(prec));
                GroebnerBasis::new(&self.base, &gens)
            })
            .clone()
    }

    /// Normal form modulo `J + (x)^prec`.
    pub fn normalize(&self, p: &Poly, prec: u32) -> Poly {
        let t = p.truncate_in(&self.all_vars, prec);
        if self.ideal.is_empty() || t.is_zero() {
            t
        } else {
            self.basis(prec).reduce(&t)
        }
    }

    pub fn jet(&self, p: &Poly, prec: u32) -> JetSeries {
        JetSeries { rep: self.normalize(p, prec), prec }
    }

    pub fn add(&self, a: &JetSeries, b: &JetSeries) -> JetSeries {
        let prec = a.prec.min(b.prec);
        self.jet(&(&a.rep + &b.rep), prec)
    }

    pub fn sub(&self, a: &JetSeries, b: &JetSeries) -> JetSeries {
        let prec = a.prec.min(b.prec);
        self.jet(&(&a.rep - &b.rep), prec)
    }

    pub fn mul(&self, a: &JetSeries, b: &JetSeries) -> JetSeries {
        let prec = a.prec.min(b.prec);
        self.jet(&self.trunc_mul(&a.rep, &b.rep, prec), prec)
    }

    fn trunc_mul(&self, a: &Poly, b: &Poly, prec: u32) -> Poly {
        let a = a.truncate_in(&self.all_vars, prec);
        let b = b.truncate_in(&self.all_vars, prec);
        let mut terms = Vec::new();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                if ma.deg() + mb.deg() < prec {
                    terms.push((ma.mul(mb), ca.mul(cb)));
                }
            }
        }
        Poly::from_terms(&self.base, terms)
    }

    /// Largest `k < prec` with `a ∈ J + (x)^k`; `None` for the zero jet.
    pub fn order(&self, a: &JetSeries) -> Option<u32> {
        let o = a.rep.order_in(&self.all_vars)?;
        if self.ideal.is_empty() {
            return Some(o);
        }
        for k in o + 1..a.prec {
            if !self.basis(k).contains(&a.rep) {
                return Some(k - 1);
            }
        }
        Some(a.prec.saturating_sub(1).max(o))
    }

    pub fn is_unit(&self, a: &JetSeries) -> bool {
        a.prec > 0 && !a.rep.constant_term().is_zero()
    }

    /// `a / d` with precision `prec(a) - ord(d)`.
    pub fn divide(&self, a: &JetSeries, d: &JetSeries) -> Result<JetSeries> {
        let o = self
            .order(d)
            .ok_or_else(|| Error::NotDivisibleInJets("division by the zero jet".into()))?;
        if a.prec <= o {
            return Err(Error::NotDivisibleInJets(format!(
                "precision {} does not exceed the divisor order {o}",
                a.prec
            )));
        }
        let prec = a.prec - o;
        if a.rep.is_zero() {
            return Ok(JetSeries { rep: Poly::zero(&self.base), prec });
        }
        if self.ideal.is_empty() {
            return self.divide_free(a, d, o, prec);
        }
        let mut m = self.ideal.clone();
        m.extend(self.power_gens(a.prec));
        let c = divide_exact(&a.rep, &d.rep, &m).map_err(|_| {
            Error::NotDivisibleInJets(format!("{} by {} at precision {}", a.rep, d.rep, a.prec))
        })?;
        Ok(self.jet(&c, prec))
    }

    /// Degree-by-degree division in `k[[x]]` using the initial form of `d`.
    fn divide_free(&self, a: &JetSeries, d: &JetSeries, o: u32, prec: u32) -> Result<JetSeries> {
        let comps = |p: &Poly, upto: u32| -> Vec<Poly> {
            let mut v = vec![Vec::new(); upto as usize];
            for (m, c) in p.terms() {
                if m.deg() < upto {
                    v[m.deg() as usize].push((m.clone(), c.clone()));
                }
            }
            v.into_iter().map(|t| Poly::from_terms(&self.base, t)).collect()
        };
        let ac = comps(&a.rep, a.prec);
        let dc = comps(&d.rep, a.prec);
        let d0 = &dc[o as usize];
        let not_div = || Error::NotDivisibleInJets(format!("{} by {} at precision {}", a.rep, d.rep, a.prec));
        if ac[..o as usize].iter().any(|p| !p.is_zero()) {
            return Err(not_div());
        }
        let mut q: Vec<Poly> = Vec::new();
        for k in o..a.prec {
            let mut rhs = ac[k as usize].clone();
            for (i, qi) in q.iter().enumerate() {
                let j = k as usize - i;
                if j > o as usize && j < dc.len() {
                    rhs = &rhs - &(qi * &dc[j]);
                }
            }
            let qk = rhs.exact_div(d0).ok_or_else(not_div)?;
            q.push(qk);
        }
        let mut rep = Poly::zero(&self.base);
        for (i, qi) in q.iter().enumerate() {
            if (i as u32) < prec {
                rep = &rep + qi;
            }
        }
        Ok(JetSeries { rep, prec })
    }

    /// Inverse of a unit jet.
    pub fn inverse(&self, u: &JetSeries) -> Result<JetSeries> {
        if !self.is_unit(u) {
            return Err(Error::NotDivisibleInJets(format!("{} is not a unit", u.rep)));
        }
        let c0 = u.rep.constant_term().inv();
        let mut v = Poly::constant(&self.base, c0);
        let two = Poly::from_i64(&self.base, 2);
        let mut p = 1;
        while p < u.prec {
            p = (2 * p).min(u.prec);
            let uv = self.normalize(&self.trunc_mul(&u.rep, &v, p), p);
            v = self.normalize(&self.trunc_mul(&v, &(&two - &uv), p), p);
        }
        Ok(JetSeries { rep: v, prec: u.prec })
    }

    /// Evaluates `p` from `ambient` at a jet point; base variables map to themselves
    /// by name, every other variable must be present in `point`. The precision is the
    /// minimum over the variables that occur, capped by `cap`.
    pub fn eval(&self, p: &Poly, point: &JetPoint, cap: u32) -> Result<JetSeries> {
        let ambient = p.ring();
        let support = p.support();
        let mut prec = cap;
        let mut images: Vec<Option<Poly>> = vec![None; ambient.nvars()];
        for &v in &support {
            let name = ambient.var_name(v);
            if let Some(b) = self.base.var_index(name) {
                images[v] = Some(Poly::var(&self.base, b));
            } else {
                let j = point.get(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
                prec = prec.min(j.prec);
                images[v] = Some(j.rep.clone());
            }
        }
        Ok(JetSeries { rep: self.eval_reps(p, &images, prec), prec })
    }

    /// Evaluates treating all images as exact representatives, truncating at `prec`.
    pub fn eval_reps(&self, p: &Poly, images: &[Option<Poly>], prec: u32) -> Poly {
        let mut cache: HashMap<(usize, u32), Poly> = HashMap::new();
        let mut acc: Vec<(Monomial, crate::poly::Coeff)> = Vec::new();
        let field = self.base.field();
        for (m, c) in p.terms() {
            let mut t = Poly::constant(&self.base, field.coerce(c).unwrap());
            for (v, e) in m.exps().iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                let img = images[v].as_ref().expect("missing image");
                if img.is_zero() {
                    t = Poly::zero(&self.base);
                    break;
                }
                let pw = self.cached_pow(&mut cache, v, img, *e, prec);
                t = self.trunc_mul(&t, &pw, prec);
                if t.is_zero() {
                    break;
                }
            }
            acc.extend(t.into_terms());
        }
        self.normalize(&Poly::from_terms(&self.base, acc), prec)
    }

    fn cached_pow(&self, cache: &mut HashMap<(usize, u32), Poly>, v: usize, img: &Poly, e: u32, prec: u32) -> Poly {
        if e == 1 {
            return img.truncate_in(&self.all_vars, prec);
        }
        if let Some(p) = cache.get(&(v, e)) {
            return p.clone();
        }
        let half = self.cached_pow(cache, v, img, e / 2, prec);
        let mut r = self.trunc_mul(&half, &half, prec);
        if e % 2 == 1 {
            r = self.trunc_mul(&r, img, prec);
        }
        cache.insert((v, e), r.clone());
        r
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HenselOutcome {
    pub point: JetPoint,
    /// Residual orders observed after each Newton step (the first entry is the start).
    pub residual_orders: Vec<u32>,
}

/// Newton iteration on a square system in the unknowns `unknowns` (names of ambient
/// variables), lifting `point` until the system vanishes modulo `(x)^target`.
/// Other point coordinates are frozen and used as exact representatives.
pub fn hensel_lift(jr: &JetRing, system: &[Poly], point: &JetPoint, unknowns: &[String], target: u32) -> Result<HenselOutcome> {
    let n = unknowns.len();
    if system.len() != n {
        return Err(Error::Dimension(format!("{} equations in {} unknowns", system.len(), n)));
    }
    let ambient = match system.first() {
        Some(f) => f.ring().clone(),
        None => return Ok(HenselOutcome { point: point.clone(), residual_orders: Vec::new() }),
    };
    let uidx: Vec<usize> = unknowns
        .iter()
        .map(|u| ambient.var_index(u).ok_or_else(|| Error::UnknownVariable(u.clone())))
        .collect::<Result<_>>()?;
    let jac = PolyMatrix::jacobian(&ambient, system, &uidx);
    let mut used: Vec<usize> = system.iter().flat_map(|f| f.support()).chain(uidx.iter().copied()).collect();
    used.sort_unstable();
    used.dedup();
    let mut pt = point.clone();
    let images = |pt: &JetPoint| -> Result<Vec<Option<Poly>>> {
        let mut im = vec![None; ambient.nvars()];
        for &v in &used {
            let name = ambient.var_name(v);
            im[v] = Some(match jr.base().var_index(name) {
                Some(b) => Poly::var(jr.base(), b),
                None => pt.get(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))?.rep.clone(),
            });
        }
        Ok(im)
    };
    let residual = |im: &[Option<Poly>]| -> Vec<Poly> { system.iter().map(|f| jr.eval_reps(f, im, target)).collect() };
    let order_of = |r: &[Poly]| -> u32 {
        r.iter()
            .filter_map(|p| jr.order(&JetSeries { rep: p.clone(), prec: target }))
            .min()
            .unwrap_or(target)
            .min(target)
    };

    let mut im = images(&pt)?;
    let mut res = residual(&im);
    let mut ord = order_of(&res);
    if ord == 0 {
        return Err(Error::NoConvergence("the starting point is not an approximate solution".into()));
    }
    let mut orders = vec![ord];
    let mut iterations = 0;
    while ord < target {
        iterations += 1;
        if iterations > 64 {
            return Err(Error::NoConvergence("iteration limit".into()));
        }
        let mut a: Vec<Vec<Poly>> = (0..n)
            .map(|i| (0..n).map(|j| jr.eval_reps(jac.get(i, j), &im, target)).collect())
            .collect();
        let mut b = res.clone();
        let delta = solve_unit_pivot(jr, &mut a, &mut b, target)?;
        for (k, u) in unknowns.iter().enumerate() {
            let cur = pt.get(u).unwrap().rep.clone();
            pt.set(u, JetSeries { rep: jr.normalize(&(&cur - &delta[k]), target), prec: target });
        }
        im = images(&pt)?;
        res = residual(&im);
        let new_ord = order_of(&res);
        if new_ord < (2 * ord).min(target) {
            return Err(Error::NoConvergence(format!("residual order went from {ord} to {new_ord}")));
        }
        ord = new_ord;
        orders.push(ord);
    }
    for u in unknowns {
        let v = pt.get(u).unwrap().clone();
        pt.set(u, JetSeries { rep: v.rep, prec: target });
    }
    Ok(HenselOutcome { point: pt, residual_orders: orders })
}

/// Solves `a x = b` over `k[x]/(J + (x)^prec)`, pivoting on entries with a nonzero constant term.
fn solve_unit_pivot(jr: &JetRing, a: &mut [Vec<Poly>], b: &mut [Poly], prec: u32) -> Result<Vec<Poly>> {
    let n = b.len();
    let mut perm: Vec<usize> = (0..n).collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !a[r][col].constant_term().is_zero())
            .ok_or_else(|| Error::SingularJacobian(format!("no unit pivot in column {col}")))?;
        a.swap(col, piv);
        b.swap(col, piv);
        perm.swap(col, piv);
        let inv = jr.inverse(&JetSeries { rep: a[col][col].clone(), prec })?.rep;
        for j in col..n {
            a[col][j] = jr.normalize(&jr.trunc_mul(&a[col][j], &inv, prec), prec);
        }
        b[col] = jr.normalize(&jr.trunc_mul(&b[col], &inv, prec), prec);
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in col..n {
                let t = jr.trunc_mul(&f, &a[col][j], prec);
                a[r][j] = jr.normalize(&(&a[r][j] - &t), prec);
            }
            let t = jr.trunc_mul(&f, &b[col], prec);
            b[r] = jr.normalize(&(&b[r] - &t), prec);
        }
    }
    Ok(b.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{Field, MonomialOrder, Ring};

    fn base() -> RingRef {
        Ring::new(Field::Rational, &["x1", "x2"], MonomialOrder::DegRevLex).unwrap()
    }

    #[test]
    fn division_and_precision() {
        let r = base();
        let jr = JetRing::new(&r, &[]);
        let a = jr.jet(&Poly::parse(&r, "x1^2 + x1^3*x2").unwrap(), 6);
        let d = jr.jet(&Poly::parse(&r, "x1").unwrap(), 10);
        let q = jr.divide(&a, &d).unwrap();
        assert_eq!(q.prec, 5);
        assert_eq!(q.rep, Poly::parse(&r, "x1 + x1^2*x2").unwrap());
        let bad = jr.jet(&Poly::parse(&r, "x2").unwrap(), 6);
        assert!(matches!(jr.divide(&bad, &d), Err(Error::NotDivisibleInJets(_))));
    }

    #[test]
    fn inverse_of_unit() {
        let r = base();
        let jr = JetRing::new(&r, &[]);
        let u = jr.jet(&Poly::parse(&r, "1 - x1").unwrap(), 5);
        let v = jr.inverse(&u).unwrap();
        assert_eq!(v.rep, Poly::parse(&r, "1 + x1 + x1^2 + x1^3 + x1^4").unwrap());
    }

    #[test]
    fn quotient_ring_jets() {
        let r = base();
        let jr = JetRing::new(&r, &[Poly::parse(&r, "x2 - x1^2 - x1^5").unwrap()]);
        let j = jr.jet(&Poly::parse(&r, "x2").unwrap(), 4);
        assert!(jr.order(&j).unwrap() >= 2);
    }
}
