use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::coeff::Coeff;
use super::monomial::Monomial;
use super::ring::{same_ring, RingRef};
use crate::error::{Error, Result};

pub type Term = (Monomial, Coeff);

/// Sparse polynomial; terms are sorted strictly descending in the ring's order
/// and carry no zero coefficients.
#[derive(Clone)]
pub struct Poly {
    ring: RingRef,
    terms: Vec<Term>,
}

impl Poly {
    pub fn zero(ring: &RingRef) -> Poly {
        Poly { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &RingRef, c: Coeff) -> Poly {
        let mut p = Poly::zero(ring);
        if !c.is_zero() {
            p.terms.push((Monomial::one(ring.nvars()), c));
        }
        p
    }

    pub fn from_i64(ring: &RingRef, v: i64) -> Poly {
        Poly::constant(ring, ring.field().from_i64(v))
    }

    pub fn one(ring: &RingRef) -> Poly {
        Poly::from_i64(ring, 1)
    }

    pub fn var(ring: &RingRef, i: usize) -> Poly {
        Poly::term(ring, Monomial::var(ring.nvars(), i, 1), ring.field().one())
    }

    pub fn var_named(ring: &RingRef, name: &str) -> Result<Poly> {
        ring.var_index(name)
            .map(|i| Poly::var(ring, i))
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn term(ring: &RingRef, m: Monomial, c: Coeff) -> Poly {
        let mut p = Poly::zero(ring);
        if !c.is_zero() {
            p.terms.push((m, c));
        }
        p
    }

    /// Builds a polynomial from arbitrary terms: sorts, merges equal monomials, drops zeros.
    pub fn from_terms(ring: &RingRef, terms: Vec<Term>) -> Poly {
        let mut acc: HashMap<Monomial, Coeff> = HashMap::with_capacity(terms.len());
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), ring.nvars());
            match acc.get_mut(&m) {
                Some(e) => *e = e.add(&c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Poly::from_map(ring, acc)
    }

    fn from_map(ring: &RingRef, acc: HashMap<Monomial, Coeff>) -> Poly {
        let mut terms: Vec<Term> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let ord = ring.order();
        terms.sort_unstable_by(|a, b| ord.cmp(&b.0, &a.0));
        Poly { ring: ring.clone(), terms }
    }

    /// Trusts the caller that `terms` are sorted, distinct and nonzero.
    pub(crate) fn from_sorted(ring: &RingRef, terms: Vec<Term>) -> Poly {
        debug_assert!(terms.iter().all(|t| !t.1.is_zero()));
        Poly { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub(crate) fn terms_mut(&mut self) -> &mut Vec<Term> {
        &mut self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// Coefficient of the monomial 1.
    pub fn constant_term(&self) -> Coeff {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => self.ring.field().zero(),
        }
    }

    pub fn coeff_of(&self, m: &Monomial) -> Coeff {
        let ord = self.ring.order();
        match self.terms.binary_search_by(|t| ord.cmp(m, &t.0)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => self.ring.field().zero(),
        }
    }

    pub fn lm(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn lc(&self) -> Option<&Coeff> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.0.deg()).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|t| t.0.exp(var)).max().unwrap_or(0)
    }

    /// Indices of variables that occur.
    pub fn support(&self) -> Vec<usize> {
        let n = self.ring.nvars();
        let mut used = vec![false; n];
        for (m, _) in &self.terms {
            for (i, e) in m.exps().iter().enumerate() {
                if *e > 0 {
                    used[i] = true;
                }
            }
        }
        (0..n).filter(|i| used[*i]).collect()
    }

    fn check(&self, o: &Poly) -> Result<()> {
        if same_ring(&self.ring, &o.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!("{:?} vs {:?}", self.ring, o.ring)))
        }
    }

    pub fn checked_add(&self, o: &Poly) -> Result<Poly> {
        self.check(o)?;
        Ok(self.add_scaled(o, &self.ring.field().one()))
    }

    pub fn checked_sub(&self, o: &Poly) -> Result<Poly> {
        self.check(o)?;
        Ok(self.add_scaled(o, &self.ring.field().from_i64(-1)))
    }

    pub fn checked_mul(&self, o: &Poly) -> Result<Poly> {
        self.check(o)?;
        Ok(self.mul_impl(o))
    }

    /// `self + c * o` by merging sorted term lists.
    pub fn add_scaled(&self, o: &Poly, c: &Coeff) -> Poly {
        let ord = self.ring.order();
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &o.terms);
        while i < a.len() && j < b.len() {
            match ord.cmp(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), b[j].1.mul(c)));
                    j += 1;
                }
                Ordering::Equal => {
                    let s = a[i].1.add(&b[j].1.mul(c));
                    if !s.is_zero() {
                        out.push((a[i].0.clone(), s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            out.push((t.0.clone(), t.1.mul(c)));
        }
        if c.is_zero() {
            out.retain(|t| !t.1.is_zero());
        }
        Poly { ring: self.ring.clone(), terms: out }
    }

    /// `self - c * m * o`, the reduction step.
    pub fn sub_mul_term(&self, c: &Coeff, m: &Monomial, o: &Poly) -> Poly {
        let ord = self.ring.order();
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &o.terms;
        let mut bj: Option<Monomial> = b.first().map(|t| t.0.mul(m));
        while i < a.len() && j < b.len() {
            let mj = bj.as_ref().unwrap();
            match ord.cmp(&a[i].0, mj) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((bj.take().unwrap(), b[j].1.mul(c).neg()));
                    j += 1;
                    bj = b.get(j).map(|t| t.0.mul(m));
                }
                Ordering::Equal => {
                    let s = a[i].1.sub(&b[j].1.mul(c));
                    if !s.is_zero() {
                        out.push((a[i].0.clone(), s));
                    }
                    i += 1;
                    j += 1;
                    bj = b.get(j).map(|t| t.0.mul(m));
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        while j < b.len() {
            out.push((b[j].0.mul(m), b[j].1.mul(c).neg()));
            j += 1;
        }
        Poly { ring: self.ring.clone(), terms: out }
    }

    pub fn scale(&self, c: &Coeff) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(m, a)| (m.clone(), a.mul(c))).collect();
        Poly { ring: self.ring.clone(), terms }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Coeff) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(a, b)| (a.mul(m), b.mul(c))).collect();
        Poly { ring: self.ring.clone(), terms }
    }

    fn mul_impl(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(&self.ring);
        }
        if self.terms.len() == 1 {
            return o.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        if o.terms.len() == 1 {
            return self.mul_term(&o.terms[0].0, &o.terms[0].1);
        }
        let mut acc: HashMap<Monomial, Coeff> = HashMap::with_capacity(self.terms.len() * o.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let m = ma.mul(mb);
                let c = ca.mul(cb);
                match acc.get_mut(&m) {
                    Some(e) => *e = e.add(&c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Poly::from_map(&self.ring, acc)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_impl(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_impl(&base);
            }
        }
        result
    }

    pub fn monic(&self) -> Poly {
        match self.lc() {
            Some(c) if !c.is_one() => self.scale(&c.inv()),
            _ => self.clone(),
        }
    }

    pub fn derivative(&self, var: usize) -> Poly {
        let f = self.ring.field();
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exp(var);
            if e == 0 {
                continue;
            }
            let c2 = c.mul(&f.from_i64(e as i64));
            if c2.is_zero() {
                continue;
            }
            let mut m2 = m.clone();
            m2.set_exp(var, e - 1);
            terms.push((m2, c2));
        }
        // lowering one exponent can break the order for block/degree orders
        let mut p = Poly { ring: self.ring.clone(), terms };
        p.resort();
        p
    }

    fn resort(&mut self) {
        let ord = self.ring.order().clone();
        let sorted = self.terms.windows(2).all(|w| ord.cmp(&w[0].0, &w[1].0) == Ordering::Greater);
        if !sorted {
            let terms = std::mem::take(&mut self.terms);
            *self = Poly::from_terms(&self.ring, terms);
        }
    }

    /// Ring homomorphism: variable `i` goes to `images[i]` (all in one target ring).
    pub fn substitute(&self, target: &RingRef, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.ring.nvars(), "substitute: wrong number of images");
        let mut cache: Vec<Vec<Poly>> = vec![Vec::new(); images.len()];
        let mut acc = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, target.field().coerce(c).expect("field mismatch"));
            for (i, e) in m.exps().iter().enumerate() {
                if *e == 0 || t.is_zero() {
                    continue;
                }
                let powers = &mut cache[i];
                if powers.is_empty() {
                    powers.push(Poly::one(target));
                }
                while powers.len() <= *e as usize {
                    let next = powers.last().unwrap().mul_impl(&images[i]);
                    powers.push(next);
                }
                t = t.mul_impl(&powers[*e as usize]);
            }
            acc = acc.add_scaled(&t, &target.field().one());
        }
        acc
    }

    /// Substitutes a single variable, staying in the same ring.
    pub fn subs_var(&self, var: usize, value: &Poly) -> Poly {
        let images: Vec<Poly> = (0..self.ring.nvars())
            .map(|i| if i == var { value.clone() } else { Poly::var(&self.ring, i) })
            .collect();
        self.substitute(&self.ring, &images)
    }

    /// Moves the polynomial into `target`, matching variables by name.
    pub fn map_to(&self, target: &RingRef) -> Result<Poly> {
        if same_ring(&self.ring, target) {
            return Ok(self.clone());
        }
        let mut pos = Vec::with_capacity(self.ring.nvars());
        let used = self.support();
        for i in 0..self.ring.nvars() {
            match target.var_index(self.ring.var_name(i)) {
                Some(j) => pos.push(Some(j)),
                None if !used.contains(&i) => pos.push(None),
                None => return Err(Error::UnknownVariable(self.ring.var_name(i).to_string())),
            }
        }
        let tf = target.field();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut e = vec![0u32; target.nvars()];
            for (i, k) in m.exps().iter().enumerate() {
                if *k > 0 {
                    e[pos[i].unwrap()] = *k;
                }
            }
            let c = tf
                .coerce(c)
                .ok_or_else(|| Error::RingMismatch("coefficient cannot be coerced".into()))?;
            terms.push((Monomial::from_exps(e), c));
        }
        Ok(Poly::from_terms(target, terms))
    }

    /// Exact division; `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        let (dm, dc) = (d.terms[0].0.clone(), d.terms[0].1.clone());
        let mut rem = self.clone();
        let mut q = Vec::new();
        while let Some((m, c)) = rem.terms.first().cloned() {
            let qm = m.div(&dm)?;
            let qc = c.div(&dc);
            rem = rem.sub_mul_term(&qc, &qm, d);
            q.push((qm, qc));
        }
        Some(Poly { ring: self.ring.clone(), terms: q })
    }

    /// Keeps the terms whose degree in the variables `vars` is below `bound`.
    pub fn truncate_in(&self, vars: &[usize], bound: u32) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| vars.iter().map(|&i| m.exp(i)).sum::<u32>() < bound)
            .cloned()
            .collect();
        Poly { ring: self.ring.clone(), terms }
    }

    /// Smallest degree in the variables `vars` over all terms (`None` for zero).
    pub fn order_in(&self, vars: &[usize]) -> Option<u32> {
        self.terms.iter().map(|(m, _)| vars.iter().map(|&i| m.exp(i)).sum::<u32>()).min()
    }

    /// Splits by total degree in `vars`: `result[m]` collects the terms of degree `m`.
    pub fn homogeneous_parts_in(&self, vars: &[usize]) -> Vec<Poly> {
        let mut parts: Vec<Vec<Term>> = Vec::new();
        for (m, c) in &self.terms {
            let k = vars.iter().map(|&i| m.exp(i)).sum::<u32>() as usize;
            if parts.len() <= k {
                parts.resize(k + 1, Vec::new());
            }
            parts[k].push((m.clone(), c.clone()));
        }
        parts.into_iter().map(|terms| Poly { ring: self.ring.clone(), terms }).collect()
    }

    /// Splits by powers of variable `var`: `result[k]` is the coefficient of `var^k`.
    pub fn coefficients_in(&self, var: usize) -> Vec<Poly> {
        let deg = self.degree_in(var) as usize;
        let mut parts: Vec<Vec<Term>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let k = m.exp(var);
            let mut m2 = m.clone();
            m2.set_exp(var, 0);
            parts[k as usize].push((m2, c.clone()));
        }
        parts.into_iter().map(|t| Poly::from_terms(&self.ring, t)).collect()
    }
}

impl PartialEq for Poly {
    fn eq(&self, o: &Poly) -> bool {
        same_ring(&self.ring, &o.ring) && self.terms == o.terms
    }
}

impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a> $tr<&'a Poly> for &'a Poly {
            type Output = Poly;
            fn $m(self, o: &'a Poly) -> Poly {
                let f: fn(&Poly, &Poly) -> Result<Poly> = $body;
                f(self, o).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, o: Poly) -> Poly {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Poly> for Poly {
            type Output = Poly;
            fn $m(self, o: &'a Poly) -> Poly {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<Poly> for &'a Poly {
            type Output = Poly;
            fn $m(self, o: Poly) -> Poly {
                self.$m(&o)
            }
        }
    };
}

binop!(Add, add, |a, b| a.checked_add(b));
binop!(Sub, sub, |a, b| a.checked_sub(b));
binop!(Mul, mul, |a, b| a.checked_mul(b));

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&self.ring.field().from_i64(-1))
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -(&self)
    }
}
