use std::cmp::Ordering;

/// Exponent vector with cached total degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
    deg: u32,
}

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial { exps: vec![0; nvars], deg: 0 }
    }

    pub fn from_exps(exps: Vec<u32>) -> Monomial {
        let deg = exps.iter().sum();
        Monomial { exps, deg }
    }

    pub fn var(nvars: usize, i: usize, e: u32) -> Monomial {
        let mut m = Monomial::one(nvars);
        m.exps[i] = e;
        m.deg = e;
        m
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn deg(&self) -> u32 {
        self.deg
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i]
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let exps: Vec<u32> = self.exps.iter().zip(&o.exps).map(|(a, b)| a + b).collect();
        Monomial { exps, deg: self.deg + o.deg }
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.deg <= o.deg && self.exps.iter().zip(&o.exps).all(|(a, b)| a <= b)
    }

    /// `o / self`, assuming `self | o`.
    pub fn quotient_of(&self, o: &Monomial) -> Monomial {
        let exps: Vec<u32> = o.exps.iter().zip(&self.exps).map(|(a, b)| a - b).collect();
        Monomial { exps, deg: o.deg - self.deg }
    }

    pub fn div(&self, o: &Monomial) -> Option<Monomial> {
        if o.divides(self) {
            Some(o.quotient_of(self))
        } else {
            None
        }
    }

    pub fn lcm(&self, o: &Monomial) -> Monomial {
        let exps: Vec<u32> = self.exps.iter().zip(&o.exps).map(|(a, b)| *a.max(b)).collect();
        Monomial::from_exps(exps)
    }

    pub fn gcd(&self, o: &Monomial) -> Monomial {
        let exps: Vec<u32> = self.exps.iter().zip(&o.exps).map(|(a, b)| *a.min(b)).collect();
        Monomial::from_exps(exps)
    }

    pub fn coprime(&self, o: &Monomial) -> bool {
        self.exps.iter().zip(&o.exps).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Bit `i mod 64` set when variable `i` occurs; quick non-divisibility filter.
    pub fn divmask(&self) -> u64 {
        let mut m = 0u64;
        for (i, e) in self.exps.iter().enumerate() {
            if *e > 0 {
                m |= 1 << (i % 64);
            }
        }
        m
    }

    pub fn pow(&self, e: u32) -> Monomial {
        Monomial { exps: self.exps.iter().map(|a| a * e).collect(), deg: self.deg * e }
    }

    pub(crate) fn set_exp(&mut self, i: usize, e: u32) {
        self.deg = self.deg - self.exps[i] + e;
        self.exps[i] = e;
    }

    pub(crate) fn grevlex_range(&self, o: &Monomial, lo: usize, hi: usize) -> Ordering {
        let da: u32 = self.exps[lo..hi].iter().sum();
        let db: u32 = o.exps[lo..hi].iter().sum();
        if da != db {
            return da.cmp(&db);
        }
        for i in (lo..hi).rev() {
            if self.exps[i] != o.exps[i] {
                return o.exps[i].cmp(&self.exps[i]);
            }
        }
        Ordering::Equal
    }
}
