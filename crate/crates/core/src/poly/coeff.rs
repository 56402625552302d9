//! Exact coefficients: rationals with an `i64` fast path, and residues mod a prime.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Coefficient field of a ring: ℚ (`Rational`) or GF(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    /// `0` means ℚ, anything else must be a prime below 2^31.
    pub fn from_characteristic(c: u64) -> Result<Field, String> {
        if c == 0 {
            return Ok(Field::Rational);
        }
        if c >= 1 << 31 {
            return Err(format!("characteristic {c} is too large (limit 2^31)"));
        }
        if !is_prime(c) {
            return Err(format!("characteristic {c} is not a prime"));
        }
        Ok(Field::Prime(c))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Coeff {
        match self {
            Field::Rational => Coeff::Small(0, 1),
            Field::Prime(p) => Coeff::Mod(0, *p),
        }
    }

    pub fn one(&self) -> Coeff {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Coeff {
        match self {
            Field::Rational => Coeff::Small(v, 1),
            Field::Prime(p) => Coeff::Mod(v.rem_euclid(*p as i64) as u64, *p),
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Coeff {
        match self {
            Field::Rational => Coeff::from_big(BigRational::from_integer(v.clone())),
            Field::Prime(p) => {
                let r = v.mod_floor(&BigInt::from(*p));
                Coeff::Mod(r.to_u64().unwrap(), *p)
            }
        }
    }

    /// `num/den` in this field; `None` when `den` vanishes.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Option<Coeff> {
        if den.is_zero() {
            return None;
        }
        match self {
            Field::Rational => Some(Coeff::from_big(BigRational::new(num.clone(), den.clone()))),
            Field::Prime(_) => {
                let d = self.from_bigint(den);
                if d.is_zero() {
                    None
                } else {
                    Some(self.from_bigint(num).div(&d))
                }
            }
        }
    }

    /// Coerce a coefficient from another field into this one (ℚ → GF(p) only when defined).
    pub fn coerce(&self, c: &Coeff) -> Option<Coeff> {
        match (self, c) {
            (Field::Rational, Coeff::Mod(..)) => None,
            (Field::Rational, _) => Some(c.clone()),
            (Field::Prime(p), Coeff::Mod(v, q)) if p == q => Some(Coeff::Mod(*v, *p)),
            (Field::Prime(_), Coeff::Mod(..)) => None,
            (Field::Prime(_), _) => {
                let r = c.to_big_rational();
                self.from_ratio(r.numer(), r.denom())
            }
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2;
    while i * i <= n {
        if n % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

/// A field element. `Small(n, d)` is a reduced fraction with `d > 0`,
/// `Big` holds rationals that overflow `i64`, `Mod(v, p)` is `v` in GF(p).
#[derive(Clone, Debug)]
pub enum Coeff {
    Small(i64, i64),
    Big(Box<BigRational>),
    Mod(u64, u64),
}

impl Coeff {
    pub fn from_big(r: BigRational) -> Coeff {
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            if n != i64::MIN && d != i64::MIN {
                return Coeff::Small(n, d);
            }
        }
        Coeff::Big(Box::new(r))
    }

    fn from_i128(n: i128, d: i128) -> Coeff {
        debug_assert!(d != 0);
        let (mut n, mut d) = if d < 0 { (-n, -d) } else { (n, d) };
        let g = n.gcd(&d);
        if g > 1 {
            n /= g;
            d /= g;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(a), Ok(b)) if a != i64::MIN => Coeff::Small(a, b),
            _ => Coeff::Big(Box::new(BigRational::new_raw(BigInt::from(n), BigInt::from(d)))),
        }
    }

    pub fn to_big_rational(&self) -> BigRational {
        match self {
            Coeff::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Coeff::Big(r) => (**r).clone(),
            Coeff::Mod(v, _) => BigRational::from_integer(BigInt::from(*v)),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Small(n, _) => *n == 0,
            Coeff::Big(r) => r.is_zero(),
            Coeff::Mod(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coeff::Small(n, d) => *n == 1 && *d == 1,
            Coeff::Big(r) => r.is_one(),
            Coeff::Mod(v, _) => *v == 1,
        }
    }

    /// Sign used when rendering: GF(p) elements are never negative.
    pub fn is_negative(&self) -> bool {
        match self {
            Coeff::Small(n, _) => *n < 0,
            Coeff::Big(r) => r.is_negative(),
            Coeff::Mod(..) => false,
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Coeff::Small(_, d) => *d == 1,
            Coeff::Big(r) => r.is_integer(),
            Coeff::Mod(..) => true,
        }
    }

    pub fn add(&self, o: &Coeff) -> Coeff {
        match (self, o) {
            (Coeff::Small(a, b), Coeff::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    if let Some(s) = a.checked_add(*c) {
                        if s != i64::MIN {
                            return Coeff::Small(s, 1);
                        }
                    }
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                Coeff::from_i128(a * d + c * b, b * d)
            }
            (Coeff::Mod(a, p), Coeff::Mod(b, q)) => {
                debug_assert_eq!(p, q);
                Coeff::Mod((a + b) % p, *p)
            }
            (Coeff::Mod(..), _) | (_, Coeff::Mod(..)) => panic!("mixed coefficient fields"),
            _ => Coeff::from_big(self.to_big_rational() + o.to_big_rational()),
        }
    }

    pub fn neg(&self) -> Coeff {
        match self {
            Coeff::Small(a, b) => Coeff::Small(-a, *b),
            Coeff::Big(r) => Coeff::from_big(-(**r).clone()),
            Coeff::Mod(v, p) => Coeff::Mod(if *v == 0 { 0 } else { p - v }, *p),
        }
    }

    pub fn sub(&self, o: &Coeff) -> Coeff {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Coeff) -> Coeff {
        match (self, o) {
            (Coeff::Small(a, b), Coeff::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    if let Some(s) = a.checked_mul(*c) {
                        if s != i64::MIN {
                            return Coeff::Small(s, 1);
                        }
                    }
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                // cross-cancel first so the products stay in range
                let g1 = a.gcd(&d).max(1);
                let g2 = c.gcd(&b).max(1);
                let n = (a / g1).checked_mul(c / g2);
                let m = (b / g2).checked_mul(d / g1);
                match (n, m) {
                    (Some(n), Some(m)) => Coeff::from_i128(n, m),
                    _ => Coeff::from_big(self.to_big_rational() * o.to_big_rational()),
                }
            }
            (Coeff::Mod(a, p), Coeff::Mod(b, q)) => {
                debug_assert_eq!(p, q);
                Coeff::Mod(((*a as u128 * *b as u128) % *p as u128) as u64, *p)
            }
            (Coeff::Mod(..), _) | (_, Coeff::Mod(..)) => panic!("mixed coefficient fields"),
            _ => Coeff::from_big(self.to_big_rational() * o.to_big_rational()),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Coeff {
        assert!(!self.is_zero(), "inverse of zero coefficient");
        match self {
            Coeff::Small(a, b) => {
                if *a < 0 {
                    Coeff::Small(-b, -a)
                } else {
                    Coeff::Small(*b, *a)
                }
            }
            Coeff::Big(r) => Coeff::from_big(r.recip()),
            Coeff::Mod(v, p) => Coeff::Mod(mod_pow(*v, p - 2, *p), *p),
        }
    }

    pub fn div(&self, o: &Coeff) -> Coeff {
        self.mul(&o.inv())
    }

    pub fn pow(&self, e: u32) -> Coeff {
        let mut acc = match self {
            Coeff::Mod(_, p) => Coeff::Mod(1, *p),
            _ => Coeff::Small(1, 1),
        };
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    r
}

impl PartialEq for Coeff {
    fn eq(&self, o: &Coeff) -> bool {
        match (self, o) {
            (Coeff::Small(a, b), Coeff::Small(c, d)) => a == c && b == d,
            (Coeff::Mod(a, p), Coeff::Mod(b, q)) => a == b && p == q,
            (Coeff::Mod(..), _) | (_, Coeff::Mod(..)) => false,
            _ => self.to_big_rational() == o.to_big_rational(),
        }
    }
}

impl Eq for Coeff {}

impl PartialOrd for Coeff {
    fn partial_cmp(&self, o: &Coeff) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Total order for deterministic tie-breaking only; not compatible with field structure.
impl Ord for Coeff {
    fn cmp(&self, o: &Coeff) -> Ordering {
        match (self, o) {
            (Coeff::Mod(a, _), Coeff::Mod(b, _)) => a.cmp(b),
            _ => self.to_big_rational().cmp(&o.to_big_rational()),
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Small(n, 1) => write!(f, "{n}"),
            Coeff::Small(n, d) => write!(f, "{n}/{d}"),
            Coeff::Big(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Coeff::Mod(v, _) => write!(f, "{v}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_overflow_promotes() {
        let a = Coeff::Small(i64::MAX, 1);
        let b = a.add(&a);
        assert!(matches!(b, Coeff::Big(_)));
        assert_eq!(b.sub(&a), a);
        let c = Coeff::Small(1, i64::MAX).mul(&Coeff::Small(1, 3));
        assert_eq!(c.mul(&Coeff::Small(3, 1)), Coeff::Small(1, i64::MAX));
    }

    #[test]
    fn prime_field() {
        let f = Field::from_characteristic(7).unwrap();
        let a = f.from_i64(-1);
        assert_eq!(a, Coeff::Mod(6, 7));
        assert!(a.mul(&a.inv()).is_one());
        assert!(Field::from_characteristic(8).is_err());
        let half = f.from_ratio(&BigInt::from(1), &BigInt::from(2)).unwrap();
        assert_eq!(half.mul(&f.from_i64(2)), f.one());
        assert!(f.from_ratio(&BigInt::from(1), &BigInt::from(14)).is_none());
    }

    #[test]
    fn rational_normalization() {
        let f = Field::Rational;
        let h = f.from_ratio(&BigInt::from(2), &BigInt::from(-4)).unwrap();
        assert_eq!(h, Coeff::Small(-1, 2));
        assert_eq!(h.to_string(), "-1/2");
        assert_eq!(h.inv(), Coeff::Small(-2, 1));
    }
}
