mod common;

use common::{p, ring};
use neron_core::jets::{hensel_lift, JetPoint, JetRing, JetSeries};
use neron_core::{Field, Monomial};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

type Series = Vec<BigRational>;

fn mul(a: &Series, b: &Series, n: usize) -> Series {
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j < n {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn inv(a: &Series, n: usize) -> Series {
    let mut out = vec![BigRational::zero(); n];
    out[0] = a[0].recip();
    for k in 1..n {
        let mut s = BigRational::zero();
        for j in 1..=k {
            if j < a.len() {
                s += &a[j] * &out[k - j];
            }
        }
        out[k] = -s * &out[0];
    }
    out
}

/// Scalar Newton for `y^2 = 1 + x` on series truncated at degree `n`.
fn newton_sqrt(n: usize) -> Series {
    let mut rhs = vec![BigRational::zero(); n];
    rhs[0] = BigRational::one();
    if n > 1 {
        rhs[1] = BigRational::one();
    }
    let mut y = vec![BigRational::zero(); n];
    y[0] = BigRational::one();
    for _ in 0..8 {
        let f: Series = mul(&y, &y, n).iter().zip(&rhs).map(|(a, b)| a - b).collect();
        let two_y: Series = y.iter().map(|c| c * BigRational::from_integer(BigInt::from(2))).collect();
        let step = mul(&f, &inv(&two_y, n), n);
        y = y.iter().zip(&step).map(|(a, b)| a - b).collect();
    }
    y
}

#[test]
fn sqrt_lift_matches_scalar_newton() {
    let base = ring(Field::Rational, &["x1", "x2"]);
    let amb = ring(Field::Rational, &["x1", "x2", "Y"]);
    let jr = JetRing::new(&base, &[]);
    let mut pt = JetPoint::default();
    pt.set("Y", JetSeries { rep: p(&base, "1"), prec: 1 });
    let out = hensel_lift(&jr, &[p(&amb, "Y^2 - (1 + x1)")], &pt, &["Y".to_string()], 8).unwrap();
    let y = out.point.get("Y").unwrap();
    assert_eq!(y.prec, 8);
    let oracle = newton_sqrt(8);
    for (k, want) in oracle.iter().enumerate() {
        let m = Monomial::from_exps(vec![k as u32, 0]);
        assert_eq!(y.rep.coeff_of(&m).to_big_rational(), *want, "coefficient of x1^{k}");
    }
    // nothing outside k[x1] and below degree 8
    assert!(y.rep.terms().iter().all(|(m, _)| m.exp(1) == 0 && m.deg() < 8));
    // quadratic convergence: the residual order at least doubles per sweep
    let orders = &out.residual_orders;
    assert_eq!(orders.first(), Some(&1));
    assert_eq!(orders.last(), Some(&8));
    for w in orders.windows(2) {
        assert!(w[1] >= (2 * w[0]).min(8), "{orders:?}");
    }
}

#[test]
fn lift_in_a_quotient_base() {
    // A = Q[x1, x2]/(x2^2 - x1^3): lift Y^2 = 1 + x2
    let base = ring(Field::Rational, &["x1", "x2"]);
    let amb = ring(Field::Rational, &["x1", "x2", "Y"]);
    let jr = JetRing::new(&base, &[p(&base, "x2^2 - x1^3")]);
    let mut pt = JetPoint::default();
    pt.set("Y", JetSeries { rep: p(&base, "1"), prec: 1 });
    let f = p(&amb, "Y^2 - 1 - x2");
    let out = hensel_lift(&jr, &[f.clone()], &pt, &["Y".to_string()], 7).unwrap();
    let v = jr.eval(&f, &out.point, 7).unwrap();
    assert!(v.rep.is_zero());
}
