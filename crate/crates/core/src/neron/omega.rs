//! Points of the stages in `A'`: the values `t = H(c) ε` of the `T` variables, the
//! Newton lift of the solved variables and the inverses of the units.

use log::debug;

use crate::algebra::Presentation;
use crate::error::{Error, Result};
use crate::jets::{hensel_lift, JetPoint, JetRing, JetSeries};
use crate::poly::Poly;

use super::stage::StageData;
use super::system::JacobianSystem;

#[derive(Clone, Debug, PartialEq)]
pub struct StageLift {
    pub point: JetPoint,
    pub residual_orders: Vec<u32>,
    /// Precision of the solved coordinates.
    pub prec: u32,
}

/// Evaluates a polynomial of `b.ring` at jets for its algebra variables.
fn eval_in_b(jr: &JetRing, b: &Presentation, p: &Poly, ys: &[JetSeries]) -> Result<JetSeries> {
    let mut pt = JetPoint::default();
    for (name, y) in b.algebra_names().iter().zip(ys) {
        pt.set(name, y.clone());
    }
    let cap = ys.iter().map(|y| y.prec).max().unwrap_or(0);
    jr.eval(p, &pt, cap)
}

/// Builds the point of one stage: `Y -> y`, `T_i -> H_i(c) ε` with
/// `y - c = d^2 ε`, then Newton on `(h, g)` for `Y` and the shared `T`, and finally the
/// inverse variable. `frozen` holds the values of earlier variables.
pub fn lift_stage(
    jr: &JetRing,
    b: &Presentation,
    sys: &JacobianSystem,
    stage: &StageData,
    y: &[JetSeries],
    centers: &[JetSeries],
    frozen: &JetPoint,
    step: u32,
) -> Result<StageLift> {
    let ring = stage.h[0].ring().clone();
    let n = stage.layout.n;
    let d = jr.jet(&sys.d.map_to(jr.base())?, y.iter().map(|v| v.prec).max().unwrap_or(1));
    let d2 = jr.mul(&d, &d);
    let eps: Vec<JetSeries> = y
        .iter()
        .zip(centers)
        .map(|(a, c)| jr.divide(&jr.sub(a, c), &d2))
        .collect::<Result<_>>()
        .map_err(|e| Error::step(step, format!("y - c is not divisible by d^2 at the available precision: {e}")))?;
    let mut pt = frozen.clone();
    for (j, v) in stage.unknowns.iter().enumerate() {
        pt.set(ring.var_name(*v), y[j].clone());
    }
    let completed = sys.completed(b)?;
    for (i, (hm, _)) in completed.iter().enumerate() {
        for k in 0..n {
            let mut acc: Option<JetSeries> = None;
            for j in 0..n {
                let e = hm.get(k, j);
                if e.is_zero() {
                    continue;
                }
                let term = jr.mul(&eval_in_b(jr, b, e, centers)?, &eps[j]);
                acc = Some(match acc {
                    None => term,
                    Some(a) => jr.add(&a, &term),
                });
            }
            let prec = eps.iter().map(|e| e.prec).min().unwrap_or(0);
            let val = acc.unwrap_or_else(|| jr.jet(&Poly::zero(jr.base()), prec));
            let name = ring.var_name(stage.layout.vars[i][k]).to_string();
            if let Some(prev) = pt.get(&name) {
                if k < stage.layout.r && frozen.get(&name).is_none() && jr.sub(prev, &val).rep != Poly::zero(jr.base()) {
                    return Err(Error::step(step, format!("shared slot {name} gets different values")));
                }
            }
            pt.set(&name, val);
        }
    }
    let mut system = stage.h.clone();
    system.extend(stage.g.iter().cloned());
    let mut unknowns: Vec<String> = stage.unknowns.iter().map(|v| ring.var_name(*v).to_string()).collect();
    unknowns.extend(stage.layout.shared().iter().map(|v| ring.var_name(*v).to_string()));
    let mut target = u32::MAX;
    for p in &system {
        for v in p.support() {
            let name = ring.var_name(v);
            if let Some(j) = pt.get(name) {
                target = target.min(j.prec);
            }
        }
    }
    if target == 0 || target == u32::MAX {
        return Err(Error::step(step, "no precision left for the Newton lift; increase the bound"));
    }
    let out = hensel_lift(jr, &system, &pt, &unknowns, target).map_err(|e| Error::step(step, e.to_string()))?;
    let mut pt = out.point;
    let u = jr.eval(&stage.unit, &pt, target)?;
    let w = jr.inverse(&u).map_err(|e| Error::step(step, format!("the unit s s' s'' is not invertible at the point: {e}")))?;
    pt.set(ring.var_name(stage.w), w);
    debug!("stage lift: precision {}, residual orders {:?}", target, out.residual_orders);
    Ok(StageLift { point: pt, residual_orders: out.residual_orders, prec: target })
}
