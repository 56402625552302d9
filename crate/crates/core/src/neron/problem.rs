use crate::algebra::Presentation;
use crate::error::{Error, Result};
use crate::groebner::GroebnerBasis;
use crate::ideal::DEFAULT_E_MAX;
use crate::jets::{JetPoint, JetRing};
use crate::poly::{Poly, RingRef};
use crate::smooth::DEFAULT_SUBSET_BOUND;

/// Default bound on `t` in the absorption step.
pub const DEFAULT_T_MAX: u32 = 10;
/// Default number of seeded linear combinations tried as parameter candidates.
pub const DEFAULT_COMBO_BUDGET: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeronConfig {
    pub seed: u64,
    pub subset_bound: usize,
    pub t_max: u32,
    pub e_max: u32,
    pub combo_budget: usize,
    /// Coefficients of candidate combinations are drawn from `-combo_range..=combo_range`.
    pub combo_range: i64,
}

impl Default for NeronConfig {
    fn default() -> Self {
        NeronConfig {
            seed: 0,
            subset_bound: DEFAULT_SUBSET_BOUND,
            t_max: DEFAULT_T_MAX,
            e_max: DEFAULT_E_MAX,
            combo_budget: DEFAULT_COMBO_BUDGET,
            combo_range: 2,
        }
    }
}

/// The input of the algorithm: `B = A[Y]/I` over `A = k[x]_(x)/J` and approximations
/// `y'` of `v(Y)` modulo `(x)^N`.
#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    pub algebra: Presentation,
    /// `y'_j` as polynomials of the base ring, one per algebra variable.
    pub approx: Vec<Poly>,
    pub bound: u32,
}

impl Problem {
    pub fn new(algebra: Presentation, approx: Vec<Poly>, bound: u32) -> Result<Problem> {
        if approx.len() != algebra.nalg() {
            return Err(Error::Dimension(format!(
                "{} images for {} algebra variables",
                approx.len(),
                algebra.nalg()
            )));
        }
        if bound == 0 {
            return Err(Error::Invalid("the bound N must be positive".into()));
        }
        let base = algebra.base_ring();
        let approx = approx.iter().map(|p| p.map_to(&base)).collect::<Result<Vec<_>>>()?;
        Ok(Problem { algebra, approx, bound })
    }

    pub fn base_ring(&self) -> RingRef {
        self.algebra.base_ring()
    }

    pub fn jet_ring(&self) -> JetRing {
        JetRing::new(&self.base_ring(), &self.algebra.base_ideal_in_base())
    }

    /// Images `x -> x`, `Y -> y'` for substitution into the base ring.
    pub fn point_images(&self) -> Vec<Poly> {
        let base = self.base_ring();
        let mut im: Vec<Poly> = (0..self.algebra.nbase).map(|i| Poly::var(&base, i)).collect();
        im.extend(self.approx.iter().cloned());
        im
    }

    /// `I(y')` reduced modulo `J + (x)^N`; all zero for a valid approximation.
    pub fn residuals(&self) -> Vec<Poly> {
        let base = self.base_ring();
        let jr = self.jet_ring();
        let im = self.point_images();
        self.algebra
            .relations
            .iter()
            .map(|g| jr.normalize(&g.substitute(&base, &im), self.bound))
            .collect()
    }

    pub fn check(&self) -> Result<()> {
        for (k, r) in self.residuals().iter().enumerate() {
            if !r.is_zero() {
                return Err(Error::Invalid(format!(
                    "relation {} does not vanish at the approximation modulo (x)^{}: residual {}",
                    k + 1,
                    self.bound,
                    r
                )));
            }
        }
        Ok(())
    }

    /// The jets of `v(Y)` as a point.
    pub fn jet_point(&self) -> JetPoint {
        let jr = self.jet_ring();
        let mut pt = JetPoint::default();
        for (name, y) in self.algebra.algebra_names().iter().zip(&self.approx) {
            pt.set(name, jr.jet(y, self.bound));
        }
        pt
    }

    /// Whether `I(y') = 0` holds exactly modulo `J`.
    pub fn exact(&self) -> bool {
        let base = self.base_ring();
        let gb = GroebnerBasis::new(&base, &self.algebra.base_ideal_in_base());
        let im = self.point_images();
        self.algebra.relations.iter().all(|g| gb.contains(&g.substitute(&base, &im)))
    }
}
