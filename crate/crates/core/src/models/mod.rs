//! The four concrete business-cycle models.
//!
//! All models are autonomous ODE systems on (a subset of) the nonnegative
//! (y, w, f) orthant in which every equation has the form xᵢ·(…), so the
//! coordinate axes are invariant:
//!
//! - Goodwin:             ẏ = y(1−w),        ẇ = w(−c+ry)
//! - Minsky:              ẏ = y(1−f),                            ḟ = f(−1+py)
//! - Minsky+reserve army: ẏ = y(1−f),        ẇ = w(−c+ry−w),     ḟ = f(−1+py)
//! - full wage-led:       ẏ = y(1−f+sw),     ẇ = w(−c+ry−w),     ḟ = f(−1+py)
//!
//! The module exposes the vector fields, hand-derived Jacobians with a
//! central-difference oracle, closed-form interior fixed points, the
//! Lotka-Volterra first integral of the two 2-D models, and the structural
//! coupling graph used for enslavement detection.

mod coupling;
mod state;

pub use coupling::{coupling_graph, CouplingEdge, CouplingGraph, EdgeSign};
pub use state::{StateVec, Var, VarSet};

use crate::error::{Error, Result};
use serde::Serialize;

/// 3×3 real matrix in row-major (y, w, f) order. Rows/columns of inactive
/// variables are zero-padded for the 2-D models.
pub type Matrix3 = [[f64; 3]; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Goodwin,
    Minsky,
    MinskyReserveArmy,
    FullWageLed,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Goodwin => "goodwin",
            ModelKind::Minsky => "minsky",
            ModelKind::MinskyReserveArmy => "minsky_reserve_army",
            ModelKind::FullWageLed => "full_wage_led",
        }
    }
}

/// Parameter record of one model. `r`, `c`, `p` are strictly positive;
/// the wage-led feedback strength `s` may take any sign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ModelParams {
    Goodwin { r: f64, c: f64 },
    Minsky { p: f64 },
    MinskyReserveArmy { p: f64, r: f64, c: f64 },
    FullWageLed { p: f64, r: f64, c: f64, s: f64 },
}

impl ModelParams {
    pub fn kind(&self) -> ModelKind {
        match self {
            ModelParams::Goodwin { .. } => ModelKind::Goodwin,
            ModelParams::Minsky { .. } => ModelKind::Minsky,
            ModelParams::MinskyReserveArmy { .. } => ModelKind::MinskyReserveArmy,
            ModelParams::FullWageLed { .. } => ModelKind::FullWageLed,
        }
    }

    /// Named parameter values in a fixed order, for reports and CSV.
    pub fn entries(&self) -> Vec<(&'static str, f64)> {
        match *self {
            ModelParams::Goodwin { r, c } => vec![("r", r), ("c", c)],
            ModelParams::Minsky { p } => vec![("p", p)],
            ModelParams::MinskyReserveArmy { p, r, c } => vec![("p", p), ("r", r), ("c", c)],
            ModelParams::FullWageLed { p, r, c, s } => {
                vec![("p", p), ("r", r), ("c", c), ("s", s)]
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let check_pos = |name: &'static str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::NonPositiveParameter { name, value: v })
            }
        };
        match *self {
            ModelParams::Goodwin { r, c } => {
                check_pos("r", r)?;
                check_pos("c", c)
            }
            ModelParams::Minsky { p } => check_pos("p", p),
            ModelParams::MinskyReserveArmy { p, r, c } => {
                check_pos("p", p)?;
                check_pos("r", r)?;
                check_pos("c", c)
            }
            ModelParams::FullWageLed { p, r, c, s } => {
                check_pos("p", p)?;
                check_pos("r", r)?;
                check_pos("c", c)?;
                if s.is_finite() {
                    Ok(())
                } else {
                    Err(Error::NonPositiveParameter {
                        name: "s",
                        value: s,
                    })
                }
            }
        }
    }
}

/// One concrete model: a kind, its parameters, and the active-variable mask.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelInstance {
    params: ModelParams,
}

impl ModelInstance {
    pub fn new(params: ModelParams) -> Result<Self> {
        params.validate()?;
        Ok(ModelInstance { params })
    }

    pub fn goodwin(r: f64, c: f64) -> Result<Self> {
        Self::new(ModelParams::Goodwin { r, c })
    }

    pub fn minsky(p: f64) -> Result<Self> {
        Self::new(ModelParams::Minsky { p })
    }

    pub fn minsky_reserve_army(p: f64, r: f64, c: f64) -> Result<Self> {
        Self::new(ModelParams::MinskyReserveArmy { p, r, c })
    }

    pub fn full_wage_led(p: f64, r: f64, c: f64, s: f64) -> Result<Self> {
        Self::new(ModelParams::FullWageLed { p, r, c, s })
    }

    pub fn kind(&self) -> ModelKind {
        self.params.kind()
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn mask(&self) -> VarSet {
        match self.kind() {
            ModelKind::Goodwin => VarSet::YW,
            ModelKind::Minsky => VarSet::YF,
            ModelKind::MinskyReserveArmy | ModelKind::FullWageLed => VarSet::YWF,
        }
    }

    pub fn dimension(&self) -> usize {
        self.mask().len()
    }

    pub fn variable_names(&self) -> Vec<&'static str> {
        self.mask().labels()
    }

    /// Build a state for this model from labelled components.
    pub fn state(&self, pairs: &[(Var, f64)]) -> Result<StateVec> {
        StateVec::from_pairs(self.mask(), pairs)
    }

    fn check_state(&self, x: &StateVec) -> Result<()> {
        if x.mask() == self.mask() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                state: x.mask().to_string(),
                model: self.mask().to_string(),
            })
        }
    }

    /// Vector field (ẏ, ẇ, ḟ) at `x`. Inactive components are 0.
    pub fn field(&self, x: &StateVec) -> Result<[f64; 3]> {
        self.check_state(x)?;
        Ok(self.field_raw(x.vals()))
    }

    /// Vector field on a raw triple, without state validation. Integrator
    /// stages and root searches may evaluate slightly outside the orthant.
    pub fn field_raw(&self, v: [f64; 3]) -> [f64; 3] {
        let [y, w, f] = v;
        match *self.params() {
            ModelParams::Goodwin { r, c } => [y * (1.0 - w), w * (r * y - c), 0.0],
            ModelParams::Minsky { p } => [y * (1.0 - f), 0.0, f * (p * y - 1.0)],
            ModelParams::MinskyReserveArmy { p, r, c } => {
                [y * (1.0 - f), w * (r * y - c - w), f * (p * y - 1.0)]
            }
            ModelParams::FullWageLed { p, r, c, s } => {
                [y * (1.0 - f + s * w), w * (r * y - c - w), f * (p * y - 1.0)]
            }
        }
    }

    /// Hand-derived Jacobian ∂fieldᵢ/∂xⱼ at `x`, zero-padded to 3×3.
    pub fn jacobian(&self, x: &StateVec) -> Result<Matrix3> {
        self.check_state(x)?;
        Ok(self.jacobian_raw(x.vals()))
    }

    pub fn jacobian_raw(&self, v: [f64; 3]) -> Matrix3 {
        let [y, w, f] = v;
        match *self.params() {
            ModelParams::Goodwin { r, c } => [
                [1.0 - w, -y, 0.0],
                [r * w, r * y - c, 0.0],
                [0.0, 0.0, 0.0],
            ],
            ModelParams::Minsky { p } => [
                [1.0 - f, 0.0, -y],
                [0.0, 0.0, 0.0],
                [p * f, 0.0, p * y - 1.0],
            ],
            ModelParams::MinskyReserveArmy { p, r, c } => [
                [1.0 - f, 0.0, -y],
                [r * w, r * y - c - 2.0 * w, 0.0],
                [p * f, 0.0, p * y - 1.0],
            ],
            ModelParams::FullWageLed { p, r, c, s } => [
                [1.0 - f + s * w, s * y, -y],
                [r * w, r * y - c - 2.0 * w, 0.0],
                [p * f, 0.0, p * y - 1.0],
            ],
        }
    }

    /// Central-difference Jacobian estimate, the oracle for [`Self::jacobian`].
    ///
    /// Requires every active component of `x` to exceed `h` so the stencil
    /// stays inside the orthant.
    pub fn jacobian_fd(&self, x: &StateVec, h: f64) -> Result<Matrix3> {
        self.check_state(x)?;
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::Domain(format!(
                "finite-difference step must be positive and finite, got {h}"
            )));
        }
        for v in self.mask().iter() {
            if x.get(v) <= h {
                return Err(Error::Domain(format!(
                    "state component {v} = {} is too close to the axis for stencil h = {h}",
                    x.get(v)
                )));
            }
        }
        let mut jac = [[0.0; 3]; 3];
        for vj in self.mask().iter() {
            let j = vj.index();
            let mut plus = x.vals();
            let mut minus = x.vals();
            plus[j] += h;
            minus[j] -= h;
            let fp = self.field_raw(plus);
            let fm = self.field_raw(minus);
            for vi in self.mask().iter() {
                let i = vi.index();
                jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        Ok(jac)
    }

    /// Closed-form interior fixed point, or `None` when some component of
    /// the algebraic solution is not strictly positive.
    ///
    /// goodwin → (c/r, 1); minsky → (1/p, 1); minsky+reserve-army →
    /// (1/p, r/p−c, 1); full → (1/p, r/p−c, rs/p−cs+1).
    pub fn interior_fixed_point(&self) -> Option<StateVec> {
        let (vals, mask) = match *self.params() {
            ModelParams::Goodwin { r, c } => ([c / r, 1.0, 0.0], VarSet::YW),
            ModelParams::Minsky { p } => ([1.0 / p, 0.0, 1.0], VarSet::YF),
            ModelParams::MinskyReserveArmy { p, r, c } => {
                ([1.0 / p, r / p - c, 1.0], VarSet::YWF)
            }
            ModelParams::FullWageLed { p, r, c, s } => {
                ([1.0 / p, r / p - c, r * s / p - c * s + 1.0], VarSet::YWF)
            }
        };
        for v in mask.iter() {
            if !(vals[v.index()] > 0.0) {
                return None;
            }
        }
        Some(StateVec::new(vals, mask).expect("positive components form a valid state"))
    }

    /// Lotka-Volterra first integral of the two 2-D models,
    /// V(y, z) = r·y − c·ln y + z − ln z with z = w (Goodwin) or z = f
    /// (Minsky, where (r, c) = (p, 1)). `None` for the 3-D models.
    pub fn conserved_quantity(&self, x: &StateVec) -> Result<Option<f64>> {
        self.check_state(x)?;
        let (r, c, z) = match *self.params() {
            ModelParams::Goodwin { r, c } => (r, c, x.w()),
            ModelParams::Minsky { p } => (p, 1.0, x.f()),
            _ => return Ok(None),
        };
        let y = x.y();
        if y <= 0.0 || z <= 0.0 {
            return Err(Error::Domain(format!(
                "conserved quantity is singular on the axes: state ({y}, {z})"
            )));
        }
        Ok(Some(r * y - c * y.ln() + z - z.ln()))
    }

    /// Structural coupling graph with the derived enslaved-variable set.
    pub fn coupling_graph(&self) -> CouplingGraph {
        coupling::coupling_graph(self)
    }
}
