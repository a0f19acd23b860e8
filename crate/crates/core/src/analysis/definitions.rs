//! Numerical verification of the defining sign conditions: profit-led and
//! wage-led demand, reserve army, profit squeeze, Minsky effect, and the
//! inverse output-fragility relationship.
//!
//! A definition "holds" when its sign condition is satisfied at every point
//! of a uniform grid over the requested region; the first violation is
//! returned as a reproducible witness. Implication-form definitions
//! (reserve army, profit squeeze) are tested only on the sub-grid that
//! satisfies their hypothesis, with thresholds from the model catalog.

use crate::error::{Error, Result};
use crate::models::{ModelInstance, ModelKind, ModelParams, StateVec, Var};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Definition {
    /// ∂ẏ/∂w < 0: demand falls with the wage share.
    ProfitLed,
    /// y > κ ⟹ ẇ > 0: high output strengthens labour's bargaining power.
    ReserveArmy,
    /// w > ω ⟹ ẏ < 0: a high wage share squeezes output growth.
    ProfitSqueeze,
    /// ∂ḟ/∂y > 0: fragility accumulates faster in booms.
    MinskyEffect,
    /// ∂ẏ/∂f < 0: output growth falls with fragility.
    InverseOutputFragility,
    /// ∂ẏ/∂w > 0: demand rises with the wage share.
    WageLed,
}

impl Definition {
    pub const ALL: [Definition; 6] = [
        Definition::ProfitLed,
        Definition::ReserveArmy,
        Definition::ProfitSqueeze,
        Definition::MinskyEffect,
        Definition::InverseOutputFragility,
        Definition::WageLed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Definition::ProfitLed => "profit_led",
            Definition::ReserveArmy => "reserve_army",
            Definition::ProfitSqueeze => "profit_squeeze",
            Definition::MinskyEffect => "minsky_effect",
            Definition::InverseOutputFragility => "inverse_output_fragility",
            Definition::WageLed => "wage_led",
        }
    }

    pub fn from_name(name: &str) -> Option<Definition> {
        let canon = name.replace('-', "_");
        Definition::ALL.into_iter().find(|d| d.name() == canon)
    }
}

/// Hypothesis threshold of an implication-form definition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum Threshold {
    Constant(f64),
    /// κ(w) = (c+w)/r for the models with the −w² wage damping term.
    WageDependent,
}

/// A grid point violating the definition, with the offending field or
/// partial-derivative value.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub point: StateVec,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DefinitionReport {
    pub definition: Definition,
    pub holds: bool,
    pub witness: Option<Witness>,
    pub region: Vec<(Var, f64, f64)>,
    pub grid_density: usize,
    pub threshold: Option<Threshold>,
}

enum Condition {
    /// Sign test on a Jacobian entry; `positive` is the required sign.
    Partial { row: usize, col: usize, positive: bool },
    /// Sign test on a field component on the hypothesis sub-grid.
    Implication {
        component: usize,
        positive: bool,
        threshold: Threshold,
        hypothesis_var: Var,
    },
}

fn catalog(model: &ModelInstance, def: Definition) -> Result<Condition> {
    use ModelKind::*;
    let kind = model.kind();
    let inapplicable = || Error::InapplicableDefinition {
        definition: def.name(),
        model: kind.name(),
    };
    let w_active = model.mask().contains(Var::W);
    let f_active = model.mask().contains(Var::F);

    match def {
        Definition::ProfitLed | Definition::WageLed => {
            if !w_active {
                return Err(inapplicable());
            }
            Ok(Condition::Partial {
                row: 0,
                col: 1,
                positive: def == Definition::WageLed,
            })
        }
        Definition::InverseOutputFragility => {
            if !f_active {
                return Err(inapplicable());
            }
            Ok(Condition::Partial {
                row: 0,
                col: 2,
                positive: false,
            })
        }
        Definition::MinskyEffect => {
            if !f_active {
                return Err(inapplicable());
            }
            Ok(Condition::Partial {
                row: 2,
                col: 0,
                positive: true,
            })
        }
        Definition::ReserveArmy => {
            let threshold = match *model.params() {
                ModelParams::Goodwin { r, c } => Threshold::Constant(c / r),
                ModelParams::MinskyReserveArmy { .. } | ModelParams::FullWageLed { .. } => {
                    Threshold::WageDependent
                }
                ModelParams::Minsky { .. } => return Err(inapplicable()),
            };
            Ok(Condition::Implication {
                component: 1,
                positive: true,
                threshold,
                hypothesis_var: Var::Y,
            })
        }
        Definition::ProfitSqueeze => match kind {
            Goodwin => Ok(Condition::Implication {
                component: 0,
                positive: false,
                threshold: Threshold::Constant(1.0),
                hypothesis_var: Var::W,
            }),
            _ => Err(inapplicable()),
        },
    }
}

/// Evaluate `def` on a uniform grid over `region` (per-axis bounds for the
/// model's active variables) at `density` points per axis.
pub fn check_definition(
    model: &ModelInstance,
    def: Definition,
    region: &[(Var, f64, f64)],
    density: usize,
) -> Result<DefinitionReport> {
    let condition = catalog(model, def)?;

    if density < 2 {
        return Err(Error::Domain(format!(
            "grid density must be at least 2, got {density}"
        )));
    }
    let active: Vec<Var> = model.mask().iter().collect();
    let mut bounds = Vec::with_capacity(active.len());
    for &v in &active {
        let entry = region.iter().find(|(rv, _, _)| *rv == v).ok_or_else(|| {
            Error::Domain(format!("region is missing bounds for active variable {v}"))
        })?;
        let (_, lo, hi) = *entry;
        if !(lo.is_finite() && hi.is_finite()) || lo <= 0.0 || hi <= lo {
            return Err(Error::BadRegion {
                var: v.label(),
                lo,
                hi,
            });
        }
        bounds.push((v, lo, hi));
    }
    for (rv, _, _) in region {
        if !model.mask().contains(*rv) {
            return Err(Error::InactiveVariable(rv.label()));
        }
    }

    let threshold = match &condition {
        Condition::Implication { threshold, .. } => Some(*threshold),
        Condition::Partial { .. } => None,
    };

    let dims = bounds.len();
    let total = density.pow(dims as u32);
    let coord = |axis: usize, step_index: usize| {
        let (_, lo, hi) = bounds[axis];
        lo + step_index as f64 * (hi - lo) / (density - 1) as f64
    };

    let mut witness = None;
    'grid: for flat in 0..total {
        let mut rem = flat;
        let mut vals = [0.0; 3];
        for axis in (0..dims).rev() {
            let idx = rem % density;
            rem /= density;
            vals[bounds[axis].0.index()] = coord(axis, idx);
        }

        let violation = match condition {
            Condition::Partial { row, col, positive } => {
                let value = model.jacobian_raw(vals)[row][col];
                let ok = if positive { value > 0.0 } else { value < 0.0 };
                (!ok).then_some(value)
            }
            Condition::Implication {
                component,
                positive,
                threshold,
                hypothesis_var,
            } => {
                let cutoff = match threshold {
                    Threshold::Constant(k) => k,
                    Threshold::WageDependent => match *model.params() {
                        ModelParams::MinskyReserveArmy { r, c, .. }
                        | ModelParams::FullWageLed { r, c, .. } => (c + vals[1]) / r,
                        _ => unreachable!("wage-dependent threshold only on 3-D models"),
                    },
                };
                if vals[hypothesis_var.index()] <= cutoff {
                    None
                } else {
                    let value = model.field_raw(vals)[component];
                    let ok = if positive { value > 0.0 } else { value < 0.0 };
                    (!ok).then_some(value)
                }
            }
        };

        if let Some(value) = violation {
            let point = StateVec::new(vals, model.mask())
                .expect("grid points lie in the positive orthant");
            witness = Some(Witness { point, value });
            break 'grid;
        }
    }

    Ok(DefinitionReport {
        definition: def,
        holds: witness.is_none(),
        witness,
        region: bounds,
        grid_density: density,
        threshold,
    })
}
