//! State variables and the masked state vector shared by all models.
//!
//! Every model lives in a slot of the fixed (y, w, f) layout: output,
//! wage share, financial fragility. Two-dimensional models leave their
//! unused slot inactive; inactive slots are pinned to exactly zero and
//! never read by the model's vector field.

use crate::error::{Error, Result};
use serde::Serialize;
use std::fmt;

/// A state variable of the business-cycle models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    /// Output of the economy.
    Y,
    /// Wage share of output.
    W,
    /// Financial fragility (debt-to-income ratio of firms).
    F,
}

impl Var {
    /// All variables in the canonical (y, w, f) order.
    pub const ALL: [Var; 3] = [Var::Y, Var::W, Var::F];

    /// Slot of this variable in the canonical layout.
    pub fn index(self) -> usize {
        match self {
            Var::Y => 0,
            Var::W => 1,
            Var::F => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Var::Y => "y",
            Var::W => "w",
            Var::F => "f",
        }
    }

    pub fn from_label(label: &str) -> Option<Var> {
        match label {
            "y" => Some(Var::Y),
            "w" => Some(Var::W),
            "f" => Some(Var::F),
            _ => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Set of active variables, i.e. the dimension mask of a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VarSet(u8);

impl VarSet {
    /// (y, w) — the Goodwin model.
    pub const YW: VarSet = VarSet(0b011);
    /// (y, f) — the simple Minsky model.
    pub const YF: VarSet = VarSet(0b101);
    /// (y, w, f) — the three-dimensional models.
    pub const YWF: VarSet = VarSet(0b111);

    pub fn contains(self, v: Var) -> bool {
        self.0 & (1 << v.index()) != 0
    }

    /// Number of active variables (the model dimension).
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Active variables in canonical order.
    pub fn iter(self) -> impl Iterator<Item = Var> {
        Var::ALL.into_iter().filter(move |v| self.contains(*v))
    }

    pub fn labels(self) -> Vec<&'static str> {
        self.iter().map(Var::label).collect()
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.labels().join(","))
    }
}

/// A point in the nonnegative (y, w, f) orthant with a per-model mask.
///
/// Invariants enforced on construction: active components are finite and
/// ≥ 0; inactive components are exactly 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVec {
    vals: [f64; 3],
    mask: VarSet,
}

impl StateVec {
    pub fn new(vals: [f64; 3], mask: VarSet) -> Result<Self> {
        for v in Var::ALL {
            let x = vals[v.index()];
            if mask.contains(v) {
                if !x.is_finite() || x < 0.0 {
                    return Err(Error::InvalidStateComponent {
                        var: v.label(),
                        value: x,
                    });
                }
            } else if x != 0.0 {
                return Err(Error::InactiveNotZero {
                    var: v.label(),
                    value: x,
                });
            }
        }
        Ok(StateVec { vals, mask })
    }

    /// Build a state from labelled components; every active variable must be
    /// given exactly once and no inactive variable may appear.
    pub fn from_pairs(mask: VarSet, pairs: &[(Var, f64)]) -> Result<Self> {
        let mut vals = [0.0; 3];
        let mut seen = [false; 3];
        for &(v, x) in pairs {
            if !mask.contains(v) {
                return Err(Error::InactiveVariable(v.label()));
            }
            vals[v.index()] = x;
            seen[v.index()] = true;
        }
        for v in mask.iter() {
            if !seen[v.index()] {
                return Err(Error::InvalidStateComponent {
                    var: v.label(),
                    value: f64::NAN,
                });
            }
        }
        StateVec::new(vals, mask)
    }

    pub fn zeros(mask: VarSet) -> Self {
        StateVec {
            vals: [0.0; 3],
            mask,
        }
    }

    pub fn y(&self) -> f64 {
        self.vals[0]
    }

    pub fn w(&self) -> f64 {
        self.vals[1]
    }

    pub fn f(&self) -> f64 {
        self.vals[2]
    }

    pub fn get(&self, v: Var) -> f64 {
        self.vals[v.index()]
    }

    pub fn vals(&self) -> [f64; 3] {
        self.vals
    }

    pub fn mask(&self) -> VarSet {
        self.mask
    }

    /// True if every active component is strictly positive.
    pub fn is_interior(&self) -> bool {
        self.mask.iter().all(|v| self.get(v) > 0.0)
    }

    /// Euclidean distance to another state over the active components.
    pub fn distance(&self, other: &StateVec) -> f64 {
        self.mask
            .iter()
            .map(|v| (self.get(v) - other.get(v)).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn varset_masks() {
        assert_eq!(VarSet::YW.len(), 2);
        assert_eq!(VarSet::YF.len(), 2);
        assert_eq!(VarSet::YWF.len(), 3);
        assert!(VarSet::YW.contains(Var::Y) && VarSet::YW.contains(Var::W));
        assert!(!VarSet::YW.contains(Var::F));
        assert_eq!(VarSet::YF.labels(), vec!["y", "f"]);
    }

    #[test]
    fn statevec_rejects_negative_active() {
        let err = StateVec::new([0.5, -0.1, 0.0], VarSet::YW).unwrap_err();
        assert!(matches!(err, Error::InvalidStateComponent { var: "w", .. }));
    }

    #[test]
    fn statevec_rejects_nonzero_inactive() {
        let err = StateVec::new([0.5, 0.1, 0.3], VarSet::YW).unwrap_err();
        assert!(matches!(err, Error::InactiveNotZero { var: "f", .. }));
    }

    #[test]
    fn statevec_rejects_nonfinite() {
        assert!(StateVec::new([f64::NAN, 0.1, 0.0], VarSet::YW).is_err());
        assert!(StateVec::new([f64::INFINITY, 0.1, 0.0], VarSet::YW).is_err());
    }

    #[test]
    fn from_pairs_requires_full_cover() {
        let x = StateVec::from_pairs(VarSet::YW, &[(Var::Y, 0.6), (Var::W, 0.5)]).unwrap();
        assert_eq!(x.vals(), [0.6, 0.5, 0.0]);
        assert!(StateVec::from_pairs(VarSet::YW, &[(Var::Y, 0.6)]).is_err());
        assert!(
            StateVec::from_pairs(VarSet::YW, &[(Var::Y, 0.6), (Var::F, 0.5)]).is_err(),
            "inactive variable must be rejected"
        );
    }

    #[test]
    fn zero_components_allowed_on_boundary() {
        let x = StateVec::new([0.0, 1.0, 0.0], VarSet::YW).unwrap();
        assert!(!x.is_interior());
    }
}
