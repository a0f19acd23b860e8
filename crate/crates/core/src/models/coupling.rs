//! Structural coupling graph of a model.
//!
//! An edge (a, b) exists iff ∂(ḃ)/∂a is not identically zero on the open
//! positive orthant. Edge signs are the sign of that partial where it is
//! constant over the orthant, otherwise state-dependent. A variable is
//! enslaved iff it has no outgoing edge to any *other* variable; self-loops
//! are recorded but ignored by enslavement detection, since a first-order
//! scalar equation cannot oscillate on its own.

use super::{ModelInstance, ModelParams, Var};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeSign {
    Positive,
    Negative,
    StateDependent,
}

/// Directed influence `from` → `to`, labelled with the coupling term of the
/// target equation it stems from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingEdge {
    pub from: Var,
    pub to: Var,
    pub sign: EdgeSign,
    pub term: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CouplingGraph {
    pub nodes: Vec<Var>,
    pub edges: Vec<CouplingEdge>,
    pub enslaved: Vec<Var>,
}

impl CouplingGraph {
    pub fn has_edge(&self, from: Var, to: Var) -> bool {
        self.edges.iter().any(|e| e.from == from && e.to == to)
    }

    pub fn edge_sign(&self, from: Var, to: Var) -> Option<EdgeSign> {
        self.edges
            .iter()
            .find(|e| e.from == from && e.to == to)
            .map(|e| e.sign)
    }

    /// Edges between distinct variables.
    pub fn cross_edges(&self) -> impl Iterator<Item = &CouplingEdge> {
        self.edges.iter().filter(|e| e.from != e.to)
    }

    pub fn is_enslaved(&self, v: Var) -> bool {
        self.enslaved.contains(&v)
    }
}

fn edge(from: Var, to: Var, sign: EdgeSign, term: &'static str) -> CouplingEdge {
    CouplingEdge {
        from,
        to,
        sign,
        term,
    }
}

pub fn coupling_graph(model: &ModelInstance) -> CouplingGraph {
    use EdgeSign::*;
    use Var::*;

    let mut edges = match *model.params() {
        ModelParams::Goodwin { .. } => vec![
            edge(Y, Y, StateDependent, "y(1-w)"),
            edge(W, Y, Negative, "-yw"),
            edge(Y, W, Positive, "+ryw"),
            edge(W, W, StateDependent, "w(-c+ry)"),
        ],
        ModelParams::Minsky { .. } => vec![
            edge(Y, Y, StateDependent, "y(1-f)"),
            edge(F, Y, Negative, "-yf"),
            edge(Y, F, Positive, "+pyf"),
            edge(F, F, StateDependent, "f(-1+py)"),
        ],
        ModelParams::MinskyReserveArmy { .. } => vec![
            edge(Y, Y, StateDependent, "y(1-f)"),
            edge(F, Y, Negative, "-yf"),
            edge(Y, W, Positive, "+ryw"),
            edge(W, W, StateDependent, "w(-c+ry-w)"),
            edge(Y, F, Positive, "+pyf"),
            edge(F, F, StateDependent, "f(-1+py)"),
        ],
        ModelParams::FullWageLed { s, .. } => {
            let mut es = vec![
                edge(Y, Y, StateDependent, "y(1-f+sw)"),
                edge(F, Y, Negative, "-yf"),
                edge(Y, W, Positive, "+ryw"),
                edge(W, W, StateDependent, "w(-c+ry-w)"),
                edge(Y, F, Positive, "+pyf"),
                edge(F, F, StateDependent, "f(-1+py)"),
            ];
            // ∂ẏ/∂w = s·y vanishes identically only at s = 0
            if s > 0.0 {
                es.push(edge(W, Y, Positive, "+syw"));
            } else if s < 0.0 {
                es.push(edge(W, Y, Negative, "+syw"));
            }
            es
        }
    };
    edges.sort_by_key(|e| (e.to.index(), e.from.index()));

    let nodes: Vec<Var> = model.mask().iter().collect();
    let enslaved = nodes
        .iter()
        .copied()
        .filter(|&v| !edges.iter().any(|e| e.from == v && e.to != v))
        .collect();

    CouplingGraph {
        nodes,
        edges,
        enslaved,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::ModelInstance;
    use Var::*;

    #[test]
    fn goodwin_graph() {
        let g = ModelInstance::goodwin(1.0, 1.0).unwrap().coupling_graph();
        assert_eq!(g.nodes, vec![Y, W]);
        assert_eq!(g.edge_sign(Y, W), Some(EdgeSign::Positive));
        assert_eq!(g.edge_sign(W, Y), Some(EdgeSign::Negative));
        assert!(g.enslaved.is_empty());
    }

    #[test]
    fn minsky_graph_mirrors_goodwin() {
        let g = ModelInstance::minsky(1.0).unwrap().coupling_graph();
        assert_eq!(g.nodes, vec![Y, F]);
        assert_eq!(g.edge_sign(Y, F), Some(EdgeSign::Positive));
        assert_eq!(g.edge_sign(F, Y), Some(EdgeSign::Negative));
        assert!(g.enslaved.is_empty());
    }

    #[test]
    fn wage_share_enslaved_without_feedback() {
        // s = 0: no w->y, no w->f; w is enslaved
        let g = ModelInstance::full_wage_led(2.0, 5.0, 1.5, 0.0)
            .unwrap()
            .coupling_graph();
        assert!(!g.has_edge(W, Y));
        assert!(!g.has_edge(W, F));
        assert_eq!(g.enslaved, vec![W]);

        let g = ModelInstance::minsky_reserve_army(2.0, 5.0, 1.5)
            .unwrap()
            .coupling_graph();
        assert_eq!(g.enslaved, vec![W]);
    }

    #[test]
    fn wage_led_feedback_breaks_enslavement() {
        let g = ModelInstance::full_wage_led(1.0, 1.0, 1.0, 1.0)
            .unwrap()
            .coupling_graph();
        assert_eq!(g.edge_sign(W, Y), Some(EdgeSign::Positive));
        assert!(g.enslaved.is_empty());

        let g = ModelInstance::full_wage_led(1.0, 1.0, 1.0, -0.5)
            .unwrap()
            .coupling_graph();
        assert_eq!(g.edge_sign(W, Y), Some(EdgeSign::Negative));
        assert!(g.enslaved.is_empty());
    }

    #[test]
    fn self_loops_recorded_but_ignored() {
        let g = ModelInstance::goodwin(1.0, 1.0).unwrap().coupling_graph();
        assert!(g.has_edge(Y, Y));
        assert!(g.has_edge(W, W));
        assert_eq!(g.cross_edges().count(), 2);
    }
}
