//! Simulation and analysis toolkit for coupled ODE business-cycle models.
//!
//! The crate covers four Lotka-Volterra-type models of the business cycle —
//! the Goodwin output/wage-share cycle, a simple Minsky output/fragility
//! cycle, the Minsky model augmented with a reserve-army wage equation, and
//! the full wage-led variant with feedback strength `s` — together with the
//! machinery needed to study them:
//!
//! - [`models`]: vector fields, analytic Jacobians, closed-form interior
//!   fixed points, conserved quantities, and structural coupling graphs;
//! - [`integrate`]: positivity-preserving RK4 / Dormand-Prince 5(4)
//!   integration with dense output and Poincaré sections;
//! - [`analysis`]: Newton refinement, closed-form small-matrix eigenvalues,
//!   stability classification, parameter scans with Hopf detection, orbit
//!   orientation/amplitude analysis, cycle classification (Goodwin vs.
//!   pseudo-Goodwin), and numerical checks of the defining sign conditions
//!   (profit squeeze, reserve army, Minsky effect, ...).

pub mod analysis;
pub mod error;
pub mod integrate;
pub mod models;

pub use error::{Error, Result};
