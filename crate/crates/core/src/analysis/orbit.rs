//! Orbit-level diagnostics: orientation, amplitude trends, and the
//! Goodwin / pseudo-Goodwin cycle classification.

use crate::error::{Error, Result};
use crate::integrate::{Direction, Termination, Trajectory};
use crate::models::{ModelInstance, Var};
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Counterclockwise,
    Clockwise,
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Growing,
    Damped,
    Steady,
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleClass {
    GoodwinCycle,
    PseudoGoodwinCycle,
    DampedOscillation,
    OutwardSpiral,
    NoCycle,
}

/// Tunables of [`amplitude_trend_with`]; the defaults are the ±1% band and
/// a one-maximum transient discard.
#[derive(Debug, Clone, Copy)]
pub struct TrendConfig {
    pub band: f64,
    pub discard: usize,
}

impl Default for TrendConfig {
    fn default() -> Self {
        TrendConfig {
            band: 0.01,
            discard: 1,
        }
    }
}

/// Orientation of the orbit's projection onto `plane`, from the sign of the
/// accumulated signed area about the orbit centroid. Undetermined unless
/// the projection winds at least one full revolution around its mean.
pub fn orbit_orientation(traj: &Trajectory, plane: (Var, Var)) -> Result<Orientation> {
    let a = traj.series(plane.0)?;
    let b = traj.series(plane.1)?;
    let n = a.len();
    if n < 3 {
        return Ok(Orientation::Undetermined);
    }
    let ca = a.iter().sum::<f64>() / n as f64;
    let cb = b.iter().sum::<f64>() / n as f64;

    let radius = a
        .iter()
        .zip(&b)
        .map(|(&x, &y)| ((x - ca).powi(2) + (y - cb).powi(2)).sqrt())
        .fold(0.0f64, f64::max);
    if radius < 1e-9 * (1.0 + ca.abs() + cb.abs()) {
        return Ok(Orientation::Undetermined);
    }

    let mut winding = 0.0;
    let mut prev = (b[0] - cb).atan2(a[0] - ca);
    for k in 1..n {
        let theta = (b[k] - cb).atan2(a[k] - ca);
        let mut d = theta - prev;
        if d > PI {
            d -= 2.0 * PI;
        } else if d < -PI {
            d += 2.0 * PI;
        }
        winding += d;
        prev = theta;
    }
    if winding.abs() < 0.99 * 2.0 * PI {
        return Ok(Orientation::Undetermined);
    }

    let mut area2 = 0.0;
    for k in 0..n - 1 {
        area2 += (a[k] - ca) * (b[k + 1] - cb) - (a[k + 1] - ca) * (b[k] - cb);
    }
    Ok(if area2 > 0.0 {
        Orientation::Counterclockwise
    } else if area2 < 0.0 {
        Orientation::Clockwise
    } else {
        Orientation::Undetermined
    })
}

/// Amplitude trend of one variable with the default band and discard.
pub fn amplitude_trend(traj: &Trajectory, var: Var) -> Result<Trend> {
    amplitude_trend_with(traj, var, &TrendConfig::default())
}

/// Trend of the oscillation amplitude of `var`: successive local maxima of
/// the deviation from the variable's equilibrium value (the interior fixed
/// point when the model has one, 0 otherwise) are located with quadratic
/// refinement; after discarding the leading transient maxima, the geometric
/// mean ratio of consecutive maxima decides growing/damped/steady.
pub fn amplitude_trend_with(traj: &Trajectory, var: Var, cfg: &TrendConfig) -> Result<Trend> {
    let series = traj.series(var)?;
    let reference = traj
        .model
        .interior_fixed_point()
        .map_or(0.0, |fp| fp.get(var));
    let dev: Vec<f64> = series.iter().map(|x| x - reference).collect();

    let mut maxima = Vec::new();
    for k in 1..dev.len().saturating_sub(1) {
        if dev[k] > dev[k - 1] && dev[k] >= dev[k + 1] {
            maxima.push(refine_peak(dev[k - 1], dev[k], dev[k + 1]));
        }
    }
    if maxima.len() < 3 {
        return Ok(Trend::Undetermined);
    }
    let retained = &maxima[cfg.discard.min(maxima.len() - 2)..];
    if retained.len() < 2 || retained.iter().any(|&m| m <= 0.0) {
        return Ok(Trend::Undetermined);
    }

    let log_ratio: f64 = retained
        .windows(2)
        .map(|w| (w[1] / w[0]).ln())
        .sum::<f64>()
        / (retained.len() - 1) as f64;
    let rho = log_ratio.exp();

    Ok(if rho > 1.0 + cfg.band {
        Trend::Growing
    } else if rho < 1.0 - cfg.band {
        Trend::Damped
    } else {
        Trend::Steady
    })
}

/// Peak value of the parabola through three equally spaced samples.
fn refine_peak(a: f64, b: f64, c: f64) -> f64 {
    let denom = a - 2.0 * b + c;
    if denom.abs() > 1e-300 {
        b - (c - a) * (c - a) / (8.0 * denom)
    } else {
        b
    }
}

/// Full cycle report for one trajectory.
#[derive(Debug, Clone)]
pub struct CycleReport {
    pub orientation: Orientation,
    pub trends: Vec<(Var, Trend)>,
    pub period_estimate: Option<f64>,
    pub enslaved: Vec<Var>,
    pub classification: CycleClass,
}

impl CycleReport {
    pub fn trend(&self, var: Var) -> Option<Trend> {
        self.trends.iter().find(|(v, _)| *v == var).map(|(_, t)| *t)
    }
}

/// Classify an orbit as Goodwin cycle, pseudo-Goodwin cycle, damped
/// oscillation, outward spiral, or no cycle.
///
/// The cycle plane is (y, w) when the wage share is active, (y, f) for the
/// 2-D Minsky model. A closed orbit is operationalized as steady amplitude
/// trends plus a consistent Poincaré return (return distance below 1e−3 of
/// the orbit diameter). Enslavement of the plane's second variable
/// separates pseudo-Goodwin from Goodwin cycles.
pub fn classify_cycle(model: &ModelInstance, traj: &Trajectory) -> Result<CycleReport> {
    if model.params() != traj.model.params() {
        return Err(Error::Domain(
            "model passed to classify_cycle differs from the trajectory's model".into(),
        ));
    }
    let plane_b = if model.mask().contains(Var::W) {
        Var::W
    } else {
        Var::F
    };
    let orientation = orbit_orientation(traj, (Var::Y, plane_b))?;

    let mut trends = Vec::new();
    for v in model.mask().iter() {
        trends.push((v, amplitude_trend(traj, v)?));
    }
    let trend_of = |v: Var| trends.iter().find(|(x, _)| *x == v).unwrap().1;
    let trend_y = trend_of(Var::Y);
    let trend_b = trend_of(plane_b);

    let graph = model.coupling_graph();
    let enslaved = graph.enslaved.clone();

    // period and return consistency from an upward section through the
    // y-mean
    let y_series = traj.series(Var::Y)?;
    let y_mean = y_series.iter().sum::<f64>() / y_series.len() as f64;
    let crossings = traj.poincare_crossings(Var::Y, y_mean, Direction::Up)?;
    let period_estimate = if crossings.len() >= 2 {
        let mut spacings: Vec<f64> = crossings.windows(2).map(|w| w[1].0 - w[0].0).collect();
        spacings.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Some(spacings[spacings.len() / 2])
    } else {
        None
    };
    let closed_return = if crossings.len() >= 2 {
        let diameter = orbit_diameter(traj);
        let (_, ref x_prev) = crossings[crossings.len() - 2];
        let (_, ref x_last) = crossings[crossings.len() - 1];
        diameter > 0.0 && x_prev.distance(x_last) < 1e-3 * diameter
    } else {
        false
    };

    let growing = trend_y == Trend::Growing || trend_b == Trend::Growing;
    let damped = trend_y == Trend::Damped || trend_b == Trend::Damped;

    let classification = if traj.terminated == Termination::Diverged {
        if growing {
            CycleClass::OutwardSpiral
        } else {
            CycleClass::NoCycle
        }
    } else if growing {
        CycleClass::OutwardSpiral
    } else if damped {
        CycleClass::DampedOscillation
    } else if orientation == Orientation::Undetermined {
        CycleClass::NoCycle
    } else if trend_y == Trend::Steady
        && trend_b == Trend::Steady
        && orientation == Orientation::Counterclockwise
        && closed_return
    {
        if enslaved.contains(&plane_b) {
            CycleClass::PseudoGoodwinCycle
        } else if graph.has_edge(plane_b, Var::Y) && graph.has_edge(Var::Y, plane_b) {
            CycleClass::GoodwinCycle
        } else {
            CycleClass::NoCycle
        }
    } else {
        CycleClass::NoCycle
    };

    Ok(CycleReport {
        orientation,
        trends,
        period_estimate,
        enslaved,
        classification,
    })
}

fn orbit_diameter(traj: &Trajectory) -> f64 {
    let mut sum = 0.0;
    for v in traj.model.mask().iter() {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for x in &traj.states {
            let val = x.get(v);
            lo = lo.min(val);
            hi = hi.max(val);
        }
        sum += (hi - lo).powi(2);
    }
    sum.sqrt()
}
