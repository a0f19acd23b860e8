//! Orbit integration with positivity-preserving step control.
//!
//! Two steppers are available: classical fixed-step RK4 and an adaptive
//! Dormand-Prince 5(4) embedded pair. Both reject any proposed step that
//! would push an active component negative and retry at half the step, down
//! to a floor of 1e−12 (then the run terminates `SteppedToAxis`). States
//! above the divergence guard terminate the run cleanly as `Diverged`.
//!
//! Output is sampled on a uniform `dt_out` grid by cubic Hermite
//! interpolation between accepted steps, so the integrator can take its
//! natural step sizes; the final sample lands exactly on `t_end`.

mod dense;
mod steppers;

pub use dense::Direction;

use crate::error::{Error, Result};
use crate::models::{ModelInstance, StateVec, Var};
use serde::Serialize;

/// Smallest step the positivity/overflow retry loop will attempt.
const MIN_STEP: f64 = 1e-12;
/// Slack used when matching accumulated step times against the output grid.
const GRID_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Rk4Fixed,
    Rk45Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegratorConfig {
    pub method: Method,
    /// Fixed step for RK4, initial step for the adaptive method.
    pub dt: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Output sampling interval.
    pub dt_out: f64,
    /// Divergence guard: the orbit aborts cleanly above this value.
    pub max_state: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            method: Method::Rk45Adaptive,
            dt: 0.01,
            rel_tol: 1e-10,
            abs_tol: 1e-10,
            dt_out: 0.01,
            max_state: 1e6,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        let pos = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!("{name} must be positive, got {v}")))
            }
        };
        pos("dt", self.dt)?;
        pos("rel_tol", self.rel_tol)?;
        pos("abs_tol", self.abs_tol)?;
        pos("dt_out", self.dt_out)?;
        pos("max_state", self.max_state)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Completed,
    Diverged,
    SteppedToAxis,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct StepStats {
    pub accepted: u64,
    pub rejected_error: u64,
    pub rejected_positivity: u64,
}

/// Time-stamped orbit samples on the uniform output grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub model: ModelInstance,
    pub times: Vec<f64>,
    pub states: Vec<StateVec>,
    pub terminated: Termination,
    pub stats: StepStats,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn t_end(&self) -> f64 {
        *self.times.last().expect("trajectory has at least one sample")
    }

    pub fn last_state(&self) -> &StateVec {
        self.states.last().expect("trajectory has at least one sample")
    }

    /// Stored samples of one variable.
    pub fn series(&self, var: Var) -> Result<Vec<f64>> {
        if !self.model.mask().contains(var) {
            return Err(Error::InactiveVariable(var.label()));
        }
        Ok(self.states.iter().map(|x| x.get(var)).collect())
    }

    /// Cubic Hermite interpolation between the stored grid points, using
    /// field-evaluated derivatives at the bracketing samples.
    pub fn sample_dense(&self, t: f64) -> Result<StateVec> {
        dense::sample_dense(self, t)
    }

    /// Times and states where `var` crosses `level` in the given direction,
    /// refined on the dense output to 1e−9 in time.
    pub fn poincare_crossings(
        &self,
        var: Var,
        level: f64,
        direction: Direction,
    ) -> Result<Vec<(f64, StateVec)>> {
        dense::poincare_crossings(self, var, level, direction)
    }
}

/// Integrate `model` from `x0` over [0, t_end], sampling every `dt_out`.
pub fn integrate(
    model: &ModelInstance,
    x0: &StateVec,
    t_end: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    if x0.mask() != model.mask() {
        return Err(Error::DimensionMismatch {
            state: x0.mask().to_string(),
            model: model.mask().to_string(),
        });
    }
    if !t_end.is_finite() || t_end < 0.0 {
        return Err(Error::InvalidConfig(format!(
            "t_end must be finite and nonnegative, got {t_end}"
        )));
    }

    let mask = model.mask();
    let active: Vec<usize> = mask.iter().map(|v| v.index()).collect();
    let adaptive = cfg.method == Method::Rk45Adaptive;

    let mut times = vec![0.0];
    let mut states = vec![*x0];
    let mut stats = StepStats::default();

    let mut t = 0.0;
    let mut x = x0.vals();
    let mut h = cfg.dt;
    let mut out_idx: u64 = 1;

    let mut terminated = None;

    'outer: while t < t_end && terminated.is_none() {
        let k1 = model.field_raw(x);
        loop {
            let remaining = t_end - t;
            let h_try = h.min(remaining);
            let reach_end = h_try >= remaining - GRID_EPS * remaining.abs().max(1.0);

            let (x_new, err_norm, f_new) = match cfg.method {
                Method::Rk4Fixed => {
                    let xn = steppers::rk4_step(model, x, k1, h_try);
                    (xn, 0.0, None)
                }
                Method::Rk45Adaptive => {
                    let (xn, err, k7) = steppers::dp5_step(model, x, k1, h_try);
                    let norm = error_norm(&active, &x, &xn, &err, cfg);
                    (xn, norm, Some(k7))
                }
            };

            if !active.iter().all(|&i| x_new[i].is_finite()) || !err_norm.is_finite() {
                stats.rejected_error += 1;
                h = h_try * 0.5;
                if h < MIN_STEP {
                    terminated = Some(Termination::Diverged);
                    break 'outer;
                }
                continue;
            }

            if adaptive && err_norm > 1.0 {
                stats.rejected_error += 1;
                h = h_try * (0.9 * err_norm.powf(-0.2)).clamp(0.2, 1.0);
                if h < MIN_STEP {
                    terminated = Some(Termination::Diverged);
                    break 'outer;
                }
                continue;
            }

            if active.iter().any(|&i| x_new[i] < 0.0) {
                stats.rejected_positivity += 1;
                h = h_try * 0.5;
                if h < MIN_STEP {
                    terminated = Some(Termination::SteppedToAxis);
                    break 'outer;
                }
                continue;
            }

            // accepted
            stats.accepted += 1;
            let t_new = if reach_end { t_end } else { t + h_try };
            let f_new = f_new.unwrap_or_else(|| model.field_raw(x_new));

            emit_grid_samples(
                model, &active, cfg, &mut times, &mut states, &mut out_idx, t, &x, &k1, t_new,
                &x_new, &f_new,
            );

            if active.iter().any(|&i| x_new[i] > cfg.max_state) {
                if times.last().map_or(true, |&lt| lt < t_new - GRID_EPS) {
                    times.push(t_new);
                    states.push(state_from(&active, mask, &x_new));
                }
                terminated = Some(Termination::Diverged);
                break 'outer;
            }

            t = t_new;
            x = x_new;
            h = if adaptive {
                let grow = if err_norm > 0.0 {
                    (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
                } else {
                    5.0
                };
                h_try * grow
            } else {
                cfg.dt
            };
            break;
        }
    }

    let terminated = terminated.unwrap_or(Termination::Completed);
    if terminated == Termination::Completed
        && times.last().map_or(true, |&lt| lt < t_end - GRID_EPS)
    {
        times.push(t_end);
        states.push(state_from(&active, mask, &x));
    }

    Ok(Trajectory {
        model: *model,
        times,
        states,
        terminated,
        stats,
    })
}

fn error_norm(
    active: &[usize],
    x: &[f64; 3],
    x_new: &[f64; 3],
    err: &[f64; 3],
    cfg: &IntegratorConfig,
) -> f64 {
    let mut sum = 0.0;
    for &i in active {
        let scale = cfg.abs_tol + cfg.rel_tol * x[i].abs().max(x_new[i].abs());
        let e = err[i] / scale;
        sum += e * e;
    }
    (sum / active.len() as f64).sqrt()
}

fn state_from(active: &[usize], mask: crate::models::VarSet, v: &[f64; 3]) -> StateVec {
    let mut vals = [0.0; 3];
    for &i in active {
        vals[i] = v[i].max(0.0);
    }
    StateVec::new(vals, mask).expect("clamped finite components form a valid state")
}

/// Push every output-grid time in (t0, t1] using Hermite interpolation on
/// the accepted step, exact at the step endpoint.
#[allow(clippy::too_many_arguments)]
fn emit_grid_samples(
    model: &ModelInstance,
    active: &[usize],
    cfg: &IntegratorConfig,
    times: &mut Vec<f64>,
    states: &mut Vec<StateVec>,
    out_idx: &mut u64,
    t0: f64,
    x0: &[f64; 3],
    f0: &[f64; 3],
    t1: f64,
    x1: &[f64; 3],
    f1: &[f64; 3],
) {
    let eps = GRID_EPS * t1.abs().max(1.0);
    loop {
        let t_out = *out_idx as f64 * cfg.dt_out;
        if t_out > t1 + eps {
            break;
        }
        let vals = if (t_out - t1).abs() <= eps {
            *x1
        } else {
            dense::hermite(active, t0, x0, f0, t1, x1, f1, t_out)
        };
        times.push(t_out);
        states.push(state_from(active, model.mask(), &vals));
        *out_idx += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::VarSet;
    use approx::assert_abs_diff_eq;

    fn goodwin() -> ModelInstance {
        ModelInstance::goodwin(1.0, 1.0).unwrap()
    }

    #[test]
    fn stationary_at_fixed_point() {
        let m = goodwin();
        let x0 = StateVec::new([1.0, 1.0, 0.0], VarSet::YW).unwrap();
        let traj = integrate(&m, &x0, 40.0, &IntegratorConfig::default()).unwrap();
        assert_eq!(traj.terminated, Termination::Completed);
        for x in &traj.states {
            assert_abs_diff_eq!(x.y(), 1.0, epsilon = 1e-9);
            assert_abs_diff_eq!(x.w(), 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn output_grid_is_uniform_and_starts_at_zero() {
        let m = goodwin();
        let x0 = StateVec::new([0.6, 0.5, 0.0], VarSet::YW).unwrap();
        let traj = integrate(&m, &x0, 2.0, &IntegratorConfig::default()).unwrap();
        assert_eq!(traj.times[0], 0.0);
        assert_eq!(traj.states[0], x0);
        assert_eq!(traj.len(), 201);
        for (k, &t) in traj.times.iter().enumerate() {
            assert_abs_diff_eq!(t, k as f64 * 0.01, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(traj.t_end(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn off_grid_t_end_appends_final_sample() {
        let m = goodwin();
        let x0 = StateVec::new([0.6, 0.5, 0.0], VarSet::YW).unwrap();
        let traj = integrate(&m, &x0, 0.035, &IntegratorConfig::default()).unwrap();
        let times = &traj.times;
        assert_eq!(times.len(), 5); // 0, 0.01, 0.02, 0.03, 0.035
        assert_abs_diff_eq!(times[4], 0.035, epsilon = 1e-12);
    }

    #[test]
    fn conserves_first_integral_at_tight_tolerance() {
        let m = goodwin();
        let x0 = StateVec::new([0.6, 0.5, 0.0], VarSet::YW).unwrap();
        let traj = integrate(&m, &x0, 40.0, &IntegratorConfig::default()).unwrap();
        let v0 = m.conserved_quantity(&x0).unwrap().unwrap();
        let drift = traj
            .states
            .iter()
            .map(|x| (m.conserved_quantity(x).unwrap().unwrap() - v0).abs())
            .fold(0.0f64, f64::max);
        assert!(drift <= 1e-6, "V-drift {drift:e}");
    }

    #[test]
    fn divergent_orbit_terminates_cleanly() {
        // strongly wage-led: the spiral blows up well before t = 400
        let m = ModelInstance::full_wage_led(2.0, 5.0, 1.5, 0.5).unwrap();
        let x0 = StateVec::new([0.5, 1.0, 0.75], VarSet::YWF).unwrap();
        let mut cfg = IntegratorConfig::default();
        cfg.rel_tol = 1e-8;
        cfg.abs_tol = 1e-8;
        let traj = integrate(&m, &x0, 400.0, &cfg).unwrap();
        assert_eq!(traj.terminated, Termination::Diverged);
        let last = traj.last_state();
        assert!(
            last.vals().iter().any(|&v| v > cfg.max_state),
            "diverged run must end above the guard, got {:?}",
            last.vals()
        );
    }

    #[test]
    fn zero_horizon_yields_single_sample() {
        let m = goodwin();
        let x0 = StateVec::new([0.6, 0.5, 0.0], VarSet::YW).unwrap();
        let traj = integrate(&m, &x0, 0.0, &IntegratorConfig::default()).unwrap();
        assert_eq!(traj.len(), 1);
        assert_eq!(traj.terminated, Termination::Completed);
    }

    #[test]
    fn rejects_mismatched_initial_state() {
        let m = goodwin();
        let x0 = StateVec::new([0.6, 0.0, 0.5], VarSet::YF).unwrap();
        assert!(integrate(&m, &x0, 1.0, &IntegratorConfig::default()).is_err());
    }

    #[test]
    fn deterministic_repeat_runs() {
        let m = ModelInstance::full_wage_led(2.0, 5.0, 1.5, 0.03).unwrap();
        let x0 = StateVec::new([0.5, 1.0, 0.75], VarSet::YWF).unwrap();
        let cfg = IntegratorConfig::default();
        let a = integrate(&m, &x0, 20.0, &cfg).unwrap();
        let b = integrate(&m, &x0, 20.0, &cfg).unwrap();
        assert_eq!(a.times, b.times);
        for (xa, xb) in a.states.iter().zip(&b.states) {
            assert_eq!(xa.vals(), xb.vals());
        }
        assert_eq!(a.stats, b.stats);
    }

    #[test]
    fn rk4_matches_adaptive_on_short_horizon() {
        let m = goodwin();
        let x0 = StateVec::new([0.6, 0.5, 0.0], VarSet::YW).unwrap();
        let mut cfg4 = IntegratorConfig::default();
        cfg4.method = Method::Rk4Fixed;
        cfg4.dt = 0.001;
        let a = integrate(&m, &x0, 5.0, &cfg4).unwrap();
        let b = integrate(&m, &x0, 5.0, &IntegratorConfig::default()).unwrap();
        let xa = a.last_state();
        let xb = b.last_state();
        assert_abs_diff_eq!(xa.y(), xb.y(), epsilon = 1e-8);
        assert_abs_diff_eq!(xa.w(), xb.w(), epsilon = 1e-8);
    }
}
