//! Dense output and Poincaré sections on stored trajectories.

use super::Trajectory;
use crate::error::{Error, Result};
use crate::models::{StateVec, Var};
use serde::Serialize;

/// Crossing direction for a Poincaré section.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Up,
    Down,
}

/// Cubic Hermite interpolation of the active components at `t` between
/// (t0, x0) and (t1, x1) with endpoint derivatives f0, f1.
pub(super) fn hermite(
    active: &[usize],
    t0: f64,
    x0: &[f64; 3],
    f0: &[f64; 3],
    t1: f64,
    x1: &[f64; 3],
    f1: &[f64; 3],
    t: f64,
) -> [f64; 3] {
    let h = t1 - t0;
    let tau = (t - t0) / h;
    let t2 = tau * tau;
    let t3 = t2 * tau;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + tau;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    let mut out = [0.0; 3];
    for &i in active {
        out[i] = h00 * x0[i] + h10 * h * f0[i] + h01 * x1[i] + h11 * h * f1[i];
    }
    out
}

pub(super) fn sample_dense(traj: &Trajectory, t: f64) -> Result<StateVec> {
    let t_max = traj.t_end();
    if !t.is_finite() || t < 0.0 || t > t_max {
        return Err(Error::TimeOutOfRange { t, t_max });
    }
    let times = &traj.times;
    // index of the right bracket
    let hi = times.partition_point(|&tk| tk < t).min(times.len() - 1);
    let lo = hi.saturating_sub(1);
    let eps = 1e-12 * t.abs().max(1.0);
    if (times[hi] - t).abs() <= eps {
        return Ok(traj.states[hi]);
    }
    if (times[lo] - t).abs() <= eps {
        return Ok(traj.states[lo]);
    }
    let mask = traj.model.mask();
    let active: Vec<usize> = mask.iter().map(|v| v.index()).collect();
    let x0 = traj.states[lo].vals();
    let x1 = traj.states[hi].vals();
    let f0 = traj.model.field_raw(x0);
    let f1 = traj.model.field_raw(x1);
    let mut vals = hermite(&active, times[lo], &x0, &f0, times[hi], &x1, &f1, t);
    for &i in &active {
        vals[i] = vals[i].max(0.0);
    }
    Ok(StateVec::new(vals, mask).expect("interpolated state is finite and nonnegative"))
}

pub(super) fn poincare_crossings(
    traj: &Trajectory,
    var: Var,
    level: f64,
    direction: Direction,
) -> Result<Vec<(f64, StateVec)>> {
    if !traj.model.mask().contains(var) {
        return Err(Error::InactiveVariable(var.label()));
    }
    let g: Vec<f64> = traj.states.iter().map(|x| x.get(var) - level).collect();
    let mut out = Vec::new();
    for k in 0..g.len().saturating_sub(1) {
        let bracketed = match direction {
            Direction::Up => g[k] < 0.0 && g[k + 1] >= 0.0,
            Direction::Down => g[k] > 0.0 && g[k + 1] <= 0.0,
        };
        if !bracketed {
            continue;
        }
        let t_star = refine_crossing(traj, var, level, traj.times[k], traj.times[k + 1])?;
        out.push((t_star, traj.sample_dense(t_star)?));
    }
    Ok(out)
}

/// Bisection on the dense output to 1e−9 in time.
fn refine_crossing(traj: &Trajectory, var: Var, level: f64, mut lo: f64, mut hi: f64) -> Result<f64> {
    let g = |t: f64| -> Result<f64> { Ok(traj.sample_dense(t)?.get(var) - level) };
    let g_lo = g(lo)?;
    if g_lo == 0.0 {
        return Ok(lo);
    }
    for _ in 0..64 {
        if hi - lo <= 1e-9 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let g_mid = g(mid)?;
        if g_mid == 0.0 {
            return Ok(mid);
        }
        if (g_mid > 0.0) == (g_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrate::{integrate, IntegratorConfig, StepStats, Termination};
    use crate::models::{ModelInstance, VarSet};
    use approx::assert_abs_diff_eq;

    fn goodwin_orbit(t_end: f64) -> Trajectory {
        let m = ModelInstance::goodwin(1.0, 1.0).unwrap();
        let x0 = StateVec::new([0.6, 0.5, 0.0], VarSet::YW).unwrap();
        integrate(&m, &x0, t_end, &IntegratorConfig::default()).unwrap()
    }

    #[test]
    fn dense_sample_exact_on_grid() {
        let traj = goodwin_orbit(2.0);
        for k in [0usize, 7, 150, 200] {
            let x = traj.sample_dense(traj.times[k]).unwrap();
            assert_eq!(x, traj.states[k]);
        }
    }

    #[test]
    fn dense_sample_stationary() {
        let m = ModelInstance::goodwin(1.0, 1.0).unwrap();
        let x0 = StateVec::new([1.0, 1.0, 0.0], VarSet::YW).unwrap();
        let traj = integrate(&m, &x0, 5.0, &IntegratorConfig::default()).unwrap();
        let x = traj.sample_dense(1.2345).unwrap();
        assert_abs_diff_eq!(x.y(), 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(x.w(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn dense_sample_midpoint_matches_reintegration() {
        let traj = goodwin_orbit(2.0);
        // restart a fresh integration from a stored grid point and compare
        // the dense sample at the middle of the next interval
        let k = 50;
        let t_mid = traj.times[k] + 0.005;
        let dense = traj.sample_dense(t_mid).unwrap();
        let m = traj.model;
        let restart = integrate(&m, &traj.states[k], 0.005, &IntegratorConfig::default()).unwrap();
        let reference = restart.last_state();
        assert_abs_diff_eq!(dense.y(), reference.y(), epsilon = 1e-6);
        assert_abs_diff_eq!(dense.w(), reference.w(), epsilon = 1e-6);
    }

    #[test]
    fn dense_sample_rejects_out_of_range() {
        let traj = goodwin_orbit(1.0);
        assert!(traj.sample_dense(-0.1).is_err());
        assert!(traj.sample_dense(1.1).is_err());
    }

    #[test]
    fn poincare_period_spacing_consistent() {
        let traj = goodwin_orbit(40.0);
        let ups = traj.poincare_crossings(Var::Y, 1.0, Direction::Up).unwrap();
        assert!(ups.len() >= 5, "got {} crossings", ups.len());
        let spacings: Vec<f64> = ups.windows(2).map(|w| w[1].0 - w[0].0).collect();
        let mean = spacings.iter().sum::<f64>() / spacings.len() as f64;
        for sp in &spacings {
            assert!(
                (sp - mean).abs() / mean < 1e-3,
                "spacing {sp} vs mean {mean}"
            );
        }
        // crossing states actually sit on the section
        for (_, x) in &ups {
            assert_abs_diff_eq!(x.y(), 1.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn poincare_empty_for_stationary_orbit() {
        let m = ModelInstance::goodwin(1.0, 1.0).unwrap();
        let x0 = StateVec::new([1.0, 1.0, 0.0], VarSet::YW).unwrap();
        let traj = integrate(&m, &x0, 10.0, &IntegratorConfig::default()).unwrap();
        assert!(traj
            .poincare_crossings(Var::Y, 1.0, Direction::Up)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn poincare_rejects_inactive_variable() {
        let traj = goodwin_orbit(1.0);
        assert!(traj.poincare_crossings(Var::F, 0.5, Direction::Up).is_err());
    }

    #[test]
    fn reversed_samples_swap_crossing_direction() {
        let traj = goodwin_orbit(40.0);
        let t_end = traj.t_end();
        let reversed = Trajectory {
            model: traj.model,
            times: traj.times.clone(),
            states: traj.states.iter().rev().copied().collect(),
            terminated: Termination::Completed,
            stats: StepStats::default(),
        };
        let ups = traj.poincare_crossings(Var::Y, 1.0, Direction::Up).unwrap();
        let downs_rev = reversed
            .poincare_crossings(Var::Y, 1.0, Direction::Down)
            .unwrap();
        assert_eq!(ups.len(), downs_rev.len());
        // crossing times mirror within the bracketing resolution
        for ((t_up, _), (t_down, _)) in ups.iter().zip(downs_rev.iter().rev()) {
            assert!((t_end - t_up - t_down).abs() < 2.0 * 0.01, "{t_up} vs {t_down}");
        }
    }
}
