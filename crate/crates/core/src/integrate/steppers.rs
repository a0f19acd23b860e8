//! RK4 and Dormand-Prince 5(4) single steps.

use crate::models::ModelInstance;

fn axpy(x: &[f64; 3], h: f64, terms: &[(f64, &[f64; 3])]) -> [f64; 3] {
    let mut out = *x;
    for &(coef, k) in terms {
        for i in 0..3 {
            out[i] += h * coef * k[i];
        }
    }
    out
}

/// One classical RK4 step; `k1` is the field at `x`.
pub fn rk4_step(model: &ModelInstance, x: [f64; 3], k1: [f64; 3], h: f64) -> [f64; 3] {
    let k2 = model.field_raw(axpy(&x, h, &[(0.5, &k1)]));
    let k3 = model.field_raw(axpy(&x, h, &[(0.5, &k2)]));
    let k4 = model.field_raw(axpy(&x, h, &[(1.0, &k3)]));
    let mut out = x;
    for i in 0..3 {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// One Dormand-Prince 5(4) step; `k1` is the field at `x`.
///
/// Returns the 5th-order solution, the embedded error estimate (difference
/// to the 4th-order solution), and k7 = f(x_new) for dense output.
pub fn dp5_step(
    model: &ModelInstance,
    x: [f64; 3],
    k1: [f64; 3],
    h: f64,
) -> ([f64; 3], [f64; 3], [f64; 3]) {
    let k2 = model.field_raw(axpy(&x, h, &[(1.0 / 5.0, &k1)]));
    let k3 = model.field_raw(axpy(&x, h, &[(3.0 / 40.0, &k1), (9.0 / 40.0, &k2)]));
    let k4 = model.field_raw(axpy(
        &x,
        h,
        &[(44.0 / 45.0, &k1), (-56.0 / 15.0, &k2), (32.0 / 9.0, &k3)],
    ));
    let k5 = model.field_raw(axpy(
        &x,
        h,
        &[
            (19372.0 / 6561.0, &k1),
            (-25360.0 / 2187.0, &k2),
            (64448.0 / 6561.0, &k3),
            (-212.0 / 729.0, &k4),
        ],
    ));
    let k6 = model.field_raw(axpy(
        &x,
        h,
        &[
            (9017.0 / 3168.0, &k1),
            (-355.0 / 33.0, &k2),
            (46732.0 / 5247.0, &k3),
            (49.0 / 176.0, &k4),
            (-5103.0 / 18656.0, &k5),
        ],
    ));
    let x5 = axpy(
        &x,
        h,
        &[
            (35.0 / 384.0, &k1),
            (500.0 / 1113.0, &k3),
            (125.0 / 192.0, &k4),
            (-2187.0 / 6784.0, &k5),
            (11.0 / 84.0, &k6),
        ],
    );
    let k7 = model.field_raw(x5);
    let x4 = axpy(
        &x,
        h,
        &[
            (5179.0 / 57600.0, &k1),
            (7571.0 / 16695.0, &k3),
            (393.0 / 640.0, &k4),
            (-92097.0 / 339200.0, &k5),
            (187.0 / 2100.0, &k6),
            (1.0 / 40.0, &k7),
        ],
    );
    let mut err = [0.0; 3];
    for i in 0..3 {
        err[i] = x5[i] - x4[i];
    }
    (x5, err, k7)
}
