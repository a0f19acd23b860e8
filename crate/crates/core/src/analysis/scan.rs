//! Parameter scans in the wage-led feedback strength `s` and Hopf
//! bifurcation detection.

use super::eigen::{classify_stability, eigenvalues, EigenTriple, StabilityReport};
use crate::error::{Error, Result};
use crate::models::{ModelInstance, ModelParams};

/// One scan row. The fixed point is the algebraic closed form
/// (1/p, r/p−c, rs/p−cs+1); rows where it is not interior are flagged and
/// carry no eigen data.
#[derive(Debug, Clone)]
pub struct ScanRow {
    pub s: f64,
    pub fixed_point: [f64; 3],
    pub interior: bool,
    pub eigenvalues: Option<EigenTriple>,
    pub stability: Option<StabilityReport>,
}

#[derive(Debug, Clone)]
pub struct ScanResult {
    pub p: f64,
    pub r: f64,
    pub c: f64,
    pub rows: Vec<ScanRow>,
}

/// A refined crossing of the imaginary axis by the conjugate pair.
#[derive(Debug, Clone, Copy)]
pub struct HopfCrossing {
    pub s: f64,
    /// |imaginary part| of the pair at the crossing.
    pub pair_imag: f64,
    /// d(ℜ pair)/ds by central difference at the crossing.
    pub transversality: f64,
}

/// Uniform grid lo, lo+step, …, capped at hi.
pub fn s_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite() && step.is_finite()) || step <= 0.0 || hi < lo {
        return Err(Error::BadGrid);
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| lo + i as f64 * step).collect())
}

/// Evaluate the closed-form fixed point, eigenvalues, and stability class
/// of the full wage-led model at each grid value of `s`.
pub fn scan_parameter(base: &ModelInstance, grid: &[f64]) -> Result<ScanResult> {
    let (p, r, c) = match *base.params() {
        ModelParams::FullWageLed { p, r, c, .. } => (p, r, c),
        _ => return Err(Error::WrongModelKind(base.kind().name())),
    };
    if grid.is_empty() || grid.iter().any(|s| !s.is_finite()) {
        return Err(Error::BadGrid);
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::BadGrid);
    }

    let rows = grid
        .iter()
        .map(|&s| {
            let model = ModelInstance::full_wage_led(p, r, c, s)
                .expect("positive p, r, c and finite s were validated");
            let fixed_point = [1.0 / p, r / p - c, r * s / p - c * s + 1.0];
            match model.interior_fixed_point() {
                Some(fp) => {
                    let jac = model.jacobian(&fp).expect("fixed point matches the model");
                    let eig = eigenvalues(&model, &jac);
                    let stability = classify_stability(&eig);
                    ScanRow {
                        s,
                        fixed_point,
                        interior: true,
                        eigenvalues: Some(eig),
                        stability: Some(stability),
                    }
                }
                None => ScanRow {
                    s,
                    fixed_point,
                    interior: false,
                    eigenvalues: None,
                    stability: None,
                },
            }
        })
        .collect();

    Ok(ScanResult { p, r, c, rows })
}

/// Real part of the conjugate pair at the interior fixed point, if both
/// exist at this `s`.
fn pair_real_at(p: f64, r: f64, c: f64, s: f64) -> Option<f64> {
    let model = ModelInstance::full_wage_led(p, r, c, s).ok()?;
    let fp = model.interior_fixed_point()?;
    let jac = model.jacobian(&fp).ok()?;
    eigenvalues(&model, &jac).pair_real_part()
}

fn pair_imag_at(p: f64, r: f64, c: f64, s: f64) -> Option<f64> {
    let model = ModelInstance::full_wage_led(p, r, c, s).ok()?;
    let fp = model.interior_fixed_point()?;
    let jac = model.jacobian(&fp).ok()?;
    eigenvalues(&model, &jac)
        .conjugate_pair()
        .map(|(up, _)| up.im)
}

/// Locate sign changes of the pair's real part between adjacent scan rows
/// and refine each by bisection (re-deriving fixed point and eigenvalues
/// per probe) until |ℜ pair| < 1e−10.
pub fn detect_hopf(scan: &ScanResult) -> Vec<HopfCrossing> {
    let (p, r, c) = (scan.p, scan.r, scan.c);
    let mut out = Vec::new();

    let pair_re: Vec<Option<f64>> = scan
        .rows
        .iter()
        .map(|row| row.eigenvalues.as_ref().and_then(EigenTriple::pair_real_part))
        .collect();

    for k in 0..scan.rows.len() {
        let Some(re_k) = pair_re[k] else { continue };
        if re_k == 0.0 {
            out.push(crossing_at(p, r, c, scan.rows[k].s));
            continue;
        }
        if k + 1 >= scan.rows.len() {
            break;
        }
        let Some(re_next) = pair_re[k + 1] else { continue };
        if re_k * re_next < 0.0 {
            let s_star = bisect_pair_zero(p, r, c, scan.rows[k].s, scan.rows[k + 1].s, re_k);
            out.push(crossing_at(p, r, c, s_star));
        }
    }
    out
}

fn bisect_pair_zero(p: f64, r: f64, c: f64, mut lo: f64, mut hi: f64, re_lo: f64) -> f64 {
    let sign_lo = re_lo > 0.0;
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let Some(re_mid) = pair_real_at(p, r, c, mid) else {
            break;
        };
        if re_mid.abs() < 1e-10 {
            return mid;
        }
        if (re_mid > 0.0) == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < f64::EPSILON * mid.abs().max(1.0) {
            break;
        }
    }
    mid
}

fn crossing_at(p: f64, r: f64, c: f64, s_star: f64) -> HopfCrossing {
    let pair_imag = pair_imag_at(p, r, c, s_star).map_or(f64::NAN, f64::abs);
    let delta = 1e-5;
    let transversality = match (
        pair_real_at(p, r, c, s_star + delta),
        pair_real_at(p, r, c, s_star - delta),
    ) {
        (Some(a), Some(b)) => (a - b) / (2.0 * delta),
        _ => f64::NAN,
    };
    HopfCrossing {
        s: s_star,
        pair_imag,
        transversality,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stockhammer() -> ModelInstance {
        ModelInstance::full_wage_led(2.0, 5.0, 1.5, 0.0).unwrap()
    }

    #[test]
    fn grid_construction() {
        let g = s_grid(-2.0, 2.0, 0.01).unwrap();
        assert_eq!(g.len(), 401);
        assert_eq!(g[0], -2.0);
        assert!((g[400] - 2.0).abs() < 1e-9);
        assert!(s_grid(0.0, 1.0, 0.0).is_err());
        assert!(s_grid(1.0, 0.0, 0.1).is_err());
        assert_eq!(s_grid(0.0, 0.0, 0.1).unwrap(), vec![0.0]);
    }

    #[test]
    fn scan_requires_full_model() {
        let g = ModelInstance::goodwin(1.0, 1.0).unwrap();
        assert!(matches!(
            scan_parameter(&g, &[0.0]),
            Err(Error::WrongModelKind(_))
        ));
    }

    #[test]
    fn scan_rejects_bad_grids() {
        let m = stockhammer();
        assert!(scan_parameter(&m, &[]).is_err());
        assert!(scan_parameter(&m, &[0.0, 0.0]).is_err());
        assert!(scan_parameter(&m, &[0.1, -0.1]).is_err());
    }

    #[test]
    fn pair_real_part_vanishes_at_s0() {
        let m = stockhammer();
        let scan = scan_parameter(&m, &[0.0]).unwrap();
        let row = &scan.rows[0];
        assert!(row.interior);
        let re = row.eigenvalues.as_ref().unwrap().pair_real_part().unwrap();
        assert!(re.abs() < 1e-9, "pair real part {re:e}");
    }

    #[test]
    fn pair_sign_tracks_s_near_zero() {
        let m = stockhammer();
        let grid = s_grid(-0.5, 0.5, 0.05).unwrap();
        let scan = scan_parameter(&m, &grid).unwrap();
        for row in &scan.rows {
            let re = row.eigenvalues.as_ref().unwrap().pair_real_part().unwrap();
            if row.s.abs() > 1e-9 {
                assert_eq!(re > 0.0, row.s > 0.0, "s = {}, re = {re}", row.s);
            }
        }
    }

    #[test]
    fn rows_below_minus_one_are_non_interior() {
        // f* = 1 + s at these parameters
        let m = stockhammer();
        let grid = s_grid(-2.0, 2.0, 0.25).unwrap();
        let scan = scan_parameter(&m, &grid).unwrap();
        for row in &scan.rows {
            assert_eq!(row.interior, row.s > -1.0, "s = {}", row.s);
            assert_eq!(row.eigenvalues.is_some(), row.interior);
        }
    }

    #[test]
    fn eigen_product_matches_det_identity() {
        // det J = −(1+s) at the Stockhammer parameters, so the real
        // eigenvalue crosses 0 exactly at s = −1
        let m = stockhammer();
        let grid = s_grid(-0.95, 2.0, 0.05).unwrap();
        let scan = scan_parameter(&m, &grid).unwrap();
        for row in &scan.rows {
            let e = row.eigenvalues.as_ref().unwrap();
            let prod: num_complex::Complex64 = e.present().product();
            let expected = -(1.0 + row.s);
            assert!(
                (prod.re - expected).abs() <= 1e-8 * (1.0 + expected.abs()),
                "s = {}: det {} vs {}",
                row.s,
                prod.re,
                expected
            );
            assert!(prod.im.abs() < 1e-9);
            // λ1 < 0 on the interior side of the crossing
            let lam1 = e.real_roots()[0];
            assert!(lam1 < 0.0, "s = {}: λ1 = {lam1}", row.s);
        }
        // λ1 → 0⁻ approaching s = −1 from above
        let near = pair_lambda1(&m, -0.999);
        let far = pair_lambda1(&m, -0.5);
        assert!(near > far && near < 0.0 && near > -0.01, "λ1 {near} vs {far}");
    }

    fn pair_lambda1(base: &ModelInstance, s: f64) -> f64 {
        let scan = scan_parameter(base, &[s]).unwrap();
        scan.rows[0].eigenvalues.as_ref().unwrap().real_roots()[0]
    }

    #[test]
    fn hopf_found_only_at_zero() {
        let m = stockhammer();
        let grid = s_grid(-2.0, 2.0, 0.01).unwrap();
        let scan = scan_parameter(&m, &grid).unwrap();
        let crossings = detect_hopf(&scan);
        assert_eq!(crossings.len(), 1, "{crossings:?}");
        let cr = crossings[0];
        assert!(cr.s.abs() < 1e-6, "s* = {:e}", cr.s);
        assert!((cr.pair_imag - 1.0).abs() < 1e-3, "pair imag {}", cr.pair_imag);
        assert!(cr.transversality > 1e-6, "transversality {}", cr.transversality);
    }

    #[test]
    fn no_hopf_away_from_zero() {
        let m = stockhammer();
        let grid = s_grid(0.5, 2.0, 0.05).unwrap();
        let scan = scan_parameter(&m, &grid).unwrap();
        assert!(detect_hopf(&scan).is_empty());
    }

    #[test]
    fn single_row_scan_has_no_crossing() {
        let m = stockhammer();
        let scan = scan_parameter(&m, &[0.5]).unwrap();
        assert!(detect_hopf(&scan).is_empty());
    }
}
