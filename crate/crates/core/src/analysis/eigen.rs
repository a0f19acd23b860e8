//! Closed-form eigenvalues of 2×2 and 3×3 real matrices and stability
//! classification.
//!
//! The cubic characteristic polynomial is solved in depressed form: the
//! trigonometric method when all three roots are real, the Cardano branch
//! otherwise. Every root gets one Newton polish step on the characteristic
//! polynomial. Complex roots of real matrices are returned as exact
//! conjugate mirrors.

use crate::models::{Matrix3, ModelInstance, Var};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

/// Real parts with magnitude at or below this count as "on the imaginary
/// axis" for stability classification.
pub const ZERO_REAL_TOL: f64 = 1e-8;

/// Imaginary parts above this mark a genuinely complex eigenvalue.
const PAIR_IMAG_TOL: f64 = 1e-9;

pub fn trace3(m: &Matrix3) -> f64 {
    m[0][0] + m[1][1] + m[2][2]
}

pub fn det3(m: &Matrix3) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Sum of the principal 2×2 minors.
pub fn principal_minor_sum(m: &Matrix3) -> f64 {
    (m[0][0] * m[1][1] - m[0][1] * m[1][0])
        + (m[0][0] * m[2][2] - m[0][2] * m[2][0])
        + (m[1][1] * m[2][2] - m[1][2] * m[2][1])
}

/// Up to three eigenvalues in a deterministic order: descending real part,
/// ties broken by descending imaginary part. For 2×2 input the third slot
/// is an explicit absent marker.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenTriple {
    slots: [Option<Complex64>; 3],
}

impl EigenTriple {
    fn from_roots(mut roots: Vec<Complex64>) -> Self {
        roots.sort_by(|a, b| {
            b.re.partial_cmp(&a.re)
                .unwrap()
                .then(b.im.partial_cmp(&a.im).unwrap())
        });
        let mut slots = [None; 3];
        for (slot, root) in slots.iter_mut().zip(roots) {
            *slot = Some(root);
        }
        EigenTriple { slots }
    }

    pub fn slots(&self) -> &[Option<Complex64>; 3] {
        &self.slots
    }

    pub fn present(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.slots.iter().filter_map(|s| *s)
    }

    pub fn count(&self) -> usize {
        self.slots.iter().filter(|s| s.is_some()).count()
    }

    /// The complex-conjugate pair, upper half-plane member first.
    pub fn conjugate_pair(&self) -> Option<(Complex64, Complex64)> {
        let complex: Vec<Complex64> = self
            .present()
            .filter(|z| z.im.abs() > PAIR_IMAG_TOL)
            .collect();
        if complex.len() == 2 {
            let (a, b) = (complex[0], complex[1]);
            if a.im >= 0.0 {
                Some((a, b))
            } else {
                Some((b, a))
            }
        } else {
            None
        }
    }

    /// Common real part of the conjugate pair, if one exists.
    pub fn pair_real_part(&self) -> Option<f64> {
        self.conjugate_pair().map(|(a, _)| a.re)
    }

    /// Eigenvalues with negligible imaginary part.
    pub fn real_roots(&self) -> Vec<f64> {
        self.present()
            .filter(|z| z.im.abs() <= PAIR_IMAG_TOL)
            .map(|z| z.re)
            .collect()
    }

    /// Sign of each real part under [`ZERO_REAL_TOL`]: −1, 0, or +1.
    pub fn sign_pattern(&self) -> [Option<i8>; 3] {
        let mut out = [None; 3];
        for (o, s) in out.iter_mut().zip(self.slots.iter()) {
            *o = s.map(|z| {
                if z.re.abs() <= ZERO_REAL_TOL {
                    0
                } else if z.re > 0.0 {
                    1
                } else {
                    -1
                }
            });
        }
        out
    }
}

fn char_poly(c2: f64, c1: f64, c0: f64, z: Complex64) -> Complex64 {
    ((z - c2) * z + c1) * z - c0
}

fn char_poly_deriv(c2: f64, c1: f64, c0: f64, z: Complex64) -> Complex64 {
    let _ = c0;
    (3.0 * z - 2.0 * c2) * z + c1
}

fn polish(c2: f64, c1: f64, c0: f64, z: Complex64) -> Complex64 {
    let d = char_poly_deriv(c2, c1, c0, z);
    let scale = 1.0 + z.norm();
    if d.norm() > 1e-12 * scale * scale {
        z - char_poly(c2, c1, c0, z) / d
    } else {
        z
    }
}

/// Eigenvalues of a 3×3 real matrix via the characteristic cubic
/// λ³ − tr·λ² + M·λ − det.
pub fn eig3(m: &Matrix3) -> EigenTriple {
    let c2 = trace3(m);
    let c1 = principal_minor_sum(m);
    let c0 = det3(m);

    // depressed cubic t³ + p t + q with λ = t + c2/3
    let p = c1 - c2 * c2 / 3.0;
    let q = -2.0 * c2 * c2 * c2 / 27.0 + c1 * c2 / 3.0 - c0;
    let shift = c2 / 3.0;

    let disc = -4.0 * p * p * p - 27.0 * q * q;

    let roots: Vec<Complex64> = if disc > 0.0 {
        // three distinct real roots (p < 0 here)
        let amp = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * amp)).clamp(-1.0, 1.0);
        let phi = arg.acos();
        (0..3)
            .map(|k| {
                let t = amp * ((phi - 2.0 * PI * k as f64) / 3.0).cos();
                let lam = polish(c2, c1, c0, Complex64::new(t + shift, 0.0));
                Complex64::new(lam.re, 0.0)
            })
            .collect()
    } else if p == 0.0 && q == 0.0 {
        vec![Complex64::new(shift, 0.0); 3]
    } else if disc == 0.0 {
        // repeated root: t³ + pt + q = (t - a)²(t - b), a = -3q/(2p), b = 3q/p
        let a = -3.0 * q / (2.0 * p);
        let b = 3.0 * q / p;
        vec![
            Complex64::new(a + shift, 0.0),
            Complex64::new(a + shift, 0.0),
            Complex64::new(b + shift, 0.0),
        ]
    } else {
        // one real root and a conjugate pair (Cardano)
        let sq = (q * q / 4.0 + p * p * p / 27.0).sqrt();
        // take the larger-magnitude cube root to avoid cancellation
        let u3 = if q <= 0.0 { -q / 2.0 + sq } else { -q / 2.0 - sq };
        let u = u3.cbrt();
        let v = if u != 0.0 { -p / (3.0 * u) } else { 0.0 };
        let t_real = u + v;
        let re_pair = -t_real / 2.0 + shift;
        let im_pair = (3.0f64.sqrt() / 2.0 * (u - v)).abs();

        let real = polish(c2, c1, c0, Complex64::new(t_real + shift, 0.0));
        let upper = polish(c2, c1, c0, Complex64::new(re_pair, im_pair));
        vec![
            Complex64::new(real.re, 0.0),
            upper,
            upper.conj(),
        ]
    };

    EigenTriple::from_roots(roots)
}

/// Eigenvalues of a 2×2 real matrix via the quadratic formula; the third
/// slot is absent.
pub fn eig2(m: [[f64; 2]; 2]) -> EigenTriple {
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = tr * tr - 4.0 * det;
    let roots = if disc >= 0.0 {
        let sd = disc.sqrt();
        // extract the larger-magnitude root first, recover the other from det
        let r1 = if tr >= 0.0 { (tr + sd) / 2.0 } else { (tr - sd) / 2.0 };
        let r2 = if r1 != 0.0 { det / r1 } else { (tr - r1.signum() * sd) / 2.0 };
        vec![Complex64::new(r1, 0.0), Complex64::new(r2, 0.0)]
    } else {
        let re = tr / 2.0;
        let im = (-disc).sqrt() / 2.0;
        vec![Complex64::new(re, im), Complex64::new(re, -im)]
    };
    EigenTriple::from_roots(roots)
}

/// Eigenvalues of a model's (padded) Jacobian: the active 2×2 block for
/// 2-D models, the full matrix otherwise.
pub fn eigenvalues(model: &ModelInstance, jac: &Matrix3) -> EigenTriple {
    if model.dimension() == 2 {
        let idx: Vec<usize> = model.mask().iter().map(Var::index).collect();
        let (i, j) = (idx[0], idx[1]);
        eig2([[jac[i][i], jac[i][j]], [jac[j][i], jac[j][j]]])
    } else {
        eig3(jac)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityClass {
    StableFocusNode,
    CenterCandidate,
    UnstableSpiral,
    SaddleLike,
    Degenerate,
}

/// Stability class plus the raw sign pattern of the real parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityReport {
    pub class: StabilityClass,
    pub sign_pattern: [Option<i8>; 3],
}

/// Classify the linearization from its eigenvalues. Real parts within
/// [`ZERO_REAL_TOL`] of zero count as zero.
pub fn classify_stability(e: &EigenTriple) -> StabilityReport {
    let sign_pattern = e.sign_pattern();
    let signs: Vec<i8> = sign_pattern.iter().flatten().copied().collect();

    let pair_sign = e.pair_real_part().map(|re| {
        if re.abs() <= ZERO_REAL_TOL {
            0i8
        } else if re > 0.0 {
            1
        } else {
            -1
        }
    });
    // signs of the eigenvalues outside the pair
    let rest_negative = e
        .real_roots()
        .iter()
        .all(|re| *re < -ZERO_REAL_TOL);

    let class = if !signs.is_empty() && signs.iter().all(|&s| s == -1) {
        StabilityClass::StableFocusNode
    } else if pair_sign == Some(0) && rest_negative {
        StabilityClass::CenterCandidate
    } else if pair_sign == Some(1) {
        StabilityClass::UnstableSpiral
    } else if signs.contains(&1) && signs.contains(&-1) {
        StabilityClass::SaddleLike
    } else {
        StabilityClass::Degenerate
    };

    StabilityReport {
        class,
        sign_pattern,
    }
}
