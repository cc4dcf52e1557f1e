//! Floating-point cross-validation of the exact results: series evaluation,
//! complex-path integration, residual checks and blow-up scans.
//!
//! All numeric work is in complex double precision; tolerances default to
//! `rtol = 1e-10`, `atol = 1e-12`.

pub mod integrate;

use num_complex::Complex64;

use crate::ars::series::PainleveSeries;
use crate::jet::poly::JetPoly;
use crate::rational::{as_i64, falling, rat_int, rat_to_f64};
use crate::JetError;

pub use integrate::{
    barrier_scan, integrate, reduction_trajectory_check, BarrierReport, RayOutcome, Trajectory,
};

/// Default relative tolerance for the integrator.
pub const DEFAULT_RTOL: f64 = 1e-10;
/// Default absolute tolerance for the integrator.
pub const DEFAULT_ATOL: f64 = 1e-12;

/// Complex power with exact integer fast path.
fn cpow(x: Complex64, e: &crate::rational::BigRational) -> Complex64 {
    match as_i64(e) {
        Some(k) => x.powi(k as i32),
        None => x.powc(Complex64::new(rat_to_f64(e), 0.0)),
    }
}

/// Evaluates the truncated series and its first `order` derivatives at `x`
/// by termwise differentiation. Errors at `x = 0`.
pub fn eval_series_jet(
    s: &PainleveSeries,
    x: Complex64,
    order: usize,
) -> Result<Vec<Complex64>, JetError> {
    if x.norm() == 0.0 {
        return Err(JetError::UnboundVariable {
            var: "series evaluation at x = 0".to_string(),
        });
    }
    let mut out = vec![Complex64::new(0.0, 0.0); order + 1];
    for (i, a) in s.coeffs.iter().enumerate() {
        let e = s.exponent(i);
        let af = rat_to_f64(a);
        for (j, slot) in out.iter_mut().enumerate() {
            let factor = rat_to_f64(&falling(&e, j));
            if factor == 0.0 {
                continue;
            }
            let ex = &e - rat_int(j as i64);
            *slot += af * factor * cpow(x, &ex);
        }
    }
    Ok(out)
}

/// Maximum residual magnitude of `delta` on the series jet over the points.
pub fn residual_check(
    delta: &JetPoly,
    s: &PainleveSeries,
    points: &[Complex64],
) -> Result<f64, JetError> {
    Ok(residual_check_scaled(delta, s, points)?.0)
}

/// Residuals in both absolute and backward-error form: the second component
/// divides each residual by the sum of term magnitudes at the point, which
/// keeps thresholds meaningful near a pole where the terms themselves are
/// huge and cancel.
pub fn residual_check_scaled(
    delta: &JetPoly,
    s: &PainleveSeries,
    points: &[Complex64],
) -> Result<(f64, f64), JetError> {
    let order = delta.max_jet_order().unwrap_or(0);
    let mut max_abs = 0.0f64;
    let mut max_scaled = 0.0f64;
    for &x in points {
        let jet = eval_series_jet(s, x, order)?;
        let r = delta.eval_complex(x, &jet)?.norm();
        let scale = delta.eval_magnitude(x, &jet)?.max(f64::MIN_POSITIVE);
        max_abs = max_abs.max(r);
        max_scaled = max_scaled.max(r / scale);
    }
    Ok((max_abs, max_scaled))
}
