//! Archimedean invariants of a genus-2 Riemann surface from its period
//! matrix.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::quadrature::{torus_average, QuadEstimate, QuadratureConfig};
use super::{SiegelMatrix, ThetaChar, ThetaError, ThetaSeries};

/// Even theta-nulls with normalized modulus (det Y)^{1/4}|θ[c](0)| below this
/// are treated as vanishing.
pub const DEFAULT_NULL_FLOOR: f64 = 1e-10;

fn log_two_pi() -> f64 {
    (2.0 * PI).ln()
}

/// log ‖Δ₂‖ = log(2⁻¹² (det Y)⁵ ∏_{even c} |θ[c](0)|²).
pub fn log_delta2(tau: &SiegelMatrix, tol: f64) -> Result<f64, ThetaError> {
    log_delta2_with_floor(tau, tol, DEFAULT_NULL_FLOOR)
}

pub fn log_delta2_with_floor(tau: &SiegelMatrix, tol: f64, floor: f64) -> Result<f64, ThetaError> {
    let series = ThetaSeries::new(tau, tol)?;
    let quarter_log_det = 0.25 * tau.det_imag().ln();
    let zero = [Complex64::new(0.0, 0.0); 2];
    let mut total = -12.0 * 2f64.ln();
    for c in ThetaChar::even() {
        let (s, scale) = series.reduced(c, zero);
        debug_assert_eq!(scale, 0.0);
        let normalized = tau.det_imag().powf(0.25) * s.norm();
        if normalized < floor {
            return Err(ThetaError::DegenerateThetaNull { characteristic: c, modulus: s.norm() });
        }
        total += 2.0 * (quarter_log_det + s.norm().ln());
    }
    Ok(total)
}

/// Same quantity as `log_delta2`, from ‖θ‖ at the ten half-periods τa + b.
pub fn log_delta2_direct(tau: &SiegelMatrix, tol: f64) -> Result<f64, ThetaError> {
    let series = ThetaSeries::new(tau, tol)?;
    let mut total = -12.0 * 2f64.ln();
    for c in ThetaChar::even() {
        let ta = tau.apply(c.a());
        let b = c.b();
        let z = [ta[0] + b[0], ta[1] + b[1]];
        total += 2.0 * series.log_norm(z);
    }
    Ok(total)
}

/// log ‖H‖ = ½ ∫_{Pic¹} log‖θ‖ ν², i.e. the mean of log‖θ‖(τu + v) over
/// (u, v) ∈ [0,1)⁴. Samples with ‖θ‖ below machine epsilon are rejected.
pub fn log_h(tau: &SiegelMatrix, q: &QuadratureConfig, tol: f64) -> Result<QuadEstimate, ThetaError> {
    let series = ThetaSeries::new(tau, tol)?;
    let quarter_log_det = 0.25 * tau.det_imag().ln();
    let est = torus_average(q, |p| {
        let tu = tau.apply([p[0], p[1]]);
        let z = [tu[0] + p[2], tu[1] + p[3]];
        let (s, _) = series.reduced(ThetaChar::ZERO, z);
        let norm = s.norm();
        let log_norm = quarter_log_det + norm.ln();
        (log_norm.exp() >= f64::EPSILON).then_some(log_norm)
    })?;
    if est.stderr > 10.0 * q.target_stderr {
        return Err(ThetaError::QuadratureUnstable { stderr: est.stderr, target: q.target_stderr });
    }
    Ok(est)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArchReport {
    pub log_delta2: f64,
    pub log_h: f64,
    pub log_h_stderr: f64,
    /// Faltings delta, −16 log 2π − log‖Δ₂‖ − 4 log‖H‖.
    pub delta_f: f64,
    pub log_s: f64,
    /// −½ log‖Δ₂‖ + 10 log‖H‖.
    pub phi: f64,
    pub phi_stderr: f64,
    /// From 10λ = −20 log 2π − log‖Δ₂‖.
    pub lambda: f64,
    /// φ/30 + δ_F/12 − (2/3) log 2π.
    pub lambda_recombined: f64,
    /// |10·λ_recombined − (−20 log 2π − log‖Δ₂‖)|.
    pub residual: f64,
    /// Uncorrelated propagation of the ‖H‖ error through the recombination,
    /// on the same 10λ scale as `residual`.
    pub residual_stderr: f64,
    /// |φ − (2 log S + 2 log‖H‖)|.
    pub s_residual: f64,
    pub accepted: u64,
    pub rejected: u64,
}

pub fn arch_invariants(tau: &SiegelMatrix, q: &QuadratureConfig, tol: f64) -> Result<ArchReport, ThetaError> {
    let ld = log_delta2(tau, tol)?;
    let h = log_h(tau, q, tol)?;
    let l2p = log_two_pi();
    let delta_f = -16.0 * l2p - ld - 4.0 * h.mean;
    let log_s = -16.0 * l2p - 1.25 * ld - delta_f;
    let phi = -0.5 * ld + 10.0 * h.mean;
    let phi_stderr = 10.0 * h.stderr;
    let delta_f_stderr = 4.0 * h.stderr;
    let ten_lambda = -20.0 * l2p - ld;
    let lambda_recombined = phi / 30.0 + delta_f / 12.0 - 2.0 / 3.0 * l2p;
    Ok(ArchReport {
        log_delta2: ld,
        log_h: h.mean,
        log_h_stderr: h.stderr,
        delta_f,
        log_s,
        phi,
        phi_stderr,
        lambda: ten_lambda / 10.0,
        lambda_recombined,
        residual: (10.0 * lambda_recombined - ten_lambda).abs(),
        residual_stderr: 10.0 * (phi_stderr / 30.0 + delta_f_stderr / 12.0),
        s_residual: (phi - (2.0 * log_s + 2.0 * h.mean)).abs(),
        accepted: h.accepted,
        rejected: h.rejected,
    })
}
