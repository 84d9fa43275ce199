//! Genus-2 theta functions and the archimedean invariants built from them.

mod quadrature;
mod siegel;
mod surface;

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

pub use quadrature::{torus_average, QuadEstimate, QuadMethod, QuadratureConfig};
pub use siegel::SiegelMatrix;
pub use surface::{
    arch_invariants, log_delta2, log_delta2_direct, log_delta2_with_floor, log_h, ArchReport, DEFAULT_NULL_FLOOR,
};

/// Default absolute tolerance of a single theta evaluation.
pub const DEFAULT_THETA_TOL: f64 = 1e-12;
/// Largest lattice radius the series will use.
pub const MAX_RADIUS: u32 = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThetaError {
    #[error("imaginary part of the period matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("period matrix is not symmetric: |tau12 - tau21| = {0:e}")]
    NotSymmetric(f64),
    #[error("period matrix has a non-finite entry")]
    NonFinite,
    #[error("tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
    #[error("series radius {needed} exceeds cap {cap} (Im tau nearly degenerate)")]
    TruncationOverflow { needed: u32, cap: u32 },
    #[error("even theta-null {characteristic} vanishes (|theta| = {modulus:e}); period matrix is a product of elliptic curves")]
    DegenerateThetaNull { characteristic: ThetaChar, modulus: f64 },
    #[error("quadrature standard error {stderr:e} exceeds 10x target {target:e}")]
    QuadratureUnstable { stderr: f64, target: f64 },
    #[error("invalid quadrature configuration: {0}")]
    InvalidConfig(String),
}

/// Half-integer characteristic [a; b], stored as numerators over 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ThetaChar {
    a: [u8; 2],
    b: [u8; 2],
}

impl ThetaChar {
    pub const ZERO: ThetaChar = ThetaChar { a: [0, 0], b: [0, 0] };

    /// Characteristic with entries `a[i]/2`, `b[i]/2`; each numerator 0 or 1.
    pub fn new(a: [u8; 2], b: [u8; 2]) -> Self {
        assert!(a.iter().chain(&b).all(|&x| x <= 1), "characteristic numerators must be 0 or 1");
        ThetaChar { a, b }
    }

    pub fn a(&self) -> [f64; 2] {
        self.a.map(|x| f64::from(x) / 2.0)
    }

    pub fn b(&self) -> [f64; 2] {
        self.b.map(|x| f64::from(x) / 2.0)
    }

    /// exp(4πi a·b) = (−1)^(4 a·b).
    pub fn parity(&self) -> i8 {
        let dot = self.a[0] * self.b[0] + self.a[1] * self.b[1];
        if dot.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn is_even(&self) -> bool {
        self.parity() == 1
    }

    pub fn all() -> Vec<ThetaChar> {
        let bits = [[0, 0], [0, 1], [1, 0], [1, 1]];
        bits.iter().flat_map(|&a| bits.iter().map(move |&b| ThetaChar { a, b })).collect()
    }

    pub fn even() -> Vec<ThetaChar> {
        Self::all().into_iter().filter(ThetaChar::is_even).collect()
    }

    pub fn odd() -> Vec<ThetaChar> {
        Self::all().into_iter().filter(|c| !c.is_even()).collect()
    }
}

impl fmt::Display for ThetaChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h = |x: u8| if x == 0 { "0" } else { "1/2" };
        write!(f, "[a=({},{}) b=({},{})]", h(self.a[0]), h(self.a[1]), h(self.b[0]), h(self.b[1]))
    }
}

/// Truncated theta series for a fixed period matrix and tolerance.
///
/// Sums are returned in reduced form: θ[a,b](z) = exp(π yᵀY⁻¹y)·S, where every
/// term of S has modulus exp(−π wᵀYw) ≤ 1 with w = n + a + Y⁻¹y. The
/// tolerance bounds the truncation error of S, which is the absolute error of
/// θ when Im z = 0 and of ‖θ‖/(det Y)^{1/4} in general.
#[derive(Debug, Clone)]
pub struct ThetaSeries {
    tau: SiegelMatrix,
    radius: f64,
}

impl ThetaSeries {
    pub fn new(tau: &SiegelMatrix, tol: f64) -> Result<Self, ThetaError> {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(ThetaError::BadTolerance(tol));
        }
        let radius = truncation_radius(tau.min_eigenvalue_imag(), tol)?;
        Ok(ThetaSeries { tau: tau.clone(), radius: f64::from(radius) })
    }

    pub fn tau(&self) -> &SiegelMatrix {
        &self.tau
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// (S, π yᵀY⁻¹y) with θ = exp(second)·S.
    pub fn reduced(&self, c: ThetaChar, z: [Complex64; 2]) -> (Complex64, f64) {
        let x = self.tau.real();
        let y_mat = self.tau.imag();
        let y = [z[0].im, z[1].im];
        let v = self.tau.solve_imag(y);
        let a = c.a();
        let b = c.b();
        let shift = [z[0].re + b[0], z[1].re + b[1]];
        let r = self.radius;
        let center = [-v[0] - a[0], -v[1] - a[1]];
        let n1_lo = (center[0] - r).ceil() as i64;
        let n1_hi = (center[0] + r).floor() as i64;
        let n2_lo = (center[1] - r).ceil() as i64;
        let n2_hi = (center[1] + r).floor() as i64;
        let mut sum = Complex64::new(0.0, 0.0);
        for n1 in n1_lo..=n1_hi {
            let u1 = n1 as f64 + a[0];
            let w1 = u1 + v[0];
            for n2 in n2_lo..=n2_hi {
                let u2 = n2 as f64 + a[1];
                let w2 = u2 + v[1];
                if w1 * w1 + w2 * w2 > r * r {
                    continue;
                }
                let quad_y = y_mat[0][0] * w1 * w1 + 2.0 * y_mat[0][1] * w1 * w2 + y_mat[1][1] * w2 * w2;
                let quad_x = x[0][0] * u1 * u1 + 2.0 * x[0][1] * u1 * u2 + x[1][1] * u2 * u2;
                let phase = PI * quad_x + 2.0 * PI * (u1 * shift[0] + u2 * shift[1]);
                sum += Complex64::from_polar((-PI * quad_y).exp(), phase);
            }
        }
        let scale = PI * (y[0] * v[0] + y[1] * v[1]);
        (sum, scale)
    }

    pub fn theta(&self, c: ThetaChar, z: [Complex64; 2]) -> Complex64 {
        let (s, scale) = self.reduced(c, z);
        s * scale.exp()
    }

    /// ‖θ‖(z) = (det Y)^{1/4} exp(−π yᵀY⁻¹y) |θ(z)|.
    pub fn norm(&self, z: [Complex64; 2]) -> f64 {
        self.tau.det_imag().powf(0.25) * self.reduced(ThetaChar::ZERO, z).0.norm()
    }

    /// log ‖θ‖(z); −∞ on the theta divisor.
    pub fn log_norm(&self, z: [Complex64; 2]) -> f64 {
        0.25 * self.tau.det_imag().ln() + self.reduced(ThetaChar::ZERO, z).0.norm().ln()
    }
}

/// Smallest integer radius R with Σ_{k ≥ R} π(1+√2)(2k+1) exp(−πλk²) < tol,
/// a bound for the lattice points with ‖w‖ > R.
fn truncation_radius(lambda_min: f64, tol: f64) -> Result<u32, ThetaError> {
    let tail = |r: u32| -> f64 {
        let mut total = 0.0;
        for k in r.. {
            let kf = f64::from(k);
            let term = PI * (1.0 + std::f64::consts::SQRT_2) * (2.0 * kf + 1.0) * (-PI * lambda_min * kf * kf).exp();
            total += term;
            if term < total * 1e-17 || term == 0.0 {
                break;
            }
        }
        total
    };
    (1..=MAX_RADIUS)
        .find(|&r| tail(r) < tol)
        .ok_or(ThetaError::TruncationOverflow { needed: MAX_RADIUS + 1, cap: MAX_RADIUS })
}

/// θ[a,b](z; τ) = Σ_n exp(πi (n+a)ᵀτ(n+a) + 2πi (n+a)ᵀ(z+b)).
pub fn theta(c: ThetaChar, z: [Complex64; 2], tau: &SiegelMatrix, tol: f64) -> Result<Complex64, ThetaError> {
    Ok(ThetaSeries::new(tau, tol)?.theta(c, z))
}

pub fn theta_norm(z: [Complex64; 2], tau: &SiegelMatrix, tol: f64) -> Result<f64, ThetaError> {
    Ok(ThetaSeries::new(tau, tol)?.norm(z))
}
