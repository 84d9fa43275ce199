use num_complex::Complex64;

use super::ThetaError;

const SYMMETRY_TOL: f64 = 1e-12;

/// A point of the genus-2 Siegel upper half-space.
#[derive(Debug, Clone, PartialEq)]
pub struct SiegelMatrix {
    tau: [[Complex64; 2]; 2],
    y_inv: [[f64; 2]; 2],
    det_y: f64,
    lambda_min: f64,
}

impl SiegelMatrix {
    /// Validates symmetry (to 1e-12, then symmetrizes) and positive
    /// definiteness of the imaginary part.
    pub fn new(tau: [[Complex64; 2]; 2]) -> Result<Self, ThetaError> {
        if tau.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(ThetaError::NonFinite);
        }
        let asym = (tau[0][1] - tau[1][0]).norm();
        if asym > SYMMETRY_TOL {
            return Err(ThetaError::NotSymmetric(asym));
        }
        let off = (tau[0][1] + tau[1][0]) * 0.5;
        let tau = [[tau[0][0], off], [off, tau[1][1]]];
        let (y11, y12, y22) = (tau[0][0].im, off.im, tau[1][1].im);
        let det_y = y11 * y22 - y12 * y12;
        if !(y11 > 0.0 && det_y > 0.0) {
            return Err(ThetaError::NotPositiveDefinite);
        }
        let tr = y11 + y22;
        let disc = ((y11 - y22) * (y11 - y22) + 4.0 * y12 * y12).sqrt();
        // smaller eigenvalue via det / larger, which avoids cancellation
        let lambda_min = det_y / (0.5 * (tr + disc));
        let y_inv = [[y22 / det_y, -y12 / det_y], [-y12 / det_y, y11 / det_y]];
        Ok(SiegelMatrix { tau, y_inv, det_y, lambda_min })
    }

    pub fn entries(&self) -> [[Complex64; 2]; 2] {
        self.tau
    }

    pub fn real(&self) -> [[f64; 2]; 2] {
        self.tau.map(|row| row.map(|z| z.re))
    }

    pub fn imag(&self) -> [[f64; 2]; 2] {
        self.tau.map(|row| row.map(|z| z.im))
    }

    pub fn det_imag(&self) -> f64 {
        self.det_y
    }

    pub fn min_eigenvalue_imag(&self) -> f64 {
        self.lambda_min
    }

    /// Y⁻¹ y.
    pub fn solve_imag(&self, y: [f64; 2]) -> [f64; 2] {
        let m = &self.y_inv;
        [m[0][0] * y[0] + m[0][1] * y[1], m[1][0] * y[0] + m[1][1] * y[1]]
    }

    /// τ·u for a real vector u.
    pub fn apply(&self, u: [f64; 2]) -> [Complex64; 2] {
        [self.tau[0][0] * u[0] + self.tau[0][1] * u[1], self.tau[1][0] * u[0] + self.tau[1][1] * u[1]]
    }

    /// τ + B for an integer symmetric B (B₁₂ is used for both off-diagonal
    /// entries).
    pub fn translated(&self, b11: i64, b12: i64, b22: i64) -> SiegelMatrix {
        let mut t = self.tau;
        t[0][0].re += b11 as f64;
        t[0][1].re += b12 as f64;
        t[1][0].re += b12 as f64;
        t[1][1].re += b22 as f64;
        SiegelMatrix::new(t).expect("translation preserves the Siegel half-space")
    }

    /// −τ⁻¹.
    pub fn inverted(&self) -> SiegelMatrix {
        let t = &self.tau;
        let det = t[0][0] * t[1][1] - t[0][1] * t[1][0];
        let inv = [[t[1][1] / det, -t[0][1] / det], [-t[1][0] / det, t[0][0] / det]];
        SiegelMatrix::new(inv.map(|row| row.map(|z| -z))).expect("inversion preserves the Siegel half-space")
    }
}
