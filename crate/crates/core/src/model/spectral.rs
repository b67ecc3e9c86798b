//! Spectral density of the surface and its pole structure.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::quartic_roots;

/// Distance from Γ̃ = 2 below which the pole pair is treated as degenerate.
pub const CRITICAL_DAMPING_GAP: f64 = 1e-6;

/// `J(ω) = Γ̃ω / ((ω² − 1)² + Γ̃²ω²)`, extended oddly to ω < 0.
pub fn spectral_density(omega: f64, gamma: f64) -> f64 {
    let w2 = omega * omega;
    gamma * omega / ((w2 - 1.0) * (w2 - 1.0) + gamma * gamma * w2)
}

/// `(J, J', J'')` at ω.
pub fn spectral_density_derivatives(omega: f64, gamma: f64) -> (f64, f64, f64) {
    let w = omega;
    let w2 = w * w;
    let c = gamma * gamma - 2.0;
    let q = w2 * w2 + c * w2 + 1.0;
    let q1 = 4.0 * w2 * w + 2.0 * c * w;
    let q2 = 12.0 * w2 + 2.0 * c;
    let n = gamma * w;
    let n1 = gamma;
    let j = spectral_density(omega, gamma);
    let j1 = n1 / q - n * q1 / (q * q);
    let j2 = -2.0 * n1 * q1 / (q * q) - n * q2 / (q * q) + 2.0 * n * q1 * q1 / (q * q * q);
    (j, j1, j2)
}

/// Resonance pole ω̃_r and the matching residue factor √(4 − Γ̃²).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoleData {
    pub omega_r: Complex64,
    /// Principal `√(4 − Γ̃²)`; purely imaginary for Γ̃ > 2.
    pub sqrt_factor: Complex64,
}

/// Upper-half-plane root of `(ω² − 1)² + Γ̃²ω² = 0`.
///
/// Below critical damping this is the closed form
/// `ω̃_r² = (2 − Γ̃² + iΓ̃√(4 − Γ̃²))/2` with `Re ω̃_r > 0`. Above it all roots
/// are imaginary and the one continuing that closed form (largest `Im`) is
/// taken from the quartic solver.
pub fn pole_omega_r(gamma: f64) -> Result<PoleData> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "gamma_tilde must be positive, got {gamma}"
        )));
    }
    let sqrt_factor = Complex64::new(4.0 - gamma * gamma, 0.0).sqrt();
    let omega_r = if gamma < 2.0 {
        let w2 = Complex64::new(2.0 - gamma * gamma, gamma * sqrt_factor.re) * 0.5;
        w2.sqrt()
    } else {
        let roots = quartic_roots(1.0, 0.0, gamma * gamma - 2.0, 0.0, 1.0)?;
        let top = roots
            .iter()
            .copied()
            .max_by(|a, b| a.im.total_cmp(&b.im))
            .expect("four roots");
        Complex64::new(0.0, top.im)
    };
    Ok(PoleData {
        omega_r,
        sqrt_factor,
    })
}

/// `J(ω) = Σ_j c_j / (ω − p_j)` over the four poles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialFractions {
    pub poles: [Complex64; 4],
    pub residues: [Complex64; 4],
}

impl PartialFractions {
    /// Fails within [`CRITICAL_DAMPING_GAP`] of Γ̃ = 2, where the poles merge.
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "gamma_tilde must be positive, got {gamma}"
            )));
        }
        if (gamma - 2.0).abs() < CRITICAL_DAMPING_GAP {
            return Err(Error::Domain(format!(
                "gamma_tilde = {gamma} is critically damped (double poles); shift it off 2"
            )));
        }
        // c_j = Γ̃/(4(p_j² − 1) + 2Γ̃²), written without the cancellation in
        // p_j² − 1
        let i = Complex64::i();
        if gamma < 2.0 {
            let w = pole_omega_r(gamma)?.omega_r;
            let c = 1.0 / (2.0 * i * (4.0 - gamma * gamma).sqrt());
            Ok(Self {
                poles: [w, -w, w.conj(), -w.conj()],
                residues: [c, c, c.conj(), c.conj()],
            })
        } else {
            // roots of x² + (2 − Γ̃²)x + 1 in x = ω², both negative
            let g2 = gamma * gamma;
            let root = (g2 - 4.0).sqrt();
            let y_big = ((g2 - 2.0 + gamma * root) / 2.0).sqrt();
            let y_small = 1.0 / y_big;
            let c = Complex64::new(1.0 / (2.0 * root), 0.0);
            Ok(Self {
                poles: [i * y_big, -i * y_big, i * y_small, -i * y_small],
                residues: [-c, -c, c, c],
            })
        }
    }

    pub fn eval(&self, omega: Complex64) -> Complex64 {
        self.poles
            .iter()
            .zip(&self.residues)
            .map(|(p, c)| c / (omega - p))
            .sum()
    }
}
