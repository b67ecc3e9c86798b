//! Time-domain bath kernel `W(s) = ∫₀^∞ J(ω) e^{iωs} dω = K_c(s) + i K_s(s)`.
//!
//! With `J(ω) = Σ_j c_j/(ω − p_j)` each pole contributes
//! `c_j e^{ip_j s}[E₁(ip_j s) + 2πi·[p_j in the closed first quadrant]]`.
//! The E₁ pieces sum to a real function (the "E₁ part"); the rest is a short
//! sum of damped exponentials (the "residue part"), which carries all of
//! `K_s`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::model::{pole_omega_r, PartialFractions};
use crate::numerics::e1::{exp_neg_ei, scaled_unchecked};

#[derive(Debug, Clone, Copy)]
enum Regime {
    /// Γ̃ < 2: complex pole pair `±ω̃_r`, `±ω̃_r*`.
    Under { omega_r: Complex64, sigma: f64 },
    /// Γ̃ > 2: poles `±iy`, `±iY` with `yY = 1`.
    Over { y: f64, big_y: f64, rho: f64 },
}

/// One damped exponential `a·e^{iqs}` of the residue part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidueTerm {
    pub amplitude: Complex64,
    pub frequency: Complex64,
}

#[derive(Debug, Clone)]
pub struct Kernel {
    gamma: f64,
    regime: Regime,
    pf: PartialFractions,
    residue: Vec<ResidueTerm>,
}

impl Kernel {
    /// Fails for Γ̃ ≤ 0 and within `CRITICAL_DAMPING_GAP` of Γ̃ = 2.
    pub fn new(gamma: f64) -> Result<Self> {
        let pf = PartialFractions::new(gamma)?;
        let (regime, residue) = if gamma < 2.0 {
            let pole = pole_omega_r(gamma)?;
            let sigma = pole.sqrt_factor.re;
            (
                Regime::Under {
                    omega_r: pole.omega_r,
                    sigma,
                },
                vec![ResidueTerm {
                    amplitude: Complex64::new(PI / sigma, 0.0),
                    frequency: pole.omega_r,
                }],
            )
        } else {
            let rho = (gamma * gamma - 4.0).sqrt();
            let big_y = pf.poles[0].im;
            let y = pf.poles[2].im;
            let a = Complex64::new(0.0, PI / (2.0 * rho));
            (
                Regime::Over { y, big_y, rho },
                vec![
                    ResidueTerm {
                        amplitude: a,
                        frequency: Complex64::new(0.0, y),
                    },
                    ResidueTerm {
                        amplitude: -a,
                        frequency: Complex64::new(0.0, big_y),
                    },
                ],
            )
        };
        Ok(Self {
            gamma,
            regime,
            pf,
            residue,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn partial_fractions(&self) -> &PartialFractions {
        &self.pf
    }

    pub fn residue_terms(&self) -> &[ResidueTerm] {
        &self.residue
    }

    /// Slowest decay rate among the residue exponentials.
    pub fn slowest_decay(&self) -> f64 {
        self.residue
            .iter()
            .map(|r| r.frequency.im)
            .fold(f64::INFINITY, f64::min)
    }

    /// `W(s)`; `W(−s) = W(s)*`.
    pub fn eval(&self, s: f64) -> Complex64 {
        let a = s.abs();
        let w = self.residue_part(a) + self.e1_part(a);
        if s < 0.0 {
            w.conj()
        } else {
            w
        }
    }

    /// `K_c(s) = ∫₀^∞ J(ω) cos(ωs) dω`
    pub fn cos_transform(&self, s: f64) -> f64 {
        self.eval(s).re
    }

    /// `K_s(s) = ∫₀^∞ J(ω) sin(ωs) dω`
    pub fn sin_transform(&self, s: f64) -> f64 {
        self.eval(s).im
    }

    /// `Σ a_k e^{iq_k s}` for `s ≥ 0`.
    pub fn residue_part(&self, s: f64) -> Complex64 {
        self.residue
            .iter()
            .map(|r| r.amplitude * (Complex64::i() * r.frequency * s).exp())
            .sum()
    }

    /// Real E₁ contribution to `K_c` for `s ≥ 0`, with its limit at `s = 0`.
    pub fn e1_part(&self, s: f64) -> f64 {
        if s == 0.0 {
            return self.e1_part_at_zero();
        }
        match self.regime {
            Regime::Under { omega_r, sigma } => {
                let z = Complex64::i() * omega_r * s;
                (scaled_unchecked(z) + scaled_unchecked(-z)).im / sigma
            }
            Regime::Over { y, big_y, rho } => {
                let g = |x: f64| scaled_unchecked(Complex64::new(x, 0.0)).re - exp_neg_ei(x);
                (g(y * s) - g(big_y * s)) / (2.0 * rho)
            }
        }
    }

    /// E₁ part and its first two derivatives at `s > 0`.
    pub fn e1_part_derivatives(&self, s: f64) -> [f64; 3] {
        match self.regime {
            Regime::Under { omega_r, sigma } => {
                let mu = Complex64::i() * omega_r;
                let mut out = [0.0; 3];
                for m in [mu, -mu] {
                    let d = scaled_derivatives(m * s);
                    out[0] += d[0].im;
                    out[1] += (m * d[1]).im;
                    out[2] += (m * m * d[2]).im;
                }
                out.map(|v| v / sigma)
            }
            Regime::Over { y, big_y, rho } => {
                let g = |k: f64| -> [f64; 3] {
                    let x = k * s;
                    let f = scaled_unchecked(Complex64::new(x, 0.0)).re;
                    let e = exp_neg_ei(x);
                    // F' = F − 1/x, (e^{−x}Ei)' = −e^{−x}Ei + 1/x
                    let f1 = f - 1.0 / x;
                    let f2 = f - 1.0 / x + 1.0 / (x * x);
                    let e1 = -e + 1.0 / x;
                    let e2 = e - 1.0 / x - 1.0 / (x * x);
                    [f - e, k * (f1 - e1), k * k * (f2 - e2)]
                };
                let a = g(y);
                let b = g(big_y);
                [0, 1, 2].map(|n| (a[n] - b[n]) / (2.0 * rho))
            }
        }
    }

    /// `K_c(0) = ∫₀^∞ J(ω) dω`.
    pub fn cos_transform_at_zero(&self) -> f64 {
        self.residue_part(0.0).re + self.e1_part_at_zero()
    }

    fn e1_part_at_zero(&self) -> f64 {
        match self.regime {
            // the logarithms cancel; only the arguments survive
            Regime::Under { omega_r, sigma } => {
                (-(-omega_r * omega_r).arg() - PI) / sigma
            }
            Regime::Over { y, big_y, rho } => (big_y / y).ln() / rho,
        }
    }
}

/// `[F, F', F'']` for `F(w) = e^w E₁(w)`, using `F' = F − 1/w`.
fn scaled_derivatives(w: Complex64) -> [Complex64; 3] {
    let f = scaled_unchecked(w);
    let inv = w.inv();
    [f, f - inv, f - inv + inv * inv]
}

/// `K_c(s)` for a single evaluation.
pub fn omega_kernel_cos(s: f64, gamma: f64) -> Result<f64> {
    Ok(Kernel::new(gamma)?.cos_transform(s))
}

/// `K_s(s)` for a single evaluation.
pub fn omega_kernel_sin(s: f64, gamma: f64) -> Result<f64> {
    Ok(Kernel::new(gamma)?.sin_transform(s))
}
