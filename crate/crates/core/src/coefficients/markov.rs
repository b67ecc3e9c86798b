//! Long-time (Markov) limits of the coefficients.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{spectral_density, spectral_density_derivatives, Orientation, PartialFractions, SystemParams};
use crate::numerics::{Integrator, Tolerance};

/// `t → ∞` values of `D`, `f`, `ζ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarkovCoefficients {
    pub d_inf: f64,
    pub f_inf: f64,
    pub zeta_inf: f64,
}

/// Upper limit of the Doppler wavenumber integral; the weight `k²e^{−2k}` is
/// below 1e-31 there.
const K_MAX: f64 = 40.0;

/// Exact stationary coefficients for any velocity.
///
/// Writes `P(x)` as a superposition of plane waves `cos(k x cos θ)` with
/// weight `k²e^{−2k}A(θ)`, `A = n_x²cos²θ + n_y²sin²θ + n_z²`, so every
/// coefficient becomes a Doppler average of its value at rest.
pub fn markov_limit(sys: &SystemParams) -> Result<MarkovCoefficients> {
    sys.validate()?;
    PartialFractions::new(sys.gamma())?;
    let (gamma, delta, r0) = (sys.gamma(), sys.delta(), sys.r0());
    let u = sys.u().abs();
    let o = sys.orientation();
    let pref = r0 / (2.0 * PI);
    if u == 0.0 {
        let d_i = o.weights().d_i;
        let j = spectral_density(delta, gamma);
        let h = hilbert_transform(delta, gamma)?.0;
        let dz = pref * d_i / 8.0 * PI / 2.0 * j;
        return Ok(MarkovCoefficients {
            d_inf: dz,
            f_inf: pref * d_i / 8.0 * h,
            zeta_inf: dz,
        });
    }
    let pf = PartialFractions::new(gamma)?;
    let inner_q = Integrator::new(Tolerance::new(1e-11, 1e-15)).with_max_subdivisions(20_000);
    let outer_q = Integrator::new(Tolerance::new(1e-10, 1e-14)).with_max_subdivisions(20_000);
    let inner = |theta: f64| -> Result<[f64; 3]> {
        let c = theta.cos();
        let a = angular_weight(theta, &o);
        if a == 0.0 {
            return Ok([0.0; 3]);
        }
        let rate = u * c;
        let mut edges = vec![0.0, K_MAX];
        if rate > 0.0 {
            for x in [delta, 1.0 - delta, 1.0 + delta, delta - 1.0] {
                let k = x / rate;
                if k > 0.0 && k < K_MAX {
                    edges.push(k);
                }
            }
        }
        edges.sort_by(f64::total_cmp);
        edges.dedup();
        let mut acc = [0.0; 3];
        for w in edges.windows(2) {
            let r = inner_q.integrate_vec(
                |k| {
                    let q = k * rate;
                    let wt = k * k * (-2.0 * k).exp();
                    let (p, m) = (delta + q, delta - q);
                    let jd = PI / 4.0 * (spectral_density(p.abs(), gamma) + spectral_density(m.abs(), gamma));
                    let jz = PI / 4.0 * (spectral_density(p, gamma) + spectral_density(m, gamma));
                    let hf = 0.5 * (odd_hilbert(&pf, p) + odd_hilbert(&pf, m));
                    [wt * jd, wt * hf, wt * jz]
                },
                w[0],
                w[1],
            )?;
            for i in 0..3 {
                acc[i] += r.value[i];
            }
        }
        Ok(acc.map(|v| v * a))
    };
    let r = outer_q.try_integrate_vec(inner, 0.0, PI / 2.0)?;
    let scale = pref * 4.0 / (2.0 * PI);
    Ok(MarkovCoefficients {
        d_inf: scale * r.value[0],
        f_inf: scale * r.value[1],
        zeta_inf: scale * r.value[2],
    })
}

fn angular_weight(theta: f64, o: &Orientation) -> f64 {
    let [x2, y2, z2] = o.squares();
    let (s, c) = theta.sin_cos();
    x2 * c * c + y2 * s * s + z2
}

/// Second-order small-velocity expansion of [`markov_limit`].
pub fn markov_limit_small_u(sys: &SystemParams) -> Result<MarkovCoefficients> {
    sys.validate()?;
    let (gamma, delta, r0, u) = (sys.gamma(), sys.delta(), sys.r0(), sys.u());
    let w = sys.orientation().weights();
    let (j, _, j2) = spectral_density_derivatives(delta, gamma);
    let (h, _, h2) = hilbert_transform(delta, gamma)?;
    let dz = r0 / 32.0 * (w.d_i * j + 3.0 / 8.0 * w.d_a * u * u * j2);
    Ok(MarkovCoefficients {
        d_inf: dz,
        f_inf: r0 / (2.0 * PI) * (w.d_i / 8.0 * h + 3.0 / 64.0 * w.d_a * u * u * h2),
        zeta_inf: dz,
    })
}

/// `H(Δ) = ∫₀^∞ sin(Δs) K_c(s) ds = PV ∫₀^∞ J(ω) Δ/(Δ² − ω²) dω` and its first
/// two derivatives, for `Δ > 0`.
pub fn hilbert_transform(delta: f64, gamma: f64) -> Result<(f64, f64, f64)> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::InvalidParameter(format!("delta must be positive, got {delta}")));
    }
    let pf = PartialFractions::new(gamma)?;
    Ok(hilbert_pf(&pf, delta))
}

fn hilbert_pf(pf: &PartialFractions, x: f64) -> (f64, f64, f64) {
    let ln_x = x.ln();
    let mut h = Complex64::new(0.0, 0.0);
    let mut h1 = Complex64::new(0.0, 0.0);
    let mut h2 = Complex64::new(0.0, 0.0);
    for (p, c) in pf.poles.iter().zip(&pf.residues) {
        let l = ln_x - (-p).ln();
        let (a, b) = ((x - p).inv(), (x + p).inv());
        let g = a + b;
        let g1 = -(a * a) - b * b;
        let g2 = 2.0 * (a * a * a + b * b * b);
        h += c * l * g;
        h1 += c * (g / x + l * g1);
        h2 += c * (-g / (x * x) + 2.0 * g1 / x + l * g2);
    }
    (0.5 * h.re, 0.5 * h1.re, 0.5 * h2.re)
}

fn odd_hilbert(pf: &PartialFractions, x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.signum() * hilbert_pf(pf, x.abs()).0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{kernel_p, preset};
    use crate::numerics::integrate_adaptive;

    fn nv(u: f64) -> SystemParams {
        let (m, p) = preset("nv-nsi").unwrap();
        SystemParams::new(m, p, u).unwrap()
    }

    /// Principal value by subtracting the pole over a symmetric window.
    fn pv_oracle(delta: f64, gamma: f64) -> f64 {
        let j = |w: f64| spectral_density(w, gamma);
        let near = integrate_adaptive(
            |w| {
                let d = delta - w;
                if d == 0.0 {
                    0.0
                } else {
                    (j(w) - j(delta)) / d
                }
            },
            0.0,
            2.0 * delta,
            1e-12,
            1e-14,
        )
        .unwrap()
        .value;
        let mut edges = vec![2.0 * delta, 50.0, 1e4];
        if 2.0 * delta < 1.0 {
            edges.insert(1, 1.0);
        }
        let mut far = 0.0;
        for w in edges.windows(2) {
            far += integrate_adaptive(|x| j(x) / (delta - x), w[0], w[1], 1e-12, 1e-16).unwrap().value;
        }
        // tail ∫ Γ/ω³·(−1/ω)
        far -= gamma / (3.0 * 1e12);
        let plus = integrate_adaptive(|w| j(w) / (delta + w), 0.0, 1e4, 1e-12, 1e-16).unwrap().value + gamma / (3.0 * 1e12);
        0.5 * (near + far + plus)
    }

    #[test]
    fn hilbert_matches_principal_value() {
        for (d, g) in [(0.2, 1.0), (0.7, 0.5), (1.3, 1.0), (0.2, 3.0)] {
            let (h, _, _) = hilbert_transform(d, g).unwrap();
            let o = pv_oracle(d, g);
            assert!((h - o).abs() < 1e-7, "Δ={d} Γ={g}: {h} vs {o}");
        }
    }

    #[test]
    fn hilbert_derivatives() {
        for (d, g) in [(0.2, 1.0), (0.6, 0.3), (0.5, 2.5)] {
            let (_, h1, h2) = hilbert_transform(d, g).unwrap();
            let f = |x: f64| hilbert_transform(x, g).unwrap().0;
            let e = 1e-4;
            let d1 = (f(d + e) - f(d - e)) / (2.0 * e);
            let d2 = (f(d + e) - 2.0 * f(d) + f(d - e)) / (e * e);
            assert!((h1 - d1).abs() < 1e-6 * h1.abs().max(1.0));
            assert!((h2 - d2).abs() < 1e-4 * h2.abs().max(1.0), "{h2} vs {d2}");
        }
    }

    #[test]
    fn plane_wave_representation_of_p() {
        for o in [Orientation::X, Orientation::Y, Orientation::Z, Orientation::normalized(1.0, 2.0, 2.0).unwrap()] {
            for x in [0.0, 0.3, 1.0, 2.5] {
                let v = integrate_adaptive(
                    |th| {
                        let c = th.cos();
                        let k = integrate_adaptive(|k| k * k * (-2.0 * k).exp() * (k * x * c).cos(), 0.0, K_MAX, 1e-12, 1e-15)
                            .unwrap()
                            .value;
                        angular_weight(th, &o) * k
                    },
                    0.0,
                    PI / 2.0,
                    1e-11,
                    1e-14,
                )
                .unwrap()
                .value
                    * 4.0
                    / (2.0 * PI);
                assert!((v - kernel_p(x, &o)).abs() < 1e-10, "x = {x}: {v} vs {}", kernel_p(x, &o));
            }
        }
    }

    #[test]
    fn rest_values() {
        let m = markov_limit(&nv(0.0)).unwrap();
        let s = markov_limit_small_u(&nv(0.0)).unwrap();
        assert_eq!(m, s);
        let j = spectral_density(0.2, 1.0);
        assert!((m.d_inf - 1e-2 / 32.0 * j).abs() < 1e-18);
    }

    #[test]
    fn exact_agrees_with_expansion_at_small_u() {
        for o in [Orientation::X, Orientation::Z] {
            let sys = nv(0.02).with_orientation(o);
            let a = markov_limit(&sys).unwrap();
            let b = markov_limit_small_u(&sys).unwrap();
            let rest = markov_limit(&sys.with_u(0.0)).unwrap();
            let corr = (b.d_inf - rest.d_inf).abs();
            assert!((a.d_inf - b.d_inf).abs() < 0.05 * corr, "{a:?} {b:?}");
            assert!((a.f_inf - b.f_inf).abs() < 0.05 * (b.f_inf - rest.f_inf).abs());
            assert!((a.zeta_inf - b.zeta_inf).abs() < 0.05 * corr);
        }
    }

    #[test]
    fn zeta_never_exceeds_d() {
        for u in [0.0, 0.1, 0.5, 2.0] {
            let m = markov_limit(&nv(u)).unwrap();
            assert!(m.zeta_inf <= m.d_inf * (1.0 + 1e-12), "u = {u}");
        }
    }

    #[test]
    fn matches_long_time_trace() {
        let sys = nv(0.3);
        let g = crate::numerics::linspace(0.0, 2.0 * PI / 0.2 * 200.0, 20001);
        let t = crate::coefficients::coefficients_e1(&sys, &g).unwrap();
        let m = markov_limit(&sys).unwrap();
        let n = g.len() - 1;
        // average over the last cycle to remove the residual ringing
        let tail = &t.zeta[n - 100..];
        let avg: f64 = tail.iter().sum::<f64>() / tail.len() as f64;
        assert!((avg - m.zeta_inf).abs() < 1e-3 * m.d_inf, "{avg} vs {}", m.zeta_inf);
        let tail_d = &t.d[n - 100..];
        let avg_d: f64 = tail_d.iter().sum::<f64>() / tail_d.len() as f64;
        assert!((avg_d - m.d_inf).abs() < 1e-3 * m.d_inf, "{avg_d} vs {}", m.d_inf);
    }
}
