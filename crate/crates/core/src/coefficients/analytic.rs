//! Small-velocity expansion of the coefficients.
//!
//! The residue part of the kernel is integrated by parts three times against
//! the exact `P(ut)`. The E₁ part uses `P(x) ≈ P(0) − (3/64)d_a x²`, which turns
//! the `x²` term into a second derivative in the frequency argument.
//! Underdamped surfaces only.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{kernel_p_derivatives, SystemParams};
use crate::numerics::e1::scaled_unchecked;
use crate::numerics::exp_integral_e1;

use super::kernel::Kernel;
use super::trace::{check_trace_grid, CoefficientTrace, Method};

/// Analytic trace, accurate to `O(u⁴)` in the E₁ part.
pub fn coefficients_analytic_small_u(sys: &SystemParams, grid: &[f64]) -> Result<CoefficientTrace> {
    sys.validate()?;
    check_trace_grid(grid)?;
    let gamma = sys.gamma();
    if gamma >= 2.0 {
        return Err(Error::Domain(format!(
            "analytic coefficients need an underdamped surface (gamma_tilde < 2), got {gamma}"
        )));
    }
    let kernel = Kernel::new(gamma)?;
    let pref = sys.r0() / (2.0 * PI);
    let delta = sys.delta();
    let n = grid.len();
    let (mut d, mut f, mut z) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    for &t in grid {
        let plus = psi(&kernel, sys, delta, t)?;
        let minus = psi(&kernel, sys, -delta, t)?;
        let even = (plus + minus) * 0.5;
        let odd = (plus - minus) / Complex64::new(0.0, 2.0);
        d.push(pref * even.re);
        f.push(pref * odd.re);
        z.push(pref * odd.im);
    }
    CoefficientTrace::from_samples(grid.to_vec(), d, f, z, Method::Analytic, delta)
}

/// `Ψ(ν, t) = ∫₀^t e^{iνs} W(s) P(us) ds` in the small-velocity approximation.
pub(crate) fn psi(kernel: &Kernel, sys: &SystemParams, nu: f64, t: f64) -> Result<Complex64> {
    if t == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let u = sys.u();
    let o = sys.orientation();
    let w = o.weights();
    let (p_t, p1_t, p2_t) = kernel_p_derivatives(u * t, &o);
    let (p_0, p1_0, p2_0) = kernel_p_derivatives(0.0, &o);
    let i = Complex64::i();

    let mut residue = Complex64::new(0.0, 0.0);
    for term in kernel.residue_terms() {
        let kappa = term.frequency + nu;
        let ik = i * kappa;
        let e = (ik * t).exp();
        let r = (e * p_t - p_0) / ik - u * (e * p1_t - p1_0) / (ik * ik) + u * u * (e * p2_t - p2_0) / (ik * ik * ik);
        residue += term.amplitude * r;
    }

    let (phi, phi_nn) = e1_transform(kernel, nu, t)?;
    let e1 = phi * (w.d_i / 8.0) + phi_nn * (3.0 / 64.0 * w.d_a * u * u);
    Ok(residue + e1)
}

/// `Φ(ν) = ∫₀^t e^{iνs} W_E₁(s) ds` and `∂²Φ/∂ν²`.
fn e1_transform(kernel: &Kernel, nu: f64, t: f64) -> Result<(Complex64, Complex64)> {
    let pf = kernel.partial_fractions();
    let i = Complex64::i();
    let e = (i * nu * t).exp();
    // β − α = −iν for every pole
    let bma = Complex64::new(0.0, -nu);
    let common = -exp_integral_e1(bma * t)? - bma.ln();
    let mut phi = Complex64::new(0.0, 0.0);
    let mut phi_nn = Complex64::new(0.0, 0.0);
    for (p, c) in pf.poles.iter().zip(&pf.residues) {
        let beta = i * p;
        let alpha = beta - bma;
        let ef = e * scaled_unchecked(beta * t);
        let b0 = ef + common + beta.ln();
        let b1 = ef * t + (1.0 - e) / bma;
        let b2 = ef * t * t + (-(e * t) * bma + 1.0 - e) / (bma * bma);
        let a2 = alpha * alpha;
        phi += c * b0 / alpha;
        // ∂²_ν = −∂²_α
        phi_nn -= c * (b2 / alpha - 2.0 * b1 / a2 + 2.0 * b0 / (a2 * alpha));
    }
    Ok((phi, phi_nn))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::numeric::coefficients_e1;
    use crate::coefficients::trace::cycle_grid;
    use crate::model::{kernel_p, preset, Orientation};
    use crate::numerics::Integrator;

    fn nv(u: f64) -> SystemParams {
        let (m, p) = preset("nv-nsi").unwrap();
        SystemParams::new(m, p, u).unwrap()
    }

    #[test]
    fn e1_transform_matches_quadrature() {
        let k = Kernel::new(1.0).unwrap();
        let q = Integrator::new(crate::numerics::Tolerance::new(1e-12, 1e-14)).with_max_subdivisions(20_000);
        for (nu, t) in [(0.2, 5.0), (-0.2, 5.0), (0.9, 40.0), (1.5, 0.3)] {
            let (phi, phi_nn) = e1_transform(&k, nu, t).unwrap();
            let v = q
                .integrate_vec(
                    |s| {
                        let w = k.e1_part(s);
                        let (sn, cs) = (nu * s).sin_cos();
                        [w * cs, w * sn, -s * s * w * cs, -s * s * w * sn]
                    },
                    0.0,
                    t,
                )
                .unwrap()
                .value;
            assert!((phi - Complex64::new(v[0], v[1])).norm() < 1e-9, "ν={nu} t={t}: {phi}");
            assert!((phi_nn - Complex64::new(v[2], v[3])).norm() < 1e-8 * t * t, "ν={nu} t={t}: {phi_nn}");
        }
    }

    #[test]
    fn exact_at_rest() {
        // with u = 0 the expansion has no truncation error
        let sys = nv(0.0).with_orientation(Orientation::Z);
        let g = cycle_grid(0.2, 3.0, 8).unwrap();
        let a = coefficients_analytic_small_u(&sys, &g).unwrap();
        let b = coefficients_e1(&sys, &g).unwrap();
        for k in 0..g.len() {
            assert!((a.d[k] - b.d[k]).abs() < 1e-10, "{k}: {} vs {}", a.d[k], b.d[k]);
            assert!((a.f[k] - b.f[k]).abs() < 1e-10);
            assert!((a.zeta[k] - b.zeta[k]).abs() < 1e-10);
        }
    }

    #[test]
    fn error_shrinks_as_u_to_the_fourth() {
        let t = 2.0 * 2.0 * PI / 0.2;
        let g = crate::numerics::linspace(0.0, t, 41);
        let err = |u: f64| {
            let sys = nv(u);
            let a = coefficients_analytic_small_u(&sys, &g).unwrap();
            let b = coefficients_e1(&sys, &g).unwrap();
            (0..g.len()).map(|k| (a.d[k] - b.d[k]).abs()).fold(0.0, f64::max)
        };
        let (e1, e2) = (err(0.01), err(0.005));
        assert!(e1 / e2 > 10.0, "ratio {}", e1 / e2);
    }

    #[test]
    fn quadratic_coefficient_matches_kernel() {
        for o in [Orientation::X, Orientation::Y, Orientation::Z] {
            let x = 1e-3;
            let c2 = (kernel_p(x, &o) - kernel_p(0.0, &o)) / (x * x);
            assert!((c2 + 3.0 / 64.0 * o.weights().d_a).abs() < 1e-5);
        }
    }

    #[test]
    fn rejects_overdamped() {
        let sys = nv(0.01);
        let mut s = sys.clone();
        s.material.gamma_tilde = 3.0;
        assert!(coefficients_analytic_small_u(&s, &[0.0, 1.0]).is_err());
    }
}
