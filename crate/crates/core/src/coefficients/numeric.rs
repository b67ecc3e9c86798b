//! Coefficient traces from the closed-form kernel and from direct double
//! quadrature.

use std::f64::consts::PI;

use crate::error::Result;
use crate::model::{kernel_p, spectral_density, SystemParams};
use crate::numerics::{Integrator, Tolerance};
use crate::parallel::map_ordered;

use super::kernel::Kernel;
use super::trace::{check_trace_grid, CoefficientTrace, Method};

/// Time-quadrature tolerance used by [`coefficients_e1`].
pub const E1_TOLERANCE: Tolerance = Tolerance {
    rel: 1e-10,
    abs: 1e-13,
};

/// Default frequency cutoff of the brute-force kernel.
pub const DEFAULT_OMEGA_MAX: f64 = 50.0;

/// Samples `D`, `f`, `ζ` on `grid` using the closed-form kernel.
///
/// Each grid interval is integrated independently and the pieces are
/// prefix-summed, so the cost is linear in the grid length.
pub fn coefficients_e1(sys: &SystemParams, grid: &[f64]) -> Result<CoefficientTrace> {
    coefficients_e1_with(sys, grid, &Integrator::new(E1_TOLERANCE))
}

pub fn coefficients_e1_with(
    sys: &SystemParams,
    grid: &[f64],
    integrator: &Integrator,
) -> Result<CoefficientTrace> {
    sys.validate()?;
    check_trace_grid(grid)?;
    let kernel = Kernel::new(sys.gamma())?;
    let (delta, u, o) = (sys.delta(), sys.u(), sys.orientation());
    let integrand = |s: f64| -> [f64; 3] {
        let w = kernel.eval(s);
        let p = kernel_p(u * s, &o);
        let (sn, cs) = (delta * s).sin_cos();
        [cs * w.re * p, sn * w.re * p, sn * w.im * p]
    };
    let pieces = integrate_intervals(grid, |lo, hi| {
        Ok(integrator.integrate_vec(integrand, lo, hi)?.value)
    })?;
    assemble(sys, grid, &pieces, Method::E1)
}

/// Options for [`coefficients_brute`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BruteOptions {
    /// Upper limit of the frequency integral.
    pub omega_max: f64,
    pub time_tolerance: Tolerance,
    pub frequency_tolerance: Tolerance,
    pub max_subdivisions: usize,
}

impl Default for BruteOptions {
    fn default() -> Self {
        Self {
            omega_max: DEFAULT_OMEGA_MAX,
            time_tolerance: Tolerance::new(1e-9, 1e-12),
            frequency_tolerance: Tolerance::new(1e-10, 1e-13),
            max_subdivisions: 200_000,
        }
    }
}

/// Reference trace from the defining double integral, with the kernel
/// computed by frequency quadrature at every time node. Slow.
pub fn coefficients_brute(sys: &SystemParams, grid: &[f64]) -> Result<CoefficientTrace> {
    coefficients_brute_with(sys, grid, &BruteOptions::default())
}

pub fn coefficients_brute_with(
    sys: &SystemParams,
    grid: &[f64],
    opts: &BruteOptions,
) -> Result<CoefficientTrace> {
    sys.validate()?;
    check_trace_grid(grid)?;
    if !(opts.omega_max.is_finite() && opts.omega_max > 1.0) {
        return Err(crate::Error::InvalidParameter(format!(
            "omega_max must exceed 1, got {}",
            opts.omega_max
        )));
    }
    let gamma = sys.gamma();
    let (delta, u, o) = (sys.delta(), sys.u(), sys.orientation());
    let edges = frequency_edges(gamma, opts.omega_max);
    let inner = Integrator::new(opts.frequency_tolerance).with_max_subdivisions(opts.max_subdivisions);
    let outer = Integrator::new(opts.time_tolerance).with_max_subdivisions(opts.max_subdivisions);
    let kernel = |s: f64| -> Result<[f64; 2]> {
        let mut acc = [0.0; 2];
        for w in edges.windows(2) {
            let r = inner.integrate_vec(
                |om| {
                    let j = spectral_density(om, gamma);
                    let (sn, cs) = (om * s).sin_cos();
                    [j * cs, j * sn]
                },
                w[0],
                w[1],
            )?;
            acc[0] += r.value[0];
            acc[1] += r.value[1];
        }
        Ok(acc)
    };
    let integrand = |s: f64| -> Result<[f64; 3]> {
        let [kc, ks] = kernel(s)?;
        let p = kernel_p(u * s, &o);
        let (sn, cs) = (delta * s).sin_cos();
        Ok([cs * kc * p, sn * kc * p, sn * ks * p])
    };
    let pieces = integrate_intervals(grid, |lo, hi| Ok(outer.try_integrate_vec(integrand, lo, hi)?.value))?;
    assemble(sys, grid, &pieces, Method::Brute)
}

/// Frequency breakpoints that isolate the resonance at ω = 1.
fn frequency_edges(gamma: f64, omega_max: f64) -> Vec<f64> {
    let mut e = vec![0.0, 1.0, omega_max];
    let width = 20.0 * gamma;
    if width < 0.5 {
        e.push(1.0 - width);
        e.push(1.0 + width);
    }
    e.retain(|x| *x >= 0.0 && *x <= omega_max);
    e.sort_by(f64::total_cmp);
    e.dedup();
    e
}

fn integrate_intervals<F>(grid: &[f64], f: F) -> Result<Vec<[f64; 3]>>
where
    F: Fn(f64, f64) -> Result<[f64; 3]> + Sync + Send,
{
    let idx: Vec<usize> = (1..grid.len()).collect();
    map_ordered(&idx, |&k| f(grid[k - 1], grid[k])).into_iter().collect()
}

fn assemble(sys: &SystemParams, grid: &[f64], pieces: &[[f64; 3]], method: Method) -> Result<CoefficientTrace> {
    let pref = sys.r0() / (2.0 * PI);
    let n = grid.len();
    let (mut d, mut f, mut z) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    let mut acc = [0.0; 3];
    d.push(0.0);
    f.push(0.0);
    z.push(0.0);
    for p in pieces {
        for i in 0..3 {
            acc[i] += p[i];
        }
        d.push(pref * acc[0]);
        f.push(pref * acc[1]);
        z.push(pref * acc[2]);
    }
    CoefficientTrace::from_samples(grid.to_vec(), d, f, z, method, sys.delta())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::trace::cycle_grid;
    use crate::model::{preset, Orientation};

    fn nv(u: f64) -> SystemParams {
        let (m, p) = preset("nv-nsi").unwrap();
        SystemParams::new(m, p, u).unwrap()
    }

    #[test]
    fn starts_at_zero_and_rejects_bad_grid() {
        let sys = nv(0.01);
        let t = coefficients_e1(&sys, &[0.0, 1.0, 2.0]).unwrap();
        assert_eq!((t.d[0], t.f[0], t.zeta[0]), (0.0, 0.0, 0.0));
        assert!(coefficients_e1(&sys, &[0.5, 1.0]).is_err());
        assert!(coefficients_e1(&sys, &[0.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn zero_coupling_gives_zero() {
        let sys = nv(0.01).with_r0(0.0);
        let t = coefficients_e1(&sys, &cycle_grid(0.2, 2.0, 10).unwrap()).unwrap();
        assert!(t.d.iter().chain(&t.f).chain(&t.zeta).chain(&t.cum_d).all(|x| *x == 0.0));
    }

    #[test]
    fn mirrored_velocity_is_identical() {
        let g = cycle_grid(0.2, 3.0, 20).unwrap();
        let a = coefficients_e1(&nv(0.02), &g).unwrap();
        let b = coefficients_e1(&nv(-0.02), &g).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn linear_in_orientation_squares() {
        let g = cycle_grid(0.2, 2.0, 20).unwrap();
        let base = nv(0.05);
        let ax: Vec<_> = [Orientation::X, Orientation::Y, Orientation::Z]
            .iter()
            .map(|o| coefficients_e1(&base.with_orientation(*o), &g).unwrap())
            .collect();
        let o = Orientation::normalized(1.0, 2.0, 3.0).unwrap();
        let mixed = coefficients_e1(&base.with_orientation(o), &g).unwrap();
        let w = o.squares();
        for k in 0..g.len() {
            let d = w[0] * ax[0].d[k] + w[1] * ax[1].d[k] + w[2] * ax[2].d[k];
            let z = w[0] * ax[0].zeta[k] + w[1] * ax[1].zeta[k] + w[2] * ax[2].zeta[k];
            assert!((d - mixed.d[k]).abs() < 1e-12, "{k}");
            assert!((z - mixed.zeta[k]).abs() < 1e-12, "{k}");
        }
    }

    #[test]
    fn matches_brute_force() {
        let sys = nv(0.05);
        let g = cycle_grid(0.2, 2.0, 4).unwrap();
        let a = coefficients_e1(&sys, &g).unwrap();
        let b = coefficients_brute(&sys, &g).unwrap();
        for k in 0..g.len() {
            assert!((a.d[k] - b.d[k]).abs() < 1e-7, "D at {k}: {} vs {}", a.d[k], b.d[k]);
            assert!((a.f[k] - b.f[k]).abs() < 1e-7, "f at {k}");
            assert!((a.zeta[k] - b.zeta[k]).abs() < 1e-7, "zeta at {k}");
        }
    }

    #[test]
    fn edges_are_sorted() {
        assert_eq!(frequency_edges(1.0, 50.0), vec![0.0, 1.0, 50.0]);
        let e = frequency_edges(0.003, 50.0);
        assert_eq!(e.len(), 5);
        assert!(e.windows(2).all(|w| w[0] < w[1]));
    }
}
