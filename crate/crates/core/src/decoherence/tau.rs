//! Decoherence time `τ_D`, defined by `∫₀^{τ_D} D dt = 1`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coefficients::{markov_limit, Kernel};
use crate::error::{Error, Result};
use crate::model::{kernel_p, kernel_p_derivatives, pole_omega_r, spectral_density_derivatives, SystemParams};
use crate::numerics::roots::find_root_bracketed_fallible;
use crate::numerics::{Integrator, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TauMethod {
    Numeric,
    Analytic,
    Markov,
}

impl TauMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            TauMethod::Numeric => "numeric",
            TauMethod::Analytic => "analytic",
            TauMethod::Markov => "markov",
        }
    }
}

impl fmt::Display for TauMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for TauMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "numeric" => Ok(TauMethod::Numeric),
            "analytic" => Ok(TauMethod::Analytic),
            "markov" => Ok(TauMethod::Markov),
            _ => Err(Error::InvalidParameter(format!(
                "unknown decoherence-time method '{s}' (expected numeric, analytic or markov)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecoherenceTimeResult {
    pub tau_d: f64,
    pub method: TauMethod,
    pub params: SystemParams,
    /// Absolute tolerance of the root in `t`; zero for closed forms.
    pub root_tolerance: f64,
    /// `∫₀^{τ_D} D` as evaluated at the returned root (numeric method only).
    pub cum_d_at_root: Option<f64>,
}

/// Knobs for the decoherence-time solvers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauOptions {
    /// Give up if `τ_D` exceeds this many natural cycles.
    pub horizon_cycles: f64,
    pub tolerance: Tolerance,
    /// Relative tolerance of the root.
    pub root_rel_tol: f64,
    /// Half-width of the excluded window around Δ̃ = 1 for the analytic formula.
    pub exclusion_band: f64,
}

impl Default for TauOptions {
    fn default() -> Self {
        Self {
            horizon_cycles: 1e8,
            tolerance: Tolerance::new(1e-12, 1e-15),
            root_rel_tol: 1e-13,
            exclusion_band: 0.1,
        }
    }
}

pub fn tau_d(sys: &SystemParams, method: TauMethod, opts: &TauOptions) -> Result<DecoherenceTimeResult> {
    match method {
        TauMethod::Numeric => tau_d_numeric_with(sys, opts),
        TauMethod::Analytic => tau_d_analytic_with(sys, opts),
        TauMethod::Markov => tau_d_markov(sys),
    }
}

pub fn tau_d_numeric(sys: &SystemParams) -> Result<DecoherenceTimeResult> {
    tau_d_numeric_with(sys, &TauOptions::default())
}

/// Solves `∫₀^τ D = 1` with `D` from the closed-form kernel.
///
/// Uses `∫₀^T D = (r̃₀/2π)[T·G₀(T) − G₁(T)]`, `G_n = ∫₀^T sⁿ g(s) ds`,
/// `g = cos(Δ̃s) K_c(s) P(us)`, so no time grid is needed. `G_n` are
/// accumulated one natural cycle at a time up to `T₀`, after which the
/// residue part of the kernel is negligible and the rest is integrated by
/// parts in closed form.
pub fn tau_d_numeric_with(sys: &SystemParams, opts: &TauOptions) -> Result<DecoherenceTimeResult> {
    sys.validate()?;
    let pref = sys.r0() / (2.0 * PI);
    if pref == 0.0 {
        return Err(Error::HorizonExceeded {
            t_cap: f64::INFINITY,
            detail: "zero coupling: the decoherence function never decays".into(),
        });
    }
    let kernel = Kernel::new(sys.gamma())?;
    let (delta, u, o) = (sys.delta(), sys.u(), sys.orientation());
    let cycle = sys.cycle();
    let t_cap = opts.horizon_cycles * cycle;
    let q = Integrator::new(opts.tolerance).with_max_subdivisions(10_000);
    let g = |s: f64| -> [f64; 2] {
        let v = (delta * s).cos() * kernel.cos_transform(s) * kernel_p(u * s, &o);
        [v, s * v]
    };
    let cum = |t: f64, g0: f64, g1: f64| pref * (t * g0 - g1);
    let finish = |tau: f64, value: f64, tol: f64| DecoherenceTimeResult {
        tau_d: tau,
        method: TauMethod::Numeric,
        params: sys.clone(),
        root_tolerance: tol,
        cum_d_at_root: Some(value + 1.0),
    };

    let t0 = (42.0 / kernel.slowest_decay()).max(2000.0 / delta).min(t_cap);
    let chunks = (t0 / cycle).ceil() as usize;
    let (mut g0, mut g1) = (0.0, 0.0);
    let mut a = 0.0;
    for k in 1..=chunks {
        let b = (k as f64 * cycle).min(t_cap);
        let r = q.integrate_vec(g, a, b)?.value;
        if cum(b, g0 + r[0], g1 + r[1]) >= 1.0 {
            let f = |t: f64| -> Result<f64> {
                let p = q.integrate_vec(g, a, t)?.value;
                Ok(cum(t, g0 + p[0], g1 + p[1]) - 1.0)
            };
            let tol = opts.root_rel_tol * b;
            let tau = find_root_bracketed_fallible(f, a, b, tol)?;
            let v = f(tau)?;
            return Ok(finish(tau, v, tol));
        }
        g0 += r[0];
        g1 += r[1];
        a = b;
        if b >= t_cap {
            break;
        }
    }
    if a >= t_cap {
        return Err(horizon_error(t_cap, cum(a, g0, g1)));
    }

    // tail: closed-form antiderivatives relative to T₀
    let tail = TailAntiderivative { kernel: &kernel, delta, u, o };
    let base = tail.eval(a);
    let f = |t: f64| -> Result<f64> {
        let v = tail.eval(t);
        Ok(cum(t, g0 + v[0] - base[0], g1 + v[1] - base[1]) - 1.0)
    };
    let mut lo = a;
    let mut hi = 2.0 * a;
    loop {
        let hi_c = hi.min(t_cap);
        if f(hi_c)? >= 0.0 {
            hi = hi_c;
            break;
        }
        if hi_c >= t_cap {
            let v = f(t_cap)? + 1.0;
            return Err(horizon_error(t_cap, v));
        }
        lo = hi_c;
        hi = 2.0 * hi_c;
    }
    let tol = opts.root_rel_tol * hi;
    let tau = find_root_bracketed_fallible(f, lo, hi, tol)?;
    let v = f(tau)?;
    Ok(finish(tau, v, tol))
}

fn horizon_error(t_cap: f64, cum_d: f64) -> Error {
    Error::HorizonExceeded {
        t_cap,
        detail: format!("integral of D reached only {cum_d:.6e} (needs 1); raise the horizon"),
    }
}

/// Antiderivatives of `cos(Δ̃s)S(s)` and `s·cos(Δ̃s)S(s)` with `S` the smooth
/// E₁ part of `K_c·P`, by three integrations by parts.
struct TailAntiderivative<'a> {
    kernel: &'a Kernel,
    delta: f64,
    u: f64,
    o: crate::model::Orientation,
}

impl TailAntiderivative<'_> {
    fn eval(&self, s: f64) -> [f64; 2] {
        let [k0, k1, k2] = self.kernel.e1_part_derivatives(s);
        let (p0, p1, p2) = kernel_p_derivatives(self.u * s, &self.o);
        let u = self.u;
        let s0 = k0 * p0;
        let s1 = k1 * p0 + u * k0 * p1;
        let s2 = k2 * p0 + 2.0 * u * k1 * p1 + u * u * k0 * p2;
        let h0 = s * s0;
        let h1 = s0 + s * s1;
        let h2 = 2.0 * s1 + s * s2;
        let d = self.delta;
        let (sn, cs) = (d * s).sin_cos();
        let anti = |f0: f64, f1: f64, f2: f64| sn * f0 / d + cs * f1 / (d * d) - sn * f2 / (d * d * d);
        [anti(s0, s1, s2), anti(h0, h1, h2)]
    }
}

/// `τ_D = 1/D∞` from the exact stationary coefficients.
pub fn tau_d_markov(sys: &SystemParams) -> Result<DecoherenceTimeResult> {
    let m = markov_limit(sys)?;
    if m.d_inf <= 0.0 {
        return Err(Error::Physics(format!(
            "stationary diffusion coefficient {} is not positive",
            m.d_inf
        )));
    }
    Ok(DecoherenceTimeResult {
        tau_d: 1.0 / m.d_inf,
        method: TauMethod::Markov,
        params: sys.clone(),
        root_tolerance: 0.0,
        cum_d_at_root: None,
    })
}

pub fn tau_d_analytic(sys: &SystemParams) -> Result<DecoherenceTimeResult> {
    tau_d_analytic_with(sys, &TauOptions::default())
}

/// Small-velocity closed form
/// `τ_D = τ_Mark + [−g/(√(4 − Γ̃²) h) + 2/(πΔ̃)] + (3/8)(d_a/d_i)u²{…}` with
/// `h = J(Δ̃)`.
pub fn tau_d_analytic_with(sys: &SystemParams, opts: &TauOptions) -> Result<DecoherenceTimeResult> {
    sys.validate()?;
    let (gamma, delta, r0, u) = (sys.gamma(), sys.delta(), sys.r0(), sys.u());
    if (delta - 1.0).abs() < opts.exclusion_band {
        return Err(Error::Domain(format!(
            "delta_tilde = {delta} lies in the excluded near-resonance band |delta - 1| < {}",
            opts.exclusion_band
        )));
    }
    if gamma >= 2.0 {
        return Err(Error::Domain(format!(
            "analytic decoherence time needs gamma_tilde < 2, got {gamma}"
        )));
    }
    if r0 <= 0.0 {
        return Err(Error::InvalidParameter("analytic decoherence time needs r0_tilde > 0".into()));
    }
    let w = sys.orientation().weights();
    let (h, h1, h2) = spectral_density_derivatives(delta, gamma);
    let (g, g2) = g_function(delta, gamma)?;
    let sigma = (4.0 - gamma * gamma).sqrt();
    let ratio = 3.0 / 8.0 * w.d_a / w.d_i * u * u;
    let markov = 32.0 / (w.d_i * r0) * (1.0 / h - ratio * h2 / (h * h));
    let constant = -g / (sigma * h) + 2.0 / (PI * delta);
    // ∂²(h/Δ̃) − h''/Δ̃ = −2h'/Δ̃² + 2h/Δ̃³
    let shifted = 2.0 / (PI * h) * (-2.0 * h1 / (delta * delta) + 2.0 * h / (delta * delta * delta));
    let velocity = ratio * ((g * h2 / (h * h) - g2 / h) + shifted);
    Ok(DecoherenceTimeResult {
        tau_d: markov + constant + velocity,
        method: TauMethod::Analytic,
        params: sys.clone(),
        root_tolerance: 0.0,
        cum_d_at_root: None,
    })
}

/// `g(Δ̃) = Re[(1 + (2i/π) log(ω̃_r/Δ̃))((ω̃_r + Δ̃)⁻² + (ω̃_r − Δ̃)⁻²)]` and
/// its second derivative.
pub fn g_function(delta: f64, gamma: f64) -> Result<(f64, f64)> {
    let wr = pole_omega_r(gamma)?.omega_r;
    let i = Complex64::i();
    let c = 2.0 * i / PI;
    let l = 1.0 + c * (wr.ln() - delta.ln());
    let l1 = -c / delta;
    let l2 = c / (delta * delta);
    let (p, m) = ((wr + delta).inv(), (wr - delta).inv());
    let mm = p * p + m * m;
    let mm1 = -2.0 * p * p * p + 2.0 * m * m * m;
    let mm2 = 6.0 * (p * p * p * p + m * m * m * m);
    Ok(((l * mm).re, (l2 * mm + 2.0 * l1 * mm1 + l * mm2).re))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{coefficients_e1, markov_limit};
    use crate::model::{preset, Orientation};

    fn nv(u: f64) -> SystemParams {
        let (m, p) = preset("nv-nsi").unwrap();
        SystemParams::new(m, p, u).unwrap()
    }

    #[test]
    fn definition_holds_at_root() {
        let r = tau_d_numeric(&nv(0.0)).unwrap();
        assert!((r.cum_d_at_root.unwrap() - 1.0).abs() < 1e-6);
        let markov = 1.0 / markov_limit(&nv(0.0)).unwrap().d_inf;
        assert!((r.tau_d / markov - 1.0).abs() < 0.05, "{} vs {markov}", r.tau_d);
    }

    #[test]
    fn agrees_with_trace_integral() {
        // short τ so the grid-based route is cheap
        let sys = nv(0.05).with_r0(2.0);
        let r = tau_d_numeric(&sys).unwrap();
        let grid = crate::numerics::linspace(0.0, r.tau_d, 4001);
        let t = coefficients_e1(&sys, &grid).unwrap();
        let last = *t.cum_d.last().unwrap();
        assert!((last - 1.0).abs() < 1e-5, "{last}");
    }

    #[test]
    fn tail_path_matches_chunks() {
        // large τ forces the by-parts tail
        let sys = nv(0.01).with_r0(1e-3);
        let r = tau_d_numeric(&sys).unwrap();
        assert!(r.tau_d > 2000.0 / 0.2);
        assert!((r.cum_d_at_root.unwrap() - 1.0).abs() < 1e-9);
        let scaled = tau_d_numeric(&sys.with_r0(2e-3)).unwrap().tau_d;
        // τ = 1/D∞·(1/r̃₀) + shift
        let shift = 2.0 * scaled - r.tau_d;
        // r̃₀ = 2e-2 puts the root inside the chunked range
        let short = tau_d_numeric(&sys.with_r0(2e-2)).unwrap().tau_d;
        assert!(short < 2000.0 / 0.2);
        assert!((short - (r.tau_d - shift) / 20.0 - shift).abs() < 1e-8 * short);
    }

    #[test]
    fn horizon_cap() {
        let opts = TauOptions {
            horizon_cycles: 10.0,
            ..TauOptions::default()
        };
        assert!(matches!(tau_d_numeric_with(&nv(0.0), &opts), Err(Error::HorizonExceeded { .. })));
    }

    #[test]
    fn analytic_reduces_at_rest() {
        let sys = nv(0.0);
        let a = tau_d_analytic(&sys).unwrap().tau_d;
        let m = tau_d_markov(&sys).unwrap().tau_d;
        let (g, _) = g_function(0.2, 1.0).unwrap();
        let expect = m - g / (3f64.sqrt() * crate::model::spectral_density(0.2, 1.0)) + 2.0 / (PI * 0.2);
        assert!((a - expect).abs() < 1e-9 * a);
    }

    #[test]
    fn analytic_close_to_numeric() {
        for u in [0.0, 0.01, 0.03] {
            let a = tau_d_analytic(&nv(u)).unwrap().tau_d;
            let n = tau_d_numeric(&nv(u)).unwrap().tau_d;
            assert!((a / n - 1.0).abs() < 0.1, "u = {u}: {a} vs {n}");
        }
    }

    #[test]
    fn analytic_band() {
        assert!(tau_d_analytic(&nv(0.0).with_delta(1.05)).is_err());
        assert!(tau_d_analytic(&nv(0.0).with_delta(1.2)).is_ok());
    }

    #[test]
    fn g_second_derivative() {
        let f = |d: f64| g_function(d, 1.0).unwrap().0;
        let (d, e) = (0.3, 1e-4);
        let fd = (f(d + e) - 2.0 * f(d) + f(d - e)) / (e * e);
        let g2 = g_function(d, 1.0).unwrap().1;
        assert!((fd - g2).abs() < 1e-5 * g2.abs().max(1.0));
    }

    #[test]
    fn markov_orientation() {
        let x = tau_d_markov(&nv(0.0)).unwrap().tau_d;
        let z = tau_d_markov(&nv(0.0).with_orientation(Orientation::Z)).unwrap().tau_d;
        assert!((x / z - 2.0).abs() < 1e-12);
    }

    #[test]
    fn method_names() {
        assert_eq!("Markov".parse::<TauMethod>().unwrap(), TauMethod::Markov);
        assert!("e1".parse::<TauMethod>().is_err());
    }
}
