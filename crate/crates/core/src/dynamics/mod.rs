//! Secular evolution of the two-level density matrix driven by a coefficient
//! trace.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coefficients::{markov_limit, CoefficientTrace};
use crate::csv::{CsvWriter, Field};
use crate::error::{Error, Result};
use crate::model::SystemParams;

/// Allowed excess of `|ρ₁₂|²` over `ρ₁₁ρ₂₂` before the state counts as
/// unphysical.
pub const POSITIVITY_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitState {
    /// Excited-state population; `ρ₂₂ = 1 − ρ₁₁`.
    pub rho11: f64,
    pub rho12: Complex64,
    pub t: f64,
}

impl Default for QubitState {
    /// Equal superposition `(|1⟩ + |2⟩)/√2`.
    fn default() -> Self {
        Self {
            rho11: 0.5,
            rho12: Complex64::new(0.5, 0.0),
            t: 0.0,
        }
    }
}

impl QubitState {
    pub fn new(rho11: f64, rho12: Complex64) -> Result<Self> {
        let s = Self { rho11, rho12, t: 0.0 };
        s.validate()?;
        Ok(s)
    }

    pub fn rho22(&self) -> f64 {
        1.0 - self.rho11
    }

    pub fn rho21(&self) -> Complex64 {
        self.rho12.conj()
    }

    /// `Tr ρ²`
    pub fn purity(&self) -> f64 {
        self.rho11 * self.rho11 + self.rho22() * self.rho22() + 2.0 * self.rho12.norm_sqr()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho11.is_finite() && self.rho12.re.is_finite() && self.rho12.im.is_finite()) {
            return Err(Error::Physics(format!("non-finite density matrix at t = {}", self.t)));
        }
        if self.rho11 < -POSITIVITY_SLACK || self.rho11 > 1.0 + POSITIVITY_SLACK {
            return Err(Error::Physics(format!(
                "population rho11 = {} left [0, 1] at t = {}",
                self.rho11, self.t
            )));
        }
        let excess = self.rho12.norm_sqr() - self.rho11 * self.rho22();
        if excess > POSITIVITY_SLACK {
            return Err(Error::Physics(format!(
                "positivity lost at t = {}: |rho12|^2 exceeds rho11*rho22 by {excess:e}",
                self.t
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolutionResult {
    pub states: Vec<QubitState>,
    pub purity: Vec<f64>,
    /// Phase `Δ̃t + 2∫f` carried by `ρ₁₂`.
    pub xi: Vec<f64>,
    /// `exp(−2∫D)`
    pub decoherence_factor: Vec<f64>,
    pub delta_tilde: f64,
}

pub const EVOLUTION_CSV_HEADER: [&str; 9] = [
    "t",
    "N_cycles",
    "rho11",
    "re_rho12",
    "im_rho12",
    "abs_rho12",
    "purity",
    "decoherence_factor",
    "xi",
];

impl EvolutionResult {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last(&self) -> Option<&QubitState> {
        self.states.last()
    }

    pub fn to_csv(&self) -> String {
        let mut w = CsvWriter::new(&EVOLUTION_CSV_HEADER);
        for (k, s) in self.states.iter().enumerate() {
            w.row(&[
                Field::Num(s.t),
                Field::Num(crate::coefficients::trace::to_cycles(s.t, self.delta_tilde)),
                Field::Num(s.rho11),
                Field::Num(s.rho12.re),
                Field::Num(s.rho12.im),
                Field::Num(s.rho12.norm()),
                Field::Num(self.purity[k]),
                Field::Num(self.decoherence_factor[k]),
                Field::Num(self.xi[k]),
            ]);
        }
        w.finish()
    }
}

/// Evolves `initial` over the whole trace.
///
/// `ρ₋ = ρ₁₁ − ρ₂₂` follows `ρ₋(t) = e^{−4C(t)}ρ₋(0) − 4∫₀ᵗ ζ(t′)e^{−4(C(t) − C(t′))} dt′`
/// with `C = ∫D`, and `ρ₁₂(t) = ρ₁₂(0) e^{−2C(t)} e^{−i(Δ̃t + 2∫f)}`. The
/// convolution is advanced one interval at a time, integrating exactly for
/// `ζ` and `C` linear across the interval, so only exponentials of increments
/// are formed.
pub fn evolve(initial: &QubitState, trace: &CoefficientTrace) -> Result<EvolutionResult> {
    let t_end = *trace
        .grid
        .last()
        .ok_or_else(|| Error::InvalidParameter("empty coefficient trace".into()))?;
    evolve_until(initial, trace, t_end)
}

/// Like [`evolve`] but stops at the last grid point not beyond `t_end`.
pub fn evolve_until(initial: &QubitState, trace: &CoefficientTrace, t_end: f64) -> Result<EvolutionResult> {
    let mut init = *initial;
    init.t = 0.0;
    init.validate()?;
    if trace.is_empty() || trace.grid[0] != 0.0 {
        return Err(Error::InvalidParameter("coefficient trace must start at t = 0".into()));
    }
    let last = *trace.grid.last().expect("nonempty");
    if t_end > last * (1.0 + 1e-12) {
        return Err(Error::HorizonExceeded {
            t_cap: last,
            detail: format!("requested evolution to t = {t_end} beyond the trace"),
        });
    }
    let n = trace.grid.partition_point(|t| *t <= t_end).max(1);
    let delta = trace.delta_tilde;
    let rho_minus0 = 2.0 * init.rho11 - 1.0;

    let mut out = EvolutionResult {
        states: Vec::with_capacity(n),
        purity: Vec::with_capacity(n),
        xi: Vec::with_capacity(n),
        decoherence_factor: Vec::with_capacity(n),
        delta_tilde: delta,
    };
    // conv = ∫₀ᵗ ζ(t′) e^{−4(C(t) − C(t′))} dt′
    let mut conv = 0.0;
    for k in 0..n {
        let t = trace.grid[k];
        let c = trace.cum_d[k];
        if k > 0 {
            let h = t - trace.grid[k - 1];
            let lambda = 4.0 * (c - trace.cum_d[k - 1]);
            let (w_old, w_new) = linear_weights(lambda);
            conv = conv * (-lambda).exp() + h * (w_old * trace.zeta[k - 1] + w_new * trace.zeta[k]);
        }
        let rho_minus = (-4.0 * c).exp() * rho_minus0 - 4.0 * conv;
        let factor = (-2.0 * c).exp();
        let xi = delta * t + 2.0 * trace.cum_f[k];
        let state = QubitState {
            rho11: 0.5 * (1.0 + rho_minus),
            rho12: init.rho12 * factor * Complex64::from_polar(1.0, -xi),
            t,
        };
        state.validate()?;
        out.purity.push(state.purity());
        out.states.push(state);
        out.xi.push(xi);
        out.decoherence_factor.push(factor);
    }
    Ok(out)
}

/// Weights of `∫₀¹ e^{−λ(1−x)} ζ(x) dx` for `ζ` linear between its end
/// values.
fn linear_weights(lambda: f64) -> (f64, f64) {
    let l = lambda;
    if l.abs() < 1e-3 {
        let e0 = 1.0 - l / 2.0 + l * l / 6.0 - l * l * l / 24.0;
        let psi = 0.5 - l / 3.0 + l * l / 8.0 - l * l * l / 30.0;
        return (psi, e0 - psi);
    }
    let em = (-l).exp();
    let e0 = -(-l).exp_m1() / l;
    let psi = (1.0 - em * (1.0 + l)) / (l * l);
    (psi, e0 - psi)
}

/// Stationary excited population `(1 − ζ∞/D∞)/2`, clipped to `[0, 1/2]`.
pub fn asymptotic_population(sys: &SystemParams) -> Result<f64> {
    let m = markov_limit(sys)?;
    if m.d_inf == 0.0 {
        return Err(Error::Physics(
            "stationary diffusion coefficient vanishes; no asymptotic state".into(),
        ));
    }
    Ok((0.5 * (1.0 - m.zeta_inf / m.d_inf)).clamp(0.0, 0.5))
}

/// `|ρ₁₂(t; u)| − |ρ₁₂(t; 0)|` for a common initial coherence.
pub fn coherence_difference(
    trace_u: &CoefficientTrace,
    trace_0: &CoefficientTrace,
    rho12_initial: Complex64,
) -> Result<Vec<f64>> {
    if trace_u.grid != trace_0.grid {
        return Err(Error::InvalidParameter("traces are sampled on different grids".into()));
    }
    let a = rho12_initial.norm();
    Ok(trace_u
        .cum_d
        .iter()
        .zip(&trace_0.cum_d)
        .map(|(cu, c0)| a * ((-2.0 * cu).exp() - (-2.0 * c0).exp()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{coefficients_e1, cycle_grid, Method};
    use crate::model::preset;

    fn nv(u: f64) -> SystemParams {
        let (m, p) = preset("nv-nsi").unwrap();
        SystemParams::new(m, p, u).unwrap()
    }

    fn constant_trace(d: f64, f: f64, z: f64, n: usize) -> CoefficientTrace {
        let g = crate::numerics::linspace(0.0, 100.0, n);
        CoefficientTrace::from_samples(g, vec![d; n], vec![f; n], vec![z; n], Method::E1, 0.2).unwrap()
    }

    #[test]
    fn free_evolution_is_unitary() {
        let tr = coefficients_e1(&nv(0.1).with_r0(0.0), &cycle_grid(0.2, 3.0, 20).unwrap()).unwrap();
        let r = evolve(&QubitState::default(), &tr).unwrap();
        for (k, s) in r.states.iter().enumerate() {
            assert_eq!(s.rho11, 0.5);
            assert!((s.rho12.norm() - 0.5).abs() < 1e-15);
            assert!((r.purity[k] - 1.0).abs() < 1e-15);
            let expect = Complex64::from_polar(0.5, -0.2 * s.t);
            assert!((s.rho12 - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn constant_coefficients_match_closed_form() {
        // ρ₋(t) = e^{−4Dt}ρ₋(0) − (ζ/D)(1 − e^{−4Dt})
        let (d, z) = (0.01, 0.006);
        let tr = constant_trace(d, 0.0, z, 4001);
        let init = QubitState::new(0.9, Complex64::new(0.2, 0.1)).unwrap();
        let r = evolve(&init, &tr).unwrap();
        for s in &r.states {
            let e = (-4.0 * d * s.t).exp();
            let rm = e * 0.8 - z / d * (1.0 - e);
            assert!((s.rho11 - 0.5 * (1.0 + rm)).abs() < 1e-12, "t = {}", s.t);
            assert!((s.rho12.norm() - init.rho12.norm() * (-2.0 * d * s.t).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn factor_and_phase() {
        let tr = constant_trace(0.02, 0.003, 0.02, 101);
        let r = evolve(&QubitState::default(), &tr).unwrap();
        assert_eq!(r.decoherence_factor[0], 1.0);
        assert!(r.decoherence_factor.windows(2).all(|w| w[1] <= w[0]));
        let t = 100.0;
        assert!((r.xi[100] - (0.2 * t + 2.0 * 0.003 * t)).abs() < 1e-12);
    }

    #[test]
    fn weights_continuous_across_series_switch() {
        for l in [0.0, 1e-3, -1e-3, 0.5, 40.0] {
            let (a, b) = linear_weights(l);
            let (a2, b2) = linear_weights(l * (1.0 + 1e-9) + 1e-12);
            assert!((a - a2).abs() < 1e-8 && (b - b2).abs() < 1e-8);
        }
        assert_eq!(linear_weights(0.0), (0.5, 0.5));
    }

    #[test]
    fn horizon_checked() {
        let tr = constant_trace(0.0, 0.0, 0.0, 11);
        assert!(matches!(
            evolve_until(&QubitState::default(), &tr, 200.0),
            Err(Error::HorizonExceeded { .. })
        ));
        assert_eq!(evolve_until(&QubitState::default(), &tr, 55.0).unwrap().len(), 6);
    }

    #[test]
    fn positivity_breach_is_reported() {
        // ζ > D drives ρ₁₁ below zero
        let tr = constant_trace(0.01, 0.0, 0.05, 101);
        let err = evolve(&QubitState::default(), &tr).unwrap_err();
        assert!(matches!(err, Error::Physics(_)));
    }

    #[test]
    fn invalid_initial_state() {
        assert!(QubitState::new(0.5, Complex64::new(0.6, 0.0)).is_err());
        assert!(QubitState::new(1.2, Complex64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn asymptotics_below_and_above_threshold() {
        assert!(asymptotic_population(&nv(0.003)).unwrap() <= 1e-3);
        let p = asymptotic_population(&nv(0.3)).unwrap();
        assert!(p > 0.0 && p < 0.5, "{p}");
        assert!(asymptotic_population(&nv(0.3).with_r0(0.0)).is_err());
    }

    #[test]
    fn coherence_difference_properties() {
        let g = cycle_grid(0.2, 4.0, 20).unwrap();
        let t0 = coefficients_e1(&nv(0.0), &g).unwrap();
        let same = coherence_difference(&t0, &t0, Complex64::new(0.5, 0.0)).unwrap();
        assert!(same.iter().all(|x| *x == 0.0));
        let other = coefficients_e1(&nv(0.0), &cycle_grid(0.2, 4.0, 10).unwrap()).unwrap();
        assert!(coherence_difference(&t0, &other, Complex64::new(0.5, 0.0)).is_err());
    }
}
