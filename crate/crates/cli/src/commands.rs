//! Subcommand implementations.

use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use qfd_core::coefficients::{
    coefficients_analytic_small_u, coefficients_brute_with, coefficients_e1_with, cycle_grid, markov_limit,
    BruteOptions, CoefficientTrace,
};
use qfd_core::coefficients::trace::to_cycles;
use qfd_core::csv::{CsvWriter, Field};
use qfd_core::decoherence::{
    sweep_level_spacing, sweep_material_particle, sweep_polarization, sweep_velocity, tau_d, TauMethod,
};
use qfd_core::dynamics::{evolve as evolve_state, QubitState};
use qfd_core::model::{preset, SystemParams};
use qfd_core::numerics::{linspace, Integrator, Tolerance};

use crate::config::{parse_angle, Format, RunConfig};
use crate::failure::Failure;
use crate::output::{emit, sidecar};
use crate::{CoeffMethod, SweepParam, TauKind};

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("results serialize to JSON");
    s.push('\n');
    s
}

fn trace_for(cfg: &RunConfig, sys: &SystemParams, method: CoeffMethod, grid: &[f64]) -> Result<CoefficientTrace, Failure> {
    let n = &cfg.numerics;
    let trace = match method {
        CoeffMethod::E1 | CoeffMethod::All => {
            coefficients_e1_with(sys, grid, &Integrator::new(Tolerance::new(n.rel_tol, n.abs_tol)))
        }
        CoeffMethod::Analytic => coefficients_analytic_small_u(sys, grid),
        CoeffMethod::Brute => coefficients_brute_with(
            sys,
            grid,
            &BruteOptions {
                omega_max: n.omega_max,
                ..Default::default()
            },
        ),
    };
    trace.map_err(Failure::from)
}

pub fn coeffs(cfg: &RunConfig, method: CoeffMethod, cycles: f64) -> Result<(), Failure> {
    let sys = cfg.system()?;
    let grid = cycle_grid(sys.delta(), cycles, cfg.numerics.points_per_cycle)?;
    if method != CoeffMethod::All {
        let trace = trace_for(cfg, &sys, method, &grid)?;
        let text = match cfg.output.format {
            Format::Csv => trace.to_csv(),
            Format::Json => to_json(&trace),
        };
        return emit(&cfg.output.path, &text);
    }
    let e1 = trace_for(cfg, &sys, CoeffMethod::E1, &grid)?;
    let analytic = match trace_for(cfg, &sys, CoeffMethod::Analytic, &grid) {
        Ok(t) => Some(t),
        Err(f) => {
            eprintln!("qfd: analytic columns left empty: {f}");
            None
        }
    };
    let brute = trace_for(cfg, &sys, CoeffMethod::Brute, &grid)?;
    let markov = markov_limit(&sys)?;
    let text = match cfg.output.format {
        Format::Json => to_json(&json!({
            "e1": e1,
            "analytic": analytic,
            "brute": brute,
            "markov": markov,
        })),
        Format::Csv => {
            let mut w = CsvWriter::new(&[
                "t",
                "N_cycles",
                "D_e1",
                "f_e1",
                "zeta_e1",
                "D_analytic",
                "f_analytic",
                "zeta_analytic",
                "D_brute",
                "f_brute",
                "zeta_brute",
                "D_markov",
                "f_markov",
                "zeta_markov",
            ]);
            for (k, t) in grid.iter().enumerate() {
                let (da, fa, za) = analytic
                    .as_ref()
                    .map_or((f64::NAN, f64::NAN, f64::NAN), |a| (a.d[k], a.f[k], a.zeta[k]));
                w.row(&[
                    Field::Num(*t),
                    Field::Num(to_cycles(*t, sys.delta())),
                    Field::Num(e1.d[k]),
                    Field::Num(e1.f[k]),
                    Field::Num(e1.zeta[k]),
                    Field::Num(da),
                    Field::Num(fa),
                    Field::Num(za),
                    Field::Num(brute.d[k]),
                    Field::Num(brute.f[k]),
                    Field::Num(brute.zeta[k]),
                    Field::Num(markov.d_inf),
                    Field::Num(markov.f_inf),
                    Field::Num(markov.zeta_inf),
                ]);
            }
            w.finish()
        }
    };
    emit(&cfg.output.path, &text)
}

pub fn evolve(
    cfg: &RunConfig,
    method: CoeffMethod,
    cycles: f64,
    rho11: f64,
    rho12_re: f64,
    rho12_im: f64,
) -> Result<(), Failure> {
    if method == CoeffMethod::All {
        return Err(Failure::config("evolve needs a single coefficient method"));
    }
    let initial = QubitState::new(rho11, Complex64::new(rho12_re, rho12_im))?;
    let sys = cfg.system()?;
    let grid = cycle_grid(sys.delta(), cycles, cfg.numerics.points_per_cycle)?;
    let trace = trace_for(cfg, &sys, method, &grid)?;
    let result = evolve_state(&initial, &trace)?;
    let text = match cfg.output.format {
        Format::Csv => result.to_csv(),
        Format::Json => to_json(&result),
    };
    emit(&cfg.output.path, &text)
}

fn tau_method(kind: TauKind) -> TauMethod {
    match kind {
        TauKind::Numeric => TauMethod::Numeric,
        TauKind::Analytic => TauMethod::Analytic,
        TauKind::Markov => TauMethod::Markov,
    }
}

/// Always a JSON report; `--format` does not apply.
pub fn tdec(cfg: &RunConfig, method: TauKind) -> Result<(), Failure> {
    let sys = cfg.system()?;
    let r = tau_d(&sys, tau_method(method), &cfg.tau_options())?;
    let report = json!({
        "tau_d": r.tau_d,
        "tau_d_cycles": to_cycles(r.tau_d, sys.delta()),
        "method": r.method,
        "root_tolerance": r.root_tolerance,
        "cum_d_at_root": r.cum_d_at_root,
        "params": r.params,
    });
    emit(&cfg.output.path, &to_json(&report))
}

fn endpoints(param: SweepParam, from: &str, to: &str) -> Result<(f64, f64), Failure> {
    let parse = |s: &str| -> Result<f64, Failure> {
        match param {
            SweepParam::Theta | SweepParam::Phi => parse_angle(s),
            SweepParam::U | SweepParam::Delta => s
                .trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Failure::config(format!("cannot parse sweep endpoint '{s}'"))),
        }
    };
    Ok((parse(from)?, parse(to)?))
}

pub fn sweep(
    cfg: &RunConfig,
    param: SweepParam,
    from: &str,
    to: &str,
    points: usize,
    combos: &[String],
    method: TauKind,
) -> Result<(), Failure> {
    if points == 0 {
        return Err(Failure::config("sweep needs at least one point"));
    }
    let (lo, hi) = endpoints(param, from, to)?;
    let values = if points == 1 { vec![lo] } else { linspace(lo, hi, points) };
    let sys = cfg.system()?;
    let opts = cfg.tau_options();
    let m = tau_method(method);
    if !combos.is_empty() && !matches!(param, SweepParam::Theta | SweepParam::Phi) {
        return Err(Failure::config("--combos applies to theta and phi sweeps only"));
    }
    let (table, extra_name, extra) = match param {
        SweepParam::U => {
            let (table, fit) = sweep_velocity(&sys, &values, m, &opts)?;
            (table, "fit", fit.map(|f| serde_json::to_value(f).expect("fit serializes")))
        }
        SweepParam::Delta => {
            let s = sweep_level_spacing(&sys, &values, m, &opts)?;
            let extra = json!({ "extremum": s.extremum, "far_ratio": s.far_ratio });
            (s.table, "extremum", Some(extra))
        }
        SweepParam::Theta | SweepParam::Phi => {
            let (thetas, phis) = if param == SweepParam::Theta {
                (values.clone(), vec![cfg.particle.phi])
            } else {
                (vec![cfg.particle.theta], values.clone())
            };
            let table = if combos.is_empty() {
                sweep_polarization(&sys, &thetas, &phis, m, &opts)?
            } else {
                let systems = combos
                    .iter()
                    .map(|name| combo_system(cfg, name))
                    .collect::<Result<Vec<_>, _>>()?;
                sweep_material_particle(&systems, &thetas, &phis, m, &opts)?
            };
            (table, "", None)
        }
    };
    match cfg.output.format {
        Format::Json => {
            let mut doc = json!({ "rows": table.rows });
            if let Some(x) = extra {
                doc[extra_name] = x;
            }
            emit(&cfg.output.path, &to_json(&doc))
        }
        Format::Csv => {
            let mut text = table.to_csv();
            if let Some(x) = extra {
                match sidecar(&cfg.output.path, extra_name) {
                    Some(path) => crate::output::write_atomic(std::path::Path::new(&path), &to_json(&x))?,
                    None => text.push_str(&format!("# {extra_name}: {}\n", serde_json::to_string(&x).expect("json"))),
                }
            }
            emit(&cfg.output.path, &text)
        }
    }
}

/// A preset pair carrying this run's velocity, coupling and distance.
fn combo_system(cfg: &RunConfig, name: &str) -> Result<SystemParams, Failure> {
    let (material, mut particle) = preset(name)?;
    particle.r0_tilde = cfg.particle.r0_tilde;
    let mut sys = SystemParams::new(material, particle, cfg.kinematics.u)?;
    sys.kinematics.a_nm = cfg.kinematics.a_nm;
    Ok(sys)
}
