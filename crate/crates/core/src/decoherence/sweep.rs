//! Parameter sweeps of the decoherence time.

use serde::{Deserialize, Serialize};

use crate::csv::{CsvWriter, Field};
use crate::error::{Error, Result};
use crate::model::{Orientation, SystemParams};
use crate::parallel::map_ordered;

use super::fit::{quadratic_ratio_fit, QuadraticFit};
use super::tau::{tau_d, TauMethod, TauOptions};

/// Method label of rows skipped because they fall in the resonance band.
pub const EXCLUDED: &str = "excluded";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub sweep_param: String,
    pub value: f64,
    pub tau_d: f64,
    pub tau_d_u0: f64,
    /// `1 − τ_D/τ_D|₀`; grows with the velocity effect.
    pub rate: f64,
    pub method: String,
    pub material: String,
    pub particle: String,
    pub theta: f64,
    pub phi: f64,
    pub u: f64,
    pub delta_tilde: f64,
    pub gamma_tilde: f64,
}

impl SweepRow {
    pub fn is_excluded(&self) -> bool {
        self.method == EXCLUDED
    }

    /// `τ_D/τ_D|₀`
    pub fn normalized(&self) -> f64 {
        self.tau_d / self.tau_d_u0
    }
}

pub const SWEEP_CSV_HEADER: [&str; 13] = [
    "sweep_param",
    "value",
    "tau_d",
    "tau_d_u0",
    "rate",
    "method",
    "material",
    "particle",
    "theta",
    "phi",
    "u",
    "delta_tilde",
    "gamma_tilde",
];

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let mut w = CsvWriter::new(&SWEEP_CSV_HEADER);
        for r in &self.rows {
            w.row(&[
                Field::Text(&r.sweep_param),
                Field::Num(r.value),
                Field::Num(r.tau_d),
                Field::Num(r.tau_d_u0),
                Field::Num(r.rate),
                Field::Text(&r.method),
                Field::Text(&r.material),
                Field::Text(&r.particle),
                Field::Num(r.theta),
                Field::Num(r.phi),
                Field::Num(r.u),
                Field::Num(r.delta_tilde),
                Field::Num(r.gamma_tilde),
            ]);
        }
        w.finish()
    }
}

/// One sweep point: the run and the label it is reported under.
struct Point {
    sys: SystemParams,
    param: &'static str,
    value: f64,
}

fn evaluate(points: Vec<Point>, method: TauMethod, opts: &TauOptions) -> Result<SweepTable> {
    let rows = map_ordered(&points, |p| -> Result<SweepRow> {
        let t = tau_d(&p.sys, method, opts)?.tau_d;
        let t0 = if p.sys.u() == 0.0 {
            t
        } else {
            tau_d(&p.sys.with_u(0.0), method, opts)?.tau_d
        };
        Ok(row(p, t, t0, method.as_str()))
    });
    Ok(SweepTable {
        rows: rows.into_iter().collect::<Result<_>>()?,
    })
}

fn row(p: &Point, tau: f64, tau0: f64, method: &str) -> SweepRow {
    let (theta, phi) = p.sys.orientation().angles();
    SweepRow {
        sweep_param: p.param.to_string(),
        value: p.value,
        tau_d: tau,
        tau_d_u0: tau0,
        rate: 1.0 - tau / tau0,
        method: method.to_string(),
        material: p.sys.material.name.clone(),
        particle: p.sys.particle.name.clone(),
        theta,
        phi,
        u: p.sys.u(),
        delta_tilde: p.sys.delta(),
        gamma_tilde: p.sys.gamma(),
    }
}

fn angular_points(sys: &SystemParams, thetas: &[f64], phis: &[f64]) -> Result<Vec<Point>> {
    if thetas.is_empty() || phis.is_empty() {
        return Err(Error::InvalidParameter("angular grids must be nonempty".into()));
    }
    if let Some(t) = thetas.iter().find(|t| !(0.0..=std::f64::consts::PI).contains(*t)) {
        return Err(Error::InvalidParameter(format!("theta = {t} outside [0, pi]")));
    }
    if let Some(p) = phis.iter().find(|p| !p.is_finite()) {
        return Err(Error::InvalidParameter(format!("phi = {p} is not finite")));
    }
    let by_phi = thetas.len() == 1 && phis.len() > 1;
    let mut out = Vec::with_capacity(thetas.len() * phis.len());
    for &t in thetas {
        for &p in phis {
            out.push(Point {
                sys: sys.with_orientation(Orientation::from_angles(t, p)),
                param: if by_phi { "phi" } else { "theta" },
                value: if by_phi { p } else { t },
            });
        }
    }
    Ok(out)
}

/// `τ_D` over a grid of dipole directions; rows ordered θ-major.
///
/// Rows are labelled by φ when θ is fixed and by θ otherwise. The angle
/// columns hold the orientation as stored, so φ is reduced to `(−π, π]`.
pub fn sweep_polarization(
    sys: &SystemParams,
    thetas: &[f64],
    phis: &[f64],
    method: TauMethod,
    opts: &TauOptions,
) -> Result<SweepTable> {
    evaluate(angular_points(sys, thetas, phis)?, method, opts)
}

/// [`sweep_polarization`] for several material/particle/velocity
/// combinations on a shared angular grid.
pub fn sweep_material_particle(
    combos: &[SystemParams],
    thetas: &[f64],
    phis: &[f64],
    method: TauMethod,
    opts: &TauOptions,
) -> Result<SweepTable> {
    let mut points = Vec::new();
    for c in combos {
        points.extend(angular_points(c, thetas, phis)?);
    }
    evaluate(points, method, opts)
}

/// `τ_D` against velocity, with the quadratic fit when the points allow it.
pub fn sweep_velocity(
    sys: &SystemParams,
    velocities: &[f64],
    method: TauMethod,
    opts: &TauOptions,
) -> Result<(SweepTable, Option<QuadraticFit>)> {
    let points = velocities
        .iter()
        .map(|u| Point {
            sys: sys.with_u(*u),
            param: "u",
            value: *u,
        })
        .collect();
    let table = evaluate(points, method, opts)?;
    let fittable = velocities.len() >= 4 && velocities.iter().all(|u| *u != 0.0 && u.abs() < sys.delta() / 2.0);
    let fit = if fittable {
        Some(quadratic_ratio_fit(sys, velocities, method, opts)?)
    } else {
        None
    };
    Ok((table, fit))
}

/// Position of the strongest velocity effect in a level-spacing sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub delta_tilde: f64,
    /// `τ_D/τ_D|₀` at the extremum.
    pub normalized: f64,
    /// Not at either end of the evaluated points.
    pub interior: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSpacingSweep {
    pub table: SweepTable,
    pub extremum: Option<Extremum>,
    /// `|1 − τ_D/τ_D|₀|` at the point farthest from resonance, relative to
    /// its value at the extremum.
    pub far_ratio: Option<f64>,
}

/// `τ_D/τ_D|₀` against level spacing. Points within `opts.exclusion_band`
/// of the resonance are reported with method `excluded` and NaN values.
pub fn sweep_level_spacing(
    sys: &SystemParams,
    deltas: &[f64],
    method: TauMethod,
    opts: &TauOptions,
) -> Result<LevelSpacingSweep> {
    if let Some(d) = deltas.iter().find(|d| !(**d > 0.0 && d.is_finite())) {
        return Err(Error::InvalidParameter(format!("level spacing {d} must be positive")));
    }
    let (inside, outside): (Vec<(usize, f64)>, Vec<(usize, f64)>) = deltas
        .iter()
        .copied()
        .enumerate()
        .partition(|(_, d)| (d - 1.0).abs() < opts.exclusion_band);
    let points: Vec<Point> = outside
        .iter()
        .map(|(_, d)| Point {
            sys: sys.with_delta(*d),
            param: "delta",
            value: *d,
        })
        .collect();
    let computed = evaluate(points, method, opts)?.rows;
    let mut rows: Vec<(usize, SweepRow)> = outside.iter().map(|(k, _)| *k).zip(computed).collect();
    for (k, d) in &inside {
        let p = Point {
            sys: sys.with_delta(*d),
            param: "delta",
            value: *d,
        };
        rows.push((*k, row(&p, f64::NAN, f64::NAN, EXCLUDED)));
    }
    rows.sort_by_key(|(k, _)| *k);
    let table = SweepTable {
        rows: rows.into_iter().map(|(_, r)| r).collect(),
    };

    let valid: Vec<&SweepRow> = table.rows.iter().filter(|r| !r.is_excluded()).collect();
    let effect = |r: &SweepRow| (1.0 - r.normalized()).abs();
    let best = valid
        .iter()
        .enumerate()
        .max_by(|a, b| effect(a.1).total_cmp(&effect(b.1)))
        .map(|(k, r)| (k, *r));
    let extremum = best.map(|(k, r)| Extremum {
        delta_tilde: r.delta_tilde,
        normalized: r.normalized(),
        interior: k > 0 && k + 1 < valid.len(),
    });
    let far_ratio = best.and_then(|(_, peak)| {
        let far = valid
            .iter()
            .max_by(|a, b| (a.delta_tilde.ln().abs()).total_cmp(&b.delta_tilde.ln().abs()))?;
        let e = effect(peak);
        (e > 0.0).then(|| effect(far) / e)
    });
    Ok(LevelSpacingSweep {
        table,
        extremum,
        far_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::preset;
    use std::f64::consts::PI;

    fn nv(u: f64) -> SystemParams {
        let (m, p) = preset("nv-nsi").unwrap();
        SystemParams::new(m, p, u).unwrap()
    }

    #[test]
    fn phi_periodicity_and_polar_axis() {
        let o = TauOptions::default();
        let t = sweep_polarization(&nv(0.3), &[PI / 2.0], &[0.3, 0.3 + PI], TauMethod::Markov, &o).unwrap();
        assert_eq!(t.rows[0].sweep_param, "phi");
        assert!((t.rows[0].tau_d - t.rows[1].tau_d).abs() <= 1e-12 * t.rows[0].tau_d);
        let z = sweep_polarization(&nv(0.3), &[0.0], &[0.0, 1.0, 2.0], TauMethod::Markov, &o).unwrap();
        assert!(z.rows.windows(2).all(|w| (w[0].tau_d - w[1].tau_d).abs() <= 1e-12 * w[0].tau_d));
    }

    #[test]
    fn velocity_sweep_emits_fit() {
        let (t, fit) = sweep_velocity(&nv(0.0), &[0.005, 0.01, 0.015, 0.02], TauMethod::Analytic, &TauOptions::default())
            .unwrap();
        assert_eq!(t.rows.len(), 4);
        assert!(fit.unwrap().b_over_a > 0.0);
        let csv = t.to_csv();
        assert!(csv.starts_with("sweep_param,value,tau_d,tau_d_u0,rate,method,material,particle,theta,phi,u,delta_tilde,gamma_tilde\n"));
        assert!(csv.lines().nth(1).unwrap().starts_with("u,"));
    }

    #[test]
    fn level_sweep_excludes_band_and_is_flat_at_rest() {
        let s = sweep_level_spacing(&nv(0.0), &[0.5, 0.95, 1.5], TauMethod::Markov, &TauOptions::default()).unwrap();
        assert!(s.table.rows[1].is_excluded());
        assert!(s.table.rows[1].tau_d.is_nan());
        for r in [&s.table.rows[0], &s.table.rows[2]] {
            assert_eq!(r.normalized(), 1.0);
        }
    }

    #[test]
    fn combos_are_labelled() {
        let mut combos = Vec::new();
        for name in crate::model::PRESET_NAMES {
            let (m, p) = preset(name).unwrap();
            combos.push(SystemParams::new(m, p, 0.001).unwrap());
        }
        let t = sweep_material_particle(&combos, &[PI / 2.0], &[0.0], TauMethod::Markov, &TauOptions::default())
            .unwrap();
        let labels: std::collections::BTreeSet<_> =
            t.rows.iter().map(|r| format!("{}/{}", r.material, r.particle)).collect();
        assert_eq!(labels.len(), 4);
    }
}
