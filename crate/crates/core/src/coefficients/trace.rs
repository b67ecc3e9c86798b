//! Sampled coefficient time series.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::csv::{CsvWriter, Field};
use crate::error::{Error, Result};
use crate::numerics::cumulative::{check_grid, cumulative_integral};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Closed-form E₁ kernel with time quadrature.
    E1,
    /// Small-velocity asymptotic expansion.
    Analytic,
    /// Direct two-dimensional quadrature.
    Brute,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::E1 => "e1",
            Method::Analytic => "analytic",
            Method::Brute => "brute",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "e1" => Ok(Method::E1),
            "analytic" => Ok(Method::Analytic),
            "brute" => Ok(Method::Brute),
            _ => Err(Error::InvalidParameter(format!(
                "unknown coefficient method '{s}' (expected e1, analytic or brute)"
            ))),
        }
    }
}

/// `D`, `f`, `ζ` on a time grid together with `∫D` and `∫f`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientTrace {
    pub grid: Vec<f64>,
    pub d: Vec<f64>,
    pub f: Vec<f64>,
    pub zeta: Vec<f64>,
    pub cum_d: Vec<f64>,
    pub cum_f: Vec<f64>,
    pub method: Method,
    /// Level spacing used for the natural-cycle axis.
    pub delta_tilde: f64,
}

pub const TRACE_CSV_HEADER: [&str; 8] = ["t", "N_cycles", "D", "f", "zeta", "cumD", "cumF", "method"];

impl CoefficientTrace {
    /// Assembles a trace and fills the running integrals.
    pub fn from_samples(
        grid: Vec<f64>,
        d: Vec<f64>,
        f: Vec<f64>,
        zeta: Vec<f64>,
        method: Method,
        delta_tilde: f64,
    ) -> Result<Self> {
        check_grid(&grid)?;
        if d.len() != grid.len() || f.len() != grid.len() || zeta.len() != grid.len() {
            return Err(Error::InvalidParameter("coefficient arrays differ in length".into()));
        }
        let cum_d = cumulative_integral(&grid, &d)?;
        let cum_f = cumulative_integral(&grid, &f)?;
        Ok(Self {
            grid,
            d,
            f,
            zeta,
            cum_d,
            cum_f,
            method,
            delta_tilde,
        })
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Time in natural cycles `N = t/(2π/Δ̃)`.
    pub fn cycles(&self) -> Vec<f64> {
        self.grid.iter().map(|t| to_cycles(*t, self.delta_tilde)).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut w = CsvWriter::new(&TRACE_CSV_HEADER);
        let m = self.method.as_str();
        for k in 0..self.len() {
            w.row(&[
                Field::Num(self.grid[k]),
                Field::Num(to_cycles(self.grid[k], self.delta_tilde)),
                Field::Num(self.d[k]),
                Field::Num(self.f[k]),
                Field::Num(self.zeta[k]),
                Field::Num(self.cum_d[k]),
                Field::Num(self.cum_f[k]),
                Field::Text(m),
            ]);
        }
        w.finish()
    }
}

pub fn to_cycles(t: f64, delta_tilde: f64) -> f64 {
    t * delta_tilde / (2.0 * PI)
}

/// Uniform grid from 0 to `cycles` natural cycles.
pub fn cycle_grid(delta_tilde: f64, cycles: f64, points_per_cycle: usize) -> Result<Vec<f64>> {
    if !(delta_tilde > 0.0 && cycles > 0.0 && points_per_cycle >= 1) {
        return Err(Error::InvalidParameter(format!(
            "need delta > 0, cycles > 0 and points per cycle >= 1 (got {delta_tilde}, {cycles}, {points_per_cycle})"
        )));
    }
    let n = ((cycles * points_per_cycle as f64).ceil() as usize).max(1);
    let t_max = cycles * 2.0 * PI / delta_tilde;
    Ok(crate::numerics::linspace(0.0, t_max, n + 1))
}

/// Grid precondition shared by all trace builders: starts at 0, strictly
/// increasing.
pub(crate) fn check_trace_grid(grid: &[f64]) -> Result<()> {
    check_grid(grid)?;
    if grid[0] != 0.0 {
        return Err(Error::Domain(format!("time grid must start at 0, got {}", grid[0])));
    }
    Ok(())
}
