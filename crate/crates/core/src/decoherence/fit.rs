//! Quadratic velocity law `τ_D ≈ a − b u²`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::parallel::map_ordered;

use super::tau::{tau_d, TauMethod, TauOptions};

/// Relative deviation from the fitted parabola above which the fit is
/// flagged.
pub const FIT_WARNING_THRESHOLD: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitSample {
    pub u: f64,
    pub tau_d: f64,
    /// `1 − τ_D/τ_D|₀`
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticFit {
    pub a: f64,
    pub b: f64,
    pub b_over_a: f64,
    /// Largest relative deviation of a sample from `a − b u²`.
    pub residual: f64,
    pub warning: bool,
    pub tau_d_u0: f64,
    pub method: TauMethod,
    pub samples: Vec<FitSample>,
}

/// Least-squares fit of `τ_D(u) = a − b u²`.
///
/// Needs at least four velocities, all below the threshold `Δ̃/2`.
pub fn quadratic_ratio_fit(
    sys: &SystemParams,
    velocities: &[f64],
    method: TauMethod,
    opts: &TauOptions,
) -> Result<QuadraticFit> {
    if velocities.len() < 4 {
        return Err(Error::InvalidParameter(format!(
            "quadratic fit needs at least 4 velocities, got {}",
            velocities.len()
        )));
    }
    let limit = sys.delta() / 2.0;
    if let Some(u) = velocities.iter().find(|u| !(u.abs() < limit)) {
        return Err(Error::InvalidParameter(format!(
            "velocity {u} is not below the threshold delta/2 = {limit}"
        )));
    }
    let mut all = vec![0.0];
    all.extend_from_slice(velocities);
    let taus: Vec<f64> = map_ordered(&all, |u| tau_d(&sys.with_u(*u), method, opts).map(|r| r.tau_d))
        .into_iter()
        .collect::<Result<_>>()?;
    let tau0 = taus[0];
    let samples: Vec<FitSample> = velocities
        .iter()
        .zip(&taus[1..])
        .map(|(u, t)| FitSample {
            u: *u,
            tau_d: *t,
            rate: 1.0 - t / tau0,
        })
        .collect();
    let xs: Vec<f64> = samples.iter().map(|s| s.u * s.u).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.tau_d).collect();
    let (intercept, slope) = linear_least_squares(&xs, &ys)?;
    let (a, b) = (intercept, -slope);
    let residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| ((a - b * x) - y).abs() / y.abs())
        .fold(0.0, f64::max);
    Ok(QuadraticFit {
        a,
        b,
        b_over_a: b / a,
        residual,
        warning: residual > FIT_WARNING_THRESHOLD,
        tau_d_u0: tau0,
        method,
        samples,
    })
}

/// Slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.iter().chain(ys).any(|v| !(*v > 0.0)) {
        return Err(Error::InvalidParameter("log-log slope needs positive data".into()));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    Ok(linear_least_squares(&lx, &ly)?.1)
}

/// `(intercept, slope)` of the ordinary least-squares line.
fn linear_least_squares(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return Err(Error::InvalidParameter("need at least two paired points to fit a line".into()));
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("fit abscissae are all equal".into()));
    }
    let slope = sxy / sxx;
    Ok((my - slope * mx, slope))
}
