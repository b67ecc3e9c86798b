//! Running integrals of sampled data.

use crate::error::{Error, Result};

/// Composite trapezoid running integral: `Y[0] = 0`, `Y[k] = ∫_{t₀}^{t_k} y`.
pub fn cumulative_integral(t: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    check_grid(t)?;
    if y.len() != t.len() {
        return Err(Error::InvalidParameter(format!(
            "abscissae and samples differ in length ({} vs {})",
            t.len(),
            y.len()
        )));
    }
    let mut out = Vec::with_capacity(t.len());
    let mut acc = 0.0;
    out.push(acc);
    for k in 1..t.len() {
        acc += 0.5 * (t[k] - t[k - 1]) * (y[k] + y[k - 1]);
        out.push(acc);
    }
    Ok(out)
}

/// Same as [`cumulative_integral`] on `(t, y)` pairs.
pub fn cumulative_integral_pairs(samples: &[(f64, f64)]) -> Result<Vec<(f64, f64)>> {
    let (t, y): (Vec<f64>, Vec<f64>) = samples.iter().copied().unzip();
    let big_y = cumulative_integral(&t, &y)?;
    Ok(t.into_iter().zip(big_y).collect())
}

/// Checks that `t` has at least two finite, strictly increasing entries.
pub fn check_grid(t: &[f64]) -> Result<()> {
    if t.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 samples, got {}",
            t.len()
        )));
    }
    for (k, w) in t.windows(2).enumerate() {
        if !(w[0].is_finite() && w[1].is_finite()) || !(w[1] > w[0]) {
            return Err(Error::Domain(format!(
                "abscissae must be finite and strictly increasing (t[{k}] = {}, t[{}] = {})",
                w[0],
                k + 1,
                w[1]
            )));
        }
    }
    Ok(())
}

/// `n` equally spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let h = (hi - lo) / (n - 1) as f64;
            let mut v: Vec<f64> = (0..n).map(|k| lo + h * k as f64).collect();
            v[n - 1] = hi;
            v
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant() {
        let t = linspace(0.0, 5.0, 6);
        let y = vec![1.0; 6];
        let big_y = cumulative_integral(&t, &y).unwrap();
        assert_eq!(big_y[0], 0.0);
        assert_eq!(big_y[5], 5.0);
    }

    #[test]
    fn linear_is_exact() {
        let t = linspace(0.0, 2.0, 7);
        let big_y = cumulative_integral(&t, &t).unwrap();
        assert!((big_y[6] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn second_order() {
        let err = |n: usize| {
            let t = linspace(0.0, 1.0, n);
            let y: Vec<f64> = t.iter().map(|x| x.exp()).collect();
            (cumulative_integral(&t, &y).unwrap()[n - 1] - (1f64.exp() - 1.0)).abs()
        };
        let ratio = err(51) / err(101);
        assert!((ratio - 4.0).abs() < 0.1, "ratio {ratio}");
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(cumulative_integral(&[0.0], &[1.0]).is_err());
        assert!(cumulative_integral(&[0.0, 0.0], &[1.0, 1.0]).is_err());
        assert!(cumulative_integral(&[1.0, 0.0], &[1.0, 1.0]).is_err());
        assert!(cumulative_integral(&[0.0, 1.0], &[1.0]).is_err());
    }

    #[test]
    fn pairs() {
        let s = [(0.0, 1.0), (1.0, 1.0), (3.0, 1.0)];
        let out = cumulative_integral_pairs(&s).unwrap();
        assert_eq!(out, vec![(0.0, 0.0), (1.0, 1.0), (3.0, 3.0)]);
    }
}
