//! Roots of real quartic polynomials.
//!
//! Aberth–Ehrlich simultaneous iteration, followed by a Newton polish and
//! explicit conjugate pairing.

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_ABERTH: usize = 500;

/// All four roots of `c4 x⁴ + c3 x³ + c2 x² + c1 x + c0`, sorted by real part
/// then imaginary part.
pub fn quartic_roots(c4: f64, c3: f64, c2: f64, c1: f64, c0: f64) -> Result<[Complex64; 4]> {
    let c = [c4, c3, c2, c1, c0];
    if c4 == 0.0 {
        return Err(Error::InvalidParameter("leading quartic coefficient is zero".into()));
    }
    if c.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("quartic coefficients must be finite".into()));
    }
    let a: [f64; 5] = c.map(|v| v / c4);

    // Fujiwara bound for the initial circle
    let radius = (1..5)
        .map(|k| a[k].abs().powf(1.0 / k as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3)
        * 2.0;
    let mut z: [Complex64; 4] = std::array::from_fn(|k| {
        Complex64::from_polar(radius * 0.5, 0.4 + k as f64 * std::f64::consts::FRAC_PI_2)
    });

    for _ in 0..MAX_ABERTH {
        let mut moved: f64 = 0.0;
        for k in 0..4 {
            let (p, dp) = horner(&a, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..4)
                .filter(|&j| j != k)
                .map(|j| {
                    let d = z[k] - z[j];
                    if d.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let denom = Complex64::new(1.0, 0.0) - ratio * repulsion;
            let step = if denom.norm() == 0.0 { ratio } else { ratio / denom };
            if step.is_finite() {
                z[k] -= step;
                moved = moved.max(step.norm() / z[k].norm().max(1.0));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }

    for r in z.iter_mut() {
        let (p, dp) = horner(&a, *r);
        if dp.norm() > 0.0 {
            let step = p / dp;
            if step.is_finite() && step.norm() < 1e-3 * r.norm().max(1.0) {
                *r -= step;
            }
        }
    }

    pair_conjugates(&mut z);
    z.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    Ok(z)
}

fn horner(a: &[f64; 5], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(a[0], 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &coef in &a[1..] {
        dp = dp * x + p;
        p = p * x + coef;
    }
    (p, dp)
}

/// Makes the set exactly closed under conjugation: near-real roots become
/// real, the rest are matched with their closest conjugate partner and
/// averaged.
fn pair_conjugates(z: &mut [Complex64; 4]) {
    let scale = z.iter().map(|r| r.norm()).fold(1.0f64, f64::max);
    let mut done = [false; 4];
    for k in 0..4 {
        if done[k] {
            continue;
        }
        if z[k].im.abs() <= 1e-10 * scale {
            z[k].im = 0.0;
            done[k] = true;
            continue;
        }
        let partner = (0..4)
            .filter(|&j| j != k && !done[j])
            .min_by(|&i, &j| {
                (z[i] - z[k].conj())
                    .norm()
                    .total_cmp(&(z[j] - z[k].conj()).norm())
            });
        if let Some(j) = partner {
            let re = 0.5 * (z[k].re + z[j].re);
            let im = 0.5 * (z[k].im.abs() + z[j].im.abs());
            let sign = if z[k].im >= 0.0 { 1.0 } else { -1.0 };
            z[k] = Complex64::new(re, sign * im);
            z[j] = Complex64::new(re, -sign * im);
            done[j] = true;
        }
        done[k] = true;
    }
}
