//! Principal-branch exponential integral E₁ for complex arguments.
//!
//! Small arguments use the convergent power series, large arguments the
//! J-fraction (even contraction of the Laplace continued fraction) for the
//! scaled function `e^z E₁(z)`. The scaled form never overflows, which is
//! what the time-domain kernels need: they always combine `e^z` with `E₁(z)`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Radius below which the power series is used.
pub const SERIES_RADIUS: f64 = 4.0;

const MAX_SERIES_TERMS: usize = 500;
const MAX_FRACTION_TERMS: usize = 5000;

/// Principal-branch E₁(z).
///
/// Fails for `z = 0` and for `z` on the negative real axis (the branch cut).
pub fn exp_integral_e1(z: Complex64) -> Result<Complex64> {
    check_domain(z)?;
    if z.norm() <= SERIES_RADIUS {
        return Ok(series(z));
    }
    // e^{-z} may overflow far in the left half-plane; that is E₁'s true size.
    Ok(scaled_large(z) * (-z).exp())
}

/// Scaled exponential integral `e^z E₁(z)` on the principal branch.
pub fn exp_e1_scaled(z: Complex64) -> Result<Complex64> {
    check_domain(z)?;
    Ok(scaled_unchecked(z))
}

fn check_domain(z: Complex64) -> Result<()> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("E1 argument is not finite: {z}")));
    }
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::Domain("E1 is singular at z = 0".into()));
    }
    if z.im == 0.0 && z.re < 0.0 {
        return Err(Error::Domain(format!(
            "E1 argument {z} lies on the branch cut (negative real axis)"
        )));
    }
    Ok(())
}

/// `e^z E₁(z)` without domain checks.
///
/// On the negative real axis the sign of the zero imaginary part selects the
/// side of the cut: `+0.0` gives the limit from above, `-0.0` from below.
pub(crate) fn scaled_unchecked(z: Complex64) -> Complex64 {
    if z.im == 0.0 && z.re < 0.0 {
        let x = -z.re;
        // E₁(-x ± i0) = -Ei(x) ∓ iπ
        let side = if z.im.is_sign_negative() { 1.0 } else { -1.0 };
        let decay = (-x).exp();
        return Complex64::new(-exp_neg_ei(x), side * std::f64::consts::PI * decay);
    }
    if z.norm() <= SERIES_RADIUS {
        return series(z) * z.exp();
    }
    scaled_large(z)
}

fn scaled_large(z: Complex64) -> Complex64 {
    match continued_fraction(z) {
        Some(v) => v,
        // Slow convergence only happens hugging the cut, where the series has
        // no cancellation problem.
        None => series(z) * z.exp(),
    }
}

/// E₁(z) = -γ - Log z - Σ_{k≥1} (-z)^k / (k·k!)
fn series(z: Complex64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut power = Complex64::new(1.0, 0.0);
    for k in 1..=MAX_SERIES_TERMS {
        let kf = k as f64;
        power = power * (-z) / kf;
        let term = power / kf;
        sum += term;
        if term.norm() <= f64::EPSILON * 0.25 * sum.norm() {
            break;
        }
    }
    -EULER_GAMMA - z.ln() - sum
}

/// Modified Lentz evaluation of
/// e^z E₁(z) = 1/(z + 1 - 1²/(z + 3 - 2²/(z + 5 - ...))).
fn continued_fraction(z: Complex64) -> Option<Complex64> {
    let tiny = Complex64::new(1e-300, 0.0);
    let mut f = z + 1.0;
    if f.norm() == 0.0 {
        f = tiny;
    }
    let mut c = f;
    let mut d = Complex64::new(0.0, 0.0);
    for k in 1..MAX_FRACTION_TERMS {
        let kf = k as f64;
        let a = -kf * kf;
        let b = z + (2.0 * kf + 1.0);
        d = b + a * d;
        if d.norm() == 0.0 {
            d = tiny;
        }
        c = b + a / c;
        if c.norm() == 0.0 {
            c = tiny;
        }
        d = d.inv();
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            return Some(f.inv());
        }
    }
    None
}

/// `e^{-x} Ei(x)` for real `x > 0`.
pub(crate) fn exp_neg_ei(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x > 40.0 {
        // asymptotic: (1/x) Σ k!/x^k, truncated at the smallest term
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..60 {
            let next = term * k as f64 / x;
            if next > term || next < f64::EPSILON * sum {
                break;
            }
            term = next;
            sum += term;
        }
        return sum / x;
    }
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 1..400 {
        let kf = k as f64;
        term *= x / kf;
        let add = term / kf;
        sum += add;
        if add < f64::EPSILON * 0.25 * sum {
            break;
        }
    }
    (-x).exp() * (EULER_GAMMA + x.ln() + sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn e1_at_one() {
        let v = exp_integral_e1(c(1.0, 0.0)).unwrap();
        assert!((v.re - 0.219_383_934_395_520_27).abs() < 1e-15);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn reference_values() {
        // mpmath, 30 digits
        let cases = [
            (c(0.5, 2.0), c(-0.238_126_937_892_671_87, -0.025_877_115_590_053_965)),
            (c(-3.0, 0.5), c(-9.383_603_509_330_943, 0.129_212_970_084_629_77)),
            (c(-3.9, -0.1), c(-18.268_645_649_532_504, 1.876_168_851_189_4)),
            (c(10.0, -20.0), c(-1.201_415_002_521_843_1e-6, 1.582_980_529_257_343_8e-6)),
            (c(0.01, 0.02), c(3.233_309_954_494_370_1, -1.087_248_826_411_545)),
            (c(-6.0, 1e-3), c(-85.989_734_126_552_56, -3.074_354_529_434_482_6)),
            (c(-4.5, 0.2), c(-27.623_277_433_218_935, 0.841_743_446_741_853_4)),
        ];
        for (z, want) in cases {
            let got = exp_integral_e1(z).unwrap();
            assert!(rel(got, want) < 1e-13, "z = {z}: {got} vs {want}");
        }
    }

    #[test]
    fn scaled_far_left() {
        let got = exp_e1_scaled(c(-20.0, 5.0)).unwrap();
        let want = c(-0.049_324_937_704_085_02, -0.013_060_900_224_543_355);
        assert!(rel(got, want) < 1e-13);
    }

    #[test]
    fn rejects_cut_and_origin() {
        assert!(exp_integral_e1(c(0.0, 0.0)).is_err());
        assert!(exp_integral_e1(c(-1.0, 0.0)).is_err());
        assert!(exp_e1_scaled(c(-7.0, 0.0)).is_err());
        assert!(exp_integral_e1(c(f64::NAN, 1.0)).is_err());
    }

    #[test]
    fn large_argument_asymptote() {
        for z in [c(100.0, 0.0), c(70.0, 80.0), c(1.0, 150.0), c(300.0, -20.0)] {
            let v = exp_integral_e1(z).unwrap();
            let lead = (-z).exp() / z;
            assert!(rel(v, lead) < 0.01, "z = {z}");
        }
    }

    #[test]
    fn series_and_fraction_agree_on_switch_circle() {
        for k in 0..72 {
            let theta = -std::f64::consts::PI + (k as f64 + 0.5) * std::f64::consts::PI / 36.0;
            let z = Complex64::from_polar(SERIES_RADIUS, theta);
            let s = series(z) * z.exp();
            if let Some(f) = continued_fraction(z) {
                assert!(rel(s, f) < 1e-12, "theta = {theta}: {s} vs {f}");
            }
        }
    }

    #[test]
    fn cut_limits() {
        // E₁(-x ± i0) = -Ei(x) ∓ iπ
        let x: f64 = 3.0;
        let above = scaled_unchecked(c(-x, 0.0));
        let below = scaled_unchecked(c(-x, -0.0));
        let ei = 0.494_576_401_348_641_2; // e^{-3} Ei(3)
        assert!((above.re + ei).abs() < 1e-14);
        assert!((above.im + std::f64::consts::PI * (-x).exp()).abs() < 1e-15);
        assert!((below.im - std::f64::consts::PI * (-x).exp()).abs() < 1e-15);
        // continuity with nearby off-cut points
        let near = exp_e1_scaled(c(-x, 1e-9)).unwrap();
        assert!((near - above).norm() < 1e-8);
    }

    #[test]
    fn exp_neg_ei_reference() {
        let cases = [
            (0.5, 0.275_498_298_551_270_26),
            (3.0, 0.494_576_401_348_641_24),
            (10.0, 0.113_147_020_473_410_78),
            (45.0, 0.022_739_607_254_528_28),
            (200.0, 0.005_025_253_826_933_301),
        ];
        for (x, want) in cases {
            let got = exp_neg_ei(x);
            assert!((got - want).abs() / want < 1e-13, "x = {x}: {got}");
        }
    }
}
