//! Algebraic near-field kernels P, Q, R of the moving dipole.
//!
//! All three are functions of `x = u·t`. They satisfy `P' = −3xQ` and
//! `P'' = −12R`.

use super::params::Orientation;

/// `P(x) = 2n_x²(2 − x²)/(4 + x²)^{5/2} + n_y²/(4 + x²)^{3/2} + n_z²(8 − x²)/(4 + x²)^{5/2}`
pub fn kernel_p(x: f64, o: &Orientation) -> f64 {
    let [x2n, y2n, z2n] = o.squares();
    let s = 4.0 + x * x;
    let r = s.sqrt();
    let s32 = s * r;
    let s52 = s32 * s;
    x2n * 2.0 * (2.0 - x * x) / s52 + y2n / s32 + z2n * (8.0 - x * x) / s52
}

/// `Q(x) = 2n_x²(6 − x²)/(4 + x²)^{7/2} + n_y²/(4 + x²)^{5/2} + n_z²(16 − x²)/(4 + x²)^{7/2}`
pub fn kernel_q(x: f64, o: &Orientation) -> f64 {
    let [x2n, y2n, z2n] = o.squares();
    let s = 4.0 + x * x;
    let s52 = s * s * s.sqrt();
    let s72 = s52 * s;
    x2n * 2.0 * (6.0 - x * x) / s72 + y2n / s52 + z2n * (16.0 - x * x) / s72
}

/// `R(x) = 2n_x²((6 − x²)² − 30)/(4 + x²)^{9/2} + n_y²(1 − x²)/(4 + x²)^{7/2}
///       + n_z²(16 − 27x² + x⁴)/(4 + x²)^{9/2}`
pub fn kernel_r(x: f64, o: &Orientation) -> f64 {
    let [x2n, y2n, z2n] = o.squares();
    let x2 = x * x;
    let s = 4.0 + x2;
    let s72 = s * s * s * s.sqrt();
    let s92 = s72 * s;
    let a = 6.0 - x2;
    x2n * 2.0 * (a * a - 30.0) / s92 + y2n * (1.0 - x2) / s72 + z2n * (16.0 - 27.0 * x2 + x2 * x2) / s92
}

/// `(P, P', P'')` at `x`, derivatives taken with respect to `x`.
pub fn kernel_p_derivatives(x: f64, o: &Orientation) -> (f64, f64, f64) {
    (kernel_p(x, o), -3.0 * x * kernel_q(x, o), -12.0 * kernel_r(x, o))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere(n: usize) -> Vec<Orientation> {
        // Fibonacci lattice
        let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
        (0..n)
            .map(|k| {
                let z = 1.0 - 2.0 * (k as f64 + 0.5) / n as f64;
                let r = (1.0 - z * z).sqrt();
                let phi = golden * k as f64;
                Orientation {
                    nx: r * phi.cos(),
                    ny: r * phi.sin(),
                    nz: z,
                }
            })
            .collect()
    }

    #[test]
    fn examples() {
        assert!((kernel_p(0.0, &Orientation::X) - 0.125).abs() < 1e-16);
        assert!((kernel_p(0.0, &Orientation::Z) - 0.25).abs() < 1e-16);
        assert!((kernel_p(2.0, &Orientation::Y) - 1.0 / (8.0 * 8f64.sqrt())).abs() < 1e-16);
        assert!((kernel_q(0.0, &Orientation::X) - 0.09375).abs() < 1e-16);
        assert!((kernel_r(0.0, &Orientation::Z) - 0.03125).abs() < 1e-16);
        for o in [Orientation::X, Orientation::Y, Orientation::Z] {
            assert!(kernel_q(1e6, &o).abs() < 1e-15);
            assert!(kernel_r(1e6, &o).abs() < 1e-15);
        }
    }

    #[test]
    fn value_at_origin_is_isotropic_weight() {
        for o in sphere(100) {
            assert!((kernel_p(0.0, &o) - o.weights().d_i / 8.0).abs() <= 1e-14);
        }
    }

    #[test]
    fn derivative_identities() {
        for o in sphere(20) {
            for x in [0.0, 0.3, 1.0, 2.5, 7.0] {
                let h = 1e-4;
                let (p, p1, p2) = kernel_p_derivatives(x, &o);
                let fd1 = (kernel_p(x + h, &o) - kernel_p(x - h, &o)) / (2.0 * h);
                let fd2 = (kernel_p(x + h, &o) - 2.0 * p + kernel_p(x - h, &o)) / (h * h);
                assert!((p1 - fd1).abs() < 1e-8, "P' at x = {x}");
                assert!((p2 - fd2).abs() < 1e-6, "P'' at x = {x}");
            }
        }
    }

    #[test]
    fn quadratic_taylor_remainder_is_fourth_order() {
        for o in sphere(10) {
            let w = o.weights();
            let rem = |x: f64| (kernel_p(x, &o) - (w.d_i / 8.0 - 3.0 / 64.0 * w.d_a * x * x)).abs();
            let (x1, x2) = (0.05, 0.1);
            let order = (rem(x2) / rem(x1)).ln() / (x2 / x1).ln();
            assert!(order >= 3.9, "order {order} for {o:?}");
        }
    }

    #[test]
    fn large_x_decay() {
        let x = 1e4;
        let o = Orientation::normalized(1.0, 2.0, 3.0).unwrap();
        let [a, b, c] = o.squares();
        let lead = (b - 2.0 * a - c) / (x * x * x);
        assert!((kernel_p(x, &o) - lead).abs() < 1e-6 * lead.abs());
    }

    #[test]
    fn linear_in_squared_components() {
        let o = Orientation::from_angles(0.4, 1.1);
        let [a, b, c] = o.squares();
        for x in [0.0, 0.7, 3.0] {
            let combo = a * kernel_p(x, &Orientation::X)
                + b * kernel_p(x, &Orientation::Y)
                + c * kernel_p(x, &Orientation::Z);
            assert!((kernel_p(x, &o) - combo).abs() < 1e-15);
        }
    }
}
