use proptest::prelude::*;

use qfd_core::coefficients::{markov_limit, markov_limit_small_u};
use qfd_core::csv::fmt_float;
use qfd_core::model::{kernel_p, preset, spectral_density, Orientation};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn density_is_odd_and_positive(w in 1e-6f64..50.0, g in 1e-3f64..5.0) {
        let j = spectral_density(w, g);
        prop_assert!(j > 0.0);
        prop_assert_eq!(spectral_density(-w, g), -j);
    }

    #[test]
    fn floats_round_trip(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        prop_assert_eq!(fmt_float(x).parse::<f64>().unwrap(), if x == 0.0 { 0.0 } else { x });
    }

    #[test]
    fn orientation_weights_in_range(theta in 0.0f64..std::f64::consts::PI, phi in -10.0f64..10.0) {
        let o = Orientation::from_angles(theta, phi);
        let w = o.weights();
        prop_assert!((1.0..=2.0 + 1e-12).contains(&w.d_i));
        prop_assert!((1.0 - 1e-12..=4.0 + 1e-12).contains(&w.d_a));
        let [x, y, z] = o.squares();
        prop_assert!((x + y + z - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kernel_even_and_bounded(x in -20.0f64..20.0, theta in 0.0f64..3.2, phi in 0.0f64..6.3) {
        let o = Orientation::from_angles(theta, phi);
        let p = kernel_p(x, &o);
        prop_assert_eq!(p, kernel_p(-x, &o));
        prop_assert!(p.abs() <= kernel_p(0.0, &o) + 1e-15);
    }

    #[test]
    fn stationary_coefficients_mirror_in_velocity(u in 0.0f64..0.5) {
        let (m, p) = preset("nv-nsi").unwrap();
        let sys = qfd_core::model::SystemParams::new(m, p, u).unwrap();
        let a = markov_limit(&sys).unwrap();
        let b = markov_limit(&sys.with_u(-u)).unwrap();
        prop_assert_eq!(a, b);
        prop_assert!(a.d_inf > 0.0 && a.zeta_inf <= a.d_inf * (1.0 + 1e-12));
    }

    #[test]
    fn small_velocity_limit_matches_exact(u in 0.0f64..0.01) {
        let (m, p) = preset("nv-nsi").unwrap();
        let sys = qfd_core::model::SystemParams::new(m, p, u).unwrap();
        let exact = markov_limit(&sys).unwrap();
        let approx = markov_limit_small_u(&sys).unwrap();
        prop_assert!((exact.d_inf - approx.d_inf).abs() < 1e-6 * exact.d_inf);
    }
}
