//! Master-equation coefficients D, f and ζ.

pub mod analytic;
pub mod kernel;
pub mod markov;
pub mod numeric;
pub mod trace;

pub use analytic::coefficients_analytic_small_u;
pub use kernel::{omega_kernel_cos, omega_kernel_sin, Kernel};
pub use markov::{hilbert_transform, markov_limit, markov_limit_small_u, MarkovCoefficients};
pub use numeric::{
    coefficients_brute, coefficients_brute_with, coefficients_e1, coefficients_e1_with, BruteOptions,
    DEFAULT_OMEGA_MAX,
};
pub use trace::{cycle_grid, CoefficientTrace, Method};
