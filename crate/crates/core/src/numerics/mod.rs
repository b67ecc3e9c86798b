//! Numerical kernel: exponential integral, quadrature, running integrals,
//! root finding.

pub mod cumulative;
pub mod e1;
pub mod quadrature;
pub mod quartic;
pub mod roots;

pub use cumulative::{cumulative_integral, cumulative_integral_pairs, linspace};
pub use e1::{exp_e1_scaled, exp_integral_e1};
pub use quadrature::{integrate_adaptive, Integrator, QuadratureResult, Tolerance};
pub use quartic::quartic_roots;
pub use roots::find_root_bracketed;
