//! Decoherence times, the quadratic velocity law and parameter sweeps.

pub mod fit;
pub mod sweep;
pub mod tau;

pub use fit::{loglog_slope, quadratic_ratio_fit, QuadraticFit};
pub use sweep::{
    sweep_level_spacing, sweep_material_particle, sweep_polarization, sweep_velocity, LevelSpacingSweep, SweepRow,
    SweepTable,
};
pub use tau::{
    g_function, tau_d, tau_d_analytic, tau_d_analytic_with, tau_d_markov, tau_d_numeric, tau_d_numeric_with,
    DecoherenceTimeResult, TauMethod, TauOptions,
};
