//! Physical data model: surface, particle, motion, spectral density and the
//! near-field kernels.

pub mod kernels;
pub mod params;
pub mod presets;
pub mod spectral;

pub use kernels::{kernel_p, kernel_p_derivatives, kernel_q, kernel_r};
pub use params::{
    check_dimensional_validity, r0_tilde_from_dipole, KinematicsParams, MaterialParams,
    Orientation, OrientationWeights, ParticleParams, SystemParams,
};
pub use presets::{material, preset, reference_u, DEFAULT_R0_TILDE, PRESET_NAMES};
pub use spectral::{
    pole_omega_r, spectral_density, spectral_density_derivatives, PartialFractions, PoleData,
};
