//! Parameter types for the surface, the particle and its motion.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vacuum speed of light, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;

/// Drude–Lorentz surface. The plasma frequency is fixed by `ω_p² = 2ω_s²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaterialParams {
    pub name: String,
    /// Surface-plasmon frequency ω_s, rad/s.
    pub omega_s: f64,
    /// Γ/ω_s.
    pub gamma_tilde: f64,
}

impl MaterialParams {
    pub fn new(name: impl Into<String>, omega_s: f64, gamma_tilde: f64) -> Result<Self> {
        let m = Self {
            name: name.into(),
            omega_s,
            gamma_tilde,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_s.is_finite() && self.omega_s > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "omega_s must be positive, got {}",
                self.omega_s
            )));
        }
        if !(self.gamma_tilde.is_finite() && self.gamma_tilde > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "gamma_tilde must be positive, got {}",
                self.gamma_tilde
            )));
        }
        Ok(())
    }

    pub fn omega_p(&self) -> f64 {
        std::f64::consts::SQRT_2 * self.omega_s
    }
}

/// Unit dipole direction `(n_x, n_y, n_z)`; `x` is the direction of motion and
/// `z` the surface normal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Orientation {
    pub nx: f64,
    pub ny: f64,
    pub nz: f64,
}

impl Default for Orientation {
    fn default() -> Self {
        Self::X
    }
}

impl Orientation {
    pub const X: Self = Self {
        nx: 1.0,
        ny: 0.0,
        nz: 0.0,
    };
    pub const Y: Self = Self {
        nx: 0.0,
        ny: 1.0,
        nz: 0.0,
    };
    pub const Z: Self = Self {
        nx: 0.0,
        ny: 0.0,
        nz: 1.0,
    };

    /// Checked constructor; the vector must already be normalized.
    pub fn new(nx: f64, ny: f64, nz: f64) -> Result<Self> {
        let o = Self { nx, ny, nz };
        o.validate()?;
        Ok(o)
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(nx: f64, ny: f64, nz: f64) -> Result<Self> {
        let n = (nx * nx + ny * ny + nz * nz).sqrt();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "orientation ({nx}, {ny}, {nz}) cannot be normalized"
            )));
        }
        Ok(Self {
            nx: nx / n,
            ny: ny / n,
            nz: nz / n,
        })
    }

    /// `(sinθ cosφ, sinθ sinφ, cosθ)`, angles in radians.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self {
            nx: st * cp,
            ny: st * sp,
            nz: ct,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n2 = self.nx * self.nx + self.ny * self.ny + self.nz * self.nz;
        if !((n2 - 1.0).abs() <= 1e-12) {
            return Err(Error::InvalidParameter(format!(
                "orientation must be a unit vector, |n|^2 = {n2}"
            )));
        }
        Ok(())
    }

    pub fn weights(&self) -> OrientationWeights {
        OrientationWeights::from(*self)
    }

    /// Squared components.
    pub fn squares(&self) -> [f64; 3] {
        [self.nx * self.nx, self.ny * self.ny, self.nz * self.nz]
    }

    /// Polar angle θ and azimuth φ in radians.
    pub fn angles(&self) -> (f64, f64) {
        (self.nz.clamp(-1.0, 1.0).acos(), self.ny.atan2(self.nx))
    }
}

/// Isotropic and anisotropic orientation weights of the small-velocity
/// expansion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrientationWeights {
    /// `1 + n_z²`
    pub d_i: f64,
    /// `3n_x² + n_y² + 4n_z²`
    pub d_a: f64,
}

impl From<Orientation> for OrientationWeights {
    fn from(o: Orientation) -> Self {
        let [x2, y2, z2] = o.squares();
        Self {
            d_i: 1.0 + z2,
            d_a: 3.0 * x2 + y2 + 4.0 * z2,
        }
    }
}

/// Two-level particle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParticleParams {
    pub name: String,
    /// Δ/ω_s.
    pub delta_tilde: f64,
    /// r₀/ω_s with r₀ = d²ω_p²/(ħω_s²a³).
    pub r0_tilde: f64,
    pub orientation: Orientation,
}

impl ParticleParams {
    pub fn new(
        name: impl Into<String>,
        delta_tilde: f64,
        r0_tilde: f64,
        orientation: Orientation,
    ) -> Result<Self> {
        let p = Self {
            name: name.into(),
            delta_tilde,
            r0_tilde,
            orientation,
        };
        p.validate()?;
        Ok(p)
    }

    /// `r0_tilde = 0` is accepted: it is the decoupled (free) limit.
    pub fn validate(&self) -> Result<()> {
        if !(self.delta_tilde.is_finite() && self.delta_tilde > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "delta_tilde must be positive, got {}",
                self.delta_tilde
            )));
        }
        if !(self.r0_tilde.is_finite() && self.r0_tilde >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "r0_tilde must be nonnegative, got {}",
                self.r0_tilde
            )));
        }
        self.orientation.validate()
    }
}

/// Particle motion. `a_nm` is only used for unit conversion and validity
/// checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KinematicsParams {
    /// v/(ω_s a); the sign only encodes direction.
    pub u: f64,
    pub a_nm: Option<f64>,
}

impl KinematicsParams {
    pub fn new(u: f64) -> Result<Self> {
        let k = Self { u, a_nm: None };
        k.validate()?;
        Ok(k)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.u.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "u must be finite, got {}",
                self.u
            )));
        }
        if let Some(a) = self.a_nm {
            if !(a.is_finite() && a > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "distance a must be positive, got {a} nm"
                )));
            }
        }
        Ok(())
    }

    /// Velocity in m/s; needs `a_nm`.
    pub fn velocity(&self, material: &MaterialParams) -> Option<f64> {
        self.a_nm.map(|a| self.u * material.omega_s * a * 1e-9)
    }
}

/// Everything that defines one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub material: MaterialParams,
    pub particle: ParticleParams,
    pub kinematics: KinematicsParams,
}

impl SystemParams {
    pub fn new(material: MaterialParams, particle: ParticleParams, u: f64) -> Result<Self> {
        let s = Self {
            material,
            particle,
            kinematics: KinematicsParams::new(u)?,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        self.material.validate()?;
        self.particle.validate()?;
        self.kinematics.validate()?;
        if self.kinematics.a_nm.is_some() {
            check_dimensional_validity(&self.material, &self.particle, &self.kinematics)?;
        }
        Ok(())
    }

    pub fn gamma(&self) -> f64 {
        self.material.gamma_tilde
    }

    pub fn delta(&self) -> f64 {
        self.particle.delta_tilde
    }

    pub fn r0(&self) -> f64 {
        self.particle.r0_tilde
    }

    pub fn u(&self) -> f64 {
        self.kinematics.u
    }

    pub fn orientation(&self) -> Orientation {
        self.particle.orientation
    }

    pub fn with_u(&self, u: f64) -> Self {
        let mut s = self.clone();
        s.kinematics.u = u;
        s
    }

    pub fn with_orientation(&self, o: Orientation) -> Self {
        let mut s = self.clone();
        s.particle.orientation = o;
        s
    }

    pub fn with_r0(&self, r0: f64) -> Self {
        let mut s = self.clone();
        s.particle.r0_tilde = r0;
        s
    }

    pub fn with_delta(&self, delta: f64) -> Self {
        let mut s = self.clone();
        s.particle.delta_tilde = delta;
        s
    }

    /// Period of the bare two-level oscillation, `2π/Δ̃`.
    pub fn cycle(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.delta()
    }
}

/// Largest accepted `v/c` and `aΔ/c`.
pub const VALIDITY_LIMIT: f64 = 0.1;

/// Non-relativistic and near-field checks; only meaningful with `a_nm` set.
pub fn check_dimensional_validity(
    material: &MaterialParams,
    particle: &ParticleParams,
    kin: &KinematicsParams,
) -> Result<()> {
    let Some(a_nm) = kin.a_nm else {
        return Ok(());
    };
    let a = a_nm * 1e-9;
    let beta = kin.u.abs() * material.omega_s * a / SPEED_OF_LIGHT;
    if beta > VALIDITY_LIMIT {
        return Err(Error::InvalidParameter(format!(
            "v/c = {beta:.3e} exceeds {VALIDITY_LIMIT}; the non-relativistic model does not apply"
        )));
    }
    let near = a * particle.delta_tilde * material.omega_s / SPEED_OF_LIGHT;
    if near > VALIDITY_LIMIT {
        return Err(Error::InvalidParameter(format!(
            "a*Delta/c = {near:.3e} exceeds {VALIDITY_LIMIT}; the near-field model does not apply"
        )));
    }
    Ok(())
}

/// r̃₀ from a dipole moment in C·m and a distance in nm (SI, with the
/// Coulomb factor 1/4πε₀).
pub fn r0_tilde_from_dipole(dipole_cm: f64, a_nm: f64, material: &MaterialParams) -> Result<f64> {
    if !(dipole_cm.is_finite() && dipole_cm >= 0.0 && a_nm.is_finite() && a_nm > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need d >= 0 and a > 0, got d = {dipole_cm}, a = {a_nm} nm"
        )));
    }
    let a = a_nm * 1e-9;
    let wp2_over_ws2 = 2.0;
    let r0 = dipole_cm * dipole_cm * wp2_over_ws2
        / (4.0 * std::f64::consts::PI * EPSILON_0 * HBAR * a * a * a);
    Ok(r0 / material.omega_s)
}
