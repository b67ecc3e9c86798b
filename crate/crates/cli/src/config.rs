//! Run configuration: TOML file, command-line overrides and resolution to
//! explicit parameters.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use qfd_core::model::{material, preset, MaterialParams, Orientation, ParticleParams, SystemParams};

use crate::failure::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// An angle given either in radians (bare number) or degrees (`"90deg"`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AngleSpec {
    Radians(f64),
    Text(String),
}

impl AngleSpec {
    pub fn radians(&self) -> Result<f64, Failure> {
        match self {
            AngleSpec::Radians(r) => Ok(*r),
            AngleSpec::Text(s) => parse_angle(s),
        }
    }
}

/// Parses `1.2` (radians), `90deg` or `90 deg` (degrees).
pub fn parse_angle(s: &str) -> Result<f64, Failure> {
    let t = s.trim();
    let (num, scale) = match t.strip_suffix("deg") {
        Some(n) => (n.trim(), PI / 180.0),
        None => (t, 1.0),
    };
    let v: f64 = num
        .parse()
        .map_err(|_| Failure::config(format!("cannot parse angle '{s}' (use radians or a 'deg' suffix)")))?;
    if !v.is_finite() {
        return Err(Failure::config(format!("angle '{s}' is not finite")));
    }
    Ok(v * scale)
}

/// File layout; every key is optional and overlays the defaults.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    /// Particle/surface pair such as `nv-nsi`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default)]
    pub material: MaterialSection,
    #[serde(default)]
    pub particle: ParticleSection,
    #[serde(default)]
    pub kinematics: KinematicsSection,
    #[serde(default)]
    pub numerics: NumericsSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_s_rad_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_tilde: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParticleSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_tilde: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r0_tilde: Option<f64>,
    /// Polar angle of the dipole from the surface normal.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<AngleSpec>,
    /// Azimuth measured from the direction of motion.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<AngleSpec>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KinematicsSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_nm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericsSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abs_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points_per_cycle: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon_cycles: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exclusion_band: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, Failure> {
        toml::from_str(text).map_err(|e| Failure::config(format!("invalid config: {e}")))
    }

    /// Applies `other` on top of `self`; set keys in `other` win.
    pub fn overlay(&mut self, other: ConfigFile) {
        fn set<T>(dst: &mut Option<T>, src: Option<T>) {
            if src.is_some() {
                *dst = src;
            }
        }
        set(&mut self.preset, other.preset);
        set(&mut self.material.preset, other.material.preset);
        set(&mut self.material.name, other.material.name);
        set(&mut self.material.omega_s_rad_s, other.material.omega_s_rad_s);
        set(&mut self.material.gamma_tilde, other.material.gamma_tilde);
        set(&mut self.particle.name, other.particle.name);
        set(&mut self.particle.delta_tilde, other.particle.delta_tilde);
        set(&mut self.particle.r0_tilde, other.particle.r0_tilde);
        set(&mut self.particle.theta, other.particle.theta);
        set(&mut self.particle.phi, other.particle.phi);
        set(&mut self.kinematics.u, other.kinematics.u);
        set(&mut self.kinematics.a_nm, other.kinematics.a_nm);
        set(&mut self.numerics.rel_tol, other.numerics.rel_tol);
        set(&mut self.numerics.abs_tol, other.numerics.abs_tol);
        set(&mut self.numerics.points_per_cycle, other.numerics.points_per_cycle);
        set(&mut self.numerics.omega_max, other.numerics.omega_max);
        set(&mut self.numerics.horizon_cycles, other.numerics.horizon_cycles);
        set(&mut self.numerics.exclusion_band, other.numerics.exclusion_band);
        set(&mut self.output.path, other.output.path);
        set(&mut self.output.format, other.output.format);
    }

    /// Fills every field, starting from the `nv-nsi` preset.
    pub fn resolve(&self) -> Result<RunConfig, Failure> {
        let combo = self.preset.as_deref().unwrap_or(DEFAULT_PRESET);
        let (mut mat, part) = preset(combo).map_err(Failure::from)?;
        if let Some(m) = &self.material.preset {
            mat = material(m).map_err(Failure::from)?;
        }
        let p = &self.particle;
        let (theta, phi) = match (&p.theta, &p.phi) {
            (None, None) => part.orientation.angles(),
            (t, f) => (
                t.as_ref().map(AngleSpec::radians).transpose()?.unwrap_or(PI / 2.0),
                f.as_ref().map(AngleSpec::radians).transpose()?.unwrap_or(0.0),
            ),
        };
        let n = &self.numerics;
        let defaults = NumericsConfig::default();
        let cfg = RunConfig {
            material: MaterialConfig {
                name: self.material.name.clone().unwrap_or(mat.name),
                omega_s_rad_s: self.material.omega_s_rad_s.unwrap_or(mat.omega_s),
                gamma_tilde: self.material.gamma_tilde.unwrap_or(mat.gamma_tilde),
            },
            particle: ParticleConfig {
                name: p.name.clone().unwrap_or(part.name),
                delta_tilde: p.delta_tilde.unwrap_or(part.delta_tilde),
                r0_tilde: p.r0_tilde.unwrap_or(part.r0_tilde),
                theta,
                phi,
            },
            kinematics: KinematicsConfig {
                u: self.kinematics.u.unwrap_or(0.0),
                a_nm: self.kinematics.a_nm,
            },
            numerics: NumericsConfig {
                rel_tol: n.rel_tol.unwrap_or(defaults.rel_tol),
                abs_tol: n.abs_tol.unwrap_or(defaults.abs_tol),
                points_per_cycle: n.points_per_cycle.unwrap_or(defaults.points_per_cycle),
                omega_max: n.omega_max.unwrap_or(defaults.omega_max),
                horizon_cycles: n.horizon_cycles.unwrap_or(defaults.horizon_cycles),
                exclusion_band: n.exclusion_band.unwrap_or(defaults.exclusion_band),
            },
            output: OutputConfig {
                path: self.output.path.clone().unwrap_or_else(|| "-".into()),
                format: self.output.format.unwrap_or_default(),
            },
        };
        cfg.system()?;
        cfg.numerics.validate()?;
        Ok(cfg)
    }
}

pub const DEFAULT_PRESET: &str = "nv-nsi";

/// Fully explicit parameters of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub material: MaterialConfig,
    pub particle: ParticleConfig,
    pub kinematics: KinematicsConfig,
    pub numerics: NumericsConfig,
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaterialConfig {
    pub name: String,
    pub omega_s_rad_s: f64,
    pub gamma_tilde: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParticleConfig {
    pub name: String,
    pub delta_tilde: f64,
    pub r0_tilde: f64,
    pub theta: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KinematicsConfig {
    pub u: f64,
    pub a_nm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NumericsConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub points_per_cycle: usize,
    pub omega_max: f64,
    pub horizon_cycles: f64,
    pub exclusion_band: f64,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        let tau = qfd_core::decoherence::TauOptions::default();
        let e1 = qfd_core::coefficients::numeric::E1_TOLERANCE;
        Self {
            rel_tol: e1.rel,
            abs_tol: e1.abs,
            points_per_cycle: 400,
            omega_max: qfd_core::coefficients::DEFAULT_OMEGA_MAX,
            horizon_cycles: tau.horizon_cycles,
            exclusion_band: tau.exclusion_band,
        }
    }
}

impl NumericsConfig {
    fn validate(&self) -> Result<(), Failure> {
        let positive = [
            ("rel_tol", self.rel_tol),
            ("abs_tol", self.abs_tol),
            ("omega_max", self.omega_max),
            ("horizon_cycles", self.horizon_cycles),
        ];
        for (k, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Failure::config(format!("numerics.{k} must be positive, got {v}")));
            }
        }
        if self.points_per_cycle == 0 {
            return Err(Failure::config("numerics.points_per_cycle must be at least 1"));
        }
        if !(self.exclusion_band.is_finite() && self.exclusion_band >= 0.0) {
            return Err(Failure::config("numerics.exclusion_band must be nonnegative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub path: String,
    pub format: Format,
}

impl RunConfig {
    pub fn system(&self) -> Result<SystemParams, Failure> {
        let m = MaterialParams::new(
            self.material.name.clone(),
            self.material.omega_s_rad_s,
            self.material.gamma_tilde,
        )
        .map_err(Failure::from)?;
        let p = ParticleParams::new(
            self.particle.name.clone(),
            self.particle.delta_tilde,
            self.particle.r0_tilde,
            Orientation::from_angles(self.particle.theta, self.particle.phi),
        )
        .map_err(Failure::from)?;
        let mut s = SystemParams::new(m, p, self.kinematics.u).map_err(Failure::from)?;
        s.kinematics.a_nm = self.kinematics.a_nm;
        s.validate().map_err(Failure::from)?;
        Ok(s)
    }

    pub fn tau_options(&self) -> qfd_core::decoherence::TauOptions {
        qfd_core::decoherence::TauOptions {
            horizon_cycles: self.numerics.horizon_cycles,
            exclusion_band: self.numerics.exclusion_band,
            ..Default::default()
        }
    }

    /// Explicit file form; parsing it back resolves to `self`.
    pub fn to_file(&self) -> ConfigFile {
        ConfigFile {
            preset: None,
            material: MaterialSection {
                preset: None,
                name: Some(self.material.name.clone()),
                omega_s_rad_s: Some(self.material.omega_s_rad_s),
                gamma_tilde: Some(self.material.gamma_tilde),
            },
            particle: ParticleSection {
                name: Some(self.particle.name.clone()),
                delta_tilde: Some(self.particle.delta_tilde),
                r0_tilde: Some(self.particle.r0_tilde),
                theta: Some(AngleSpec::Radians(self.particle.theta)),
                phi: Some(AngleSpec::Radians(self.particle.phi)),
            },
            kinematics: KinematicsSection {
                u: Some(self.kinematics.u),
                a_nm: self.kinematics.a_nm,
            },
            numerics: NumericsSection {
                rel_tol: Some(self.numerics.rel_tol),
                abs_tol: Some(self.numerics.abs_tol),
                points_per_cycle: Some(self.numerics.points_per_cycle),
                omega_max: Some(self.numerics.omega_max),
                horizon_cycles: Some(self.numerics.horizon_cycles),
                exclusion_band: Some(self.numerics.exclusion_band),
            },
            output: OutputSection {
                path: Some(self.output.path.clone()),
                format: Some(self.output.format),
            },
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(&self.to_file()).expect("config is always representable in TOML")
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}
