//! Tabulated surface/particle combinations.

use super::params::{MaterialParams, Orientation, ParticleParams};
use crate::error::{Error, Result};

/// Default dimensionless coupling.
pub const DEFAULT_R0_TILDE: f64 = 1e-2;

/// Gold: ω_s ≈ 9.7e15 rad/s, Γ̃ ≈ 0.003.
pub fn gold() -> MaterialParams {
    MaterialParams {
        name: "Au".into(),
        omega_s: 9.7e15,
        gamma_tilde: 0.003,
    }
}

/// n-doped silicon: ω_s ≈ 2.47e14 rad/s, Γ̃ ≈ 1.
pub fn n_silicon() -> MaterialParams {
    MaterialParams {
        name: "nSi".into(),
        omega_s: 2.47e14,
        gamma_tilde: 1.0,
    }
}

/// Rb transition frequency in rad/s, fixed by Δ̃ = 8 over n-Si.
pub const RB_OMEGA: f64 = 8.0 * 2.47e14;

/// Reference velocity used for each surface in level-spacing sweeps.
pub fn reference_u(material: &MaterialParams) -> Option<f64> {
    match material.name.as_str() {
        "Au" => Some(1.5e-4),
        "nSi" => Some(0.003),
        _ => None,
    }
}

pub const PRESET_NAMES: [&str; 4] = ["nv-nsi", "nv-au", "rb-nsi", "rb-au"];

pub const MATERIAL_NAMES: [&str; 2] = ["au", "nsi"];

/// Surface by name (`Au`, `nSi`; case-insensitive).
pub fn material(name: &str) -> Result<MaterialParams> {
    match normalize(name).as_str() {
        "au" | "gold" => Ok(gold()),
        "nsi" | "n-si" | "silicon" => Ok(n_silicon()),
        _ => Err(Error::UnknownPreset {
            name: name.into(),
            valid: MATERIAL_NAMES.join(", "),
        }),
    }
}

/// A particle/surface pair such as `nv-nsi` or `Rb-on-Au`. The dipole points
/// along the direction of motion and `r̃₀` takes its default value.
pub fn preset(name: &str) -> Result<(MaterialParams, ParticleParams)> {
    let key = normalize(name).replace("-on-", "-");
    let (particle, surface) = key.split_once('-').ok_or_else(|| unknown(name))?;
    let material = material(surface).map_err(|_| unknown(name))?;
    let delta = match particle {
        "nv" => match material.name.as_str() {
            "nSi" => 0.2,
            _ => 0.9,
        },
        "rb" => RB_OMEGA / material.omega_s,
        _ => return Err(unknown(name)),
    };
    let label = if particle == "nv" { "NV" } else { "Rb" };
    let particle = ParticleParams {
        name: label.into(),
        delta_tilde: delta,
        r0_tilde: DEFAULT_R0_TILDE,
        orientation: Orientation::X,
    };
    Ok((material, particle))
}

fn normalize(name: &str) -> String {
    name.trim().to_ascii_lowercase().replace(['_', '/'], "-")
}

fn unknown(name: &str) -> Error {
    Error::UnknownPreset {
        name: name.into(),
        valid: PRESET_NAMES.join(", "),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn materials() {
        let m = material("nSi").unwrap();
        assert_eq!((m.omega_s, m.gamma_tilde), (2.47e14, 1.0));
        let m = material("Au").unwrap();
        assert_eq!((m.omega_s, m.gamma_tilde), (9.7e15, 0.003));
    }

    #[test]
    fn pairs() {
        let (m, p) = preset("NV-on-nSi").unwrap();
        assert_eq!(m.name, "nSi");
        assert_eq!(p.delta_tilde, 0.2);
        assert_eq!(p.r0_tilde, 1e-2);
        assert_eq!(preset("nv-au").unwrap().1.delta_tilde, 0.9);
        assert!((preset("rb-nsi").unwrap().1.delta_tilde - 8.0).abs() < 1e-12);
        let rb_au = preset("Rb_Au").unwrap().1.delta_tilde;
        assert!((rb_au - 1.976e15 / 9.7e15).abs() < 1e-12);
        for name in PRESET_NAMES {
            let (m, p) = preset(name).unwrap();
            m.validate().unwrap();
            p.validate().unwrap();
        }
    }

    #[test]
    fn unknown_lists_valid_names() {
        let err = preset("Cs-on-Ag").unwrap_err();
        let msg = err.to_string();
        for name in PRESET_NAMES {
            assert!(msg.contains(name), "{msg}");
        }
        assert!(preset("nv").is_err());
        assert!(material("Ag").is_err());
    }
}
