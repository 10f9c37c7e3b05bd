//! Magnetic material and waveguide geometry.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vacuum permeability in T·m/A (classical SI value).
pub const MU0: f64 = 4.0e-7 * PI;

/// Preset names accepted by [`MaterialStack::preset`].
pub const PRESET_NAMES: &[&str] = &["cofeb-paper", "cofeb-paper-fig2", "cofeb-paper-mumax-run"];

/// Material constants and waveguide cross-section feeding the dispersion
/// relation. All quantities are SI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialStack {
    /// M_s in A/m.
    pub saturation_magnetization: f64,
    /// A_ex in J/m.
    pub exchange_constant: f64,
    /// Gilbert damping. Stored for completeness, never used by the model.
    #[serde(default)]
    pub damping: f64,
    /// gamma in rad/(s·T).
    pub gyromagnetic_ratio: f64,
    /// w in m.
    pub waveguide_width: f64,
    /// d in m.
    pub waveguide_thickness: f64,
    /// Width mode index n.
    #[serde(default = "default_mode_number")]
    pub mode_number: u32,
    /// Fixed wave-vector angle theta_k (rad). Ignored when
    /// `theta_k_from_wavevector` is set.
    #[serde(default)]
    pub theta_k: f64,
    /// Use theta_k = atan(n·pi / (k·w)) instead of the fixed angle.
    #[serde(default)]
    pub theta_k_from_wavevector: bool,
    /// Magnetization angle to the long axis theta_M (rad).
    #[serde(default)]
    pub theta_m: f64,
    #[serde(default = "default_mu0")]
    pub vacuum_permeability: f64,
}

fn default_mode_number() -> u32 {
    1
}

fn default_mu0() -> f64 {
    MU0
}

impl MaterialStack {
    /// CoFeB with the given waveguide width; 9 nm thick, first width mode.
    pub fn cofeb(width_m: f64) -> Self {
        Self {
            saturation_magnetization: 1.36e6,
            exchange_constant: 18.6e-12,
            damping: 0.004,
            gyromagnetic_ratio: 1.76e11,
            waveguide_width: width_m,
            waveguide_thickness: 9e-9,
            mode_number: 1,
            theta_k: 0.0,
            theta_k_from_wavevector: false,
            theta_m: 0.0,
            vacuum_permeability: MU0,
        }
    }

    /// Shipped presets. `cofeb-paper` is the 200 nm wide guide; the
    /// `-mumax-run` variant uses the 32 nm simulated cross-section.
    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "cofeb-paper" | "cofeb-paper-fig2" => Ok(Self::cofeb(200e-9)),
            "cofeb-paper-mumax-run" => Ok(Self::cofeb(32e-9)),
            _ => Err(Error::UnknownPreset(name.to_owned())),
        }
    }

    /// Parses a key-value (TOML) material file and validates it.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let stack: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        stack.validate()?;
        Ok(stack)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Resolves a preset name, falling back to reading a material file.
    pub fn resolve(name_or_path: &str) -> Result<Self> {
        match Self::preset(name_or_path) {
            Ok(stack) => Ok(stack),
            Err(unknown) => {
                let path = Path::new(name_or_path);
                if path.is_file() {
                    Self::from_toml_str(&std::fs::read_to_string(path)?)
                } else {
                    Err(unknown)
                }
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("saturation_magnetization", self.saturation_magnetization),
            ("exchange_constant", self.exchange_constant),
            ("gyromagnetic_ratio", self.gyromagnetic_ratio),
            ("waveguide_width", self.waveguide_width),
            ("waveguide_thickness", self.waveguide_thickness),
            ("vacuum_permeability", self.vacuum_permeability),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be positive and finite, got {value}"
                )));
            }
        }
        if self.mode_number < 1 {
            return Err(Error::InvalidArgument("mode_number must be >= 1".into()));
        }
        for (name, value) in [
            ("damping", self.damping),
            ("theta_k", self.theta_k),
            ("theta_m", self.theta_m),
        ] {
            if !value.is_finite() {
                return Err(Error::InvalidArgument(format!("{name} must be finite")));
            }
        }
        Ok(())
    }

    /// Squared exchange length lambda_ex = 2 A_ex / (mu0 M_s^2), in m².
    pub fn exchange_length_sq(&self) -> f64 {
        2.0 * self.exchange_constant / (self.vacuum_permeability * self.saturation_magnetization.powi(2))
    }

    /// omega_M = gamma · mu0 · M_s, in rad/s.
    pub fn omega_m(&self) -> f64 {
        self.gyromagnetic_ratio * self.vacuum_permeability * self.saturation_magnetization
    }

    /// Transverse quantization term (n·pi/w)², in rad²/m².
    pub fn transverse_k_sq(&self) -> f64 {
        (f64::from(self.mode_number) * PI / self.waveguide_width).powi(2)
    }
}
