//! Dipole-exchange spin-wave dispersion for a thin rectangular waveguide,
//! and its numerical inversion from frequency to wavenumber.
//!
//! The forward model is
//!
//! ```text
//! omega(k)  = sqrt(A · (A + omega_M · F))
//! A         = omega_H + omega_M · lambda_ex · k_tot
//! k_tot     = k² + (n·pi/w)²
//! F         = 1 − g·cos²(θk − θM) + omega_M·g·(1 − g)·sin²(θk − θM) / A
//! g         = 1 − (1 − exp(−d·sqrt(k_tot))) / (d·sqrt(k_tot))
//! ```
//!
//! with omega_H = gamma·B_eff and omega_M = gamma·mu0·M_s. In the
//! backward-volume geometry used throughout (θk = θM = 0) F reduces to
//! 1 − g.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::material::MaterialStack;

/// Below this value of d·sqrt(k_tot) the g factor uses its series expansion.
pub const G_SERIES_CUTOFF: f64 = 1e-6;

/// Relative bisection tolerance on the wavenumber.
pub const K_REL_TOL: f64 = 1e-12;

/// Effective internal field B_eff = mu0·H_eff in tesla. Negative values
/// point against the magnetization.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldPoint(pub f64);

impl FieldPoint {
    pub const ZERO: FieldPoint = FieldPoint(0.0);

    pub fn tesla(self) -> f64 {
        self.0
    }

    /// omega_H = gamma · B_eff in rad/s.
    pub fn omega_h(self, stack: &MaterialStack) -> f64 {
        stack.gyromagnetic_ratio * self.0
    }

    /// Field shifted by `delta_t` tesla; local fields add algebraically.
    pub fn offset(self, delta_t: f64) -> FieldPoint {
        FieldPoint(self.0 + delta_t)
    }
}

/// A fully resolved point on the dispersion curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionPoint {
    pub k: f64,
    pub omega: f64,
    pub k_tot: f64,
    pub f_factor: f64,
    pub g: f64,
    pub lambda_ex: f64,
}

impl DispersionPoint {
    pub fn frequency_hz(&self) -> f64 {
        self.omega / (2.0 * PI)
    }
}

/// Log-spaced search window used when inverting the dispersion relation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KBracket {
    pub k_min: f64,
    pub k_max: f64,
    pub grid_points: usize,
}

impl Default for KBracket {
    fn default() -> Self {
        Self {
            k_min: 1e4,
            k_max: 1e9,
            grid_points: 512,
        }
    }
}

impl KBracket {
    pub fn validate(&self) -> Result<()> {
        if !(self.k_min.is_finite() && self.k_max.is_finite() && self.k_min > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "k bracket bounds must be finite and positive, got [{}, {}]",
                self.k_min, self.k_max
            )));
        }
        if self.k_min >= self.k_max {
            return Err(Error::InvalidArgument(format!(
                "k bracket is empty: [{}, {}]",
                self.k_min, self.k_max
            )));
        }
        if self.grid_points < 64 {
            return Err(Error::InvalidArgument(format!(
                "k bracket needs at least 64 scan points, got {}",
                self.grid_points
            )));
        }
        Ok(())
    }

    /// Log-spaced scan grid, endpoints included exactly.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.grid_points;
        let (lo, hi) = (self.k_min.ln(), self.k_max.ln());
        let step = (hi - lo) / (n - 1) as f64;
        (0..n)
            .map(|i| match i {
                0 => self.k_min,
                i if i == n - 1 => self.k_max,
                i => (lo + step * i as f64).exp(),
            })
            .collect()
    }
}

/// Thin-film dipolar factor g(k_tot, d).
pub fn ellipsoid_factor_g(k_tot: f64, thickness: f64) -> Result<f64> {
    ensure_finite("k_tot", k_tot)?;
    ensure_finite("thickness", thickness)?;
    if k_tot <= 0.0 || thickness <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "g needs k_tot > 0 and d > 0, got k_tot = {k_tot}, d = {thickness}"
        )));
    }
    let x = thickness * k_tot.sqrt();
    if x < G_SERIES_CUTOFF {
        Ok(x / 2.0 - x * x / 6.0)
    } else {
        // 1 - exp(-x) == -expm1(-x), accurate for small x
        Ok(1.0 + (-x).exp_m1() / x)
    }
}

/// Dipolar factor F. The angular term is only evaluated when
/// sin²(θk − θM) is non-zero, so F = 1 − g exactly for aligned angles.
pub fn dipole_factor_f(
    k_tot: f64,
    g: f64,
    omega_h: f64,
    omega_m: f64,
    lambda_ex: f64,
    theta_k: f64,
    theta_m: f64,
) -> Result<f64> {
    let angle = theta_k - theta_m;
    if angle == 0.0 {
        return Ok(1.0 - g);
    }
    let (sin, cos) = angle.sin_cos();
    let sin_sq = sin * sin;
    let cos_term = 1.0 - g * cos * cos;
    if sin_sq == 0.0 {
        return Ok(cos_term);
    }
    let denominator = omega_h + omega_m * lambda_ex * k_tot;
    if denominator == 0.0 {
        return Err(Error::Singularity { denominator });
    }
    Ok(cos_term + omega_m * g * (1.0 - g) * sin_sq / denominator)
}

fn theta_k(k: f64, stack: &MaterialStack) -> f64 {
    if stack.theta_k_from_wavevector {
        (f64::from(stack.mode_number) * PI).atan2(k * stack.waveguide_width)
    } else {
        stack.theta_k
    }
}

/// Radicand of the dispersion relation, omega² in rad²/s². Negative values
/// mean no propagating solution at this (k, B_eff).
pub fn radicand(k: f64, field: FieldPoint, stack: &MaterialStack) -> Result<f64> {
    Ok(terms(k, field, stack)?.0)
}

fn terms(k: f64, field: FieldPoint, stack: &MaterialStack) -> Result<(f64, f64, f64, f64)> {
    ensure_finite("k", k)?;
    ensure_finite("B_eff", field.0)?;
    if k < 0.0 {
        return Err(Error::InvalidArgument(format!("k must be >= 0, got {k}")));
    }
    let lambda_ex = stack.exchange_length_sq();
    let omega_m = stack.omega_m();
    let omega_h = field.omega_h(stack);
    let k_tot = k * k + stack.transverse_k_sq();
    let g = ellipsoid_factor_g(k_tot, stack.waveguide_thickness)?;
    let f = dipole_factor_f(k_tot, g, omega_h, omega_m, lambda_ex, theta_k(k, stack), stack.theta_m)?;
    let a = omega_h + omega_m * lambda_ex * k_tot;
    Ok((a * (a + omega_m * f), k_tot, g, f))
}

/// Full dispersion point at wavenumber `k`.
pub fn dispersion_point(k: f64, field: FieldPoint, stack: &MaterialStack) -> Result<DispersionPoint> {
    let (rad, k_tot, g, f_factor) = terms(k, field, stack)?;
    if rad < 0.0 {
        return Err(Error::Evanescent { radicand: rad });
    }
    Ok(DispersionPoint {
        k,
        omega: rad.sqrt(),
        k_tot,
        f_factor,
        g,
        lambda_ex: stack.exchange_length_sq(),
    })
}

/// Angular frequency omega(k) in rad/s.
pub fn omega_of_k(k: f64, field: FieldPoint, stack: &MaterialStack) -> Result<f64> {
    dispersion_point(k, field, stack).map(|p| p.omega)
}

/// Dispersion points at each `k`, skipping wavenumbers where the wave is
/// evanescent (no real frequency).
pub fn dispersion_curve(ks: &[f64], field: FieldPoint, stack: &MaterialStack) -> Result<Vec<DispersionPoint>> {
    let mut points = Vec::with_capacity(ks.len());
    for &k in ks {
        match dispersion_point(k, field, stack) {
            Ok(p) => points.push(p),
            Err(Error::Evanescent { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(points)
}

/// Every wavenumber in the bracket where omega(k) = 2·pi·f.
///
/// Sign changes of radicand(k) − (2·pi·f)² are located on the log grid and
/// refined by bisection. Working on omega² keeps the residual continuous
/// through the evanescent part of the grid.
pub fn k_roots(frequency_hz: f64, field: FieldPoint, stack: &MaterialStack, bracket: &KBracket) -> Result<Vec<f64>> {
    ensure_finite("frequency", frequency_hz)?;
    if frequency_hz <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "frequency must be positive, got {frequency_hz}"
        )));
    }
    bracket.validate()?;
    let target = (2.0 * PI * frequency_hz).powi(2);
    let residual = |k: f64| radicand(k, field, stack).map(|r| r - target);

    let grid = bracket.grid();
    let values = grid.iter().map(|&k| residual(k)).collect::<Result<Vec<_>>>()?;

    let mut roots = Vec::new();
    for i in 0..grid.len() {
        if values[i] == 0.0 {
            roots.push(grid[i]);
            continue;
        }
        if i + 1 < grid.len() && values[i] * values[i + 1] < 0.0 {
            roots.push(bisect(&residual, grid[i], grid[i + 1], values[i])?);
        }
    }
    Ok(roots)
}

fn bisect(residual: &impl Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64, mut f_lo: f64) -> Result<f64> {
    while hi - lo > K_REL_TOL * lo {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = residual(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Wavenumber (rad/m) of the unique propagating mode at frequency `f`.
pub fn k_of_omega(frequency_hz: f64, field: FieldPoint, stack: &MaterialStack, bracket: &KBracket) -> Result<f64> {
    let roots = k_roots(frequency_hz, field, stack, bracket)?;
    match roots.as_slice() {
        [] => Err(Error::BelowBand {
            frequency_hz,
            field_t: field.0,
            k_min: bracket.k_min,
            k_max: bracket.k_max,
        }),
        [k] => Ok(*k),
        _ => Err(Error::AmbiguousBranch { frequency_hz, roots }),
    }
}
