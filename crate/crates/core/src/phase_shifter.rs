//! Phase rotation imparted by a field strip ("phase shifter") on a
//! propagating spin wave, field calibration, and linearity sweeps.
//!
//! A shifter of length L applying a local field change delta_B moves the
//! wave from k0 (baseline field) to k' (baseline + delta_B) underneath it.
//! The accumulated phase relative to the unperturbed wave is
//! (k0 − k')·L, reported in degrees. Fields along the magnetization shrink
//! k and advance the phase.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dispersion::{k_of_omega, FieldPoint, KBracket};
use crate::error::{ensure_finite, Error, Result};
use crate::material::MaterialStack;

/// Default search bound on |delta_B| for calibration, in tesla.
pub const DEFAULT_FIELD_BOUND_T: f64 = 0.5;

/// Calibration succeeds once the realized phase is within this many degrees.
pub const CALIBRATION_TOL_DEG: f64 = 1e-6;

/// Phase resolution of the model, set by the wavenumber bisection tolerance.
const PHASE_NOISE_DEG: f64 = 1e-7;

/// Frequency, baseline field and medium a spin wave propagates in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    pub stack: MaterialStack,
    pub frequency_hz: f64,
    pub baseline: FieldPoint,
    #[serde(default)]
    pub bracket: KBracket,
}

impl OperatingPoint {
    pub fn new(stack: MaterialStack, frequency_hz: f64, baseline: FieldPoint) -> Self {
        Self {
            stack,
            frequency_hz,
            baseline,
            bracket: KBracket::default(),
        }
    }

    pub fn with_bracket(mut self, bracket: KBracket) -> Self {
        self.bracket = bracket;
        self
    }

    pub fn with_frequency(mut self, frequency_hz: f64) -> Self {
        self.frequency_hz = frequency_hz;
        self
    }

    /// Wavenumber of the unperturbed wave.
    pub fn baseline_k(&self) -> Result<f64> {
        k_of_omega(self.frequency_hz, self.baseline, &self.stack, &self.bracket)
    }

    /// Wavenumber under a strip adding `delta_b` tesla to the baseline.
    pub fn shifted_k(&self, delta_b: f64) -> Result<f64> {
        let local = self.baseline.offset(delta_b);
        k_of_omega(self.frequency_hz, local, &self.stack, &self.bracket).map_err(|source| {
            Error::EvanescentUnderShifter {
                local_field_t: local.tesla(),
                source: Box::new(source),
            }
        })
    }

    /// k0 − k' for a strip field `delta_b`.
    pub fn wavenumber_shift(&self, delta_b: f64) -> Result<f64> {
        self.shift_from(self.baseline_k()?, delta_b)
    }

    fn shift_from(&self, k0: f64, delta_b: f64) -> Result<f64> {
        ensure_finite("delta_B", delta_b)?;
        if delta_b == 0.0 {
            return Ok(0.0);
        }
        Ok(k0 - self.shifted_k(delta_b)?)
    }
}

/// A uniform-field strip on the waveguide.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShifterSpec {
    pub length_m: f64,
    /// Signed field change; positive points along the magnetization.
    pub field_t: f64,
    #[serde(default)]
    pub label: String,
}

impl ShifterSpec {
    pub fn new(length_m: f64, field_t: f64) -> Self {
        Self {
            length_m,
            field_t,
            label: String::new(),
        }
    }

    pub fn labeled(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    fn validate(&self) -> Result<()> {
        ensure_finite("shifter length", self.length_m)?;
        ensure_finite("shifter field", self.field_t)?;
        if self.length_m < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "shifter length must be >= 0, got {}",
                self.length_m
            )));
        }
        Ok(())
    }
}

fn degrees(dk: f64, length_m: f64) -> f64 {
    (dk * length_m).to_degrees()
}

/// Phase (degrees) the shifter adds relative to the unperturbed wave.
pub fn phase_shift(shifter: &ShifterSpec, op: &OperatingPoint) -> Result<f64> {
    shifter.validate()?;
    if shifter.field_t == 0.0 || shifter.length_m == 0.0 {
        return Ok(0.0);
    }
    Ok(degrees(op.wavenumber_shift(shifter.field_t)?, shifter.length_m))
}

/// Field (tesla) a strip of `length_m` needs to rotate the phase by
/// `target_deg`, searched within |delta_B| <= `bound_t`.
///
/// The field is bracketed by walking a geometric ladder outward from zero
/// in the direction of the target's sign, checking that |phase| grows at
/// each rung, then refined by bisection.
pub fn calibrate_field(target_deg: f64, length_m: f64, op: &OperatingPoint, bound_t: f64) -> Result<f64> {
    ensure_finite("target phase", target_deg)?;
    ensure_finite("shifter length", length_m)?;
    if !(bound_t.is_finite() && bound_t > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "field search bound must be positive, got {bound_t}"
        )));
    }
    if target_deg == 0.0 {
        return Ok(0.0);
    }
    if length_m <= 0.0 {
        return Err(Error::CalibrationRange {
            target_deg,
            bound_t,
            reason: format!("shifter length {length_m} m accumulates no phase"),
        });
    }

    let k0 = op.baseline_k()?;
    let phase_at = |b: f64| op.shift_from(k0, b).map(|dk| degrees(dk, length_m));
    let direction = target_deg.signum();
    let goal = target_deg.abs();

    const RUNGS: i32 = 24;
    let (mut lo, mut lo_mag) = (0.0, 0.0);
    let mut hi = None;
    for rung in (0..=RUNGS).rev() {
        let b = direction * bound_t * 0.5f64.powi(rung);
        let phase = match phase_at(b) {
            Ok(p) => p,
            Err(e @ Error::EvanescentUnderShifter { .. }) => {
                return Err(Error::CalibrationRange {
                    target_deg,
                    bound_t,
                    reason: format!("propagation lost at {b} T before reaching target: {e}"),
                })
            }
            Err(e) => return Err(e),
        };
        let magnitude = phase * direction;
        if magnitude < lo_mag - PHASE_NOISE_DEG {
            return Err(Error::CalibrationAmbiguous { lo_t: lo, hi_t: b });
        }
        if magnitude >= goal {
            hi = Some(b);
            break;
        }
        lo = b;
        lo_mag = magnitude;
    }
    let Some(mut hi) = hi else {
        return Err(Error::CalibrationRange {
            target_deg,
            bound_t,
            reason: format!("largest reachable phase is {:.6} deg", lo_mag * direction),
        });
    };

    // invariant: |phase(lo)| < goal <= |phase(hi)|
    let mut best = (hi, phase_at(hi)?);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let phase = phase_at(mid)?;
        if (phase - target_deg).abs() < (best.1 - target_deg).abs() {
            best = (mid, phase);
        }
        if (phase - target_deg).abs() < CALIBRATION_TOL_DEG * 1e-3 {
            break;
        }
        if phase * direction < goal {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (best.1 - target_deg).abs() < CALIBRATION_TOL_DEG {
        Ok(best.0)
    } else {
        Err(Error::CalibrationAmbiguous { lo_t: lo, hi_t: hi })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSample {
    pub x_value: f64,
    pub phase_shift_deg: f64,
}

/// Phase-shift samples over one independent variable with a first-degree
/// least-squares fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub samples: Vec<SweepSample>,
    pub fit_slope: f64,
    pub fit_intercept: f64,
    pub r_squared: f64,
}

impl SweepTable {
    /// Sorts the samples by x and fits them.
    pub fn from_samples(mut samples: Vec<SweepSample>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidArgument("a sweep needs at least two samples".into()));
        }
        samples.sort_by(|a, b| a.x_value.total_cmp(&b.x_value));
        let xs: Vec<f64> = samples.iter().map(|s| s.x_value).collect();
        let ys: Vec<f64> = samples.iter().map(|s| s.phase_shift_deg).collect();
        let fit = LinearFit::ordinary_least_squares(&xs, &ys)?;
        Ok(Self {
            samples,
            fit_slope: fit.slope,
            fit_intercept: fit.intercept,
            r_squared: fit.r_squared,
        })
    }

    /// R² rounded to four decimals, the precision used in reports.
    pub fn r_squared_rounded(&self) -> f64 {
        (self.r_squared * 1e4).round() / 1e4
    }

    pub fn phase_at(&self, x_value: f64) -> Option<f64> {
        self.samples
            .iter()
            .find(|s| s.x_value == x_value)
            .map(|s| s.phase_shift_deg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

impl LinearFit {
    /// y = slope·x + intercept by ordinary least squares. R² is
    /// 1 − SS_res/SS_tot, taken as 1 when y is constant and fitted exactly.
    pub fn ordinary_least_squares(xs: &[f64], ys: &[f64]) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(Error::InvalidArgument(
                "least squares needs two or more paired samples".into(),
            ));
        }
        let n = xs.len() as f64;
        let mean_x = xs.iter().sum::<f64>() / n;
        let mean_y = ys.iter().sum::<f64>() / n;
        let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
        for (&x, &y) in xs.iter().zip(ys) {
            let (dx, dy) = (x - mean_x, y - mean_y);
            sxx += dx * dx;
            sxy += dx * dy;
            syy += dy * dy;
        }
        if sxx == 0.0 {
            return Err(Error::InvalidArgument("least squares needs distinct x values".into()));
        }
        let slope = sxy / sxx;
        let intercept = mean_y - slope * mean_x;
        let ss_res: f64 = xs
            .iter()
            .zip(ys)
            .map(|(&x, &y)| (y - (slope * x + intercept)).powi(2))
            .sum();
        let r_squared = if syy == 0.0 {
            if ss_res == 0.0 {
                1.0
            } else {
                0.0
            }
        } else {
            (1.0 - ss_res / syy).clamp(0.0, 1.0)
        };
        Ok(Self {
            slope,
            intercept,
            r_squared,
        })
    }
}

/// Uniform grid of `steps` points from `min` to `max` inclusive.
pub fn uniform_grid(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    ensure_finite("range start", min)?;
    ensure_finite("range end", max)?;
    if steps < 3 {
        return Err(Error::InvalidArgument(format!("sweep needs >= 3 steps, got {steps}")));
    }
    if min >= max {
        return Err(Error::InvalidArgument(format!("empty sweep range [{min}, {max}]")));
    }
    let span = max - min;
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| match i {
            i if i == steps - 1 => max,
            i => min + span * (i as f64 / last),
        })
        .collect())
}

/// Phase shift of a strip of `length_m` across a uniform field grid.
pub fn sweep_field(length_m: f64, op: &OperatingPoint, field_range: (f64, f64), steps: usize) -> Result<SweepTable> {
    let fields = uniform_grid(field_range.0, field_range.1, steps)?;
    let k0 = op.baseline_k()?;
    let samples = fields
        .par_iter()
        .map(|&b| {
            let dk = op.shift_from(k0, b).map_err(|source| Error::SweepPoint {
                x_value: b,
                source: Box::new(source),
            })?;
            Ok(SweepSample {
                x_value: b,
                phase_shift_deg: degrees(dk, length_m),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    SweepTable::from_samples(samples)
}

/// [`sweep_field`] repeated for each frequency, in the order given.
pub fn sweep_frequency(
    length_m: f64,
    frequencies_hz: &[f64],
    op: &OperatingPoint,
    field_range: (f64, f64),
    steps: usize,
) -> Result<Vec<(f64, SweepTable)>> {
    if frequencies_hz.is_empty() {
        return Err(Error::InvalidArgument("no frequencies to sweep".into()));
    }
    frequencies_hz
        .par_iter()
        .map(|&f| {
            let table = sweep_field(length_m, &op.with_frequency(f), field_range, steps)?;
            Ok((f, table))
        })
        .collect()
}

/// Phase shift versus strip length at a fixed field. The model is exactly
/// proportional to length, so the wavenumber shift is solved once.
pub fn sweep_length(lengths_m: &[f64], delta_b: f64, op: &OperatingPoint) -> Result<SweepTable> {
    if let Some(&bad) = lengths_m.iter().find(|&&l| !(l.is_finite() && l > 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "shifter lengths must be > 0, got {bad}"
        )));
    }
    let dk = op.wavenumber_shift(delta_b)?;
    let samples = lengths_m
        .iter()
        .map(|&l| SweepSample {
            x_value: l,
            phase_shift_deg: degrees(dk, l),
        })
        .collect();
    SweepTable::from_samples(samples)
}
