use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the toolchain can report.
///
/// [`Error::category`] gives a stable, machine-readable tag that the CLI
/// prints alongside the human message.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dipolar term is singular: omega_H + omega_M * lambda_ex * k_tot = {denominator:e}")]
    Singularity { denominator: f64 },

    #[error("no real frequency (evanescent regime): radicand = {radicand:e} rad^2/s^2")]
    Evanescent { radicand: f64 },

    #[error("{frequency_hz:e} Hz lies below the band at B_eff = {field_t} T within k in [{k_min:e}, {k_max:e}] rad/m")]
    BelowBand {
        frequency_hz: f64,
        field_t: f64,
        k_min: f64,
        k_max: f64,
    },

    #[error("ambiguous branch at {frequency_hz:e} Hz: roots {roots:?} rad/m; narrow the k bracket")]
    AmbiguousBranch { frequency_hz: f64, roots: Vec<f64> },

    #[error("spin wave is evanescent under shifter (local field {local_field_t} T): {source}")]
    EvanescentUnderShifter {
        local_field_t: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("target {target_deg} deg is unreachable within |delta_B| <= {bound_t} T ({reason})")]
    CalibrationRange {
        target_deg: f64,
        bound_t: f64,
        reason: String,
    },

    #[error("phase shift is not monotone in the field between {lo_t} T and {hi_t} T; calibration is ambiguous")]
    CalibrationAmbiguous { lo_t: f64, hi_t: f64 },

    #[error("sweep point at {x_value} failed: {source}")]
    SweepPoint {
        x_value: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("unresolved signal '{0}'")]
    UnresolvedSignal(String),

    #[error("malformed netlist: {0}")]
    MalformedNetlist(String),

    #[error("netlist contains a cycle through gates {0:?}")]
    CyclicNetlist(Vec<String>),

    #[error("{what} has {count} inputs; exhaustive enumeration is limited to {max}")]
    Capacity { what: String, count: usize, max: usize },

    #[error("gate '{gate}' exceeds the 360 deg phase budget: |net phase| = {phase_deg} deg at input vector {vector}")]
    PhaseBudget {
        gate: String,
        vector: String,
        phase_deg: f64,
    },

    #[error("gate '{gate}', shifter '{shifter}': {source}")]
    Shifter {
        gate: String,
        shifter: String,
        #[source]
        source: Box<Error>,
    },

    #[error("unknown material preset '{0}'")]
    UnknownPreset(String),

    #[error("configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable category tag, suitable for scripting against CLI failures.
    pub fn category(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid-argument",
            Error::Singularity { .. }
            | Error::Evanescent { .. }
            | Error::BelowBand { .. }
            | Error::AmbiguousBranch { .. }
            | Error::EvanescentUnderShifter { .. } => "dispersion",
            Error::CalibrationRange { .. } | Error::CalibrationAmbiguous { .. } => "calibration",
            Error::SweepPoint { source, .. } | Error::Shifter { source, .. } => source.category(),
            Error::UnresolvedSignal(_) | Error::MalformedNetlist(_) | Error::CyclicNetlist(_) => "netlist",
            Error::Capacity { .. } => "capacity",
            Error::PhaseBudget { .. } => "budget",
            Error::UnknownPreset(_) | Error::Config(_) => "config",
            Error::Io(_) => "io",
            Error::Json(_) => "format",
        }
    }
}

pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be finite, got {value}")))
    }
}
