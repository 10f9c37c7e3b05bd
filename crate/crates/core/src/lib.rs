//! Design and verification toolchain for spin-wave threshold-logic gates.
//!
//! A threshold gate is realized on a single spin wave: each input drives a
//! field strip that rotates the wave's phase by `weight · unit` degrees when
//! enabled, an always-on strip subtracts `threshold · unit`, and the sign of
//! the accumulated phase is the gate output.
//!
//! The pipeline is
//! [`dispersion`] → [`phase_shifter`] → [`compiler`] → [`simulator`], with
//! [`netlist`] as the integer ground truth.

pub mod compiler;
pub mod dispersion;
pub mod error;
pub mod export;
pub mod material;
pub mod netlist;
pub mod phase_shifter;
pub mod simulator;

pub use compiler::{compile, cost_report, CalibrationStrategy, CircuitLayout, CompileOptions, GateLayout};
pub use dispersion::{k_of_omega, omega_of_k, FieldPoint, KBracket};
pub use error::{Error, Result};
pub use material::MaterialStack;
pub use netlist::{builtin_full_adder, ThresholdGate, ThresholdNetlist};
pub use phase_shifter::{calibrate_field, phase_shift, OperatingPoint, ShifterSpec, SweepTable};
pub use simulator::{exhaustive_report, simulate_circuit, simulate_gate, Mode, PhaseResult};
