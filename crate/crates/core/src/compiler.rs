//! Netlist → physical layout compilation.
//!
//! Each gate becomes one waveguide carrying one shifter per input (enabled
//! by that input's bit) followed by an always-on threshold shifter. Fields
//! are chosen so that an enabled shifter rotates the phase by
//! `weight · unit_phase_deg`; the threshold shifter carries weight −psi.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dispersion::{FieldPoint, KBracket};
use crate::error::{Error, Result};
use crate::material::MaterialStack;
use crate::netlist::{check_capacity, describe_vector, row_bits, truth_table, ThresholdGate, ThresholdNetlist};
use crate::phase_shifter::{calibrate_field, phase_shift, OperatingPoint, ShifterSpec, DEFAULT_FIELD_BOUND_T};

/// `source` of the always-on shifter that realizes −psi.
pub const THRESHOLD_SOURCE: &str = "THRESHOLD";

/// Phase magnitude at which a gate's sign readout becomes ambiguous.
pub const PHASE_BUDGET_DEG: f64 = 360.0;

/// How shifter fields are derived from weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CalibrationStrategy {
    /// Calibrate one unit field for +unit_phase_deg and apply
    /// `weight × unit field` to every shifter. Positive and negative weights
    /// of equal magnitude then realize slightly different phase magnitudes
    /// because the dispersion shift is asymmetric in field.
    #[default]
    WeightScaled,
    /// Calibrate every shifter separately to exactly `weight · unit_phase_deg`.
    PerShifter,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompileOptions {
    pub unit_phase_deg: f64,
    pub shifter_length_m: f64,
    pub calibration: CalibrationStrategy,
    pub field_bound_t: f64,
    /// Also check the phase budget with physical shifter phases.
    pub strict_budget: bool,
    /// Gap between neighbouring shifters; placement metadata only.
    pub shifter_spacing_m: f64,
}

impl Default for CompileOptions {
    fn default() -> Self {
        Self {
            unit_phase_deg: 10.0,
            shifter_length_m: 100e-9,
            calibration: CalibrationStrategy::default(),
            field_bound_t: DEFAULT_FIELD_BOUND_T,
            strict_budget: false,
            shifter_spacing_m: 200e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutShifter {
    /// Driving input name, or [`THRESHOLD_SOURCE`].
    pub source: String,
    pub weight: i32,
    pub length_m: f64,
    pub field_t: f64,
    pub always_on: bool,
    #[serde(default)]
    pub position_m: f64,
}

impl LayoutShifter {
    pub fn spec(&self) -> ShifterSpec {
        ShifterSpec::new(self.length_m, self.field_t).labeled(self.source.clone())
    }
}

/// One compiled gate: a waveguide with its shifters in signal order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateLayout {
    pub id: String,
    pub frequency_hz: f64,
    pub baseline_t: f64,
    pub unit_phase_deg: f64,
    pub shifters: Vec<LayoutShifter>,
    /// Readout transducer position, downstream of the last shifter.
    #[serde(default)]
    pub read_position_m: f64,
    /// Worst-case ideal |net phase| over all input vectors.
    #[serde(default)]
    pub max_net_phase_deg: f64,
}

impl GateLayout {
    pub fn input_shifters(&self) -> impl Iterator<Item = &LayoutShifter> {
        self.shifters.iter().filter(|s| !s.always_on)
    }

    pub fn input_count(&self) -> usize {
        self.input_shifters().count()
    }

    pub fn input_names(&self) -> Vec<String> {
        self.input_shifters().map(|s| s.source.clone()).collect()
    }

    pub fn operating_point(&self, stack: &MaterialStack, bracket: &KBracket) -> OperatingPoint {
        OperatingPoint::new(*stack, self.frequency_hz, FieldPoint(self.baseline_t)).with_bracket(*bracket)
    }

    /// Integer net activation for an input vector: enabled weights plus the
    /// always-on weights.
    pub fn activation(&self, enables: &[bool]) -> i64 {
        let mut bits = enables.iter();
        self.shifters
            .iter()
            .filter(|s| s.always_on || *bits.next().unwrap_or(&false))
            .map(|s| i64::from(s.weight))
            .sum()
    }

    fn validate_against(&self, gate: &ThresholdGate) -> Result<()> {
        let inputs = self.input_names();
        let threshold: Vec<_> = self.shifters.iter().filter(|s| s.always_on).collect();
        let weights: Vec<i32> = self.input_shifters().map(|s| s.weight).collect();
        let ok = inputs == gate.inputs
            && weights == gate.weights
            && threshold.len() == 1
            && threshold[0].source == THRESHOLD_SOURCE
            && threshold[0].weight == -gate.threshold;
        if ok {
            Ok(())
        } else {
            Err(Error::MalformedNetlist(format!(
                "layout for gate '{}' does not match its netlist gate",
                self.id
            )))
        }
    }
}

/// Compiled circuit: per-gate layouts in topological order plus everything
/// needed to re-run the physical model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircuitLayout {
    pub calibration: CalibrationStrategy,
    pub material: MaterialStack,
    pub k_bracket: KBracket,
    pub netlist: ThresholdNetlist,
    pub gates: Vec<GateLayout>,
}

#[derive(Deserialize)]
struct RawCircuit {
    #[serde(default)]
    calibration: CalibrationStrategy,
    material: MaterialStack,
    #[serde(default)]
    k_bracket: KBracket,
    netlist: ThresholdNetlist,
    gates: Vec<GateLayout>,
}

impl<'de> Deserialize<'de> for CircuitLayout {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = RawCircuit::deserialize(deserializer)?;
        let circuit = CircuitLayout {
            calibration: raw.calibration,
            material: raw.material,
            k_bracket: raw.k_bracket,
            netlist: raw.netlist,
            gates: raw.gates,
        };
        circuit.validate().map_err(serde::de::Error::custom)?;
        Ok(circuit)
    }
}

impl CircuitLayout {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn gate(&self, id: &str) -> Option<&GateLayout> {
        self.gates.iter().find(|g| g.id == id)
    }

    /// Layout order must follow the netlist's topological order and every
    /// layout must mirror its gate.
    pub fn validate(&self) -> Result<()> {
        self.material.validate()?;
        self.k_bracket.validate()?;
        let expected: Vec<&ThresholdGate> = self.netlist.topological().collect();
        if expected.len() != self.gates.len() {
            return Err(Error::MalformedNetlist(format!(
                "layout has {} gates, netlist has {}",
                self.gates.len(),
                expected.len()
            )));
        }
        for (layout, gate) in self.gates.iter().zip(expected) {
            if layout.id != gate.id {
                return Err(Error::MalformedNetlist(format!(
                    "layout order disagrees with netlist: found '{}', expected '{}'",
                    layout.id, gate.id
                )));
            }
            layout.validate_against(gate)?;
        }
        Ok(())
    }
}

fn shifter_error(gate: &str, shifter: &str, source: Error) -> Error {
    Error::Shifter {
        gate: gate.to_owned(),
        shifter: shifter.to_owned(),
        source: Box::new(source),
    }
}

fn compile_gate(
    gate: &ThresholdGate,
    netlist: &ThresholdNetlist,
    op: &OperatingPoint,
    opts: &CompileOptions,
) -> Result<GateLayout> {
    let ann = gate.annotations.unwrap_or_default();
    let unit = ann.unit_phase_deg.unwrap_or(opts.unit_phase_deg);
    let length = ann.shifter_length_m.unwrap_or(opts.shifter_length_m);
    if !(unit.is_finite() && unit > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "gate '{}': unit phase must be positive, got {unit}",
            gate.id
        )));
    }
    if !(length.is_finite() && length > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "gate '{}': shifter length must be positive, got {length}",
            gate.id
        )));
    }

    let sources = gate
        .inputs
        .iter()
        .zip(&gate.weights)
        .map(|(name, &w)| (name.as_str(), w, false))
        .chain(std::iter::once((THRESHOLD_SOURCE, -gate.threshold, true)));

    let pitch = length + opts.shifter_spacing_m;
    let shifters: Vec<LayoutShifter> = sources
        .enumerate()
        .map(|(i, (source, weight, always_on))| LayoutShifter {
            source: source.to_owned(),
            weight,
            length_m: length,
            field_t: 0.0,
            always_on,
            position_m: opts.shifter_spacing_m + i as f64 * pitch,
        })
        .collect();
    let read_position_m = opts.shifter_spacing_m + shifters.len() as f64 * pitch;
    let mut layout = GateLayout {
        id: gate.id.clone(),
        frequency_hz: op.frequency_hz,
        baseline_t: op.baseline.tesla(),
        unit_phase_deg: unit,
        shifters,
        read_position_m,
        max_net_phase_deg: 0.0,
    };
    // the ideal budget needs no fields, so infeasible gates fail before calibrating
    layout.max_net_phase_deg = validate_phase_budget(&layout, netlist)?;

    let unit_field = match opts.calibration {
        CalibrationStrategy::WeightScaled => Some(
            calibrate_field(unit, length, op, opts.field_bound_t)
                .map_err(|e| shifter_error(&gate.id, "unit calibration", e))?,
        ),
        CalibrationStrategy::PerShifter => None,
    };
    let mut per_weight: HashMap<i32, f64> = HashMap::new();
    for shifter in &mut layout.shifters {
        let weight = shifter.weight;
        shifter.field_t = match unit_field {
            Some(unit_field) => f64::from(weight) * unit_field,
            None => match per_weight.get(&weight) {
                Some(&field) => field,
                None => {
                    let field = calibrate_field(f64::from(weight) * unit, length, op, opts.field_bound_t)
                        .map_err(|e| shifter_error(&gate.id, &shifter.source, e))?;
                    per_weight.insert(weight, field);
                    field
                }
            },
        };
    }
    if opts.strict_budget {
        validate_phase_budget_physical(&layout, netlist, op)?;
    }
    Ok(layout)
}

/// Compiles every gate of `netlist` at the operating point `op`.
pub fn compile(netlist: &ThresholdNetlist, op: &OperatingPoint, opts: &CompileOptions) -> Result<CircuitLayout> {
    op.stack.validate()?;
    op.bracket.validate()?;
    if !(opts.field_bound_t.is_finite() && opts.field_bound_t > 0.0) {
        return Err(Error::InvalidArgument("field bound must be positive".into()));
    }
    let gates: Vec<&ThresholdGate> = netlist.topological().collect();
    let layouts = gates
        .par_iter()
        .map(|gate| compile_gate(gate, netlist, op, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(CircuitLayout {
        calibration: opts.calibration,
        material: op.stack,
        k_bracket: op.bracket,
        netlist: netlist.clone(),
        gates: layouts,
    })
}

fn check_budget(layout: &GateLayout, netlist: &ThresholdNetlist, phase: impl Fn(&[bool]) -> f64) -> Result<f64> {
    let names = netlist.primary_inputs();
    check_capacity("netlist", names.len())?;
    let inputs = layout.input_names();
    let mut worst: f64 = 0.0;
    for row in 0..1usize << names.len() {
        let bits = row_bits(row, names.len());
        let signals = netlist.evaluate(&bits)?;
        let enables = inputs
            .iter()
            .map(|name| {
                signals
                    .get(name)
                    .copied()
                    .ok_or_else(|| Error::UnresolvedSignal(name.clone()))
            })
            .collect::<Result<Vec<bool>>>()?;
        let net = phase(&enables).abs();
        if net >= PHASE_BUDGET_DEG {
            return Err(Error::PhaseBudget {
                gate: layout.id.clone(),
                vector: describe_vector(names, &bits),
                phase_deg: net,
            });
        }
        worst = worst.max(net);
    }
    Ok(worst)
}

/// Worst-case ideal |net phase| of one gate over every primary input vector
/// of `netlist`, rejecting gates that reach 360°. Only gate input vectors
/// the circuit can actually produce are considered.
pub fn validate_phase_budget(layout: &GateLayout, netlist: &ThresholdNetlist) -> Result<f64> {
    check_budget(layout, netlist, |bits| {
        layout.activation(bits) as f64 * layout.unit_phase_deg
    })
}

/// As [`validate_phase_budget`] but with each shifter's modelled phase.
pub fn validate_phase_budget_physical(
    layout: &GateLayout,
    netlist: &ThresholdNetlist,
    op: &OperatingPoint,
) -> Result<f64> {
    let phases = layout
        .shifters
        .iter()
        .map(|s| phase_shift(&s.spec(), op).map_err(|e| shifter_error(&layout.id, &s.source, e)))
        .collect::<Result<Vec<f64>>>()?;
    check_budget(layout, netlist, |bits| {
        let mut enables = bits.iter();
        layout
            .shifters
            .iter()
            .zip(&phases)
            .filter(|(s, _)| s.always_on || *enables.next().unwrap_or(&false))
            .map(|(_, p)| p)
            .sum()
    })
}

/// Interference-based majority-gate full adder reference costs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Maj3Reference {
    pub gate_count: usize,
    pub transducer_count: usize,
    pub gate_depth: usize,
}

impl Maj3Reference {
    /// Three MAJ3 gates, three input and one output transducer each, two
    /// gates deep.
    pub const FULL_ADDER: Maj3Reference = Maj3Reference {
        gate_count: 3,
        transducer_count: 12,
        gate_depth: 2,
    };
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostReport {
    pub gate_count: usize,
    /// One generating and one reading transducer per gate.
    pub transducer_count: usize,
    /// One shifter per input plus the threshold shifter, per gate.
    pub shifter_count: usize,
    pub gate_depth: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub maj3_reference: Option<Maj3Reference>,
}

/// True when the netlist computes a full adder: three inputs, two outputs
/// with 2·out0 + out1 equal to the number of set inputs.
pub fn is_full_adder(netlist: &ThresholdNetlist) -> bool {
    if netlist.primary_inputs().len() != 3 || netlist.outputs().len() != 2 {
        return false;
    }
    truth_table(netlist).is_ok_and(|table| {
        table.rows.iter().all(|row| {
            let ones = row.inputs.iter().filter(|&&b| b).count();
            2 * usize::from(row.outputs[0]) + usize::from(row.outputs[1]) == ones
        })
    })
}

pub fn cost_report(netlist: &ThresholdNetlist) -> CostReport {
    let gates = netlist.gates();
    CostReport {
        gate_count: gates.len(),
        transducer_count: 2 * gates.len(),
        shifter_count: gates.iter().map(|g| g.arity() + 1).sum(),
        gate_depth: netlist.depth(),
        maj3_reference: is_full_adder(netlist).then_some(Maj3Reference::FULL_ADDER),
    }
}
