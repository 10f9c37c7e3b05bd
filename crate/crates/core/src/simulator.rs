//! Evaluation of compiled layouts: phase accumulation, sign readout, and
//! cascading through the circuit.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::compiler::{CircuitLayout, GateLayout};
use crate::dispersion::KBracket;
use crate::error::{Error, Result};
use crate::material::MaterialStack;
use crate::netlist::{check_capacity, row_bits};
use crate::phase_shifter::phase_shift;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// (sum w_i·x_i − psi) · unit_phase_deg, exact.
    Ideal,
    /// Sum of modelled shifter phases.
    Physical,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Ideal => "ideal",
            Mode::Physical => "physical",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseResult {
    pub gate: String,
    pub inputs: Vec<bool>,
    pub net_phase_deg: f64,
    pub output: bool,
    pub mode: Mode,
    /// Distance from the decision boundary, |net_phase_deg|.
    pub margin_deg: f64,
    /// Set when |net| > 180°, where a wrapped readout would be ambiguous.
    pub exceeds_half_turn: bool,
}

impl PhaseResult {
    fn decode(gate: &str, inputs: Vec<bool>, net_phase_deg: f64, mode: Mode) -> Self {
        Self {
            gate: gate.to_owned(),
            inputs,
            net_phase_deg,
            output: net_phase_deg >= 0.0,
            mode,
            margin_deg: net_phase_deg.abs(),
            exceeds_half_turn: net_phase_deg.abs() > 180.0,
        }
    }
}

/// Phase each shifter of `layout` contributes when active, in shifter order.
pub fn shifter_phases(layout: &GateLayout, mode: Mode, stack: &MaterialStack, bracket: &KBracket) -> Result<Vec<f64>> {
    match mode {
        Mode::Ideal => Ok(layout
            .shifters
            .iter()
            .map(|s| f64::from(s.weight) * layout.unit_phase_deg)
            .collect()),
        Mode::Physical => {
            let op = layout.operating_point(stack, bracket);
            layout
                .shifters
                .iter()
                .map(|s| {
                    phase_shift(&s.spec(), &op).map_err(|source| Error::Shifter {
                        gate: layout.id.clone(),
                        shifter: s.source.clone(),
                        source: Box::new(source),
                    })
                })
                .collect()
        }
    }
}

fn check_enables(layout: &GateLayout, enables: &[bool]) -> Result<()> {
    let n = layout.input_count();
    if enables.len() != n {
        return Err(Error::InvalidArgument(format!(
            "gate '{}' has {n} input shifters, got {} enable bits",
            layout.id,
            enables.len()
        )));
    }
    Ok(())
}

fn accumulate(layout: &GateLayout, phases: &[f64], enables: &[bool], mode: Mode) -> PhaseResult {
    let net = match mode {
        // integer arithmetic keeps ideal phases exact multiples of the unit
        Mode::Ideal => layout.activation(enables) as f64 * layout.unit_phase_deg,
        Mode::Physical => {
            let mut bits = enables.iter();
            layout
                .shifters
                .iter()
                .zip(phases)
                .filter(|(s, _)| s.always_on || *bits.next().unwrap_or(&false))
                .map(|(_, p)| p)
                .sum()
        }
    };
    PhaseResult::decode(&layout.id, enables.to_vec(), net, mode)
}

/// Net phase and decoded bit of one gate for an input-enable vector.
pub fn simulate_gate(
    layout: &GateLayout,
    enables: &[bool],
    mode: Mode,
    stack: &MaterialStack,
    bracket: &KBracket,
) -> Result<PhaseResult> {
    check_enables(layout, enables)?;
    let phases = shifter_phases(layout, mode, stack, bracket)?;
    Ok(accumulate(layout, &phases, enables, mode))
}

/// Per-gate shifter phases, computed once and reused across input vectors.
struct PreparedCircuit<'a> {
    circuit: &'a CircuitLayout,
    phases: Vec<Vec<f64>>,
    inputs: Vec<Vec<String>>,
    mode: Mode,
}

impl<'a> PreparedCircuit<'a> {
    fn new(circuit: &'a CircuitLayout, mode: Mode) -> Result<Self> {
        let phases = circuit
            .gates
            .par_iter()
            .map(|g| shifter_phases(g, mode, &circuit.material, &circuit.k_bracket))
            .collect::<Result<Vec<_>>>()?;
        let inputs = circuit.gates.iter().map(GateLayout::input_names).collect();
        Ok(Self {
            circuit,
            phases,
            inputs,
            mode,
        })
    }

    /// Results in layout (topological) order. Only decoded bits cross
    /// between gates.
    fn run(&self, primary: &[bool]) -> Result<Vec<PhaseResult>> {
        let names = self.circuit.netlist.primary_inputs();
        if primary.len() != names.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} primary input bits, got {}",
                names.len(),
                primary.len()
            )));
        }
        let mut signals: HashMap<&str, bool> = names.iter().map(String::as_str).zip(primary.iter().copied()).collect();
        let mut results = Vec::with_capacity(self.circuit.gates.len());
        for ((layout, phases), inputs) in self.circuit.gates.iter().zip(&self.phases).zip(&self.inputs) {
            let enables = inputs
                .iter()
                .map(|name| {
                    signals
                        .get(name.as_str())
                        .copied()
                        .ok_or_else(|| Error::UnresolvedSignal(name.clone()))
                })
                .collect::<Result<Vec<bool>>>()?;
            let result = accumulate(layout, phases, &enables, self.mode);
            signals.insert(&layout.id, result.output);
            results.push(result);
        }
        Ok(results)
    }
}

/// Simulates the whole circuit for one primary assignment (in the netlist's
/// primary-input order).
pub fn simulate_circuit(
    circuit: &CircuitLayout,
    primary: &[bool],
    mode: Mode,
) -> Result<BTreeMap<String, PhaseResult>> {
    let results = PreparedCircuit::new(circuit, mode)?.run(primary)?;
    Ok(results.into_iter().map(|r| (r.gate.clone(), r)).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub inputs: Vec<bool>,
    /// One result per gate, in layout order.
    pub results: Vec<PhaseResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExhaustiveReport {
    pub mode: Mode,
    pub primary_inputs: Vec<String>,
    pub gates: Vec<String>,
    /// Input signal names of each gate, in shifter order.
    pub gate_inputs: Vec<Vec<String>>,
    pub rows: Vec<ReportRow>,
    /// Smallest |net phase| over every gate and vector.
    pub min_margin_deg: f64,
    /// Any result with |net| > 180°.
    pub any_exceeds_half_turn: bool,
}

impl ExhaustiveReport {
    pub fn results_for<'a>(&'a self, gate: &'a str) -> impl Iterator<Item = &'a PhaseResult> + 'a {
        self.rows
            .iter()
            .filter_map(move |row| row.results.iter().find(|r| r.gate == gate))
    }
}

/// Every primary input vector in canonical binary order.
pub fn exhaustive_report(circuit: &CircuitLayout, mode: Mode) -> Result<ExhaustiveReport> {
    let primary_inputs = circuit.netlist.primary_inputs().to_vec();
    let n = primary_inputs.len();
    check_capacity("circuit", n)?;
    let prepared = PreparedCircuit::new(circuit, mode)?;
    let rows = (0..1usize << n)
        .into_par_iter()
        .map(|row| {
            let inputs = row_bits(row, n);
            let results = prepared.run(&inputs)?;
            Ok(ReportRow { inputs, results })
        })
        .collect::<Result<Vec<_>>>()?;
    let all = rows.iter().flat_map(|r| &r.results);
    let min_margin_deg = all.clone().map(|r| r.margin_deg).fold(f64::INFINITY, f64::min);
    let any_exceeds_half_turn = all.clone().any(|r| r.exceeds_half_turn);
    Ok(ExhaustiveReport {
        mode,
        primary_inputs,
        gates: circuit.gates.iter().map(|g| g.id.clone()).collect(),
        gate_inputs: prepared.inputs.clone(),
        rows,
        min_margin_deg: if min_margin_deg.is_finite() {
            min_margin_deg
        } else {
            0.0
        },
        any_exceeds_half_turn,
    })
}
