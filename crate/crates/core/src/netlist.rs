//! Integer threshold-logic gates and acyclic gate networks.
//!
//! A gate with inputs x_i, weights w_i and threshold psi outputs 1 iff
//! sum(w_i·x_i) − psi >= 0. Netlists are exchanged as JSON:
//!
//! ```json
//! {
//!   "primary_inputs": ["a", "b", "cin"],
//!   "gates": [{"id": "cout", "inputs": ["a", "b", "cin"], "weights": [1, 1, 1], "threshold": 2}],
//!   "outputs": ["cout"]
//! }
//! ```
//!
//! Gates may carry optional `unit_phase_deg` / `shifter_length_m`
//! annotations that override compile-wide settings for that gate.

use std::collections::{BTreeSet, HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest input count enumerated exhaustively.
pub const MAX_EXHAUSTIVE_INPUTS: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdGate {
    pub id: String,
    /// Primary input names or upstream gate ids, in weight order.
    pub inputs: Vec<String>,
    pub weights: Vec<i32>,
    pub threshold: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annotations: Option<GateAnnotations>,
}

/// Per-gate overrides of compilation settings.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateAnnotations {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit_phase_deg: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shifter_length_m: Option<f64>,
}

impl ThresholdGate {
    pub fn new(id: impl Into<String>, inputs: &[&str], weights: &[i32], threshold: i32) -> Self {
        Self {
            id: id.into(),
            inputs: inputs.iter().map(|s| (*s).to_owned()).collect(),
            weights: weights.to_vec(),
            threshold,
            annotations: None,
        }
    }

    pub fn arity(&self) -> usize {
        self.inputs.len()
    }

    fn validate(&self) -> Result<()> {
        if self.id.is_empty() {
            return Err(Error::MalformedNetlist("gate with empty id".into()));
        }
        if self.inputs.is_empty() {
            return Err(Error::MalformedNetlist(format!("gate '{}' has no inputs", self.id)));
        }
        if self.inputs.len() != self.weights.len() {
            return Err(Error::MalformedNetlist(format!(
                "gate '{}' has {} inputs but {} weights",
                self.id,
                self.inputs.len(),
                self.weights.len()
            )));
        }
        Ok(())
    }

    /// f(x) = sum(w_i·x_i) − psi for an input vector in input order.
    pub fn activation(&self, bits: &[bool]) -> i64 {
        debug_assert_eq!(bits.len(), self.weights.len());
        self.weights
            .iter()
            .zip(bits)
            .filter(|(_, &x)| x)
            .map(|(&w, _)| i64::from(w))
            .sum::<i64>()
            - i64::from(self.threshold)
    }

    pub fn fires(&self, bits: &[bool]) -> bool {
        self.activation(bits) >= 0
    }

    /// Gathers this gate's input vector from named signal values.
    pub fn input_bits(&self, signals: &HashMap<String, bool>) -> Result<Vec<bool>> {
        self.inputs
            .iter()
            .map(|name| {
                signals
                    .get(name)
                    .copied()
                    .ok_or_else(|| Error::UnresolvedSignal(name.clone()))
            })
            .collect()
    }
}

/// Output bit of a single gate under a named assignment.
pub fn eval_gate(gate: &ThresholdGate, assignment: &HashMap<String, bool>) -> Result<bool> {
    Ok(gate.fires(&gate.input_bits(assignment)?))
}

/// A validated, acyclic threshold-gate network.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdNetlist {
    primary_inputs: Vec<String>,
    gates: Vec<ThresholdGate>,
    outputs: Vec<String>,
    #[serde(skip)]
    order: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNetlist {
    primary_inputs: Vec<String>,
    gates: Vec<ThresholdGate>,
    outputs: Vec<String>,
}

impl<'de> Deserialize<'de> for ThresholdNetlist {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = RawNetlist::deserialize(deserializer)?;
        ThresholdNetlist::new(raw.primary_inputs, raw.gates, raw.outputs).map_err(serde::de::Error::custom)
    }
}

impl ThresholdNetlist {
    pub fn new(primary_inputs: Vec<String>, gates: Vec<ThresholdGate>, outputs: Vec<String>) -> Result<Self> {
        let mut names = HashSet::new();
        for name in &primary_inputs {
            if name.is_empty() || !names.insert(name.as_str()) {
                return Err(Error::MalformedNetlist(format!(
                    "duplicate or empty primary input '{name}'"
                )));
            }
        }
        for gate in &gates {
            gate.validate()?;
            if !names.insert(gate.id.as_str()) {
                return Err(Error::MalformedNetlist(format!(
                    "gate id '{}' collides with another signal",
                    gate.id
                )));
            }
        }
        for gate in &gates {
            if let Some(missing) = gate.inputs.iter().find(|s| !names.contains(s.as_str())) {
                return Err(Error::UnresolvedSignal(missing.clone()));
            }
        }
        let gate_ids: HashSet<&str> = gates.iter().map(|g| g.id.as_str()).collect();
        if let Some(missing) = outputs.iter().find(|o| !gate_ids.contains(o.as_str())) {
            return Err(Error::UnresolvedSignal(missing.clone()));
        }
        let order = topological_order(&gates)?;
        Ok(Self {
            primary_inputs,
            gates,
            outputs,
            order,
        })
    }

    /// Parses and validates; structural problems keep their own error kind
    /// rather than surfacing as JSON errors.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawNetlist = serde_json::from_str(text)?;
        Self::new(raw.primary_inputs, raw.gates, raw.outputs)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn primary_inputs(&self) -> &[String] {
        &self.primary_inputs
    }

    pub fn gates(&self) -> &[ThresholdGate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    pub fn gate(&self, id: &str) -> Option<&ThresholdGate> {
        self.gates.iter().find(|g| g.id == id)
    }

    /// Gates in dependency order; ties go to the lexicographically smaller id.
    pub fn topological(&self) -> impl Iterator<Item = &ThresholdGate> + '_ {
        self.order.iter().map(move |&i| &self.gates[i])
    }

    /// Length of the longest gate chain from a primary input to any gate.
    pub fn depth(&self) -> usize {
        let mut level: HashMap<&str, usize> = HashMap::new();
        for gate in self.topological() {
            let d = 1 + gate
                .inputs
                .iter()
                .filter_map(|s| level.get(s.as_str()).copied())
                .max()
                .unwrap_or(0);
            level.insert(&gate.id, d);
        }
        level.values().copied().max().unwrap_or(0)
    }

    fn assignment(&self, primary: &[bool]) -> Result<HashMap<String, bool>> {
        if primary.len() != self.primary_inputs.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} primary input bits, got {}",
                self.primary_inputs.len(),
                primary.len()
            )));
        }
        Ok(self
            .primary_inputs
            .iter()
            .cloned()
            .zip(primary.iter().copied())
            .collect())
    }

    /// Evaluates every gate for a primary assignment given in
    /// `primary_inputs` order. The map also holds the primary inputs.
    pub fn evaluate(&self, primary: &[bool]) -> Result<HashMap<String, bool>> {
        let mut signals = self.assignment(primary)?;
        for gate in self.topological() {
            let bit = eval_gate(gate, &signals)?;
            signals.insert(gate.id.clone(), bit);
        }
        Ok(signals)
    }

    pub fn output_bits(&self, primary: &[bool]) -> Result<Vec<bool>> {
        let signals = self.evaluate(primary)?;
        Ok(self.outputs.iter().map(|o| signals[o]).collect())
    }
}

/// Gate outputs only (primary inputs stripped), keyed by gate id.
pub fn eval_netlist(netlist: &ThresholdNetlist, primary: &[bool]) -> Result<HashMap<String, bool>> {
    let mut signals = netlist.evaluate(primary)?;
    signals.retain(|name, _| netlist.gate(name).is_some());
    Ok(signals)
}

fn topological_order(gates: &[ThresholdGate]) -> Result<Vec<usize>> {
    let index: HashMap<&str, usize> = gates.iter().enumerate().map(|(i, g)| (g.id.as_str(), i)).collect();
    let mut pending = vec![0usize; gates.len()];
    let mut fanout: Vec<Vec<usize>> = vec![Vec::new(); gates.len()];
    for (i, gate) in gates.iter().enumerate() {
        for input in &gate.inputs {
            if let Some(&src) = index.get(input.as_str()) {
                pending[i] += 1;
                fanout[src].push(i);
            }
        }
    }
    let mut ready: BTreeSet<(&str, usize)> = gates
        .iter()
        .enumerate()
        .filter(|(i, _)| pending[*i] == 0)
        .map(|(i, g)| (g.id.as_str(), i))
        .collect();
    let mut order = Vec::with_capacity(gates.len());
    while let Some(next) = ready.pop_first() {
        let i = next.1;
        order.push(i);
        for &dst in &fanout[i] {
            pending[dst] -= 1;
            if pending[dst] == 0 {
                ready.insert((gates[dst].id.as_str(), dst));
            }
        }
    }
    if order.len() != gates.len() {
        let mut stuck: Vec<String> = (0..gates.len())
            .filter(|&i| pending[i] > 0)
            .map(|i| gates[i].id.clone())
            .collect();
        stuck.sort();
        return Err(Error::CyclicNetlist(stuck));
    }
    Ok(order)
}

/// Input vector for row `row` of an `n`-input table: the first input is the
/// most significant bit.
pub fn row_bits(row: usize, n: usize) -> Vec<bool> {
    (0..n).map(|j| (row >> (n - 1 - j)) & 1 == 1).collect()
}

/// Formats a vector as `name=bit` pairs, e.g. `a=1,b=0`.
pub fn describe_vector(names: &[String], bits: &[bool]) -> String {
    names
        .iter()
        .zip(bits)
        .map(|(n, &b)| format!("{n}={}", u8::from(b)))
        .collect::<Vec<_>>()
        .join(",")
}

pub(crate) fn check_capacity(what: &str, count: usize) -> Result<()> {
    if count > MAX_EXHAUSTIVE_INPUTS {
        return Err(Error::Capacity {
            what: what.to_owned(),
            count,
            max: MAX_EXHAUSTIVE_INPUTS,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruthRow {
    pub inputs: Vec<bool>,
    pub outputs: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruthTable {
    pub input_names: Vec<String>,
    pub output_names: Vec<String>,
    pub rows: Vec<TruthRow>,
}

/// All 2ⁿ rows in canonical binary order.
pub fn truth_table(netlist: &ThresholdNetlist) -> Result<TruthTable> {
    let n = netlist.primary_inputs().len();
    check_capacity("netlist", n)?;
    let rows = (0..1usize << n)
        .into_par_iter()
        .map(|row| {
            let inputs = row_bits(row, n);
            let outputs = netlist.output_bits(&inputs)?;
            Ok(TruthRow { inputs, outputs })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TruthTable {
        input_names: netlist.primary_inputs().to_vec(),
        output_names: netlist.outputs().to_vec(),
        rows,
    })
}

/// Two-gate full adder:
/// `cout = [a + b + cin − 2 >= 0]`, `sum = [a + b + cin − 2·cout − 1 >= 0]`.
pub fn builtin_full_adder() -> ThresholdNetlist {
    ThresholdNetlist::new(
        vec!["a".into(), "b".into(), "cin".into()],
        vec![
            ThresholdGate::new("cout", &["a", "b", "cin"], &[1, 1, 1], 2),
            ThresholdGate::new("sum", &["a", "b", "cin", "cout"], &[1, 1, 1, -2], 1),
        ],
        vec!["cout".into(), "sum".into()],
    )
    .expect("built-in full adder is well formed")
}
