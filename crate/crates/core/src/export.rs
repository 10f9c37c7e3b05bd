//! Plain-text table emission. CSV always uses '.' as decimal separator and
//! six significant digits, independent of locale.

use std::fmt::Write;

use crate::compiler::{CircuitLayout, CostReport};
use crate::dispersion::DispersionPoint;
use crate::netlist::TruthTable;
use crate::phase_shifter::SweepTable;
use crate::simulator::ExhaustiveReport;

/// Six significant digits; plain notation for magnitudes in [1e-4, 1e6),
/// scientific otherwise.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.5e}");
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

fn bit(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

pub fn sweep_csv(table: &SweepTable) -> String {
    let mut out = String::from("x_value,phase_shift_deg\n");
    for s in &table.samples {
        let _ = writeln!(out, "{},{}", fmt_sig(s.x_value), fmt_sig(s.phase_shift_deg));
    }
    out
}

pub fn sweep_summary_csv(table: &SweepTable) -> String {
    format!(
        "fit_slope,fit_intercept,r_squared\n{},{},{:.4}\n",
        fmt_sig(table.fit_slope),
        fmt_sig(table.fit_intercept),
        table.r_squared_rounded()
    )
}

/// Long-format frequency sweep: one block of rows per frequency.
pub fn sweep_frequency_csv(tables: &[(f64, SweepTable)]) -> String {
    let mut out = String::from("frequency_ghz,x_value,phase_shift_deg\n");
    for (f, table) in tables {
        for s in &table.samples {
            let _ = writeln!(
                out,
                "{},{},{}",
                fmt_sig(f / 1e9),
                fmt_sig(s.x_value),
                fmt_sig(s.phase_shift_deg)
            );
        }
    }
    out
}

pub fn sweep_frequency_summary_csv(tables: &[(f64, SweepTable)]) -> String {
    let mut out = String::from("frequency_ghz,fit_slope,fit_intercept,r_squared\n");
    for (f, t) in tables {
        let _ = writeln!(
            out,
            "{},{},{},{:.4}",
            fmt_sig(f / 1e9),
            fmt_sig(t.fit_slope),
            fmt_sig(t.fit_intercept),
            t.r_squared_rounded()
        );
    }
    out
}

/// Every shifter of a compiled circuit, gate by gate.
pub fn layout_csv(circuit: &CircuitLayout) -> String {
    let mut out = String::from("gate,source,weight,length_m,field_t,always_on,position_m\n");
    for gate in &circuit.gates {
        for s in &gate.shifters {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                gate.id,
                s.source,
                s.weight,
                fmt_sig(s.length_m),
                fmt_sig(s.field_t),
                bit(s.always_on),
                fmt_sig(s.position_m)
            );
        }
    }
    out
}

/// Long-format curves: one block of rows per field value.
pub fn dispersion_csv(curves: &[(f64, Vec<DispersionPoint>)]) -> String {
    let mut out = String::from("field_t,k_rad_per_m,f_ghz\n");
    for (field, points) in curves {
        for p in points {
            let _ = writeln!(
                out,
                "{},{},{}",
                fmt_sig(*field),
                fmt_sig(p.k),
                fmt_sig(p.frequency_hz() / 1e9)
            );
        }
    }
    out
}

pub fn truth_table_csv(table: &TruthTable) -> String {
    let mut out = table
        .input_names
        .iter()
        .chain(&table.output_names)
        .cloned()
        .collect::<Vec<_>>()
        .join(",");
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<&str> = row.inputs.iter().chain(&row.outputs).map(|&b| bit(b)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// One gate's rows laid out as `inputs…, delta_phi_deg, <gate>`.
pub fn gate_report_csv(report: &ExhaustiveReport, gate: &str) -> Option<String> {
    let idx = report.gates.iter().position(|g| g == gate)?;
    let mut out = report.gate_inputs[idx].join(",");
    let _ = writeln!(out, ",delta_phi_deg,{gate}");
    for row in &report.rows {
        let r = &row.results[idx];
        for &b in &r.inputs {
            out.push_str(bit(b));
            out.push(',');
        }
        let _ = writeln!(out, "{},{}", fmt_sig(r.net_phase_deg), bit(r.output));
    }
    Some(out)
}

/// Whole circuit: primary inputs, then phase and bit for each gate.
pub fn report_csv(report: &ExhaustiveReport) -> String {
    let mut header: Vec<String> = report.primary_inputs.clone();
    for g in &report.gates {
        header.push(format!("{g}_delta_phi_deg"));
        header.push(g.clone());
    }
    let mut out = header.join(",");
    out.push('\n');
    for row in &report.rows {
        let mut cells: Vec<String> = row.inputs.iter().map(|&b| bit(b).to_owned()).collect();
        for r in &row.results {
            cells.push(fmt_sig(r.net_phase_deg));
            cells.push(bit(r.output).to_owned());
        }
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn cost_csv(report: &CostReport) -> String {
    let mut out = String::from("implementation,gate_count,transducer_count,shifter_count,gate_depth\n");
    let _ = writeln!(
        out,
        "tlg,{},{},{},{}",
        report.gate_count, report.transducer_count, report.shifter_count, report.gate_depth
    );
    if let Some(maj) = report.maj3_reference {
        let _ = writeln!(
            out,
            "maj3,{},{},0,{}",
            maj.gate_count, maj.transducer_count, maj.gate_depth
        );
    }
    out
}
