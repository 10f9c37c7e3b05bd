use std::fs;
use std::path::Path;

use serde::Serialize;

use swtl_core::compiler::{compile, cost_report, CircuitLayout, CompileOptions};
use swtl_core::dispersion::{dispersion_curve, FieldPoint};
use swtl_core::export;
use swtl_core::netlist::truth_table;
use swtl_core::phase_shifter::{
    calibrate_field, sweep_field, sweep_frequency, sweep_length, OperatingPoint, SweepTable,
};
use swtl_core::simulator::{exhaustive_report, simulate_circuit, ExhaustiveReport, Mode, ReportRow};
use swtl_core::{Error, MaterialStack, Result, ThresholdNetlist};

use crate::{Cli, Command, DispersionArgs, FieldRange, Format, RunConfig, SimulateArgs, SweepKind};

/// One output document. Without `--out`, only `primary` artifacts are
/// printed.
struct Artifact {
    name: String,
    contents: String,
    primary: bool,
}

impl Artifact {
    fn primary(name: impl Into<String>, contents: String) -> Self {
        Self {
            name: name.into(),
            contents,
            primary: true,
        }
    }

    fn extra(name: impl Into<String>, contents: String) -> Self {
        Self {
            name: name.into(),
            contents,
            primary: false,
        }
    }
}

fn json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn positive(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidArgument(format!("{name} must be positive, got {value}")))
    }
}

fn operating_point(cfg: &RunConfig) -> Result<OperatingPoint> {
    let freq = positive("--freq-ghz", cfg.freq_ghz)?;
    if !cfg.baseline_t.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "--baseline-t must be finite, got {}",
            cfg.baseline_t
        )));
    }
    let stack = MaterialStack::resolve(&cfg.preset)?;
    stack.validate()?;
    Ok(OperatingPoint::new(stack, freq * 1e9, FieldPoint(cfg.baseline_t)))
}

fn shifter_length(cfg: &RunConfig) -> Result<f64> {
    Ok(positive("--shifter-nm", cfg.shifter_nm)? * 1e-9)
}

pub fn run(cli: &Cli) -> Result<()> {
    let cfg = &cli.config;
    let artifacts = match &cli.command {
        Command::Dispersion(args) => dispersion(cfg, args)?,
        Command::Sweep { kind } => sweep(cfg, kind)?,
        Command::Calibrate(args) => calibrate(cfg, args.target_deg, args.bound_t)?,
        Command::Compile(args) => {
            let netlist = ThresholdNetlist::from_json(&read(&args.netlist)?)?;
            let opts = CompileOptions {
                unit_phase_deg: cfg.unit_deg,
                shifter_length_m: shifter_length(cfg)?,
                calibration: args.calibration.into(),
                strict_budget: args.strict,
                ..CompileOptions::default()
            };
            let circuit = compile(&netlist, &operating_point(cfg)?, &opts)?;
            let mut out = vec![Artifact::primary("layout.json", json(&circuit)?)];
            if cfg.format == Format::Csv {
                out.push(Artifact::extra("layout_shifters.csv", export::layout_csv(&circuit)));
            }
            out
        }
        Command::Simulate(args) => simulate(cfg, args)?,
        Command::Cost(args) => {
            let report = cost_report(&ThresholdNetlist::from_json(&read(&args.netlist)?)?);
            match cfg.format {
                Format::Csv => vec![Artifact::primary("cost.csv", export::cost_csv(&report))],
                Format::Json => vec![Artifact::primary("cost.json", json(&report)?)],
            }
        }
        Command::TruthTable(args) => {
            let table = truth_table(&ThresholdNetlist::from_json(&read(&args.netlist)?)?)?;
            match cfg.format {
                Format::Csv => vec![Artifact::primary("truth_table.csv", export::truth_table_csv(&table))],
                Format::Json => vec![Artifact::primary("truth_table.json", json(&table)?)],
            }
        }
    };
    emit(cfg, &artifacts)
}

fn emit(cfg: &RunConfig, artifacts: &[Artifact]) -> Result<()> {
    match &cfg.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            for a in artifacts {
                let path = dir.join(&a.name);
                fs::write(&path, &a.contents)?;
                println!("{}", path.display());
            }
        }
        None => {
            let shown: Vec<&str> = artifacts
                .iter()
                .filter(|a| a.primary)
                .map(|a| a.contents.as_str())
                .collect();
            print!("{}", shown.join("\n"));
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct CurvePoint {
    k_rad_per_m: f64,
    f_ghz: f64,
}

#[derive(Serialize)]
struct Curve {
    field_t: f64,
    points: Vec<CurvePoint>,
}

fn dispersion(cfg: &RunConfig, args: &DispersionArgs) -> Result<Vec<Artifact>> {
    if args.fields.is_empty() {
        return Err(Error::InvalidArgument("at least one field value is required".into()));
    }
    let k_min = positive("--k-min", args.k_min)?;
    let k_max = positive("--k-max", args.k_max)?;
    if k_min >= k_max || args.points < 2 {
        return Err(Error::InvalidArgument(format!(
            "need k_min < k_max and at least 2 points, got [{k_min}, {k_max}] with {}",
            args.points
        )));
    }
    let stack = MaterialStack::resolve(&cfg.preset)?;
    stack.validate()?;
    let step = (k_max / k_min).ln() / (args.points - 1) as f64;
    let ks: Vec<f64> = (0..args.points).map(|i| k_min * (step * i as f64).exp()).collect();
    let curves = args
        .fields
        .iter()
        .map(|&b| Ok((b, dispersion_curve(&ks, FieldPoint(b), &stack)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(match cfg.format {
        Format::Csv => vec![Artifact::primary("dispersion.csv", export::dispersion_csv(&curves))],
        Format::Json => {
            let doc: Vec<Curve> = curves
                .iter()
                .map(|(b, points)| Curve {
                    field_t: *b,
                    points: points
                        .iter()
                        .map(|p| CurvePoint {
                            k_rad_per_m: p.k,
                            f_ghz: p.frequency_hz() / 1e9,
                        })
                        .collect(),
                })
                .collect();
            vec![Artifact::primary("dispersion.json", json(&doc)?)]
        }
    })
}

fn single_sweep(cfg: &RunConfig, stem: &str, table: &SweepTable) -> Result<Vec<Artifact>> {
    Ok(match cfg.format {
        Format::Csv => vec![
            Artifact::primary(format!("{stem}.csv"), export::sweep_csv(table)),
            Artifact::primary(format!("{stem}_summary.csv"), export::sweep_summary_csv(table)),
        ],
        Format::Json => vec![Artifact::primary(format!("{stem}.json"), json(table)?)],
    })
}

#[derive(Serialize)]
struct FrequencySweep<'a> {
    frequency_hz: f64,
    #[serde(flatten)]
    table: &'a SweepTable,
}

fn sweep(cfg: &RunConfig, kind: &SweepKind) -> Result<Vec<Artifact>> {
    let op = operating_point(cfg)?;
    match kind {
        SweepKind::Field(FieldRange { min_t, max_t, steps }) => {
            let table = sweep_field(shifter_length(cfg)?, &op, (*min_t, *max_t), *steps)?;
            single_sweep(cfg, "sweep_field", &table)
        }
        SweepKind::Frequency { freqs_ghz, range } => {
            let freqs = freqs_ghz
                .iter()
                .map(|&f| positive("frequency", f).map(|f| f * 1e9))
                .collect::<Result<Vec<_>>>()?;
            let tables = sweep_frequency(
                shifter_length(cfg)?,
                &freqs,
                &op,
                (range.min_t, range.max_t),
                range.steps,
            )?;
            Ok(match cfg.format {
                Format::Csv => vec![
                    Artifact::primary("sweep_frequency.csv", export::sweep_frequency_csv(&tables)),
                    Artifact::primary(
                        "sweep_frequency_summary.csv",
                        export::sweep_frequency_summary_csv(&tables),
                    ),
                ],
                Format::Json => {
                    let doc: Vec<FrequencySweep> = tables
                        .iter()
                        .map(|(f, table)| FrequencySweep {
                            frequency_hz: *f,
                            table,
                        })
                        .collect();
                    vec![Artifact::primary("sweep_frequency.json", json(&doc)?)]
                }
            })
        }
        SweepKind::Length { lengths_nm, field_t } => {
            let lengths: Vec<f64> = lengths_nm.iter().map(|l| l * 1e-9).collect();
            let table = sweep_length(&lengths, *field_t, &op)?;
            single_sweep(cfg, "sweep_length", &table)
        }
    }
}

#[derive(Serialize)]
struct Calibration {
    target_deg: f64,
    length_m: f64,
    frequency_hz: f64,
    baseline_t: f64,
    field_t: f64,
}

fn calibrate(cfg: &RunConfig, target_deg: f64, bound_t: f64) -> Result<Vec<Artifact>> {
    let op = operating_point(cfg)?;
    let length_m = shifter_length(cfg)?;
    let field_t = calibrate_field(target_deg, length_m, &op, bound_t)?;
    let result = Calibration {
        target_deg,
        length_m,
        frequency_hz: op.frequency_hz,
        baseline_t: op.baseline.tesla(),
        field_t,
    };
    Ok(match cfg.format {
        Format::Csv => {
            let fields = [target_deg, length_m, op.frequency_hz, op.baseline.tesla(), field_t];
            let row: Vec<String> = fields.iter().map(|&x| export::fmt_sig(x)).collect();
            let text = format!(
                "target_deg,length_m,frequency_hz,baseline_t,field_t\n{}\n",
                row.join(",")
            );
            vec![Artifact::primary("calibrate.csv", text)]
        }
        Format::Json => vec![Artifact::primary("calibrate.json", json(&result)?)],
    })
}

fn parse_bits(text: &str) -> Result<Vec<bool>> {
    text.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::InvalidArgument(format!(
                "input bits must be 0 or 1, found '{other}'"
            ))),
        })
        .collect()
}

fn single_row_report(circuit: &CircuitLayout, bits: Vec<bool>, mode: Mode) -> Result<ExhaustiveReport> {
    let mut by_gate = simulate_circuit(circuit, &bits, mode)?;
    let results: Vec<_> = circuit.gates.iter().filter_map(|g| by_gate.remove(&g.id)).collect();
    let min_margin_deg = results.iter().map(|r| r.margin_deg).fold(f64::INFINITY, f64::min);
    Ok(ExhaustiveReport {
        mode,
        primary_inputs: circuit.netlist.primary_inputs().to_vec(),
        gates: circuit.gates.iter().map(|g| g.id.clone()).collect(),
        gate_inputs: circuit.gates.iter().map(|g| g.input_names()).collect(),
        any_exceeds_half_turn: results.iter().any(|r| r.exceeds_half_turn),
        min_margin_deg: if min_margin_deg.is_finite() {
            min_margin_deg
        } else {
            0.0
        },
        rows: vec![ReportRow { inputs: bits, results }],
    })
}

fn simulate(cfg: &RunConfig, args: &SimulateArgs) -> Result<Vec<Artifact>> {
    let circuit = CircuitLayout::from_json(&read(&args.layout)?)?;
    let mode = args.mode.into();
    let report = match &args.input {
        Some(bits) => single_row_report(&circuit, parse_bits(bits)?, mode)?,
        None => exhaustive_report(&circuit, mode)?,
    };
    Ok(match cfg.format {
        Format::Csv => {
            let mut out = vec![Artifact::primary("report.csv", export::report_csv(&report))];
            for gate in &report.gates {
                if let Some(text) = export::gate_report_csv(&report, gate) {
                    out.push(Artifact::extra(format!("report_{gate}.csv"), text));
                }
            }
            out
        }
        Format::Json => vec![Artifact::primary("report.json", json(&report)?)],
    })
}
