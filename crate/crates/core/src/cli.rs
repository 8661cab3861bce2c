//! Command-line front end. Every subcommand renders one document, either
//! JSON or CSV, to standard output or a file.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 argument error, 3 domain error,
//! 4 oracle or solver disagreement.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::experiments::{self, OracleKind, SweepSpec};
use crate::kalman::{self, ModelParams, Schedule, SensorSet};
use crate::single::{self, OneRegime};
use crate::two::{self, DescentOptions, TwoRegime};

#[derive(Debug, Parser)]
#[command(
    name = "measure-sched",
    version,
    about = "Optimal measurement schedules for a scalar Brownian motion"
)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write the document here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    One,
    Two,
}

/// Parses a real number, also accepting a fraction such as `71/18`.
pub fn parse_real(s: &str) -> Result<f64, String> {
    let num = |x: &str| {
        x.trim()
            .parse::<f64>()
            .map_err(|_| format!("`{s}` is not a number or fraction"))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = num(d)?;
            if d == 0.0 {
                return Err(format!("`{s}` has a zero denominator"));
            }
            Ok(num(n)? / d)
        }
        None => num(s),
    }
}

#[derive(Debug, Clone, Args)]
pub struct Horizon {
    #[arg(long, value_parser = parse_real, default_value = "1")]
    pub sigma2: f64,
    #[arg(long = "T", value_parser = parse_real)]
    pub horizon: f64,
    #[arg(long, value_parser = parse_real)]
    pub v0: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimal single measurement.
    #[command(allow_negative_numbers = true)]
    Optimize1 {
        #[command(flatten)]
        model: Horizon,
        #[arg(long, value_parser = parse_real)]
        v1: f64,
    },
    /// Optimal pair of measurements.
    #[command(allow_negative_numbers = true)]
    Optimize2 {
        #[command(flatten)]
        model: Horizon,
        #[arg(long, value_parser = parse_real)]
        v1: f64,
        #[arg(long, value_parser = parse_real)]
        v2: f64,
        /// Include the coordinate-descent iterations (JSON only).
        #[arg(long)]
        trace: bool,
        /// Stop when both coordinate moves fall below this.
        #[arg(long, value_parser = parse_real, default_value = "1e-9")]
        tolerance: f64,
        #[arg(long, default_value_t = 200)]
        max_iterations: usize,
    },
    /// Variance profile and cost of an arbitrary schedule.
    #[command(allow_negative_numbers = true)]
    Profile {
        #[command(flatten)]
        model: Horizon,
        /// Sensor variances, comma separated.
        #[arg(long, value_parser = parse_real, value_delimiter = ',', required = true)]
        sensors: Vec<f64>,
        /// Measurement instants, comma separated.
        #[arg(long, value_parser = parse_real, value_delimiter = ',', required = true)]
        instants: Vec<f64>,
    },
    /// Lower and upper cost bounds for one measurement.
    #[command(allow_negative_numbers = true)]
    Bounds {
        #[command(flatten)]
        model: Horizon,
        #[arg(long, value_parser = parse_real)]
        v1: f64,
    },
    /// Repeated windows of length T, each with one optimal measurement.
    #[command(allow_negative_numbers = true)]
    Windows {
        #[command(flatten)]
        model: Horizon,
        #[arg(long, value_parser = parse_real)]
        v1: f64,
        #[arg(long, default_value_t = 10)]
        windows: usize,
    },
    /// Run a sweep described by a JSON spec file.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Compare the optimisers with the brute-force lattice oracle.
    #[command(allow_negative_numbers = true)]
    OracleCheck {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, value_parser = parse_real)]
        step: f64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest accepted discrepancy; defaults to 1e-4 (one) or 2 steps (two).
        #[arg(long, value_parser = parse_real)]
        tolerance: Option<f64>,
    },
}

/// A rendered result: the JSON document and its tabular form.
struct Document {
    json: Value,
    header: Vec<String>,
    rows: Vec<Vec<Value>>,
    /// Nonzero when the command ran but a check failed.
    status: i32,
}

impl Document {
    fn single(json: Value, fields: &[&str]) -> Self {
        let row = fields.iter().map(|f| json[*f].clone()).collect();
        Self {
            header: fields.iter().map(|f| f.to_string()).collect(),
            rows: vec![row],
            json,
            status: 0,
        }
    }
}

enum Failure {
    Arg(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidSpec(_) => 2,
        Error::Discrepancy { .. } | Error::NoConvergence { .. } => 4,
        _ => 3,
    }
}

/// Rounds to 12 significant digits; non-finite values become strings.
pub fn round12(x: f64) -> Value {
    if x.is_finite() {
        let r: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
        json!(if r == 0.0 { 0.0 } else { r })
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn round_all(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => round12(n.as_f64().expect("f64 number")),
        Value::Array(a) => Value::Array(a.into_iter().map(round_all).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_all(v))).collect()),
        other => other,
    }
}

fn num(x: f64) -> Value {
    round12(x)
}

fn one_regime(r: OneRegime) -> (&'static str, bool) {
    match r {
        OneRegime::Regime1 => ("1", false),
        OneRegime::Boundary => ("1", true),
        OneRegime::Regime2 => ("2", false),
    }
}

fn two_regime(r: TwoRegime) -> &'static str {
    match r {
        TwoRegime::Regime1 => "1",
        TwoRegime::Regime2 => "2",
        TwoRegime::Regime3 => "3",
    }
}

fn params_json(m: &Horizon) -> Map<String, Value> {
    let mut o = Map::new();
    o.insert("sigma2".into(), num(m.sigma2));
    o.insert("T".into(), num(m.horizon));
    o.insert("v0".into(), num(m.v0));
    o
}

fn execute(command: &Command) -> Result<Document, Failure> {
    match command {
        Command::Optimize1 { model, v1 } => {
            let sol = single::optimal_instant_1(model.sigma2, model.horizon, model.v0, *v1)?;
            let (regime, on_boundary) = one_regime(sol.regime);
            let mut o = params_json(model);
            o.insert("v1".into(), num(*v1));
            o.insert("t1_opt".into(), num(sol.t_opt));
            o.insert("regime".into(), json!(regime));
            o.insert("on_boundary".into(), json!(on_boundary));
            o.insert("cost".into(), num(sol.cost_at_opt));
            o.insert("T_crit".into(), num(sol.critical_duration));
            Ok(Document::single(
                Value::Object(o),
                &["t1_opt", "regime", "on_boundary", "cost", "T_crit"],
            ))
        }
        Command::Optimize2 {
            model,
            v1,
            v2,
            trace,
            tolerance,
            max_iterations,
        } => {
            let opts = DescentOptions {
                tolerance: *tolerance,
                max_iterations: *max_iterations,
                keep_trace: *trace,
                ..DescentOptions::default()
            };
            let sol = two::optimize_two(model.sigma2, model.horizon, model.v0, *v1, *v2, &opts)?;
            let mut o = params_json(model);
            o.insert("v1".into(), num(*v1));
            o.insert("v2".into(), num(*v2));
            o.insert("t1_opt".into(), num(sol.t1_opt));
            o.insert("t2_opt".into(), num(sol.t2_opt));
            o.insert("regime".into(), json!(two_regime(sol.regime)));
            o.insert("on_boundary".into(), json!(sol.on_boundary));
            o.insert("cost".into(), num(sol.cost_at_opt));
            o.insert("T2_crit".into(), num(sol.t2_crit));
            o.insert("T1_crit".into(), num(sol.t1_crit));
            if *trace {
                let t = serde_json::to_value(&sol.trace).expect("trace serialises");
                o.insert("trace".into(), round_all(t));
            }
            Ok(Document::single(
                Value::Object(o),
                &[
                    "t1_opt",
                    "t2_opt",
                    "regime",
                    "on_boundary",
                    "cost",
                    "T2_crit",
                    "T1_crit",
                ],
            ))
        }
        Command::Profile {
            model,
            sensors,
            instants,
        } => {
            let params = ModelParams::new(model.sigma2, model.horizon, model.v0)?;
            let prof = kalman::variance_profile(
                &params,
                &SensorSet::new(sensors.clone())?,
                &Schedule::new(instants.clone()),
            )?;
            let c = prof.cost();
            let segments: Vec<Vec<Value>> = prof
                .segments
                .iter()
                .map(|s| {
                    vec![
                        num(s.start),
                        num(s.end),
                        num(s.start_variance),
                        num(s.start_variance + prof.sigma2 * s.duration()),
                    ]
                })
                .collect();
            let header = ["start", "end", "start_variance", "end_variance"];
            let mut o = params_json(model);
            o.insert(
                "segments".into(),
                Value::Array(
                    segments
                        .iter()
                        .map(|row| {
                            Value::Object(
                                header
                                    .iter()
                                    .map(|h| h.to_string())
                                    .zip(row.iter().cloned())
                                    .collect(),
                            )
                        })
                        .collect(),
                ),
            );
            o.insert(
                "post_measure_variances".into(),
                Value::Array(
                    prof.post_measure_variances
                        .iter()
                        .map(|&v| num(v))
                        .collect(),
                ),
            );
            o.insert("cost".into(), num(c.total));
            o.insert("triangular".into(), num(c.triangular));
            o.insert("rectangular".into(), num(c.rectangular));
            Ok(Document {
                json: Value::Object(o),
                header: header.iter().map(|h| h.to_string()).collect(),
                rows: segments,
                status: 0,
            })
        }
        Command::Bounds { model, v1 } => {
            let (s, t, v0) = (model.sigma2, model.horizon, model.v0);
            let sol = single::optimal_instant_1(s, t, v0, *v1)?;
            let mut o = params_json(model);
            o.insert("v1".into(), num(*v1));
            o.insert(
                "lower_bound".into(),
                num(single::lower_bound(s, t, v0, *v1)?),
            );
            o.insert("cost".into(), num(sol.cost_at_opt));
            o.insert("upper_bound".into(), num(single::upper_bound(s, t, v0)?));
            o.insert("t1_opt".into(), num(sol.t_opt));
            Ok(Document::single(
                Value::Object(o),
                &["lower_bound", "cost", "upper_bound", "t1_opt"],
            ))
        }
        Command::Windows { model, v1, windows } => {
            let (s, t, v0) = (model.sigma2, model.horizon, model.v0);
            let it = single::iterate_windows(s, t, *v1, v0, *windows)?;
            let rows: Vec<Vec<Value>> = (0..*windows)
                .map(|k| {
                    vec![
                        json!(k),
                        num(it.v0_sequence[k]),
                        num(it.relative_instants[k]),
                        num(it.v0_sequence[k + 1]),
                    ]
                })
                .collect();
            let header = ["window", "v_start", "relative_instant", "v_end"];
            let mut o = params_json(model);
            o.insert("v1".into(), num(*v1));
            o.insert("v0_crit".into(), num(single::window_v0_crit(s, t, *v1)?));
            o.insert(
                "v0_stationary".into(),
                num(single::window_v0_stationary(s, t, *v1)?),
            );
            o.insert("settled_at".into(), json!(it.settled_at));
            o.insert(
                "windows".into(),
                Value::Array(
                    rows.iter()
                        .map(|r| {
                            Value::Object(
                                header
                                    .iter()
                                    .map(|h| h.to_string())
                                    .zip(r.iter().cloned())
                                    .collect(),
                            )
                        })
                        .collect(),
                ),
            );
            Ok(Document {
                json: Value::Object(o),
                header: header.iter().map(|h| h.to_string()).collect(),
                rows,
                status: 0,
            })
        }
        Command::Sweep { spec } => {
            let text = std::fs::read_to_string(spec)
                .map_err(|e| Failure::Arg(format!("cannot read --spec {}: {e}", spec.display())))?;
            let spec: SweepSpec = serde_json::from_str(&text)
                .map_err(|e| Failure::Arg(format!("invalid --spec: {e}")))?;
            let res = experiments::run_sweep(&spec)?;
            let header: Vec<String> = res
                .input_names
                .iter()
                .chain(&res.output_names)
                .cloned()
                .collect();
            let rows: Vec<Vec<Value>> = res
                .rows
                .iter()
                .map(|(i, o)| i.iter().chain(o).map(|&x| num(x)).collect())
                .collect();
            let mut o = Map::new();
            o.insert(
                "kind".into(),
                serde_json::to_value(res.kind).expect("kind serialises"),
            );
            o.insert("seed".into(), json!(res.seed));
            o.insert("columns".into(), json!(header));
            o.insert("rows".into(), json!(rows));
            o.insert(
                "summary".into(),
                Value::Object(
                    res.summary
                        .iter()
                        .map(|(k, &v)| (k.clone(), num(v)))
                        .collect(),
                ),
            );
            if let Some(tr) = &res.traces {
                o.insert(
                    "traces".into(),
                    round_all(serde_json::to_value(tr).expect("traces serialise")),
                );
            }
            Ok(Document {
                json: Value::Object(o),
                header,
                rows,
                status: 0,
            })
        }
        Command::OracleCheck {
            kind,
            step,
            trials,
            seed,
            tolerance,
        } => {
            let kind = match kind {
                KindArg::One => OracleKind::One,
                KindArg::Two => OracleKind::Two,
            };
            let tol = match tolerance {
                Some(t) => crate::error::positive("tolerance", *t)?,
                None if kind == OracleKind::One => 1e-4,
                None => 2.0 * step,
            };
            let report = experiments::oracle_check(kind, *step, *trials, *seed)?;
            let unique = report
                .cases
                .iter()
                .all(|c| kind == OracleKind::One || c.cwlm_clusters == 1);
            let passed = report.max_discrepancy <= tol && unique;
            let header = [
                "sigma2",
                "T",
                "v0",
                "v1",
                "v2",
                "closed_t1",
                "closed_t2",
                "oracle_t1",
                "oracle_t2",
                "discrepancy",
                "cwlm_clusters",
            ];
            let rows: Vec<Vec<Value>> = report
                .cases
                .iter()
                .map(|c| {
                    let at = |v: &[f64], k: usize| v.get(k).map_or(Value::Null, |&x| num(x));
                    vec![
                        num(c.sigma2),
                        num(c.horizon),
                        num(c.v0),
                        num(c.v1),
                        c.v2.map_or(Value::Null, num),
                        at(&c.closed_form, 0),
                        at(&c.closed_form, 1),
                        at(&c.oracle, 0),
                        at(&c.oracle, 1),
                        num(c.discrepancy),
                        json!(c.cwlm_clusters),
                    ]
                })
                .collect();
            let json = json!({
                "kind": report.kind,
                "step": num(report.step),
                "trials": report.trials,
                "seed": report.seed,
                "tolerance": num(tol),
                "max_discrepancy": num(report.max_discrepancy),
                "unique_cwlm": unique,
                "passed": passed,
                "cases": rows.iter().map(|r| Value::Object(header.iter().map(|h| h.to_string()).zip(r.iter().cloned()).collect())).collect::<Vec<_>>(),
            });
            Ok(Document {
                json,
                header: header.iter().map(|h| h.to_string()).collect(),
                rows,
                status: if passed { 0 } else { 4 },
            })
        }
    }
}

fn csv_field(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render(doc: &Document, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(&doc.json).expect("document serialises");
            out.push(b'\n');
            out
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&doc.header).expect("in-memory write");
            for row in &doc.rows {
                w.write_record(row.iter().map(csv_field))
                    .expect("in-memory write");
            }
            w.into_inner().expect("in-memory flush")
        }
    }
}

/// Parses `args` (including the program name), runs the command and writes
/// the document. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{text}");
            } else {
                let _ = write!(stderr, "{text}");
            }
            return code;
        }
    };
    let doc = match execute(&cli.command) {
        Ok(d) => d,
        Err(Failure::Arg(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            return 2;
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    let bytes = render(&doc, cli.format);
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &bytes),
        None => stdout.write_all(&bytes),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write output: {e}");
        return 1;
    }
    if doc.status != 0 {
        let _ = writeln!(stderr, "error: oracle discrepancy exceeds tolerance");
    }
    doc.status
}
