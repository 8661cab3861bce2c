//! Parameter sweeps and randomised runs that regenerate the quantitative
//! results: gain over regular schedules, bounds, optimal instants against
//! the horizon, descent convergence and window iteration.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kalman::ModelParams;
use crate::numerics::{grid_oracle_1, grid_oracle_2};
use crate::single;
use crate::two::{self, DescentOptions, DescentTrace, TwoRegime};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    Gain1,
    Gain2,
    Bounds1,
    #[serde(rename = "instants_vs_T")]
    InstantsVsT,
    DescentStats,
    Windows,
}

/// Values taken by one swept parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AxisValues {
    /// `count` evenly spaced values from `min` to `max` inclusive.
    Range {
        min: f64,
        max: f64,
        count: usize,
    },
    Values {
        values: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    #[serde(flatten)]
    pub values: AxisValues,
}

impl Axis {
    pub fn range(name: &str, min: f64, max: f64, count: usize) -> Self {
        Self {
            name: name.into(),
            values: AxisValues::Range { min, max, count },
        }
    }

    pub fn values(name: &str, values: Vec<f64>) -> Self {
        Self {
            name: name.into(),
            values: AxisValues::Values { values },
        }
    }

    fn points(&self) -> Result<Vec<f64>> {
        match &self.values {
            AxisValues::Range { min, max, count } => {
                if *count < 2 || min >= max || !min.is_finite() || !max.is_finite() {
                    return Err(Error::InvalidSpec(format!(
                        "axis {} needs finite min < max and count >= 2",
                        self.name
                    )));
                }
                let span = max - min;
                let last = count - 1;
                Ok((0..*count)
                    .map(|i| {
                        if i == last {
                            *max
                        } else {
                            min + span * i as f64 / last as f64
                        }
                    })
                    .collect())
            }
            AxisValues::Values { values } => {
                if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidSpec(format!(
                        "axis {} needs a nonempty list of finite values",
                        self.name
                    )));
                }
                Ok(values.clone())
            }
        }
    }
}

/// Input of [`run_sweep`], read from a flat JSON object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub kind: SweepKind,
    #[serde(default)]
    pub fixed: BTreeMap<String, f64>,
    /// Outermost axis first; rows are emitted in row-major order.
    #[serde(default)]
    pub swept: Vec<Axis>,
    #[serde(default)]
    pub seed: u64,
    /// Number of random draws (`descent_stats` only).
    #[serde(default)]
    pub trials: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub kind: SweepKind,
    pub seed: u64,
    pub input_names: Vec<String>,
    pub output_names: Vec<String>,
    pub rows: Vec<(Vec<f64>, Vec<f64>)>,
    pub summary: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub traces: Option<Vec<DescentTrace>>,
}

type Cell = BTreeMap<String, f64>;

impl SweepSpec {
    fn expect_kind(&self, kind: SweepKind) -> Result<()> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(Error::InvalidSpec(format!(
                "expected kind {kind:?}, got {:?}",
                self.kind
            )))
        }
    }

    fn check_names(&self, allowed: &[&str]) -> Result<()> {
        let mut seen = Vec::new();
        for name in self.fixed.keys().chain(self.swept.iter().map(|a| &a.name)) {
            if !allowed.contains(&name.as_str()) {
                return Err(Error::InvalidSpec(format!(
                    "parameter {name} is not used by {:?} (expected one of {allowed:?})",
                    self.kind
                )));
            }
            if seen.contains(&name) {
                return Err(Error::InvalidSpec(format!("parameter {name} given twice")));
            }
            seen.push(name);
        }
        Ok(())
    }

    /// Cartesian product of the axes, each cell merged with the fixed
    /// values.
    fn cells(&self) -> Result<Vec<Cell>> {
        let mut cells = vec![self.fixed.clone()];
        for axis in &self.swept {
            let points = axis.points()?;
            cells = cells
                .into_iter()
                .flat_map(|c| {
                    points.iter().map(move |&v| {
                        let mut c = c.clone();
                        c.insert(axis.name.clone(), v);
                        c
                    })
                })
                .collect();
        }
        Ok(cells)
    }

    fn input_names(&self) -> Vec<String> {
        self.swept.iter().map(|a| a.name.clone()).collect()
    }

    fn inputs(&self, cell: &Cell) -> Vec<f64> {
        self.swept.iter().map(|a| cell[&a.name]).collect()
    }

    fn fixed_or(&self, name: &str, default: f64) -> f64 {
        self.fixed.get(name).copied().unwrap_or(default)
    }
}

fn get(cell: &Cell, name: &str) -> Result<f64> {
    cell.get(name)
        .copied()
        .ok_or_else(|| Error::InvalidSpec(format!("parameter {name} is missing")))
}

fn sigma2(cell: &Cell) -> f64 {
    cell.get("sigma2").copied().unwrap_or(1.0)
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn regime_number(r: TwoRegime) -> f64 {
    match r {
        TwoRegime::Regime1 => 1.0,
        TwoRegime::Regime2 => 2.0,
        TwoRegime::Regime3 => 3.0,
    }
}

/// Evaluates every cell in parallel; rows keep the canonical cell order.
fn grid_rows<F>(spec: &SweepSpec, eval: F) -> Result<Vec<(Vec<f64>, Vec<f64>)>>
where
    F: Fn(&Cell) -> Result<Vec<f64>> + Sync,
{
    let cells = spec.cells()?;
    cells
        .par_iter()
        .map(|c| Ok((spec.inputs(c), eval(c)?)))
        .collect()
}

fn column(rows: &[(Vec<f64>, Vec<f64>)], k: usize) -> impl Iterator<Item = f64> + '_ {
    rows.iter().map(move |(_, out)| out[k])
}

fn max_of(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(f64::NEG_INFINITY, f64::max)
}

fn min_of(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(f64::INFINITY, f64::min)
}

fn result(
    spec: &SweepSpec,
    output_names: Vec<String>,
    rows: Vec<(Vec<f64>, Vec<f64>)>,
    summary: BTreeMap<String, f64>,
) -> SweepResult {
    SweepResult {
        kind: spec.kind,
        seed: spec.seed,
        input_names: spec.input_names(),
        output_names,
        rows,
        summary,
        traces: None,
    }
}

/// Gain of the optimal single measurement over measuring at `T/2`.
pub fn gain_one_measure(spec: &SweepSpec) -> Result<SweepResult> {
    spec.expect_kind(SweepKind::Gain1)?;
    spec.check_names(&["sigma2", "T", "v0", "v1"])?;
    let rows = grid_rows(spec, |c| {
        let (s, t, v0, v1) = (sigma2(c), get(c, "T")?, get(c, "v0")?, get(c, "v1")?);
        let regular = single::one_measure_cost(s, t, v0, v1, 0.5 * t)?;
        let best = single::optimal_instant_1(s, t, v0, v1)?;
        let gain = (regular - best.cost_at_opt) / regular;
        Ok(vec![regular, best.cost_at_opt, gain, best.t_opt])
    })?;
    let summary = BTreeMap::from([
        ("max_gain".into(), max_of(column(&rows, 2))),
        ("min_gain".into(), min_of(column(&rows, 2))),
    ]);
    Ok(result(
        spec,
        names(&["J_reg", "J_opt", "gain", "t_opt"]),
        rows,
        summary,
    ))
}

/// Gain of the optimal pair over measuring at `(T/3, 2T/3)`.
pub fn gain_two_measures(spec: &SweepSpec) -> Result<SweepResult> {
    spec.expect_kind(SweepKind::Gain2)?;
    spec.check_names(&["sigma2", "T", "v0", "v1", "v2"])?;
    let opts = DescentOptions::default();
    let rows = grid_rows(spec, |c| {
        let (s, t) = (sigma2(c), get(c, "T")?);
        let (v0, v1, v2) = (get(c, "v0")?, get(c, "v1")?, get(c, "v2")?);
        let regular = two::two_measure_cost(s, t, v0, v1, v2, t / 3.0, 2.0 * t / 3.0)?;
        let best = two::optimize_two(s, t, v0, v1, v2, &opts)?;
        let gain = (regular - best.cost_at_opt) / regular;
        Ok(vec![
            regular,
            best.cost_at_opt,
            gain,
            best.t1_opt,
            best.t2_opt,
            regime_number(best.regime),
        ])
    })?;
    let mut summary = BTreeMap::from([
        ("max_gain".into(), max_of(column(&rows, 2))),
        ("min_gain".into(), min_of(column(&rows, 2))),
    ]);
    // Per-panel maxima when v0 is swept as an explicit list.
    if let Some(k) = spec.swept.iter().position(|a| a.name == "v0") {
        let mut panels: Vec<f64> = rows.iter().map(|(inp, _)| inp[k]).collect();
        panels.sort_by(f64::total_cmp);
        panels.dedup();
        if panels.len() <= 10 {
            for v0 in panels {
                let m = max_of(
                    rows.iter()
                        .filter(|(inp, _)| inp[k] == v0)
                        .map(|(_, o)| o[2]),
                );
                summary.insert(format!("max_gain_v0={v0}"), m);
            }
        }
    }
    Ok(result(
        spec,
        names(&["J_reg", "J_opt", "gain", "t1_opt", "t2_opt", "regime"]),
        rows,
        summary,
    ))
}

/// Costs of measuring at 0, at `T/2` and optimally, against the bounds.
pub fn bounds_comparison(spec: &SweepSpec) -> Result<SweepResult> {
    spec.expect_kind(SweepKind::Bounds1)?;
    spec.check_names(&["sigma2", "T", "v0", "v1"])?;
    let rows = grid_rows(spec, |c| {
        let (s, t, v0, v1) = (sigma2(c), get(c, "T")?, get(c, "v0")?, get(c, "v1")?);
        Ok(vec![
            single::one_measure_cost(s, t, v0, v1, 0.0)?,
            single::one_measure_cost(s, t, v0, v1, 0.5 * t)?,
            single::optimal_instant_1(s, t, v0, v1)?.cost_at_opt,
            single::lower_bound(s, t, v0, v1)?,
            single::upper_bound(s, t, v0)?,
        ])
    })?;
    let ordered = rows
        .iter()
        .all(|(_, o)| o[3] < o[2] && o[2] <= o[0].min(o[1]) && o[2] <= o[4]);
    let summary = BTreeMap::from([
        ("ordering_holds".into(), if ordered { 1.0 } else { 0.0 }),
        (
            "min_gap_to_lower_bound".into(),
            min_of(rows.iter().map(|(_, o)| o[2] - o[3])),
        ),
    ]);
    Ok(result(
        spec,
        names(&["J_zero", "J_half", "J_opt", "lower_bound", "upper_bound"]),
        rows,
        summary,
    ))
}

/// Optimal pair as a function of the horizon.
pub fn instants_vs_t(spec: &SweepSpec) -> Result<SweepResult> {
    spec.expect_kind(SweepKind::InstantsVsT)?;
    spec.check_names(&["sigma2", "T", "v0", "v1", "v2"])?;
    let opts = DescentOptions::default();
    let rows = grid_rows(spec, |c| {
        let (s, t) = (sigma2(c), get(c, "T")?);
        let (v0, v1, v2) = (get(c, "v0")?, get(c, "v1")?, get(c, "v2")?);
        let sol = two::optimize_two(s, t, v0, v1, v2, &opts)?;
        Ok(vec![
            sol.t1_opt,
            sol.t2_opt,
            regime_number(sol.regime),
            sol.cost_at_opt,
        ])
    })?;
    let mut summary = BTreeMap::new();
    let fixed = |n: &str| spec.fixed.get(n).copied();
    if let (Some(v0), Some(v1), Some(v2)) = (fixed("v0"), fixed("v1"), fixed("v2")) {
        let s = spec.fixed_or("sigma2", 1.0);
        summary.insert(
            "T2_crit".into(),
            two::critical_duration_2_second(s, v0, v1, v2)?,
        );
        summary.insert(
            "T1_crit".into(),
            two::critical_duration_2_first(s, v0, v1, v2)?,
        );
    }
    if spec.swept.len() == 1 && spec.swept[0].name == "T" {
        let monotone = rows.windows(2).all(|w| {
            w[0].0[0] > w[1].0[0]
                || (w[1].1[0] >= w[0].1[0] - 1e-9 && w[1].1[1] >= w[0].1[1] - 1e-9)
        });
        summary.insert("monotone".into(), if monotone { 1.0 } else { 0.0 });
    }
    Ok(result(
        spec,
        names(&["t1_opt", "t2_opt", "regime", "cost"]),
        rows,
        summary,
    ))
}

/// Iterations after which both coordinate steps stay below `tol`.
pub fn iterations_to(trace: &DescentTrace, tol: f64) -> usize {
    let last_large = trace
        .iterations
        .iter()
        .rposition(|s| s.step_t1 >= tol || s.step_t2 >= tol);
    match last_large {
        Some(k) => k + 2,
        None => 1,
    }
}

/// Draws `trials` regime-3 instances uniformly from `[lo, hi]^3` (rejection
/// on `T > T1_crit`) and records each descent.
pub fn descent_statistics(spec: &SweepSpec) -> Result<SweepResult> {
    spec.expect_kind(SweepKind::DescentStats)?;
    spec.check_names(&["sigma2", "T", "lo", "hi"])?;
    if !spec.swept.is_empty() {
        return Err(Error::InvalidSpec(
            "descent_stats takes no swept axes".into(),
        ));
    }
    let s = spec.fixed_or("sigma2", 1.0);
    let t = spec.fixed_or("T", 10.0);
    let (lo, hi) = (spec.fixed_or("lo", 1.0), spec.fixed_or("hi", 10.0));
    if !(0.0 <= lo && lo < hi && hi.is_finite()) {
        return Err(Error::InvalidSpec("need 0 <= lo < hi".into()));
    }
    let trials = spec.trials.unwrap_or(100);

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut draws = Vec::with_capacity(trials);
    let mut rejected = 0usize;
    while draws.len() < trials {
        let v: [f64; 3] = std::array::from_fn(|_| rng.random_range(lo..hi));
        if t > two::critical_duration_2_first(s, v[0], v[1], v[2])? {
            draws.push(v);
        } else {
            rejected += 1;
            if rejected > 1000 * trials.max(1) {
                return Err(Error::InvalidSpec(
                    "regime 3 is (almost) empty for these parameters".into(),
                ));
            }
        }
    }

    let opts = DescentOptions {
        keep_trace: true,
        ..DescentOptions::default()
    };
    let runs: Vec<(Vec<f64>, Vec<f64>, DescentTrace)> = draws
        .par_iter()
        .enumerate()
        .map(|(k, v)| {
            let sol = two::optimize_two(s, t, v[0], v[1], v[2], &opts)?;
            let trace = sol.trace.expect("regime 3 keeps a trace");
            let last = trace.iterations.last().expect("nonempty trace");
            let min_decrement = min_of(trace.iterations.windows(2).map(|w| w[0].cost - w[1].cost));
            let outputs = vec![
                sol.t1_opt,
                sol.t2_opt,
                trace.iterations.len() as f64,
                iterations_to(&trace, 2e-6) as f64,
                last.step_t1,
                last.step_t2,
                trace.final_gap,
                min_decrement,
            ];
            Ok((vec![k as f64, v[0], v[1], v[2]], outputs, trace))
        })
        .collect::<Result<_>>()?;

    let rows: Vec<_> = runs
        .iter()
        .map(|(i, o, _)| (i.clone(), o.clone()))
        .collect();
    let summary = BTreeMap::from([
        ("trials".into(), trials as f64),
        ("rejected_draws".into(), rejected as f64),
        ("max_iterations".into(), max_of(column(&rows, 2))),
        ("max_iterations_to_2e-6".into(), max_of(column(&rows, 3))),
        (
            "max_abs_final_gap".into(),
            max_of(column(&rows, 6).map(f64::abs)),
        ),
        ("min_cost_decrement".into(), min_of(column(&rows, 7))),
    ]);
    Ok(SweepResult {
        kind: spec.kind,
        seed: spec.seed,
        input_names: names(&["trial", "v0", "v1", "v2"]),
        output_names: names(&[
            "t1_opt",
            "t2_opt",
            "iterations",
            "iterations_to_2e-6",
            "final_step_t1",
            "final_step_t2",
            "final_gap",
            "min_cost_decrement",
        ]),
        rows,
        summary,
        traces: Some(runs.into_iter().map(|(_, _, tr)| tr).collect()),
    })
}

/// Window iteration for every starting variance; one row per window.
pub fn windows_experiment(spec: &SweepSpec) -> Result<SweepResult> {
    spec.expect_kind(SweepKind::Windows)?;
    spec.check_names(&["sigma2", "T", "v0", "v1", "windows"])?;
    let windows = spec.fixed_or("windows", 10.0);
    if windows < 1.0 || windows.fract() != 0.0 {
        return Err(Error::InvalidSpec(
            "windows must be a positive integer".into(),
        ));
    }
    let windows = windows as usize;
    let cells = spec.cells()?;
    let mut rows = Vec::new();
    let mut max_settled = 0.0f64;
    let mut unsettled = 0.0;
    for c in &cells {
        let (s, t, v1, v0) = (sigma2(c), get(c, "T")?, get(c, "v1")?, get(c, "v0")?);
        let it = single::iterate_windows(s, t, v1, v0, windows)?;
        match it.settled_at {
            Some(k) => max_settled = max_settled.max(k as f64),
            None => unsettled += 1.0,
        }
        let settled = it.settled_at.map_or(-1.0, |k| k as f64);
        for k in 0..windows {
            let mut inputs = spec.inputs(c);
            inputs.push(k as f64);
            rows.push((
                inputs,
                vec![
                    it.v0_sequence[k],
                    it.relative_instants[k],
                    it.v0_sequence[k + 1],
                    settled,
                ],
            ));
        }
    }
    let mut input_names = spec.input_names();
    input_names.push("window".into());
    Ok(SweepResult {
        kind: spec.kind,
        seed: spec.seed,
        input_names,
        output_names: names(&["v_start", "relative_instant", "v_end", "settled_at"]),
        rows,
        summary: BTreeMap::from([
            ("max_settled_at".into(), max_settled),
            ("unsettled_starts".into(), unsettled),
        ]),
        traces: None,
    })
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    match spec.kind {
        SweepKind::Gain1 => gain_one_measure(spec),
        SweepKind::Gain2 => gain_two_measures(spec),
        SweepKind::Bounds1 => bounds_comparison(spec),
        SweepKind::InstantsVsT => instants_vs_t(spec),
        SweepKind::DescentStats => descent_statistics(spec),
        SweepKind::Windows => windows_experiment(spec),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleKind {
    One,
    Two,
}

/// One random instance checked against the lattice oracle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleCase {
    pub sigma2: f64,
    pub horizon: f64,
    pub v0: f64,
    pub v1: f64,
    pub v2: Option<f64>,
    pub closed_form: Vec<f64>,
    pub oracle: Vec<f64>,
    pub discrepancy: f64,
    /// Two-measure only: number of lattice CWLM clusters.
    pub cwlm_clusters: usize,
    /// Two-measure only: largest distance, in lattice steps along either
    /// axis, from a lattice CWLM node to the closed-form optimum.
    pub cwlm_spread_steps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub kind: OracleKind,
    pub step: f64,
    pub trials: usize,
    pub seed: u64,
    pub max_discrepancy: f64,
    pub cases: Vec<OracleCase>,
}

/// Random one-measure instances: half with `T` below the critical duration.
fn draw_one(rng: &mut ChaCha8Rng, k: usize) -> (f64, f64, f64, f64) {
    let s = rng.random_range(0.5..2.0);
    let v0 = rng.random_range(0.0..3.0);
    let v1 = rng.random_range(0.0..3.0);
    let tc = single::tcrit_raw(s, v0, v1);
    let t = if k.is_multiple_of(2) && tc > 0.05 {
        tc * rng.random_range(0.1..0.95)
    } else {
        tc + rng.random_range(0.1..3.0)
    };
    (s, t, v0, v1)
}

/// Random two-measure instances cycling through the three regimes.
fn draw_two(rng: &mut ChaCha8Rng, k: usize) -> (f64, f64, f64, f64, f64) {
    let s = rng.random_range(0.5..2.0);
    let v0 = rng.random_range(0.2..3.0);
    let v1 = rng.random_range(0.2..3.0);
    let v2 = rng.random_range(0.2..3.0);
    let t2c = two::t2crit_raw(s, v0, v1, v2);
    let t1c = two::t1crit_raw(s, v0, v1, v2);
    let t = match k % 3 {
        0 => t2c * rng.random_range(0.2..0.95),
        1 => t2c + (t1c - t2c) * rng.random_range(0.1..0.9),
        _ => t1c + rng.random_range(0.5..3.0),
    };
    (s, t, v0, v1, v2)
}

/// Compares closed-form (or descent) optima with the lattice oracle on
/// `trials` seeded random instances.
pub fn oracle_check(kind: OracleKind, step: f64, trials: usize, seed: u64) -> Result<OracleReport> {
    crate::error::positive("step", step)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = DescentOptions::default();
    let mut cases = Vec::with_capacity(trials);
    for k in 0..trials {
        let case = match kind {
            OracleKind::One => {
                let (s, t, v0, v1) = draw_one(&mut rng, k);
                let sol = single::optimal_instant_1(s, t, v0, v1)?;
                let grid = grid_oracle_1(&ModelParams::new(s, t, v0)?, v1, step)?;
                OracleCase {
                    sigma2: s,
                    horizon: t,
                    v0,
                    v1,
                    v2: None,
                    closed_form: vec![sol.t_opt],
                    discrepancy: (sol.t_opt - grid.argmin[0]).abs(),
                    oracle: grid.argmin,
                    cwlm_clusters: 0,
                    cwlm_spread_steps: 0.0,
                }
            }
            OracleKind::Two => {
                let (s, t, v0, v1, v2) = draw_two(&mut rng, k);
                let sol = two::optimize_two(s, t, v0, v1, v2, &opts)?;
                let grid = grid_oracle_2(&ModelParams::new(s, t, v0)?, (v1, v2), step)?;
                let spread = grid
                    .lattice_cwlm
                    .iter()
                    .map(|p| (p[0] - sol.t1_opt).abs().max((p[1] - sol.t2_opt).abs()) / step)
                    .fold(0.0, f64::max);
                OracleCase {
                    sigma2: s,
                    horizon: t,
                    v0,
                    v1,
                    v2: Some(v2),
                    closed_form: vec![sol.t1_opt, sol.t2_opt],
                    discrepancy: (sol.t1_opt - grid.argmin[0])
                        .abs()
                        .max((sol.t2_opt - grid.argmin[1]).abs()),
                    oracle: grid.argmin,
                    cwlm_clusters: grid.cwlm_clusters,
                    cwlm_spread_steps: spread,
                }
            }
        };
        cases.push(case);
    }
    Ok(OracleReport {
        kind,
        step,
        trials,
        seed,
        max_discrepancy: max_of(cases.iter().map(|c| c.discrepancy)).max(0.0),
        cases,
    })
}
