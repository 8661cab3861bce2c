//! Two measurements in `[0, T]` with sensor variances `v1` then `v2`.
//!
//! The optimum is `(0, 0)` for short horizons (regime 1), `(0, t2)` for
//! intermediate ones (regime 2) and interior `0 < t1 < t2 < T` beyond the
//! first-measure critical duration (regime 3). Regime 3 is solved by
//! coordinate descent and cross-checked against a bisection on the
//! first-order system `I1(t1) = I2(t1)`.

use serde::Serialize;

use crate::error::{self, Error, Result};
use crate::kalman::par;
use crate::numerics::{bisect_root, golden_section_min};
use crate::single::{self, near};

/// Coefficients of `A x^3 + B x^2 + C x + D`, whose largest sign change
/// (times `1/sigma2`) is the second-measure instant on the regime 2/3
/// boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CubicCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl CubicCoeffs {
    pub fn eval(&self, x: f64) -> f64 {
        ((self.a * x + self.b) * x + self.c) * x + self.d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TwoRegime {
    Regime1,
    Regime2,
    Regime3,
}

/// One coordinate-descent iteration: the point reached, its cost and the
/// size of each coordinate move.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DescentStep {
    pub t1: f64,
    pub t2: f64,
    pub cost: f64,
    pub step_t1: f64,
    pub step_t2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DescentTrace {
    pub iterations: Vec<DescentStep>,
    pub converged: bool,
    /// `I1(t1) - I2(t1)` at the last iterate.
    pub final_gap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DescentOptions {
    /// Both coordinate moves must fall below this to stop.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Bracket width for the golden-section update of `t1`.
    pub golden_tolerance: f64,
    /// Largest accepted gap between descent and bisection on `t1`.
    pub crosscheck_tolerance: f64,
    pub keep_trace: bool,
}

impl Default for DescentOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-9,
            max_iterations: 200,
            golden_tolerance: 1e-10,
            crosscheck_tolerance: 1e-5,
            keep_trace: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoMeasureSolution {
    pub t1_opt: f64,
    pub t2_opt: f64,
    pub regime: TwoRegime,
    /// `T` equals one of the critical durations to 1e-12 relative.
    pub on_boundary: bool,
    pub cost_at_opt: f64,
    pub t2_crit: f64,
    pub t1_crit: f64,
    pub trace: Option<DescentTrace>,
}

pub(crate) fn coeffs_raw(v0: f64, v1: f64, v2: f64) -> CubicCoeffs {
    let s01 = v0 + v1;
    let s012 = v0 + 2.0 * v1;
    let a = -s01 * s01 * s012;
    let b = s01 * (v0.powi(3) - 3.0 * (s01 * s012 * v2 + v0 * v1 * v1));
    let c = v2 * b + v0 * v0 * (2.0 * v0 + 3.0 * v1) * (v0 * v1 + v0 * v2 + v1 * v2);
    let d = v0 * v0 * (v1 + v2) * s01 * (v0 * v1 + 2.0 * v0 * v2 + 3.0 * v1 * v2);
    CubicCoeffs { a, b, c, d }
}

pub(crate) fn t21_raw(sigma2: f64, v0: f64, v1: f64, v2: f64) -> f64 {
    if v0 == 0.0 {
        return 0.0;
    }
    let k = coeffs_raw(v0, v1, v2);
    // Nonnegative on [0, x*], negative beyond; hi is a Cauchy root bound.
    let (mut lo, mut hi) = (0.0, 1.0 + (k.b.abs() + k.c.abs() + k.d.abs()) / k.a.abs());
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if k.eval(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo / sigma2
}

pub(crate) fn t2crit_raw(sigma2: f64, v0: f64, v1: f64, v2: f64) -> f64 {
    single::tcrit_raw(sigma2, par(v0, v1), v2)
}

pub(crate) fn t1crit_raw(sigma2: f64, v0: f64, v1: f64, v2: f64) -> f64 {
    single::duration_raw(sigma2, t21_raw(sigma2, v0, v1, v2), par(v0, v1), v2)
}

fn regime_raw(horizon: f64, t2c: f64, t1c: f64) -> TwoRegime {
    if horizon <= t2c || near(horizon, t2c) {
        TwoRegime::Regime1
    } else if horizon <= t1c || near(horizon, t1c) {
        TwoRegime::Regime2
    } else {
        TwoRegime::Regime3
    }
}

/// Best gap `t2 - t1` once the first measurement is fixed at `t1`; zero
/// when `t1 >= T`.
pub(crate) fn i1_raw(sigma2: f64, horizon: f64, v0: f64, v1: f64, v2: f64, t1: f64) -> f64 {
    if t1 >= horizon {
        0.0
    } else {
        single::t_opt_raw(sigma2, horizon - t1, par(v0 + sigma2 * t1, v1), v2)
    }
}

/// Gap `t2 - t1` at which `t1` stops being optimal on its own line.
pub(crate) fn i2_raw(sigma2: f64, v0: f64, v1: f64, v2: f64, t1: f64) -> f64 {
    t21_raw(sigma2, v0 + sigma2 * t1, v1, v2)
}

pub(crate) fn cost_raw(
    sigma2: f64,
    horizon: f64,
    v0: f64,
    v1: f64,
    v2: f64,
    t1: f64,
    t2: f64,
) -> f64 {
    let gap = t2 - t1;
    let rest = horizon - t2;
    let g1 = par(v1, v0 + sigma2 * t1);
    let g2 = par(v2, g1 + sigma2 * gap);
    0.5 * sigma2 * (t1 * t1 + gap * gap + rest * rest) + v0 * t1 + g1 * gap + g2 * rest
}

pub(crate) fn dj_dt1_raw(
    sigma2: f64,
    horizon: f64,
    v0: f64,
    v1: f64,
    v2: f64,
    t1: f64,
    t2: f64,
) -> f64 {
    let a = v0 + sigma2 * t1;
    let k = if v1 == 0.0 { 0.0 } else { v1 / (v1 + a) };
    let gap = t2 - t1;
    let rest = horizon - t2;
    let p = par(v1, a) + sigma2 * gap;
    let r = if v2 == 0.0 { 0.0 } else { v2 / (v2 + p) };
    (1.0 - k) * (a - sigma2 * (1.0 + k) * (gap + rest * r * r))
}

fn check_two(sigma2: f64, v0: f64, v1: f64, v2: f64) -> Result<()> {
    error::positive("sigma2", sigma2)?;
    error::nonneg_finite("v0", v0)?;
    error::nonneg_finite("v1", v1)?;
    error::nonneg_finite("v2", v2)?;
    Ok(())
}

fn check_schedule(horizon: f64, t1: f64, t2: f64) -> Result<()> {
    error::positive("T", horizon)?;
    crate::kalman::Schedule::new(vec![t1, t2]).validate(&crate::kalman::ModelParams {
        sigma2: 1.0,
        horizon,
        prior_variance: 0.0,
    })
}

pub fn cubic_coeffs(v0: f64, v1: f64, v2: f64) -> Result<CubicCoeffs> {
    error::nonneg_finite("v0", v0)?;
    error::nonneg_finite("v1", v1)?;
    error::nonneg_finite("v2", v2)?;
    Ok(coeffs_raw(v0, v1, v2))
}

/// Largest sign change of the cubic, divided by `sigma2`; 0 when `v0 = 0`.
pub fn t21_crit(sigma2: f64, v0: f64, v1: f64, v2: f64) -> Result<f64> {
    check_two(sigma2, v0, v1, v2)?;
    Ok(t21_raw(sigma2, v0, v1, v2))
}

/// Horizon up to which `(0, 0)` is optimal.
pub fn critical_duration_2_second(sigma2: f64, v0: f64, v1: f64, v2: f64) -> Result<f64> {
    check_two(sigma2, v0, v1, v2)?;
    Ok(t2crit_raw(sigma2, v0, v1, v2))
}

/// Horizon up to which the first measurement stays at 0.
pub fn critical_duration_2_first(sigma2: f64, v0: f64, v1: f64, v2: f64) -> Result<f64> {
    check_two(sigma2, v0, v1, v2)?;
    Ok(t1crit_raw(sigma2, v0, v1, v2))
}

/// Regime of the optimum; a horizon equal to a critical duration (to 1e-12
/// relative) falls in the lower regime.
pub fn classify_regime(sigma2: f64, horizon: f64, v0: f64, v1: f64, v2: f64) -> Result<TwoRegime> {
    check_two(sigma2, v0, v1, v2)?;
    error::positive("T", horizon)?;
    Ok(regime_raw(
        horizon,
        t2crit_raw(sigma2, v0, v1, v2),
        t1crit_raw(sigma2, v0, v1, v2),
    ))
}

/// `I1(t1)`: optimal gap to the second measurement given the first at `t1`.
pub fn best_gap(sigma2: f64, horizon: f64, v0: f64, v1: f64, v2: f64, t1: f64) -> Result<f64> {
    check_two(sigma2, v0, v1, v2)?;
    error::positive("T", horizon)?;
    error::nonneg_finite("t1", t1)?;
    Ok(i1_raw(sigma2, horizon, v0, v1, v2, t1))
}

/// `I2(t1)`: the critical gap for a first measurement at `t1`.
pub fn critical_gap(sigma2: f64, v0: f64, v1: f64, v2: f64, t1: f64) -> Result<f64> {
    check_two(sigma2, v0, v1, v2)?;
    error::nonneg_finite("t1", t1)?;
    Ok(i2_raw(sigma2, v0, v1, v2, t1))
}

pub fn two_measure_cost(
    sigma2: f64,
    horizon: f64,
    v0: f64,
    v1: f64,
    v2: f64,
    t1: f64,
    t2: f64,
) -> Result<f64> {
    check_two(sigma2, v0, v1, v2)?;
    check_schedule(horizon, t1, t2)?;
    Ok(cost_raw(sigma2, horizon, v0, v1, v2, t1, t2))
}

/// Partial derivative of [`two_measure_cost`] with respect to `t1`.
pub fn dj_dt1(
    sigma2: f64,
    horizon: f64,
    v0: f64,
    v1: f64,
    v2: f64,
    t1: f64,
    t2: f64,
) -> Result<f64> {
    check_two(sigma2, v0, v1, v2)?;
    check_schedule(horizon, t1, t2)?;
    Ok(dj_dt1_raw(sigma2, horizon, v0, v1, v2, t1, t2))
}

/// Regime-3 optimum from the first-order system, by bisection of
/// `I1 - I2` on `[0, T]`.
pub fn solve_system_bisection(
    sigma2: f64,
    horizon: f64,
    v0: f64,
    v1: f64,
    v2: f64,
) -> Result<(f64, f64)> {
    check_two(sigma2, v0, v1, v2)?;
    error::positive("T", horizon)?;
    let t1c = t1crit_raw(sigma2, v0, v1, v2);
    if regime_raw(horizon, t2crit_raw(sigma2, v0, v1, v2), t1c) != TwoRegime::Regime3 {
        return Err(Error::Precondition(format!(
            "bisection needs regime 3, i.e. T = {horizon} above T1_crit = {t1c}"
        )));
    }
    bisection_raw(sigma2, horizon, v0, v1, v2)
}

fn bisection_raw(sigma2: f64, horizon: f64, v0: f64, v1: f64, v2: f64) -> Result<(f64, f64)> {
    let g = |t1| i1_raw(sigma2, horizon, v0, v1, v2, t1) - i2_raw(sigma2, v0, v1, v2, t1);
    let t1 = bisect_root(g, 0.0, horizon, 1e-13)?;
    Ok((t1, t1 + i2_raw(sigma2, v0, v1, v2, t1)))
}

/// Optimal pair of measurement instants.
///
/// Regime 3 runs the coordinate descent: `t2` jumps to the one-measure
/// optimum after `t1`, then `t1` is minimised by golden section on
/// `[0, t2]`. A move is kept only if it does not raise the cost. The result
/// must agree with [`solve_system_bisection`] to
/// `options.crosscheck_tolerance`.
pub fn optimize_two(
    sigma2: f64,
    horizon: f64,
    v0: f64,
    v1: f64,
    v2: f64,
    options: &DescentOptions,
) -> Result<TwoMeasureSolution> {
    check_two(sigma2, v0, v1, v2)?;
    error::positive("T", horizon)?;
    error::positive("tolerance", options.tolerance)?;
    error::positive("golden_tolerance", options.golden_tolerance)?;
    error::positive("crosscheck_tolerance", options.crosscheck_tolerance)?;

    let t2c = t2crit_raw(sigma2, v0, v1, v2);
    let t1c = t1crit_raw(sigma2, v0, v1, v2);
    let on_boundary = near(horizon, t2c) || near(horizon, t1c);
    let j = |a: f64, b: f64| cost_raw(sigma2, horizon, v0, v1, v2, a, b);
    let solution = |t1, t2, regime, trace| TwoMeasureSolution {
        t1_opt: t1,
        t2_opt: t2,
        regime,
        on_boundary,
        cost_at_opt: j(t1, t2),
        t2_crit: t2c,
        t1_crit: t1c,
        trace,
    };

    let mut regime = regime_raw(horizon, t2c, t1c);
    if regime == TwoRegime::Regime1 {
        return Ok(solution(0.0, 0.0, regime, None));
    }
    let t2_start = single::t_opt_raw(sigma2, horizon, par(v0, v1), v2);
    // The cubic is nonnegative exactly up to its largest root, so this is
    // its sign test at sigma2 * t2_start; comparing with the root also
    // covers v0 = v1 = 0, where every coefficient vanishes.
    if regime == TwoRegime::Regime2 || t2_start <= t21_raw(sigma2, v0, v1, v2) {
        regime = TwoRegime::Regime2;
        return Ok(solution(0.0, t2_start, regime, None));
    }

    let trace = descend(sigma2, horizon, v0, v1, v2, t2_start, options)?;
    let last = *trace.iterations.last().expect("descent records its start");
    let (bt1, _) = bisection_raw(sigma2, horizon, v0, v1, v2)?;
    if (last.t1 - bt1).abs() > options.crosscheck_tolerance {
        return Err(Error::Discrepancy {
            descent: last.t1,
            bisection: bt1,
        });
    }
    let trace = options.keep_trace.then_some(trace);
    Ok(solution(last.t1, last.t2, regime, trace))
}

fn descend(
    sigma2: f64,
    horizon: f64,
    v0: f64,
    v1: f64,
    v2: f64,
    t2_start: f64,
    options: &DescentOptions,
) -> Result<DescentTrace> {
    let j = |a: f64, b: f64| cost_raw(sigma2, horizon, v0, v1, v2, a, b);
    let line_min = |t2: f64| golden_section_min(|a| j(a, t2), 0.0, t2, options.golden_tolerance);

    let mut t2 = t2_start;
    let mut t1 = line_min(t2)?;
    let mut cost = j(t1, t2);
    let mut iterations = vec![DescentStep {
        t1,
        t2,
        cost,
        step_t1: t1,
        step_t2: t2,
    }];
    let mut converged = t1 < options.tolerance && t2 < options.tolerance;

    while !converged {
        if iterations.len() >= options.max_iterations {
            return Err(Error::NoConvergence {
                iterations: iterations.len(),
            });
        }
        let (old1, old2) = (t1, t2);

        let cand = t1 + i1_raw(sigma2, horizon, v0, v1, v2, t1);
        if j(t1, cand) <= cost {
            t2 = cand;
            cost = j(t1, t2);
        }
        let cand = line_min(t2)?;
        if j(cand, t2) <= cost {
            t1 = cand;
            cost = j(t1, t2);
        }

        let step = DescentStep {
            t1,
            t2,
            cost,
            step_t1: (t1 - old1).abs(),
            step_t2: (t2 - old2).abs(),
        };
        converged = step.step_t1 < options.tolerance && step.step_t2 < options.tolerance;
        iterations.push(step);
    }
    Ok(DescentTrace {
        iterations,
        converged,
        final_gap: i1_raw(sigma2, horizon, v0, v1, v2, t1) - i2_raw(sigma2, v0, v1, v2, t1),
    })
}
