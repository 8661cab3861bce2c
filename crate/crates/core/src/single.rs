//! One measurement in `[0, T]`: closed-form optimum, critical duration,
//! inverse duration map, cost bounds and the repeated-window iteration.
//!
//! Throughout, `sigma2` is the diffusion rate, `v0` the prior variance at
//! the start of the horizon and `v1` the sensor variance (`+inf` allowed
//! where noted, meaning a sensor that carries no information).

use serde::Serialize;

use crate::error::{self, Result};
use crate::kalman::par;

/// Relative distance below which `T` is treated as equal to the critical
/// duration.
pub(crate) const BOUNDARY_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OneRegime {
    /// Measure immediately: `t_opt = 0`, `T < T_crit`.
    Regime1,
    /// Interior optimum: `t_opt > 0`, `T > T_crit`.
    Regime2,
    /// `T = T_crit`; the optimum is still `0`.
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OneMeasureSolution {
    pub t_opt: f64,
    pub regime: OneRegime,
    pub cost_at_opt: f64,
    pub critical_duration: f64,
}

/// Optimal relative instants over a sequence of windows of equal length,
/// each window starting from the variance left by the previous one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindowIteration {
    pub window_length: f64,
    pub sensor_variance: f64,
    /// Variance at the start of each window; one more entry than windows.
    pub v0_sequence: Vec<f64>,
    pub relative_instants: Vec<f64>,
    /// First window from which every computed relative instant is exactly 0.
    pub settled_at: Option<usize>,
}

pub(crate) fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= BOUNDARY_RTOL * a.abs().max(b.abs())
}

pub(crate) fn tcrit_raw(sigma2: f64, v0: f64, v1: f64) -> f64 {
    if v0 == 0.0 {
        0.0
    } else if v1.is_infinite() {
        v0 / (2.0 * sigma2)
    } else {
        v0 * (v0 + v1) / (sigma2 * (v0 + 2.0 * v1))
    }
}

/// `max(0, ·)` of the stationary point of the cost, without regime logic.
pub(crate) fn t_opt_raw(sigma2: f64, horizon: f64, v0: f64, v1: f64) -> f64 {
    if v1.is_infinite() {
        return ((2.0 * sigma2 * horizon - v0) / (3.0 * sigma2)).max(0.0);
    }
    let u = sigma2 * horizon;
    let s = ((u + v0 + v1) * (u + v0 + 9.0 * v1)).sqrt();
    let p = u - 3.0 * v0 - 3.0 * v1;
    let num = if p >= 0.0 {
        s + p
    } else {
        // Same value as s + p, rationalised to avoid cancellation.
        8.0 * (u * (v0 + 2.0 * v1) - v0 * (v0 + v1)) / (s - p)
    };
    (num / (4.0 * sigma2)).max(0.0)
}

pub(crate) fn duration_raw(sigma2: f64, t1: f64, v0: f64, v1: f64) -> f64 {
    if v1.is_infinite() {
        return 1.5 * t1 + v0 / (2.0 * sigma2);
    }
    let base = 2.0 * t1 + (v0 - v1) / sigma2;
    if v1 == 0.0 {
        base
    } else {
        base + 2.0 * v1 * v1 / (sigma2 * (v0 + sigma2 * t1 + 2.0 * v1))
    }
}

pub(crate) fn cost_raw(sigma2: f64, horizon: f64, v0: f64, v1: f64, t1: f64) -> f64 {
    let r = horizon - t1;
    let gamma = par(v1, v0 + sigma2 * t1);
    0.5 * sigma2 * t1 * t1 + v0 * t1 + 0.5 * sigma2 * r * r + gamma * r
}

pub(crate) fn cost_derivative_raw(sigma2: f64, horizon: f64, v0: f64, v1: f64, t1: f64) -> f64 {
    let a = v0 + sigma2 * t1;
    let r = horizon - t1;
    let k = if v1.is_infinite() {
        1.0
    } else if v1 == 0.0 {
        0.0
    } else {
        v1 / (v1 + a)
    };
    sigma2 * t1 + v0 - par(v1, a) - sigma2 * r * (1.0 - k * k)
}

pub(crate) fn solve_raw(sigma2: f64, horizon: f64, v0: f64, v1: f64) -> OneMeasureSolution {
    let tc = tcrit_raw(sigma2, v0, v1);
    let (t_opt, regime) = if near(horizon, tc) {
        (0.0, OneRegime::Boundary)
    } else if horizon < tc {
        (0.0, OneRegime::Regime1)
    } else {
        (t_opt_raw(sigma2, horizon, v0, v1), OneRegime::Regime2)
    };
    OneMeasureSolution {
        t_opt,
        regime,
        cost_at_opt: cost_raw(sigma2, horizon, v0, v1, t_opt),
        critical_duration: tc,
    }
}

fn check(sigma2: f64, v0: f64, v1: f64) -> Result<()> {
    error::positive("sigma2", sigma2)?;
    error::nonneg_finite("v0", v0)?;
    error::variance("v1", v1)?;
    Ok(())
}

/// Horizon below which the optimal instant is 0:
/// `v0 / (sigma2 (v1 / (v0 + v1) + 1))`.
pub fn critical_duration_1(sigma2: f64, v0: f64, v1: f64) -> Result<f64> {
    check(sigma2, v0, v1)?;
    Ok(tcrit_raw(sigma2, v0, v1))
}

/// Optimal measurement instant and its cost. `T` equal to the critical
/// duration (to 1e-12 relative) is labelled [`OneRegime::Boundary`].
pub fn optimal_instant_1(
    sigma2: f64,
    horizon: f64,
    v0: f64,
    v1: f64,
) -> Result<OneMeasureSolution> {
    check(sigma2, v0, v1)?;
    error::positive("T", horizon)?;
    Ok(solve_raw(sigma2, horizon, v0, v1))
}

/// Horizon whose optimal instant is `t1`. Inverse of
/// [`optimal_instant_1`] for `t1 > 0`; equals the critical duration at 0.
pub fn duration_from_instant(sigma2: f64, t1: f64, v0: f64, v1: f64) -> Result<f64> {
    check(sigma2, v0, v1)?;
    error::nonneg_finite("t1", t1)?;
    Ok(duration_raw(sigma2, t1, v0, v1))
}

/// Cost of measuring once at `t1`.
pub fn one_measure_cost(sigma2: f64, horizon: f64, v0: f64, v1: f64, t1: f64) -> Result<f64> {
    check(sigma2, v0, v1)?;
    error::positive("T", horizon)?;
    instant_in_horizon(t1, horizon)?;
    Ok(cost_raw(sigma2, horizon, v0, v1, t1))
}

/// Derivative of [`one_measure_cost`] with respect to `t1`.
pub fn one_measure_cost_derivative(
    sigma2: f64,
    horizon: f64,
    v0: f64,
    v1: f64,
    t1: f64,
) -> Result<f64> {
    check(sigma2, v0, v1)?;
    error::positive("T", horizon)?;
    instant_in_horizon(t1, horizon)?;
    Ok(cost_derivative_raw(sigma2, horizon, v0, v1, t1))
}

fn instant_in_horizon(t1: f64, horizon: f64) -> Result<()> {
    error::nonneg_finite("t1", t1)?;
    if t1 > horizon {
        return Err(crate::Error::InvalidSchedule {
            index: 1,
            value: t1,
            reason: "exceeds the horizon T",
        });
    }
    Ok(())
}

/// `sqrt(sigma2 (v0 ∥ v1) T^3)`, strictly below the cost of any schedule
/// with one measurement.
pub fn lower_bound(sigma2: f64, horizon: f64, v0: f64, v1: f64) -> Result<f64> {
    check(sigma2, v0, v1)?;
    error::positive("T", horizon)?;
    Ok((sigma2 * par(v0, v1) * horizon.powi(3)).sqrt())
}

/// `v0 T + sigma2 T^2 / 2`, the cost of measuring at `T` (or not at all).
pub fn upper_bound(sigma2: f64, horizon: f64, v0: f64) -> Result<f64> {
    error::positive("sigma2", sigma2)?;
    error::positive("T", horizon)?;
    error::nonneg_finite("v0", v0)?;
    Ok(v0 * horizon + 0.5 * sigma2 * horizon * horizon)
}

pub(crate) fn v0_crit_raw(sigma2: f64, horizon: f64, v1: f64) -> f64 {
    let u = sigma2 * horizon;
    if v1.is_infinite() {
        return 2.0 * u;
    }
    let root = ((v1 - u) * (v1 - u) + 8.0 * u * v1).sqrt();
    if u >= v1 {
        0.5 * (u - v1 + root)
    } else {
        4.0 * u * v1 / (root + v1 - u)
    }
}

fn window_check(sigma2: f64, horizon: f64, v1: f64) -> Result<()> {
    error::positive("sigma2", sigma2)?;
    error::positive("T", horizon)?;
    error::variance("v1", v1)?;
    Ok(())
}

/// Smallest prior variance for which measuring at the start of a window of
/// length `T` is optimal.
pub fn window_v0_crit(sigma2: f64, horizon: f64, v1: f64) -> Result<f64> {
    window_check(sigma2, horizon, v1)?;
    Ok(v0_crit_raw(sigma2, horizon, v1))
}

/// Fixed point of [`window_map`]; `+inf` when `v1 = +inf`.
pub fn window_v0_stationary(sigma2: f64, horizon: f64, v1: f64) -> Result<f64> {
    window_check(sigma2, horizon, v1)?;
    let u = sigma2 * horizon;
    Ok(0.5 * (u + (u * u + 4.0 * u * v1).sqrt()))
}

pub(crate) fn window_instant_raw(sigma2: f64, horizon: f64, v1: f64, v0: f64) -> f64 {
    if v0 >= v0_crit_raw(sigma2, horizon, v1) {
        0.0
    } else {
        t_opt_raw(sigma2, horizon, v0, v1)
    }
}

pub(crate) fn window_map_raw(sigma2: f64, horizon: f64, v1: f64, v0: f64) -> f64 {
    let t = window_instant_raw(sigma2, horizon, v1, v0);
    par(v1, v0 + sigma2 * t) + sigma2 * (horizon - t)
}

/// Variance at the end of a window of length `T` that starts at `v0` and
/// contains one optimally placed measurement.
pub fn window_map(sigma2: f64, horizon: f64, v1: f64, v0: f64) -> Result<f64> {
    window_check(sigma2, horizon, v1)?;
    error::nonneg_finite("v0", v0)?;
    Ok(window_map_raw(sigma2, horizon, v1, v0))
}

pub fn iterate_windows(
    sigma2: f64,
    horizon: f64,
    v1: f64,
    v0: f64,
    max_windows: usize,
) -> Result<WindowIteration> {
    window_check(sigma2, horizon, v1)?;
    error::nonneg_finite("v0", v0)?;
    if max_windows == 0 {
        return Err(crate::Error::Precondition(
            "max_windows must be at least 1".into(),
        ));
    }
    let mut v0_sequence = Vec::with_capacity(max_windows + 1);
    let mut relative_instants = Vec::with_capacity(max_windows);
    let mut v = v0;
    v0_sequence.push(v);
    for _ in 0..max_windows {
        let t = window_instant_raw(sigma2, horizon, v1, v);
        v = par(v1, v + sigma2 * t) + sigma2 * (horizon - t);
        relative_instants.push(t);
        v0_sequence.push(v);
    }
    let zeros = relative_instants
        .iter()
        .rev()
        .take_while(|&&t| t == 0.0)
        .count();
    let settled_at = (zeros > 0).then(|| max_windows - zeros);
    Ok(WindowIteration {
        window_length: horizon,
        sensor_variance: v1,
        v0_sequence,
        relative_instants,
        settled_at,
    })
}
