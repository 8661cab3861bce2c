//! Variance bookkeeping for the scalar Kalman filter observing a Brownian
//! motion, and the integral cost of a measurement schedule.
//!
//! Between measurements the estimator variance grows linearly with slope
//! `sigma2`; at a measurement with sensor variance `v` it drops to
//! `v ∥ prior`, where `a ∥ b = ab / (a + b)`. The cost of a schedule is the
//! integral of that piecewise-linear variance over `[0, T]`.

use serde::Serialize;

use crate::error::{self, Error, Result};

/// Diffusion rate, horizon and prior variance of the observed process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    pub sigma2: f64,
    pub horizon: f64,
    pub prior_variance: f64,
}

impl ModelParams {
    pub fn new(sigma2: f64, horizon: f64, prior_variance: f64) -> Result<Self> {
        Ok(Self {
            sigma2: error::positive("sigma2", sigma2)?,
            horizon: error::positive("T", horizon)?,
            prior_variance: error::nonneg_finite("v0", prior_variance)?,
        })
    }
}

/// Noise variances of the sensors, in measurement order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensorSet(Vec<f64>);

impl SensorSet {
    pub fn new(variances: Vec<f64>) -> Result<Self> {
        for &v in &variances {
            error::variance("sensor variance", v)?;
        }
        Ok(Self(variances))
    }

    pub fn variances(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Measurement instants `t1 <= ... <= tn`. Validated against a
/// [`ModelParams`] where it is used.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Schedule(Vec<f64>);

impl Schedule {
    pub fn new(instants: Vec<f64>) -> Self {
        Self(instants)
    }

    pub fn instants(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Rejects instants outside `[0, T]`, non-finite instants and
    /// decreasing sequences. Nothing is clamped.
    pub fn validate(&self, params: &ModelParams) -> Result<()> {
        let mut prev = 0.0;
        for (i, &t) in self.0.iter().enumerate() {
            let index = i + 1;
            if !t.is_finite() {
                return Err(Error::InvalidSchedule {
                    index,
                    value: t,
                    reason: "is not finite",
                });
            }
            if t < 0.0 {
                return Err(Error::InvalidSchedule {
                    index,
                    value: t,
                    reason: "is negative",
                });
            }
            if t > params.horizon {
                return Err(Error::InvalidSchedule {
                    index,
                    value: t,
                    reason: "exceeds the horizon T",
                });
            }
            if t < prev {
                return Err(Error::InvalidSchedule {
                    index,
                    value: t,
                    reason: "precedes the previous instant",
                });
            }
            prev = t;
        }
        Ok(())
    }
}

/// One linear piece of the variance profile: `v(t) = start_variance +
/// sigma2 * (t - start)` on `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Segment {
    pub start: f64,
    pub end: f64,
    pub start_variance: f64,
}

impl Segment {
    pub fn duration(&self) -> f64 {
        self.end - self.start
    }
}

/// The estimator variance over `[0, T]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarianceProfile {
    pub sigma2: f64,
    /// Pieces of positive length tiling `[0, T]`; zero-length pieces between
    /// coincident measurements are omitted.
    pub segments: Vec<Segment>,
    /// Variance right after each measurement.
    pub post_measure_variances: Vec<f64>,
}

impl VarianceProfile {
    /// Right-continuous value of the profile at `t`.
    pub fn value_at(&self, t: f64) -> Option<f64> {
        let seg = self
            .segments
            .iter()
            .rev()
            .find(|s| s.start <= t && t <= s.end)?;
        Some(seg.start_variance + self.sigma2 * (t - seg.start))
    }

    /// Variance at the horizon.
    pub fn end_variance(&self) -> f64 {
        self.segments
            .last()
            .map(|s| s.start_variance + self.sigma2 * s.duration())
            .unwrap_or(f64::NAN)
    }

    pub fn cost(&self) -> CostBreakdown {
        let mut triangular = 0.0;
        let mut rectangular = 0.0;
        for s in &self.segments {
            let d = s.duration();
            triangular += 0.5 * self.sigma2 * d * d;
            rectangular += s.start_variance * d;
        }
        CostBreakdown {
            total: triangular + rectangular,
            triangular,
            rectangular,
        }
    }
}

/// Integral of the variance profile, split into the area of the triangles
/// of slope `sigma2` and the rectangles under them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostBreakdown {
    pub total: f64,
    pub triangular: f64,
    pub rectangular: f64,
}

/// `a ∥ b = ab / (a + b)`, the variance of two independent Gaussian
/// estimates combined. `+inf` is the identity and `0` is absorbing.
pub fn parallel_sum(a: f64, b: f64) -> Result<f64> {
    error::variance("a", a)?;
    error::variance("b", b)?;
    Ok(par(a, b))
}

/// Unchecked parallel sum for hot loops; inputs are assumed `>= 0`.
#[inline]
pub(crate) fn par(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else if a.is_infinite() {
        b
    } else if b.is_infinite() {
        a
    } else {
        a * b / (a + b)
    }
}

/// Error variance of several sensors fired simultaneously.
pub fn equivalent_sensor_variance(variances: &[f64]) -> Result<f64> {
    let (&first, rest) = variances
        .split_first()
        .ok_or(Error::Precondition("sensor list is empty".into()))?;
    let mut acc = error::variance("sensor variance", first)?;
    for &v in rest {
        acc = par(acc, error::variance("sensor variance", v)?);
    }
    Ok(acc)
}

fn check_inputs(params: &ModelParams, sensors: &SensorSet, sched: &Schedule) -> Result<()> {
    if sensors.len() != sched.len() {
        return Err(Error::DimensionMismatch {
            sensors: sensors.len(),
            instants: sched.len(),
        });
    }
    sched.validate(params)
}

/// Post-measurement variances `Γ_k` from the recursion
/// `Γ_k = v_k ∥ (Γ_{k-1} + sigma2 (t_k - t_{k-1}))`, `Γ_0 = v0`, `t_0 = 0`.
pub fn posterior_variance_sequence(
    params: &ModelParams,
    sensors: &SensorSet,
    sched: &Schedule,
) -> Result<Vec<f64>> {
    check_inputs(params, sensors, sched)?;
    let mut gamma = params.prior_variance;
    let mut prev = 0.0;
    Ok(sensors
        .variances()
        .iter()
        .zip(sched.instants())
        .map(|(&v, &t)| {
            gamma = par(v, gamma + params.sigma2 * (t - prev));
            prev = t;
            gamma
        })
        .collect())
}

pub fn variance_profile(
    params: &ModelParams,
    sensors: &SensorSet,
    sched: &Schedule,
) -> Result<VarianceProfile> {
    let post = posterior_variance_sequence(params, sensors, sched)?;
    let mut segments = Vec::with_capacity(post.len() + 1);
    let mut start = 0.0;
    let mut level = params.prior_variance;
    for (&t, &gamma) in sched.instants().iter().zip(&post) {
        if t > start {
            segments.push(Segment {
                start,
                end: t,
                start_variance: level,
            });
        }
        start = t;
        level = gamma;
    }
    // The last piece always exists: a schedule ending at T keeps a
    // zero-length tail only when nothing else covers [0, T].
    if params.horizon > start || segments.is_empty() {
        segments.push(Segment {
            start,
            end: params.horizon,
            start_variance: level,
        });
    }
    Ok(VarianceProfile {
        sigma2: params.sigma2,
        segments,
        post_measure_variances: post,
    })
}

/// Integral of the estimator variance over `[0, T]`.
pub fn cost(params: &ModelParams, sensors: &SensorSet, sched: &Schedule) -> Result<CostBreakdown> {
    Ok(variance_profile(params, sensors, sched)?.cost())
}
