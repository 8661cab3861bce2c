//! Optimal measurement schedules for estimating a scalar Brownian motion
//! with a Kalman filter over a finite horizon.
//!
//! The estimator variance grows with slope `sigma2` between measurements and
//! drops at each one; the cost of a schedule is the integral of the variance
//! over `[0, T]`. [`single`] solves the one-measure problem in closed form,
//! [`two`] solves the two-measure problem through its cubic critical
//! equation and a coordinate descent, and [`numerics`] holds the generic
//! kernels and the brute-force grid oracles used to check both.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod kalman;
pub mod numerics;
pub mod single;
pub mod two;

pub use error::{Error, Result};
pub use kalman::{
    cost, equivalent_sensor_variance, parallel_sum, posterior_variance_sequence, variance_profile,
    CostBreakdown, ModelParams, Schedule, Segment, SensorSet, VarianceProfile,
};
pub use single::{optimal_instant_1, OneMeasureSolution, OneRegime, WindowIteration};
pub use two::{optimize_two, DescentOptions, DescentTrace, TwoMeasureSolution, TwoRegime};
