//! Golden-section search, bisection, central differences and the
//! brute-force lattice oracles that check the closed forms.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{self, Error, Result};
use crate::kalman::ModelParams;
use crate::{single, two};

/// `(sqrt(5) - 1) / 2`, the factor by which each golden-section step
/// shrinks the bracket.
pub const GOLDEN_RATIO_CONJUGATE: f64 = 0.618_033_988_749_894_9;

/// Everything a golden-section run did, for inspection in tests.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GoldenRun {
    pub x: f64,
    /// Bracket after each step, starting with `(lo, hi)`.
    pub brackets: Vec<(f64, f64)>,
    pub evaluations: usize,
}

/// Evaluation budget for bracketing `[lo, hi]` down to `tol`.
pub fn golden_evaluation_bound(lo: f64, hi: f64, tol: f64) -> usize {
    let steps = ((hi - lo) / tol).ln() / (1.0 / GOLDEN_RATIO_CONJUGATE).ln();
    steps.max(0.0).ceil() as usize + 2
}

pub fn golden_section_observed<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<GoldenRun> {
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
        return Err(Error::Domain {
            param: "lo",
            value: lo,
            reason: "bracket must satisfy lo < hi, both finite",
        });
    }
    error::positive("tol", tol)?;

    let budget = golden_evaluation_bound(lo, hi, tol);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - GOLDEN_RATIO_CONJUGATE * (b - a);
    let mut d = a + GOLDEN_RATIO_CONJUGATE * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut evaluations = 2;
    let mut brackets = vec![(a, b)];
    while b - a > 2.0 * tol && evaluations < budget {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN_RATIO_CONJUGATE * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN_RATIO_CONJUGATE * (b - a);
            fd = f(d);
        }
        evaluations += 1;
        brackets.push((a, b));
    }
    Ok(GoldenRun {
        x: 0.5 * (a + b),
        brackets,
        evaluations,
    })
}

/// Minimiser of a quasi-convex `f` on `[lo, hi]` to within `tol`.
pub fn golden_section_min<F: FnMut(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    Ok(golden_section_observed(f, lo, hi, tol)?.x)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BisectionRun {
    pub root: f64,
    /// Bracket after each halving, starting with `(lo, hi)`.
    pub brackets: Vec<(f64, f64)>,
}

/// Bisection that keeps `g(hi)` at its initial sign and moves `lo` on
/// every other value, so a zero at `lo` still yields the largest root.
pub fn bisect_root_observed<G: FnMut(f64) -> f64>(
    mut g: G,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<BisectionRun> {
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
        return Err(Error::Domain {
            param: "lo",
            value: lo,
            reason: "bracket must satisfy lo < hi, both finite",
        });
    }
    error::positive("tol", tol)?;
    let (glo, ghi) = (g(lo), g(hi));
    if ghi == 0.0 {
        return Ok(BisectionRun {
            root: hi,
            brackets: vec![(lo, hi)],
        });
    }
    if glo.is_nan() || ghi.is_nan() || glo * ghi > 0.0 {
        return Err(Error::Bracket { what: "g", lo, hi });
    }
    let hi_positive = ghi > 0.0;
    let (mut a, mut b) = (lo, hi);
    let mut brackets = vec![(a, b)];
    while b - a > 2.0 * tol {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let gm = g(mid);
        if gm != 0.0 && (gm > 0.0) == hi_positive {
            b = mid;
        } else {
            a = mid;
        }
        brackets.push((a, b));
    }
    Ok(BisectionRun {
        root: 0.5 * (a + b),
        brackets,
    })
}

/// Root of `g` on `[lo, hi]` to within `tol`; `g(lo)` and `g(hi)` must not
/// share a strict sign.
pub fn bisect_root<G: FnMut(f64) -> f64>(g: G, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    Ok(bisect_root_observed(g, lo, hi, tol)?.root)
}

/// `(f(x + h) - f(x - h)) / (2h)`.
pub fn finite_diff<F: FnMut(f64) -> f64>(mut f: F, x: f64, h: f64) -> Result<f64> {
    error::positive("h", h)?;
    let (up, down) = (f(x + h), f(x - h));
    if !(up.is_finite() && down.is_finite()) {
        return Err(Error::Domain {
            param: "x",
            value: x,
            reason: "x ± h leaves the domain of f",
        });
    }
    Ok((up - down) / (2.0 * h))
}

/// Outcome of a lattice search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridOracleResult {
    /// `[t1]` or `[t1, t2]`.
    pub argmin: Vec<f64>,
    pub min_value: f64,
    pub grid_step: f64,
    /// Whether refinement improved on the best lattice node.
    pub refined: bool,
    /// Lattice nodes no larger than any of their axis neighbours (two-measure
    /// oracle only).
    pub lattice_cwlm: Vec<[f64; 2]>,
    /// Number of 8-connected groups formed by `lattice_cwlm`.
    pub cwlm_clusters: usize,
}

/// `0, step, 2 step, ...` below `T`, then `T` itself.
fn lattice(horizon: f64, step: f64) -> Vec<f64> {
    let mut nodes: Vec<f64> = (0..)
        .map(|i| i as f64 * step)
        .take_while(|&t| t < horizon * (1.0 - 1e-12))
        .collect();
    nodes.push(horizon);
    nodes
}

const REFINE_TOL: f64 = 1e-12;

/// Exhaustive search of the one-measure cost over the `step` lattice of
/// `[0, T]`, refined by golden section around the best node.
pub fn grid_oracle_1(params: &ModelParams, sensor: f64, step: f64) -> Result<GridOracleResult> {
    error::variance("v1", sensor)?;
    error::positive("step", step)?;
    let (s, t, v0) = (params.sigma2, params.horizon, params.prior_variance);
    let j = |x: f64| single::cost_raw(s, t, v0, sensor, x);
    let nodes = lattice(t, step);
    let values: Vec<f64> = nodes.par_iter().map(|&x| j(x)).collect();
    let best = argmin_index(&values);

    let lo = nodes[best.saturating_sub(1)];
    let hi = nodes[(best + 1).min(nodes.len() - 1)];
    let mut argmin = nodes[best];
    let mut min_value = values[best];
    let mut refined = false;
    if hi > lo {
        let x = golden_section_min(j, lo, hi, REFINE_TOL)?;
        if j(x) < min_value {
            argmin = x;
            min_value = j(x);
            refined = true;
        }
    }
    Ok(GridOracleResult {
        argmin: vec![argmin],
        min_value,
        grid_step: step,
        refined,
        lattice_cwlm: Vec::new(),
        cwlm_clusters: 0,
    })
}

/// First index of the smallest value; ties resolve to the lowest index so
/// the result does not depend on evaluation order.
fn argmin_index(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v < values[best] {
            best = i;
        }
    }
    best
}

const CWLM_TOL: f64 = 1e-12;

/// Exhaustive search of the two-measure cost over the lattice of the
/// triangle `0 <= t1 <= t2 <= T`, followed by coordinatewise refinement.
/// Also reports the lattice coordinatewise local minima.
pub fn grid_oracle_2(
    params: &ModelParams,
    sensors: (f64, f64),
    step: f64,
) -> Result<GridOracleResult> {
    let (v1, v2) = sensors;
    error::nonneg_finite("v1", v1)?;
    error::nonneg_finite("v2", v2)?;
    error::positive("step", step)?;
    let (s, t, v0) = (params.sigma2, params.horizon, params.prior_variance);
    let j = |a: f64, b: f64| two::cost_raw(s, t, v0, v1, v2, a, b);
    let nodes = lattice(t, step);
    let n = nodes.len();

    // rows[i][k] = J(nodes[i], nodes[i + k]).
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| nodes[i..].iter().map(|&b| j(nodes[i], b)).collect())
        .collect();
    let at = |i: usize, jj: usize| rows[i][jj - i];

    let mut best = (0, 0);
    for (i, row) in rows.iter().enumerate() {
        for (k, &v) in row.iter().enumerate() {
            if v < at(best.0, best.1) {
                best = (i, i + k);
            }
        }
    }

    let cwlm: Vec<(usize, usize)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let at = &at;
            (i..n).filter_map(move |jj| {
                let v = at(i, jj) - CWLM_TOL;
                let neighbours = [
                    (i > 0).then(|| at(i - 1, jj)),
                    (i < jj).then(|| at(i + 1, jj)),
                    (jj > i).then(|| at(i, jj - 1)),
                    (jj + 1 < n).then(|| at(i, jj + 1)),
                ];
                neighbours
                    .iter()
                    .flatten()
                    .all(|&w| v <= w)
                    .then_some((i, jj))
            })
        })
        .collect();
    let cwlm_clusters = count_clusters(&cwlm);

    let (mut a, mut b) = (nodes[best.0], nodes[best.1]);
    let mut min_value = at(best.0, best.1);
    let mut refined = false;
    for _ in 0..50 {
        let before = (a, b);
        let lo = (a - step).max(0.0);
        let hi = (a + step).min(b);
        if hi > lo {
            let x = golden_section_min(|x| j(x, b), lo, hi, REFINE_TOL)?;
            if j(x, b) < min_value {
                a = x;
                min_value = j(a, b);
                refined = true;
            }
        }
        let lo = (b - step).max(a);
        let hi = (b + step).min(t);
        if hi > lo {
            let y = golden_section_min(|y| j(a, y), lo, hi, REFINE_TOL)?;
            if j(a, y) < min_value {
                b = y;
                min_value = j(a, b);
                refined = true;
            }
        }
        if before == (a, b) {
            break;
        }
    }

    Ok(GridOracleResult {
        argmin: vec![a, b],
        min_value,
        grid_step: step,
        refined,
        lattice_cwlm: cwlm.iter().map(|&(i, jj)| [nodes[i], nodes[jj]]).collect(),
        cwlm_clusters,
    })
}

/// Connected components of lattice nodes under 8-neighbour adjacency.
fn count_clusters(nodes: &[(usize, usize)]) -> usize {
    let mut seen = vec![false; nodes.len()];
    let mut clusters = 0;
    for start in 0..nodes.len() {
        if seen[start] {
            continue;
        }
        clusters += 1;
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(k) = stack.pop() {
            let (i, j) = nodes[k];
            for (m, &(p, q)) in nodes.iter().enumerate() {
                if !seen[m] && i.abs_diff(p) <= 1 && j.abs_diff(q) <= 1 {
                    seen[m] = true;
                    stack.push(m);
                }
            }
        }
    }
    clusters
}
