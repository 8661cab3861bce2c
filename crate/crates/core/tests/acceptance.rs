//! Acceptance gate: every criterion prints one PASS/FAIL line, followed by
//! the individual checks that failed. Exits nonzero if any criterion fails.

use std::f64::consts::SQRT_2;
use std::time::{Duration, Instant};

use measure_sched::experiments::{
    bounds_comparison, descent_statistics, gain_one_measure, gain_two_measures, oracle_check, Axis,
    OracleKind, SweepKind, SweepSpec,
};
use measure_sched::numerics::{bisect_root, finite_diff};
use measure_sched::single::{
    critical_duration_1, iterate_windows, one_measure_cost, one_measure_cost_derivative,
    optimal_instant_1, window_v0_stationary,
};
use measure_sched::two::{
    critical_duration_2_first, critical_duration_2_second, cubic_coeffs, dj_dt1, optimize_two,
    t21_crit, two_measure_cost, DescentOptions, TwoRegime,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Default)]
struct Criterion {
    checks: Vec<(String, bool)>,
}

impl Criterion {
    fn check(&mut self, what: impl Into<String>, ok: bool) {
        self.checks.push((what.into(), ok));
    }

    fn within(&mut self, what: &str, got: f64, want: f64, tol: f64) {
        let ok = (got - want).abs() <= tol;
        self.check(format!("{what}: got {got:.10}, want {want} ± {tol:e}"), ok);
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

fn spec(kind: SweepKind, fixed: &[(&str, f64)], swept: Vec<Axis>) -> SweepSpec {
    SweepSpec {
        kind,
        fixed: fixed.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        swept,
        seed: 0,
        trials: None,
    }
}

/// (label, T, v0, v1, v2, t1, t2, T1_crit)
type WorkedRow = (&'static str, f64, f64, f64, f64, f64, f64, Option<f64>);

fn worked_examples(c: &mut Criterion) {
    let opts = DescentOptions::default();
    let start = Instant::now();
    let rows: [WorkedRow; 5] = [
        ("b", 71.0 / 18.0, 1.0, 1.0, 1.0, 1.0401, 2.4092, None),
        ("c", 317.0 / 76.0, 3.0, 1.0, 1.0, 0.0, 2.0, Some(4.65)),
        (
            "d",
            317.0 / 76.0,
            1.0,
            3.0,
            1.0,
            1.1211,
            2.985,
            Some(1.1878),
        ),
        (
            "e",
            123.0 / 34.0,
            1.0,
            1.0,
            3.0,
            1.1968,
            2.4269,
            Some(0.8630),
        ),
        ("f", 3.5, 0.0, 1.0, 1.0, 1.5107, 2.4196, Some(0.0)),
    ];
    for (label, t, v0, v1, v2, t1, t2, t1c) in rows {
        match optimize_two(1.0, t, v0, v1, v2, &opts) {
            Ok(sol) => {
                c.within(&format!("row {label} t1_opt"), sol.t1_opt, t1, 1e-3);
                c.within(&format!("row {label} t2_opt"), sol.t2_opt, t2, 1e-3);
                if let Some(t1c) = t1c {
                    c.within(&format!("row {label} T1_crit"), sol.t1_crit, t1c, 1e-3);
                }
            }
            Err(e) => c.check(format!("row {label}: {e}"), false),
        }
    }
    let row_c = optimize_two(1.0, 317.0 / 76.0, 3.0, 1.0, 1.0, &opts).map(|s| s.regime);
    c.check("row c is regime 2", row_c == Ok(TwoRegime::Regime2));
    let elapsed = start.elapsed();
    c.check(
        format!("runtime {elapsed:?} < 1 s"),
        elapsed < Duration::from_secs(1),
    );
}

fn critical_durations(c: &mut Criterion) {
    c.within(
        "T2_crit(1,1,1,1)",
        critical_duration_2_second(1.0, 1.0, 1.0, 1.0).unwrap(),
        0.3,
        1e-10,
    );
    c.within(
        "T1_crit(1,1,1,1)",
        critical_duration_2_first(1.0, 1.0, 1.0, 1.0).unwrap(),
        7.0 / 6.0,
        1e-10,
    );
    let sol = optimize_two(1.0, 7.0 / 6.0, 1.0, 1.0, 1.0, &DescentOptions::default()).unwrap();
    c.within("t1_opt at T = 7/6", sol.t1_opt, 0.0, 1e-8);
    c.within("t2_opt at T = 7/6", sol.t2_opt, 0.5, 1e-8);
}

fn one_measure_boundary(c: &mut Criterion) {
    let t = |v0: f64| optimal_instant_1(1.0, 1.0, v0, 1.0).unwrap().t_opt;
    c.check("t_opt = 0 at v0 = sqrt2 + 1e-9", t(SQRT_2 + 1e-9) == 0.0);
    c.check("t_opt > 0 at v0 = sqrt2 - 1e-6", t(SQRT_2 - 1e-6) > 0.0);
    let cross = bisect_root(|v0| if t(v0) > 0.0 { 1.0 } else { -1.0 }, 0.0, 3.0, 1e-12).unwrap();
    c.within("crossover v0", cross, SQRT_2, 1e-8);
}

fn cubic_identity(c: &mut Criterion) {
    let k = cubic_coeffs(1.0, 1.0, 1.0).unwrap();
    let ints = [k.a, k.b, k.c, k.d];
    let exact = ints.iter().all(|x| x.fract() == 0.0);
    c.check(
        format!("coefficients {ints:?} = (-12, -40, -25, 24)"),
        ints == [-12.0, -40.0, -25.0, 24.0],
    );
    // 8 P(1/2) = a + 2b + 4c + 8d over the integers.
    let [a, b, cc, d] = ints.map(|x| x as i64);
    c.check(
        "P(1/2) = 0 exactly",
        exact && a + 2 * b + 4 * cc + 8 * d == 0,
    );
    c.within(
        "t21_crit(1,1,1,1)",
        t21_crit(1.0, 1.0, 1.0, 1.0).unwrap(),
        0.5,
        1e-10,
    );
}

fn oracle_equivalence(c: &mut Criterion) {
    let start = Instant::now();
    match oracle_check(OracleKind::One, 1e-5, 200, 2024) {
        Ok(r) => c.check(
            format!(
                "one-measure max discrepancy {:.3e} < 1e-4 over 200",
                r.max_discrepancy
            ),
            r.max_discrepancy < 1e-4,
        ),
        Err(e) => c.check(format!("one-measure oracle: {e}"), false),
    }
    match oracle_check(OracleKind::Two, 2e-3, 100, 2024) {
        Ok(r) => {
            c.check(
                format!(
                    "two-measure max discrepancy {:.3e} < 4e-3 over 100",
                    r.max_discrepancy
                ),
                r.max_discrepancy < 4e-3,
            );
            let bad: Vec<_> = r.cases.iter().filter(|k| k.cwlm_clusters != 1).collect();
            c.check(
                format!(
                    "exactly one lattice CWLM cluster in every instance ({} failures)",
                    bad.len()
                ),
                bad.is_empty(),
            );
            let spread = r
                .cases
                .iter()
                .map(|k| k.cwlm_spread_steps)
                .fold(0.0, f64::max);
            c.check(
                format!("lattice CWLM nodes within 2 steps of the optimum (max {spread:.2})"),
                spread <= 2.0,
            );
        }
        Err(e) => c.check(format!("two-measure oracle: {e}"), false),
    }
    let elapsed = start.elapsed();
    c.check(
        format!("runtime {elapsed:?} < 2 min"),
        elapsed < Duration::from_secs(120),
    );
}

fn descent_convergence(c: &mut Criterion) {
    let mut s = spec(
        SweepKind::DescentStats,
        &[("sigma2", 1.0), ("T", 10.0)],
        vec![],
    );
    s.trials = Some(100);
    s.seed = 7;
    match descent_statistics(&s) {
        Ok(r) => {
            c.check(format!("{} runs", r.rows.len()), r.rows.len() == 100);
            let worst = r.summary["max_iterations_to_2e-6"];
            c.check(
                format!("steps < 2e-6 within 10 iterations (worst {worst})"),
                worst <= 10.0,
            );
            let dec = r.summary["min_cost_decrement"];
            c.check(
                format!("cost never increases (min decrement {dec:e})"),
                dec >= 0.0,
            );
            let gap = r.summary["max_abs_final_gap"];
            c.check(format!("final |I1 - I2| = {gap:.2e} < 1e-6"), gap < 1e-6);
        }
        Err(e) => c.check(format!("descent statistics: {e}"), false),
    }
}

fn bounds(c: &mut Criterion) {
    let s = spec(
        SweepKind::Bounds1,
        &[("sigma2", 1.0), ("T", 1.0)],
        vec![
            Axis::range("v0", 0.0, 5.0, 50),
            Axis::range("v1", 0.0, 5.0, 50),
        ],
    );
    let r = bounds_comparison(&s).unwrap();
    let lower_ok = r.rows.iter().all(|(_, o)| o[3] < o[2]);
    let upper_ok = r.rows.iter().all(|(_, o)| o[2] <= o[4]);
    c.check(format!("{} cells", r.rows.len()), r.rows.len() == 2500);
    c.check("lower bound strictly below J(t_opt)", lower_ok);
    c.check("J(t_opt) <= v0 T + sigma2 T^2 / 2", upper_ok);
}

fn gain_maxima(c: &mut Criterion) {
    let start = Instant::now();
    let s = spec(
        SweepKind::Gain1,
        &[("sigma2", 1.0), ("T", 1.0)],
        vec![
            Axis::range("v0", 0.0, 5.0, 101),
            Axis::range("v1", 0.0, 5.0, 101),
        ],
    );
    let g1 = gain_one_measure(&s).unwrap().summary["max_gain"];
    c.within("one-measure max gain", g1, 0.81, 0.03);
    let s = spec(
        SweepKind::Gain2,
        &[("sigma2", 1.0), ("T", 1.0)],
        vec![
            Axis::values("v0", vec![0.0, 2.0, 5.0]),
            Axis::range("v1", 0.0, 5.0, 101),
            Axis::range("v2", 0.0, 5.0, 101),
        ],
    );
    match gain_two_measures(&s) {
        Ok(r) => {
            c.within("two-measure max gain", r.summary["max_gain"], 0.86, 0.03);
            c.check("no negative gain", r.summary["min_gain"] >= -1e-12);
        }
        Err(e) => c.check(format!("two-measure gain sweep: {e}"), false),
    }
    let elapsed = start.elapsed();
    c.check(
        format!("runtime {elapsed:?} < 5 min"),
        elapsed < Duration::from_secs(300),
    );
}

fn window_periodicity(c: &mut Criterion) {
    let t = 7.0 / 6.0;
    let it = iterate_windows(1.0, t, 1.0, 0.5, 200).unwrap();
    c.within("v(0)", it.v0_sequence[0], 0.5, 0.0);
    c.within("v(T)", it.v0_sequence[1], 7.0 / 6.0, 1e-12);
    c.within("v(2T)", it.v0_sequence[2], 1.5415, 1e-3);
    match it.settled_at {
        Some(k) => {
            c.check(
                format!("settles at window {k}, zero for 50 more"),
                k + 50 <= 200,
            );
            c.check(
                "zero once settled",
                it.relative_instants[k..].iter().all(|&x| x == 0.0),
            );
        }
        None => c.check("relative instants reach 0", false),
    }
    let vs = window_v0_stationary(1.0, t, 1.0).unwrap();
    c.within("v0_stationary", vs, 1.8109, 1e-4);
    c.within("limit of v(kT)", *it.v0_sequence.last().unwrap(), vs, 1e-8);
}

fn property_suites(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let t_opt = |s, t, v0, v1| optimal_instant_1(s, t, v0, v1).unwrap().t_opt;

    let (mut mono_t, mut flat, mut concave, mut incr) = (true, true, true, true);
    let (mut mono_v0, mut mono_v1, mut asym, mut scaling) = (true, true, true, true);
    for _ in 0..500 {
        let s = rng.random_range(0.2..3.0);
        let v0 = rng.random_range(0.0..4.0);
        let v1 = rng.random_range(0.0..4.0);
        let tc = critical_duration_1(s, v0, v1).unwrap();
        let t_max = 2.0 * tc + 4.0;
        let grid: Vec<f64> = (1..=200).map(|i| t_max * i as f64 / 200.0).collect();
        let vals: Vec<f64> = grid.iter().map(|&t| t_opt(s, t, v0, v1)).collect();
        mono_t &= vals.windows(2).all(|w| w[1] >= w[0]);
        flat &= grid.iter().zip(&vals).all(|(&t, &x)| t > tc || x == 0.0);
        let above: Vec<f64> = (0..100).map(|i| tc + 1e-3 + 0.05 * i as f64).collect();
        let va: Vec<f64> = above.iter().map(|&t| t_opt(s, t, v0, v1)).collect();
        incr &= va.windows(2).all(|w| w[1] > w[0]);
        concave &= va.windows(3).all(|w| w[2] - 2.0 * w[1] + w[0] <= 1e-9);

        let t = rng.random_range(0.1..5.0);
        let along_v0: Vec<f64> = (0..50).map(|i| t_opt(s, t, 0.1 * i as f64, v1)).collect();
        mono_v0 &= along_v0.windows(2).all(|w| w[1] <= w[0]);
        let along_v1: Vec<f64> = (0..50).map(|i| t_opt(s, t, v0, 0.1 * i as f64)).collect();
        mono_v1 &= along_v1.windows(2).all(|w| w[1] >= w[0]);

        let x = t_opt(s, t, v0, v1);
        asym &= x == 0.0 || x < (s * t + v1 - v0) / (2.0 * s);
        for alpha in [0.1, 2.0, 10.0] {
            let y = t_opt(s / alpha, alpha * t, v0, v1);
            scaling &= (y - alpha * x).abs() <= 1e-9 * (alpha * x).abs().max(1e-300)
                || (x == 0.0 && y == 0.0);
        }
    }
    c.check("t_opt nondecreasing in T", mono_t);
    c.check("t_opt = 0 on (0, T_crit]", flat);
    c.check("t_opt strictly increasing above T_crit", incr);
    c.check("t_opt concave above T_crit", concave);
    c.check("t_opt nonincreasing in v0", mono_v0);
    c.check("t_opt nondecreasing in v1", mono_v1);
    c.check("t_opt below its asymptote", asym);
    c.check("scaling equivariance", scaling);

    let (mut far, mut limit) = (true, true);
    for _ in 0..200 {
        let s = rng.random_range(0.2..3.0);
        let v0 = rng.random_range(0.0..4.0);
        let v1 = rng.random_range(0.0..4.0);
        let t = 1e6;
        far &= (t_opt(s, t, v0, v1) - (s * t + v1 - v0) / (2.0 * s)).abs() < 1e-3;
        let t = rng.random_range(0.1..5.0);
        let lim = ((2.0 * s * t - v0) / (3.0 * s)).max(0.0);
        limit &= (t_opt(s, t, v0, 1e9) - lim).abs() < 1e-4;
    }
    c.check("asymptote reached at T = 1e6", far);
    c.check("v1 = 1e9 matches the no-information limit", limit);

    // Optimal instants across the regime boundaries.
    let mut continuity = true;
    let mut at_t1c = true;
    let opts = DescentOptions::default();
    for _ in 0..5 {
        let s = rng.random_range(0.5..2.0);
        let (v0, v1, v2) = (
            rng.random_range(0.2..3.0),
            rng.random_range(0.2..3.0),
            rng.random_range(0.2..3.0),
        );
        let t2c = critical_duration_2_second(s, v0, v1, v2).unwrap();
        let t1c = critical_duration_2_first(s, v0, v1, v2).unwrap();
        let ts: Vec<f64> = (1..=600).map(|i| (t1c + 1.0) * i as f64 / 600.0).collect();
        let sols: Vec<(f64, f64)> = ts
            .iter()
            .map(|&t| {
                let x = optimize_two(s, t, v0, v1, v2, &opts).unwrap();
                (x.t1_opt, x.t2_opt)
            })
            .collect();
        continuity &= sols
            .windows(2)
            .all(|w| w[1].0 >= w[0].0 - 1e-9 && w[1].1 >= w[0].1 - 1e-9);
        for edge in [t2c, t1c] {
            let a = optimize_two(s, edge * (1.0 - 1e-7), v0, v1, v2, &opts).unwrap();
            let b = optimize_two(s, edge * (1.0 + 1e-7), v0, v1, v2, &opts).unwrap();
            continuity &= (a.t1_opt - b.t1_opt).abs() < 1e-3 && (a.t2_opt - b.t2_opt).abs() < 1e-3;
        }
        let x = optimize_two(s, t1c, v0, v1, v2, &opts).unwrap();
        let t21 = t21_crit(s, v0, v1, v2).unwrap();
        at_t1c &= x.t1_opt.abs() < 1e-6 && (x.t2_opt - t21).abs() < 1e-6;
    }
    c.check(
        "optimal instants nondecreasing and continuous in T",
        continuity,
    );
    c.check("schedule at T1_crit is (0, t21_crit)", at_t1c);

    let (mut d1, mut d2, mut stationary) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..1000 {
        let s = rng.random_range(0.2..3.0);
        let t = rng.random_range(0.2..5.0);
        let (v0, v1, v2) = (
            rng.random_range(0.0..4.0),
            rng.random_range(0.0..4.0),
            rng.random_range(0.0..4.0),
        );
        let x = rng.random_range(1e-3..t - 1e-3);
        let fd = finite_diff(|y| one_measure_cost(s, t, v0, v1, y).unwrap(), x, 1e-6).unwrap();
        d1 = d1.max((fd - one_measure_cost_derivative(s, t, v0, v1, x).unwrap()).abs());

        let t2 = rng.random_range(2e-3..t - 1e-3);
        let t1 = rng.random_range(1e-3..t2 - 1e-3);
        let fd = finite_diff(
            |y| two_measure_cost(s, t, v0, v1, v2, y, t2).unwrap(),
            t1,
            1e-6,
        )
        .unwrap();
        d2 = d2.max((fd - dj_dt1(s, t, v0, v1, v2, t1, t2).unwrap()).abs());

        let sol = optimal_instant_1(s, t, v0, v1).unwrap();
        if sol.t_opt > 0.0 {
            stationary = stationary.max(
                one_measure_cost_derivative(s, t, v0, v1, sol.t_opt)
                    .unwrap()
                    .abs(),
            );
        }
    }
    c.check(
        format!("one-measure derivative vs finite difference: {d1:.2e} < 1e-5"),
        d1 < 1e-5,
    );
    c.check(
        format!("dJ/dt1 vs finite difference: {d2:.2e} < 1e-5"),
        d2 < 1e-5,
    );
    c.check(
        format!("derivative at interior t_opt: {stationary:.2e} < 1e-8"),
        stationary < 1e-8,
    );
}

fn main() {
    type Check = fn(&mut Criterion);
    let criteria: [(&str, Check); 10] = [
        ("worked-example table", worked_examples),
        ("critical durations", critical_durations),
        ("one-measure boundary", one_measure_boundary),
        ("cubic identity", cubic_identity),
        ("oracle equivalence", oracle_equivalence),
        ("descent convergence", descent_convergence),
        ("bounds", bounds),
        ("gain maxima", gain_maxima),
        ("window periodicity", window_periodicity),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let mut c = Criterion::default();
        run(&mut c);
        let verdict = if c.passed() { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {verdict}: {name}", i + 1);
        for (what, ok) in &c.checks {
            if !ok {
                println!("    failed: {what}");
            }
        }
        failed += usize::from(!c.passed());
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
