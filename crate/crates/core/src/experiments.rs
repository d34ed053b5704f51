//! Instability demonstration and the cursor timing harness.

use std::time::Instant;

use crate::driver::{drummond_cursor, weniger_cursor, Cursor, EvalOptions, Method, Status};
use crate::hyperterm::{HyperParams, OmegaKind};
use crate::multifloat::Dd;
use crate::reference::{drummond_direct, oracle_pfq, weniger_direct, OracleConfig};
use crate::scalar::{cabs, cx_from_f64, cx_to_f64, Cx};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Closed-form transformation with explicit binomial sums.
    Direct,
    /// Stabilized linear-complexity recurrences.
    Recurrence,
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::Direct => "direct",
            Route::Recurrence => "recurrence",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DemoRow {
    pub method: Method,
    pub route: Route,
    pub k: usize,
    pub value: Cx<f64>,
    /// `|T^(k) - T^(k-1)| / |T^(k)|`; NaN at `k = 0`.
    pub approx_rel_err: f64,
    pub true_rel_err: f64,
}

pub const DEMO_HEADER: [&str; 7] = ["method", "route", "k", "re", "im", "approx_rel_err", "true_rel_err"];

fn rel(a: Cx<f64>, b: Cx<f64>) -> f64 {
    cabs(a - b) / cabs(b)
}

fn push_series(rows: &mut Vec<DemoRow>, method: Method, route: Route, values: &[Cx<f64>], truth: Cx<f64>) {
    for (k, &v) in values.iter().enumerate() {
        let approx = if k == 0 { f64::NAN } else { cabs(v - values[k - 1]) / cabs(v) };
        rows.push(DemoRow { method, route, k, value: v, approx_rel_err: approx, true_rel_err: rel(v, truth) });
    }
}

/// Per-`k` values and errors of both transformations (`omega = a_(n+1)`,
/// `gamma = 2`, `n = 0`) in double precision, by the direct formulas and by
/// the recurrences, for `k = 0..=k_max`. Values that cannot be formed are NaN.
pub fn unstable_demo(params: &HyperParams<f64>, z: Cx<f64>, k_max: usize) -> Result<Vec<DemoRow>> {
    let truth = cx_to_f64(oracle_pfq::<Dd>(&params.cast(), cx_from_f64(z), &OracleConfig::default())?);
    let nan = Cx::new(f64::NAN, f64::NAN);
    let omega = OmegaKind::ANp1;
    let gamma = 2.0;
    let mut rows = Vec::with_capacity(4 * (k_max + 1));
    for method in [Method::Drummond, Method::FactorialLevin] {
        let direct: Vec<_> = (0..=k_max)
            .map(|k| match method {
                Method::Drummond => drummond_direct(params, z, 0, k, omega),
                Method::FactorialLevin => weniger_direct(params, z, 0, k, omega, gamma),
            })
            .map(|r| r.unwrap_or(nan))
            .collect();
        push_series(&mut rows, method, Route::Direct, &direct, truth);

        let opts = EvalOptions { method, omega, gamma, ..Default::default() };
        let mut stable = Vec::with_capacity(k_max + 1);
        match method {
            Method::Drummond => trace(&mut drummond_cursor(params, z, &opts)?, k_max, &mut stable),
            Method::FactorialLevin => trace(&mut weniger_cursor(params, z, &opts)?, k_max, &mut stable),
        }
        push_series(&mut rows, method, Route::Recurrence, &stable, truth);
    }
    Ok(rows)
}

fn trace<C: Cursor<f64>>(c: &mut C, k_max: usize, out: &mut Vec<Cx<f64>>) {
    out.push(c.value());
    while out.len() <= k_max {
        if c.status() == Status::Overflow || c.step().is_err() {
            out.push(Cx::new(f64::NAN, f64::NAN));
        } else {
            out.push(c.value());
        }
    }
}

/// Seconds to advance a fresh cursor from `k = 0` to `k`; construction is
/// excluded.
pub fn time_cursor(method: Method, params: &HyperParams<f64>, z: Cx<f64>, k: usize) -> Result<f64> {
    fn run<C: Cursor<f64>>(mut c: C, k: usize) -> Result<f64> {
        let t0 = Instant::now();
        for _ in 0..k {
            c.step()?;
        }
        let dt = t0.elapsed().as_secs_f64();
        std::hint::black_box(c.value());
        Ok(dt)
    }
    let opts = EvalOptions { method, ..Default::default() };
    match method {
        Method::Drummond => run(drummond_cursor(params, z, &opts)?, k),
        Method::FactorialLevin => run(weniger_cursor(params, z, &opts)?, k),
    }
}

pub fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BenchRow {
    pub method: Method,
    pub k: usize,
    pub median_seconds: f64,
    /// Median time relative to the previous order in the list.
    pub ratio: Option<f64>,
}

pub const BENCH_HEADER: [&str; 5] = ["method", "k", "median_seconds", "seconds_per_step", "ratio"];

/// Median of `runs` timings of [`time_cursor`] at each order in `ks`.
pub fn bench(methods: &[Method], params: &HyperParams<f64>, z: Cx<f64>, ks: &[usize], runs: usize) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &method in methods {
        let mut prev: Option<f64> = None;
        for &k in ks {
            let times = (0..runs.max(1)).map(|_| time_cursor(method, params, z, k)).collect::<Result<Vec<_>>>()?;
            let m = median(times);
            rows.push(BenchRow { method, k, median_seconds: m, ratio: prev.map(|p| m / p) });
            prev = Some(m);
        }
    }
    Ok(rows)
}

/// Fixed input of the timing harness: `1F1(5/4; 3/2; z)`.
pub fn bench_params() -> HyperParams<f64> {
    HyperParams::real(&[1.25], &[1.5]).expect("valid parameters")
}

pub fn bench_z() -> Cx<f64> {
    Cx::new(-10.0, 10.0)
}
