//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hyperratak::driver::{drummond_cursor, pfq, transform_limit, weniger_cursor, Cursor, EvalOptions, Method};
use hyperratak::experiments::{bench, bench_params, median, unstable_demo, Route};
use hyperratak::grid::{run_grid, worker_threads, GridJob, GridSpec, Rect};
use hyperratak::padeexp::{pade_exp, unitarity_defect};
use hyperratak::poles::{
    build_pencil, check_report, classical_roots, reciprocal_poles, root_set_distance, terminating_identity_check,
    DenominatorKind, PoleCase,
};
use hyperratak::reference::{drummond_direct, oracle_pfq, weniger_direct, OracleConfig, OracleMode};
use hyperratak::scalar::{cabs, cx_from_f64, rel_err};
use hyperratak::{Cx, Dd, HyperParams, OmegaKind, Qd, Real};

const EULER: f64 = 0.461455316241865234;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn c(x: f64) -> Cx<f64> {
    Cx::new(x, 0.0)
}

fn euler_params() -> HyperParams<f64> {
    HyperParams::real(&[1.0, 1.0], &[]).unwrap()
}

/// Median wall time of `runs` calls after one warm-up call.
fn timed<R>(runs: usize, mut f: impl FnMut() -> R) -> (R, f64) {
    let mut last = f();
    let mut times = Vec::with_capacity(runs);
    for _ in 0..runs {
        let t0 = Instant::now();
        last = f();
        times.push(t0.elapsed().as_secs_f64());
    }
    (last, median(times))
}

fn euler_criterion(method: Method, rel_tol: f64, k_range: std::ops::RangeInclusive<usize>) -> Outcome {
    let opts = EvalOptions { method, ..Default::default() };
    let p = euler_params();
    let (r, secs) = timed(11, || pfq(&p, c(-2.0), &opts).unwrap());
    let err = rel_err(r.value, c(EULER));
    outcome(
        r.converged && err <= rel_tol && k_range.contains(&r.k) && secs < 1e-3,
        format!("rel_err {err:.2e}, k = {}, {:.1} us", r.k, secs * 1e6),
    )
}

fn criterion_1() -> Outcome {
    euler_criterion(Method::FactorialLevin, 5e-15, 25..=60)
}

fn criterion_2() -> Outcome {
    euler_criterion(Method::Drummond, 1e-13, 100..=200)
}

fn criterion_3() -> Outcome {
    let p = euler_params();
    let rows = unstable_demo(&p, c(-2.0), 200).unwrap();
    let mut parts = Vec::new();
    let mut pass = true;
    for method in [Method::Drummond, Method::FactorialLevin] {
        let worst_direct = rows
            .iter()
            .filter(|r| r.method == method && r.route == Route::Direct)
            .map(|r| r.true_rel_err)
            .filter(|e| e.is_finite())
            .fold(0.0, f64::max);
        let stable = transform_limit(&p, c(-2.0), &EvalOptions { method, ..Default::default() }).unwrap();
        let stable_err = rel_err(stable.value, c(EULER));
        pass &= worst_direct > 1.0 && stable_err <= 1e-12;
        parts.push(format!("{method}: largest finite direct error {worst_direct:.1e}, recurrence {stable_err:.1e} at k = {}", stable.k));
    }
    outcome(pass, parts.join("; "))
}

fn criterion_4() -> Outcome {
    let tol = 8.0 * f64::EPSILON;
    let t = 1e6;
    let (r, secs) = timed(3, || pade_exp(Cx::new(0.0, t), tol, 1 << 31).unwrap());
    let err = (r.value - Cx::new(t.cos(), t.sin())).norm();
    let defect = unitarity_defect(r.value);
    let fast = err <= 1e-12 && defect <= 1e-11 && secs < 0.1;

    let t0 = Instant::now();
    let big = pade_exp(Cx::new(0.0, 1e9), tol, 1 << 31).unwrap();
    let big_secs = t0.elapsed().as_secs_f64();
    let big_err = (big.value - Cx::new(0.8378871813609, 0.5458434494543802)).norm();
    let big_defect = unitarity_defect(big.value);
    let k_ref = 500_004_886.0;
    let k_ok = (big.k as f64 - k_ref).abs() <= 0.01 * k_ref;
    let slow = big.converged && big_err <= 1e-11 && big_defect <= 5e-12 && k_ok && big_secs < 30.0;
    outcome(
        fast && slow,
        format!(
            "1e6 i: err {err:.1e}, defect {defect:.1e}, {:.1} ms; 1e9 i: err {big_err:.1e}, defect {big_defect:.1e}, k = {}, {big_secs:.1} s",
            secs * 1e3,
            big.k
        ),
    )
}

/// Best `beta` in `log e_k ~ a + b k^beta` by least squares over a grid.
fn fit_exponent(ks: &[f64], log_err: &[f64]) -> f64 {
    let mut best = (f64::INFINITY, f64::NAN);
    for i in 0..=1000 {
        let beta = 0.2 + i as f64 * 1e-3;
        let xs: Vec<f64> = ks.iter().map(|k| k.powf(beta)).collect();
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = log_err.iter().sum::<f64>() / n;
        let sxy: f64 = xs.iter().zip(log_err).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let slope = sxy / sxx;
        let sse: f64 = xs.iter().zip(log_err).map(|(x, y)| (y - my - slope * (x - mx)).powi(2)).sum();
        if sse < best.0 {
            best = (sse, beta);
        }
    }
    best.1
}

fn log_errors<C: Cursor<Qd>>(mut cursor: C, truth: Cx<Qd>, from: usize, to: usize) -> (Vec<f64>, Vec<f64>) {
    let (mut ks, mut ys) = (Vec::new(), Vec::new());
    for k in 1..=to {
        cursor.step().unwrap();
        if k >= from {
            ks.push(k as f64);
            ys.push((cabs(cursor.value() - truth) / cabs(truth)).to_f64().ln());
        }
    }
    (ks, ys)
}

fn criterion_5() -> Outcome {
    let p = euler_params().cast::<Qd>();
    let z = cx_from_f64::<Qd>(c(-1.0));
    let truth = oracle_pfq(&p, z, &OracleConfig { mode: OracleMode::StableWeniger, ..Default::default() }).unwrap();
    let levin = weniger_cursor(&p, z, &EvalOptions::<Qd>::default()).unwrap();
    let (ks, ys) = log_errors(levin, truth, 5, 30);
    let beta_r = fit_exponent(&ks, &ys);
    let drummond = drummond_cursor(&p, z, &EvalOptions::<Qd> { method: Method::Drummond, ..Default::default() }).unwrap();
    let (ks, ys) = log_errors(drummond, truth, 10, 120);
    let beta_t = fit_exponent(&ks, &ys);
    outcome(
        (0.55..=0.80).contains(&beta_r) && (0.40..=0.60).contains(&beta_t),
        format!("levin-type beta {beta_r:.3} (k 5..30), drummond beta {beta_t:.3} (k 10..120)"),
    )
}

fn criterion_6() -> Outcome {
    let mut failures = Vec::new();
    let mut reports = 0;
    let plan: [(PoleCase, &[Option<f64>]); 4] = [
        (PoleCase::Drummond0F0, &[None]),
        (PoleCase::Delta0F0, &[None]),
        (PoleCase::Drummond1F0, &[Some(0.5)]),
        (PoleCase::Delta1F0, &[Some(-0.5), Some(0.5), Some(0.9)]),
    ];
    for (case, alphas) in plan {
        for n in 0..3 {
            for k in [5, 10, 20] {
                for &alpha in alphas {
                    let r = check_report(&build_pencil(case, n, k, alpha).unwrap()).unwrap();
                    reports += 1;
                    if r.checks.is_empty() || !r.all_pass() {
                        failures.push(format!("{case} n={n} k={k}"));
                    }
                }
            }
        }
    }
    let mut worst: f64 = 0.0;
    for (case, alphas) in [(PoleCase::Drummond0F0, vec![0.0]), (PoleCase::Delta0F0, vec![0.0]), (PoleCase::Delta1F0, vec![-0.5, 0.5, 0.9])] {
        for n in 0..3 {
            for k in 1..=20 {
                for &alpha in &alphas {
                    let a = case.needs_alpha().then_some(alpha);
                    let poles = reciprocal_poles(&build_pencil(case, n, k, a).unwrap()).unwrap();
                    worst = worst.max(root_set_distance(&poles, &classical_roots(case, n, k, alpha).unwrap()));
                }
            }
        }
    }
    outcome(
        failures.is_empty() && worst <= 1e-8,
        format!("{reports} reports, {} failing {:?}; classical root distance {worst:.1e}", failures.len(), failures),
    )
}

fn criterion_7() -> Outcome {
    let zs: Vec<Cx<Qd>> = [c(-2.0), c(-1.0), Cx::new(0.5, 0.5)].into_iter().map(cx_from_f64).collect();
    let mut worst: f64 = 0.0;
    for p in [euler_params(), HyperParams::real(&[1.25], &[1.5]).unwrap()] {
        let p = p.cast::<Qd>();
        for k in 0..=10 {
            for kind in [DenominatorKind::Drummond, DenominatorKind::LevinGamma2, DenominatorKind::Levin(Qd::from_f64(2.0))] {
                worst = worst.max(terminating_identity_check(kind, &p, 0, k, &zs).unwrap());
            }
        }
    }
    outcome(worst <= 1e-12, format!("max relative deviation {worst:.1e}"))
}

fn criterion_8() -> Outcome {
    let o = EvalOptions::default();
    let e = pfq(&HyperParams::real(&[], &[]).unwrap(), c(1.0), &o).unwrap().value;
    let s = pfq(&HyperParams::real(&[0.5], &[]).unwrap(), c(0.5), &o).unwrap().value;
    let l = pfq(&HyperParams::real(&[1.0, 1.0], &[2.0]).unwrap(), c(-1.0), &o).unwrap().value;
    let errs = [rel_err(e, c(1f64.exp())), rel_err(s, c(2f64.sqrt())), rel_err(l, c(2f64.ln()))];
    outcome(
        errs.iter().all(|&x| x <= 1e-13),
        format!("e {:.1e}, sqrt 2 {:.1e}, ln 2 {:.1e}", errs[0], errs[1], errs[2]),
    )
}

fn random_params(rng: &mut ChaCha8Rng) -> (HyperParams<Dd>, Cx<Dd>) {
    let par = |rng: &mut ChaCha8Rng| {
        let count = rng.gen_range(0..=2);
        (0..count)
            .map(|_| {
                let im = if rng.gen_bool(0.5) { 0.0 } else { rng.gen_range(-1.0..1.0) };
                Cx::new(rng.gen_range(0.1..3.0), im)
            })
            .collect::<Vec<_>>()
    };
    let alpha = par(rng);
    let beta = par(rng);
    let z = loop {
        let z = Cx::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        if z.norm() > 0.05 {
            break z;
        }
    };
    (HyperParams::new(alpha, beta).unwrap().cast(), cx_from_f64(z))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let (p, z) = random_params(&mut rng);
        let opts = EvalOptions::<Dd>::default();
        let mut d = drummond_cursor(&p, z, &EvalOptions { method: Method::Drummond, ..opts }).unwrap();
        let mut w = weniger_cursor(&p, z, &opts).unwrap();
        for k in 0..=8 {
            if k > 0 {
                d.step().unwrap();
                w.step().unwrap();
            }
            let dd = drummond_direct(&p, z, 0, k, OmegaKind::ANp1).unwrap();
            let wd = weniger_direct(&p, z, 0, k, OmegaKind::ANp1, opts.gamma).unwrap();
            worst = worst.max(rel_err(d.value(), dd).to_f64()).max(rel_err(w.value(), wd).to_f64());
        }
    }
    outcome(worst <= 1e-10, format!("50 cases, k <= 8, max relative deviation {worst:.1e}"))
}

fn criterion_10() -> Outcome {
    let rows = bench(&[Method::Drummond, Method::FactorialLevin], &bench_params(), Cx::new(-10.0, 10.0), &[1000, 2000], 10).unwrap();
    let ratios: Vec<f64> = rows.iter().filter_map(|r| r.ratio).collect();
    let job = GridJob {
        params: HyperParams::real(&[1.25], &[1.5]).unwrap(),
        opts: EvalOptions::default(),
        spec: GridSpec::new(Rect { re_min: -5.0, re_max: 5.0, im_min: -5.0, im_max: 5.0 }, 101, 101).unwrap(),
        oracle: None,
    };
    let t0 = Instant::now();
    let cells = run_grid(&job).unwrap();
    let secs = t0.elapsed().as_secs_f64();
    outcome(
        ratios.len() == 2 && ratios.iter().all(|&r| r <= 2.5) && cells.len() == 101 * 101 && secs < 5.0,
        format!(
            "time(2000)/time(1000): drummond {:.2}, levin-type {:.2}; 101x101 grid {secs:.2} s on {} thread(s)",
            ratios[0],
            ratios[1],
            worker_threads()
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("2F0(1,1;-2) by the factorial Levin-type transformation", criterion_1),
        ("2F0(1,1;-2) by Drummond's transformation", criterion_2),
        ("instability of the direct forms", criterion_3),
        ("Pade approximation of exp on the imaginary axis", criterion_4),
        ("convergence-rate exponents for 2F0(1,1;-1)", criterion_5),
        ("pole placement bounds and classical roots", criterion_6),
        ("terminating-series form of the denominators", criterion_7),
        ("closed-form values", criterion_8),
        ("recurrences against direct forms", criterion_9),
        ("linear complexity", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            outcome(false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        if !o.pass {
            failed += 1;
        }
        println!("criterion {:>2} {}: {} ({})", i + 1, if o.pass { "PASS" } else { "FAIL" }, name, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
