//! Driver behaviour and oracle consistency on public entry points.

use proptest::prelude::*;

use hyperratak::driver::{pfq, pfq_guaranteed, transform_limit, EvalOptions, Method};
use hyperratak::reference::{drummond_direct, oracle_pfq, OracleConfig, OracleMode};
use hyperratak::scalar::{cabs, cx_from_f64, cx_to_f64, rel_err};
use hyperratak::{Cx, Dd, HyperParams, OmegaKind, Real};

const EULER: f64 = 0.461455316241865234;

fn c(x: f64) -> Cx<f64> {
    Cx::new(x, 0.0)
}

fn hp(a: &[f64], b: &[f64]) -> HyperParams<f64> {
    HyperParams::real(a, b).unwrap()
}

#[test]
fn closed_forms() {
    let o = EvalOptions::default();
    let sqrt2 = pfq(&hp(&[0.5], &[]), c(0.5), &o).unwrap();
    assert!(rel_err(sqrt2.value, c(2f64.sqrt())) <= 1e-13);
    let ln2 = pfq(&hp(&[1.0, 1.0], &[2.0]), c(-1.0), &o).unwrap();
    assert!(rel_err(ln2.value, c(2f64.ln())) <= 1e-13);
    let e = pfq(&hp(&[], &[]), c(1.0), &o).unwrap();
    assert!(rel_err(e.value, c(1f64.exp())) <= 1e-13);
    let zero = pfq(&hp(&[1.0, 1.0], &[]), c(0.0), &o).unwrap();
    assert_eq!((zero.value, zero.k), (c(1.0), 0));
}

#[test]
fn guaranteed_values() {
    let o = EvalOptions::default();
    let v = pfq_guaranteed(&hp(&[1.0, 1.0], &[]), c(-2.0), 53, &o).unwrap();
    assert_eq!(v.re.to_f64(), EULER);
    let v = pfq_guaranteed(&hp(&[], &[]), c(10.0), 53, &o).unwrap();
    assert!((v.re.to_f64() - 10f64.exp()).abs() <= 1e-15 * 10f64.exp());
    let v = pfq_guaranteed(&hp(&[1.0, 1.0], &[]), c(0.0), 53, &o).unwrap();
    assert_eq!(cx_to_f64(v), c(1.0));
}

/// The double-precision transformation is within 100 eps of the guaranteed
/// value on the acceptance inputs.
#[test]
fn double_precision_refines_monotonically() {
    let cases: Vec<(HyperParams<f64>, Cx<f64>)> = vec![
        (hp(&[1.0, 1.0], &[]), c(-2.0)),
        (hp(&[1.0, 1.0], &[]), c(-1.0)),
        (hp(&[], &[]), c(1.0)),
        (hp(&[0.5], &[]), c(0.5)),
        (hp(&[1.0, 1.0], &[2.0]), c(-1.0)),
        (hp(&[1.25], &[1.5]), Cx::new(-3.0, 2.0)),
    ];
    for (p, z) in cases {
        // Drummond's transformation converges only algebraically on the
        // monotone 1F0 series, so no precision tier reaches its tolerance.
        let methods: &[Method] = if p.p() == 1 && p.q() == 0 { &[Method::FactorialLevin] } else { &[Method::FactorialLevin, Method::Drummond] };
        for &method in methods {
            let o = EvalOptions { method, ..Default::default() };
            let g = cx_to_f64(pfq_guaranteed(&p, z, 53, &o).unwrap());
            let t = transform_limit(&p, z, &o).unwrap();
            assert!(cabs(t.value - g) <= 100.0 * f64::EPSILON * cabs(g), "{method} {p:?} {z}: {} vs {g}", t.value);
        }
    }
}

/// Double precision never gets Drummond's direct form as close to the
/// limit as the recurrence gets at its stopping order.
#[test]
fn direct_form_is_a_foil() {
    let p = hp(&[1.0, 1.0], &[]);
    let o = EvalOptions { method: Method::Drummond, ..Default::default() };
    let stable = transform_limit(&p, c(-2.0), &o).unwrap();
    let stable_err = rel_err(stable.value, c(EULER));
    let best_direct = (0..=200)
        .filter_map(|k| drummond_direct(&p, c(-2.0), 0, k, OmegaKind::ANp1).ok())
        .map(|v| rel_err(v, c(EULER)))
        .fold(f64::INFINITY, f64::min);
    assert!(best_direct > stable_err, "direct {best_direct:e} stable {stable_err:e}");
}

fn arb_case() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Cx<f64>)> {
    let par = || prop::collection::vec(0.1f64..3.0, 0..=2);
    (par(), par(), -4.0f64..4.0, -4.0f64..4.0).prop_map(|(a, b, re, im)| (a, b, Cx::new(re, im)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn converged_results_satisfy_the_stopping_rule((a, b, z) in arb_case(), drummond in any::<bool>()) {
        let method = if drummond { Method::Drummond } else { Method::FactorialLevin };
        let o = EvalOptions { method, k_max: 5000, ..Default::default() };
        let p = hp(&a, &b);
        if let Ok(r) = pfq(&p, z, &o) {
            if r.converged && r.k > 0 {
                // max(|T^(k)|, |T^(k-1)|) <= |T^(k)| + err_est
                prop_assert!(r.err_est <= o.tol * (cabs(r.value) + r.err_est));
                let again = pfq(&p, z, &o).unwrap();
                prop_assert_eq!(again.value.re.to_bits(), r.value.re.to_bits());
                prop_assert_eq!(again.value.im.to_bits(), r.value.im.to_bits());
                prop_assert_eq!(again.k, r.k);
            }
        }
    }

    #[test]
    fn oracle_modes_agree(
        a in prop::collection::vec(0.1f64..3.0, 0..=2),
        b in prop::collection::vec(0.1f64..3.0, 1..=2),
        re in -0.7f64..0.7,
        im in -0.7f64..0.7,
    ) {
        prop_assume!(a.len() <= b.len() + 1);
        let z = Cx::new(re, im);
        prop_assume!(z.norm() > 0.01 && z.norm() < 0.7);
        let p = hp(&a, &b).cast::<Dd>();
        let zd = cx_from_f64::<Dd>(z);
        let m = oracle_pfq(&p, zd, &OracleConfig { mode: OracleMode::Maclaurin, ..Default::default() }).unwrap();
        let w = oracle_pfq(&p, zd, &OracleConfig { mode: OracleMode::StableWeniger, ..Default::default() }).unwrap();
        prop_assert!(rel_err(m, w) <= Dd::from_f64(1e-25), "{:?} {:?} {}", a, b, z);
    }
}
